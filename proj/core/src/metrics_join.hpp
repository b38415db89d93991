#pragma once

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tnli/corpus.hpp"
#include "tnli/error.hpp"
#include "tnli/metrics.hpp"

namespace tnli::detail {

inline std::unordered_map<std::string_view, const Example*> index_gold(std::span<const Example> gold) {
  std::unordered_map<std::string_view, const Example*> index;
  index.reserve(gold.size());
  for (const auto& g : gold) {
    if (!index.emplace(g.id, &g).second) throw Error("duplicate gold example id " + g.id);
  }
  return index;
}

// Gold example for each prediction, in prediction order. Throws JoinError
// listing every prediction id without a gold counterpart.
inline std::vector<const Example*> join_strict(std::span<const Prediction> predictions,
                                               std::span<const Example> gold) {
  const auto index = index_gold(gold);
  std::vector<const Example*> out;
  std::vector<std::string> unmatched;
  out.reserve(predictions.size());
  for (const auto& p : predictions) {
    auto it = index.find(p.example_id);
    if (it == index.end()) {
      unmatched.push_back(p.example_id);
      out.push_back(nullptr);
    } else {
      out.push_back(it->second);
    }
  }
  if (!unmatched.empty()) throw JoinError(std::move(unmatched));
  return out;
}

}  // namespace tnli::detail
