#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tnli/types.hpp"

namespace tnli {

// Position of an entry in its Lexicon (file order).
using LexemeId = std::uint32_t;

struct LexemeEntry {
  std::string lemma;
  PosClass pos_class = PosClass::profession;
  Partition partition = Partition::ind;
  // Sorted by feature, one surface string per feature.
  std::vector<std::pair<Feature, std::string>> forms;

  bool is_entity() const { return is_entity_class(pos_class); }

  // nullptr when the entry has no form for `f`.
  const std::string* form(Feature f) const;
};

// One (lexeme, feature) pair realized by a surface string.
struct FormRef {
  LexemeId lexeme;
  Feature feature;

  friend bool operator==(const FormRef&, const FormRef&) = default;
};

// Immutable, validated word list. Safe for concurrent reads.
class Lexicon {
 public:
  // Validates the type invariants; throws ValidationError listing every
  // violation (entry identifier + rule).
  static Lexicon from_entries(std::vector<LexemeEntry> entries);

  std::span<const LexemeEntry> entries() const { return entries_; }
  const LexemeEntry& entry(LexemeId id) const { return entries_.at(id); }
  std::size_t size() const { return entries_.size(); }

  // Ids of the given class and partition, in file order.
  std::span<const LexemeId> members(PosClass c, Partition p) const;

  std::optional<LexemeId> find(std::string_view lemma, PosClass c) const;

  // Every (lexeme, feature) realized by `surface`; empty for unknown tokens.
  std::span<const FormRef> lookup(std::string_view surface) const;

  bool is_entity_token(std::string_view token) const;

  // Entity lexemes realized by `token` (any number, either partition).
  std::vector<LexemeId> entity_lexemes(std::string_view token) const;

 private:
  Lexicon() = default;

  std::vector<LexemeEntry> entries_;
  std::map<std::string, std::vector<FormRef>, std::less<>> surface_index_;
  std::map<std::pair<PosClass, Partition>, std::vector<LexemeId>> members_;
};

// Parses the line-oriented lexicon format (docs/formats.md). Throws
// ParseError for malformed lines and ValidationError for invariant failures.
Lexicon parse_lexicon(std::string_view text, std::string_view source = "<memory>");
Lexicon load_lexicon(const std::filesystem::path& path);

// Stored surface form; throws MissingFormError naming entry and feature.
const std::string& inflect(const LexemeEntry& entry, Feature feature);

bool is_entity_token(const Lexicon& lexicon, std::string_view token);

}  // namespace tnli
