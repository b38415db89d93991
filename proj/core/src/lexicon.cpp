#include "tnli/lexicon.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "text_util.hpp"
#include "tnli/error.hpp"

namespace tnli {
namespace {

std::string entry_name(const LexemeEntry& e) {
  std::string s(to_string(e.pos_class));
  s += ':';
  s += e.lemma;
  s += '@';
  s += to_string(e.partition);
  return s;
}

std::vector<Feature> required_features(PosClass c) {
  switch (c) {
    case PosClass::profession:
    case PosClass::location:
      return {Feature::singular, Feature::plural};
    case PosClass::transitive_verb:
      return {Feature::past, Feature::passive_participle};
    case PosClass::intransitive_verb:
      return {Feature::past};
    default:
      return {Feature::base};
  }
}

}  // namespace

const std::string* LexemeEntry::form(Feature f) const {
  for (const auto& [feature, surface] : forms) {
    if (feature == f) return &surface;
  }
  return nullptr;
}

Lexicon Lexicon::from_entries(std::vector<LexemeEntry> entries) {
  std::vector<Issue> issues;
  if (entries.empty()) issues.push_back({"lexicon", "no-entries", "no entries"});

  std::map<std::pair<std::string, PosClass>, std::size_t> seen;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto& e = entries[i];
    std::sort(e.forms.begin(), e.forms.end());
    const std::string name = entry_name(e);

    if (!detail::is_clean_token(e.lemma)) {
      issues.push_back({name, "surface-form", "lemma must be lowercase and whitespace-free"});
    }
    for (std::size_t f = 0; f < e.forms.size(); ++f) {
      const auto& [feature, surface] = e.forms[f];
      if (!feature_allowed(e.pos_class, feature)) {
        issues.push_back({name, "invalid-feature",
                          std::string(to_string(feature)) + " is not a feature of " +
                              std::string(to_string(e.pos_class))});
      }
      if (f > 0 && e.forms[f - 1].first == feature) {
        issues.push_back({name, "duplicate-feature", std::string(to_string(feature))});
      }
      if (!detail::is_clean_token(surface)) {
        issues.push_back({name, "surface-form",
                          "form '" + surface + "' must be nonempty, lowercase, without whitespace"});
      }
    }
    for (Feature f : required_features(e.pos_class)) {
      if (e.form(f) == nullptr) {
        issues.push_back({name, "missing-form", "no " + std::string(to_string(f)) + " form"});
      }
    }

    const auto key = std::make_pair(e.lemma, e.pos_class);
    if (auto it = seen.find(key); it != seen.end()) {
      const auto& first = entries[it->second];
      if (first.partition == e.partition) {
        issues.push_back({name, "duplicate-entry", "lemma and class already listed"});
      } else {
        issues.push_back({name, "partition-overlap",
                          "listed in both partitions (also " + entry_name(first) + ")"});
      }
    } else {
      seen.emplace(key, i);
    }
  }

  Lexicon lex;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto id = static_cast<LexemeId>(i);
    const auto& e = entries[i];
    lex.members_[{e.pos_class, e.partition}].push_back(id);
    for (const auto& [feature, surface] : e.forms) {
      auto& refs = lex.surface_index_[surface];
      const FormRef ref{id, feature};
      if (std::find(refs.begin(), refs.end(), ref) == refs.end()) refs.push_back(ref);
    }
  }

  // Surface forms may realize several features of one lexeme, or even several
  // lexemes, but never lexemes from both partitions.
  for (const auto& [surface, refs] : lex.surface_index_) {
    std::set<Partition> partitions;
    std::set<std::pair<std::string, PosClass>> keys;
    for (const auto& ref : refs) {
      partitions.insert(entries[ref.lexeme].partition);
      keys.insert({entries[ref.lexeme].lemma, entries[ref.lexeme].pos_class});
    }
    // A single lemma listed twice was already reported above.
    if (partitions.size() > 1 && keys.size() > 1) {
      issues.push_back({surface, "partition-overlap", "surface form appears in both partitions"});
    }
  }

  if (!issues.empty()) throw ValidationError(std::move(issues));
  lex.entries_ = std::move(entries);
  return lex;
}

std::span<const LexemeId> Lexicon::members(PosClass c, Partition p) const {
  if (auto it = members_.find({c, p}); it != members_.end()) return it->second;
  return {};
}

std::optional<LexemeId> Lexicon::find(std::string_view lemma, PosClass c) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].pos_class == c && entries_[i].lemma == lemma) {
      return static_cast<LexemeId>(i);
    }
  }
  return std::nullopt;
}

std::span<const FormRef> Lexicon::lookup(std::string_view surface) const {
  if (auto it = surface_index_.find(surface); it != surface_index_.end()) return it->second;
  return {};
}

bool Lexicon::is_entity_token(std::string_view token) const {
  for (const auto& ref : lookup(token)) {
    if (entries_[ref.lexeme].is_entity()) return true;
  }
  return false;
}

std::vector<LexemeId> Lexicon::entity_lexemes(std::string_view token) const {
  std::vector<LexemeId> out;
  for (const auto& ref : lookup(token)) {
    if (entries_[ref.lexeme].is_entity() &&
        std::find(out.begin(), out.end(), ref.lexeme) == out.end()) {
      out.push_back(ref.lexeme);
    }
  }
  return out;
}

Lexicon parse_lexicon(std::string_view text, std::string_view source) {
  const std::string src(source);
  std::vector<LexemeEntry> entries;
  const auto all = detail::lines(text);
  for (std::size_t n = 0; n < all.size(); ++n) {
    const std::size_t line_no = n + 1;
    const std::string_view line = detail::trim(all[n]);
    if (line.empty() || line.front() == '#') continue;

    const auto fields = detail::split(line, '|');
    if (fields.size() != 4) {
      throw ParseError(src, line_no, "expected 4 '|'-separated fields, found " +
                                         std::to_string(fields.size()));
    }
    LexemeEntry e;
    const auto pos = detail::trim(fields[0]);
    const auto part = detail::trim(fields[1]);
    if (auto c = parse_pos_class(pos)) {
      e.pos_class = *c;
    } else {
      throw ParseError(src, line_no, "unknown pos_class '" + std::string(pos) + "'");
    }
    if (auto p = parse_partition(part)) {
      e.partition = *p;
    } else {
      throw ParseError(src, line_no, "unknown partition '" + std::string(part) + "' (ind|ood)");
    }
    e.lemma = std::string(detail::trim(fields[2]));
    if (e.lemma.empty()) throw ParseError(src, line_no, "empty lemma");

    for (auto piece : detail::split(fields[3], ';')) {
      piece = detail::trim(piece);
      if (piece.empty()) continue;
      const auto eq = piece.find('=');
      if (eq == std::string_view::npos) {
        throw ParseError(src, line_no, "form '" + std::string(piece) + "' lacks '='");
      }
      const auto fname = detail::trim(piece.substr(0, eq));
      const auto surface = detail::trim(piece.substr(eq + 1));
      auto feature = parse_feature(fname);
      if (!feature) throw ParseError(src, line_no, "unknown feature '" + std::string(fname) + "'");
      e.forms.emplace_back(*feature, std::string(surface));
    }
    if (e.forms.empty()) throw ParseError(src, line_no, "entry has no forms");
    entries.push_back(std::move(e));
  }
  return Lexicon::from_entries(std::move(entries));
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  return parse_lexicon(detail::read_file(path), path.string());
}

const std::string& inflect(const LexemeEntry& entry, Feature feature) {
  if (const auto* s = entry.form(feature)) return *s;
  throw MissingFormError("no " + std::string(to_string(feature)) + " form for " +
                         std::string(to_string(entry.pos_class)) + " '" + entry.lemma + "'");
}

bool is_entity_token(const Lexicon& lexicon, std::string_view token) {
  return lexicon.is_entity_token(token);
}

}  // namespace tnli
