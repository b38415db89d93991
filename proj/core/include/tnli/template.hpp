#pragma once

#include <compare>
#include <cstdint>
#include <iterator>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tnli/lexicon.hpp"
#include "tnli/tokenize.hpp"
#include "tnli/types.hpp"

namespace tnli {

struct SlotRef {
  std::string slot;
  Feature feature = Feature::base;

  friend bool operator==(const SlotRef&, const SlotRef&) = default;
};

// A pattern element is either a literal token or a slot reference.
using PatternElement = std::variant<std::string, SlotRef>;

struct Pattern {
  std::vector<PatternElement> elements;

  friend bool operator==(const Pattern&, const Pattern&) = default;
};

struct SlotSpec {
  std::string name;
  PosClass pos_class = PosClass::profession;
  // singular/plural for nouns, base for every other class.
  Feature number = Feature::base;

  friend bool operator==(const SlotSpec&, const SlotSpec&) = default;
};

struct Template {
  std::string id;
  Heuristic heuristic = Heuristic::lexical_overlap;
  std::string subcase;
  Label label = Label::entailment;
  std::vector<SlotSpec> slots;  // sorted by name
  Pattern premise;
  Pattern hypothesis;
  Pattern explanation;

  const SlotSpec* slot(std::string_view name) const;
};

// Slot name -> lexeme. Ordered by slot name, which is also the canonical
// enumeration order.
struct Binding {
  std::map<std::string, LexemeId, std::less<>> assignments;

  friend bool operator==(const Binding&, const Binding&) = default;
  friend auto operator<=>(const Binding&, const Binding&) = default;
};

struct Rendering {
  std::string premise;
  std::string hypothesis;
  std::string explanation;

  friend bool operator==(const Rendering&, const Rendering&) = default;
};

// Throws ValidationError (rule "binding") when the binding does not fit the
// template's slots, MissingFormError when an inflection is absent.
Tokens render_tokens(const Pattern& pattern, const Template& tmpl, const Binding& binding,
                     const Lexicon& lexicon);
Rendering render(const Template& tmpl, const Binding& binding, const Lexicon& lexicon);

// Checks class and distinctness constraints without rendering.
void check_binding(const Template& tmpl, const Binding& binding, const Lexicon& lexicon);

// Binding <-> slot->lemma map, the serialized form used in example files.
std::map<std::string, std::string> binding_lemmas(const Binding& binding, const Lexicon& lexicon);
Binding resolve_binding(const Template& tmpl, const std::map<std::string, std::string>& lemmas,
                        const Lexicon& lexicon);

// All bindings of a template over one vocabulary partition, indexed in
// canonical order: slots by name (first slot most significant), lexemes in
// file order, slots of one class bound to distinct lexemes.
class BindingSpace {
 public:
  // Throws ValidationError (rule "empty-class") naming the first slot class
  // with no entries in the partition.
  BindingSpace(const Template& tmpl, const Lexicon& lexicon, Partition partition);

  std::uint64_t size() const { return size_; }
  Binding at(std::uint64_t index) const;

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Binding;
    using difference_type = std::int64_t;

    iterator() = default;
    iterator(const BindingSpace* space, std::uint64_t index) : space_(space), index_(index) {}

    Binding operator*() const { return space_->at(index_); }
    iterator& operator++() {
      ++index_;
      return *this;
    }
    iterator operator++(int) {
      auto copy = *this;
      ++index_;
      return copy;
    }
    friend bool operator==(const iterator& a, const iterator& b) { return a.index_ == b.index_; }

   private:
    const BindingSpace* space_ = nullptr;
    std::uint64_t index_ = 0;
  };

  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, size_}; }

 private:
  struct Digit {
    std::string slot;
    const std::vector<LexemeId>* candidates;
    std::size_t same_class_before;  // earlier slots sharing the class
    std::uint64_t radix;
  };

  std::vector<std::vector<LexemeId>> pools_;
  std::vector<Digit> digits_;
  std::uint64_t size_ = 1;
};

inline BindingSpace enumerate_bindings(const Template& tmpl, const Lexicon& lexicon,
                                       Partition partition) {
  return BindingSpace(tmpl, lexicon, partition);
}

// Pattern text with slot references written {name} / {name:feature}.
std::string pattern_to_string(const Pattern& pattern);

}  // namespace tnli
