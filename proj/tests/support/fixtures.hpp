#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <string>
#include <vector>

#include "tnli/lexicon.hpp"
#include "tnli/registry.hpp"

namespace tnli::testing {

inline std::filesystem::path data_dir() { return TNLI_DATA_DIR; }

// Per-process scratch directory, emptied on first use.
inline std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::path(TNLI_TEST_TMP) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

inline const Lexicon& starter_lexicon() {
  static const Lexicon lex = load_lexicon(data_dir() / "starter.lexicon");
  return lex;
}

inline const Registry& starter_registry() {
  static const Registry reg = load_registry(data_dir() / "starter.templates", starter_lexicon());
  return reg;
}

// Five IND and two OOD professions, three IND and two OOD transitive verbs,
// and enough of the other classes for the small registries in unit tests.
inline constexpr const char* kSmallLexicon = R"(# small test lexicon
profession | ind | psychologist | singular=psychologist; plural=psychologists
profession | ind | programmer   | singular=programmer; plural=programmers
profession | ind | essayist     | singular=essayist; plural=essayists
profession | ind | scientist    | singular=scientist; plural=scientists
profession | ind | baker        | singular=baker; plural=bakers
profession | ood | chaplain     | singular=chaplain; plural=chaplains
profession | ood | singer       | singular=singer; plural=singers
transitive_verb | ind | see     | past=saw; passive_participle=seen
transitive_verb | ind | address | past=addressed; passive_participle=addressed
transitive_verb | ind | thank   | past=thanked; passive_participle=thanked
transitive_verb | ood | need    | past=needed; passive_participle=needed
transitive_verb | ood | call    | past=called; passive_participle=called
intransitive_verb | ind | run   | past=ran
intransitive_verb | ood | sleep | past=slept
preposition | ind | by   | base=by
preposition | ood | near | base=near
location | ind | park   | singular=park; plural=parks
location | ood | garden | singular=garden; plural=gardens
)";

inline const Lexicon& small_lexicon() {
  static const Lexicon lex = parse_lexicon(kSmallLexicon, "small.lexicon");
  return lex;
}

// The preposition-around-subject template in registry syntax.
inline constexpr const char* kPpTemplate = R"(template pp | lexical_overlap | le_around_prepositional_phrase | entailment
  slots: X=profession:singular Y=profession:plural Z=profession:singular P=preposition V=transitive_verb
  premise: the {X} {P} the {Y} {V:past} the {Z} .
  hypothesis: the {X} {V:past} the {Z} .
  explanation: the {X} {P} the {Y} is still the {X} .
)";

// Golden fixture: template id, slot -> lemma binding, and the three
// expected renderings.
struct Golden {
  std::string template_id;
  std::map<std::string, std::string> binding;
  std::string premise;
  std::string hypothesis;
  std::string explanation;
};

// Reference triples with the terminal period written as its own token.
inline const std::vector<Golden>& golden_examples() {
  static const std::vector<Golden> g = {
      {"lo_pp_around_01",
       {{"P", "by"}, {"V", "see"}, {"X", "psychologist"}, {"Y", "programmer"}, {"Z", "essayist"}},
       "the psychologist by the programmers saw the essayist .",
       "the psychologist saw the essayist .",
       "the psychologist by the programmers is still the psychologist ."},
      {"lo_rc_around_01",
       {{"V1", "talk"}, {"V2", "thank"}, {"X", "scientist"}, {"Z", "psychotherapist"}},
       "the scientists that talked thanked the psychotherapists .",
       "the scientists thanked the psychotherapists .",
       "the scientists that talked are still the scientists ."},
      {"con_if_01",
       {{"V1", "run"}, {"V2", "exist"}, {"X", "psychologist"}, {"Y", "programmer"}},
       "if the psychologists ran , the programmers existed .",
       "the psychologists ran .",
       "the programmers existed if the psychologists ran , we do not know whether the psychologists ran ."},
      {"con_though_01",
       {{"V1", "vote"}, {"V2", "exist"}, {"X", "president"}, {"Y", "musician"}},
       "though the president voted , the musician existed .",
       "the president voted .",
       "though suggests the president voted happened ."},
      {"lo_passive_01",
       {{"V", "address"}, {"X", "scientist"}, {"Y", "psychotherapist"}},
       "the scientist was addressed by the psychotherapist .",
       "the psychotherapist addressed the scientist .",
       "addressed is the active form of was addressed by , so we swap the scientist and the psychotherapist ."},
      {"con_if_03",
       {{"V1", "address"}, {"V2", "listen"}, {"X", "director"}, {"Y", "president"}, {"Z", "illustrator"}},
       "if the directors addressed the illustrators , the president listened .",
       "the directors addressed the illustrators .",
       "the president listened if the directors addressed the illustrators , we do not know whether the directors addressed the illustrators ."},
      {"lo_pp_around_02",
       {{"P", "by"}, {"V", "offend"}, {"X", "musician"}, {"Y", "psychiatrist"}, {"Z", "strategist"}},
       "the musician by the psychiatrists offended the strategists .",
       "the musician offended the strategists .",
       "the musician by the psychiatrists is still the musician ."},
      {"lo_pp_around_03",
       {{"P", "near"}, {"V", "support"}, {"X", "administrator"}, {"Y", "penciller"}, {"Z", "lyricist"}},
       "the administrators near the penciller supported the lyricist .",
       "the administrators supported the lyricist .",
       "the administrators near the penciller are still the administrators ."},
      {"lo_rc_around_02",
       {{"V1", "affect"}, {"V2", "help"}, {"X", "scientist"}, {"Y", "colorist"}, {"Z", "psychotherapist"}},
       "the scientists who affected the colorists helped the psychotherapists .",
       "the scientists helped the psychotherapists .",
       "the scientists who affected the colorists are still the scientists ."},
      {"lo_rc_around_03",
       {{"V1", "deceive"}, {"V2", "call"}, {"X", "professor"}, {"Y", "athlete"}, {"Z", "doctor"}},
       "the professor who deceived the athletes called the doctors .",
       "the professor called the doctors .",
       "the professor who deceived the athletes is still the professor ."},
      {"lo_pp_around_04",
       {{"V", "avoid"}, {"X", "director"}, {"Y", "analyst"}, {"Z", "designer"}},
       "the directors in front of the analysts avoided the designer .",
       "the directors avoided the designer .",
       "the directors in front of the analysts are still the directors ."},
      {"lo_pp_around_03",
       {{"P", "near"}, {"V", "need"}, {"X", "chaplain"}, {"Y", "singer"}, {"Z", "author"}},
       "the chaplains near the singer needed the author .",
       "the chaplains needed the author .",
       "the chaplains near the singer are still the chaplains ."},
      {"lo_rc_around_04",
       {{"V1", "thank"}, {"V2", "encourage"}, {"X", "technician"}, {"Y", "planner"}, {"Z", "worker"}},
       "the technician that thanked the planners encouraged the worker .",
       "the technician encouraged the worker .",
       "the technician that thanked the planners is still the technician ."},
      {"lo_rc_around_05",
       {{"V1", "recognize"}, {"V2", "recommend"}, {"X", "senator"}, {"Y", "nurse"}, {"Z", "chaplain"}},
       "the senators that recognized the nurses recommended the chaplains .",
       "the senators recommended the chaplains .",
       "the senators that recognized the nurses are still the senators ."},
  };
  return g;
}

}  // namespace tnli::testing
