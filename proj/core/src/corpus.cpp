#include "tnli/corpus.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "json.hpp"
#include "parallel.hpp"
#include "text_util.hpp"
#include "tnli/rng.hpp"

namespace tnli {

using ojson = nlohmann::ordered_json;

// ---------------------------------------------------------------- quadrants

std::string_view to_string(Quadrant q) {
  switch (q) {
    case Quadrant::indvocab_indtemplate: return "indvocab_indtemplate";
    case Quadrant::indvocab_oodtemplate: return "indvocab_oodtemplate";
    case Quadrant::oodvocab_indtemplate: return "oodvocab_indtemplate";
    case Quadrant::oodvocab_oodtemplate: return "oodvocab_oodtemplate";
  }
  return "?";
}

std::optional<Quadrant> parse_quadrant(std::string_view s) {
  for (Quadrant q : kQuadrants) {
    if (to_string(q) == s) return q;
  }
  return std::nullopt;
}

Quadrant make_quadrant(Partition vocab, Partition templates) {
  if (vocab == Partition::ind) {
    return templates == Partition::ind ? Quadrant::indvocab_indtemplate
                                       : Quadrant::indvocab_oodtemplate;
  }
  return templates == Partition::ind ? Quadrant::oodvocab_indtemplate
                                     : Quadrant::oodvocab_oodtemplate;
}

Partition vocab_of(Quadrant q) {
  return q == Quadrant::indvocab_indtemplate || q == Quadrant::indvocab_oodtemplate
             ? Partition::ind
             : Partition::ood;
}

Partition template_condition_of(Quadrant q) {
  return q == Quadrant::indvocab_indtemplate || q == Quadrant::oodvocab_indtemplate
             ? Partition::ind
             : Partition::ood;
}

std::string quadrant_file_name(Quadrant q) { return "test_" + std::string(to_string(q)) + ".jsonl"; }

// --------------------------------------------------------------------- plan

ExperimentPlan make_plan(const Registry& registry, std::uint64_t master_seed, std::size_t fold,
                         std::size_t k) {
  if (k == 0) throw Error("k must be at least 1");
  if (fold >= kFoldCount) {
    throw Error("fold must be in 0.." + std::to_string(kFoldCount - 1) + ", got " +
                std::to_string(fold));
  }
  return ExperimentPlan{split_folds(registry, master_seed), fold, k, master_seed};
}

std::size_t dev_count(std::size_t k) { return std::max<std::size_t>(1, (k + 2) / 5); }

bool GenerationReport::has_warning(std::string_view kind, std::string_view scope) const {
  return std::any_of(warnings.begin(), warnings.end(), [&](const GenerationWarning& w) {
    return w.kind == kind && w.scope == scope;
  });
}

std::string report_to_json(const GenerationReport& report) {
  ojson j;
  j["seed"] = report.seed;
  j["k"] = report.k;
  j["fold"] = report.fold;
  j["training_templates"] = report.training_templates;
  j["ood_templates"] = report.ood_templates;
  j["counts"] = ojson::object();
  for (const auto& [name, n] : report.counts) j["counts"][name] = n;
  j["warnings"] = ojson::array();
  for (const auto& w : report.warnings) {
    j["warnings"].push_back({{"kind", w.kind},
                             {"template_id", w.template_id},
                             {"scope", w.scope},
                             {"available", w.available},
                             {"requested", w.requested}});
  }
  return j.dump(2) + "\n";
}

// --------------------------------------------------------------- generation

namespace {

constexpr std::size_t kDevOffsetFloor = 16;

std::vector<const Template*> sorted_templates(const Registry& registry,
                                              const std::vector<std::string>& ids) {
  std::vector<const Template*> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(&registry.at(id));
  std::sort(out.begin(), out.end(),
            [](const Template* a, const Template* b) { return a->id < b->id; });
  return out;
}

Example make_example(const Template& t, const Binding& b, const Lexicon& lex, Split split,
                     Partition vocab, Partition tcond, std::string id) {
  Example e;
  e.id = std::move(id);
  e.premise = join_tokens(render_tokens(t.premise, t, b, lex));
  e.hypothesis = join_tokens(render_tokens(t.hypothesis, t, b, lex));
  e.explanation = join_tokens(render_tokens(t.explanation, t, b, lex));
  e.label = t.label;
  e.template_id = t.id;
  e.binding = binding_lemmas(b, lex);
  e.vocab_condition = vocab;
  e.template_condition = tcond;
  e.split = split;
  return e;
}

// Positions of the train/dev stream reserved for train and dev under k.
struct TrainDevLayout {
  std::uint64_t dev_begin;
  std::uint64_t dev_end;
  std::uint64_t reserved;  // every draw any k <= max(16, k) may use
};

TrainDevLayout layout_for(std::size_t k, std::uint64_t supply) {
  const std::uint64_t offset = std::max(kDevOffsetFloor, k);
  const std::uint64_t reserved = offset + dev_count(offset);
  if (offset + dev_count(k) <= supply) return {offset, offset + dev_count(k), reserved};
  // Too few bindings for the gap; pack dev right after train.
  return {k, k + dev_count(k), reserved};
}

std::string traindev_stream(const Template& t) { return "traindev/" + t.id; }

std::string test_stream(const Template& t, Partition vocab) {
  return "test/" + std::string(to_string(vocab)) + "/" + t.id;
}

}  // namespace

TrainDev generate_train_dev(const ExperimentPlan& plan, const Registry& registry,
                            const Lexicon& lexicon, const GenerationOptions& options) {
  if (plan.k == 0) throw Error("k must be at least 1");
  const auto templates = sorted_templates(registry, plan.training_template_ids());

  struct Part {
    std::vector<Example> train, dev;
    std::optional<GenerationWarning> warning;
  };
  std::vector<Part> parts(templates.size());

  detail::parallel_for(templates.size(), options.threads, [&](std::size_t i) {
    const Template& t = *templates[i];
    BindingSpace space(t, lexicon, Partition::ind);
    if (space.size() == 0) throw Error("template " + t.id + " has no bindings over the ind vocabulary");
    const auto layout = layout_for(plan.k, space.size());
    LazyShuffle draws(space.size(), stream_seed(plan.master_seed, traindev_stream(t)));
    Part& part = parts[i];
    for (std::uint64_t pos = 0; pos < layout.dev_end; ++pos) {
      const std::uint64_t index = draws.next();
      if (pos < plan.k) {
        part.train.push_back(make_example(t, space.at(index), lexicon, Split::train, Partition::ind,
                                          Partition::ind, t.id + ":train:" + std::to_string(pos)));
      } else if (pos >= layout.dev_begin) {
        const auto ordinal = pos - layout.dev_begin;
        part.dev.push_back(make_example(t, space.at(index), lexicon, Split::dev, Partition::ind,
                                        Partition::ind, t.id + ":dev:" + std::to_string(ordinal)));
      }
    }
    const std::uint64_t needed = plan.k + dev_count(plan.k);
    if (needed > space.size()) {
      part.warning = GenerationWarning{"replacement_fallback", t.id, "train_dev", space.size(), needed};
    }
  });

  TrainDev out;
  for (auto& part : parts) {
    std::move(part.train.begin(), part.train.end(), std::back_inserter(out.train));
    std::move(part.dev.begin(), part.dev.end(), std::back_inserter(out.dev));
    if (part.warning) out.warnings.push_back(std::move(*part.warning));
  }
  return out;
}

TestQuadrants generate_test_quadrants(const ExperimentPlan& plan, const Registry& registry,
                                      const Lexicon& lexicon, const GenerationOptions& options) {
  if (options.test_per_template == 0) throw Error("test_per_template must be positive");
  const auto ind_templates = sorted_templates(registry, plan.training_template_ids());
  const auto ood_templates = sorted_templates(registry, plan.ood_template_ids());

  struct Task {
    Quadrant quadrant;
    const Template* tmpl;
  };
  std::vector<Task> tasks;
  for (Quadrant q : kQuadrants) {
    const auto& list = template_condition_of(q) == Partition::ind ? ind_templates : ood_templates;
    for (const Template* t : list) tasks.push_back({q, t});
  }

  struct Part {
    std::vector<Example> examples;
    std::vector<GenerationWarning> warnings;
  };
  std::vector<Part> parts(tasks.size());
  const std::uint64_t want = options.test_per_template;

  detail::parallel_for(tasks.size(), options.threads, [&](std::size_t i) {
    const auto [q, tp] = tasks[i];
    const Template& t = *tp;
    const Partition vocab = vocab_of(q);
    const Partition tcond = template_condition_of(q);
    const std::string scope(to_string(q));
    BindingSpace space(t, lexicon, vocab);
    const std::uint64_t supply = space.size();
    if (supply == 0) throw Error("template " + t.id + " has no bindings over the " + std::string(to_string(vocab)) + " vocabulary");
    Part& part = parts[i];

    std::unordered_set<std::uint64_t> excluded;
    if (q == Quadrant::indvocab_indtemplate) {
      const std::uint64_t reserved = std::min(layout_for(plan.k, supply).reserved, supply);
      if (supply - reserved >= want) {
        LazyShuffle td(supply, stream_seed(plan.master_seed, traindev_stream(t)));
        for (std::uint64_t n = 0; n < reserved; ++n) excluded.insert(td.next());
      } else {
        part.warnings.push_back({"train_overlap", t.id, scope, supply - reserved, want});
      }
    }
    if (supply < want) {
      part.warnings.push_back({"replacement_fallback", t.id, scope, supply, want});
    }

    LazyShuffle draws(supply, stream_seed(plan.master_seed, test_stream(t, vocab)));
    const std::string prefix = t.id + ":test:" + std::string(to_string(vocab)) + ":";
    while (part.examples.size() < want) {
      const std::uint64_t index = draws.next();
      if (excluded.count(index)) continue;
      part.examples.push_back(make_example(t, space.at(index), lexicon, Split::test, vocab, tcond,
                                           prefix + std::to_string(part.examples.size())));
    }
  });

  TestQuadrants out;
  for (Quadrant q : kQuadrants) out.quadrants[q];
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    auto& dest = out.quadrants[tasks[i].quadrant];
    std::move(parts[i].examples.begin(), parts[i].examples.end(), std::back_inserter(dest));
    for (auto& w : parts[i].warnings) out.warnings.push_back(std::move(w));
  }
  return out;
}

Corpus generate_corpus(const ExperimentPlan& plan, const Registry& registry, const Lexicon& lexicon,
                       const GenerationOptions& options) {
  Corpus c;
  auto td = generate_train_dev(plan, registry, lexicon, options);
  auto test = generate_test_quadrants(plan, registry, lexicon, options);
  c.train = std::move(td.train);
  c.dev = std::move(td.dev);
  c.test = std::move(test.quadrants);

  auto& r = c.report;
  r.seed = plan.master_seed;
  r.k = plan.k;
  r.fold = plan.held_out_fold;
  r.training_templates = plan.training_template_ids().size();
  r.ood_templates = plan.ood_template_ids().size();
  r.counts["train"] = c.train.size();
  r.counts["dev"] = c.dev.size();
  for (const auto& [q, examples] : c.test) r.counts[std::string(to_string(q))] = examples.size();
  r.warnings = std::move(td.warnings);
  r.warnings.insert(r.warnings.end(), test.warnings.begin(), test.warnings.end());
  return c;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_examples(corpus.train, dir / "train.jsonl");
  write_examples(corpus.dev, dir / "dev.jsonl");
  for (Quadrant q : kQuadrants) {
    auto it = corpus.test.find(q);
    write_examples(it == corpus.test.end() ? std::vector<Example>{} : it->second,
                   dir / quadrant_file_name(q));
  }
  detail::write_file(dir / "report.json", report_to_json(corpus.report));
}

// ------------------------------------------------------------ serialization

std::string format_example(const Example& e) {
  ojson j;
  j["id"] = e.id;
  j["premise"] = e.premise;
  j["hypothesis"] = e.hypothesis;
  j["explanation"] = e.explanation;
  j["label"] = to_string(e.label);
  j["template_id"] = e.template_id;
  j["binding"] = ojson::object();
  for (const auto& [slot, lemma] : e.binding) j["binding"][slot] = lemma;
  j["vocab_condition"] = to_string(e.vocab_condition);
  j["template_condition"] = to_string(e.template_condition);
  j["split"] = to_string(e.split);
  return j.dump();
}

std::string format_examples(const std::vector<Example>& examples) {
  std::string out;
  for (const auto& e : examples) {
    out += format_example(e);
    out += '\n';
  }
  return out;
}

namespace {

const nlohmann::json& field(const nlohmann::json& j, const char* name, const std::string& src,
                            std::size_t line) {
  auto it = j.find(name);
  if (it == j.end()) throw ParseError(src, line, std::string("missing field \"") + name + "\"");
  return *it;
}

std::string string_field(const nlohmann::json& j, const char* name, const std::string& src,
                         std::size_t line) {
  const auto& v = field(j, name, src, line);
  if (!v.is_string()) throw ParseError(src, line, std::string("field \"") + name + "\" must be a string");
  return v.get<std::string>();
}

template <class Enum, class ParseFn>
Enum enum_field(const nlohmann::json& j, const char* name, ParseFn parse_fn, const std::string& src,
                std::size_t line) {
  const auto text = string_field(j, name, src, line);
  auto value = parse_fn(text);
  if (!value) throw ParseError(src, line, std::string("bad value \"") + text + "\" for \"" + name + "\"");
  return *value;
}

}  // namespace

std::vector<Example> parse_examples(std::string_view text, std::string_view source) {
  const std::string src(source);
  std::vector<Example> out;
  const auto all = detail::lines(text);
  for (std::size_t n = 0; n < all.size(); ++n) {
    const std::size_t line_no = n + 1;
    if (detail::trim(all[n]).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(all[n]);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(src, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError(src, line_no, "record must be a JSON object");
    Example e;
    e.id = string_field(j, "id", src, line_no);
    e.premise = string_field(j, "premise", src, line_no);
    e.hypothesis = string_field(j, "hypothesis", src, line_no);
    e.explanation = string_field(j, "explanation", src, line_no);
    e.label = enum_field<Label>(j, "label", parse_label, src, line_no);
    e.template_id = string_field(j, "template_id", src, line_no);
    const auto& binding = field(j, "binding", src, line_no);
    if (!binding.is_object()) throw ParseError(src, line_no, "field \"binding\" must be an object");
    for (const auto& [slot, lemma] : binding.items()) {
      if (!lemma.is_string()) throw ParseError(src, line_no, "binding values must be strings");
      e.binding.emplace(slot, lemma.get<std::string>());
    }
    e.vocab_condition = enum_field<Partition>(j, "vocab_condition", parse_partition, src, line_no);
    e.template_condition =
        enum_field<Partition>(j, "template_condition", parse_partition, src, line_no);
    e.split = enum_field<Split>(j, "split", parse_split, src, line_no);
    out.push_back(std::move(e));
  }
  return out;
}

void write_examples(const std::vector<Example>& examples, const std::filesystem::path& path) {
  detail::write_file(path, format_examples(examples));
}

std::vector<Example> read_examples(const std::filesystem::path& path) {
  return parse_examples(detail::read_file(path), path.string());
}

}  // namespace tnli
