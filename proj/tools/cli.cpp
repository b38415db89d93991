#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tnli/baseline.hpp"
#include "tnli/corpus.hpp"
#include "tnli/metrics.hpp"
#include "tnli/registry.hpp"

namespace tnli::cli {
namespace fs = std::filesystem;

namespace {

const std::set<std::size_t> kAllowedK{1, 2, 4, 8, 16};

// Invariant violation inside the tool; maps to exit code 2.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Options {
  std::string lexicon;
  std::string registry;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::vector<std::size_t> k;
  std::vector<std::size_t> fold;
  bool allow_any_k = false;
  bool strict = false;
  std::string scope = "restricted";
  std::string fallback = "abstain";
  std::vector<std::string> quadrant;
  std::string input;
  std::string predictions;
  std::vector<std::string> gold;
  std::string fallback_log;
  std::size_t samples = 300;
  std::string partition = "ind";
  unsigned threads = 0;
};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
  if (!f) throw Error("write failed for " + path.string());
}

std::uint64_t need_seed(const Options& o) {
  if (!o.seed) throw Error("--seed is required");
  return *o.seed;
}

const std::string& need(const std::string& value, const char* flag) {
  if (value.empty()) throw Error(std::string(flag) + " is required");
  return value;
}

void check_k(std::size_t k, bool allow_any) {
  if (k == 0) throw Error("--k must be at least 1");
  if (!allow_any && !kAllowedK.count(k)) {
    throw Error("--k " + std::to_string(k) +
                " is not in the allowed set {1, 2, 4, 8, 16}; pass --allow-any-k to override");
  }
}

std::size_t single(const std::vector<std::size_t>& values, const char* flag, std::size_t fallback) {
  if (values.empty()) return fallback;
  if (values.size() != 1) throw Error(std::string(flag) + " takes exactly one value here");
  return values.front();
}

std::vector<Quadrant> quadrants_of(const Options& o) {
  if (o.quadrant.empty()) return {kQuadrants.begin(), kQuadrants.end()};
  std::vector<Quadrant> out;
  for (const auto& name : o.quadrant) {
    auto q = parse_quadrant(name);
    if (!q) throw Error("unknown quadrant '" + name + "'");
    out.push_back(*q);
  }
  return out;
}

struct Inputs {
  Lexicon lexicon;
  Registry registry;
};

Inputs load_inputs(const Options& o) {
  auto lexicon = load_lexicon(need(o.lexicon, "--lexicon"));
  auto registry = load_registry(need(o.registry, "--registry"), lexicon);
  return {std::move(lexicon), std::move(registry)};
}

BaselineConfig baseline_config(const Options& o, const Registry& registry) {
  BaselineConfig config;
  auto scope = parse_scope(o.scope);
  if (!scope) throw Error("--scope must be restricted or closed-book");
  auto fallback = parse_fallback(o.fallback);
  if (!fallback) throw Error("--fallback must be abstain or majority");
  config.scope = *scope;
  config.fallback = *fallback;
  if (config.scope == Scope::restricted) {
    const std::size_t fold = single(o.fold, "--fold", 0);
    if (fold >= kFoldCount) throw Error("--fold must be in 0..4");
    const auto split = split_folds(registry, need_seed(o));
    for (auto& id : split.training_ids(fold)) config.training_template_ids.insert(std::move(id));
  }
  return config;
}

// ------------------------------------------------------------ subcommands

int cmd_generate(const Options& o, std::ostream& out) {
  const std::uint64_t seed = need_seed(o);
  const std::size_t k = single(o.k, "--k", 0);
  if (o.k.empty()) throw Error("--k is required");
  check_k(k, o.allow_any_k);
  const std::size_t fold = single(o.fold, "--fold", 0);
  const fs::path dir = need(o.out, "--out");
  auto in = load_inputs(o);
  const auto plan = make_plan(in.registry, seed, fold, k);
  const auto corpus = generate_corpus(plan, in.registry, in.lexicon, {o.threads});
  write_corpus(corpus, dir);
  for (const auto& [name, n] : corpus.report.counts) out << name << ": " << n << "\n";
  if (!corpus.report.warnings.empty()) {
    out << "warnings: " << corpus.report.warnings.size() << " (see report.json)\n";
  }
  return kOk;
}

int cmd_baseline(const Options& o, std::ostream& out) {
  const fs::path input = need(o.input, "--input");
  const fs::path dest = need(o.out, "--out");
  if (!fs::exists(input)) throw Error("input file " + input.string() + " does not exist");
  auto in = load_inputs(o);
  const auto config = baseline_config(o, in.registry);
  const fs::path log = o.fallback_log.empty() ? fs::path(dest.string() + ".fallbacks.jsonl")
                                              : fs::path(o.fallback_log);
  if (dest.has_parent_path()) fs::create_directories(dest.parent_path());
  const auto run = run_baseline_file(input, config, in.registry, in.lexicon, dest, log, o.threads);
  out << "predictions: " << run.predictions.size() << "\nfallbacks: " << run.fallback_ids.size()
      << "\n";
  return kOk;
}

int cmd_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
  const fs::path predictions = need(o.predictions, "--predictions");
  if (o.gold.empty()) throw Error("--gold is required");
  const auto lexicon = load_lexicon(need(o.lexicon, "--lexicon"));
  std::vector<Example> gold;
  for (const auto& path : o.gold) {
    auto part = read_examples(path);
    std::move(part.begin(), part.end(), std::back_inserter(gold));
  }
  auto preds = read_predictions(predictions);
  if (!o.quadrant.empty()) {
    // Predictions for filtered-out gold examples are dropped, not unmatched.
    const auto keep = quadrants_of(o);
    std::set<std::string> dropped;
    std::erase_if(gold, [&](const Example& e) {
      const bool out = std::find(keep.begin(), keep.end(), e.quadrant()) == keep.end();
      if (out) dropped.insert(e.id);
      return out;
    });
    std::erase_if(preds, [&](const Prediction& p) { return dropped.count(p.example_id) > 0; });
  }
  const auto report = evaluate(preds, gold, lexicon, {o.strict});
  if (!o.out.empty()) write_text(o.out, report_to_json(report));
  out << report_to_table(report);
  for (const auto& id : report.unmatched_ids) err << "unmatched: " << id << "\n";
  return kOk;
}

void append_rows(std::ostream& csv, std::size_t k, std::size_t fold, const EvalReport& report) {
  for (const auto& [quadrant, m] : report.per_quadrant) {
    const std::pair<const char*, std::optional<double>> metrics[] = {
        {"accuracy", m.accuracy.accuracy()},
        {"bleu", m.bleu_score()},
        {"hallucination_rate", m.hallucination_rate()},
        {"indicator_precision", m.indicator.precision()},
        {"indicator_recall", m.indicator.recall()},
    };
    for (const auto& [name, value] : metrics) {
      if (!value) continue;
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6f", *value);
      csv << k << ',' << fold << ',' << quadrant << ',' << name << ',' << buf << '\n';
    }
  }
  csv.flush();
}

int cmd_grid(const Options& o, std::ostream& out) {
  const std::uint64_t seed = need_seed(o);
  if (o.k.empty()) throw Error("--k is required (comma-separated list)");
  for (std::size_t k : o.k) check_k(k, o.allow_any_k);
  const std::vector<std::size_t> folds = o.fold.empty() ? std::vector<std::size_t>{0} : o.fold;
  for (std::size_t f : folds) {
    if (f >= kFoldCount) throw Error("--fold must be in 0..4");
  }
  const fs::path root = need(o.out, "--out");
  auto in = load_inputs(o);
  auto scope = parse_scope(o.scope);
  auto fallback = parse_fallback(o.fallback);
  if (!scope || !fallback) throw Error("bad --scope or --fallback");

  fs::create_directories(root);
  std::ofstream csv(root / "grid.csv", std::ios::trunc);
  if (!csv) throw Error("cannot write " + (root / "grid.csv").string());
  csv << "k,fold,quadrant,metric,value\n";

  for (std::size_t k : o.k) {
    for (std::size_t fold : folds) {
      const auto plan = make_plan(in.registry, seed, fold, k);
      const auto corpus = generate_corpus(plan, in.registry, in.lexicon, {o.threads});
      const fs::path dir = root / ("k" + std::to_string(k)) / ("fold" + std::to_string(fold));
      write_corpus(corpus, dir);

      BaselineConfig config;
      config.scope = *scope;
      config.fallback = *fallback;
      for (const auto& id : plan.training_template_ids()) config.training_template_ids.insert(id);

      std::vector<Prediction> all_predictions;
      std::vector<Example> all_gold;
      for (Quadrant q : kQuadrants) {
        const auto& gold = corpus.test.at(q);
        auto run = run_baseline(gold, config, in.registry, in.lexicon, o.threads);
        const std::string name(to_string(q));
        write_predictions(run.predictions, dir / ("predictions_" + name + ".jsonl"));
        write_text(dir / ("fallbacks_" + name + ".jsonl"), format_fallback_log(run.fallback_ids));
        std::move(run.predictions.begin(), run.predictions.end(), std::back_inserter(all_predictions));
        all_gold.insert(all_gold.end(), gold.begin(), gold.end());
      }
      const auto report = evaluate(all_predictions, all_gold, in.lexicon, {true});
      if (!report.unmatched_ids.empty() || report.coverage_gaps != 0) {
        throw InternalError("grid evaluation did not cover every test example");
      }
      write_text(dir / "eval.json", report_to_json(report));
      append_rows(csv, k, fold, report);
      out << "k=" << k << " fold=" << fold << " done\n";
    }
  }
  return kOk;
}

int cmd_stats(const Options& o, std::ostream& out) {
  const std::uint64_t seed = need_seed(o);
  auto partition = parse_partition(o.partition);
  if (!partition) throw Error("--partition must be ind or ood");
  auto in = load_inputs(o);
  const auto stats = registry_stats(in.registry, in.lexicon, o.samples, *partition, seed);
  const std::string json = stats_to_json(stats);
  if (!o.out.empty()) write_text(o.out, json);
  out << json;
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Templated NLI toolkit: corpus generation, rule-based baseline, evaluation"};
  app.set_config("--config", "", "key=value file; command-line flags override it");
  app.require_subcommand(1);

  Options o;
  app.add_option("--lexicon", o.lexicon, "lexicon file");
  app.add_option("--registry", o.registry, "template registry file");
  app.add_option("--out", o.out, "output directory (generate, grid) or file");
  app.add_option("--seed", o.seed, "master seed");
  app.add_option("--k", o.k, "samples per training template; grid takes a list")->delimiter(',');
  app.add_option("--fold", o.fold, "held-out fold 0..4; grid takes a list")->delimiter(',');
  app.add_flag("--allow-any-k", o.allow_any_k, "accept k outside {1,2,4,8,16}");
  app.add_flag("--strict", o.strict, "fail on prediction ids without gold");
  app.add_option("--scope", o.scope, "baseline scope")->check(CLI::IsMember({"restricted", "closed-book"}));
  app.add_option("--fallback", o.fallback, "baseline fallback")->check(CLI::IsMember({"abstain", "majority"}));
  app.add_option("--quadrant", o.quadrant, "restrict evaluation to these quadrants")->delimiter(',');
  app.add_option("--input", o.input, "examples file (baseline)");
  app.add_option("--predictions", o.predictions, "predictions file (evaluate)");
  app.add_option("--gold", o.gold, "gold example files (evaluate)")->delimiter(',');
  app.add_option("--fallback-log", o.fallback_log, "fallback log path (baseline)");
  app.add_option("--samples", o.samples, "samples per template (stats)");
  app.add_option("--partition", o.partition, "vocabulary partition (stats)");
  app.add_option("--threads", o.threads, "worker threads, 0 = all cores");

  auto* generate = app.add_subcommand("generate", "write train/dev/test corpus files and report.json");
  auto* baseline = app.add_subcommand("baseline", "run the rule-based explain-then-predict baseline");
  auto* eval = app.add_subcommand("evaluate", "score predictions against gold examples");
  auto* grid = app.add_subcommand("grid", "generate, run the baseline and evaluate over k and folds");
  auto* stats = app.add_subcommand("stats", "registry counts and mean rendered lengths");
  for (auto* sub : {generate, baseline, eval, grid, stats}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*generate) return cmd_generate(o, out);
    if (*baseline) return cmd_baseline(o, out);
    if (*eval) return cmd_evaluate(o, out, err);
    if (*grid) return cmd_grid(o, out);
    if (*stats) return cmd_stats(o, out);
    throw InternalError("no subcommand dispatched");
  } catch (const JoinError& e) {
    err << "error: " << e.what() << "\n";
    for (const auto& id : e.unmatched_ids()) err << "unmatched: " << id << "\n";
    return kInputError;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace tnli::cli
