#include <benchmark/benchmark.h>

#include <filesystem>

#include "tnli/corpus.hpp"
#include "tnli/metrics.hpp"
#include "tnli/registry.hpp"

namespace {

const tnli::Lexicon& lexicon() {
  static const auto lex = tnli::load_lexicon(std::filesystem::path(TNLI_DATA_DIR) / "starter.lexicon");
  return lex;
}

const tnli::Registry& registry() {
  static const auto reg = tnli::load_registry(std::filesystem::path(TNLI_DATA_DIR) / "starter.templates", lexicon());
  return reg;
}

std::vector<tnli::Example> sample_examples() {
  const auto plan = tnli::make_plan(registry(), 1, 0, 1);
  tnli::GenerationOptions o;
  o.test_per_template = 20;
  auto test = tnli::generate_test_quadrants(plan, registry(), lexicon(), o);
  return test.quadrants.at(tnli::Quadrant::indvocab_indtemplate);
}

void BM_LoadRegistry(benchmark::State& state) {
  const auto path = std::filesystem::path(TNLI_DATA_DIR) / "starter.templates";
  for (auto _ : state) benchmark::DoNotOptimize(tnli::load_registry(path, lexicon()));
}
BENCHMARK(BM_LoadRegistry)->Unit(benchmark::kMillisecond);

void BM_Render(benchmark::State& state) {
  const auto& t = registry().at("lo_pp_around_01");
  tnli::BindingSpace space(t, lexicon(), tnli::Partition::ind);
  std::uint64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tnli::render(t, space.at(i), lexicon()));
    i = (i + 7919) % space.size();
  }
}
BENCHMARK(BM_Render);

void BM_Parse(benchmark::State& state) {
  const auto examples = sample_examples();
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& e = examples[i++ % examples.size()];
    benchmark::DoNotOptimize(registry().parse(e.premise, e.hypothesis, lexicon()));
  }
}
BENCHMARK(BM_Parse);

void BM_CorpusBleu(benchmark::State& state) {
  const auto examples = sample_examples();
  std::vector<tnli::Tokens> refs;
  for (const auto& e : examples) refs.push_back(tnli::tokenize(e.explanation));
  for (auto _ : state) benchmark::DoNotOptimize(tnli::bleu(refs, refs));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(refs.size()));
}
BENCHMARK(BM_CorpusBleu)->Unit(benchmark::kMillisecond);

void BM_GenerateCorpus(benchmark::State& state) {
  const auto plan = tnli::make_plan(registry(), 7, 0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(tnli::generate_corpus(plan, registry(), lexicon()));
}
BENCHMARK(BM_GenerateCorpus)->Arg(1)->Arg(16)->Unit(benchmark::kMillisecond)->Iterations(2);

}  // namespace

BENCHMARK_MAIN();
