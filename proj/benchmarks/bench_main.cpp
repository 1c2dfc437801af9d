// Microbenchmarks for the hot paths: expression parsing, corpus
// instantiation, answer extraction, and record scoring.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <string>
#include <vector>

#include "varmath/expr.hpp"
#include "varmath/grader.hpp"
#include "varmath/harness.hpp"
#include "varmath/instantiate.hpp"
#include "varmath/metrics.hpp"
#include "varmath/template.hpp"

namespace {

std::string sample_corpus_path() {
  return std::string(VARMATH_DATA_DIR) + "/sample_corpus.json";
}

void BM_ParseExpression(benchmark::State& state) {
  const std::string text =
      "8*VAR_A^2 + sqrt(VAR_B^2 + VAR_C^2) - floor(100*pi)/max(VAR_B, 2)";
  for (auto _ : state) {
    benchmark::DoNotOptimize(varmath::parse_expression(text));
  }
}
BENCHMARK(BM_ParseExpression);

void BM_InstantiateCorpus(benchmark::State& state) {
  auto corpus = varmath::load_corpus(sample_corpus_path());
  varmath::SamplerConfig config;
  config.variants_per_template = 5;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    config.seed = seed++;
    benchmark::DoNotOptimize(varmath::instantiate_corpus(corpus, config));
  }
}
BENCHMARK(BM_InstantiateCorpus);

void BM_ExtractAnswer(benchmark::State& state) {
  const std::string completion =
      "We start by rewriting the region as four congruent squares centered "
      "at (1, 1), (-1, 1), (-1, -1), and (1, -1), each rotated 45 degrees "
      "with diagonal 2, so each square has side sqrt(2) and area 2. Since "
      "the four squares are disjoint, the total area is 4 * 2 = 8. "
      "Double-checking with the substitution u = |x| - 1, v = |y| - 1 gives "
      "|u| + |v| <= 1, a diamond of area 2 in each quadrant image, again 8 "
      "in total. The answer is \\boxed{8}.";
  for (auto _ : state) {
    benchmark::DoNotOptimize(varmath::extract_answer(completion));
  }
}
BENCHMARK(BM_ExtractAnswer);

void BM_ScoreRecords(benchmark::State& state) {
  // 30 templates x 5 variants x 16 generations of alternating correctness.
  std::vector<varmath::EvaluationRecord> records;
  records.reserve(30 * 5 * 16);
  for (int t = 0; t < 30; ++t) {
    for (int v = 0; v < 5; ++v) {
      for (int g = 0; g < 16; ++g) {
        varmath::EvaluationRecord record;
        record.template_id = "bench-" + std::to_string(t);
        record.variant_index = v;
        record.generation_index = g;
        record.correct = ((t + v + g) % 3) != 0;
        records.push_back(record);
      }
    }
  }
  for (auto _ : state) {
    auto grids = varmath::group_records(records);
    benchmark::DoNotOptimize(
        varmath::strict_score(grids, varmath::StrictMode::kPaired));
    benchmark::DoNotOptimize(varmath::loose_score(grids));
  }
}
BENCHMARK(BM_ScoreRecords);

}  // namespace

BENCHMARK_MAIN();
