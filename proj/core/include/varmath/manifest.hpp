#ifndef VARMATH_MANIFEST_HPP
#define VARMATH_MANIFEST_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "varmath/harness.hpp"
#include "varmath/metrics.hpp"
#include "varmath/template.hpp"

namespace varmath {

/// Everything needed to reproduce one evaluation run.
struct RunManifest {
  std::string corpus_path;
  std::uint64_t seed = 0;
  int variants_per_template = 5;
  /// Client specification: "oracle", "memorizer", "bernoulli:<p>", or
  /// "remote".
  std::string client = "oracle";
  /// Endpoint base URL (remote client only).
  std::string base_url;
  /// Report label; also the remote model name.  Defaults to the client spec.
  std::string model;
  std::string out_dir;
  /// When true the pipeline also runs the original (single-variant)
  /// benchmark and reports the score drop.
  bool with_baseline = true;
  StrictMode strict_mode = StrictMode::kPaired;
  VariantStat variant_stat = VariantStat::kVariantMean;
  GenerationConfig generation;

  void save(const std::string& path) const;
  static RunManifest load(const std::string& path);
};

/// Builds the model client a manifest describes.  The corpus is needed for
/// the memorizer's original-answer lookup.
std::unique_ptr<ModelClient> make_client(
    const RunManifest& manifest, const std::vector<SymbolicTemplate>& corpus);

/// File paths produced by run_pipeline, plus the in-memory report.
struct PipelineResult {
  std::string instances_path;
  std::string records_path;
  std::string baseline_instances_path;  // empty without baseline
  std::string baseline_records_path;    // empty without baseline
  std::string report_json_path;
  std::string report_markdown_path;
  std::string std_csv_path;
  std::string manifest_path;
  ScoreReport report;
};

/// End-to-end run: load corpus, instantiate, evaluate, score, and write
/// every artifact under manifest.out_dir.  Identical manifests produce
/// byte-identical artifacts for deterministic clients.
PipelineResult run_pipeline(const RunManifest& manifest);

}  // namespace varmath

#endif  // VARMATH_MANIFEST_HPP
