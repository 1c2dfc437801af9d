#ifndef VARMATH_METRICS_HPP
#define VARMATH_METRICS_HPP

#include <optional>
#include <string>
#include <vector>

#include "varmath/harness.hpp"
#include "varmath/rational.hpp"
#include "varmath/template.hpp"

namespace varmath {

/// How the all-or-nothing score combines variants.
///  - kPaired: generation j scores 1 iff generation j answered *every*
///    variant correctly; the template score is the mean over generations.
///  - kProduct: the template score is the product over variants of each
///    variant's accuracy.
enum class StrictMode { kPaired, kProduct };

/// Which per-generation statistic the dispersion metric uses.
///  - kVariantMean: generation j's value is the mean correctness across
///    variants.
///  - kAllOrNothing: generation j's value is 1 iff all variants are correct.
enum class VariantStat { kVariantMean, kAllOrNothing };

/// Whether a record set is an original-benchmark run (exactly one variant
/// per template) or a variabilized run.
enum class RunKind { kOriginal, kVariabilized };

std::string to_string(StrictMode mode);
std::string to_string(VariantStat stat);
StrictMode parse_strict_mode(const std::string& text);
VariantStat parse_variant_stat(const std::string& text);

/// Correctness grid of one template: correct[variant][generation].
/// Records whose request failed count as incorrect.
struct TemplateGrid {
  std::string template_id;
  int variants = 0;
  int generations = 0;
  std::vector<std::vector<bool>> correct;
};

/// Groups records by template and validates completeness: every template
/// must cover variants 0..V-1 and generations 0..n-1 exactly once, and all
/// templates must share the same generation count.  Throws
/// RaggedRecordsError naming the offending template/variant/generation.
/// (The shared generation count also keeps exact-score denominators small.)
std::vector<TemplateGrid> group_records(
    const std::vector<EvaluationRecord>& records);

/// All-or-nothing score of one template, exact.
Rational template_strict(const TemplateGrid& grid, StrictMode mode);

/// Mean correctness over all cells of one template, exact.
Rational template_loose(const TemplateGrid& grid);

/// Mean of per-template scores, exact.
Rational strict_score(const std::vector<TemplateGrid>& grids, StrictMode mode);
Rational loose_score(const std::vector<TemplateGrid>& grids);

/// Population standard deviation of the per-generation statistic.
/// RunKind::kOriginal asserts the grid has exactly one variant.
double template_std(const TemplateGrid& grid, RunKind kind, VariantStat stat);

/// Relative score change in percent: 100 * (variant - original) / original.
/// Empty when the original score is not positive.
std::optional<Rational> drop_percent(const Rational& original,
                                     const Rational& variant);

/// Scores of one template within a report.
struct TemplateScore {
  std::string template_id;
  Rational strict;
  Rational loose;
  double std_dev = 0.0;
};

/// Aggregate plus per-template scores of one run.
struct RunScores {
  Rational strict;
  Rational loose;
  std::vector<TemplateScore> per_template;
};

struct ReportOptions {
  std::string model = "model";
  StrictMode strict_mode = StrictMode::kPaired;
  VariantStat variant_stat = VariantStat::kVariantMean;
};

/// Comparison of a variabilized run against an optional original-benchmark
/// baseline run over the same corpus.
struct ScoreReport {
  std::string model;
  StrictMode strict_mode = StrictMode::kPaired;
  VariantStat variant_stat = VariantStat::kVariantMean;
  RunScores variabilized;
  std::optional<RunScores> original;
  std::optional<Rational> drop_strict_percent;
  std::optional<Rational> drop_loose_percent;
};

/// Scores `records` (and `baseline` original-run records, when given)
/// against the corpus.  Per-template rows follow corpus order; every corpus
/// template must have records and no record may reference an unknown
/// template.  Baseline records must have exactly one variant per template.
ScoreReport build_score_report(
    const std::vector<EvaluationRecord>& records,
    const std::vector<SymbolicTemplate>& corpus, const ReportOptions& options,
    const std::vector<EvaluationRecord>* baseline = nullptr);

/// JSON form; exact scores appear as {"num", "den", "text"} and round-trip
/// through load_report unchanged.
std::string report_to_json(const ScoreReport& report);
ScoreReport load_report(const std::string& path);

/// Markdown summary with a "| Model | original | variabilized | Drop |"
/// comparison table (percentages at one decimal).
std::string report_to_markdown(const ScoreReport& report);

/// CSV of per-template dispersion: template_id,mode,std.
std::string report_std_csv(const ScoreReport& report);

}  // namespace varmath

#endif  // VARMATH_METRICS_HPP
