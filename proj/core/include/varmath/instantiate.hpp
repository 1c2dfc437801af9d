#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "varmath/eval.hpp"
#include "varmath/numeric.hpp"
#include "varmath/rng.hpp"
#include "varmath/template.hpp"

namespace varmath {

/// One concrete, answerable problem produced from a template.
struct ProblemInstance {
  std::string template_id;
  int variant_index = 0;
  std::string question;
  /// Values in declaration order; Linspace values sit on the grid, set
  /// values are members, Expression values are the evaluation rounded to
  /// var_round decimals.
  std::vector<std::pair<std::string, double>> assignment;
  /// round_half_away(answer evaluated on the assignment, answer_round).
  double truth = 0;
  int answer_round = 0;

  Environment environment() const;
};

struct SamplerConfig {
  std::uint64_t seed = 0;
  int variants_per_template = 5;
  RenderPolicy rendering = RenderPolicy::kTrimmed;
};

/// Draws one value. Linspace draws uniformly over its intervals+1 grid
/// points, Random_Set uniformly over its members; Expression evaluates
/// against `env` and rounds to var_round decimals (consuming no
/// randomness). Fixed_Set variables are positional per variant and are
/// rejected here.
double sample_variable(const VariableSpec& spec, const Environment& env,
                       Rng& rng, int var_round);

/// Expands one template into cfg.variants_per_template concrete variants
/// (exactly one if the template has no variables). Sampling is driven by a
/// stream keyed on (cfg.seed, t.id): the same pair reproduces the same
/// instances, and corpus order does not matter. Joint sampled assignments
/// are drawn without replacement whenever the joint feasible set has at
/// least variants_per_template elements. Fixed_Set variables (and a
/// Fixed_Set answer) cycle positionally: variant i takes element
/// i mod cardinality.
/// Throws InstantiationError naming template and variant on evaluation
/// domain errors, and for templates that do not pass validation.
std::vector<ProblemInstance> instantiate(const SymbolicTemplate& t,
                                         const SamplerConfig& cfg);

/// instantiate() over a corpus, preserving corpus order.
std::vector<ProblemInstance> instantiate_corpus(
    const std::vector<SymbolicTemplate>& corpus, const SamplerConfig& cfg);

/// The unvariabilized benchmark: one instance per template asking
/// ori_question with truth parsed from ori_answer (which must be numeric).
std::vector<ProblemInstance> original_instances(
    const std::vector<SymbolicTemplate>& corpus);

/// Replaces each VAR_ placeholder with its rendered value. Integers render
/// bare; other values render at var_round decimals (per `policy`).
std::string substitute_placeholders(
    std::string_view question,
    const std::vector<std::pair<std::string, double>>& assignment,
    int var_round, RenderPolicy policy = RenderPolicy::kTrimmed);

/// JSONL export; one instance per line, stable field order, doubles in
/// shortest round-trip form. Re-loading yields identical instances.
void export_instances(const std::vector<ProblemInstance>& instances,
                      const std::string& path);

/// Inverse of export_instances. Throws IoError naming the first malformed
/// line.
std::vector<ProblemInstance> load_instances(const std::string& path);

}  // namespace varmath
