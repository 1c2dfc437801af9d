#ifndef VARMATH_HARNESS_HPP
#define VARMATH_HARNESS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "varmath/instantiate.hpp"
#include "varmath/template.hpp"

namespace varmath {

/// Sampling parameters shared by every model client.
struct GenerationConfig {
  double temperature = 0.6;
  double top_p = 1.0;
  int samples_per_instance = 16;
  int max_tokens = 8192;
  /// Per-request timeout for remote clients, in milliseconds.
  int timeout_ms = 120000;
  /// Maximum number of in-flight requests for non-deterministic clients.
  int max_concurrent = 4;
  /// How many times a failed request may be retried before the record is
  /// marked as an error.
  int retry_budget = 3;
  /// The user prompt; "{question}" is replaced with the instance text.
  std::string prompt_template =
      "{question}\n\nPlease reason step by step, and put your final answer "
      "within \\boxed{}.";

  /// Throws ConfigError if any field is out of range.
  void validate() const;

  /// Renders the prompt for one instance.
  std::string render_prompt(const ProblemInstance& instance) const;
};

/// One model completion (or a terminal failure).
struct Completion {
  std::string text;
  /// Set when the request failed after exhausting retries; the text is then
  /// empty and the record is scored as incorrect.
  std::optional<std::string> error;
  double latency_ms = 0.0;
};

/// Abstract interface a model endpoint must implement.  Each call produces
/// exactly one completion for one instance.
class ModelClient {
 public:
  virtual ~ModelClient() = default;

  /// Short identifier used in reports ("oracle", "memorizer", ...).
  virtual std::string name() const = 0;

  /// Deterministic clients produce byte-identical output for identical
  /// inputs; the runner executes them sequentially so record files are
  /// reproducible.
  virtual bool deterministic() const { return true; }

  /// Produces completion number `generation_index` (0-based) for `instance`.
  virtual Completion complete(const ProblemInstance& instance,
                              int generation_index,
                              const GenerationConfig& config) = 0;
};

/// Always answers with the instance's ground truth, rendered at the
/// instance's answer precision.  Establishes the scoring ceiling.
class OracleMock : public ModelClient {
 public:
  std::string name() const override { return "oracle"; }
  Completion complete(const ProblemInstance& instance, int generation_index,
                      const GenerationConfig& config) override;
};

/// Always answers with the template's *original* answer, regardless of the
/// variant actually asked.  Models a system that has memorized the published
/// benchmark: perfect on the original problems, blind to re-instantiations.
class MemorizerMock : public ModelClient {
 public:
  /// Builds the id -> original-answer lookup from a corpus.
  explicit MemorizerMock(const std::vector<SymbolicTemplate>& corpus);

  std::string name() const override { return "memorizer"; }
  Completion complete(const ProblemInstance& instance, int generation_index,
                      const GenerationConfig& config) override;

 private:
  std::map<std::string, std::string> answers_;
};

/// Answers correctly with independent probability `p` per completion; the
/// draw is a pure function of (seed, template id, variant, generation), so
/// runs are reproducible.  Wrong answers are truth + 1.
class BernoulliMock : public ModelClient {
 public:
  BernoulliMock(double p, std::uint64_t seed);

  std::string name() const override;
  Completion complete(const ProblemInstance& instance, int generation_index,
                      const GenerationConfig& config) override;

  double accuracy() const { return p_; }

 private:
  double p_;
  std::uint64_t seed_;
};

/// One graded completion for one instance.
struct EvaluationRecord {
  std::string template_id;
  int variant_index = 0;
  int generation_index = 0;
  std::string completion;
  /// The extracted answer span, empty when nothing was found.
  std::string answer_raw;
  /// The parsed numeric value, when the span parsed.
  std::optional<double> answer_value;
  /// Unset only when the request itself failed (see `error`); failed
  /// requests score as incorrect.
  std::optional<bool> correct;
  double latency_ms = 0.0;
  /// Transport-level failure tag ("http_500", "network", ...).
  std::optional<std::string> error;
};

/// Runs `config.samples_per_instance` completions for every instance and
/// grades each one.  Records are ordered by (instance order, generation
/// index).  Deterministic clients run sequentially with latencies pinned to
/// zero; others run on a worker pool of `config.max_concurrent` threads.
std::vector<EvaluationRecord> run_evaluation(
    const std::vector<ProblemInstance>& instances, ModelClient& client,
    const GenerationConfig& config);

/// Writes records as JSON Lines.
void persist_records(const std::vector<EvaluationRecord>& records,
                     const std::string& path);

/// Reads records back; throws IoError on malformed input.
std::vector<EvaluationRecord> load_records(const std::string& path);

}  // namespace varmath

#endif  // VARMATH_HARNESS_HPP
