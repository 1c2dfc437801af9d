#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "varmath/expr.hpp"

namespace varmath {

/// Evenly spaced grid: the intervals+1 points lo + k*(hi-lo)/intervals.
/// Surface form: Random_linespace_[lo,hi,intervals].
struct LinspaceSpec {
  double lo = 0;
  double hi = 0;
  long long intervals = 0;
};

/// Uniform draw from an explicit finite set. Surface form: Random_Set_{...}.
struct RandomSetSpec {
  std::vector<double> values;
};

/// The variant with index i deterministically takes values[i % size].
/// Surface form: Fixed_Set_{...}.
struct FixedSetSpec {
  std::vector<double> values;
};

/// Value derived from other variables. Surface form: Expression_<expr>.
struct ExprSpec {
  ExprPtr expression;
};

using VariableSpec =
    std::variant<LinspaceSpec, RandomSetSpec, FixedSetSpec, ExprSpec>;

/// A ground truth independent of the sampled variables.
struct ConstantAnswer {
  double value = 0;
};

/// Positional answers for Fixed_Set variables: variant i has ground truth
/// values[i % size].
struct FixedSetMapAnswer {
  std::vector<double> values;
};

/// Ground truth computed from the sampled assignment.
struct ExprAnswer {
  ExprPtr expression;
};

using AnswerSpec =
    std::variant<ConstantAnswer, FixedSetMapAnswer, ExprAnswer>;

struct TemplateMetadata {
  std::string source;      // benchmark the problem came from
  std::string difficulty;  // free-form label
};

/// One variabilized problem. `variables` preserves declaration order, which
/// is also the sampling order; keys are full surface identifiers ("VAR_A")
/// exactly as they appear in var_question placeholders.
struct SymbolicTemplate {
  std::string id;
  std::string ori_question;
  std::string ori_answer;
  std::string var_question;
  std::vector<std::pair<std::string, VariableSpec>> variables;
  int var_round = 0;
  AnswerSpec answer = ConstantAnswer{};
  int answer_round = 0;
  TemplateMetadata metadata;

  const VariableSpec* find_variable(std::string_view name) const;
};

/// Parses one of the four variable surface forms. Whitespace around
/// brackets, commas, and values is tolerated. Throws ParseError naming the
/// offending token: unknown prefix, malformed brackets, empty or duplicated
/// sets, lo >= hi, non-positive interval count.
VariableSpec parse_variable_spec(std::string_view text);

/// Parses an answer: a bare numeral (Constant), Fixed_Set_{...}, or
/// Expression_<expr>. Random forms are rejected.
AnswerSpec parse_answer_spec(std::string_view text);

/// Canonical surface forms; parse(to_string(s)) == s structurally.
std::string to_string(const VariableSpec& spec);
std::string to_string(const AnswerSpec& spec);

enum class Severity { kWarning, kError };

struct Diagnostic {
  Severity severity = Severity::kError;
  std::string message;
};

/// Structural validation; never throws. Returns an empty list iff every
/// template invariant holds. Checks: placeholders resolve, expression
/// references are defined and acyclic, Fixed_Set cardinalities agree (and a
/// Fixed_Set answer has a Fixed_Set variable to index by), rounding digits
/// are non-negative, and feasible sets are non-degenerate (finite bounds,
/// lo < hi, at least one interval, non-empty duplicate-free sets).
/// A template with no variables validates with a "constant template"
/// warning: it still instantiates (as its single original wording).
std::vector<Diagnostic> validate_template(const SymbolicTemplate& t);

/// The distinct VAR_ placeholders appearing in question text, in first-use
/// order. A placeholder is a maximal VAR_[A-Z0-9_]+ token starting at a
/// word boundary.
std::vector<std::string> find_placeholders(std::string_view question);

struct CorpusIssue {
  std::string template_id;
  Severity severity = Severity::kError;
  std::string message;
};

struct CorpusReport {
  std::vector<SymbolicTemplate> templates;  // every structurally parsed record
  std::vector<CorpusIssue> issues;          // parse errors + diagnostics

  bool has_errors() const;
};

/// Parses and validates a corpus file, collecting issues instead of
/// throwing so that a single pass reports every failing record.
/// Throws IoError if the file cannot be read and CorpusError if the
/// document is not a JSON array of records.
CorpusReport load_corpus_report(const std::string& path);

/// Strict loader for pipelines: returns the templates in file order, or
/// throws CorpusError listing every record-level failure.
std::vector<SymbolicTemplate> load_corpus(const std::string& path);

}  // namespace varmath
