#include "varmath/template.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>

#include "json.hpp"

#include "io_util.hpp"
#include "varmath/eval.hpp"
#include "varmath/numeric.hpp"

namespace varmath {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kLinspacePrefix = "Random_linespace_";
constexpr std::string_view kRandomSetPrefix = "Random_Set_";
constexpr std::string_view kFixedSetPrefix = "Fixed_Set_";
constexpr std::string_view kExpressionPrefix = "Expression_";

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool valid_variable_name(std::string_view name) {
  if (name.rfind("VAR_", 0) != 0 || name.size() <= 4) {
    return false;
  }
  for (char c : name.substr(4)) {
    if (!((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_')) {
      return false;
    }
  }
  return true;
}

/// Cursor over a spec string; keeps absolute offsets for error reporting.
class SpecCursor {
 public:
  explicit SpecCursor(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!consume(c)) {
      throw ParseError(std::string("expected '") + c + "' " + what, pos_);
    }
  }

  double number() {
    skip_ws();
    std::string buffer(text_.substr(pos_));
    const char* begin = buffer.c_str();
    char* end = nullptr;
    double value = std::strtod(begin, &end);
    if (end == begin) {
      throw ParseError("expected a numeric value", pos_);
    }
    pos_ += static_cast<std::size_t>(end - begin);
    return value;
  }

  bool at_end() {
    skip_ws();
    return pos_ == text_.size();
  }

  std::size_t pos() const { return pos_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::vector<double> parse_value_set(SpecCursor& cur) {
  cur.expect('{', "to open the value set");
  std::vector<double> values;
  do {
    std::size_t at = cur.pos();
    double v = cur.number();
    if (!std::isfinite(v)) {
      throw ParseError("non-finite value in set", at);
    }
    if (std::find(values.begin(), values.end(), v) != values.end()) {
      throw ParseError("duplicate value '" + render_shortest(v) + "' in set",
                       at);
    }
    values.push_back(v);
  } while (cur.consume(','));
  cur.expect('}', "to close the value set");
  return values;
}

LinspaceSpec parse_linspace_body(SpecCursor& cur) {
  cur.expect('[', "to open the linspace bounds");
  std::size_t lo_at = cur.pos();
  double lo = cur.number();
  cur.expect(',', "between linspace fields");
  std::size_t hi_at = cur.pos();
  double hi = cur.number();
  cur.expect(',', "between linspace fields");
  std::size_t n_at = cur.pos();
  double intervals = cur.number();
  cur.expect(']', "to close the linspace bounds");

  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw ParseError("non-finite linspace bound", lo_at);
  }
  if (!(lo < hi)) {
    throw ParseError("linspace requires lo < hi", hi_at);
  }
  if (intervals != std::trunc(intervals) || intervals < 1 ||
      intervals > 1e15) {
    throw ParseError("linspace interval count must be a positive integer",
                     n_at);
  }
  return LinspaceSpec{lo, hi, static_cast<long long>(intervals)};
}

std::string leading_token(std::string_view text) {
  std::size_t end = 0;
  while (end < text.size() && (is_word_char(text[end]) || text[end] == '-')) {
    ++end;
  }
  if (end == 0) {
    end = std::min<std::size_t>(text.size(), 16);
  }
  return std::string(text.substr(0, end));
}

std::string_view trim(std::string_view text) {
  while (!text.empty() &&
         std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() &&
         std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  return text;
}

ExprPtr parse_expression_body(std::string_view text, std::size_t base) {
  try {
    return parse_expression(text);
  } catch (const ParseError& e) {
    // Rebase the offset onto the full spec string.
    std::string message = e.what();
    auto cut = message.rfind(" (at offset ");
    if (cut != std::string::npos) {
      message.resize(cut);
    }
    throw ParseError(message, base + e.offset());
  }
}

}  // namespace

VariableSpec parse_variable_spec(std::string_view raw) {
  std::string_view text = trim(raw);
  if (text.rfind(kLinspacePrefix, 0) == 0) {
    SpecCursor cur(text.substr(kLinspacePrefix.size()));
    LinspaceSpec spec = parse_linspace_body(cur);
    if (!cur.at_end()) {
      throw ParseError("trailing input after linspace spec",
                       kLinspacePrefix.size() + cur.pos());
    }
    return spec;
  }
  if (text.rfind(kRandomSetPrefix, 0) == 0) {
    SpecCursor cur(text.substr(kRandomSetPrefix.size()));
    RandomSetSpec spec{parse_value_set(cur)};
    if (!cur.at_end()) {
      throw ParseError("trailing input after set spec",
                       kRandomSetPrefix.size() + cur.pos());
    }
    return spec;
  }
  if (text.rfind(kFixedSetPrefix, 0) == 0) {
    SpecCursor cur(text.substr(kFixedSetPrefix.size()));
    FixedSetSpec spec{parse_value_set(cur)};
    if (!cur.at_end()) {
      throw ParseError("trailing input after set spec",
                       kFixedSetPrefix.size() + cur.pos());
    }
    return spec;
  }
  if (text.rfind(kExpressionPrefix, 0) == 0) {
    return ExprSpec{
        parse_expression_body(text.substr(kExpressionPrefix.size()),
                              kExpressionPrefix.size())};
  }
  throw ParseError(
      "unknown variable spec prefix '" + leading_token(text) + "'", 0);
}

AnswerSpec parse_answer_spec(std::string_view raw) {
  std::string_view text = trim(raw);
  if (text.rfind(kFixedSetPrefix, 0) == 0) {
    SpecCursor cur(text.substr(kFixedSetPrefix.size()));
    cur.expect('{', "to open the answer set");
    std::vector<double> values;
    do {
      std::size_t at = cur.pos();
      double v = cur.number();
      if (!std::isfinite(v)) {
        throw ParseError("non-finite answer value", at);
      }
      values.push_back(v);  // repeated truths across variants are legal
    } while (cur.consume(','));
    cur.expect('}', "to close the answer set");
    if (!cur.at_end()) {
      throw ParseError("trailing input after answer set",
                       kFixedSetPrefix.size() + cur.pos());
    }
    return FixedSetMapAnswer{std::move(values)};
  }
  if (text.rfind(kExpressionPrefix, 0) == 0) {
    return ExprAnswer{
        parse_expression_body(text.substr(kExpressionPrefix.size()),
                              kExpressionPrefix.size())};
  }
  if (text.rfind("Random_", 0) == 0) {
    throw ParseError("random forms are not valid answers", 0);
  }

  SpecCursor cur(text);
  if (text.empty()) {
    throw ParseError("empty answer", 0);
  }
  double value = cur.number();
  if (!cur.at_end()) {
    throw ParseError("expected a numeral, Fixed_Set_{...}, or Expression_...",
                     cur.pos());
  }
  if (!std::isfinite(value)) {
    throw ParseError("answer constant must be finite", 0);
  }
  return ConstantAnswer{value};
}

std::string to_string(const VariableSpec& spec) {
  struct Printer {
    std::string operator()(const LinspaceSpec& s) const {
      return std::string(kLinspacePrefix) + "[" + render_shortest(s.lo) +
             "," + render_shortest(s.hi) + "," + std::to_string(s.intervals) +
             "]";
    }
    std::string operator()(const RandomSetSpec& s) const {
      return std::string(kRandomSetPrefix) + render_set(s.values);
    }
    std::string operator()(const FixedSetSpec& s) const {
      return std::string(kFixedSetPrefix) + render_set(s.values);
    }
    std::string operator()(const ExprSpec& s) const {
      return std::string(kExpressionPrefix) + to_string(*s.expression);
    }
    static std::string render_set(const std::vector<double>& values) {
      std::string out = "{";
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
          out += ',';
        }
        out += render_shortest(values[i]);
      }
      out += '}';
      return out;
    }
  };
  return std::visit(Printer{}, spec);
}

std::string to_string(const AnswerSpec& spec) {
  struct Printer {
    std::string operator()(const ConstantAnswer& a) const {
      return render_shortest(a.value);
    }
    std::string operator()(const FixedSetMapAnswer& a) const {
      std::string out = std::string(kFixedSetPrefix) + "{";
      for (std::size_t i = 0; i < a.values.size(); ++i) {
        if (i > 0) {
          out += ',';
        }
        out += render_shortest(a.values[i]);
      }
      out += '}';
      return out;
    }
    std::string operator()(const ExprAnswer& a) const {
      return std::string(kExpressionPrefix) + to_string(*a.expression);
    }
  };
  return std::visit(Printer{}, spec);
}

const VariableSpec* SymbolicTemplate::find_variable(
    std::string_view name) const {
  for (const auto& [key, spec] : variables) {
    if (key == name) {
      return &spec;
    }
  }
  return nullptr;
}

std::vector<std::string> find_placeholders(std::string_view question) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  std::size_t i = 0;
  while (i + 4 <= question.size()) {
    if (question.compare(i, 4, "VAR_") == 0 &&
        (i == 0 || !is_word_char(question[i - 1]))) {
      std::size_t j = i + 4;
      while (j < question.size() &&
             ((question[j] >= 'A' && question[j] <= 'Z') ||
              (question[j] >= '0' && question[j] <= '9') ||
              question[j] == '_')) {
        ++j;
      }
      if (j > i + 4) {
        std::string name(question.substr(i, j - i));
        if (seen.insert(name).second) {
          out.push_back(std::move(name));
        }
        i = j;
        continue;
      }
    }
    ++i;
  }
  return out;
}

namespace {

void check_spec_structure(const std::string& name, const VariableSpec& spec,
                          std::vector<Diagnostic>& diags) {
  auto degenerate = [&](const std::string& why) {
    diags.push_back(
        {Severity::kError,
         "degenerate feasible set for '" + name + "': " + why});
  };
  if (const auto* ls = std::get_if<LinspaceSpec>(&spec)) {
    if (!std::isfinite(ls->lo) || !std::isfinite(ls->hi)) {
      degenerate("non-finite bound");
    } else if (!(ls->lo < ls->hi)) {
      degenerate("requires lo < hi");
    }
    if (ls->intervals < 1) {
      degenerate("requires at least one interval");
    }
    return;
  }
  const std::vector<double>* values = nullptr;
  if (const auto* rs = std::get_if<RandomSetSpec>(&spec)) {
    values = &rs->values;
  } else if (const auto* fs = std::get_if<FixedSetSpec>(&spec)) {
    values = &fs->values;
  }
  if (values != nullptr) {
    if (values->empty()) {
      degenerate("empty value set");
      return;
    }
    for (std::size_t i = 0; i < values->size(); ++i) {
      if (!std::isfinite((*values)[i])) {
        degenerate("non-finite value");
        return;
      }
      for (std::size_t j = i + 1; j < values->size(); ++j) {
        if ((*values)[i] == (*values)[j]) {
          degenerate("duplicate value " + render_shortest((*values)[i]));
          return;
        }
      }
    }
  }
}

/// DFS cycle check over expression dependencies; returns a readable cycle
/// path like "VAR_A -> VAR_B -> VAR_A" or empty when acyclic.
std::string find_cycle(const SymbolicTemplate& t) {
  enum class Mark { kUnvisited, kActive, kDone };
  std::map<std::string, Mark> marks;
  for (const auto& [name, spec] : t.variables) {
    (void)spec;
    marks[name] = Mark::kUnvisited;
  }

  std::vector<std::string> stack;
  std::string cycle;

  auto deps_of = [&](const std::string& name) {
    std::set<std::string> deps;
    const VariableSpec* spec = t.find_variable(name);
    if (spec != nullptr) {
      if (const auto* es = std::get_if<ExprSpec>(spec)) {
        deps = free_variables(*es->expression);
      }
    }
    return deps;
  };

  std::function<bool(const std::string&)> visit =
      [&](const std::string& name) -> bool {
    auto it = marks.find(name);
    if (it == marks.end() || it->second == Mark::kDone) {
      return false;
    }
    if (it->second == Mark::kActive) {
      auto begin = std::find(stack.begin(), stack.end(), name);
      for (auto s = begin; s != stack.end(); ++s) {
        cycle += *s + " -> ";
      }
      cycle += name;
      return true;
    }
    it->second = Mark::kActive;
    stack.push_back(name);
    for (const auto& dep : deps_of(name)) {
      if (visit(dep)) {
        return true;
      }
    }
    stack.pop_back();
    it->second = Mark::kDone;
    return false;
  };

  for (const auto& [name, spec] : t.variables) {
    (void)spec;
    if (visit(name)) {
      break;
    }
  }
  return cycle;
}

}  // namespace

std::vector<Diagnostic> validate_template(const SymbolicTemplate& t) {
  std::vector<Diagnostic> diags;

  if (t.var_round < 0) {
    diags.push_back({Severity::kError, "VAR_round must be non-negative"});
  }
  if (t.answer_round < 0) {
    diags.push_back(
        {Severity::kError, "VAR_answer_round must be non-negative"});
  }

  std::set<std::string> declared;
  for (const auto& [name, spec] : t.variables) {
    if (!valid_variable_name(name)) {
      diags.push_back({Severity::kError,
                       "invalid variable name '" + name +
                           "' (expected VAR_ followed by [A-Z0-9_]+)"});
    }
    if (!declared.insert(name).second) {
      diags.push_back(
          {Severity::kError, "duplicate variable '" + name + "'"});
    }
    check_spec_structure(name, spec, diags);
  }

  for (const auto& placeholder : find_placeholders(t.var_question)) {
    if (declared.find(placeholder) == declared.end()) {
      diags.push_back({Severity::kError, "unknown placeholder '" +
                                             placeholder +
                                             "' in question text"});
    }
  }

  for (const auto& [name, spec] : t.variables) {
    if (const auto* es = std::get_if<ExprSpec>(&spec)) {
      for (const auto& ref : free_variables(*es->expression)) {
        if (declared.find(ref) == declared.end()) {
          diags.push_back({Severity::kError,
                           "expression for '" + name +
                               "' references undefined variable '" + ref +
                               "'"});
        }
      }
    }
  }

  std::string cycle = find_cycle(t);
  if (!cycle.empty()) {
    diags.push_back({Severity::kError, "cyclic dependency: " + cycle});
  }

  std::size_t fixed_cardinality = 0;
  bool cardinality_conflict = false;
  for (const auto& [name, spec] : t.variables) {
    (void)name;
    if (const auto* fs = std::get_if<FixedSetSpec>(&spec)) {
      if (fs->values.empty()) {
        continue;  // already reported as degenerate
      }
      if (fixed_cardinality == 0) {
        fixed_cardinality = fs->values.size();
      } else if (fixed_cardinality != fs->values.size() &&
                 !cardinality_conflict) {
        cardinality_conflict = true;
        diags.push_back({Severity::kError,
                         "fixed-set cardinality mismatch (" +
                             std::to_string(fixed_cardinality) + " vs " +
                             std::to_string(fs->values.size()) + ")"});
      }
    }
  }

  struct AnswerCheck {
    const SymbolicTemplate& t;
    std::set<std::string>& declared;
    std::size_t fixed_cardinality;
    std::vector<Diagnostic>& diags;

    void operator()(const ConstantAnswer& a) const {
      if (!std::isfinite(a.value)) {
        diags.push_back(
            {Severity::kError, "answer constant must be finite"});
      }
    }
    void operator()(const FixedSetMapAnswer& a) const {
      if (a.values.empty()) {
        diags.push_back({Severity::kError, "empty fixed-set answer"});
        return;
      }
      for (double v : a.values) {
        if (!std::isfinite(v)) {
          diags.push_back(
              {Severity::kError, "non-finite fixed-set answer value"});
          return;
        }
      }
      if (fixed_cardinality == 0) {
        diags.push_back({Severity::kError,
                         "fixed-set answer requires at least one fixed-set "
                         "variable"});
      } else if (a.values.size() != fixed_cardinality) {
        diags.push_back({Severity::kError,
                         "fixed-set answer cardinality " +
                             std::to_string(a.values.size()) +
                             " does not match variable cardinality " +
                             std::to_string(fixed_cardinality)});
      }
    }
    void operator()(const ExprAnswer& a) const {
      for (const auto& ref : free_variables(*a.expression)) {
        if (declared.find(ref) == declared.end()) {
          diags.push_back({Severity::kError,
                           "answer expression references undefined variable '" +
                               ref + "'"});
        }
      }
    }
  };
  std::visit(AnswerCheck{t, declared, fixed_cardinality, diags}, t.answer);

  if (t.variables.empty()) {
    diags.push_back({Severity::kWarning,
                     "constant template: no variables to instantiate"});
  }

  return diags;
}

namespace {

const std::set<std::string> kRecordKeys = {
    "id",        "ori_question",  "ori_answer",
    "VAR_question", "VAR_info",   "VAR_round",
    "VAR_answer",   "VAR_answer_round", "metadata"};

struct RecordResult {
  bool ok = false;
  SymbolicTemplate t;
  std::vector<std::string> errors;
};

RecordResult parse_record(const ordered_json& rec) {
  RecordResult out;
  if (!rec.is_object()) {
    out.errors.push_back("record is not a JSON object");
    return out;
  }

  for (const auto& key : kRecordKeys) {
    if (!rec.contains(key)) {
      out.errors.push_back("missing key '" + key + "'");
    }
  }
  for (const auto& [key, value] : rec.items()) {
    (void)value;
    if (kRecordKeys.find(key) == kRecordKeys.end()) {
      out.errors.push_back("unexpected key '" + key + "'");
    }
  }
  if (!out.errors.empty()) {
    // Best-effort id so diagnostics can cite the record by name.
    if (rec.contains("id") && rec.at("id").is_string()) {
      out.t.id = rec.at("id").get<std::string>();
    }
    return out;
  }

  auto str_field = [&](const char* key, std::string& into) {
    const auto& v = rec.at(key);
    if (v.is_string()) {
      into = v.get<std::string>();
    } else if (v.is_number()) {
      into = v.dump();
    } else {
      out.errors.push_back(std::string("field '") + key +
                           "' must be a string");
    }
  };

  str_field("id", out.t.id);
  if (out.t.id.empty()) {
    out.errors.push_back("field 'id' must be a non-empty string");
  }
  str_field("ori_question", out.t.ori_question);
  str_field("ori_answer", out.t.ori_answer);
  str_field("VAR_question", out.t.var_question);

  auto int_field = [&](const char* key, int& into) {
    const auto& v = rec.at(key);
    if (v.is_number_integer()) {
      into = v.get<int>();
    } else {
      out.errors.push_back(std::string("field '") + key +
                           "' must be an integer");
    }
  };
  int_field("VAR_round", out.t.var_round);
  int_field("VAR_answer_round", out.t.answer_round);

  const auto& info = rec.at("VAR_info");
  if (!info.is_object()) {
    out.errors.push_back("field 'VAR_info' must be an object");
  } else {
    for (const auto& [name, spec_text] : info.items()) {
      if (!spec_text.is_string()) {
        out.errors.push_back("VAR_info['" + name + "'] must be a string");
        continue;
      }
      try {
        out.t.variables.emplace_back(
            name, parse_variable_spec(spec_text.get<std::string>()));
      } catch (const ParseError& e) {
        out.errors.push_back("VAR_info['" + name + "']: " + e.what());
      }
    }
  }

  const auto& answer = rec.at("VAR_answer");
  try {
    if (answer.is_string()) {
      out.t.answer = parse_answer_spec(answer.get<std::string>());
    } else if (answer.is_number()) {
      out.t.answer = ConstantAnswer{answer.get<double>()};
    } else {
      out.errors.push_back("field 'VAR_answer' must be a string or number");
    }
  } catch (const ParseError& e) {
    out.errors.push_back(std::string("VAR_answer: ") + e.what());
  }

  const auto& metadata = rec.at("metadata");
  if (!metadata.is_object()) {
    out.errors.push_back("field 'metadata' must be an object");
  } else {
    if (metadata.contains("source")) {
      if (!metadata.at("source").is_string()) {
        out.errors.push_back("metadata.source must be a string");
      } else {
        out.t.metadata.source = metadata.at("source").get<std::string>();
      }
    }
    if (metadata.contains("difficulty")) {
      if (!metadata.at("difficulty").is_string()) {
        out.errors.push_back("metadata.difficulty must be a string");
      } else {
        out.t.metadata.difficulty =
            metadata.at("difficulty").get<std::string>();
      }
    }
  }

  out.ok = out.errors.empty();
  return out;
}

}  // namespace

bool CorpusReport::has_errors() const {
  return std::any_of(issues.begin(), issues.end(), [](const CorpusIssue& i) {
    return i.severity == Severity::kError;
  });
}

CorpusReport load_corpus_report(const std::string& path) {
  std::string content = detail::read_file(path);

  ordered_json doc;
  try {
    doc = ordered_json::parse(content);
  } catch (const nlohmann::json::parse_error& e) {
    throw CorpusError("corpus '" + path + "' is not valid JSON",
                      {e.what()});
  }
  if (!doc.is_array()) {
    throw CorpusError("corpus '" + path + "' must be a JSON array",
                      {"top-level value has type " +
                       std::string(doc.type_name())});
  }

  CorpusReport report;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    RecordResult rec = parse_record(doc[i]);
    std::string label = rec.t.id.empty()
                            ? "record #" + std::to_string(i)
                            : rec.t.id;
    for (const auto& err : rec.errors) {
      report.issues.push_back({label, Severity::kError, err});
    }
    if (!rec.ok) {
      continue;
    }
    if (!ids.insert(rec.t.id).second) {
      report.issues.push_back(
          {label, Severity::kError, "duplicate template id"});
      continue;
    }
    for (const auto& diag : validate_template(rec.t)) {
      report.issues.push_back({label, diag.severity, diag.message});
    }
    report.templates.push_back(std::move(rec.t));
  }
  return report;
}

std::vector<SymbolicTemplate> load_corpus(const std::string& path) {
  CorpusReport report = load_corpus_report(path);
  if (report.has_errors()) {
    std::vector<std::string> failures;
    for (const auto& issue : report.issues) {
      if (issue.severity == Severity::kError) {
        failures.push_back(issue.template_id + ": " + issue.message);
      }
    }
    throw CorpusError("corpus '" + path + "' failed validation", failures);
  }
  return std::move(report.templates);
}

}  // namespace varmath
