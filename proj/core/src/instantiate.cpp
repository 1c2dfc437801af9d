#include "varmath/instantiate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "io_util.hpp"

namespace varmath {

namespace {

using ordered_json = nlohmann::ordered_json;

// Joint feasible sets up to this size are enumerated for exact
// without-replacement draws; larger ones use rejection sampling, where a
// collision is vanishingly unlikely.
constexpr std::uint64_t kEnumerationLimit = 1ULL << 20;

double linspace_point(const LinspaceSpec& spec, std::uint64_t k) {
  if (static_cast<long long>(k) == spec.intervals) {
    return spec.hi;  // pin the endpoint exactly
  }
  return spec.lo + static_cast<double>(k) * (spec.hi - spec.lo) /
                       static_cast<double>(spec.intervals);
}

std::uint64_t domain_size(const VariableSpec& spec) {
  if (const auto* ls = std::get_if<LinspaceSpec>(&spec)) {
    return static_cast<std::uint64_t>(ls->intervals) + 1;
  }
  if (const auto* rs = std::get_if<RandomSetSpec>(&spec)) {
    return rs->values.size();
  }
  return 0;
}

double domain_value(const VariableSpec& spec, std::uint64_t index) {
  if (const auto* ls = std::get_if<LinspaceSpec>(&spec)) {
    return linspace_point(*ls, index);
  }
  return std::get<RandomSetSpec>(spec).values[index];
}

struct ResolvedOrder {
  // (name, spec) partitions in declaration order.
  std::vector<std::pair<std::string, const FixedSetSpec*>> fixed;
  std::vector<std::pair<std::string, const VariableSpec*>> sampled;
  std::vector<std::pair<std::string, const ExprSpec*>> exprs;  // topo order
};

ResolvedOrder resolve_order(const SymbolicTemplate& t) {
  ResolvedOrder order;
  std::vector<std::pair<std::string, const ExprSpec*>> pending;
  std::set<std::string> resolved;

  for (const auto& [name, spec] : t.variables) {
    if (const auto* fs = std::get_if<FixedSetSpec>(&spec)) {
      order.fixed.emplace_back(name, fs);
      resolved.insert(name);
    } else if (const auto* es = std::get_if<ExprSpec>(&spec)) {
      pending.emplace_back(name, es);
    } else {
      order.sampled.emplace_back(name, &spec);
      resolved.insert(name);
    }
  }

  // Kahn's algorithm, scanning in declaration order for determinism.
  // Validation guarantees acyclicity, so this always drains.
  while (!pending.empty()) {
    bool progressed = false;
    for (auto it = pending.begin(); it != pending.end();) {
      const auto deps = free_variables(*it->second->expression);
      bool ready = std::all_of(deps.begin(), deps.end(),
                               [&](const std::string& d) {
                                 return resolved.count(d) > 0;
                               });
      if (ready) {
        resolved.insert(it->first);
        order.exprs.push_back(*it);
        it = pending.erase(it);
        progressed = true;
      } else {
        ++it;
      }
    }
    if (!progressed) {
      throw InstantiationError(
          "template '" + t.id +
          "': unresolvable expression dependencies (cycle?)");
    }
  }
  return order;
}

[[noreturn]] void rethrow_for_variant(const SymbolicTemplate& t, int variant,
                                      const std::exception& e) {
  throw InstantiationError("template '" + t.id + "' variant " +
                           std::to_string(variant) + ": " + e.what());
}

double answer_truth(const SymbolicTemplate& t, int variant,
                    const Environment& env) {
  struct Visitor {
    const SymbolicTemplate& t;
    int variant;
    const Environment& env;

    double operator()(const ConstantAnswer& a) const { return a.value; }
    double operator()(const FixedSetMapAnswer& a) const {
      return a.values[static_cast<std::size_t>(variant) % a.values.size()];
    }
    double operator()(const ExprAnswer& a) const {
      return evaluate(*a.expression, env);
    }
  };
  return std::visit(Visitor{t, variant, env}, t.answer);
}

}  // namespace

Environment ProblemInstance::environment() const {
  Environment env;
  for (const auto& [name, value] : assignment) {
    env[name] = value;
  }
  return env;
}

double sample_variable(const VariableSpec& spec, const Environment& env,
                       Rng& rng, int var_round) {
  struct Visitor {
    const Environment& env;
    Rng& rng;
    int var_round;

    double operator()(const LinspaceSpec& s) const {
      std::uint64_t k =
          rng.next_below(static_cast<std::uint64_t>(s.intervals) + 1);
      return linspace_point(s, k);
    }
    double operator()(const RandomSetSpec& s) const {
      return s.values[rng.next_below(s.values.size())];
    }
    double operator()(const FixedSetSpec&) const {
      throw InstantiationError(
          "fixed-set variables are resolved positionally, not sampled");
    }
    double operator()(const ExprSpec& s) const {
      return round_half_away(evaluate(*s.expression, env), var_round);
    }
  };
  return std::visit(Visitor{env, rng, var_round}, spec);
}

std::vector<ProblemInstance> instantiate(const SymbolicTemplate& t,
                                         const SamplerConfig& cfg) {
  if (cfg.variants_per_template < 1) {
    throw ConfigError("variants_per_template must be at least 1");
  }
  for (const auto& diag : validate_template(t)) {
    if (diag.severity == Severity::kError) {
      throw InstantiationError("template '" + t.id +
                               "' failed validation: " + diag.message);
    }
  }

  std::vector<ProblemInstance> out;

  auto build_instance = [&](int variant, const Environment& env) {
    ProblemInstance inst;
    inst.template_id = t.id;
    inst.variant_index = variant;
    inst.answer_round = t.answer_round;
    for (const auto& [name, spec] : t.variables) {
      (void)spec;
      inst.assignment.emplace_back(name, env.at(name));
    }
    try {
      inst.truth = round_half_away(answer_truth(t, variant, env),
                                   t.answer_round);
      if (!std::isfinite(inst.truth)) {
        throw EvalError("non-finite ground truth");
      }
      inst.question = substitute_placeholders(t.var_question, inst.assignment,
                                              t.var_round, cfg.rendering);
    } catch (const InstantiationError&) {
      throw;
    } catch (const std::exception& e) {
      rethrow_for_variant(t, variant, e);
    }
    out.push_back(std::move(inst));
  };

  if (t.variables.empty()) {
    build_instance(0, Environment{});
    return out;
  }

  const int k = cfg.variants_per_template;
  ResolvedOrder order = resolve_order(t);
  Rng rng = derive_stream(cfg.seed, t.id);

  // Joint feasible set size across the randomly sampled dimensions
  // (saturating product).
  constexpr std::uint64_t kJointCap = 1ULL << 62;
  std::uint64_t joint = order.sampled.empty() ? 0 : 1;
  for (const auto& [name, spec] : order.sampled) {
    (void)name;
    std::uint64_t size = domain_size(*spec);
    if (size == 0) {
      joint = 0;
      break;
    }
    joint = (joint > kJointCap / size) ? kJointCap : joint * size;
  }
  const bool without_replacement =
      !order.sampled.empty() && joint >= static_cast<std::uint64_t>(k);

  std::vector<std::vector<double>> tuples;
  if (without_replacement && joint <= kEnumerationLimit) {
    // Enumerate the joint space and take a k-element uniform sample
    // (partial Fisher-Yates), guaranteeing distinct tuples.
    std::vector<std::uint64_t> indices(joint);
    for (std::uint64_t i = 0; i < joint; ++i) {
      indices[i] = i;
    }
    for (int i = 0; i < k; ++i) {
      std::uint64_t j =
          static_cast<std::uint64_t>(i) +
          rng.next_below(joint - static_cast<std::uint64_t>(i));
      std::swap(indices[i], indices[j]);
    }
    for (int i = 0; i < k; ++i) {
      std::vector<double> tuple;
      std::uint64_t rem = indices[static_cast<std::size_t>(i)];
      for (auto it = order.sampled.rbegin(); it != order.sampled.rend();
           ++it) {
        std::uint64_t size = domain_size(*it->second);
        tuple.push_back(domain_value(*it->second, rem % size));
        rem /= size;
      }
      std::reverse(tuple.begin(), tuple.end());
      tuples.push_back(std::move(tuple));
    }
  } else {
    std::set<std::vector<double>> seen;
    for (int i = 0; i < k; ++i) {
      std::vector<double> tuple;
      while (true) {
        tuple.clear();
        for (const auto& [name, spec] : order.sampled) {
          (void)name;
          tuple.push_back(
              sample_variable(*spec, Environment{}, rng, t.var_round));
        }
        if (!without_replacement || seen.insert(tuple).second) {
          break;
        }
      }
      tuples.push_back(std::move(tuple));
    }
  }

  for (int variant = 0; variant < k; ++variant) {
    Environment env;
    for (const auto& [name, fs] : order.fixed) {
      env[name] = fs->values[static_cast<std::size_t>(variant) %
                             fs->values.size()];
    }
    const auto& tuple = tuples[static_cast<std::size_t>(variant)];
    for (std::size_t d = 0; d < order.sampled.size(); ++d) {
      env[order.sampled[d].first] = tuple[d];
    }
    for (const auto& [name, es] : order.exprs) {
      try {
        env[name] = round_half_away(evaluate(*es->expression, env),
                                    t.var_round);
      } catch (const std::exception& e) {
        rethrow_for_variant(t, variant, e);
      }
    }
    build_instance(variant, env);
  }
  return out;
}

std::vector<ProblemInstance> instantiate_corpus(
    const std::vector<SymbolicTemplate>& corpus, const SamplerConfig& cfg) {
  std::vector<ProblemInstance> out;
  for (const auto& t : corpus) {
    auto instances = instantiate(t, cfg);
    out.insert(out.end(), std::make_move_iterator(instances.begin()),
               std::make_move_iterator(instances.end()));
  }
  return out;
}

std::vector<ProblemInstance> original_instances(
    const std::vector<SymbolicTemplate>& corpus) {
  std::vector<ProblemInstance> out;
  for (const auto& t : corpus) {
    const std::string& text = t.ori_answer;
    const char* begin = text.c_str();
    char* end = nullptr;
    double value = std::strtod(begin, &end);
    while (end != nullptr && *end != '\0' &&
           std::isspace(static_cast<unsigned char>(*end))) {
      ++end;
    }
    if (end == begin || end == nullptr || *end != '\0' ||
        !std::isfinite(value)) {
      throw ConfigError("template '" + t.id +
                        "': ori_answer is not numeric: '" + text + "'");
    }
    ProblemInstance inst;
    inst.template_id = t.id;
    inst.variant_index = 0;
    inst.question = t.ori_question;
    inst.truth = round_half_away(value, t.answer_round);
    inst.answer_round = t.answer_round;
    out.push_back(std::move(inst));
  }
  return out;
}

std::string substitute_placeholders(
    std::string_view question,
    const std::vector<std::pair<std::string, double>>& assignment,
    int var_round, RenderPolicy policy) {
  std::map<std::string, std::string> rendered;
  for (const auto& [name, value] : assignment) {
    rendered[name] = render_number(value, var_round, policy);
  }

  auto is_word = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  };

  std::string out;
  out.reserve(question.size());
  std::size_t i = 0;
  while (i < question.size()) {
    if (i + 4 <= question.size() && question.compare(i, 4, "VAR_") == 0 &&
        (i == 0 || !is_word(question[i - 1]))) {
      std::size_t j = i + 4;
      while (j < question.size() &&
             ((question[j] >= 'A' && question[j] <= 'Z') ||
              (question[j] >= '0' && question[j] <= '9') ||
              question[j] == '_')) {
        ++j;
      }
      if (j > i + 4) {
        std::string name(question.substr(i, j - i));
        auto it = rendered.find(name);
        if (it == rendered.end()) {
          throw InstantiationError("placeholder '" + name +
                                   "' has no assigned value");
        }
        out += it->second;
        i = j;
        continue;
      }
    }
    out += question[i];
    ++i;
  }
  return out;
}

void export_instances(const std::vector<ProblemInstance>& instances,
                      const std::string& path) {
  std::string out;
  for (const auto& inst : instances) {
    ordered_json line;
    line["template_id"] = inst.template_id;
    line["variant_index"] = inst.variant_index;
    line["question"] = inst.question;
    ordered_json assignment = ordered_json::object();
    for (const auto& [name, value] : inst.assignment) {
      assignment[name] = value;
    }
    line["assignment"] = std::move(assignment);
    line["truth"] = inst.truth;
    line["answer_round"] = inst.answer_round;
    out += line.dump();
    out += '\n';
  }
  detail::write_file(path, out);
}

std::vector<ProblemInstance> load_instances(const std::string& path) {
  std::string content = detail::read_file(path);
  std::vector<ProblemInstance> out;
  std::istringstream stream(content);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    if (line.empty()) {
      continue;
    }
    auto fail = [&](const std::string& why) -> IoError {
      return IoError("instances '" + path + "' line " +
                     std::to_string(line_number) + ": " + why);
    };
    ordered_json rec;
    try {
      rec = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw fail(e.what());
    }
    if (!rec.is_object()) {
      throw fail("not a JSON object");
    }
    static const std::set<std::string> kKeys = {
        "template_id", "variant_index", "question",
        "assignment",  "truth",         "answer_round"};
    for (const auto& key : kKeys) {
      if (!rec.contains(key)) {
        throw fail("missing key '" + key + "'");
      }
    }
    for (const auto& [key, value] : rec.items()) {
      (void)value;
      if (kKeys.find(key) == kKeys.end()) {
        throw fail("unexpected key '" + key + "'");
      }
    }
    ProblemInstance inst;
    try {
      inst.template_id = rec.at("template_id").get<std::string>();
      inst.variant_index = rec.at("variant_index").get<int>();
      inst.question = rec.at("question").get<std::string>();
      if (!rec.at("assignment").is_object()) {
        throw fail("assignment must be an object");
      }
      for (const auto& [name, value] : rec.at("assignment").items()) {
        if (!value.is_number()) {
          throw fail("assignment values must be numeric");
        }
        inst.assignment.emplace_back(name, value.get<double>());
      }
      inst.truth = rec.at("truth").get<double>();
      inst.answer_round = rec.at("answer_round").get<int>();
    } catch (const nlohmann::json::exception& e) {
      throw fail(e.what());
    }
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace varmath
