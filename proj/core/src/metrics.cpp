#include "varmath/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "io_util.hpp"
#include "varmath/errors.hpp"

namespace varmath {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string format_std(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

/// Score scaled to percent, one decimal ("0.125" -> "12.5").
std::string percent_text(const Rational& score) {
  return (score * Rational(100)).to_decimal(1);
}

ordered_json rational_to_json(const Rational& value) {
  ordered_json out;
  out["num"] = value.num();
  out["den"] = value.den();
  out["text"] = value.to_decimal(6);
  return out;
}

Rational rational_from_json(const ordered_json& value,
                            const std::string& where) {
  if (!value.is_object() || !value.contains("num") || !value.contains("den")) {
    throw IoError(where + ": expected an object with 'num' and 'den'");
  }
  return Rational(value.at("num").get<long long>(),
                  value.at("den").get<long long>());
}

RunScores run_scores_from_json(const ordered_json& node,
                               const std::string& where) {
  RunScores out;
  out.strict = rational_from_json(node.at("strict"), where + ".strict");
  out.loose = rational_from_json(node.at("loose"), where + ".loose");
  for (const auto& row : node.at("per_template")) {
    TemplateScore score;
    score.template_id = row.at("template_id").get<std::string>();
    score.strict = rational_from_json(row.at("strict"), where + " per-template strict");
    score.loose = rational_from_json(row.at("loose"), where + " per-template loose");
    score.std_dev = row.at("std").get<double>();
    out.per_template.push_back(std::move(score));
  }
  return out;
}

ordered_json run_scores_to_json(const RunScores& scores) {
  ordered_json out;
  out["strict"] = rational_to_json(scores.strict);
  out["loose"] = rational_to_json(scores.loose);
  auto rows = ordered_json::array();
  for (const auto& entry : scores.per_template) {
    ordered_json row;
    row["template_id"] = entry.template_id;
    row["strict"] = rational_to_json(entry.strict);
    row["loose"] = rational_to_json(entry.loose);
    row["std"] = entry.std_dev;
    rows.push_back(std::move(row));
  }
  out["per_template"] = std::move(rows);
  return out;
}

/// Per-generation statistic values for a grid.
std::vector<double> generation_values(const TemplateGrid& grid,
                                      VariantStat stat) {
  std::vector<double> values(static_cast<std::size_t>(grid.generations), 0.0);
  for (int g = 0; g < grid.generations; ++g) {
    if (stat == VariantStat::kAllOrNothing) {
      bool all = true;
      for (int v = 0; v < grid.variants; ++v) {
        all = all && grid.correct[v][g];
      }
      values[g] = all ? 1.0 : 0.0;
    } else {
      int hits = 0;
      for (int v = 0; v < grid.variants; ++v) {
        hits += grid.correct[v][g] ? 1 : 0;
      }
      values[g] = static_cast<double>(hits) / grid.variants;
    }
  }
  return values;
}

RunScores score_run(const std::vector<TemplateGrid>& grids,
                    const std::vector<SymbolicTemplate>& corpus,
                    const ReportOptions& options, RunKind kind,
                    const char* run_label) {
  std::map<std::string, const TemplateGrid*> by_id;
  for (const auto& grid : grids) {
    by_id[grid.template_id] = &grid;
  }
  for (const auto& [id, grid] : by_id) {
    (void)grid;
    bool known = std::any_of(corpus.begin(), corpus.end(),
                             [&](const SymbolicTemplate& t) { return t.id == id; });
    if (!known) {
      throw ConfigError(std::string(run_label) +
                        " records reference a template not in the corpus: '" +
                        id + "'");
    }
  }

  RunScores out;
  Rational strict_sum;
  Rational loose_sum;
  for (const auto& tmpl : corpus) {
    auto it = by_id.find(tmpl.id);
    if (it == by_id.end()) {
      throw ConfigError(std::string(run_label) +
                        " records are missing corpus template '" + tmpl.id +
                        "'");
    }
    const TemplateGrid& grid = *it->second;
    TemplateScore score;
    score.template_id = tmpl.id;
    score.strict = template_strict(grid, options.strict_mode);
    score.loose = template_loose(grid);
    score.std_dev = template_std(grid, kind, options.variant_stat);
    strict_sum += score.strict;
    loose_sum += score.loose;
    out.per_template.push_back(std::move(score));
  }
  auto count = static_cast<long long>(corpus.size());
  out.strict = strict_sum / Rational(count);
  out.loose = loose_sum / Rational(count);
  return out;
}

}  // namespace

std::string to_string(StrictMode mode) {
  return mode == StrictMode::kPaired ? "paired" : "product";
}

std::string to_string(VariantStat stat) {
  return stat == VariantStat::kVariantMean ? "variant-mean" : "all-or-nothing";
}

StrictMode parse_strict_mode(const std::string& text) {
  if (text == "paired") {
    return StrictMode::kPaired;
  }
  if (text == "product") {
    return StrictMode::kProduct;
  }
  throw ConfigError("unknown strict mode '" + text +
                    "' (expected 'paired' or 'product')");
}

VariantStat parse_variant_stat(const std::string& text) {
  if (text == "variant-mean") {
    return VariantStat::kVariantMean;
  }
  if (text == "all-or-nothing") {
    return VariantStat::kAllOrNothing;
  }
  throw ConfigError("unknown variant statistic '" + text +
                    "' (expected 'variant-mean' or 'all-or-nothing')");
}

std::vector<TemplateGrid> group_records(
    const std::vector<EvaluationRecord>& records) {
  if (records.empty()) {
    throw RaggedRecordsError("no records to score");
  }
  // template -> variant -> generation -> correct, in first-seen order.
  std::vector<std::string> order;
  std::map<std::string, std::map<int, std::map<int, bool>>> cells;
  for (const auto& record : records) {
    if (record.variant_index < 0 || record.generation_index < 0) {
      throw RaggedRecordsError("template '" + record.template_id +
                               "' has a negative variant or generation index");
    }
    auto [it, inserted] = cells.try_emplace(record.template_id);
    if (inserted) {
      order.push_back(record.template_id);
    }
    auto& generations = it->second[record.variant_index];
    bool correct = record.correct.value_or(false);
    if (!generations.emplace(record.generation_index, correct).second) {
      throw RaggedRecordsError(
          "duplicate record for template '" + record.template_id +
          "' variant " + std::to_string(record.variant_index) +
          " generation " + std::to_string(record.generation_index));
    }
  }

  std::vector<TemplateGrid> grids;
  int global_generations = -1;
  for (const auto& id : order) {
    const auto& variants = cells.at(id);
    TemplateGrid grid;
    grid.template_id = id;
    grid.variants = static_cast<int>(variants.size());
    // Variant indices must be exactly 0..V-1.
    int expected = 0;
    for (const auto& [variant_index, generations] : variants) {
      if (variant_index != expected) {
        throw RaggedRecordsError("template '" + id + "' is missing variant " +
                                 std::to_string(expected));
      }
      ++expected;
      if (grid.generations == 0) {
        grid.generations = static_cast<int>(generations.size());
      }
      if (static_cast<int>(generations.size()) != grid.generations) {
        throw RaggedRecordsError(
            "template '" + id + "' variant " + std::to_string(variant_index) +
            " has " + std::to_string(generations.size()) +
            " generations but variant 0 has " +
            std::to_string(grid.generations));
      }
      int expected_generation = 0;
      for (const auto& [generation_index, correct] : generations) {
        (void)correct;
        if (generation_index != expected_generation) {
          throw RaggedRecordsError("template '" + id + "' variant " +
                                   std::to_string(variant_index) +
                                   " is missing generation " +
                                   std::to_string(expected_generation));
        }
        ++expected_generation;
      }
    }
    grid.correct.assign(static_cast<std::size_t>(grid.variants),
                        std::vector<bool>(
                            static_cast<std::size_t>(grid.generations), false));
    for (const auto& [variant_index, generations] : variants) {
      for (const auto& [generation_index, correct] : generations) {
        grid.correct[variant_index][generation_index] = correct;
      }
    }
    if (global_generations < 0) {
      global_generations = grid.generations;
    } else if (grid.generations != global_generations) {
      throw RaggedRecordsError(
          "template '" + id + "' has " + std::to_string(grid.generations) +
          " generations per variant but template '" + grids.front().template_id +
          "' has " + std::to_string(global_generations));
    }
    grids.push_back(std::move(grid));
  }
  return grids;
}

Rational template_strict(const TemplateGrid& grid, StrictMode mode) {
  if (mode == StrictMode::kPaired) {
    long long hits = 0;
    for (int g = 0; g < grid.generations; ++g) {
      bool all = true;
      for (int v = 0; v < grid.variants; ++v) {
        all = all && grid.correct[v][g];
      }
      hits += all ? 1 : 0;
    }
    return Rational(hits, grid.generations);
  }
  Rational product(1);
  for (int v = 0; v < grid.variants; ++v) {
    long long hits = 0;
    for (int g = 0; g < grid.generations; ++g) {
      hits += grid.correct[v][g] ? 1 : 0;
    }
    product *= Rational(hits, grid.generations);
  }
  return product;
}

Rational template_loose(const TemplateGrid& grid) {
  long long hits = 0;
  for (const auto& row : grid.correct) {
    for (bool bit : row) {
      hits += bit ? 1 : 0;
    }
  }
  return Rational(hits, static_cast<long long>(grid.variants) *
                            static_cast<long long>(grid.generations));
}

Rational strict_score(const std::vector<TemplateGrid>& grids,
                      StrictMode mode) {
  if (grids.empty()) {
    throw ConfigError("cannot score an empty record set");
  }
  Rational sum;
  for (const auto& grid : grids) {
    sum += template_strict(grid, mode);
  }
  return sum / Rational(static_cast<long long>(grids.size()));
}

Rational loose_score(const std::vector<TemplateGrid>& grids) {
  if (grids.empty()) {
    throw ConfigError("cannot score an empty record set");
  }
  Rational sum;
  for (const auto& grid : grids) {
    sum += template_loose(grid);
  }
  return sum / Rational(static_cast<long long>(grids.size()));
}

double template_std(const TemplateGrid& grid, RunKind kind, VariantStat stat) {
  if (kind == RunKind::kOriginal && grid.variants != 1) {
    throw ConfigError("original-run dispersion requires one variant per "
                      "template; template '" +
                      grid.template_id + "' has " +
                      std::to_string(grid.variants));
  }
  std::vector<double> values = generation_values(grid, stat);
  double mean = 0.0;
  for (double v : values) {
    mean += v;
  }
  mean /= static_cast<double>(values.size());
  double variance = 0.0;
  for (double v : values) {
    variance += (v - mean) * (v - mean);
  }
  variance /= static_cast<double>(values.size());
  return variance > 0.0 ? std::sqrt(variance) : 0.0;
}

std::optional<Rational> drop_percent(const Rational& original,
                                     const Rational& variant) {
  if (original <= Rational(0)) {
    return std::nullopt;
  }
  return (variant - original) * Rational(100) / original;
}

ScoreReport build_score_report(
    const std::vector<EvaluationRecord>& records,
    const std::vector<SymbolicTemplate>& corpus, const ReportOptions& options,
    const std::vector<EvaluationRecord>* baseline) {
  if (corpus.empty()) {
    throw ConfigError("cannot build a report for an empty corpus");
  }
  ScoreReport report;
  report.model = options.model;
  report.strict_mode = options.strict_mode;
  report.variant_stat = options.variant_stat;

  auto grids = group_records(records);
  report.variabilized =
      score_run(grids, corpus, options, RunKind::kVariabilized, "variabilized");

  if (baseline != nullptr) {
    auto baseline_grids = group_records(*baseline);
    report.original = score_run(baseline_grids, corpus, options,
                                RunKind::kOriginal, "original");
    report.drop_strict_percent =
        drop_percent(report.original->strict, report.variabilized.strict);
    report.drop_loose_percent =
        drop_percent(report.original->loose, report.variabilized.loose);
  }
  return report;
}

std::string report_to_json(const ScoreReport& report) {
  ordered_json out;
  out["model"] = report.model;
  out["strict_mode"] = to_string(report.strict_mode);
  out["variant_stat"] = to_string(report.variant_stat);
  out["variabilized"] = run_scores_to_json(report.variabilized);
  if (report.original) {
    out["original"] = run_scores_to_json(*report.original);
  } else {
    out["original"] = nullptr;
  }
  ordered_json drops;
  drops["strict"] = report.drop_strict_percent
                        ? rational_to_json(*report.drop_strict_percent)
                        : ordered_json(nullptr);
  drops["loose"] = report.drop_loose_percent
                       ? rational_to_json(*report.drop_loose_percent)
                       : ordered_json(nullptr);
  out["drop_percent"] = std::move(drops);
  return out.dump(2) + "\n";
}

ScoreReport load_report(const std::string& path) {
  ordered_json parsed;
  try {
    parsed = ordered_json::parse(detail::read_file(path));
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& ex) {
    throw IoError("report '" + path + "': " + ex.what());
  }
  try {
    ScoreReport report;
    report.model = parsed.at("model").get<std::string>();
    report.strict_mode = parse_strict_mode(parsed.at("strict_mode").get<std::string>());
    report.variant_stat =
        parse_variant_stat(parsed.at("variant_stat").get<std::string>());
    report.variabilized =
        run_scores_from_json(parsed.at("variabilized"), "variabilized");
    if (!parsed.at("original").is_null()) {
      report.original = run_scores_from_json(parsed.at("original"), "original");
    }
    const auto& drops = parsed.at("drop_percent");
    if (!drops.at("strict").is_null()) {
      report.drop_strict_percent =
          rational_from_json(drops.at("strict"), "drop strict");
    }
    if (!drops.at("loose").is_null()) {
      report.drop_loose_percent =
          rational_from_json(drops.at("loose"), "drop loose");
    }
    return report;
  } catch (const IoError&) {
    throw;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    throw IoError("report '" + path + "': " + ex.what());
  }
}

std::string report_to_markdown(const ScoreReport& report) {
  std::ostringstream out;
  out << "# Score report: " << report.model << "\n\n";
  out << "All-or-nothing mode: " << to_string(report.strict_mode)
      << "; dispersion statistic: " << to_string(report.variant_stat)
      << ". Scores are percentages.\n\n";

  out << "| Model | original | variabilized | Drop |\n";
  out << "| --- | --- | --- | --- |\n";
  out << "| " << report.model << " | ";
  if (report.original) {
    out << percent_text(report.original->strict);
  } else {
    out << "-";
  }
  out << " | " << percent_text(report.variabilized.strict) << " | ";
  if (report.drop_strict_percent) {
    out << report.drop_strict_percent->to_decimal(1);
  } else {
    out << "-";
  }
  out << " |\n\n";

  out << "Loose (mean accuracy, variabilized): "
      << percent_text(report.variabilized.loose);
  if (report.original) {
    out << "; original: " << percent_text(report.original->loose);
    if (report.drop_loose_percent) {
      out << "; drop: " << report.drop_loose_percent->to_decimal(1);
    }
  }
  out << "\n\n## Per-template scores (variabilized)\n\n";
  out << "| template | strict | loose | std |\n";
  out << "| --- | --- | --- | --- |\n";
  for (const auto& row : report.variabilized.per_template) {
    out << "| " << row.template_id << " | " << percent_text(row.strict)
        << " | " << percent_text(row.loose) << " | "
        << format_std(row.std_dev) << " |\n";
  }
  if (report.original) {
    out << "\n## Per-template scores (original)\n\n";
    out << "| template | strict | loose | std |\n";
    out << "| --- | --- | --- | --- |\n";
    for (const auto& row : report.original->per_template) {
      out << "| " << row.template_id << " | " << percent_text(row.strict)
          << " | " << percent_text(row.loose) << " | "
          << format_std(row.std_dev) << " |\n";
    }
  }
  return out.str();
}

std::string report_std_csv(const ScoreReport& report) {
  std::ostringstream out;
  out << "template_id,mode,std\n";
  for (const auto& row : report.variabilized.per_template) {
    out << row.template_id << ",variabilized," << format_std(row.std_dev)
        << "\n";
  }
  if (report.original) {
    for (const auto& row : report.original->per_template) {
      out << row.template_id << ",original," << format_std(row.std_dev)
          << "\n";
    }
  }
  return out.str();
}

}  // namespace varmath
