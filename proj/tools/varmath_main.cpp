// varmath: validate symbolic math-problem templates, instantiate them into
// concrete variants, run model evaluations, and score the results.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "varmath/errors.hpp"
#include "varmath/harness.hpp"
#include "varmath/instantiate.hpp"
#include "varmath/manifest.hpp"
#include "varmath/metrics.hpp"
#include "varmath/template.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;  // validation, configuration, or data errors
constexpr int kExitIo = 2;       // unreadable or unwritable files

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw varmath::IoError("cannot open '" + path + "' for writing");
  }
  out << content;
  if (!out) {
    throw varmath::IoError("failed while writing '" + path + "'");
  }
}

int cmd_validate(const std::string& corpus_path) {
  varmath::CorpusReport report = varmath::load_corpus_report(corpus_path);
  int errors = 0;
  int warnings = 0;
  for (const auto& issue : report.issues) {
    bool is_error = issue.severity == varmath::Severity::kError;
    (is_error ? ++errors : ++warnings);
    std::cout << (is_error ? "error" : "warning") << ": " << issue.template_id
              << ": " << issue.message << "\n";
  }
  std::cout << report.templates.size() << " template(s), " << errors
            << " error(s), " << warnings << " warning(s)\n";
  return errors > 0 ? kExitFailure : kExitOk;
}

int cmd_instantiate(const std::string& corpus_path, std::uint64_t seed,
                    int variants, const std::string& out_path, bool original) {
  auto corpus = varmath::load_corpus(corpus_path);
  std::vector<varmath::ProblemInstance> instances;
  if (original) {
    instances = varmath::original_instances(corpus);
  } else {
    varmath::SamplerConfig config;
    config.seed = seed;
    config.variants_per_template = variants;
    instances = varmath::instantiate_corpus(corpus, config);
  }
  varmath::export_instances(instances, out_path);
  std::cout << "wrote " << instances.size() << " instance(s) from "
            << corpus.size() << " template(s) to " << out_path << "\n";
  return kExitOk;
}

struct EvaluateArgs {
  std::string instances_path;
  std::string client;
  std::string corpus_path;
  std::string out_path;
  std::string base_url;
  std::string model;
  std::uint64_t seed = 0;
  varmath::GenerationConfig generation;
};

int cmd_evaluate(const EvaluateArgs& args) {
  auto instances = varmath::load_instances(args.instances_path);

  std::vector<varmath::SymbolicTemplate> corpus;
  if (!args.corpus_path.empty()) {
    corpus = varmath::load_corpus(args.corpus_path);
  } else if (args.client == "memorizer") {
    throw varmath::ConfigError(
        "the memorizer client needs --corpus for its original answers");
  }

  varmath::RunManifest manifest;
  manifest.corpus_path = args.corpus_path;
  manifest.seed = args.seed;
  manifest.variants_per_template = 0;  // instances come pre-built
  manifest.client = args.client;
  manifest.base_url = args.base_url;
  manifest.model = args.model.empty() ? args.client : args.model;
  manifest.out_dir =
      std::filesystem::path(args.out_path).parent_path().string();
  manifest.with_baseline = false;
  manifest.generation = args.generation;

  auto client = varmath::make_client(manifest, corpus);
  auto records = varmath::run_evaluation(instances, *client, args.generation);
  varmath::persist_records(records, args.out_path);
  manifest.save(args.out_path + ".manifest.json");

  std::size_t correct = 0;
  std::size_t failed = 0;
  for (const auto& record : records) {
    correct += record.correct.value_or(false) ? 1 : 0;
    failed += record.error ? 1 : 0;
  }
  std::cout << "wrote " << records.size() << " record(s) to " << args.out_path
            << " (" << correct << " correct, " << failed
            << " failed request(s))\n";
  return kExitOk;
}

struct ScoreArgs {
  std::string records_path;
  std::string corpus_path;
  std::string out_dir;
  std::string baseline_path;
  std::string strict_mode = "paired";
  std::string std_stat = "variant-mean";
  std::string model = "model";
};

int cmd_score(const ScoreArgs& args) {
  auto records = varmath::load_records(args.records_path);
  auto corpus = varmath::load_corpus(args.corpus_path);

  varmath::ReportOptions options;
  options.model = args.model;
  options.strict_mode = varmath::parse_strict_mode(args.strict_mode);
  options.variant_stat = varmath::parse_variant_stat(args.std_stat);

  std::vector<varmath::EvaluationRecord> baseline;
  bool with_baseline = !args.baseline_path.empty();
  if (with_baseline) {
    baseline = varmath::load_records(args.baseline_path);
  }

  varmath::ScoreReport report = varmath::build_score_report(
      records, corpus, options, with_baseline ? &baseline : nullptr);

  std::filesystem::create_directories(args.out_dir);
  auto in_dir = [&](const char* name) {
    return (std::filesystem::path(args.out_dir) / name).string();
  };
  write_text_file(in_dir("report.json"), varmath::report_to_json(report));
  write_text_file(in_dir("report.md"), varmath::report_to_markdown(report));
  write_text_file(in_dir("stds.csv"), varmath::report_std_csv(report));

  auto percent = [](const varmath::Rational& score) {
    return (score * varmath::Rational(100)).to_decimal(1);
  };
  std::cout << "strict: " << percent(report.variabilized.strict)
            << "  loose: " << percent(report.variabilized.loose);
  if (report.original) {
    std::cout << "  original: " << percent(report.original->strict);
  }
  if (report.drop_strict_percent) {
    std::cout << "  drop: " << report.drop_strict_percent->to_decimal(1) << "%";
  }
  std::cout << "\nreports written to " << args.out_dir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbolic math-template evaluation toolkit"};
  app.require_subcommand(1);

  // validate
  auto* validate = app.add_subcommand(
      "validate", "Check a template corpus and report every issue");
  std::string validate_corpus;
  validate->add_option("--corpus", validate_corpus, "Corpus JSON file")
      ->required();

  // instantiate
  auto* instantiate = app.add_subcommand(
      "instantiate", "Sample concrete problem variants from a corpus");
  std::string inst_corpus;
  std::string inst_out;
  std::uint64_t inst_seed = 0;
  int inst_variants = 5;
  bool inst_original = false;
  instantiate->add_option("--corpus", inst_corpus, "Corpus JSON file")
      ->required();
  instantiate->add_option("--seed", inst_seed, "Sampling seed");
  instantiate->add_option("--variants", inst_variants,
                          "Variants per template");
  instantiate->add_option("--out", inst_out, "Output instances JSONL file")
      ->required();
  instantiate->add_flag(
      "--original", inst_original,
      "Emit the original (unvariabilized) problems instead of sampling");

  // evaluate
  auto* evaluate = app.add_subcommand(
      "evaluate", "Run a model over instances and grade each completion");
  EvaluateArgs eval_args;
  evaluate->add_option("instances", eval_args.instances_path,
                       "Instances JSONL file")
      ->required();
  evaluate
      ->add_option("--client", eval_args.client,
                   "Model client: remote, oracle, memorizer, or bernoulli:<p>")
      ->required();
  evaluate->add_option("--corpus", eval_args.corpus_path,
                       "Corpus JSON file (required by the memorizer client)");
  evaluate->add_option("--samples", eval_args.generation.samples_per_instance,
                       "Completions per instance");
  evaluate->add_option("--temperature", eval_args.generation.temperature,
                       "Sampling temperature");
  evaluate->add_option("--top-p", eval_args.generation.top_p,
                       "Nucleus sampling mass");
  evaluate->add_option("--max-tokens", eval_args.generation.max_tokens,
                       "Completion token limit");
  evaluate->add_option("--timeout-ms", eval_args.generation.timeout_ms,
                       "Per-request timeout in milliseconds");
  evaluate->add_option("--max-concurrent",
                       eval_args.generation.max_concurrent,
                       "Concurrent requests for remote clients");
  evaluate->add_option("--retry-budget", eval_args.generation.retry_budget,
                       "Retries per failed request");
  evaluate->add_option("--seed", eval_args.seed,
                       "Seed for stochastic mock clients");
  evaluate->add_option("--base-url", eval_args.base_url,
                       "Endpoint base URL (remote client)");
  evaluate->add_option("--model", eval_args.model,
                       "Model name / report label");
  evaluate->add_option("--out", eval_args.out_path,
                       "Output records JSONL file")
      ->required();

  // score
  auto* score = app.add_subcommand(
      "score", "Score graded records and write comparison reports");
  ScoreArgs score_args;
  score->add_option("records", score_args.records_path, "Records JSONL file")
      ->required();
  score->add_option("--corpus", score_args.corpus_path, "Corpus JSON file")
      ->required();
  score->add_option("--out", score_args.out_dir, "Output report directory")
      ->required();
  score->add_option("--baseline", score_args.baseline_path,
                    "Records of an original-benchmark run, for score drops");
  score->add_option("--strict-mode", score_args.strict_mode,
                    "All-or-nothing mode: paired or product");
  score->add_option("--std-stat", score_args.std_stat,
                    "Dispersion statistic: variant-mean or all-or-nothing");
  score->add_option("--model", score_args.model, "Model label for reports");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) {
      return cmd_validate(validate_corpus);
    }
    if (*instantiate) {
      return cmd_instantiate(inst_corpus, inst_seed, inst_variants, inst_out,
                             inst_original);
    }
    if (*evaluate) {
      return cmd_evaluate(eval_args);
    }
    if (*score) {
      return cmd_score(score_args);
    }
  } catch (const varmath::IoError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitIo;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
