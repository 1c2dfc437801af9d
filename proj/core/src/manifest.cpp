#include "varmath/manifest.hpp"

#include <cstdlib>
#include <filesystem>
#include <utility>

#include <nlohmann/json.hpp>

#include "io_util.hpp"
#include "varmath/errors.hpp"
#include "varmath/instantiate.hpp"
#include "varmath/remote.hpp"

namespace varmath {
namespace {

using ordered_json = nlohmann::ordered_json;

}  // namespace

void RunManifest::save(const std::string& path) const {
  ordered_json out;
  out["corpus"] = corpus_path;
  out["seed"] = seed;
  out["variants_per_template"] = variants_per_template;
  out["client"] = client;
  out["base_url"] = base_url;
  out["model"] = model;
  out["out_dir"] = out_dir;
  out["with_baseline"] = with_baseline;
  out["strict_mode"] = to_string(strict_mode);
  out["variant_stat"] = to_string(variant_stat);
  ordered_json gen;
  gen["temperature"] = generation.temperature;
  gen["top_p"] = generation.top_p;
  gen["samples_per_instance"] = generation.samples_per_instance;
  gen["max_tokens"] = generation.max_tokens;
  gen["timeout_ms"] = generation.timeout_ms;
  gen["max_concurrent"] = generation.max_concurrent;
  gen["retry_budget"] = generation.retry_budget;
  gen["prompt_template"] = generation.prompt_template;
  out["generation"] = std::move(gen);
  detail::write_file(path, out.dump(2) + "\n");
}

RunManifest RunManifest::load(const std::string& path) {
  ordered_json parsed;
  try {
    parsed = ordered_json::parse(detail::read_file(path));
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& ex) {
    throw IoError("manifest '" + path + "': " + ex.what());
  }
  try {
    RunManifest manifest;
    manifest.corpus_path = parsed.at("corpus").get<std::string>();
    manifest.seed = parsed.at("seed").get<std::uint64_t>();
    manifest.variants_per_template =
        parsed.at("variants_per_template").get<int>();
    manifest.client = parsed.at("client").get<std::string>();
    manifest.base_url = parsed.at("base_url").get<std::string>();
    manifest.model = parsed.at("model").get<std::string>();
    manifest.out_dir = parsed.at("out_dir").get<std::string>();
    manifest.with_baseline = parsed.at("with_baseline").get<bool>();
    manifest.strict_mode =
        parse_strict_mode(parsed.at("strict_mode").get<std::string>());
    manifest.variant_stat =
        parse_variant_stat(parsed.at("variant_stat").get<std::string>());
    const auto& gen = parsed.at("generation");
    manifest.generation.temperature = gen.at("temperature").get<double>();
    manifest.generation.top_p = gen.at("top_p").get<double>();
    manifest.generation.samples_per_instance =
        gen.at("samples_per_instance").get<int>();
    manifest.generation.max_tokens = gen.at("max_tokens").get<int>();
    manifest.generation.timeout_ms = gen.at("timeout_ms").get<int>();
    manifest.generation.max_concurrent = gen.at("max_concurrent").get<int>();
    manifest.generation.retry_budget = gen.at("retry_budget").get<int>();
    manifest.generation.prompt_template =
        gen.at("prompt_template").get<std::string>();
    return manifest;
  } catch (const IoError&) {
    throw;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    throw IoError("manifest '" + path + "': " + ex.what());
  }
}

std::unique_ptr<ModelClient> make_client(
    const RunManifest& manifest, const std::vector<SymbolicTemplate>& corpus) {
  const std::string& spec = manifest.client;
  if (spec == "oracle") {
    return std::make_unique<OracleMock>();
  }
  if (spec == "memorizer") {
    return std::make_unique<MemorizerMock>(corpus);
  }
  if (spec.rfind("bernoulli:", 0) == 0) {
    std::string arg = spec.substr(10);
    char* end = nullptr;
    double p = std::strtod(arg.c_str(), &end);
    if (arg.empty() || end != arg.c_str() + arg.size()) {
      throw ConfigError("invalid accuracy in client spec '" + spec + "'");
    }
    return std::make_unique<BernoulliMock>(p, manifest.seed);
  }
  if (spec == "remote") {
    RemoteConfig config;
    config.base_url = manifest.base_url;
    config.model = manifest.model;
    auto transport = make_default_transport();
    if (!transport) {
      throw ConfigError("this build has no HTTP transport");
    }
    return std::make_unique<RemoteEndpoint>(std::move(config),
                                            std::move(transport));
  }
  throw ConfigError(
      "unknown client '" + spec +
      "' (expected oracle, memorizer, bernoulli:<p>, or remote)");
}

PipelineResult run_pipeline(const RunManifest& manifest) {
  if (manifest.out_dir.empty()) {
    throw ConfigError("manifest needs an output directory");
  }
  manifest.generation.validate();

  auto corpus = load_corpus(manifest.corpus_path);
  auto client = make_client(manifest, corpus);

  std::filesystem::create_directories(manifest.out_dir);
  auto path_in_out = [&](const char* name) {
    return (std::filesystem::path(manifest.out_dir) / name).string();
  };

  PipelineResult result;

  SamplerConfig sampler;
  sampler.seed = manifest.seed;
  sampler.variants_per_template = manifest.variants_per_template;
  auto instances = instantiate_corpus(corpus, sampler);
  result.instances_path = path_in_out("instances.jsonl");
  export_instances(instances, result.instances_path);

  auto records = run_evaluation(instances, *client, manifest.generation);
  result.records_path = path_in_out("records.jsonl");
  persist_records(records, result.records_path);

  ReportOptions options;
  options.model = manifest.model.empty() ? manifest.client : manifest.model;
  options.strict_mode = manifest.strict_mode;
  options.variant_stat = manifest.variant_stat;

  std::vector<EvaluationRecord> baseline_records;
  if (manifest.with_baseline) {
    auto baseline_instances = original_instances(corpus);
    result.baseline_instances_path = path_in_out("original_instances.jsonl");
    export_instances(baseline_instances, result.baseline_instances_path);
    baseline_records =
        run_evaluation(baseline_instances, *client, manifest.generation);
    result.baseline_records_path = path_in_out("original_records.jsonl");
    persist_records(baseline_records, result.baseline_records_path);
  }

  result.report = build_score_report(
      records, corpus, options,
      manifest.with_baseline ? &baseline_records : nullptr);

  result.report_json_path = path_in_out("report.json");
  detail::write_file(result.report_json_path, report_to_json(result.report));
  result.report_markdown_path = path_in_out("report.md");
  detail::write_file(result.report_markdown_path,
                     report_to_markdown(result.report));
  result.std_csv_path = path_in_out("stds.csv");
  detail::write_file(result.std_csv_path, report_std_csv(result.report));

  result.manifest_path = path_in_out("manifest.json");
  manifest.save(result.manifest_path);

  return result;
}

}  // namespace varmath
