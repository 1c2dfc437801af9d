#include "varmath/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "varmath/errors.hpp"
#include "varmath/grader.hpp"
#include "varmath/numeric.hpp"
#include "varmath/rng.hpp"

namespace varmath {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string boxed_answer(double value, int round_digits) {
  return "The answer is \\boxed{" +
         render_number(value, round_digits, RenderPolicy::kTrimmed) + "}.";
}

}  // namespace

void GenerationConfig::validate() const {
  if (!(temperature >= 0.0)) {
    throw ConfigError("temperature must be non-negative");
  }
  if (!(top_p > 0.0 && top_p <= 1.0)) {
    throw ConfigError("top_p must be in (0, 1]");
  }
  if (samples_per_instance < 1) {
    throw ConfigError("samples_per_instance must be at least 1");
  }
  if (max_tokens < 1) {
    throw ConfigError("max_tokens must be at least 1");
  }
  if (timeout_ms < 1) {
    throw ConfigError("timeout_ms must be at least 1");
  }
  if (max_concurrent < 1) {
    throw ConfigError("max_concurrent must be at least 1");
  }
  if (retry_budget < 0) {
    throw ConfigError("retry_budget must be non-negative");
  }
  if (prompt_template.find("{question}") == std::string::npos) {
    throw ConfigError("prompt_template must contain \"{question}\"");
  }
}

std::string GenerationConfig::render_prompt(
    const ProblemInstance& instance) const {
  std::string prompt = prompt_template;
  const std::string marker = "{question}";
  std::size_t pos = 0;
  while ((pos = prompt.find(marker, pos)) != std::string::npos) {
    prompt.replace(pos, marker.size(), instance.question);
    pos += instance.question.size();
  }
  return prompt;
}

Completion OracleMock::complete(const ProblemInstance& instance,
                                int /*generation_index*/,
                                const GenerationConfig& /*config*/) {
  Completion out;
  out.text = boxed_answer(instance.truth, instance.answer_round);
  return out;
}

MemorizerMock::MemorizerMock(const std::vector<SymbolicTemplate>& corpus) {
  for (const auto& tmpl : corpus) {
    answers_[tmpl.id] = tmpl.ori_answer;
  }
}

Completion MemorizerMock::complete(const ProblemInstance& instance,
                                   int /*generation_index*/,
                                   const GenerationConfig& /*config*/) {
  auto it = answers_.find(instance.template_id);
  if (it == answers_.end()) {
    throw ConfigError("memorizer has no original answer for template '" +
                      instance.template_id + "'");
  }
  Completion out;
  out.text = "The answer is \\boxed{" + it->second + "}.";
  return out;
}

BernoulliMock::BernoulliMock(double p, std::uint64_t seed)
    : p_(p), seed_(seed) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError("accuracy probability must be in [0, 1]");
  }
}

std::string BernoulliMock::name() const {
  std::ostringstream out;
  out << "bernoulli:" << p_;
  return out.str();
}

Completion BernoulliMock::complete(const ProblemInstance& instance,
                                   int generation_index,
                                   const GenerationConfig& /*config*/) {
  // The draw depends only on (seed, template, variant, generation) so that
  // repeated runs over the same instances reproduce byte-for-byte.
  std::uint64_t h = mix64(seed_, fnv1a64(instance.template_id));
  h = mix64(h, static_cast<std::uint64_t>(instance.variant_index));
  h = mix64(h, static_cast<std::uint64_t>(generation_index));
  bool correct = Rng(h).next_unit() < p_;

  Completion out;
  double value = correct ? instance.truth : instance.truth + 1.0;
  out.text = boxed_answer(value, instance.answer_round);
  return out;
}

std::vector<EvaluationRecord> run_evaluation(
    const std::vector<ProblemInstance>& instances, ModelClient& client,
    const GenerationConfig& config) {
  config.validate();
  const int n = config.samples_per_instance;
  std::vector<EvaluationRecord> records(instances.size() *
                                        static_cast<std::size_t>(n));

  auto run_one = [&](std::size_t slot) {
    const ProblemInstance& instance = instances[slot / n];
    const int generation = static_cast<int>(slot % n);
    Completion completion = client.complete(instance, generation, config);

    EvaluationRecord& record = records[slot];
    record.template_id = instance.template_id;
    record.variant_index = instance.variant_index;
    record.generation_index = generation;
    record.completion = completion.text;
    record.latency_ms = completion.latency_ms;
    if (completion.error) {
      record.error = completion.error;
      record.correct = std::nullopt;
    } else {
      ExtractedAnswer extracted = extract_answer(completion.text);
      record.answer_raw = extracted.raw;
      record.answer_value = extracted.value;
      record.correct = judge(extracted, instance.truth, instance.answer_round);
    }
  };

  const std::size_t total = records.size();
  if (client.deterministic() ||
      static_cast<std::size_t>(config.max_concurrent) <= 1 || total <= 1) {
    for (std::size_t slot = 0; slot < total; ++slot) {
      run_one(slot);
    }
    if (client.deterministic()) {
      // Pin latencies so repeated runs are byte-identical.
      for (auto& record : records) {
        record.latency_ms = 0.0;
      }
    }
  } else {
    std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(config.max_concurrent),
                              total);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        while (true) {
          std::size_t slot = next.fetch_add(1);
          if (slot >= total) {
            return;
          }
          try {
            run_one(slot);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) {
              failure = std::current_exception();
            }
            next.store(total);
            return;
          }
        }
      });
    }
    for (auto& worker : pool) {
      worker.join();
    }
    if (failure) {
      std::rethrow_exception(failure);
    }
  }
  return records;
}

void persist_records(const std::vector<EvaluationRecord>& records,
                     const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  for (const auto& record : records) {
    ordered_json line;
    line["template_id"] = record.template_id;
    line["variant_index"] = record.variant_index;
    line["generation_index"] = record.generation_index;
    line["completion"] = record.completion;
    line["answer_raw"] = record.answer_raw;
    if (record.answer_value) {
      line["answer_value"] = *record.answer_value;
    } else {
      line["answer_value"] = nullptr;
    }
    if (record.correct) {
      line["correct"] = *record.correct;
    } else {
      line["correct"] = nullptr;
    }
    line["latency_ms"] = record.latency_ms;
    if (record.error) {
      line["error"] = *record.error;
    } else {
      line["error"] = nullptr;
    }
    out << line.dump() << '\n';
  }
  if (!out) {
    throw IoError("failed while writing '" + path + "'");
  }
}

std::vector<EvaluationRecord> load_records(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open records file '" + path + "'");
  }
  std::vector<EvaluationRecord> records;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    auto fail = [&](const std::string& what) -> IoError {
      return IoError("records '" + path + "' line " +
                     std::to_string(line_number) + ": " + what);
    };
    ordered_json parsed;
    try {
      parsed = ordered_json::parse(line);
    } catch (const std::exception& ex) {
      throw fail(ex.what());
    }
    if (!parsed.is_object()) {
      throw fail("expected a JSON object");
    }
    static const char* const kKeys[] = {
        "template_id", "variant_index", "generation_index",
        "completion",  "answer_raw",    "answer_value",
        "correct",     "latency_ms",    "error"};
    for (const char* key : kKeys) {
      if (!parsed.contains(key)) {
        throw fail(std::string("missing key '") + key + "'");
      }
    }
    EvaluationRecord record;
    try {
      record.template_id = parsed.at("template_id").get<std::string>();
      record.variant_index = parsed.at("variant_index").get<int>();
      record.generation_index = parsed.at("generation_index").get<int>();
      record.completion = parsed.at("completion").get<std::string>();
      record.answer_raw = parsed.at("answer_raw").get<std::string>();
      if (!parsed.at("answer_value").is_null()) {
        record.answer_value = parsed.at("answer_value").get<double>();
      }
      if (!parsed.at("correct").is_null()) {
        record.correct = parsed.at("correct").get<bool>();
      }
      record.latency_ms = parsed.at("latency_ms").get<double>();
      if (!parsed.at("error").is_null()) {
        record.error = parsed.at("error").get<std::string>();
      }
    } catch (const IoError&) {
      throw;
    } catch (const std::exception& ex) {
      throw fail(ex.what());
    }
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace varmath
