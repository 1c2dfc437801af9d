#include <doctest.h>

#include <atomic>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "support/tmpdir.hpp"
#include "varmath/errors.hpp"
#include "varmath/harness.hpp"
#include "varmath/numeric.hpp"
#include "varmath/template.hpp"

using namespace varmath;

namespace {

ProblemInstance make_instance(std::string id, int variant, double truth,
                              int answer_round) {
  ProblemInstance instance;
  instance.template_id = std::move(id);
  instance.variant_index = variant;
  instance.question = "placeholder question";
  instance.truth = truth;
  instance.answer_round = answer_round;
  return instance;
}

std::string data_path(const char* name) {
  return std::string(VARMATH_DATA_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("generation config validation rejects out-of-range fields") {
  GenerationConfig config;
  CHECK_NOTHROW(config.validate());

  auto rejects = [](auto mutate) {
    GenerationConfig bad;
    mutate(bad);
    CHECK_THROWS_AS(bad.validate(), ConfigError);
  };
  rejects([](GenerationConfig& c) { c.temperature = -0.1; });
  rejects([](GenerationConfig& c) { c.top_p = 0.0; });
  rejects([](GenerationConfig& c) { c.top_p = 1.5; });
  rejects([](GenerationConfig& c) { c.samples_per_instance = 0; });
  rejects([](GenerationConfig& c) { c.max_tokens = 0; });
  rejects([](GenerationConfig& c) { c.timeout_ms = 0; });
  rejects([](GenerationConfig& c) { c.max_concurrent = 0; });
  rejects([](GenerationConfig& c) { c.retry_budget = -1; });
  rejects([](GenerationConfig& c) { c.prompt_template = "no marker"; });
}

TEST_CASE("prompt rendering substitutes every question marker") {
  ProblemInstance instance = make_instance("t", 0, 1.0, 0);
  instance.question = "What is 6*7?";

  GenerationConfig config;
  CHECK(config.render_prompt(instance) ==
        "What is 6*7?\n\nPlease reason step by step, and put your final "
        "answer within \\boxed{}.");

  config.prompt_template = "{question} -- {question}";
  CHECK(config.render_prompt(instance) == "What is 6*7? -- What is 6*7?");

  // A question that itself contains the marker must not recurse.
  instance.question = "{question}";
  config.prompt_template = "Q: {question}";
  CHECK(config.render_prompt(instance) == "Q: {question}");
}

TEST_CASE("the oracle mock answers the instance truth at answer precision") {
  OracleMock oracle;
  GenerationConfig config;
  CHECK(oracle.name() == "oracle");
  CHECK(oracle.deterministic());

  ProblemInstance integral = make_instance("t", 0, 42.0, 0);
  CHECK(oracle.complete(integral, 0, config).text ==
        "The answer is \\boxed{42}.");

  ProblemInstance fractional = make_instance("t", 1, 2.5, 2);
  CHECK(oracle.complete(fractional, 3, config).text ==
        "The answer is \\boxed{2.5}.");
}

TEST_CASE("the memorizer mock replays original answers by template id") {
  auto corpus = load_corpus(data_path("sample_corpus.json"));
  MemorizerMock memorizer(corpus);
  GenerationConfig config;
  CHECK(memorizer.name() == "memorizer");

  // unit-price's published answer is the string "2.33"; the memorizer
  // repeats it verbatim no matter which variant is asked.
  ProblemInstance variant = make_instance("unit-price", 4, 1.75, 2);
  CHECK(memorizer.complete(variant, 0, config).text ==
        "The answer is \\boxed{2.33}.");

  ProblemInstance unknown = make_instance("not-in-corpus", 0, 1.0, 0);
  CHECK_THROWS_AS(memorizer.complete(unknown, 0, config), ConfigError);
}

TEST_CASE("the bernoulli mock draws reproducibly from its key") {
  CHECK_THROWS_AS(BernoulliMock(-0.1, 1), ConfigError);
  CHECK_THROWS_AS(BernoulliMock(1.1, 1), ConfigError);
  CHECK(BernoulliMock(0.7, 1).name() == "bernoulli:0.7");

  GenerationConfig config;
  ProblemInstance instance = make_instance("coin", 2, 10.0, 0);

  SUBCASE("identical keys reproduce, different seeds diverge") {
    BernoulliMock a(0.6, 99);
    BernoulliMock b(0.6, 99);
    BernoulliMock c(0.6, 100);
    bool any_diff = false;
    for (int gen = 0; gen < 200; ++gen) {
      auto ta = a.complete(instance, gen, config).text;
      auto tb = b.complete(instance, gen, config).text;
      auto tc = c.complete(instance, gen, config).text;
      CHECK(ta == tb);
      any_diff = any_diff || (ta != tc);
    }
    CHECK(any_diff);
  }

  SUBCASE("the long-run frequency matches p") {
    BernoulliMock mock(0.6, 7);
    const std::string right = "The answer is \\boxed{10}.";
    int hits = 0;
    const int draws = 4000;
    for (int gen = 0; gen < draws; ++gen) {
      if (mock.complete(instance, gen, config).text == right) {
        ++hits;
      }
    }
    double freq = static_cast<double>(hits) / draws;
    CHECK(freq == doctest::Approx(0.6).epsilon(0.05));
  }

  SUBCASE("the endpoints are exact") {
    BernoulliMock never(0.0, 3);
    BernoulliMock always(1.0, 3);
    for (int gen = 0; gen < 32; ++gen) {
      CHECK(never.complete(instance, gen, config).text ==
            "The answer is \\boxed{11}.");
      CHECK(always.complete(instance, gen, config).text ==
            "The answer is \\boxed{10}.");
    }
  }
}

TEST_CASE("evaluation orders records by instance then generation") {
  std::vector<ProblemInstance> instances = {
      make_instance("first", 0, 5.0, 0),
      make_instance("first", 1, 7.0, 0),
      make_instance("second", 0, 2.25, 2),
  };
  OracleMock oracle;
  GenerationConfig config;
  config.samples_per_instance = 3;

  auto records = run_evaluation(instances, oracle, config);
  REQUIRE(records.size() == 9);
  for (std::size_t slot = 0; slot < records.size(); ++slot) {
    const auto& record = records[slot];
    const auto& instance = instances[slot / 3];
    CHECK(record.template_id == instance.template_id);
    CHECK(record.variant_index == instance.variant_index);
    CHECK(record.generation_index == static_cast<int>(slot % 3));
    REQUIRE(record.correct.has_value());
    CHECK(*record.correct);
    REQUIRE(record.answer_value.has_value());
    CHECK(*record.answer_value == doctest::Approx(instance.truth));
    CHECK(record.latency_ms == 0.0);  // pinned for deterministic clients
    CHECK_FALSE(record.error.has_value());
  }
}

namespace {

class FailingClient : public ModelClient {
 public:
  std::string name() const override { return "failing"; }
  Completion complete(const ProblemInstance&, int,
                      const GenerationConfig&) override {
    Completion out;
    out.error = "network";
    out.latency_ms = 12.5;
    return out;
  }
};

class ThreadedOracle : public ModelClient {
 public:
  std::string name() const override { return "threaded"; }
  bool deterministic() const override { return false; }
  Completion complete(const ProblemInstance& instance, int,
                      const GenerationConfig&) override {
    calls.fetch_add(1);
    Completion out;
    out.text = "The answer is \\boxed{" +
               render_number(instance.truth, instance.answer_round,
                             RenderPolicy::kTrimmed) +
               "}.";
    out.latency_ms = 1.5;
    return out;
  }
  std::atomic<int> calls{0};
};

class ThrowingClient : public ModelClient {
 public:
  std::string name() const override { return "throwing"; }
  bool deterministic() const override { return false; }
  Completion complete(const ProblemInstance&, int generation,
                      const GenerationConfig&) override {
    if (generation == 3) {
      throw std::runtime_error("simulated transport bug");
    }
    return Completion{"The answer is \\boxed{0}.", std::nullopt, 0.0};
  }
};

}  // namespace

TEST_CASE("failed requests become error records that score as incorrect") {
  std::vector<ProblemInstance> instances = {make_instance("t", 0, 1.0, 0)};
  FailingClient client;
  GenerationConfig config;
  config.samples_per_instance = 2;

  auto records = run_evaluation(instances, client, config);
  REQUIRE(records.size() == 2);
  for (const auto& record : records) {
    CHECK(record.completion.empty());
    CHECK(record.answer_raw.empty());
    CHECK_FALSE(record.answer_value.has_value());
    CHECK_FALSE(record.correct.has_value());
    REQUIRE(record.error.has_value());
    CHECK(*record.error == "network");
  }
}

TEST_CASE("non-deterministic clients run on a worker pool without reordering") {
  std::vector<ProblemInstance> instances = {
      make_instance("a", 0, 1.0, 0),
      make_instance("b", 0, 2.0, 0),
      make_instance("c", 0, 3.0, 0),
  };
  ThreadedOracle client;
  GenerationConfig config;
  config.samples_per_instance = 5;
  config.max_concurrent = 4;

  auto records = run_evaluation(instances, client, config);
  REQUIRE(records.size() == 15);
  CHECK(client.calls.load() == 15);
  for (std::size_t slot = 0; slot < records.size(); ++slot) {
    const auto& record = records[slot];
    CHECK(record.template_id == instances[slot / 5].template_id);
    CHECK(record.generation_index == static_cast<int>(slot % 5));
    REQUIRE(record.correct.has_value());
    CHECK(*record.correct);
    CHECK(record.latency_ms == 1.5);  // real latencies are kept
  }
}

TEST_CASE("a worker exception propagates out of the evaluation") {
  std::vector<ProblemInstance> instances = {make_instance("t", 0, 0.0, 0)};
  ThrowingClient client;
  GenerationConfig config;
  config.samples_per_instance = 8;
  config.max_concurrent = 4;
  CHECK_THROWS_AS(run_evaluation(instances, client, config),
                  std::runtime_error);
}

TEST_CASE("records survive a persist/load round trip") {
  testsupport::TempDir tmp;
  const std::string path = tmp.file("records.jsonl");

  std::vector<EvaluationRecord> records(3);
  records[0].template_id = "alpha";
  records[0].variant_index = 0;
  records[0].generation_index = 0;
  records[0].completion = "The answer is \\boxed{42}.";
  records[0].answer_raw = "42";
  records[0].answer_value = 42.0;
  records[0].correct = true;
  records[0].latency_ms = 0.0;

  records[1].template_id = "alpha";
  records[1].variant_index = 1;
  records[1].generation_index = 2;
  records[1].completion = "So \\boxed{4\\pi} is the area.";
  records[1].answer_raw = "4\\pi";
  records[1].correct = false;

  records[2].template_id = "beta";
  records[2].variant_index = 4;
  records[2].generation_index = 15;
  records[2].correct = std::nullopt;
  records[2].latency_ms = 250.0;
  records[2].error = "http_503";

  persist_records(records, path);
  auto loaded = load_records(path);
  REQUIRE(loaded.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(loaded[i].template_id == records[i].template_id);
    CHECK(loaded[i].variant_index == records[i].variant_index);
    CHECK(loaded[i].generation_index == records[i].generation_index);
    CHECK(loaded[i].completion == records[i].completion);
    CHECK(loaded[i].answer_raw == records[i].answer_raw);
    CHECK(loaded[i].answer_value == records[i].answer_value);
    CHECK(loaded[i].correct == records[i].correct);
    CHECK(loaded[i].latency_ms == records[i].latency_ms);
    CHECK(loaded[i].error == records[i].error);
  }
}

TEST_CASE("malformed record files fail with the offending line number") {
  testsupport::TempDir tmp;
  auto write = [&](const char* name, const std::string& body) {
    std::string path = tmp.file(name);
    std::ofstream out(path, std::ios::binary);
    out << body;
    return path;
  };
  const std::string good =
      R"({"template_id":"t","variant_index":0,"generation_index":0,)"
      R"("completion":"","answer_raw":"","answer_value":null,)"
      R"("correct":true,"latency_ms":0.0,"error":null})";

  SUBCASE("blank lines are skipped") {
    auto path = write("blanks.jsonl", good + "\n\n  \t\n" + good + "\n");
    CHECK(load_records(path).size() == 2);
  }
  SUBCASE("a missing key names the line") {
    auto path = write("missing.jsonl", good + "\n{\"template_id\":\"x\"}\n");
    CHECK_THROWS_WITH_AS(load_records(path),
                         doctest::Contains("line 2"), IoError);
  }
  SUBCASE("a non-object line is rejected") {
    auto path = write("array.jsonl", "[1,2]\n");
    CHECK_THROWS_WITH_AS(load_records(path),
                         doctest::Contains("expected a JSON object"), IoError);
  }
  SUBCASE("unparseable JSON is rejected") {
    auto path = write("garbage.jsonl", "not json\n");
    CHECK_THROWS_WITH_AS(load_records(path), doctest::Contains("line 1"),
                         IoError);
  }
  SUBCASE("a wrongly typed field is rejected") {
    std::string bad = good;
    bad.replace(bad.find("\"t\""), 3, "17");
    auto path = write("typed.jsonl", bad + "\n");
    CHECK_THROWS_WITH_AS(load_records(path), doctest::Contains("line 1"),
                         IoError);
  }
  SUBCASE("a missing file is an io error") {
    CHECK_THROWS_AS(load_records(tmp.file("nope.jsonl")), IoError);
  }
}
