#include <doctest.h>

#include <algorithm>
#include <map>
#include <sstream>

#include "polarity/config.hpp"

using namespace polarity;

TEST_CASE("defaults serialize and parse back losslessly") {
  RunConfig cfg;
  std::stringstream ss;
  cfg.write(ss);
  CHECK(RunConfig::read(ss) == cfg);
}

TEST_CASE("every key round trips") {
  RunConfig cfg;
  cfg.set("ratio", "0.7");
  cfg.set("seed", "7");
  cfg.set("theta", "3");
  cfg.set("negation_window", "2");
  cfg.set("schemes", "unigram, bows");
  cfg.set("kinds", "nb");
  cfg.set("alpha", "0.5");
  cfg.set("naive_alpha", "0.1");
  cfg.set("C", "2.5");
  cfg.set("tolerance", "1e-4");
  cfg.set("kernel_preset", "books");
  cfg.set("fallback", "keep-majority-runs");
  cfg.set("min_count", "3");
  cfg.set("trainset_correction", "false");
  cfg.set("sentence_correction", "no");
  cfg.set("retrain_naive", "0");
  cfg.set("negation_in_uncorrected", "true");
  cfg.set("jobs", "4");
  cfg.set("output", "results/x");
  cfg.corpora["beauty"] = "data/beauty.jsonl";
  cfg.corpora["toys"] = "data/toys.jsonl";
  std::stringstream ss;
  cfg.write(ss);
  const RunConfig back = RunConfig::read(ss);
  CHECK(back == cfg);
  CHECK(back.schemes == std::vector<FeatureScheme>{FeatureScheme::Unigram, FeatureScheme::BagOfWords});
  CHECK(back.C == 2.5);
}

TEST_CASE("bad keys and values are configuration errors") {
  RunConfig cfg;
  CHECK_THROWS_AS(cfg.set("thetta", "2"), ConfigError);
  CHECK_THROWS_AS(cfg.set("theta", "0"), ConfigError);
  CHECK_THROWS_AS(cfg.set("theta", "two"), ConfigError);
  CHECK_THROWS_AS(cfg.set("ratio", "1.5"), ConfigError);
  CHECK_THROWS_AS(cfg.set("negation_window", "4"), ConfigError);
  CHECK_THROWS_AS(cfg.set("schemes", "trigram"), ConfigError);
  CHECK_THROWS_AS(cfg.set("kernel_preset", "toys"), ConfigError);
  CHECK_THROWS_AS(cfg.set("trainset_correction", "maybe"), ConfigError);
  std::stringstream bad_section("[beauty]\ncorpus = x\n");
  CHECK_THROWS_AS(RunConfig::read(bad_section), ConfigError);
  std::stringstream bad_line("theta 2\n");
  CHECK_THROWS_AS(RunConfig::read(bad_line), ConfigError);
  CHECK_THROWS_AS(RunConfig::load("/nonexistent/run.cfg"), IoError);
}

TEST_CASE("comments and sections") {
  std::stringstream ss("# experiment\ntheta = 3\n; note\n[domain.books]\ncorpus = books.jsonl\n");
  const RunConfig cfg = RunConfig::read(ss);
  CHECK(cfg.theta == 3);
  CHECK(cfg.corpora.at("books") == "books.jsonl");
}

TEST_CASE("environment overrides file values") {
  std::stringstream ss("theta = 3\nseed = 1\n");
  RunConfig cfg = RunConfig::read(ss);
  const std::map<std::string, std::string> env = {{"POLARITY_SEED", "9"}, {"POLARITY_NEGATION_WINDOW", "1"}};
  cfg.apply_env([&](const std::string& name) -> std::optional<std::string> {
    const auto it = env.find(name);
    return it == env.end() ? std::nullopt : std::optional<std::string>(it->second);
  });
  CHECK(cfg.theta == 3);
  CHECK(cfg.seed == 9);
  CHECK(cfg.negation_window == 1);
}

TEST_CASE("experiment configuration resolves presets") {
  RunConfig cfg;
  CHECK(cfg.experiment("beauty").hyper.kernel.type == KernelType::Linear);
  CHECK(cfg.experiment("beauty").hyper.C == 1.0);
  cfg.kernel_preset = "auto";
  const auto beauty = cfg.experiment("beauty");
  CHECK(beauty.hyper.kernel.type == KernelType::NormalizedPoly);
  CHECK(beauty.hyper.C == doctest::Approx(1.1989425641153333));
  CHECK(cfg.experiment("toys").hyper.kernel.type == KernelType::Linear);
  cfg.C = 3.0;
  CHECK(cfg.experiment("kitchen").hyper.C == 3.0);
  cfg.theta = 4;
  CHECK(cfg.experiment("kitchen").correction.theta == 4);
  CHECK(cfg.grid().size() == 14);
}

TEST_CASE("reference documents every key") {
  const auto docs = config_reference();
  RunConfig cfg;
  std::stringstream ss;
  cfg.write(ss);
  for (std::string line; std::getline(ss, line);) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    if (key == "corpus") continue;
    CHECK_MESSAGE(std::any_of(docs.begin(), docs.end(), [&](const ConfigKeyDoc& d) { return d.key == key; }), key);
  }
}
