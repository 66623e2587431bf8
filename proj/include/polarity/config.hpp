// config.hpp
//
// Run configuration: flat `key = value` text with one `[domain.<name>]`
// section per domain. Precedence is defaults < file < environment
// (POLARITY_<KEY>) < command-line flags.

#ifndef POLARITY_CONFIG_HPP
#define POLARITY_CONFIG_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polarity/correction.hpp"
#include "polarity/experiment.hpp"
#include "polarity/learn.hpp"

namespace polarity {

struct RunConfig {
  std::map<std::string, std::string> corpora;  // domain -> JSONL path
  double ratio = 0.8;
  std::uint64_t seed = 42;
  int theta = 2;
  int negation_window = 3;
  std::vector<FeatureScheme> schemes = {FeatureScheme::Bigram, FeatureScheme::BagOfWords,
                                        FeatureScheme::Unigram};
  std::vector<ModelKind> kinds = {ModelKind::SVM, ModelKind::NaiveBayes};
  double alpha = 1.0;
  double naive_alpha = 1.0;
  std::optional<double> C;  // unset: the kernel preset's C
  double tolerance = 1e-3;
  std::string kernel_preset = "linear";  // linear|beauty|books|kitchen|software|auto
  Fallback fallback = Fallback::KeepAll;
  int min_count = 2;
  bool trainset_correction = true;
  bool sentence_correction = true;
  bool retrain_naive = true;
  bool negation_in_uncorrected = false;
  std::size_t jobs = 1;
  std::string output = "out";

  /// Sets one key from its text form. Throws ConfigError on unknown keys
  /// or bad values.
  void set(const std::string& key, const std::string& value);

  void write(std::ostream& out) const;
  static RunConfig read(std::istream& in);
  static RunConfig load(const std::string& path);

  /// Applies POLARITY_<KEY> variables (upper case, '-' as '_').
  void apply_env(const std::function<std::optional<std::string>(const std::string&)>& getenv);
  void apply_env();

  ExperimentConfig experiment(const std::string& domain) const;
  std::vector<GridCell> grid() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct ConfigKeyDoc {
  std::string key;
  std::string default_value;
  std::string description;
};

/// Every scalar key with its default, for --help.
std::vector<ConfigKeyDoc> config_reference();

}  // namespace polarity

#endif  // POLARITY_CONFIG_HPP
