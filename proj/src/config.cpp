#include "polarity/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace polarity {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not a number: '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long i = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not an integer: '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + key + "': not a boolean: '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F name) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += name(items[i]);
  }
  return out;
}

const char* const kKeys[] = {"ratio", "seed", "theta", "negation_window", "schemes", "kinds",
                             "alpha", "naive_alpha", "C", "tolerance", "kernel_preset", "fallback",
                             "min_count", "trainset_correction", "sentence_correction",
                             "retrain_naive", "negation_in_uncorrected", "jobs", "output"};

}  // namespace

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "ratio") {
    ratio = to_double(key, v);
    if (!(ratio > 0 && ratio < 1)) throw ConfigError("ratio must lie in (0, 1)");
  } else if (key == "seed") {
    const long long s = to_int(key, v);
    if (s < 0) throw ConfigError("seed must be non-negative");
    seed = static_cast<std::uint64_t>(s);
  } else if (key == "theta") {
    theta = static_cast<int>(to_int(key, v));
    if (theta < 1) throw ConfigError("theta must be >= 1");
  } else if (key == "negation_window") {
    negation_window = static_cast<int>(to_int(key, v));
    validate_negation_window(negation_window);
  } else if (key == "schemes") {
    schemes.clear();
    for (const auto& s : split_list(v)) schemes.push_back(parse_feature_scheme(s));
    if (schemes.empty()) throw ConfigError("schemes may not be empty");
  } else if (key == "kinds") {
    kinds.clear();
    for (const auto& s : split_list(v)) kinds.push_back(parse_model_kind(s));
    if (kinds.empty()) throw ConfigError("kinds may not be empty");
  } else if (key == "alpha") {
    alpha = to_double(key, v);
    if (!(alpha > 0)) throw ConfigError("alpha must be positive");
  } else if (key == "naive_alpha") {
    naive_alpha = to_double(key, v);
    if (!(naive_alpha > 0)) throw ConfigError("naive_alpha must be positive");
  } else if (key == "C") {
    if (v == "auto") {
      C.reset();
    } else {
      C = to_double(key, v);
      if (!(*C > 0)) throw ConfigError("C must be positive");
    }
  } else if (key == "tolerance") {
    tolerance = to_double(key, v);
    if (!(tolerance > 0)) throw ConfigError("tolerance must be positive");
  } else if (key == "kernel_preset") {
    if (v != "auto") (void)polarity::kernel_preset(v);
    kernel_preset = v;
  } else if (key == "fallback") {
    fallback = parse_fallback(v);
  } else if (key == "min_count") {
    min_count = static_cast<int>(to_int(key, v));
    if (min_count < 1) throw ConfigError("min_count must be >= 1");
  } else if (key == "trainset_correction") {
    trainset_correction = to_bool(key, v);
  } else if (key == "sentence_correction") {
    sentence_correction = to_bool(key, v);
  } else if (key == "retrain_naive") {
    retrain_naive = to_bool(key, v);
  } else if (key == "negation_in_uncorrected") {
    negation_in_uncorrected = to_bool(key, v);
  } else if (key == "jobs") {
    const long long j = to_int(key, v);
    if (j < 1) throw ConfigError("jobs must be >= 1");
    jobs = static_cast<std::size_t>(j);
  } else if (key == "output") {
    if (v.empty()) throw ConfigError("output may not be empty");
    output = v;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void RunConfig::write(std::ostream& out) const {
  out << "ratio = " << fmt_double(ratio) << '\n'
      << "seed = " << seed << '\n'
      << "theta = " << theta << '\n'
      << "negation_window = " << negation_window << '\n'
      << "schemes = " << join(schemes, [](FeatureScheme s) { return std::string(to_string(s)); }) << '\n'
      << "kinds = " << join(kinds, [](ModelKind k) { return std::string(to_string(k)); }) << '\n'
      << "alpha = " << fmt_double(alpha) << '\n'
      << "naive_alpha = " << fmt_double(naive_alpha) << '\n'
      << "C = " << (C ? fmt_double(*C) : "auto") << '\n'
      << "tolerance = " << fmt_double(tolerance) << '\n'
      << "kernel_preset = " << kernel_preset << '\n'
      << "fallback = " << to_string(fallback) << '\n'
      << "min_count = " << min_count << '\n'
      << "trainset_correction = " << (trainset_correction ? "true" : "false") << '\n'
      << "sentence_correction = " << (sentence_correction ? "true" : "false") << '\n'
      << "retrain_naive = " << (retrain_naive ? "true" : "false") << '\n'
      << "negation_in_uncorrected = " << (negation_in_uncorrected ? "true" : "false") << '\n'
      << "jobs = " << jobs << '\n'
      << "output = " << output << '\n';
  for (const auto& [domain, path] : corpora) out << "\n[domain." << domain << "]\ncorpus = " << path << '\n';
}

RunConfig RunConfig::read(std::istream& in) {
  RunConfig cfg;
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": bad section");
      section = trim(line.substr(1, line.size() - 2));
      if (section.rfind("domain.", 0) != 0 || section.size() == 7)
        throw ConfigError("line " + std::to_string(line_no) + ": sections must be [domain.<name>]");
      Domain::parse(section.substr(7));
      cfg.corpora.try_emplace(section.substr(7), "");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      cfg.set(key, value);
    } else if (key == "corpus") {
      cfg.corpora[section.substr(7)] = value;
    } else {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown domain key '" + key + "'");
    }
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path + "'");
  return read(in);
}

void RunConfig::apply_env(const std::function<std::optional<std::string>(const std::string&)>& getenv) {
  for (const char* key : kKeys) {
    std::string name = "POLARITY_";
    for (const char* c = key; *c; ++c)
      name += static_cast<char>(std::toupper(static_cast<unsigned char>(*c)));
    if (auto v = getenv(name)) set(key, *v);
  }
}

void RunConfig::apply_env() {
  apply_env([](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    return v ? std::optional<std::string>(v) : std::nullopt;
  });
}

ExperimentConfig RunConfig::experiment(const std::string& domain) const {
  ExperimentConfig e;
  e.correction.theta = theta;
  e.correction.negation_window = negation_window;
  e.correction.fallback = fallback;
  e.correction.retrain_naive_after_trainset_correction = retrain_naive;
  e.trainset_correction = trainset_correction;
  e.sentence_correction = sentence_correction;
  e.negation_in_uncorrected = negation_in_uncorrected;
  e.naive_alpha = naive_alpha;
  e.ratio = ratio;
  e.seed = seed;
  e.jobs = jobs;

  std::string preset_name = kernel_preset;
  if (preset_name == "auto") {
    const auto& presets = kernel_presets();
    const bool known = std::any_of(presets.begin(), presets.end(),
                                   [&](const KernelPreset& p) { return p.name == domain; });
    preset_name = known ? domain : "linear";
  }
  const KernelPreset& preset = polarity::kernel_preset(preset_name);
  e.hyper.kernel = preset.kernel;
  e.hyper.C = C.value_or(preset.C);
  e.hyper.alpha = alpha;
  e.hyper.tolerance = tolerance;
  e.hyper.min_count = min_count;
  return e;
}

std::vector<GridCell> RunConfig::grid() const { return default_grid(kinds, schemes); }

std::vector<ConfigKeyDoc> config_reference() {
  return {
      {"ratio", "0.8", "train fraction of each (domain, label) cell"},
      {"seed", "42", "split seed"},
      {"theta", "2", "minimum same-polarity run length kept by sentence correction"},
      {"negation_window", "3", "tokens tagged NOT_ after a negation word (1-3)"},
      {"schemes", "bigram,bows,unigram", "feature schemes in the grid"},
      {"kinds", "svm,nb", "review-level algorithms in the grid"},
      {"alpha", "1", "Laplace smoothing of the review-level naive Bayes model"},
      {"naive_alpha", "1", "Laplace smoothing of the sentence model"},
      {"C", "auto", "SVM regularization; auto takes the kernel preset's value"},
      {"tolerance", "0.001", "SVM KKT stopping tolerance"},
      {"kernel_preset", "linear", "linear|beauty|books|kitchen|software|auto (per domain)"},
      {"fallback", "keep-all", "keep-all|keep-majority-runs|none when no run reaches theta"},
      {"min_count", "2", "minimum feature frequency for review-level vocabularies"},
      {"trainset_correction", "true", "re-pool misclassified training sentences"},
      {"sentence_correction", "true", "drop sentences in runs shorter than theta"},
      {"retrain_naive", "true", "retrain the sentence model on the corrected pools"},
      {"negation_in_uncorrected", "false", "also tag negation in standard and baseline cells"},
      {"jobs", "1", "grid cells trained in parallel"},
      {"output", "out", "output directory"},
      {"[domain.<name>] corpus", "-", "JSONL corpus for a domain"},
  };
}

}  // namespace polarity
