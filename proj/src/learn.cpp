#include "polarity/learn.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace polarity {
namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string next_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw IoError(std::string("model file: missing ") + what);
  return line;
}

// Parses "tag k1=v1 k2=v2 ..." into a map; the tag must match.
std::map<std::string, std::string> parse_fields(const std::string& line, const std::string& tag) {
  std::istringstream ss(line);
  std::string first;
  ss >> first;
  if (first != tag) throw IoError("model file: expected '" + tag + "' line, got '" + line + "'");
  std::map<std::string, std::string> fields;
  std::string item;
  while (ss >> item) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw IoError("model file: bad field '" + item + "'");
    fields[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return fields;
}

const std::string& field(const std::map<std::string, std::string>& fields, const std::string& key) {
  auto it = fields.find(key);
  if (it == fields.end()) throw IoError("model file: missing field '" + key + "'");
  return it->second;
}

void write_vector(std::ostream& out, const Eigen::VectorXd& v) {
  out << v.size();
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << fmt_double(v[i]);
  out << '\n';
}

Eigen::VectorXd read_vector(std::istream& line) {
  Eigen::Index n = 0;
  if (!(line >> n) || n < 0) throw IoError("model file: bad vector length");
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(line >> v[i])) throw IoError("model file: truncated vector");
  return v;
}

void write_sparse(std::ostream& out, const SparseFeatureVector& x) {
  out << x.nnz();
  for (const auto& [index, value] : x.entries()) out << ' ' << index << ':' << fmt_double(value);
}

SparseFeatureVector read_sparse(std::istream& line) {
  std::size_t nnz = 0;
  if (!(line >> nnz)) throw IoError("model file: bad sparse vector");
  std::vector<SparseFeatureVector::Entry> entries;
  for (std::size_t k = 0; k < nnz; ++k) {
    std::string cell;
    if (!(line >> cell)) throw IoError("model file: truncated sparse vector");
    const auto colon = cell.find(':');
    if (colon == std::string::npos) throw IoError("model file: bad sparse cell " + cell);
    entries.emplace_back(static_cast<std::uint32_t>(std::stoul(cell.substr(0, colon))),
                         std::stod(cell.substr(colon + 1)));
  }
  return SparseFeatureVector::from_entries(std::move(entries));
}

void check_both_classes(std::span<const Polarity> labels) {
  bool pos = false, neg = false;
  for (auto l : labels) (l == Polarity::Positive ? pos : neg) = true;
  if (!pos || !neg) throw ConfigError("training data must contain both classes");
}

void fit_nb(TrainedModel& model, std::span<const SparseFeatureVector> examples,
            std::span<const Polarity> labels, double alpha) {
  const auto v = static_cast<Eigen::Index>(model.vocab.size());
  std::array<Eigen::VectorXd, 2> counts = {Eigen::VectorXd::Zero(v), Eigen::VectorXd::Zero(v)};
  std::array<double, 2> docs{};
  for (std::size_t k = 0; k < examples.size(); ++k) {
    const int c = class_index(labels[k]);
    docs[c] += 1.0;
    for (const auto& [index, value] : examples[k].entries()) counts[c][index] += value;
  }
  model.nb_alpha = alpha;
  for (int c = 0; c < 2; ++c) {
    const double denom = counts[c].sum() + alpha * static_cast<double>(v);
    model.nb_log_conditional[c] = ((counts[c].array() + alpha) / denom).log() / std::log(2.0);
    model.nb_log_prior[c] = std::log2(docs[c] / (docs[0] + docs[1]));
  }
}

void fit_svm(TrainedModel& model, std::span<const SparseFeatureVector> examples,
             std::span<const Polarity> labels, const Hyperparameters& hyper) {
  std::vector<double> y;
  y.reserve(labels.size());
  for (auto l : labels) y.push_back(l == Polarity::Positive ? 1.0 : -1.0);
  SvmParams params;
  params.C = hyper.C;
  params.tolerance = hyper.tolerance;
  params.kernel = hyper.kernel;
  params.cache_megabytes = hyper.cache_megabytes;
  const SvmSolution sol = solve_svm_dual(examples, y, params);

  model.kernel = hyper.kernel;
  model.C = hyper.C;
  model.bias = sol.bias;
  model.kkt_gap = sol.kkt_gap;
  if (hyper.kernel.type == KernelType::Linear) {
    model.weights = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.vocab.size()));
    for (std::size_t k = 0; k < examples.size(); ++k) {
      const double coef = sol.alpha[static_cast<Eigen::Index>(k)] * y[k];
      if (coef == 0.0) continue;
      for (const auto& [index, value] : examples[k].entries()) model.weights[index] += coef * value;
    }
  } else {
    std::vector<double> coefs;
    for (std::size_t k = 0; k < examples.size(); ++k) {
      const double a = sol.alpha[static_cast<Eigen::Index>(k)];
      if (a <= 0.0) continue;
      model.support_vectors.push_back(examples[k]);
      coefs.push_back(a * y[k]);
    }
    model.dual_coef = Eigen::Map<const Eigen::VectorXd>(coefs.data(), static_cast<Eigen::Index>(coefs.size()));
  }
}

}  // namespace

std::string_view to_string(ModelKind kind) { return kind == ModelKind::SVM ? "svm" : "nb"; }

std::string_view display_name(ModelKind kind) { return kind == ModelKind::SVM ? "SVM" : "NB"; }

ModelKind parse_model_kind(std::string_view s) {
  if (s == "nb" || s == "NB" || s == "naive-bayes") return ModelKind::NaiveBayes;
  if (s == "svm" || s == "SVM") return ModelKind::SVM;
  throw ConfigError("unknown model kind '" + std::string(s) + "' (nb|svm)");
}

std::string_view to_string(Granularity g) {
  return g == Granularity::Sentence ? "sentence" : "document";
}

Granularity parse_granularity(std::string_view s) {
  if (s == "document") return Granularity::Document;
  if (s == "sentence") return Granularity::Sentence;
  throw ConfigError("unknown granularity '" + std::string(s) + "'");
}

const std::vector<KernelPreset>& kernel_presets() {
  static const std::vector<KernelPreset> presets = [] {
    std::vector<KernelPreset> p;
    p.push_back({"linear", 1.0, Kernel{}});
    p.push_back({"beauty", 1.1989425641153333,
                 Kernel{KernelType::NormalizedPoly, 1.6144079568156302, true, 1.0, 1.0}});
    p.push_back({"books", 1.2918141993816825,
                 Kernel{KernelType::NormalizedPoly, 2.78637472738497, false, 1.0, 1.0}});
    p.push_back({"kitchen", 1.2929645940353218,
                 Kernel{KernelType::Puk, 1.0, false, 9.028189222927269, 0.9952824838773323}});
    p.push_back({"software", 1.1471978195519354,
                 Kernel{KernelType::NormalizedPoly, 1.7177045231155679, true, 1.0, 1.0}});
    return p;
  }();
  return presets;
}

const KernelPreset& kernel_preset(std::string_view name) {
  for (const auto& p : kernel_presets())
    if (p.name == name) return p;
  throw ConfigError("unknown kernel preset '" + std::string(name) +
                    "' (linear|beauty|books|kitchen|software)");
}

TrainedModel train_on_vectors(std::span<const SparseFeatureVector> examples,
                              std::span<const Polarity> labels, Vocabulary vocab, ModelKind kind,
                              const Hyperparameters& hyper) {
  if (examples.size() != labels.size()) throw std::invalid_argument("label count mismatch");
  if (!(hyper.alpha > 0.0)) throw ConfigError("alpha must be positive");
  if (!(hyper.C > 0.0)) throw ConfigError("C must be positive");
  check_both_classes(labels);

  TrainedModel model;
  model.kind = kind;
  model.scheme = vocab.scheme();
  model.granularity = hyper.granularity;
  model.vocab = std::move(vocab);
  if (kind == ModelKind::NaiveBayes) fit_nb(model, examples, labels, hyper.alpha);
  else fit_svm(model, examples, labels, hyper);
  return model;
}

TrainedModel train_document_model(std::span<const ReviewDocument> train_docs,
                                  FeatureScheme scheme, ModelKind kind,
                                  const Hyperparameters& hyper) {
  if (!(hyper.alpha > 0.0)) throw ConfigError("alpha must be positive");
  if (!(hyper.C > 0.0)) throw ConfigError("C must be positive");
  std::vector<DocumentTokens> units;
  std::vector<Polarity> labels;
  for (const auto& doc : train_docs) {
    if (hyper.granularity == Granularity::Document) {
      units.push_back(document_tokens(doc));
      labels.push_back(doc.label);
    } else {
      for (const auto& s : doc.sentences) {
        units.push_back(DocumentTokens{s.tokens});
        labels.push_back(doc.label);
      }
    }
  }
  check_both_classes(labels);
  Vocabulary vocab = fit_vocabulary(std::span<const DocumentTokens>(units), scheme, hyper.min_count);
  std::vector<SparseFeatureVector> examples;
  examples.reserve(units.size());
  for (const auto& u : units) examples.push_back(vectorize(std::span<const TokenSeq>(u), scheme, vocab));
  return train_on_vectors(examples, labels, std::move(vocab), kind, hyper);
}

double decision_value(const TrainedModel& model, const SparseFeatureVector& x) {
  if (model.kind == ModelKind::NaiveBayes) {
    double score = model.nb_log_prior[0] - model.nb_log_prior[1];
    for (const auto& [index, value] : x.entries())
      score += value * (model.nb_log_conditional[0][index] - model.nb_log_conditional[1][index]);
    return score;
  }
  if (model.kernel.type == KernelType::Linear) return x.dot(model.weights) + model.bias;
  double f = model.bias;
  const double xx = x.squared_norm();
  for (std::size_t k = 0; k < model.support_vectors.size(); ++k) {
    const auto& sv = model.support_vectors[k];
    f += model.dual_coef[static_cast<Eigen::Index>(k)] *
         model.kernel.from_dot(sv.dot(x), sv.squared_norm(), xx);
  }
  return f;
}

Prediction predict(const TrainedModel& model, const SparseFeatureVector& x) {
  const double score = decision_value(model, x);
  return Prediction{score >= 0.0 ? Polarity::Positive : Polarity::Negative, score};
}

Prediction predict(const TrainedModel& model, const ReviewDocument& doc) {
  if (model.granularity == Granularity::Document) {
    const DocumentTokens tokens = document_tokens(doc);
    return predict(model, vectorize(std::span<const TokenSeq>(tokens), model.scheme, model.vocab));
  }
  double score = 0.0;
  for (const auto& s : doc.sentences) score += decision_value(model, vectorize(s.tokens, model.scheme, model.vocab));
  return Prediction{score >= 0.0 ? Polarity::Positive : Polarity::Negative, score};
}

void write_model(std::ostream& out, const TrainedModel& model) {
  const auto& meta = model.meta;
  out << "model v1 " << to_string(model.kind) << ' ' << to_string(model.scheme) << ' '
      << meta.domain << " corrected=" << (meta.corrected ? "true" : "false") << '\n';
  out << "meta name=" << (meta.name.empty() ? "-" : meta.name)
      << " granularity=" << to_string(model.granularity)
      << " negation=" << (meta.negation_window ? std::to_string(*meta.negation_window) : "none")
      << " theta=" << meta.correction.theta << " fallback=" << to_string(meta.correction.fallback)
      << '\n';
  model.vocab.write(out);
  if (model.kind == ModelKind::NaiveBayes) {
    out << "nb alpha=" << fmt_double(model.nb_alpha) << '\n';
    out << "log-prior " << fmt_double(model.nb_log_prior[0]) << ' ' << fmt_double(model.nb_log_prior[1]) << '\n';
    out << "log-cond-positive ";
    write_vector(out, model.nb_log_conditional[0]);
    out << "log-cond-negative ";
    write_vector(out, model.nb_log_conditional[1]);
  } else {
    const auto& k = model.kernel;
    out << "svm kernel=" << to_string(k.type) << " exponent=" << fmt_double(k.exponent)
        << " lower-order=" << (k.lower_order ? 1 : 0) << " sigma=" << fmt_double(k.sigma)
        << " omega=" << fmt_double(k.omega) << " C=" << fmt_double(model.C)
        << " kkt-gap=" << fmt_double(model.kkt_gap) << '\n';
    out << "bias " << fmt_double(model.bias) << '\n';
    if (k.type == KernelType::Linear) {
      out << "weights ";
      write_vector(out, model.weights);
    } else {
      out << "support-vectors " << model.support_vectors.size() << '\n';
      for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
        out << fmt_double(model.dual_coef[static_cast<Eigen::Index>(i)]) << ' ';
        write_sparse(out, model.support_vectors[i]);
        out << '\n';
      }
    }
  }
  if (model.naive) {
    out << "bundled-naive\n";
    model.naive->write(out);
  }
  out << "end\n";
}

TrainedModel read_model(std::istream& in) {
  TrainedModel model;
  {
    const std::string line = next_line(in, "header");
    std::istringstream h(line);
    std::string magic, version, kind, scheme, domain, corrected;
    if (!(h >> magic >> version >> kind >> scheme >> domain >> corrected) || magic != "model" ||
        version != "v1" || corrected.rfind("corrected=", 0) != 0)
      throw IoError("model file: bad header '" + line + "'");
    try {
      model.kind = parse_model_kind(kind);
      model.scheme = parse_feature_scheme(scheme);
    } catch (const ConfigError& e) {
      throw IoError(std::string("model file: ") + e.what());
    }
    model.meta.domain = domain;
    model.meta.corrected = corrected == "corrected=true";
  }
  {
    const auto fields = parse_fields(next_line(in, "meta"), "meta");
    model.meta.name = field(fields, "name") == "-" ? "" : field(fields, "name");
    model.granularity = parse_granularity(field(fields, "granularity"));
    const auto& neg = field(fields, "negation");
    if (neg != "none") model.meta.negation_window = std::stoi(neg);
    model.meta.correction.theta = std::stoi(field(fields, "theta"));
    model.meta.correction.fallback = parse_fallback(field(fields, "fallback"));
    if (model.meta.negation_window) model.meta.correction.negation_window = *model.meta.negation_window;
  }
  model.vocab = Vocabulary::read(in);
  if (model.vocab.scheme() != model.scheme) throw IoError("model file: vocabulary scheme mismatch");
  const auto v = static_cast<Eigen::Index>(model.vocab.size());

  if (model.kind == ModelKind::NaiveBayes) {
    model.nb_alpha = std::stod(field(parse_fields(next_line(in, "nb"), "nb"), "alpha"));
    std::istringstream p(next_line(in, "log-prior"));
    std::string tag;
    if (!(p >> tag >> model.nb_log_prior[0] >> model.nb_log_prior[1]) || tag != "log-prior")
      throw IoError("model file: bad log-prior line");
    for (int c = 0; c < 2; ++c) {
      std::istringstream row(next_line(in, "log-cond"));
      row >> tag;
      if (tag != (c == 0 ? "log-cond-positive" : "log-cond-negative"))
        throw IoError("model file: bad log-cond line");
      model.nb_log_conditional[c] = read_vector(row);
      if (model.nb_log_conditional[c].size() != v) throw IoError("model file: log-cond size mismatch");
    }
  } else {
    const auto fields = parse_fields(next_line(in, "svm"), "svm");
    model.kernel.type = parse_kernel_type(field(fields, "kernel"));
    model.kernel.exponent = std::stod(field(fields, "exponent"));
    model.kernel.lower_order = field(fields, "lower-order") == "1";
    model.kernel.sigma = std::stod(field(fields, "sigma"));
    model.kernel.omega = std::stod(field(fields, "omega"));
    model.C = std::stod(field(fields, "C"));
    model.kkt_gap = std::stod(field(fields, "kkt-gap"));
    std::istringstream b(next_line(in, "bias"));
    std::string tag;
    if (!(b >> tag >> model.bias) || tag != "bias") throw IoError("model file: bad bias line");
    if (model.kernel.type == KernelType::Linear) {
      std::istringstream w(next_line(in, "weights"));
      w >> tag;
      if (tag != "weights") throw IoError("model file: bad weights line");
      model.weights = read_vector(w);
      if (model.weights.size() != v) throw IoError("model file: weight size mismatch");
    } else {
      std::istringstream s(next_line(in, "support-vectors"));
      std::size_t count = 0;
      if (!(s >> tag >> count) || tag != "support-vectors") throw IoError("model file: bad support-vectors line");
      model.dual_coef.resize(static_cast<Eigen::Index>(count));
      for (std::size_t k = 0; k < count; ++k) {
        std::istringstream row(next_line(in, "support vector"));
        if (!(row >> model.dual_coef[static_cast<Eigen::Index>(k)])) throw IoError("model file: bad support vector");
        model.support_vectors.push_back(read_sparse(row));
      }
    }
  }
  std::string line = next_line(in, "end");
  if (line == "bundled-naive") {
    model.naive = NaiveSentenceModel::read(in);
    line = next_line(in, "end");
  }
  if (line != "end") throw IoError("model file: expected 'end', got '" + line + "'");
  return model;
}

}  // namespace polarity
