#include "polarity/naive.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace polarity {
namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string expect_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw IoError(std::string("naive model: missing ") + what);
  return line;
}

}  // namespace

NaiveSentenceModel fit_naive(std::span<const LabeledSentence> sentences, Vocabulary vocab,
                             double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("naive model: alpha must be positive");
  if (vocab.scheme() != FeatureScheme::Unigram)
    throw ConfigError("naive model: vocabulary must use unigram features");

  NaiveSentenceModel model;
  model.alpha_ = alpha;
  const auto v = static_cast<Eigen::Index>(vocab.size());
  model.vocab_ = std::move(vocab);
  for (auto& c : model.counts_) c = Eigen::VectorXd::Zero(v);

  for (const auto& s : sentences) {
    const int c = class_index(s.label);
    model.sentences_[c] += 1.0;
    for (const auto& token : s.tokens) {
      if (auto index = model.vocab_.index_of(token.feature_form())) {
        model.counts_[c][*index] += 1.0;
        model.mass_[c] += 1.0;
      }
    }
  }
  if (model.sentences_[0] == 0.0 || model.sentences_[1] == 0.0)
    throw ConfigError("naive model: both classes need at least one training sentence");
  model.finalize();
  return model;
}

void NaiveSentenceModel::finalize() {
  const double v = static_cast<double>(vocab_.size());
  const double total = sentences_[0] + sentences_[1];
  for (int c = 0; c < 2; ++c) {
    const double denom = mass_[c] + alpha_ * v;
    log_conditional_[c] = ((counts_[c].array() + alpha_) / denom).log() / std::log(2.0);
    log_prior_[c] = std::log2(sentences_[c] / total);
  }
}

double NaiveSentenceModel::prior(Polarity c) const {
  return sentences_[class_index(c)] / (sentences_[0] + sentences_[1]);
}

double NaiveSentenceModel::conditional(Polarity c, std::uint32_t term) const {
  const int k = class_index(c);
  return (counts_[k][term] + alpha_) / (mass_[k] + alpha_ * static_cast<double>(vocab_.size()));
}

SentencePolarity NaiveSentenceModel::score(const TokenSeq& tokens) const {
  SentencePolarity out;
  out.score_pos = log_prior_[0];
  out.score_neg = log_prior_[1];
  for (const auto& token : tokens) {
    if (auto index = vocab_.index_of(token.feature_form())) {
      out.score_pos += log_conditional_[0][*index];
      out.score_neg += log_conditional_[1][*index];
    }
  }
  // Scores that differ only by summation rounding count as a tie.
  const double slack = 1e-12 * std::max(1.0, std::abs(out.score_neg));
  out.predicted = out.score_pos >= out.score_neg - slack ? Polarity::Positive : Polarity::Negative;
  return out;
}

void NaiveSentenceModel::write(std::ostream& out) const {
  out << "naive v1 alpha=" << fmt_double(alpha_) << " |V|=" << vocab_.size() << '\n';
  out << "priors " << fmt_double(prior(Polarity::Positive)) << ' '
      << fmt_double(prior(Polarity::Negative)) << " sentences " << fmt_double(sentences_[0])
      << ' ' << fmt_double(sentences_[1]) << '\n';
  out << "mass " << fmt_double(mass_[0]) << ' ' << fmt_double(mass_[1]) << '\n';
  for (int c = 0; c < 2; ++c) {
    std::size_t nnz = 0;
    for (Eigen::Index i = 0; i < counts_[c].size(); ++i) nnz += counts_[c][i] != 0.0;
    out << (c == 0 ? "positive " : "negative ") << nnz;
    for (Eigen::Index i = 0; i < counts_[c].size(); ++i)
      if (counts_[c][i] != 0.0) out << ' ' << i << ':' << fmt_double(counts_[c][i]);
    out << '\n';
  }
  vocab_.write(out);
}

NaiveSentenceModel NaiveSentenceModel::read(std::istream& in) {
  NaiveSentenceModel model;
  std::string line = expect_line(in, "header");
  std::size_t vsize = 0;
  {
    std::istringstream h(line);
    std::string magic, version, alpha_field, v_field;
    if (!(h >> magic >> version >> alpha_field >> v_field) || magic != "naive" ||
        version != "v1" || alpha_field.rfind("alpha=", 0) != 0 || v_field.rfind("|V|=", 0) != 0)
      throw IoError("naive model: bad header '" + line + "'");
    model.alpha_ = std::stod(alpha_field.substr(6));
    vsize = std::stoull(v_field.substr(4));
  }
  {
    std::istringstream p(expect_line(in, "priors"));
    std::string tag, tag2;
    double p0 = 0, p1 = 0;
    if (!(p >> tag >> p0 >> p1 >> tag2 >> model.sentences_[0] >> model.sentences_[1]) ||
        tag != "priors" || tag2 != "sentences")
      throw IoError("naive model: bad priors line");
  }
  {
    std::istringstream m(expect_line(in, "mass"));
    std::string tag;
    if (!(m >> tag >> model.mass_[0] >> model.mass_[1]) || tag != "mass")
      throw IoError("naive model: bad mass line");
  }
  for (int c = 0; c < 2; ++c) {
    model.counts_[c] = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(vsize));
    std::istringstream row(expect_line(in, "count row"));
    std::string tag;
    std::size_t nnz = 0;
    if (!(row >> tag >> nnz) || tag != (c == 0 ? "positive" : "negative"))
      throw IoError("naive model: bad count row");
    for (std::size_t k = 0; k < nnz; ++k) {
      std::string cell;
      if (!(row >> cell)) throw IoError("naive model: truncated count row");
      const auto colon = cell.find(':');
      const auto index = std::stoull(cell.substr(0, colon));
      if (colon == std::string::npos || index >= vsize) throw IoError("naive model: bad cell " + cell);
      model.counts_[c][static_cast<Eigen::Index>(index)] = std::stod(cell.substr(colon + 1));
    }
  }
  model.vocab_ = Vocabulary::read(in);
  if (model.vocab_.size() != vsize) throw IoError("naive model: vocabulary size mismatch");
  if (model.sentences_[0] <= 0 || model.sentences_[1] <= 0 || !(model.alpha_ > 0))
    throw IoError("naive model: invalid parameters");
  model.finalize();
  return model;
}

}  // namespace polarity
