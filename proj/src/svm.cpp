#include "polarity/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <unordered_map>

#include "polarity/types.hpp"

namespace polarity {
namespace {

constexpr double kTau = 1e-12;

// Kernel rows K(x_i, .) built through an inverted index over features,
// with an LRU cache bounded in bytes.
class KernelRows {
 public:
  KernelRows(std::span<const SparseFeatureVector> examples, const Kernel& kernel,
             std::size_t cache_megabytes)
      : examples_(examples), kernel_(kernel), n_(static_cast<Eigen::Index>(examples.size())) {
    std::uint32_t dim = 0;
    for (const auto& x : examples)
      if (!x.empty()) dim = std::max(dim, x.entries().back().first + 1);
    postings_.resize(dim);
    squared_norm_.resize(n_);
    diag_.resize(n_);
    for (Eigen::Index s = 0; s < n_; ++s) {
      const auto& x = examples[static_cast<std::size_t>(s)];
      for (const auto& [f, v] : x.entries()) postings_[f].emplace_back(static_cast<std::uint32_t>(s), v);
      squared_norm_[s] = x.squared_norm();
    }
    for (Eigen::Index s = 0; s < n_; ++s)
      diag_[s] = kernel_.from_dot(squared_norm_[s], squared_norm_[s], squared_norm_[s]);
    const std::size_t row_bytes = std::max<std::size_t>(1, static_cast<std::size_t>(n_) * sizeof(double));
    capacity_ = std::max<std::size_t>(2, cache_megabytes * 1024 * 1024 / row_bytes);
  }

  double diag(Eigen::Index i) const { return diag_[i]; }

  const Eigen::VectorXd& row(Eigen::Index i) {
    if (auto it = cache_.find(i); it != cache_.end()) {
      lru_.splice(lru_.end(), lru_, it->second.second);
      return it->second.first;
    }
    if (cache_.size() >= capacity_) {
      cache_.erase(lru_.front());
      lru_.pop_front();
    }
    Eigen::VectorXd dots = Eigen::VectorXd::Zero(n_);
    for (const auto& [f, v] : examples_[static_cast<std::size_t>(i)].entries())
      for (const auto& [s, w] : postings_[f]) dots[s] += v * w;
    if (kernel_.type != KernelType::Linear)
      for (Eigen::Index s = 0; s < n_; ++s)
        dots[s] = kernel_.from_dot(dots[s], squared_norm_[i], squared_norm_[s]);
    lru_.push_back(i);
    auto [it, inserted] = cache_.emplace(i, std::make_pair(std::move(dots), std::prev(lru_.end())));
    return it->second.first;
  }

 private:
  std::span<const SparseFeatureVector> examples_;
  Kernel kernel_;
  Eigen::Index n_;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> postings_;
  Eigen::VectorXd squared_norm_;
  Eigen::VectorXd diag_;
  std::size_t capacity_ = 2;
  std::list<Eigen::Index> lru_;
  std::unordered_map<Eigen::Index, std::pair<Eigen::VectorXd, std::list<Eigen::Index>::iterator>> cache_;
};

bool in_up(double y, double a, double C) { return (y > 0 && a < C) || (y < 0 && a > 0); }
bool in_low(double y, double a, double C) { return (y > 0 && a > 0) || (y < 0 && a < C); }

double gap_of(const Eigen::VectorXd& G, std::span<const double> y, const Eigen::VectorXd& alpha,
              double C) {
  double up = -std::numeric_limits<double>::infinity();
  double low = std::numeric_limits<double>::infinity();
  for (Eigen::Index t = 0; t < G.size(); ++t) {
    const double v = -y[static_cast<std::size_t>(t)] * G[t];
    if (in_up(y[static_cast<std::size_t>(t)], alpha[t], C)) up = std::max(up, v);
    if (in_low(y[static_cast<std::size_t>(t)], alpha[t], C)) low = std::min(low, v);
  }
  if (!std::isfinite(up) || !std::isfinite(low)) return 0.0;
  return std::max(0.0, up - low);
}

void validate(std::span<const SparseFeatureVector> examples, std::span<const double> labels,
              double C) {
  if (!(C > 0.0)) throw ConfigError("SVM: C must be positive");
  if (examples.size() != labels.size()) throw std::invalid_argument("SVM: label count mismatch");
  bool pos = false, neg = false;
  for (double y : labels) {
    if (y == 1.0) pos = true;
    else if (y == -1.0) neg = true;
    else throw std::invalid_argument("SVM: labels must be +1 or -1");
  }
  if (!pos || !neg) throw ConfigError("SVM: training data must contain both classes");
}

}  // namespace

std::string_view to_string(KernelType type) {
  switch (type) {
    case KernelType::Linear: return "linear";
    case KernelType::NormalizedPoly: return "normalized-poly";
    case KernelType::Puk: return "puk";
  }
  return "linear";
}

KernelType parse_kernel_type(std::string_view s) {
  if (s == "linear") return KernelType::Linear;
  if (s == "normalized-poly") return KernelType::NormalizedPoly;
  if (s == "puk") return KernelType::Puk;
  throw ConfigError("unknown kernel '" + std::string(s) + "' (linear|normalized-poly|puk)");
}

double Kernel::from_dot(double xy, double xx, double yy) const {
  switch (type) {
    case KernelType::Linear:
      return xy;
    case KernelType::NormalizedPoly: {
      const double l = lower_order ? 1.0 : 0.0;
      const double denom = std::sqrt(std::pow(xx + l, exponent) * std::pow(yy + l, exponent));
      if (denom == 0.0) return 0.0;
      return std::pow(std::max(0.0, xy + l), exponent) / denom;
    }
    case KernelType::Puk: {
      const double dist2 = std::max(0.0, xx + yy - 2.0 * xy);
      const double scale = 2.0 * std::sqrt(dist2) * std::sqrt(std::pow(2.0, 1.0 / omega) - 1.0) / sigma;
      return 1.0 / std::pow(1.0 + scale * scale, omega);
    }
  }
  return xy;
}

SvmSolution solve_svm_dual(std::span<const SparseFeatureVector> examples,
                           std::span<const double> labels, const SvmParams& params) {
  validate(examples, labels, params.C);
  const double C = params.C;
  const auto n = static_cast<Eigen::Index>(examples.size());
  const auto y = [&](Eigen::Index t) { return labels[static_cast<std::size_t>(t)]; };

  KernelRows rows(examples, params.kernel, params.cache_megabytes);
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd G = Eigen::VectorXd::Constant(n, -1.0);
  const std::size_t max_iter = params.max_iterations != 0
                                   ? params.max_iterations
                                   : std::max<std::size_t>(10'000'000, 100 * static_cast<std::size_t>(n));

  SvmSolution sol;
  for (;;) {
    // First index: maximal -y G over I_up.
    Eigen::Index i = -1;
    double g_max = -std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < n; ++t) {
      if (in_up(y(t), alpha[t], C) && -y(t) * G[t] > g_max) {
        g_max = -y(t) * G[t];
        i = t;
      }
    }
    // Second index: second-order gain over I_low.
    Eigen::Index j = -1;
    double g_max2 = -std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    const Eigen::VectorXd* row_i = i >= 0 ? &rows.row(i) : nullptr;
    for (Eigen::Index t = 0; t < n && i >= 0; ++t) {
      if (!in_low(y(t), alpha[t], C)) continue;
      g_max2 = std::max(g_max2, y(t) * G[t]);
      const double b = g_max + y(t) * G[t];
      if (b <= 0.0) continue;
      double a = rows.diag(i) + rows.diag(t) - 2.0 * (*row_i)[t];
      if (a <= 0.0) a = kTau;
      const double gain = -(b * b) / a;
      if (gain < best) {
        best = gain;
        j = t;
      }
    }
    sol.kkt_gap = i < 0 ? 0.0 : std::max(0.0, g_max + g_max2);
    if (i < 0 || j < 0 || g_max + g_max2 < params.tolerance) {
      sol.converged = true;
      break;
    }
    if (sol.iterations >= max_iter) break;
    ++sol.iterations;

    const Eigen::VectorXd Ki = rows.row(i);
    const Eigen::VectorXd& Kj = rows.row(j);
    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    double ai = old_ai;
    double aj = old_aj;
    double quad = rows.diag(i) + rows.diag(j) - 2.0 * Ki[j];
    if (quad <= 0.0) quad = kTau;

    if (y(i) != y(j)) {
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0 && aj < 0) { aj = 0; ai = diff; }
      else if (diff <= 0 && ai < 0) { ai = 0; aj = -diff; }
      if (diff > 0 && ai > C) { ai = C; aj = C - diff; }
      else if (diff <= 0 && aj > C) { aj = C; ai = C + diff; }
    } else {
      const double delta = (G[i] - G[j]) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > C && ai > C) { ai = C; aj = sum - C; }
      else if (sum <= C && aj < 0) { aj = 0; ai = sum; }
      if (sum > C && aj > C) { aj = C; ai = sum - C; }
      else if (sum <= C && ai < 0) { ai = 0; aj = sum; }
    }
    alpha[i] = ai;
    alpha[j] = aj;

    // G_t += Q_ti da_i + Q_tj da_j with Q_ts = y_t y_s K_ts.
    const double di = (ai - old_ai) * y(i);
    const double dj = (aj - old_aj) * y(j);
    for (Eigen::Index t = 0; t < n; ++t) G[t] += y(t) * (Ki[t] * di + Kj[t] * dj);
  }

  // Bias from free vectors, or the midpoint of the feasible interval.
  double upper = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double yg = y(t) * G[t];
    if (alpha[t] >= C) {
      if (y(t) < 0) upper = std::min(upper, yg);
      else lower = std::max(lower, yg);
    } else if (alpha[t] <= 0.0) {
      if (y(t) > 0) upper = std::min(upper, yg);
      else lower = std::max(lower, yg);
    } else {
      free_sum += yg;
      ++free_count;
    }
  }
  const double rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : (upper + lower) / 2.0;
  sol.bias = -rho;
  sol.alpha = std::move(alpha);
  return sol;
}

double kkt_violation(std::span<const SparseFeatureVector> examples, std::span<const double> labels,
                     const Eigen::VectorXd& alpha, double C, const Kernel& kernel) {
  validate(examples, labels, C);
  const auto n = static_cast<Eigen::Index>(examples.size());
  Eigen::VectorXd G = Eigen::VectorXd::Constant(n, -1.0);
  for (Eigen::Index s = 0; s < n; ++s) {
    if (alpha[s] == 0.0) continue;
    for (Eigen::Index t = 0; t < n; ++t)
      G[t] += labels[static_cast<std::size_t>(t)] * labels[static_cast<std::size_t>(s)] * alpha[s] *
              kernel(examples[static_cast<std::size_t>(t)], examples[static_cast<std::size_t>(s)]);
  }
  return gap_of(G, labels, alpha, C);
}

}  // namespace polarity
