// svm.hpp
//
// Soft-margin binary SVM trained in the dual with pairwise (SMO) updates.
//
//   min_a  1/2 a'Qa - e'a   s.t.  0 <= a_i <= C,  y'a = 0,
//   Q_ij = y_i y_j K(x_i, x_j)
//
// Working pairs are the maximal violating pair with second-order selection
// of the second index. Training stops when the KKT gap
// max_{I_up} -y G - min_{I_low} -y G drops below the tolerance.

#ifndef POLARITY_SVM_HPP
#define POLARITY_SVM_HPP

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "polarity/textproc.hpp"

namespace polarity {

enum class KernelType { Linear, NormalizedPoly, Puk };

std::string_view to_string(KernelType type);
KernelType parse_kernel_type(std::string_view s);

/// Linear: x.y
/// NormalizedPoly: K(x,y) / sqrt(K(x,x) K(y,y)) with K(x,y) = (x.y + l)^exponent,
///   l = 1 when lower_order is set, else 0.
/// Puk: 1 / (1 + (2 sqrt(|x-y|^2) sqrt(2^(1/omega) - 1) / sigma)^2)^omega
struct Kernel {
  KernelType type = KernelType::Linear;
  double exponent = 1.0;
  bool lower_order = false;
  double sigma = 1.0;
  double omega = 1.0;

  /// Kernel value from the raw dot product and both squared norms.
  double from_dot(double xy, double xx, double yy) const;
  double operator()(const SparseFeatureVector& x, const SparseFeatureVector& y) const {
    return from_dot(x.dot(y), x.squared_norm(), y.squared_norm());
  }
  friend bool operator==(const Kernel&, const Kernel&) = default;
};

struct SvmParams {
  double C = 1.0;
  double tolerance = 1e-3;
  Kernel kernel;
  std::size_t max_iterations = 0;  // 0: max(10'000'000, 100 n)
  std::size_t cache_megabytes = 256;
};

struct SvmSolution {
  Eigen::VectorXd alpha;
  double bias = 0.0;  // f(x) = sum_i alpha_i y_i K(x_i, x) + bias
  std::size_t iterations = 0;
  double kkt_gap = 0.0;
  bool converged = false;
};

/// `labels` holds +1 / -1. Throws ConfigError on C <= 0 or a single class.
SvmSolution solve_svm_dual(std::span<const SparseFeatureVector> examples,
                           std::span<const double> labels, const SvmParams& params);

/// Largest KKT violation of `alpha` on the training problem: the gap
/// m(a) - M(a) used as the stopping rule. Recomputes the gradient from
/// scratch.
double kkt_violation(std::span<const SparseFeatureVector> examples, std::span<const double> labels,
                     const Eigen::VectorXd& alpha, double C, const Kernel& kernel);

}  // namespace polarity

#endif  // POLARITY_SVM_HPP
