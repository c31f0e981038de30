#pragma once

// Sampling and estimation primitives for the cross-entropy solver:
// standard-normal CDF / inverse CDF, seeded truncated-Gaussian sampling,
// elite selection by order statistic, MLE parameter updates, and the
// weighted root-mean-square norm used by the stopping test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace ceopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// SplitMix64: seedable counter-based generator. Substreams are derived from
// (root seed, stream index) so per-iteration draws are reproducible no matter
// how evaluation work is scheduled.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static SplitMix64 substream(std::uint64_t root, std::uint64_t stream) {
    SplitMix64 a(root);
    SplitMix64 b(stream ^ 0x6A09E667F3BCC909ull);
    return SplitMix64(a.next() ^ (b.next() + 0x9E3779B97F4A7C15ull));
  }

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform on the open interval (0,1); never returns an exact endpoint.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53 + 0x1.0p-54; }

 private:
  std::uint64_t state_;
};

inline double std_normal_cdf(double z) {
  return 0.5 * std::erfc(-z * M_SQRT1_2);
}

// Acklam's rational approximation refined by one Halley step.
inline double std_normal_inv_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("std_normal_inv_cdf: p must lie in (0,1), got " + std::to_string(p));
  }
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double err = std_normal_cdf(x) - p;
  const double u = err * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

// Independent truncated Gaussians, one per coordinate; mu/sigma are the
// pre-truncation parameters.
struct TruncatedNormalSpec {
  Vector mu;
  Vector sigma;
  Vector lb;
  Vector ub;
};

struct SampleBatch {
  Matrix points;  // one sample per row
  Vector values;  // filled after objective evaluation
};

// Inverse-CDF sampling restricted to [Phi(a), Phi(b)] per coordinate. Throws
// if a coordinate's truncation window carries no representable probability
// mass (sigma has collapsed far outside the box).
inline Matrix sample_truncated_normal(const TruncatedNormalSpec& spec, int count, SplitMix64& rng) {
  const auto n = spec.mu.size();
  if (count < 1) throw std::invalid_argument("sample_truncated_normal: count must be >= 1");
  if (spec.sigma.size() != n || spec.lb.size() != n || spec.ub.size() != n) {
    throw std::invalid_argument("sample_truncated_normal: parameter size mismatch");
  }
  Vector pa(n), pb(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!(spec.sigma[k] > 0.0)) {
      throw std::invalid_argument("sample_truncated_normal: sigma[" + std::to_string(k) + "] must be positive");
    }
    if (!(spec.lb[k] < spec.ub[k])) {
      throw std::invalid_argument("sample_truncated_normal: lb[" + std::to_string(k) + "] >= ub[" + std::to_string(k) + "]");
    }
    pa[k] = std_normal_cdf((spec.lb[k] - spec.mu[k]) / spec.sigma[k]);
    pb[k] = std_normal_cdf((spec.ub[k] - spec.mu[k]) / spec.sigma[k]);
    if (pa[k] == pb[k]) {
      throw std::runtime_error("sample_truncated_normal: truncation window at coordinate " +
                               std::to_string(k) + " has no probability mass");
    }
  }
  constexpr double u_lo = std::numeric_limits<double>::min();
  const double u_hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
  Matrix pts(count, n);
  for (int i = 0; i < count; ++i) {
    for (Eigen::Index k = 0; k < n; ++k) {
      double u = pa[k] + (pb[k] - pa[k]) * rng.uniform01();
      u = std::clamp(u, u_lo, u_hi);
      const double x = spec.mu[k] + spec.sigma[k] * std_normal_inv_cdf(u);
      pts(i, k) = std::clamp(x, spec.lb[k], spec.ub[k]);
    }
  }
  return pts;
}

// Indices of the elite_count smallest values plus the elite threshold
// gamma_hat (the elite_count-th smallest value). Total order: NaN sorts
// last, ties broken by ascending sample index.
inline std::pair<std::vector<Eigen::Index>, double> elite_select(const Vector& values, int elite_count) {
  const auto n = values.size();
  if (elite_count < 1 || elite_count > n) {
    throw std::invalid_argument("elite_select: elite_count out of range");
  }
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    const bool na = std::isnan(values[a]), nb = std::isnan(values[b]);
    if (na != nb) return nb;  // NaN after everything else
    if (!na && values[a] != values[b]) return values[a] < values[b];
    return a < b;
  });
  idx.resize(static_cast<std::size_t>(elite_count));
  return {idx, values[idx.back()]};
}

inline Vector mle_mean(const Matrix& elite_points) {
  if (elite_points.rows() < 1) throw std::invalid_argument("mle_mean: empty input");
  return elite_points.colwise().mean();
}

// Biased (divide-by-N) standard deviation, componentwise.
inline Vector mle_std(const Matrix& elite_points, const Vector& mu_hat) {
  const auto rows = elite_points.rows();
  if (rows < 2) throw std::invalid_argument("mle_std: need at least 2 rows");
  Vector out = ((elite_points.rowwise() - mu_hat.transpose()).array().square().colwise().sum() /
                static_cast<double>(rows))
                   .sqrt()
                   .matrix();
  return out;
}

inline Vector error_weights(const Vector& x, const Vector& tol_abs, double tol_rel) {
  if (x.size() != tol_abs.size()) throw std::invalid_argument("error_weights: size mismatch");
  return (tol_abs.array() + x.array().abs() * tol_rel).inverse().matrix();
}

inline double wrms_norm(const Vector& x, const Vector& weights) {
  if (x.size() != weights.size()) throw std::invalid_argument("wrms_norm: size mismatch");
  if (x.size() == 0) return 0.0;
  return std::sqrt((x.array() * weights.array()).square().sum() / static_cast<double>(x.size()));
}

}  // namespace ceopt
