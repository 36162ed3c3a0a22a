#ifndef GOAL_TESTS_ORACLES_HPP
#define GOAL_TESTS_ORACLES_HPP

// Reference computations written straight from the definitions, with no
// calls into the library's numerical code. Slow on purpose.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Mat = Eigen::MatrixXd;

/// Dense K x T one-hot matrix from an assignment vector.
inline Mat one_hot(const std::vector<long>& assignment, long clusters) {
  Mat g = Mat::Zero(clusters, static_cast<long>(assignment.size()));
  for (std::size_t t = 0; t < assignment.size(); ++t) {
    g(assignment[t], static_cast<long>(t)) = 1.0;
  }
  return g;
}

/// Objective by explicit sums over d, t, k, m with a dense Gamma.
inline double objective(const Mat& x, const Mat& pi, const Mat& rs,
                        const Mat& lambda, const Mat& gamma, double eps,
                        double floor = 1e-12) {
  const long d_count = x.rows(), t_count = x.cols(), k_count = gamma.rows();
  const long m_count = pi.rows();
  double fit = 0.0;
  for (long d = 0; d < d_count; ++d)
    for (long t = 0; t < t_count; ++t)
      for (long k = 0; k < k_count; ++k) {
        const double diff = x(d, t) - rs(d, k);
        fit += gamma(k, t) * diff * diff;
      }
  double label = 0.0;
  for (long m = 0; m < m_count; ++m)
    for (long t = 0; t < t_count; ++t)
      for (long k = 0; k < k_count; ++k) {
        label += pi(m, t) * gamma(k, t) *
                 std::log(std::max(lambda(m, k), floor));
      }
  return fit / static_cast<double>(t_count) -
         eps / static_cast<double>(t_count * m_count) * label;
}

/// Cluster means (D x K); empty clusters give zero columns.
inline Mat means(const Mat& x, const std::vector<long>& a, long clusters) {
  Mat sum = Mat::Zero(x.rows(), clusters);
  std::vector<double> n(static_cast<std::size_t>(clusters), 0.0);
  for (std::size_t t = 0; t < a.size(); ++t) {
    sum.col(a[t]) += x.col(static_cast<long>(t));
    n[static_cast<std::size_t>(a[t])] += 1.0;
  }
  for (long k = 0; k < clusters; ++k)
    if (n[static_cast<std::size_t>(k)] > 0) sum.col(k) /= n[static_cast<std::size_t>(k)];
  return sum;
}

/// Column-normalized Pi Gammaᵀ with uniform empty columns.
inline Mat conditional(const Mat& pi, const std::vector<long>& a,
                       long clusters) {
  Mat joint = Mat::Zero(pi.rows(), clusters);
  for (std::size_t t = 0; t < a.size(); ++t)
    joint.col(a[t]) += pi.col(static_cast<long>(t));
  for (long k = 0; k < clusters; ++k) {
    const double s = joint.col(k).sum();
    if (s > 0) joint.col(k) /= s;
    else joint.col(k).setConstant(1.0 / static_cast<double>(pi.rows()));
  }
  return joint;
}

/// Minimum objective over every two-box partition with both boxes
/// non-empty, with box images at the cluster means (G = D) and Lambda at
/// its closed form.
inline double brute_force_two_boxes(const Mat& x, const Mat& pi, double eps,
                                    double floor = 1e-12) {
  const long t_count = x.cols();
  double best = std::numeric_limits<double>::infinity();
  const std::uint64_t last = (std::uint64_t{1} << t_count) - 1;
  for (std::uint64_t mask = 1; mask < last; ++mask) {
    std::vector<long> a(static_cast<std::size_t>(t_count));
    for (long t = 0; t < t_count; ++t) a[static_cast<std::size_t>(t)] = (mask >> t) & 1u;
    const Mat rs = means(x, a, 2);
    const Mat lam = conditional(pi, a, 2);
    best = std::min(best, objective(x, pi, rs, lam, one_hot(a, 2), eps, floor));
  }
  return best;
}

/// Exhaustive pair count: P(score_pos > score_neg) + 0.5 P(tie).
inline double auc_pairs(const std::vector<double>& s, const std::vector<int>& y) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j] != 0) continue;
      pairs += 1.0;
      if (s[i] > s[j]) wins += 1.0;
      else if (s[i] == s[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

inline double accuracy_count(const std::vector<int>& a, const std::vector<int>& b) {
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += a[i] == b[i];
  return static_cast<double>(same) / static_cast<double>(a.size());
}

/// Orthonormal columns from the Householder QR of a Gaussian draw.
inline Mat random_stiefel(long rows, long cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Mat a(rows, cols);
  for (long j = 0; j < cols; ++j)
    for (long i = 0; i < rows; ++i) a(i, j) = n(rng);
  Eigen::HouseholderQR<Mat> qr(a);
  return qr.householderQ() * Mat::Identity(rows, cols);
}

/// ||X - R S Gamma||_F^2, the quantity the rotation step minimizes.
inline double procrustes(const Mat& x, const Mat& r, const Mat& s,
                         const Mat& gamma) {
  return (x - r * s * gamma).squaredNorm();
}

inline Mat gaussian(long rows, long cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Mat a(rows, cols);
  for (long j = 0; j < cols; ++j)
    for (long i = 0; i < rows; ++i) a(i, j) = n(rng);
  return a;
}

/// Random one-hot binary Pi with both classes present when t >= 2.
inline Mat random_binary_pi(long t, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  Mat pi = Mat::Zero(2, t);
  for (long j = 0; j < t; ++j) pi(coin(rng) ? 0 : 1, j) = 1.0;
  if (t >= 2) {
    pi.col(0) << 1.0, 0.0;
    pi.col(1) << 0.0, 1.0;
  }
  return pi;
}

}  // namespace oracle

#endif  // GOAL_TESTS_ORACLES_HPP
