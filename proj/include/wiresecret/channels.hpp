#pragma once

// Broadcast channel descriptions and the information measures computed on
// them. A broadcast channel has one input and K receiver outputs; receiver
// groups are addressed by the same bitmasks as participant subsets.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "wiresecret/access_structure.hpp"
#include "wiresecret/common.hpp"
#include "wiresecret/discrete.hpp"
#include "wiresecret/linalg.hpp"
#include "wiresecret/lp.hpp"

namespace wiresecret {

// Discrete memoryless broadcast channel: one row-stochastic |X| x |Y_k|
// matrix per receiver, shared input alphabet.
struct DmcBroadcast {
  std::vector<Eigen::MatrixXd> transitions;

  int receiver_count() const { return static_cast<int>(transitions.size()); }
  Eigen::Index input_size() const { return transitions.empty() ? 0 : transitions.front().rows(); }
};

inline void check_channel(const DmcBroadcast& ch) {
  if (ch.transitions.empty()) throw ValidationError("channel has no receivers");
  if (ch.receiver_count() > 64) throw ValidationError("channel has more than 64 receivers");
  const Eigen::Index inputs = ch.input_size();
  if (inputs < 1) throw ValidationError("channel input alphabet is empty");
  for (int k = 0; k < ch.receiver_count(); ++k) {
    if (ch.transitions[k].rows() != inputs)
      throw ValidationError("receiver " + std::to_string(k + 1) + " disagrees on the input alphabet size");
    if (ch.transitions[k].cols() < 1)
      throw ValidationError("receiver " + std::to_string(k + 1) + " has an empty output alphabet");
    check_stochastic_rows(ch.transitions[k], ("receiver " + std::to_string(k + 1) + " transition matrix").c_str());
  }
}

// Scalar Gaussian broadcast: Y_k = X + Z_k with noise variance N_k under
// input power limit P. Receiver 1 is listed first.
struct GaussianSisoBroadcast {
  std::vector<double> noise_variances;
  double power = 0.0;
};

inline void check_channel(const GaussianSisoBroadcast& ch) {
  if (ch.noise_variances.empty()) throw ValidationError("channel has no receivers");
  for (double n : ch.noise_variances)
    if (!(n > 0.0)) throw ValidationError("noise variances must be positive");
  if (!(ch.power >= 0.0)) throw ValidationError("power limit must be nonnegative");
}

// Vector Gaussian broadcast: Y_k = X + Z_k with Z_k ~ N(0, Sigma_k) and input
// covariance capped by S (PSD order).
struct GaussianMimoBroadcast {
  std::vector<Eigen::MatrixXd> noise_covariances;
  Eigen::MatrixXd input_cap;

  int receiver_count() const { return static_cast<int>(noise_covariances.size()); }
  Eigen::Index dimension() const { return input_cap.rows(); }
};

inline void check_channel(const GaussianMimoBroadcast& ch) {
  if (ch.noise_covariances.empty()) throw ValidationError("channel has no receivers");
  check_symmetric(ch.input_cap, "input covariance cap");
  if (min_eigenvalue_sym(ch.input_cap) < -kPsdTol)
    throw ValidationError("input covariance cap is not positive semidefinite");
  for (int k = 0; k < ch.receiver_count(); ++k) {
    const auto& sigma = ch.noise_covariances[k];
    check_symmetric(sigma, ("noise covariance " + std::to_string(k + 1)).c_str());
    if (sigma.rows() != ch.dimension())
      throw ValidationError("noise covariance " + std::to_string(k + 1) + " disagrees on the dimension");
    if (min_eigenvalue_sym(sigma) <= 0.0)
      throw ValidationError("noise covariance " + std::to_string(k + 1) + " must be positive definite");
  }
}

namespace detail {

// Joint transition matrix of the receiver group in `mask`: |X| rows, one
// column per tuple of group outputs (mixed-radix, first receiver in the mask
// is the fastest-varying digit).
inline Eigen::MatrixXd group_transition(const DmcBroadcast& ch, SubsetMask mask) {
  const Eigen::Index inputs = ch.input_size();
  std::vector<int> group;
  for (int k = 1; k <= ch.receiver_count(); ++k)
    if (mask & (SubsetMask{1} << (k - 1))) group.push_back(k - 1);
  if (mask >> ch.receiver_count())
    throw ValidationError("receiver group references receivers beyond the channel");
  std::size_t cols = 1;
  for (int k : group) {
    cols *= static_cast<std::size_t>(ch.transitions[k].cols());
    if (cols > kMaxProductAlphabet)
      throw NumericalError("product output alphabet exceeds the enumeration cap");
  }
  Eigen::MatrixXd w = Eigen::MatrixXd::Ones(inputs, static_cast<Eigen::Index>(cols));
  std::size_t stride = 1;
  for (int k : group) {
    const auto& wk = ch.transitions[k];
    const std::size_t span = static_cast<std::size_t>(wk.cols());
    for (Eigen::Index x = 0; x < inputs; ++x)
      for (std::size_t col = 0; col < cols; ++col)
        w(x, static_cast<Eigen::Index>(col)) *= wk(x, static_cast<Eigen::Index>((col / stride) % span));
    stride *= span;
  }
  return w;
}

}  // namespace detail

// I(X; Y_S) in bits for the receiver group S under input law px. An empty
// group carries no information.
inline double mutual_information_dmc(const Eigen::VectorXd& px, SubsetMask receivers, const DmcBroadcast& ch) {
  check_channel(ch);
  if (px.size() != ch.input_size()) throw ValidationError("input distribution size mismatch");
  check_probability_vector(px, "input distribution");
  if (receivers == 0) return 0.0;
  const Eigen::MatrixXd w = detail::group_transition(ch, receivers);
  return mutual_information_bits(px.asDiagonal() * w);
}

// I(U; Y_S) from a joint auxiliary-input law (rows u, columns x), or
// I(X; Y_S | U) when input_given_aux is set.
inline double conditional_mi_dmc(const Eigen::MatrixXd& p_ux, SubsetMask receivers, const DmcBroadcast& ch,
                                 bool input_given_aux) {
  check_channel(ch);
  if (p_ux.cols() != ch.input_size()) throw ValidationError("joint distribution input size mismatch");
  check_joint_table(p_ux, "auxiliary-input joint");
  if (receivers == 0) return 0.0;
  const Eigen::MatrixXd w = detail::group_transition(ch, receivers);
  if (!input_given_aux) return mutual_information_bits(p_ux * w);
  double mi = 0.0;
  for (Eigen::Index u = 0; u < p_ux.rows(); ++u) {
    const double pu = p_ux.row(u).sum();
    if (pu <= 0.0) continue;
    mi += pu * mutual_information_bits((p_ux.row(u).transpose() / pu).asDiagonal() * w);
  }
  return mi;
}

struct DegradednessReport {
  bool degraded = false;
  double residual = 0.0;        // minimal max-norm residual of W_weak - W_strong Q
  Eigen::MatrixXd intermediate; // the minimizing row-stochastic Q
};

inline constexpr double kDegradedFeasibilityTol = 1e-9;

// Decides whether receiver k-1 is a stochastically degraded version of
// receiver k: is there a row-stochastic Q with W_{k-1} = W_k Q? Solved as a
// linear program minimizing the max-norm residual; the optimal Q is reported
// as the certificate either way.
inline DegradednessReport check_degraded_dmc(const DmcBroadcast& ch, int receiver) {
  check_channel(ch);
  if (receiver < 2 || receiver > ch.receiver_count())
    throw ValidationError("degradedness compares receiver k with k-1, need k in [2,K]");
  const Eigen::MatrixXd& strong = ch.transitions[receiver - 1];
  const Eigen::MatrixXd& weak = ch.transitions[receiver - 2];
  const Eigen::Index m = strong.rows();
  const Eigen::Index a = strong.cols();
  const Eigen::Index b = weak.cols();

  // Variables: vec(Q) row-major (a*b entries), then the residual bound t.
  const Eigen::Index nvars = a * b + 1;
  LpProblem lp;
  lp.c = Eigen::VectorXd::Zero(nvars);
  lp.c(nvars - 1) = 1.0;
  lp.a_eq = Eigen::MatrixXd::Zero(a, nvars);
  lp.b_eq = Eigen::VectorXd::Ones(a);
  for (Eigen::Index r = 0; r < a; ++r)
    for (Eigen::Index s = 0; s < b; ++s) lp.a_eq(r, r * b + s) = 1.0;
  lp.a_ub = Eigen::MatrixXd::Zero(2 * m * b, nvars);
  lp.b_ub = Eigen::VectorXd::Zero(2 * m * b);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < b; ++j) {
      const Eigen::Index row = 2 * (i * b + j);
      for (Eigen::Index r = 0; r < a; ++r) {
        lp.a_ub(row, r * b + j) = strong(i, r);
        lp.a_ub(row + 1, r * b + j) = -strong(i, r);
      }
      lp.a_ub(row, nvars - 1) = -1.0;
      lp.a_ub(row + 1, nvars - 1) = -1.0;
      lp.b_ub(row) = weak(i, j);
      lp.b_ub(row + 1) = -weak(i, j);
    }

  const LpSolution sol = solve_lp(lp);
  if (!sol.feasible) throw NumericalError("degradedness program unexpectedly infeasible");
  DegradednessReport report;
  report.residual = sol.objective;
  report.degraded = sol.objective <= kDegradedFeasibilityTol;
  report.intermediate = Eigen::MatrixXd::Zero(a, b);
  for (Eigen::Index r = 0; r < a; ++r)
    for (Eigen::Index s = 0; s < b; ++s) report.intermediate(r, s) = sol.x(r * b + s);
  return report;
}

// Checks the full degradation chain Y_K -> ... -> Y_1 (receiver 1 weakest).
// Returns the first failing report, or the last report when all pairs pass.
inline DegradednessReport check_degraded_chain(const DmcBroadcast& ch) {
  check_channel(ch);
  DegradednessReport report;
  report.degraded = true;
  for (int k = 2; k <= ch.receiver_count(); ++k) {
    report = check_degraded_dmc(ch, k);
    if (!report.degraded) return report;
  }
  return report;
}

// 1/2 log2(1 + sum_{l in group} P / N_l): what the receivers in `group` learn
// about a Gaussian input of power P when they combine their observations.
inline double gaussian_group_mi(double power, const std::vector<double>& noise_variances, SubsetMask group) {
  if (!(power >= 0.0)) throw ValidationError("power must be nonnegative");
  if (group >> noise_variances.size()) throw ValidationError("group references receivers beyond the channel");
  double snr = 0.0;
  for (std::size_t l = 0; l < noise_variances.size(); ++l) {
    if (!(noise_variances[l] > 0.0)) throw ValidationError("noise variances must be positive");
    if (group & (SubsetMask{1} << l)) snr += power / noise_variances[l];
  }
  return 0.5 * std::log2(1.0 + snr);
}

}  // namespace wiresecret
