#pragma once

// Layered secrecy rates for a transmitter with one antenna per receiver,
// where receiver k sees the scalar y_k = h_k^T x + z_k. The channel rows are
// stacked into a square matrix H so y = Hx + z with z ~ N(0, Sigma).
//
// The tool here is a family of virtual receivers indexed by k: virtual
// receiver k observes all K outputs, but the outputs of receivers k+1..K are
// buried under extra noise of variance t^2 boost_j. Multiplying by H^{-1}
// turns each virtual observation into x plus noise, so for every finite t the
// virtual receivers form a vector Gaussian broadcast channel whose noise
// covariances shrink as k grows, and the layered MIMO rate tuple applies. As
// t grows the boosted outputs become useless and the virtual rates fall to
// the rates of the scalar receivers, so the limit over t is evaluated by
// doubling t until the tuple stops moving.

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "wiresecret/common.hpp"
#include "wiresecret/linalg.hpp"
#include "wiresecret/region.hpp"

namespace wiresecret {

// Channel matrices with condition numbers beyond this make H^{-1} too
// inaccurate for the virtual construction.
inline constexpr double kMaxChannelCondition = 1e12;

inline constexpr double kVirtualScaleStart = 10.0;
inline constexpr int kVirtualScaleDoublings = 40;
inline constexpr double kVirtualConvergenceTol = 1e-6;

struct MisoSharingInstance {
  Eigen::MatrixXd channel;    // K x K, row k feeds receiver k
  Eigen::MatrixXd noise;      // covariance of the stacked receiver noise
  Eigen::MatrixXd input_cap;  // transmit covariance cap

  // Artificial noise variances for receivers 2..K (K-1 entries). Empty means
  // all ones. Receiver 1 never needs one: it is boosted in no virtual
  // receiver.
  std::vector<double> boost_variances;

  int receiver_count() const { return static_cast<int>(channel.rows()); }
};

inline void check_instance(const MisoSharingInstance& inst) {
  if (inst.channel.rows() == 0 || inst.channel.rows() != inst.channel.cols())
    throw ValidationError("channel matrix must be square with one row per receiver");
  const int K = inst.receiver_count();
  check_symmetric(inst.noise, "receiver noise covariance");
  if (inst.noise.rows() != K) throw ValidationError("noise covariance does not match the receiver count");
  if (min_eigenvalue_sym(inst.noise) <= 0.0)
    throw ValidationError("receiver noise covariance must be positive definite");
  check_symmetric(inst.input_cap, "input covariance cap");
  if (inst.input_cap.rows() != K) throw ValidationError("input covariance cap does not match the antenna count");
  if (min_eigenvalue_sym(inst.input_cap) < -kPsdTol)
    throw ValidationError("input covariance cap is not positive semidefinite");
  if (!inst.boost_variances.empty()) {
    if (static_cast<int>(inst.boost_variances.size()) != K - 1)
      throw ValidationError("need one boost variance per receiver after the first");
    for (double v : inst.boost_variances)
      if (!(v > 0.0)) throw ValidationError("boost variances must be positive");
  }
}

namespace detail {

inline std::vector<double> resolved_boosts(const MisoSharingInstance& inst) {
  if (!inst.boost_variances.empty()) return inst.boost_variances;
  return std::vector<double>(static_cast<std::size_t>(inst.receiver_count() - 1), 1.0);
}

}  // namespace detail

struct VirtualCovariances {
  double scale = 0.0;                        // the t in t^2 boost_j
  std::vector<Eigen::MatrixXd> stacked;      // noise of virtual receiver k in y coordinates
  std::vector<Eigen::MatrixXd> equivalent;   // H^{-1} stacked H^{-T}, in x coordinates
};

inline VirtualCovariances build_virtual(const MisoSharingInstance& inst, double scale) {
  check_instance(inst);
  if (!(scale > 0.0)) throw ValidationError("virtual noise scale must be positive");
  const double cond = condition_number(inst.channel);
  if (!(cond <= kMaxChannelCondition))
    throw NumericalError("channel matrix condition number " + std::to_string(cond) +
                         " is too large to invert reliably");
  const int K = inst.receiver_count();
  const Eigen::MatrixXd hinv = inst.channel.inverse();
  const std::vector<double> boosts = detail::resolved_boosts(inst);

  VirtualCovariances vc;
  vc.scale = scale;
  vc.stacked.reserve(static_cast<std::size_t>(K));
  vc.equivalent.reserve(static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k) {
    Eigen::MatrixXd stacked = inst.noise;
    for (int j = k + 1; j <= K; ++j) stacked(j - 1, j - 1) += scale * scale * boosts[j - 2];
    Eigen::MatrixXd equivalent = hinv * stacked * hinv.transpose();
    equivalent = 0.5 * (equivalent + equivalent.transpose()).eval();
    vc.stacked.push_back(std::move(stacked));
    vc.equivalent.push_back(std::move(equivalent));
  }
  return vc;
}

struct OrderingReport {
  bool ordered = false;
  // Smallest eigenvalue of equivalent[k] - equivalent[k+1] for each adjacent
  // pair; all of them must be nonnegative up to the tolerance.
  std::vector<double> min_eigenvalues;
};

inline OrderingReport check_ordering(const VirtualCovariances& vc, double tol = kPsdTol) {
  OrderingReport report;
  report.ordered = true;
  for (std::size_t k = 0; k + 1 < vc.equivalent.size(); ++k) {
    const double eig = min_eigenvalue_sym(vc.equivalent[k] - vc.equivalent[k + 1]);
    report.min_eigenvalues.push_back(eig);
    if (eig < -tol) report.ordered = false;
  }
  return report;
}

struct MisoLimitStep {
  double scale = 0.0;
  RateTuple rates;
};

struct MisoLimitResult {
  RateTuple limit;  // last evaluated tuple; the limit when converged is true
  std::vector<MisoLimitStep> trace;
  bool converged = false;
};

// Evaluates the layered rate tuple of the virtual broadcast channel along
// scale = 10, 20, 40, ... until consecutive tuples differ by less than
// kVirtualConvergenceTol in every coordinate. Stops early and reports
// converged = false if the doubling budget runs out or the covariances
// degenerate numerically first.
inline MisoLimitResult limit_rate_tuple(const MisoSharingInstance& inst, const CovarianceChain& chain) {
  check_instance(inst);
  MisoLimitResult result;
  double scale = kVirtualScaleStart;
  for (int m = 0; m <= kVirtualScaleDoublings; ++m, scale *= 2.0) {
    GaussianMimoBroadcast virt;
    virt.input_cap = inst.input_cap;
    RateTuple rates;
    try {
      virt.noise_covariances = build_virtual(inst, scale).equivalent;
      rates = mimo_rate_tuple(virt, chain);
    } catch (const ValidationError&) {
      if (result.trace.empty()) throw;  // bad input, not exhausted numerics
      break;
    } catch (const NumericalError&) {
      if (result.trace.empty()) throw;
      break;
    }
    if (!result.trace.empty()) {
      double diff = 0.0;
      for (std::size_t k = 0; k < rates.rates.size(); ++k)
        diff = std::max(diff, std::abs(rates.rates[k] - result.trace.back().rates.rates[k]));
      if (diff < kVirtualConvergenceTol) {
        result.trace.push_back({scale, rates});
        result.limit = std::move(rates);
        result.converged = true;
        return result;
      }
    }
    result.trace.push_back({scale, std::move(rates)});
  }
  if (!result.trace.empty()) result.limit = result.trace.back().rates;
  return result;
}

}  // namespace wiresecret
