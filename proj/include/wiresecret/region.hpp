#pragma once

// Layered rate tuples for degraded broadcast channels where each receiver
// decodes its own layer and all weaker layers, and every layer must stay
// secret from the next weaker receiver. Receiver 1 is the weakest; the
// channel must degrade along X -> Y_K -> ... -> Y_1.
//
// Discrete channels take an auxiliary chain U_1 -> ... -> U_{K-1} -> X.
// Scalar Gaussian channels take a power split, vector Gaussian channels a
// covariance chain S >= S_1 >= ... >= S_{K-1} >= 0.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "wiresecret/channels.hpp"
#include "wiresecret/common.hpp"
#include "wiresecret/discrete.hpp"
#include "wiresecret/gridsearch.hpp"
#include "wiresecret/linalg.hpp"

namespace wiresecret {

struct RateTuple {
  std::vector<double> rates;  // clamped at zero
  std::vector<double> raw;

  double sum() const {
    double s = 0;
    for (double r : rates) s += r;
    return s;
  }
};

inline RateTuple clamp_rates(std::vector<double> raw) {
  RateTuple t;
  t.raw = std::move(raw);
  t.rates.reserve(t.raw.size());
  for (double r : t.raw) t.rates.push_back(std::max(r, 0.0));
  return t;
}

// Auxiliary chain for K receivers: `first` is the law of U_1 and factors[l]
// maps level l to level l+1, the last factor producing X. A single-receiver
// chain is just an input law.
struct MarkovChain {
  Eigen::VectorXd first;
  std::vector<Eigen::MatrixXd> factors;

  int level_count() const { return static_cast<int>(factors.size()) + 1; }
};

inline void check_chain(const MarkovChain& chain) {
  check_probability_vector(chain.first, "chain root law");
  Eigen::Index width = chain.first.size();
  for (std::size_t l = 0; l < chain.factors.size(); ++l) {
    if (chain.factors[l].rows() != width)
      throw ValidationError("chain factor " + std::to_string(l + 1) + " does not match the previous level");
    check_stochastic_rows(chain.factors[l], ("chain factor " + std::to_string(l + 1)).c_str());
    width = chain.factors[l].cols();
  }
}

namespace detail {

// I(B; Y | A) from the joint law of (A, B) and the law of Y given B.
inline double conditional_mi_tables(const Eigen::MatrixXd& joint_ab, const Eigen::MatrixXd& y_given_b) {
  double mi = 0.0;
  for (Eigen::Index a = 0; a < joint_ab.rows(); ++a) {
    const double pa = joint_ab.row(a).sum();
    if (pa <= 0.0) continue;
    mi += pa * mutual_information_bits((joint_ab.row(a).transpose() / pa).asDiagonal() * y_given_b);
  }
  return mi;
}

}  // namespace detail

// Rate tuple of an auxiliary chain on a degraded discrete broadcast channel:
//   R_1 = I(U_1; Y_1)
//   R_k = I(U_k; Y_k | U_{k-1}) - I(U_k; Y_{k-1} | U_{k-1})   (U_K meaning X)
// Throws when the channel fails the degradation chain test or the chain does
// not match the channel.
inline RateTuple dmc_rate_tuple(const MarkovChain& chain, const DmcBroadcast& ch) {
  check_channel(ch);
  check_chain(chain);
  const int K = ch.receiver_count();
  if (chain.level_count() != K)
    throw ValidationError("chain needs K-1 auxiliary levels plus the input for K receivers");
  const Eigen::Index last_width =
      chain.factors.empty() ? chain.first.size() : chain.factors.back().cols();
  if (last_width != ch.input_size()) throw ValidationError("chain input level does not match the channel alphabet");
  {
    const DegradednessReport order = check_degraded_chain(ch);
    if (!order.degraded)
      throw ValidationError("channel is not degraded along the receiver order (residual " +
                            std::to_string(order.residual) + ")");
  }

  // Level marginals and the map from each level to X.
  std::vector<Eigen::VectorXd> level_law{chain.first};
  for (const auto& f : chain.factors) level_law.push_back(f.transpose() * level_law.back());
  std::vector<Eigen::MatrixXd> to_input(static_cast<std::size_t>(K));
  to_input[K - 1] = Eigen::MatrixXd::Identity(ch.input_size(), ch.input_size());
  for (int level = K - 2; level >= 0; --level) to_input[level] = chain.factors[level] * to_input[level + 1];

  std::vector<double> raw(static_cast<std::size_t>(K));
  raw[0] = mutual_information_bits(level_law[0].asDiagonal() * (to_input[0] * ch.transitions[0]));
  for (int k = 2; k <= K; ++k) {
    const Eigen::MatrixXd joint = level_law[k - 2].asDiagonal() * chain.factors[k - 2];
    const Eigen::MatrixXd own = to_input[k - 1] * ch.transitions[k - 1];
    const Eigen::MatrixXd weaker = to_input[k - 1] * ch.transitions[k - 2];
    raw[k - 1] = detail::conditional_mi_tables(joint, own) - detail::conditional_mi_tables(joint, weaker);
  }
  return clamp_rates(std::move(raw));
}

inline void check_siso_order(const GaussianSisoBroadcast& ch) {
  check_channel(ch);
  for (std::size_t k = 1; k < ch.noise_variances.size(); ++k)
    if (!(ch.noise_variances[k - 1] > ch.noise_variances[k]))
      throw ValidationError("noise variances must strictly decrease from receiver 1 (weakest) to K");
}

// Scalar Gaussian rate tuple for a power split across layers. With
// T_k = sum_{j>=k} P_j:
//   R_k = 1/2 log2((N_k + T_k)/(N_k + T_{k+1}))
//       - 1/2 log2((N_{k-1} + T_k)/(N_{k-1} + T_{k+1}))  for k >= 2.
inline RateTuple siso_rate_tuple(const GaussianSisoBroadcast& ch, const std::vector<double>& allocation) {
  check_siso_order(ch);
  const int K = static_cast<int>(ch.noise_variances.size());
  if (static_cast<int>(allocation.size()) != K) throw ValidationError("power split needs one entry per receiver");
  double total = 0.0;
  for (double p : allocation) {
    if (!(p >= 0.0)) throw ValidationError("layer powers must be nonnegative");
    total += p;
  }
  if (total > ch.power + 1e-9) throw ValidationError("power split exceeds the channel power limit");

  std::vector<double> tail(static_cast<std::size_t>(K) + 1, 0.0);
  for (int k = K - 1; k >= 0; --k) tail[k] = tail[k + 1] + allocation[k];
  std::vector<double> raw(static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k) {
    const double nk = ch.noise_variances[k - 1];
    double r = 0.5 * std::log2((nk + tail[k - 1]) / (nk + tail[k]));
    if (k >= 2) {
      const double nw = ch.noise_variances[k - 2];
      r -= 0.5 * std::log2((nw + tail[k - 1]) / (nw + tail[k]));
    }
    raw[k - 1] = r;
  }
  return clamp_rates(std::move(raw));
}

// Covariance split for the vector Gaussian region: S is the total input
// covariance and layers hold S_1 >= ... >= S_{K-1}.
struct CovarianceChain {
  Eigen::MatrixXd cap;  // S
  std::vector<Eigen::MatrixXd> layers;
};

inline void check_covariance_chain(const CovarianceChain& chain, const GaussianMimoBroadcast& ch) {
  check_channel(ch);
  if (static_cast<int>(chain.layers.size()) != ch.receiver_count() - 1)
    throw ValidationError("covariance chain needs K-1 layers");
  check_symmetric(chain.cap, "covariance cap");
  if (!psd_order_check(ch.input_cap, chain.cap, psd_scale_tol(ch.input_cap, chain.cap)).ordered)
    throw ValidationError("covariance cap exceeds the channel input constraint");
  const Eigen::MatrixXd* prev = &chain.cap;
  for (std::size_t l = 0; l < chain.layers.size(); ++l) {
    if (!psd_order_check(*prev, chain.layers[l], psd_scale_tol(*prev, chain.layers[l])).ordered)
      throw ValidationError("covariance chain not monotone at layer " + std::to_string(l + 1));
    prev = &chain.layers[l];
  }
  if (min_eigenvalue_sym(*prev) < -psd_scale_tol(*prev, *prev))
    throw ValidationError("last covariance layer is not positive semidefinite");
}

// Vector Gaussian rate tuple. With S_0 = S and S_K = 0:
//   R_k = 1/2 log2(|Sigma_k + S_{k-1}| / |Sigma_k + S_k|)
//       - 1/2 log2(|Sigma_{k-1} + S_{k-1}| / |Sigma_{k-1} + S_k|)  for k >= 2.
// The noise covariances must satisfy Sigma_1 >= ... >= Sigma_K.
inline RateTuple mimo_rate_tuple(const GaussianMimoBroadcast& ch, const CovarianceChain& chain) {
  check_covariance_chain(chain, ch);
  const int K = ch.receiver_count();
  for (int k = 2; k <= K; ++k) {
    const auto& weaker = ch.noise_covariances[k - 2];
    const auto& stronger = ch.noise_covariances[k - 1];
    if (!psd_order_check(weaker, stronger, psd_scale_tol(weaker, stronger)).ordered)
      throw ValidationError("noise covariances must decrease from receiver 1 (weakest) to K");
  }

  auto layer = [&](int idx) -> const Eigen::MatrixXd& { return chain.layers[idx - 1]; };
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(ch.dimension(), ch.dimension());
  auto split = [&](int idx) -> const Eigen::MatrixXd& {
    if (idx == 0) return chain.cap;
    if (idx == K) return zero;
    return layer(idx);
  };
  std::vector<double> raw(static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k) {
    const Eigen::MatrixXd& sigma = ch.noise_covariances[k - 1];
    double r = 0.5 * (logdet2_pd(sigma + split(k - 1), "noise plus split covariance") -
                      logdet2_pd(sigma + split(k), "noise plus split covariance"));
    if (k >= 2) {
      const Eigen::MatrixXd& weaker = ch.noise_covariances[k - 2];
      r -= 0.5 * (logdet2_pd(weaker + split(k - 1), "noise plus split covariance") -
                  logdet2_pd(weaker + split(k), "noise plus split covariance"));
    }
    raw[k - 1] = r;
  }
  return clamp_rates(std::move(raw));
}

struct SisoSample {
  std::vector<double> allocation;
  RateTuple rates;
};

// Exhaustive sweep of power splits on the grid {0, P/steps, ..., P}^K with
// sum at most P (a slack coordinate absorbs unused power).
inline std::vector<SisoSample> siso_region_samples(const GaussianSisoBroadcast& ch, int steps) {
  check_siso_order(ch);
  if (steps < 1) throw ValidationError("region sweep needs a positive step count");
  const int K = static_cast<int>(ch.noise_variances.size());
  std::vector<SisoSample> samples;
  for_each_composition(steps, K + 1, [&](const std::vector<int>& digits) {
    SisoSample sample;
    sample.allocation.resize(K);
    for (int k = 0; k < K; ++k) sample.allocation[k] = ch.power * digits[k] / steps;
    sample.rates = siso_rate_tuple(ch, sample.allocation);
    samples.push_back(std::move(sample));
  });
  return samples;
}

struct SisoBoundaryResult {
  std::vector<double> allocation;
  RateTuple rates;
  double value = 0.0;
};

// Maximizes a weighted rate sum over power splits: grid sweep plus
// coordinate-exchange refinement on the (K+1)-simplex (slack included).
inline SisoBoundaryResult weighted_boundary_search(const GaussianSisoBroadcast& ch,
                                                   const std::vector<double>& weights, int steps,
                                                   int refine_rounds = 3) {
  check_siso_order(ch);
  const int K = static_cast<int>(ch.noise_variances.size());
  if (static_cast<int>(weights.size()) != K) throw ValidationError("need one weight per receiver");
  auto objective = [&](const Eigen::VectorXd& p) {
    std::vector<double> allocation(K);
    for (int k = 0; k < K; ++k) allocation[k] = ch.power * p(k);
    const RateTuple rates = siso_rate_tuple(ch, allocation);
    double v = 0;
    for (int k = 0; k < K; ++k) v += weights[k] * rates.rates[k];
    return v;
  };
  auto eval = [&objective](const Eigen::VectorXd& p, std::vector<double>& out) { out[0] = objective(p); };
  SimplexPoint best = sweep_simplex_grid(K + 1, steps, 1, eval)[0];
  best = refine_on_simplex(best, steps, refine_rounds, objective);
  SisoBoundaryResult result;
  result.allocation.resize(K);
  for (int k = 0; k < K; ++k) result.allocation[k] = ch.power * best.point(k);
  result.rates = siso_rate_tuple(ch, result.allocation);
  result.value = best.value;
  return result;
}

struct MimoBoundaryConfig {
  int alpha_grid = 10;
  int perturbations = 200;
  std::uint64_t seed = 1;
};

struct MimoBoundaryResult {
  CovarianceChain chain;
  RateTuple rates;
  double value = 0.0;
  // The covariance-chain search is a heuristic: scaled-cap chains plus
  // random positive-semidefinite-preserving perturbations. It samples the
  // region without any optimality certificate.
  bool heuristic = true;
};

inline MimoBoundaryResult weighted_boundary_search(const GaussianMimoBroadcast& ch,
                                                   const std::vector<double>& weights,
                                                   const MimoBoundaryConfig& cfg = {}) {
  check_channel(ch);
  const int K = ch.receiver_count();
  if (static_cast<int>(weights.size()) != K) throw ValidationError("need one weight per receiver");
  if (cfg.alpha_grid < 1 || cfg.perturbations < 0) throw ValidationError("search configuration out of range");
  const Eigen::Index r = ch.dimension();

  auto chain_value = [&](const CovarianceChain& chain, RateTuple& rates) {
    rates = mimo_rate_tuple(ch, chain);
    double v = 0;
    for (int k = 0; k < K; ++k) v += weights[k] * rates.rates[k];
    return v;
  };

  // Phase 1: chains that scale the cap, S_k = alpha_k S with nonincreasing
  // alpha. Enumerated as compositions so the loop is exhaustive for any K.
  MimoBoundaryResult best;
  best.value = -std::numeric_limits<double>::infinity();
  for_each_composition(cfg.alpha_grid, K, [&](const std::vector<int>& digits) {
    CovarianceChain chain;
    chain.cap = ch.input_cap;
    int level = cfg.alpha_grid;
    for (int l = 0; l < K - 1; ++l) {
      level -= digits[l];
      chain.layers.push_back(ch.input_cap * (static_cast<double>(level) / cfg.alpha_grid));
    }
    RateTuple rates;
    const double v = chain_value(chain, rates);
    if (v > best.value) {
      best.value = v;
      best.chain = std::move(chain);
      best.rates = std::move(rates);
    }
  });

  // Phase 2: seeded random symmetric perturbations of single layers,
  // accepted when they keep the chain ordered and improve the objective.
  std::mt19937_64 rng(cfg.seed);
  const double scale0 = 0.1 * (1.0 + ch.input_cap.cwiseAbs().maxCoeff());
  for (int iter = 0; iter < cfg.perturbations && K > 1; ++iter) {
    const int l = static_cast<int>(rng() % static_cast<std::uint64_t>(K - 1));
    const double scale = scale0 / (1.0 + iter / 25.0);
    Eigen::MatrixXd bump(r, r);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j <= i; ++j) bump(i, j) = bump(j, i) = scale * unif(rng);
    CovarianceChain candidate = best.chain;
    candidate.layers[l] += bump;
    try {
      RateTuple rates;
      const double v = chain_value(candidate, rates);
      if (v > best.value) {
        best.value = v;
        best.chain = std::move(candidate);
        best.rates = std::move(rates);
      }
    } catch (const ValidationError&) {
      // perturbation broke the ordering; skip it
    }
  }
  return best;
}

}  // namespace wiresecret
