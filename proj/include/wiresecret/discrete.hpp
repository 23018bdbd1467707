#pragma once

// Entropy and mutual information on finite probability tables, in bits.
// Zero-probability terms contribute zero (0 log 0 = 0).

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "wiresecret/common.hpp"

namespace wiresecret {

inline void check_probability_vector(const Eigen::VectorXd& p, const char* what = "distribution") {
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (!(p(i) >= 0.0))
      throw ValidationError(std::string(what) + " has negative entry at index " + std::to_string(i));
  if (std::abs(p.sum() - 1.0) > kProbSumTol)
    throw ValidationError(std::string(what) + " sums to " + std::to_string(p.sum()) + ", expected 1");
}

inline void check_stochastic_rows(const Eigen::MatrixXd& w, const char* what = "transition matrix") {
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      if (!(w(i, j) >= 0.0))
        throw ValidationError(std::string(what) + " has negative entry in row " + std::to_string(i));
      sum += w(i, j);
    }
    if (std::abs(sum - 1.0) > kProbSumTol)
      throw ValidationError(std::string(what) + " row " + std::to_string(i) + " sums to " + std::to_string(sum));
  }
}

inline void check_joint_table(const Eigen::MatrixXd& joint, const char* what = "joint distribution") {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < joint.rows(); ++i)
    for (Eigen::Index j = 0; j < joint.cols(); ++j) {
      if (!(joint(i, j) >= 0.0))
        throw ValidationError(std::string(what) + " has a negative entry");
      sum += joint(i, j);
    }
  if (std::abs(sum - 1.0) > kProbSumTol)
    throw ValidationError(std::string(what) + " sums to " + std::to_string(sum) + ", expected 1");
}

inline double entropy_bits(const Eigen::VectorXd& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p(i) > 0.0) h -= p(i) * std::log2(p(i));
  return h;
}

inline double binary_entropy_bits(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

// I(R;C) of a joint table (rows = one variable, columns = the other).
// The table is trusted to be a joint distribution; validation is the
// caller's job so grid sweeps can skip redundant checks.
inline double mutual_information_bits(const Eigen::MatrixXd& joint) {
  const Eigen::VectorXd rows = joint.rowwise().sum();
  const Eigen::VectorXd cols = joint.colwise().sum();
  double mi = 0.0;
  for (Eigen::Index i = 0; i < joint.rows(); ++i) {
    if (rows(i) <= 0.0) continue;
    for (Eigen::Index j = 0; j < joint.cols(); ++j) {
      const double p = joint(i, j);
      if (p > 0.0) mi += p * std::log2(p / (rows(i) * cols(j)));
    }
  }
  return mi;
}

}  // namespace wiresecret
