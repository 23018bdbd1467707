#pragma once

// Symmetric-matrix utilities: PSD ordering, log-determinants in bits, and
// condition numbers. Everything goes through eigendecompositions of
// explicitly symmetrized matrices; inputs that are not symmetric to begin
// with are rejected.

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "wiresecret/common.hpp"

namespace wiresecret {

inline constexpr double kPsdTol = 1e-9;

// Determinants below this are treated as ordering violations rather than
// returned as huge negative log-dets.
inline constexpr double kMinDeterminant = 1e-300;

inline void check_symmetric(const Eigen::MatrixXd& m, const char* what = "matrix") {
  if (m.rows() != m.cols()) throw ValidationError(std::string(what) + " is not square");
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw ValidationError(std::string(what) + " is not symmetric");
}

inline double min_eigenvalue_sym(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

struct PsdOrderReport {
  bool ordered = false;
  double min_eigenvalue = 0.0;  // smallest eigenvalue of A - B
};

// Checks A - B is positive semidefinite up to `tol` on the smallest
// eigenvalue of the difference.
inline PsdOrderReport psd_order_check(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tol = kPsdTol) {
  check_symmetric(a, "left matrix");
  check_symmetric(b, "right matrix");
  if (a.rows() != b.rows()) throw ValidationError("matrix dimensions disagree in ordering check");
  PsdOrderReport report;
  report.min_eigenvalue = min_eigenvalue_sym(a - b);
  report.ordered = report.min_eigenvalue >= -tol;
  return report;
}

// Ordering tolerance scaled to the magnitudes involved, so comparisons stay
// meaningful for covariances with very large entries.
inline double psd_scale_tol(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tol = kPsdTol) {
  double scale = 1.0;
  if (a.size() > 0) scale = std::max(scale, a.cwiseAbs().maxCoeff());
  if (b.size() > 0) scale = std::max(scale, b.cwiseAbs().maxCoeff());
  return tol * scale;
}

// log2 det of a symmetric positive definite matrix. Non-positive eigenvalues
// or determinants below kMinDeterminant signal a broken covariance ordering.
inline double logdet2_pd(const Eigen::MatrixXd& m, const char* what = "matrix") {
  check_symmetric(m, what);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lambda = es.eigenvalues()(i);
    if (lambda <= 0.0)
      throw ValidationError(std::string(what) + " is not positive definite (eigenvalue " + std::to_string(lambda) + ")");
    logdet += std::log2(lambda);
  }
  if (logdet < std::log2(kMinDeterminant))
    throw ValidationError(std::string(what) + " has determinant below 1e-300, covariance ordering is broken");
  return logdet;
}

inline double condition_number(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

}  // namespace wiresecret
