#pragma once

// Small dense linear programs via two-phase tableau simplex with Bland's
// rule. Only intended for the feasibility problems this library builds
// (tens of variables); no scaling or sparsity.

#include <Eigen/Dense>
#include <vector>

#include "wiresecret/common.hpp"

namespace wiresecret {

// minimize c.x  subject to  a_ub x <= b_ub,  a_eq x == b_eq,  x >= 0
struct LpProblem {
  Eigen::MatrixXd a_ub;
  Eigen::VectorXd b_ub;
  Eigen::MatrixXd a_eq;
  Eigen::VectorXd b_eq;
  Eigen::VectorXd c;
};

struct LpSolution {
  bool feasible = false;
  double objective = 0.0;
  Eigen::VectorXd x;
};

namespace detail {

class SimplexTableau {
 public:
  SimplexTableau(const LpProblem& p)
      : n_(p.c.size()),
        m_ub_(p.b_ub.size()),
        m_(p.b_ub.size() + p.b_eq.size()),
        cols_(n_ + m_ub_ + m_),
        t_(Eigen::MatrixXd::Zero(m_, cols_)),
        rhs_(Eigen::VectorXd::Zero(m_)),
        basis_(m_, -1) {
    for (Eigen::Index i = 0; i < m_ub_; ++i) {
      t_.row(i).head(n_) = p.a_ub.row(i);
      t_(i, n_ + i) = 1.0;  // slack
      rhs_(i) = p.b_ub(i);
    }
    for (Eigen::Index i = 0; i < p.b_eq.size(); ++i) {
      t_.row(m_ub_ + i).head(n_) = p.a_eq.row(i);
      rhs_(m_ub_ + i) = p.b_eq(i);
    }
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (rhs_(i) < 0.0) {
        t_.row(i) = -t_.row(i);
        rhs_(i) = -rhs_(i);
      }
      t_(i, n_ + m_ub_ + i) = 1.0;  // artificial, initial basis
      basis_[i] = static_cast<int>(n_ + m_ub_ + i);
    }
  }

  // Returns false when the given objective is unbounded below.
  bool minimize(const Eigen::VectorXd& cost, bool allow_artificial) {
    Eigen::VectorXd reduced = cost;
    objective_ = 0.0;
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (basis_[i] < 0) continue;
      const double cb = cost(basis_[i]);
      if (cb != 0.0) {
        reduced -= cb * t_.row(i).transpose();
        objective_ += cb * rhs_(i);
      }
    }
    const Eigen::Index limit = allow_artificial ? cols_ : n_ + m_ub_;
    for (long iter = 0; iter < 50000; ++iter) {
      Eigen::Index entering = -1;
      for (Eigen::Index j = 0; j < limit; ++j)
        if (reduced(j) < -kEps) { entering = j; break; }  // Bland: smallest index
      if (entering < 0) return true;
      Eigen::Index leaving = -1;
      double best_ratio = 0.0;
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (basis_[i] < 0 || t_(i, entering) <= kEps) continue;
        const double ratio = rhs_(i) / t_(i, entering);
        if (leaving < 0 || ratio < best_ratio - kEps ||
            (ratio < best_ratio + kEps && basis_[i] < basis_[leaving])) {
          leaving = i;
          best_ratio = ratio;
        }
      }
      if (leaving < 0) return false;
      pivot(leaving, entering, reduced);
    }
    throw NumericalError("simplex iteration budget exceeded");
  }

  // Pivots rows whose basic variable is still artificial onto a structural
  // column; rows that cannot pivot are redundant and get deactivated.
  void drive_out_artificials() {
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (basis_[i] < static_cast<int>(n_ + m_ub_)) continue;
      Eigen::Index entering = -1;
      for (Eigen::Index j = 0; j < n_ + m_ub_; ++j)
        if (std::abs(t_(i, j)) > kEps) { entering = j; break; }
      if (entering >= 0) {
        Eigen::VectorXd dummy = Eigen::VectorXd::Zero(cols_);
        pivot(i, entering, dummy);
      } else {
        t_.row(i).setZero();
        rhs_(i) = 0.0;
        basis_[i] = -1;
      }
    }
  }

  double objective() const { return objective_; }

  Eigen::VectorXd solution() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
    for (Eigen::Index i = 0; i < m_; ++i)
      if (basis_[i] >= 0 && basis_[i] < n_) x(basis_[i]) = std::max(rhs_(i), 0.0);
    return x;
  }

 private:
  static constexpr double kEps = 1e-11;

  void pivot(Eigen::Index row, Eigen::Index col, Eigen::VectorXd& reduced) {
    const double pv = t_(row, col);
    t_.row(row) /= pv;
    rhs_(row) /= pv;
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) {
        t_.row(i) -= f * t_.row(row);
        rhs_(i) -= f * rhs_(row);
        if (rhs_(i) < 0.0 && rhs_(i) > -kEps) rhs_(i) = 0.0;
      }
    }
    const double fr = reduced(col);
    if (fr != 0.0) {
      reduced -= fr * t_.row(row).transpose();
      objective_ += fr * rhs_(row);
    }
    basis_[row] = static_cast<int>(col);
  }

  Eigen::Index n_, m_ub_, m_, cols_;
  Eigen::MatrixXd t_;
  Eigen::VectorXd rhs_;
  std::vector<int> basis_;
  double objective_ = 0.0;
};

}  // namespace detail

inline LpSolution solve_lp(const LpProblem& p) {
  const Eigen::Index n = p.c.size();
  const Eigen::Index m_ub = p.b_ub.size();
  const Eigen::Index m = m_ub + p.b_eq.size();
  detail::SimplexTableau tableau(p);

  Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(n + m_ub + m);
  phase1_cost.tail(m).setOnes();
  tableau.minimize(phase1_cost, true);
  LpSolution sol;
  if (tableau.objective() > 1e-8) return sol;  // infeasible
  tableau.drive_out_artificials();

  Eigen::VectorXd phase2_cost = Eigen::VectorXd::Zero(n + m_ub + m);
  phase2_cost.head(n) = p.c;
  if (!tableau.minimize(phase2_cost, false))
    throw NumericalError("linear program is unbounded");
  sol.feasible = true;
  sol.objective = tableau.objective();
  sol.x = tableau.solution();
  return sol;
}

}  // namespace wiresecret
