#include "dio/lp.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace dio {

namespace {

constexpr double kCostTol = 1e-9;
constexpr double kPivotTol = 1e-12;
constexpr double kFeasibilityTol = 1e-8;

// Tableau simplex over A x = b, x >= 0, b >= 0 maintained throughout.
struct Tableau {
  Matrix a;                 // m x n
  Vector b;                 // m
  Vector cost;              // n, current phase objective
  std::vector<int> basis;   // m, column index basic in each row

  Index rows() const { return a.rows(); }
  Index cols() const { return a.cols(); }

  void pivot(Index row, Index col) {
    double p = a(row, col);
    a.row(row) /= p;
    b(row) /= p;
    for (Index r = 0; r < rows(); ++r) {
      if (r == row) continue;
      double f = a(r, col);
      if (f != 0.0) {
        a.row(r) -= f * a.row(row);
        b(r) -= f * b(row);
        a(r, col) = 0.0;  // keep the unit column exact
      }
    }
    basis[row] = static_cast<int>(col);
  }

  Vector reduced_costs() const {
    Vector y = cost;
    for (Index r = 0; r < rows(); ++r) {
      double cb = cost(basis[r]);
      if (cb != 0.0) y -= cb * a.row(r).transpose();
    }
    return y;
  }

  // Bland: entering = lowest-index column with negative reduced cost;
  // leaving = min ratio, ties broken by lowest basic variable index.
  // `allowed` masks out columns that may not enter (artificials in phase 2).
  // Returns false at optimality.
  bool simplex_step(const std::vector<bool>& allowed) {
    Vector rc = reduced_costs();
    Index entering = -1;
    for (Index j = 0; j < cols(); ++j) {
      if (allowed[j] && rc(j) < -kCostTol) {
        entering = j;
        break;
      }
    }
    if (entering < 0) return false;

    Index leaving = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    double max_col_entry = 0.0;
    for (Index r = 0; r < rows(); ++r) {
      double arj = a(r, entering);
      if (arj > max_col_entry) max_col_entry = arj;
      if (arj > kPivotTol) {
        double ratio = b(r) / arj;
        if (ratio < best_ratio - kPivotTol ||
            (ratio <= best_ratio + kPivotTol && (leaving < 0 || basis[r] < basis[leaving]))) {
          if (ratio < best_ratio) best_ratio = ratio;
          leaving = r;
        }
      }
    }
    if (leaving < 0) {
      if (max_col_entry > 0.0) {
        throw LpPivotError("solve_lp: pivot candidates below threshold in column " +
                           std::to_string(entering));
      }
      throw UnboundedSignal{};
    }
    pivot(leaving, entering);
    return true;
  }

  struct UnboundedSignal {};
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  const Index nv = lp.objective.size();
  const Index mi = lp.ineq_lhs.rows();
  const Index me = lp.eq_lhs.rows();
  if (nv == 0) {
    throw InvalidInputError("solve_lp: empty objective");
  }
  if ((mi > 0 && lp.ineq_lhs.cols() != nv) || lp.ineq_rhs.size() != mi ||
      (me > 0 && lp.eq_lhs.cols() != nv) || lp.eq_rhs.size() != me) {
    throw InvalidInputError("solve_lp: inconsistent dimensions");
  }
  if (!all_finite(lp.objective) || (mi > 0 && !all_finite(lp.ineq_lhs)) ||
      (mi > 0 && !all_finite(lp.ineq_rhs)) || (me > 0 && !all_finite(lp.eq_lhs)) ||
      (me > 0 && !all_finite(lp.eq_rhs))) {
    throw InvalidInputError("solve_lp: non-finite data");
  }

  // Standard form: columns [z+ | z- | slack | artificial].
  const Index m = mi + me;
  const Index n_struct = 2 * nv + mi;
  const Index n_total = n_struct + m;

  Tableau t;
  t.a = Matrix::Zero(m, n_total);
  t.b = Vector::Zero(m);
  t.basis.resize(m);
  for (Index r = 0; r < mi; ++r) {
    t.a.row(r).segment(0, nv) = lp.ineq_lhs.row(r);
    t.a.row(r).segment(nv, nv) = -lp.ineq_lhs.row(r);
    t.a(r, 2 * nv + r) = 1.0;
    t.b(r) = lp.ineq_rhs(r);
  }
  for (Index r = 0; r < me; ++r) {
    t.a.row(mi + r).segment(0, nv) = lp.eq_lhs.row(r);
    t.a.row(mi + r).segment(nv, nv) = -lp.eq_lhs.row(r);
    t.b(mi + r) = lp.eq_rhs(r);
  }
  for (Index r = 0; r < m; ++r) {
    if (t.b(r) < 0.0) {
      t.a.row(r) = -t.a.row(r);
      t.b(r) = -t.b(r);
    }
    t.a(r, n_struct + r) = 1.0;
    t.basis[r] = static_cast<int>(n_struct + r);
  }

  std::vector<bool> allow_all(n_total, true);
  std::vector<bool> allow_structural(n_total, true);
  for (Index j = n_struct; j < n_total; ++j) allow_structural[j] = false;

  // Phase 1: minimize the artificial sum.
  t.cost = Vector::Zero(n_total);
  t.cost.segment(n_struct, m).setOnes();
  try {
    while (t.simplex_step(allow_all)) {
    }
  } catch (const Tableau::UnboundedSignal&) {
    throw LpPivotError("solve_lp: phase 1 unbounded (internal inconsistency)");
  }
  double infeasibility = 0.0;
  for (Index r = 0; r < m; ++r) {
    if (t.basis[r] >= n_struct) infeasibility += t.b(r);
  }
  if (infeasibility > kFeasibilityTol) {
    return {LpStatus::infeasible, Vector(), 0.0};
  }

  // Drive leftover artificials out of the basis; an all-zero structural row
  // is redundant and can stay pinned at zero.
  for (Index r = 0; r < m; ++r) {
    if (t.basis[r] < n_struct) continue;
    Index col = -1;
    for (Index j = 0; j < n_struct; ++j) {
      if (std::abs(t.a(r, j)) > kPivotTol) {
        col = j;
        break;
      }
    }
    if (col >= 0) t.pivot(r, col);
  }

  // Phase 2.
  t.cost = Vector::Zero(n_total);
  t.cost.segment(0, nv) = lp.objective;
  t.cost.segment(nv, nv) = -lp.objective;
  try {
    while (t.simplex_step(allow_structural)) {
    }
  } catch (const Tableau::UnboundedSignal&) {
    return {LpStatus::unbounded, Vector(), 0.0};
  }

  Vector x = Vector::Zero(n_total);
  for (Index r = 0; r < m; ++r) {
    x(t.basis[r]) = t.b(r);
  }
  LpSolution sol;
  sol.status = LpStatus::optimal;
  sol.z = x.segment(0, nv) - x.segment(nv, nv);
  sol.objective = lp.objective.dot(sol.z);

  // Basic solutions must satisfy the original constraints; failure here means
  // the pivoting lost feasibility.
  if (mi > 0) {
    double worst = (lp.ineq_lhs * sol.z - lp.ineq_rhs).maxCoeff();
    if (worst > kFeasibilityTol) {
      throw LpPivotError("solve_lp: optimal point violates inequality by " +
                         std::to_string(worst));
    }
  }
  if (me > 0) {
    double worst = (lp.eq_lhs * sol.z - lp.eq_rhs).cwiseAbs().maxCoeff();
    if (worst > kFeasibilityTol) {
      throw LpPivotError("solve_lp: optimal point violates equality by " + std::to_string(worst));
    }
  }
  return sol;
}

}  // namespace dio
