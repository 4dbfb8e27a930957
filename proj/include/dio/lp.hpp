#pragma once

#include "dio/types.hpp"

namespace dio {

/// min c'z  s.t.  G z <= h,  A_eq z = b_eq.  Variables are free (no sign
/// restriction). Either constraint block may be empty (0 rows).
struct LinearProgram {
  Vector objective;
  Matrix ineq_lhs;  // G
  Vector ineq_rhs;  // h
  Matrix eq_lhs;    // A_eq
  Vector eq_rhs;    // b_eq
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Vector z;           // valid when optimal
  double objective = 0.0;
};

/// Deterministic two-phase dense simplex with Bland's anti-cycling pivot
/// rule. Free variables are split, slacks added. Identical input yields
/// bit-identical output. Throws LpPivotError when the only available pivots
/// fall below 1e-12.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace dio
