#pragma once

#include "dio/types.hpp"

namespace dio {

/// A multi-dimensional interval [lower, upper], lower <= upper element-wise.
/// Immutable after construction.
class IntervalVector {
 public:
  IntervalVector(Vector lower, Vector upper);

  /// Degenerate interval [x, x].
  static IntervalVector point(const Vector& x) { return {x, x}; }

  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  Index size() const { return lower_.size(); }
  Vector width() const { return upper_ - lower_; }

  /// True iff lower <= x <= upper element-wise (closed interval, exact
  /// comparisons).
  bool contains(const Vector& x) const;

 private:
  Vector lower_;
  Vector upper_;
};

/// M = plus - minus with plus, minus >= 0 and disjoint supports.
struct SignSplitMatrix {
  Matrix plus;
  Matrix minus;

  Matrix abs() const { return plus + minus; }
  Matrix reconstruct() const { return plus - minus; }
};

/// Element-wise positive/negative part decomposition of M.
SignSplitMatrix sign_split(const Matrix& m);

/// Tight interval enclosure of {A x : x in iv}:
/// [A+ lower - A- upper, A+ upper - A- lower].
IntervalVector interval_image(const Matrix& a, const IntervalVector& iv);
IntervalVector interval_image(const SignSplitMatrix& a, const IntervalVector& iv);

/// Element-wise max of lowers / min of uppers. Throws EmptyIntersectionError
/// when the result would be empty in some coordinate.
IntervalVector intersect(const IntervalVector& a, const IntervalVector& b);

}  // namespace dio
