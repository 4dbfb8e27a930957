#include "dio/interval.hpp"

#include <sstream>

namespace dio {

IntervalVector::IntervalVector(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) {
    throw InvalidInputError("IntervalVector: lower and upper differ in length");
  }
  if (!all_finite(lower_) || !all_finite(upper_)) {
    throw InvalidInputError("IntervalVector: non-finite bound");
  }
  for (Index i = 0; i < lower_.size(); ++i) {
    if (lower_(i) > upper_(i)) {
      std::ostringstream msg;
      msg << "IntervalVector: lower > upper at coordinate " << i << " (" << lower_(i) << " > "
          << upper_(i) << ")";
      throw InvalidInputError(msg.str());
    }
  }
}

bool IntervalVector::contains(const Vector& x) const {
  if (x.size() != size()) {
    throw InvalidInputError("contains: vector length mismatch");
  }
  return (lower_.array() <= x.array()).all() && (x.array() <= upper_.array()).all();
}

SignSplitMatrix sign_split(const Matrix& m) {
  if (!all_finite(m)) {
    throw InvalidInputError("sign_split: non-finite entry");
  }
  SignSplitMatrix s;
  s.plus = m.cwiseMax(0.0);
  s.minus = s.plus - m;
  return s;
}

IntervalVector interval_image(const SignSplitMatrix& a, const IntervalVector& iv) {
  if (a.plus.cols() != iv.size()) {
    throw InvalidInputError("interval_image: shape mismatch");
  }
  return {a.plus * iv.lower() - a.minus * iv.upper(),
          a.plus * iv.upper() - a.minus * iv.lower()};
}

IntervalVector interval_image(const Matrix& a, const IntervalVector& iv) {
  return interval_image(sign_split(a), iv);
}

IntervalVector intersect(const IntervalVector& a, const IntervalVector& b) {
  if (a.size() != b.size()) {
    throw InvalidInputError("intersect: length mismatch");
  }
  Vector lo = a.lower().cwiseMax(b.lower());
  Vector hi = a.upper().cwiseMin(b.upper());
  for (Index i = 0; i < lo.size(); ++i) {
    if (lo(i) > hi(i)) {
      std::ostringstream msg;
      msg << "intersect: empty intersection at coordinate " << i;
      throw EmptyIntersectionError(msg.str());
    }
  }
  return {std::move(lo), std::move(hi)};
}

}  // namespace dio
