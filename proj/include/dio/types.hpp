#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dio {

// Dense row-major storage throughout; problem sizes here (n <= 12, N <= 6)
// never justify sparsity.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Bad caller-supplied data (shapes, non-finite entries, out-of-range indices).
class InvalidInputError : public std::invalid_argument {
 public:
  explicit InvalidInputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Interval intersection came up empty. With correct framers this cannot
/// happen, so it signals a bug or inconsistent bounds rather than a state
/// to recover from.
class EmptyIntersectionError : public std::runtime_error {
 public:
  explicit EmptyIntersectionError(const std::string& what) : std::runtime_error(what) {}
};

class NotStronglyConnectedError : public std::runtime_error {
 public:
  explicit NotStronglyConnectedError(const std::string& what) : std::runtime_error(what) {}
};

/// Simplex pivot fell below the numerical threshold.
class LpPivotError : public std::runtime_error {
 public:
  explicit LpPivotError(const std::string& what) : std::runtime_error(what) {}
};

/// An internal consistency check failed (e.g. a framer update produced
/// lower > upper); indicates inconsistent gains or bounds upstream.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

inline bool all_finite(const Matrix& m) { return m.allFinite(); }
inline bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace dio
