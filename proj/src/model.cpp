#include "dio/model.hpp"

#include <string>

namespace dio {

void PlantModel::validate() const {
  const Index n = A.rows();
  if (A.cols() != n || n == 0) {
    throw InvalidInputError("PlantModel: A must be square and nonempty");
  }
  if (B.rows() != n) {
    throw InvalidInputError("PlantModel: B row count must match state dimension");
  }
  if (!all_finite(A) || !all_finite(B)) {
    throw InvalidInputError("PlantModel: non-finite system matrix");
  }
  if (w_bounds.size() != B.cols()) {
    throw InvalidInputError("PlantModel: w bounds length must match B columns");
  }
  if (x0_bounds.size() != n) {
    throw InvalidInputError("PlantModel: x0 bounds length must match state dimension");
  }
  if (C.empty() || C.size() != D.size() || C.size() != v_bounds.size()) {
    throw InvalidInputError("PlantModel: need matching C, D, v bounds per agent");
  }
  for (size_t i = 0; i < C.size(); ++i) {
    const std::string tag = "PlantModel agent " + std::to_string(i);
    if (C[i].cols() != n) {
      throw InvalidInputError(tag + ": C column count must match state dimension");
    }
    if (D[i].rows() != C[i].rows()) {
      throw InvalidInputError(tag + ": D row count must match C row count");
    }
    if (v_bounds[i].size() != D[i].cols()) {
      throw InvalidInputError(tag + ": v bounds length must match D columns");
    }
    if (!all_finite(C[i]) || !all_finite(D[i])) {
      throw InvalidInputError(tag + ": non-finite matrix entry");
    }
  }
}

}  // namespace dio
