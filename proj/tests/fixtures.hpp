#pragma once

// The two bundled systems, constructed directly so tests do not depend on
// the scenario parser.

#include <vector>

#include "dio/graph.hpp"
#include "dio/model.hpp"
#include "dio/types.hpp"

namespace dio::testing {

struct Example1 {
  Matrix A{4, 4};
  Matrix B{Matrix::Identity(4, 4)};
  std::vector<Matrix> C;
  // gains as printed alongside the system definition
  std::vector<Matrix> L_printed;
  std::vector<Matrix> Gamma_printed;

  Example1() {
    A << 1, 0, 1, 0,
         0, 1, 0, 1,
         0, 0, 1, 0,
         0, 0, 0, 1;
    C.resize(3);
    C[0] = Matrix(1, 4);
    C[0] << 1, 0, 0, 0;
    C[1] = Matrix(1, 4);
    C[1] << 0, 1, 0, 0;
    C[2] = Matrix(1, 4);
    C[2] << 1, 1, 0, 0;

    auto col = [](std::initializer_list<double> values) {
      Matrix m(4, 1);
      Index i = 0;
      for (double v : values) m(i++, 0) = v;
      return m;
    };
    L_printed = {col({0, 0, -1, 0}), col({0, 0, 0, -1}), col({0, 0, -0.5, -0.5})};
    Gamma_printed = {col({1, 0, 1, 0}), col({0, 1, 0, 1}), col({0.5, 0.5, 0.5, 0.5})};
  }

  Digraph graph() const { return Digraph::complete(3); }
};

struct Example2 {
  Matrix A;
  Matrix B;
  std::vector<Matrix> C;

  Example2() {
    Matrix block_a(2, 2), block_b(2, 2);
    block_a << 1, 0.01, 0, 1;
    block_b << 0.01, 0.0001, 0, 0.01;
    A = Matrix::Zero(12, 12);
    B = Matrix::Zero(12, 12);
    for (int i = 0; i < 6; ++i) {
      A.block(2 * i, 2 * i, 2, 2) = block_a;
      B.block(2 * i, 2 * i, 2, 2) = block_b;
    }
    C.resize(6);
    for (int i = 0; i < 6; ++i) {
      C[i] = Matrix::Zero(1, 12);
      C[i](0, 2 * i) = 1.0;
    }
  }

  Digraph graph() const { return Digraph::directed_ring(6); }
};

}  // namespace dio::testing
