#pragma once

#include "mpineq/measure_model.hpp"

namespace fixtures {

// 2x2 worked instance: delta = (5, 7), s = 3, c = 4.
inline mpineq::Instance d1() {
  return mpineq::build_discrete({1, 1}, {1, 1}, mpineq::DenseMatrix::from_rows({{3, 1}, {1, 3}}), {1, 2});
}

// Constant kernel and weights: delta = (2, 2), s = 2, c = 2.
inline mpineq::Instance t1() {
  return mpineq::build_discrete({1, 1}, {1, 1}, mpineq::DenseMatrix::from_rows({{1, 1}, {1, 1}}), {1, 1});
}

}  // namespace fixtures
