#pragma once

#include <grasspca/grassmann.hpp>

namespace grasspca::testing {

inline Rng make_rng(std::uint64_t salt) {
  return Rng(derive_seed(0x5eed'ba5e, salt, 0, 0, StreamRole::kTruth));
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

inline double orthonormality_error(const Matrix& rows) {
  return (rows * rows.transpose() -
          Matrix::Identity(rows.rows(), rows.rows()))
      .norm();
}

}  // namespace grasspca::testing
