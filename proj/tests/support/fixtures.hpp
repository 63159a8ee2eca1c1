#pragma once

#include "fspec/triple.hpp"
#include "oracles.hpp"

namespace fixtures {

inline fspec::HadamardTriple lebesgue() {
  return {fspec::IntMatrix::scalar(2), fspec::DigitSet{0, 1}, fspec::DigitSet{0, 1}};
}

inline fspec::HadamardTriple jp() {
  return {fspec::IntMatrix::scalar(4), fspec::DigitSet{0, 2}, fspec::DigitSet{0, 1}};
}

// planar example whose zero set is nonempty
inline fspec::HadamardTriple quasi() {
  return {fspec::IntMatrix::from_rows({{4, 0}, {1, 2}}),
          fspec::DigitSet(2, {{0, 0}, {0, 3}, {1, 0}, {1, 3}}),
          fspec::DigitSet(2, {{0, 0}, {2, 0}, {0, 1}, {2, 1}})};
}

// planar example with four extreme cycles
inline fspec::HadamardTriple shear() {
  return {fspec::IntMatrix::from_rows({{2, 1}, {0, 2}}),
          fspec::DigitSet(2, {{0, 0}, {3, 0}, {0, 1}, {3, 1}}),
          fspec::DigitSet(2, {{0, 0}, {1, 0}, {0, 1}, {1, 1}})};
}

inline oracle::Mat mat(const fspec::IntMatrix& m) { return m.to_rows(); }
inline std::vector<oracle::Vec> vecs(const fspec::DigitSet& d) { return d.vectors(); }

}  // namespace fixtures
