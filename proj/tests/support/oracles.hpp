#pragma once

// Brute-force reference computations. They share no code with the library
// beyond the plain vector typedefs and use doubles or naive enumeration.

#include <complex>
#include <cstdint>
#include <set>
#include <vector>

#include <Eigen/Dense>
#include <gmpxx.h>

namespace oracle {

using Vec = std::vector<std::int64_t>;
using Mat = std::vector<std::vector<std::int64_t>>;
using QVec = std::vector<mpq_class>;

/// max |H^* H - I| with H = (1/sqrt N)[exp(2 pi i <R^{-1} b, l>)], via Eigen inverse.
double hadamard_defect(const Mat& r, const std::vector<Vec>& b, const std::vector<Vec>& l);

/// Truncated infinite product with doubles, `terms` factors.
std::complex<double> mu_hat(const Mat& r, const std::vector<Vec>& b, const std::vector<double>& xi,
                            int terms = 200);

/// |m_B(x)|^2 summed over tau_l, minus 1; direct.
double qmf_residual(const Mat& r, const std::vector<Vec>& b, const std::vector<Vec>& l,
                    const std::vector<double>& x);

/// Integer adjugate and determinant (Laplace expansion, small d).
std::int64_t det(const Mat& m);
Mat adjugate(const Mat& m);

/// a == b mod R Z^d via adj(R)(a-b) == 0 mod det R.
bool congruent(const Mat& r, const Vec& a, const Vec& b);

/// Extreme cycles of tau_l(x) = (R^T)^{-1}(x + l) of period <= max_period,
/// found by solving the fixed point of every word and checking |m_B| = 1 on
/// the orbit. Each cycle is returned as its sorted point set.
std::set<std::set<QVec>> extreme_cycles(const Mat& r, const std::vector<Vec>& b,
                                        const std::vector<Vec>& l, int max_period);

/// Eigenvalues of F^* F via a singular value decomposition (not a Hermitian solver).
std::pair<double, double> frame_bounds_svd(const Eigen::MatrixXcd& f);

/// Best sigma_min^2 over all #target-subsets of rows of (1/sqrt N)[e^{2 pi i <s b, j>}].
double best_selection(const std::vector<std::vector<double>>& scaled_digits,
                      const std::vector<Vec>& universe);

}  // namespace oracle
