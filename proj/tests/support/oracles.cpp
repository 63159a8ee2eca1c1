#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>

namespace oracle {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Eigen::MatrixXd to_eigen(const Mat& m) {
  Eigen::MatrixXd a(m.size(), m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) a(i, j) = static_cast<double>(m[i][j]);
  return a;
}

std::complex<double> mask(const std::vector<Vec>& b, const Eigen::VectorXd& x) {
  std::complex<double> s = 0;
  for (const auto& d : b) {
    double ph = 0;
    for (std::size_t i = 0; i < d.size(); ++i) ph += static_cast<double>(d[i]) * x[i];
    s += std::polar(1.0, kTwoPi * ph);
  }
  return s / static_cast<double>(b.size());
}

// Exact (R^T)^{-1} applied to a rational vector, by Cramer/adjugate.
QVec apply_inverse_transpose(const Mat& r, const QVec& x) {
  std::size_t d = r.size();
  Mat rt(d, Vec(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) rt[i][j] = r[j][i];
  Mat adj = adjugate(rt);
  mpq_class dt(det(rt));
  QVec y(d);
  for (std::size_t i = 0; i < d; ++i) {
    mpq_class s = 0;
    for (std::size_t j = 0; j < d; ++j) s += mpq_class(adj[i][j]) * x[j];
    y[i] = s / dt;
  }
  return y;
}

bool unit_modulus(const std::vector<Vec>& b, const QVec& x) {
  for (const auto& d : b) {
    mpq_class s = 0;
    for (std::size_t i = 0; i < d.size(); ++i) s += mpq_class(d[i]) * x[i];
    s.canonicalize();
    if (s.get_den() != 1) return false;
  }
  return true;
}

// Solves (I - A) x = c exactly by Gaussian elimination.
QVec solve(std::vector<QVec> a, QVec c) {
  std::size_t d = c.size();
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    while (piv < d && a[piv][col] == 0) ++piv;
    if (piv == d) throw std::runtime_error("singular");
    std::swap(a[piv], a[col]);
    std::swap(c[piv], c[col]);
    for (std::size_t r = 0; r < d; ++r) {
      if (r == col || a[r][col] == 0) continue;
      mpq_class f = a[r][col] / a[col][col];
      for (std::size_t k = 0; k < d; ++k) a[r][k] -= f * a[col][k];
      c[r] -= f * c[col];
    }
  }
  for (std::size_t i = 0; i < d; ++i) c[i] /= a[i][i];
  return c;
}

}  // namespace

double hadamard_defect(const Mat& r, const std::vector<Vec>& b, const std::vector<Vec>& l) {
  Eigen::MatrixXd inv = to_eigen(r).inverse();
  std::size_t n = b.size(), d = r.size();
  Eigen::MatrixXcd h(l.size(), n);
  for (std::size_t i = 0; i < l.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Eigen::VectorXd bj(d);
      for (std::size_t k = 0; k < d; ++k) bj[k] = static_cast<double>(b[j][k]);
      Eigen::VectorXd x = inv * bj;
      double ph = 0;
      for (std::size_t k = 0; k < d; ++k) ph += x[k] * static_cast<double>(l[i][k]);
      h(i, j) = std::polar(1.0 / std::sqrt(static_cast<double>(n)), kTwoPi * ph);
    }
  Eigen::MatrixXcd g = h.adjoint() * h - Eigen::MatrixXcd::Identity(n, n);
  return g.cwiseAbs().maxCoeff();
}

std::complex<double> mu_hat(const Mat& r, const std::vector<Vec>& b, const std::vector<double>& xi,
                            int terms) {
  Eigen::MatrixXd a = to_eigen(r).transpose().inverse();
  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(xi.data(), xi.size());
  std::complex<double> p = 1.0;
  for (int j = 0; j < terms; ++j) {
    y = a * y;
    p *= mask(b, y);
  }
  return p;
}

double qmf_residual(const Mat& r, const std::vector<Vec>& b, const std::vector<Vec>& l,
                    const std::vector<double>& x) {
  Eigen::MatrixXd a = to_eigen(r).transpose().inverse();
  double s = 0;
  for (const auto& v : l) {
    Eigen::VectorXd y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + static_cast<double>(v[i]);
    s += std::norm(mask(b, a * y));
  }
  return std::abs(s - 1.0);
}

std::int64_t det(const Mat& m) {
  std::size_t d = m.size();
  if (d == 1) return m[0][0];
  std::int64_t s = 0;
  for (std::size_t j = 0; j < d; ++j) {
    Mat minor;
    for (std::size_t i = 1; i < d; ++i) {
      Vec row;
      for (std::size_t k = 0; k < d; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(row);
    }
    s += (j % 2 ? -1 : 1) * m[0][j] * det(minor);
  }
  return s;
}

Mat adjugate(const Mat& m) {
  std::size_t d = m.size();
  if (d == 1) return {{1}};
  Mat adj(d, Vec(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Mat minor;
      for (std::size_t a = 0; a < d; ++a) {
        if (a == i) continue;
        Vec row;
        for (std::size_t c = 0; c < d; ++c)
          if (c != j) row.push_back(m[a][c]);
        minor.push_back(row);
      }
      adj[j][i] = ((i + j) % 2 ? -1 : 1) * det(minor);
    }
  return adj;
}

bool congruent(const Mat& r, const Vec& a, const Vec& b) {
  Mat adj = adjugate(r);
  std::int64_t dt = det(r);
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::int64_t s = 0;
    for (std::size_t j = 0; j < r.size(); ++j) s += adj[i][j] * (a[j] - b[j]);
    if (s % dt != 0) return false;
  }
  return true;
}

std::set<std::set<QVec>> extreme_cycles(const Mat& r, const std::vector<Vec>& b,
                                        const std::vector<Vec>& l, int max_period) {
  std::size_t d = r.size();
  std::set<std::set<QVec>> out;
  for (int m = 1; m <= max_period; ++m) {
    std::size_t words = 1;
    for (int i = 0; i < m; ++i) words *= l.size();
    for (std::size_t w = 0; w < words; ++w) {
      std::vector<std::size_t> word(m);
      std::size_t x = w;
      for (int i = 0; i < m; ++i) {
        word[i] = x % l.size();
        x /= l.size();
      }
      // composite map x -> A x + c, applying word[0] first
      std::vector<QVec> a(d, QVec(d, mpq_class(0)));
      for (std::size_t i = 0; i < d; ++i) a[i][i] = 1;
      QVec c(d, mpq_class(0));
      for (std::size_t k : word) {
        QVec shifted(d);
        for (std::size_t i = 0; i < d; ++i) shifted[i] = c[i] + mpq_class(l[k][i]);
        c = apply_inverse_transpose(r, shifted);
        std::vector<QVec> na(d, QVec(d));
        for (std::size_t col = 0; col < d; ++col) {
          QVec column(d);
          for (std::size_t i = 0; i < d; ++i) column[i] = a[i][col];
          QVec image = apply_inverse_transpose(r, column);
          for (std::size_t i = 0; i < d; ++i) na[i][col] = image[i];
        }
        a = na;
      }
      std::vector<QVec> ia(d, QVec(d));
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) ia[i][j] = (i == j ? 1 : 0) - a[i][j];
      QVec fixed = solve(ia, c);
      std::set<QVec> orbit;
      QVec p = fixed;
      bool ok = true;
      for (std::size_t k : word) {
        orbit.insert(p);
        if (!unit_modulus(b, p)) ok = false;
        QVec shifted(d);
        for (std::size_t i = 0; i < d; ++i) shifted[i] = p[i] + mpq_class(l[k][i]);
        p = apply_inverse_transpose(r, shifted);
      }
      if (p != fixed) ok = false;
      if (ok) out.insert(orbit);
    }
  }
  return out;
}

std::pair<double, double> frame_bounds_svd(const Eigen::MatrixXcd& f) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(f);
  const auto& s = svd.singularValues();
  double mn = s.minCoeff(), mx = s.maxCoeff();
  if (f.rows() < f.cols()) mn = 0.0;
  return {mn * mn, mx * mx};
}

double best_selection(const std::vector<std::vector<double>>& scaled_digits,
                      const std::vector<Vec>& universe) {
  std::size_t n = scaled_digits.size(), u = universe.size();
  std::vector<bool> pick(u, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(n), true);
  double best = -1.0;
  do {
    Eigen::MatrixXcd f(n, n);
    std::size_t row = 0;
    for (std::size_t i = 0; i < u; ++i) {
      if (!pick[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        double ph = 0;
        for (std::size_t k = 0; k < universe[i].size(); ++k)
          ph += scaled_digits[j][k] * static_cast<double>(universe[i][k]);
        f(row, j) = std::polar(1.0 / std::sqrt(static_cast<double>(n)), kTwoPi * ph);
      }
      ++row;
    }
    best = std::max(best, frame_bounds_svd(f).first);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

}  // namespace oracle
