#include "minsurf/poly.hpp"

#include <Eigen/Eigenvalues>

namespace minsurf {

UPoly trim_leading(const UPoly& c, double rel_tol) {
  if (c.size() == 0) return UPoly::Zero(1);
  const double scale = c.cwiseAbs().maxCoeff();
  Eigen::Index n = c.size();
  while (n > 1 && std::abs(c(n - 1)) <= rel_tol * scale) --n;
  return c.head(n);
}

cplx horner(const UPoly& c, cplx x) {
  cplx acc = 0.0;
  for (Eigen::Index i = c.size() - 1; i >= 0; --i) acc = acc * x + c(i);
  return acc;
}

cplx taylor_coefficient(const UPoly& c, cplx x, int k) {
  // sum_i c_i binom(i,k) x^{i-k}
  cplx acc = 0.0;
  for (Eigen::Index i = c.size() - 1; i >= k; --i) {
    double binom = 1.0;
    for (int t = 0; t < k; ++t) binom = binom * double(i - t) / double(t + 1);
    acc = acc * x + c(i) * binom;
  }
  return acc;
}

std::vector<cplx> roots(const UPoly& coeffs) {
  UPoly c = trim_leading(coeffs, 0.0);
  const Eigen::Index n = c.size() - 1;
  std::vector<cplx> out;
  if (n < 1) return out;
  if (n == 1) {
    out.push_back(-c(0) / c(1));
    return out;
  }
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) comp(i, n - 1) = -c(i) / c(n);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  for (Eigen::Index i = 0; i < n; ++i) {
    cplx x = es.eigenvalues()(i);
    // A few Newton steps; reverted if they do not reduce the residual.
    for (int it = 0; it < 3; ++it) {
      const cplx f = horner(c, x);
      const cplx df = taylor_coefficient(c, x, 1);
      if (std::abs(df) == 0.0) break;
      const cplx xn = x - f / df;
      if (std::abs(horner(c, xn)) < std::abs(f)) x = xn; else break;
    }
    out.push_back(x);
  }
  return out;
}

int root_multiplicity(const UPoly& c, cplx x, double rel_tol) {
  const double scale = c.cwiseAbs().maxCoeff() * std::pow(1.0 + std::abs(x), double(c.size()));
  for (int k = 0; k < c.size(); ++k)
    if (std::abs(taylor_coefficient(c, x, k)) > rel_tol * scale) return k;
  return static_cast<int>(c.size()) - 1;
}

UPoly deflate(const UPoly& c, cplx x, int m) {
  UPoly q = c;
  for (int t = 0; t < m && q.size() > 1; ++t) {
    const Eigen::Index n = q.size() - 1;
    UPoly r(n);
    cplx carry = q(n);
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      r(i) = carry;
      carry = q(i) + carry * x;
    }
    q = r;
  }
  return q;
}

UPoly interpolate_on_circle(const std::vector<cplx>& values, double radius) {
  const auto n = static_cast<Eigen::Index>(values.size());
  UPoly c(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    cplx acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      acc += values[j] * std::polar(1.0, -2.0 * kPi * double(j * k % n) / double(n));
    c(k) = acc / (double(n) * std::pow(radius, double(k)));
  }
  return c;
}

std::vector<RootCluster> cluster_roots(const std::vector<cplx>& r, double rel_tol) {
  std::vector<bool> used(r.size(), false);
  std::vector<RootCluster> out;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (used[i]) continue;
    cplx sum = r[i];
    int m = 1;
    used[i] = true;
    for (std::size_t j = i + 1; j < r.size(); ++j) {
      if (used[j]) continue;
      if (std::abs(r[j] - r[i]) <= rel_tol * (1.0 + std::abs(r[i]))) {
        used[j] = true;
        sum += r[j];
        ++m;
      }
    }
    out.push_back({sum / double(m), m});
  }
  return out;
}

cplx resultant(const UPoly& f, const UPoly& g) {
  const Eigen::Index m = f.size() - 1, n = g.size() - 1;
  const Eigen::Index size = m + n;
  if (size == 0) return 1.0;
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(size, size);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index k = 0; k <= m; ++k) s(r, r + k) = f(m - k);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index k = 0; k <= n; ++k) s(n + r, r + k) = g(n - k);
  return s.partialPivLu().determinant();
}

cplx polish_root(const UPoly& c, cplx x, int multiplicity) {
  const int m = std::max(multiplicity, 1);
  for (int it = 0; it < 20; ++it) {
    const cplx d = taylor_coefficient(c, x, m);
    if (d == cplx(0.0)) break;
    const cplx step = taylor_coefficient(c, x, m - 1) / (double(m) * d);
    const cplx next = x - step;
    if (std::abs(taylor_coefficient(c, next, m - 1)) > std::abs(taylor_coefficient(c, x, m - 1))) break;
    x = next;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(x))) break;
  }
  return x;
}

}  // namespace minsurf
