#ifndef SUBPOIS_LINALG_HPP
#define SUBPOIS_LINALG_HPP

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "subpois/error.hpp"
#include "subpois/precision.hpp"

namespace subpois::linalg {

// Result of a symmetric eigensolve.  `vectors` is row-major n x n and its
// column j is the eigenvector of values[j].  Values are unsorted.
template <class Real>
struct SymmetricEigen {
  int n = 0;
  std::vector<Real> values;
  std::vector<Real> vectors;
  Real off_norm = 0;
  Real frobenius = 0;
  int sweeps = 0;
  bool converged = false;
};

// Cyclic Jacobi method on a symmetric matrix stored row-major.  Stops when
// the off-diagonal Frobenius norm drops below rel_tol * max(1, ||A||_F) or
// after max_sweeps sweeps.
template <class Real>
SymmetricEigen<Real> jacobi_eigen(std::vector<Real> a, int n, bool want_vectors,
                                  Real rel_tol = Real(1e-14), int max_sweeps = 50) {
  using std::abs;
  using std::sqrt;
  if (n < 0 || a.size() != static_cast<std::size_t>(n) * n)
    throw DomainError("jacobi_eigen: matrix size mismatch");
  SymmetricEigen<Real> out;
  out.n = n;
  std::vector<Real> v;
  if (want_vectors) {
    v.assign(static_cast<std::size_t>(n) * n, Real(0));
    for (int i = 0; i < n; ++i) v[i * n + i] = 1;
  }
  auto at = [&](int i, int j) -> Real& { return a[static_cast<std::size_t>(i) * n + j]; };
  Real fro2 = 0;
  for (const Real& x : a) fro2 += x * x;
  out.frobenius = sqrt(fro2);
  const Real target = rel_tol * (out.frobenius > 1 ? out.frobenius : Real(1));
  auto off = [&]() {
    Real s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += 2 * at(i, j) * at(i, j);
    return sqrt(s);
  };
  out.off_norm = off();
  while (out.off_norm >= target && out.sweeps < max_sweeps) {
    ++out.sweeps;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const Real apq = at(p, q);
        if (apq == 0) continue;
        const Real g = 100 * abs(apq);
        if (out.sweeps > 4 && abs(at(p, p)) + g == abs(at(p, p)) &&
            abs(at(q, q)) + g == abs(at(q, q))) {
          at(p, q) = 0;
          at(q, p) = 0;
          continue;
        }
        const Real theta = (at(q, q) - at(p, p)) / (2 * apq);
        Real t;
        if (abs(theta) > Real(1e100)) {
          t = 1 / (2 * theta);
        } else {
          t = 1 / (abs(theta) + sqrt(theta * theta + 1));
          if (theta < 0) t = -t;
        }
        const Real c = 1 / sqrt(t * t + 1);
        const Real s = t * c;
        const Real tau = s / (1 + c);
        at(p, p) -= t * apq;
        at(q, q) += t * apq;
        at(p, q) = 0;
        at(q, p) = 0;
        for (int r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const Real grp = at(r, p), hrq = at(r, q);
          const Real np = grp - s * (hrq + grp * tau);
          const Real nq = hrq + s * (grp - hrq * tau);
          at(r, p) = np;
          at(p, r) = np;
          at(r, q) = nq;
          at(q, r) = nq;
        }
        if (want_vectors) {
          for (int r = 0; r < n; ++r) {
            Real& vp = v[static_cast<std::size_t>(r) * n + p];
            Real& vq = v[static_cast<std::size_t>(r) * n + q];
            const Real gp = vp, hq = vq;
            vp = gp - s * (hq + gp * tau);
            vq = hq + s * (gp - hq * tau);
          }
        }
      }
    }
    out.off_norm = off();
  }
  out.converged = out.off_norm < target;
  out.values.resize(n);
  for (int i = 0; i < n; ++i) out.values[i] = at(i, i);
  out.vectors = std::move(v);
  return out;
}

// Pfaffian of a skew-symmetric matrix by Parlett-Reid tridiagonalization
// with partial pivoting.  Odd dimension gives 0.
double pfaffian(const Eigen::MatrixXd& m);

double determinant(const Eigen::MatrixXd& m);

}  // namespace subpois::linalg

#endif  // SUBPOIS_LINALG_HPP
