#include "subpois/linalg.hpp"

#include <algorithm>

namespace subpois::linalg {

double pfaffian(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw DomainError("pfaffian: matrix must be square");
  const Eigen::Index n = m.rows();
  const double scale = std::max(1.0, n > 0 ? m.cwiseAbs().maxCoeff() : 0.0);
  if (n > 0 && (m + m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DomainError("pfaffian: matrix is not skew-symmetric");
  if (n % 2 == 1) return 0.0;
  Eigen::MatrixXd a = m;
  double pf = 1.0;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index offset;
    a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&offset);
    const Eigen::Index kp = k + 1 + offset;
    if (kp != k + 1) {
      a.row(k + 1).swap(a.row(kp));
      a.col(k + 1).swap(a.col(kp));
      pf = -pf;
    }
    if (a(k + 1, k) == 0.0) return 0.0;
    pf *= a(k, k + 1);
    if (k + 2 < n) {
      const Eigen::Index r = n - k - 2;
      const Eigen::VectorXd tau = a.row(k).tail(r).transpose() / a(k, k + 1);
      const Eigen::VectorXd col = a.col(k + 1).tail(r);
      a.bottomRightCorner(r, r) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

double determinant(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw DomainError("determinant: matrix must be square");
  if (m.rows() == 0) return 1.0;
  return m.partialPivLu().determinant();
}

}  // namespace subpois::linalg
