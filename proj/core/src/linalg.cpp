#include "mbsp/linalg.hpp"

#include <string>

#include "mbsp/error.hpp"

namespace mbsp {

Eigen::LLT<Matrix> cholesky_spd(const Matrix& a, std::string_view what) {
  if (!a.allFinite())
    throw NumericError("non-finite entries in " + std::string(what));
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() == Eigen::Success) return llt;

  const double mean_diag = a.rows() > 0 ? a.diagonal().mean() : 0.0;
  const double jitter = 1e-10 * (mean_diag > 0.0 ? mean_diag : 1.0);
  Matrix inflated = a;
  inflated.diagonal().array() += jitter;
  llt.compute(inflated);
  if (llt.info() != Eigen::Success)
    throw NumericError("Cholesky factorization failed for " + std::string(what) +
                       " (matrix not positive definite after jitter)");
  return llt;
}

Matrix cholesky_lower(const Matrix& a, std::string_view what) {
  return cholesky_spd(a, what).matrixL();
}

void symmetrize(Matrix& a) {
  const Matrix t = a.transpose();
  a = 0.5 * (a + t);
}

bool is_symmetric(const Matrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

bool is_spd(const Matrix& a) {
  if (a.rows() != a.cols() || !is_symmetric(a, 1e-10)) return false;
  Eigen::LLT<Matrix> llt(a);
  return llt.info() == Eigen::Success && (llt.matrixLLT().diagonal().array() > 0.0).all();
}

}  // namespace mbsp
