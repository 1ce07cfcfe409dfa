#pragma once

#include <string_view>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace mbsp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Cholesky factorization of a nominally SPD matrix. On failure the diagonal
// is inflated once by 1e-10 * mean(diag) and the factorization retried; a
// second failure throws NumericError mentioning `what`.
Eigen::LLT<Matrix> cholesky_spd(const Matrix& a, std::string_view what);

// Lower Cholesky factor, same jitter policy.
Matrix cholesky_lower(const Matrix& a, std::string_view what);

// (a + a^T) / 2 in place.
void symmetrize(Matrix& a);

bool is_symmetric(const Matrix& a, double rel_tol = 1e-12);

// True when an unjittered LLT succeeds and every pivot is positive.
bool is_spd(const Matrix& a);

}  // namespace mbsp
