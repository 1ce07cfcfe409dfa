#pragma once

#include <vector>

#include "mbsp/linalg.hpp"

namespace mbsp {

// Design X (n x p) and responses Y (n x q) for Y = XB + E.
class Dataset {
 public:
  Dataset() = default;

  // Validates shapes (n >= 2, p >= 1, q >= 1, equal row counts, finite
  // entries). Throws InputError.
  Dataset(Matrix x, Matrix y);

  const Matrix& x() const noexcept { return x_; }
  const Matrix& y() const noexcept { return y_; }
  Eigen::Index n() const noexcept { return x_.rows(); }
  Eigen::Index p() const noexcept { return x_.cols(); }
  Eigen::Index q() const noexcept { return y_.cols(); }

  bool x_centered() const noexcept { return x_centered_; }
  bool y_centered() const noexcept { return y_centered_; }

  // Column means removed before centering (zero when never centered).
  const Vector& x_means() const noexcept { return x_means_; }
  const Vector& y_means() const noexcept { return y_means_; }

  // Returns a copy with every column of X and Y mean-centered.
  Dataset centered() const;

  // Rows selected by `rows`, in order. Centering flags are dropped since a
  // subset of a centered matrix is generally not centered.
  Dataset subset(const std::vector<Eigen::Index>& rows) const;

  // Marks the dataset as centered after verifying column means vanish to
  // 1e-8 relative to the column scale. Throws InputError otherwise.
  void assert_centered();

 private:
  Matrix x_;
  Matrix y_;
  Vector x_means_;
  Vector y_means_;
  bool x_centered_ = false;
  bool y_centered_ = false;
};

}  // namespace mbsp
