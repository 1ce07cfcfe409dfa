#include "mbsp/dataset.hpp"

#include <string>
#include <vector>

#include "mbsp/error.hpp"

namespace mbsp {
namespace {

bool columns_centered(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double scale = std::max(1.0, m.col(j).cwiseAbs().maxCoeff());
    if (std::abs(m.col(j).mean()) > 1e-8 * scale) return false;
  }
  return true;
}

}  // namespace

Dataset::Dataset(Matrix x, Matrix y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.rows() != y_.rows())
    throw InputError("X has " + std::to_string(x_.rows()) + " rows but Y has " +
                     std::to_string(y_.rows()));
  if (x_.rows() < 2) throw InputError("need at least 2 observations");
  if (x_.cols() < 1 || y_.cols() < 1) throw InputError("X and Y need at least one column");
  if (!x_.allFinite() || !y_.allFinite()) throw InputError("X and Y must be finite");
  x_means_ = Vector::Zero(x_.cols());
  y_means_ = Vector::Zero(y_.cols());
}

Dataset Dataset::centered() const {
  Dataset out = *this;
  out.x_means_ = x_.colwise().mean().transpose();
  out.y_means_ = y_.colwise().mean().transpose();
  out.x_.rowwise() -= out.x_means_.transpose();
  out.y_.rowwise() -= out.y_means_.transpose();
  out.x_centered_ = true;
  out.y_centered_ = true;
  return out;
}

Dataset Dataset::subset(const std::vector<Eigen::Index>& rows) const {
  Matrix xs(static_cast<Eigen::Index>(rows.size()), p());
  Matrix ys(static_cast<Eigen::Index>(rows.size()), q());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = rows[i];
    if (r < 0 || r >= n()) throw InputError("row index out of range");
    xs.row(static_cast<Eigen::Index>(i)) = x_.row(r);
    ys.row(static_cast<Eigen::Index>(i)) = y_.row(r);
  }
  return Dataset(std::move(xs), std::move(ys));
}

void Dataset::assert_centered() {
  if (!columns_centered(x_)) throw InputError("X columns are not centered");
  if (!columns_centered(y_)) throw InputError("Y columns are not centered");
  x_centered_ = true;
  y_centered_ = true;
}

}  // namespace mbsp
