#pragma once

#include <Eigen/Dense>
#include <vector>

namespace aqft {

/// Point of a finite-dimensional affine space, stored in a fixed global
/// chart. Differences of points are vectors; adding a vector moves the
/// point. Chart independence of the operations built on top is a tested
/// property, not a representation choice.
class AffinePoint {
 public:
  explicit AffinePoint(Eigen::VectorXd coords) : coords_(std::move(coords)) {}

  int dim() const { return static_cast<int>(coords_.size()); }
  const Eigen::VectorXd& coords() const { return coords_; }

  AffinePoint translated(const Eigen::VectorXd& v) const;
  Eigen::VectorXd operator-(const AffinePoint& other) const;

 private:
  Eigen::VectorXd coords_;
};

/// Affine map f(a) = linear * a + offset between chart coordinates.
/// The linear part is unique and recoverable as f(a + v) - f(a).
class AffineMap {
 public:
  AffineMap(Eigen::MatrixXd linear, Eigen::VectorXd offset);

  static AffineMap identity(int dim);

  int dim_in() const { return static_cast<int>(linear_.cols()); }
  int dim_out() const { return static_cast<int>(linear_.rows()); }
  const Eigen::MatrixXd& linear() const { return linear_; }
  const Eigen::VectorXd& offset() const { return offset_; }

  bool invertible() const;
  AffineMap inverse() const;

 private:
  Eigen::MatrixXd linear_;
  Eigen::VectorXd offset_;
};

/// Element of the vector dual A^dagger: an affine functional
/// phi(a) = c + w . a in chart coordinates. The constant functional is
/// (c = 1, w = 0).
class DualElement {
 public:
  DualElement(double c, Eigen::VectorXd w) : c_(c), w_(std::move(w)) {}

  static DualElement one(int dim);

  int dim() const { return static_cast<int>(w_.size()); }
  double constant() const { return c_; }
  const Eigen::VectorXd& covector() const { return w_; }

  double operator()(const AffinePoint& a) const;

  DualElement operator+(const DualElement& other) const;
  DualElement operator*(double s) const;

 private:
  double c_;
  Eigen::VectorXd w_;
};

AffinePoint affine_apply(const AffineMap& f, const AffinePoint& a);

AffineMap compose(const AffineMap& g, const AffineMap& f);

/// The induced linear map on the vector dual, phi -> phi o f^{-1}.
/// Requires an invertible linear part.
DualElement dual_map(const AffineMap& f, const DualElement& phi);

/// Basis of A^dagger for a d-dimensional space: the constant functional
/// followed by the d coordinate covectors. Size is always d + 1.
std::vector<DualElement> vector_dual_basis(int dim);

}  // namespace aqft
