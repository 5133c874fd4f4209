#include "aqft/affine.hpp"

#include <stdexcept>

namespace aqft {

AffinePoint AffinePoint::translated(const Eigen::VectorXd& v) const {
  if (v.size() != coords_.size()) {
    throw std::invalid_argument("AffinePoint: translation dimension mismatch");
  }
  return AffinePoint(coords_ + v);
}

Eigen::VectorXd AffinePoint::operator-(const AffinePoint& other) const {
  if (other.dim() != dim()) {
    throw std::invalid_argument("AffinePoint: difference dimension mismatch");
  }
  return coords_ - other.coords_;
}

AffineMap::AffineMap(Eigen::MatrixXd linear, Eigen::VectorXd offset)
    : linear_(std::move(linear)), offset_(std::move(offset)) {
  if (linear_.rows() != offset_.size()) {
    throw std::invalid_argument("AffineMap: offset/linear dimension mismatch");
  }
}

AffineMap AffineMap::identity(int dim) {
  return AffineMap(Eigen::MatrixXd::Identity(dim, dim),
                   Eigen::VectorXd::Zero(dim));
}

bool AffineMap::invertible() const {
  if (linear_.rows() != linear_.cols()) return false;
  return Eigen::FullPivLU<Eigen::MatrixXd>(linear_).isInvertible();
}

AffineMap AffineMap::inverse() const {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(linear_);
  if (linear_.rows() != linear_.cols() || !lu.isInvertible()) {
    throw std::invalid_argument("AffineMap: linear part is singular");
  }
  Eigen::MatrixXd inv = lu.inverse();
  return AffineMap(inv, -inv * offset_);
}

DualElement DualElement::one(int dim) {
  return DualElement(1.0, Eigen::VectorXd::Zero(dim));
}

double DualElement::operator()(const AffinePoint& a) const {
  if (a.dim() != dim()) {
    throw std::invalid_argument("DualElement: point dimension mismatch");
  }
  return c_ + w_.dot(a.coords());
}

DualElement DualElement::operator+(const DualElement& other) const {
  if (other.dim() != dim()) {
    throw std::invalid_argument("DualElement: sum dimension mismatch");
  }
  return DualElement(c_ + other.c_, w_ + other.w_);
}

DualElement DualElement::operator*(double s) const {
  return DualElement(s * c_, s * w_);
}

AffinePoint affine_apply(const AffineMap& f, const AffinePoint& a) {
  if (a.dim() != f.dim_in()) {
    throw std::invalid_argument("affine_apply: dimension mismatch");
  }
  return AffinePoint(f.linear() * a.coords() + f.offset());
}

AffineMap compose(const AffineMap& g, const AffineMap& f) {
  if (f.dim_out() != g.dim_in()) {
    throw std::invalid_argument("compose: inner dimensions do not match");
  }
  return AffineMap(g.linear() * f.linear(),
                   g.linear() * f.offset() + g.offset());
}

DualElement dual_map(const AffineMap& f, const DualElement& phi) {
  if (phi.dim() != f.dim_in()) {
    throw std::invalid_argument("dual_map: dimension mismatch");
  }
  // phi o f^{-1}: with f^{-1}(y) = B y + d this is
  // y -> c + w . (B y + d) = (c + w . d) + (B^T w) . y.
  AffineMap finv = f.inverse();
  return DualElement(phi.constant() + phi.covector().dot(finv.offset()),
                     finv.linear().transpose() * phi.covector());
}

std::vector<DualElement> vector_dual_basis(int dim) {
  if (dim < 0) {
    throw std::invalid_argument("vector_dual_basis: negative dimension");
  }
  std::vector<DualElement> basis;
  basis.reserve(static_cast<std::size_t>(dim) + 1);
  basis.push_back(DualElement::one(dim));
  for (int b = 0; b < dim; ++b) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
    w(b) = 1.0;
    basis.emplace_back(0.0, std::move(w));
  }
  return basis;
}

}  // namespace aqft
