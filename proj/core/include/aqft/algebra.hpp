#pragma once

#include <complex>
#include <map>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "aqft/phase_space.hpp"

namespace aqft {

enum class Statistics { bosonic, fermionic };

/// Presented bilinear data (E, tau) for the field polynomial algebra:
/// the Gram matrix of a chosen basis, antisymmetric for bosons and
/// symmetric for fermions.
class GeneratorBasis {
 public:
  GeneratorBasis(Statistics statistics, Eigen::MatrixXd gram);

  Statistics statistics() const { return statistics_; }
  int size() const { return static_cast<int>(gram_.rows()); }
  double gram(int i, int j) const { return gram_(i, j); }
  const Eigen::MatrixXd& gram_matrix() const { return gram_; }

  bool compatible_with(const GeneratorBasis& other) const;

 private:
  Statistics statistics_;
  Eigen::MatrixXd gram_;
};

using GeneratorBasisPtr = std::shared_ptr<const GeneratorBasis>;

/// Basis of the lattice phase space: index 0 generates the null direction
/// (I' = 1, no data), indices 1..n_x are unit u-impulses, indices
/// n_x+1..2n_x unit u_next-impulses. The Gram matrix is computed with the
/// equal-time bilinear, so its first row and column vanish.
class PhaseBasis {
 public:
  explicit PhaseBasis(const LatticeSpacetime& lat);

  const LatticeSpacetime& lattice() const { return lat_; }
  int size() const { return 2 * lat_.n_x() + 1; }
  const PhaseVector& element(int i) const { return elements_.at(i); }

  /// Exact coordinates of a phase vector over this basis: the I' scalar on
  /// index 0, then the Cauchy data entries.
  Eigen::VectorXd coordinates(const PhaseVector& pv) const;

  /// Full algebra basis, bosonic, Gram = tau_canonical of the elements.
  GeneratorBasisPtr algebra_basis() const { return full_; }
  /// Linear-theory basis: index 0 stripped.
  GeneratorBasisPtr linear_basis() const { return lin_; }

 private:
  LatticeSpacetime lat_;
  std::vector<PhaseVector> elements_;
  GeneratorBasisPtr full_;
  GeneratorBasisPtr lin_;
};

/// Element of the CCR/CAR field polynomial algebra in normal form: a
/// complex combination of normal-ordered generator monomials. Bosonic
/// monomials carry non-decreasing index sequences, fermionic ones strictly
/// increasing. The empty monomial is the unit.
class AlgebraElement {
 public:
  using Monomial = std::vector<int>;
  using Complex = std::complex<double>;
  using TermMap = std::map<Monomial, Complex>;

  static AlgebraElement zero(GeneratorBasisPtr basis);
  static AlgebraElement unit(GeneratorBasisPtr basis);
  static AlgebraElement scalar(GeneratorBasisPtr basis, Complex value);
  static AlgebraElement generator(GeneratorBasisPtr basis, int index);
  /// Degree-1 element sum_i coeffs[i] Psi_i.
  static AlgebraElement linear_combination(GeneratorBasisPtr basis,
                                           const Eigen::VectorXd& coeffs);

  const GeneratorBasisPtr& basis() const { return basis_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;

  Complex scalar_part() const;

  AlgebraElement operator+(const AlgebraElement& other) const;
  AlgebraElement operator-(const AlgebraElement& other) const;
  AlgebraElement operator*(const AlgebraElement& other) const;
  AlgebraElement operator*(Complex c) const;

  AlgebraElement star() const;

  double max_coefficient_delta(const AlgebraElement& other) const;

  /// Deterministic text rendering, monomials in map order.
  std::string to_string() const;

 private:
  AlgebraElement(GeneratorBasisPtr basis) : basis_(std::move(basis)) {}

  void add_term(const Monomial& mono, Complex coeff);

  friend AlgebraElement kappa(const AlgebraElement&, const PhaseBasis&);

  GeneratorBasisPtr basis_;
  TermMap terms_;
};

AlgebraElement mul(const AlgebraElement& x, const AlgebraElement& y);

AlgebraElement star(const AlgebraElement& x);

/// Degree-1 element for a phase vector expanded over the lattice basis.
AlgebraElement generator(const PhaseVector& pv, const PhaseBasis& basis);

/// Image of x under the algebra homomorphism induced by a Gram-preserving
/// linear map on basis coordinates (Psi_i -> sum_a L(a, i) Psi_a).
AlgebraElement functor_map(const Eigen::MatrixXd& map,
                           const AlgebraElement& x);

/// Homomorphism onto the linear-theory algebra: the null generator becomes
/// the unit, every other generator drops to the linear basis. Central
/// because the Gram row of the null generator vanishes.
AlgebraElement kappa(const AlgebraElement& x, const PhaseBasis& basis);

/// Operations refuse to build monomials beyond this degree.
inline constexpr int max_monomial_degree = 12;

}  // namespace aqft
