#pragma once

#include <complex>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "aqft/algebra.hpp"

namespace aqft {

/// Quasi-free state given by its two-point matrix on a generator basis.
/// Bosonic: omega2 = mu + (i/2) gram with mu real symmetric and the
/// hermitian matrix omega2 positive semidefinite. Fermionic: omega2
/// hermitian positive semidefinite with omega2 + omega2^T = gram, which
/// forces the gram itself to be positive semidefinite.
class QuasiFreeState {
 public:
  QuasiFreeState(GeneratorBasisPtr basis, Eigen::MatrixXcd omega2);

  /// Minimal fermionic choice omega2 = gram / 2.
  static QuasiFreeState fermionic_from_gram(GeneratorBasisPtr basis);

  const GeneratorBasisPtr& basis() const { return basis_; }
  const Eigen::MatrixXcd& omega2() const { return omega2_; }

  /// Wick evaluation: monomials of odd degree vanish, even degrees sum
  /// over perfect pairings (signed for fermions); the unit evaluates to 1.
  std::complex<double> evaluate(const AlgebraElement& x) const;

  /// Moment of an ordered product of degree-1 elements with the given
  /// coordinate vectors, evaluated without building the product element.
  std::complex<double> moment_of_vectors(
      std::span<const Eigen::VectorXd> vectors) const;

  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  GeneratorBasisPtr basis_;
  Eigen::MatrixXcd omega2_;
  double min_eigenvalue_;
};

/// Dispersion-diagonal bosonic vacuum for the lattice theory, expressed on
/// the Cauchy-data basis. Pure (rank n_x), stationary under the one-step
/// evolution, with Im(omega2) = gram/2.
QuasiFreeState ground_state(const PhaseBasis& basis);

/// State on the affine algebra pulled back along kappa from a bosonic
/// quasi-free state of the linearised theory.
class InducedAffineState {
 public:
  InducedAffineState(QuasiFreeState base, AffineOperator op,
                     PhaseBasis basis);

  const QuasiFreeState& base() const { return base_; }
  const AffineOperator& op() const { return op_; }
  const PhaseBasis& phase_basis() const { return basis_; }

  /// evaluate(base, kappa(x)) for an element over the full basis.
  std::complex<double> evaluate(const AlgebraElement& x) const;

  /// n-point distribution of classified observables; computed through the
  /// pairs-and-singlets partition sum, which is what kappa followed by
  /// Wick evaluation produces for a product of generators.
  std::complex<double> n_point(std::span<const DualObservable> obs) const;

 private:
  QuasiFreeState base_;
  AffineOperator op_;
  PhaseBasis basis_;
};

/// All partitions of {1, ..., n}; blocks are ascending and ordered by
/// smallest element. The count is the n-th Bell number.
std::vector<std::vector<std::vector<int>>> set_partitions(int n);

using MomentFn =
    std::function<std::complex<double>(const std::vector<int>&)>;

/// Solves the implicit truncation relation: joint cumulants for every
/// ascending index tuple drawn from {1..n}, from a moment callback.
std::map<std::vector<int>, std::complex<double>> cumulants_from_moments(
    int n, const MomentFn& moments);

struct MomentRow {
  int n = 0;
  std::complex<double> moment;
  std::complex<double> truncated;
  double scale = 1.0;
};

/// Moments and truncated moments of the prefix tuples obs[0..n) for
/// n = 1..n_max (n_max <= 8).
std::vector<MomentRow> truncated_moments(const InducedAffineState& state,
                                         std::span<const DualObservable> obs,
                                         int n_max);

struct QuasiFreeCheckRow {
  int n = 0;
  double max_abs_truncated = 0.0;
  double scale = 1.0;
  bool passed = true;
};

struct QuasiFreeCheckReport {
  bool passed = true;
  std::vector<QuasiFreeCheckRow> rows;
};

/// Verifies that truncated n-point functions vanish for 2 < n <= n_max
/// over sliding windows of the sample sequence.
QuasiFreeCheckReport check_affine_quasifree(
    const InducedAffineState& state, std::span<const DualObservable> samples,
    int n_max);

}  // namespace aqft
