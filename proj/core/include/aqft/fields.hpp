#pragma once

#include <optional>

#include "aqft/section.hpp"

namespace aqft {

/// Symmetric discrete Klein-Gordon stencil,
///   (P_V u)(t,x) = (u(t+1,x) - 2u(t,x) + u(t-1,x)) / dt^2
///                - (u(t,x+1) - 2u(t,x) + u(t,x-1)) / dx^2 + m^2 u(t,x),
/// evaluated on interior slices [1, n_t-2]; boundary slices of the result
/// are zero. Formally self-adjoint for interior-supported sections.
Section apply_wave_operator(const Section& s);

/// Retarded solve: u with P_V u = h on interior slices and u = 0 strictly
/// before the support of h. Explicit forward stepping; support containment
/// supp(u) in J+(supp h) is exact at the stencil level.
/// Requires supp(h) within slices [1, n_t-2].
Section green_retarded(const Section& h);

/// Time mirror of green_retarded; supp(u) in J-(supp h).
Section green_advanced(const Section& h);

/// Causal propagator G = G+ - G-. Solves P_V u = 0 on interior slices.
Section causal_propagator(const Section& h);

/// Compactly supported affine functional on configurations,
///   phi(s)(t,x) = c(t,x) + lin(t,x) * s(t,x),
/// the lattice realisation of a dual-bundle section. The constant section
/// with zero linear part plays the role of the functional "1".
class DualObservable {
 public:
  DualObservable(Section constant_part, Section linear_part);

  const LatticeSpacetime& lattice() const { return c_.lattice(); }
  const Section& constant_part() const { return c_; }
  const Section& linear_part() const { return lin_; }

  /// F_phi(s) = sum vol (c + lin * s).
  double evaluate(const Section& s) const;

  bool supported_in_slices(int t_lo, int t_hi) const;

  DualObservable operator+(const DualObservable& other) const;
  DualObservable operator*(double a) const;

 private:
  Section c_;
  Section lin_;
};

/// Affine Green-hyperbolic operator P(s) = P_V(s) + J with compactly
/// supported source J. Holds the retarded reference solution of P(s) = 0.
class AffineOperator {
 public:
  explicit AffineOperator(Section source);

  const LatticeSpacetime& lattice() const { return source_.lattice(); }
  const Section& source() const { return source_; }

  Section apply(const Section& s) const;
  Section apply_linear(const Section& s) const { return apply_wave_operator(s); }

  /// s* = -G+(J), cached at construction.
  const Section& reference_solution() const { return reference_; }

 private:
  Section source_;
  Section reference_;
};

/// Formal adjoint P*(h): the dual observable with constant part h * J
/// (pointwise) and linear part P_V h. Satisfies
///   sum vol h * P(s) = sum vol (P*(h))(s)   for every configuration s.
/// Requires supp(h) within the compact-support margin.
DualObservable formal_adjoint_apply(const AffineOperator& p, const Section& h);

/// Reference solution with a residual guard: |P(s*)|_inf <= 1e-9 on
/// interior slices, else throws.
Section solve_reference(const AffineOperator& p);

}  // namespace aqft
