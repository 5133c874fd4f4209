#include "aqft/fields.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "aqft/tolerances.hpp"

namespace aqft {

Section apply_wave_operator(const Section& s) {
  const LatticeSpacetime& lat = s.lattice();
  const double idt2 = 1.0 / (lat.dt() * lat.dt());
  const double idx2 = 1.0 / (lat.dx() * lat.dx());
  const double m2 = lat.mass() * lat.mass();
  Section out(lat);
  for (int t = lat.first_interior_slice(); t <= lat.last_interior_slice();
       ++t) {
    for (int x = 0; x < lat.n_x(); ++x) {
      const double d2t = (s(t + 1, x) - 2.0 * s(t, x) + s(t - 1, x)) * idt2;
      const double d2x = (s(t, x + 1) - 2.0 * s(t, x) + s(t, x - 1)) * idx2;
      out.at(t, x) = d2t - d2x + m2 * s(t, x);
    }
  }
  return out;
}

namespace {

void require_stepping_margin(const Section& h, const char* who) {
  const LatticeSpacetime& lat = h.lattice();
  if (!h.supported_in_slices(lat.first_interior_slice(),
                             lat.last_interior_slice())) {
    throw std::invalid_argument(std::string(who) +
                                ": support touches a boundary slice");
  }
}

}  // namespace

Section green_retarded(const Section& h) {
  require_stepping_margin(h, "green_retarded");
  const LatticeSpacetime& lat = h.lattice();
  const double dt2 = lat.dt() * lat.dt();
  const double idx2 = 1.0 / (lat.dx() * lat.dx());
  const double m2 = lat.mass() * lat.mass();
  Section u(lat);
  // u(0) = u(1) = 0; the first source slice t0 >= 1 feeds u(t0 + 1).
  for (int t = 1; t <= lat.n_t() - 2; ++t) {
    for (int x = 0; x < lat.n_x(); ++x) {
      const double lap = (u(t, x + 1) - 2.0 * u(t, x) + u(t, x - 1)) * idx2;
      u.at(t + 1, x) =
          2.0 * u(t, x) - u(t - 1, x) + dt2 * (lap - m2 * u(t, x) + h(t, x));
    }
  }
  return u;
}

Section green_advanced(const Section& h) {
  require_stepping_margin(h, "green_advanced");
  const LatticeSpacetime& lat = h.lattice();
  const double dt2 = lat.dt() * lat.dt();
  const double idx2 = 1.0 / (lat.dx() * lat.dx());
  const double m2 = lat.mass() * lat.mass();
  Section u(lat);
  for (int t = lat.n_t() - 2; t >= 1; --t) {
    for (int x = 0; x < lat.n_x(); ++x) {
      const double lap = (u(t, x + 1) - 2.0 * u(t, x) + u(t, x - 1)) * idx2;
      u.at(t - 1, x) =
          2.0 * u(t, x) - u(t + 1, x) + dt2 * (lap - m2 * u(t, x) + h(t, x));
    }
  }
  return u;
}

Section causal_propagator(const Section& h) {
  return green_retarded(h) - green_advanced(h);
}

DualObservable::DualObservable(Section constant_part, Section linear_part)
    : c_(std::move(constant_part)), lin_(std::move(linear_part)) {
  require_same_lattice(c_, lin_);
  const LatticeSpacetime& lat = c_.lattice();
  // Both parts must stay off the boundary slices; adjoint images reach one
  // slice beyond the compact-support margin, so [1, n_t-2] is the contract.
  if (!supported_in_slices(lat.first_interior_slice(),
                           lat.last_interior_slice())) {
    throw std::invalid_argument(
        "DualObservable: support touches a boundary slice");
  }
}

double DualObservable::evaluate(const Section& s) const {
  require_same_lattice(c_, s);
  double sum = 0.0;
  const LatticeSpacetime& lat = c_.lattice();
  for (int t = 0; t < lat.n_t(); ++t) {
    for (int x = 0; x < lat.n_x(); ++x) {
      sum += c_(t, x) + lin_(t, x) * s(t, x);
    }
  }
  return lat.vol() * sum;
}

bool DualObservable::supported_in_slices(int t_lo, int t_hi) const {
  return c_.supported_in_slices(t_lo, t_hi) &&
         lin_.supported_in_slices(t_lo, t_hi);
}

DualObservable DualObservable::operator+(const DualObservable& other) const {
  return DualObservable(c_ + other.c_, lin_ + other.lin_);
}

DualObservable DualObservable::operator*(double a) const {
  return DualObservable(c_ * a, lin_ * a);
}

AffineOperator::AffineOperator(Section source)
    : source_(source), reference_(-green_retarded(source)) {
  const LatticeSpacetime& lat = source_.lattice();
  if (!source_.supported_in_slices(lat.support_min_slice(),
                                   lat.support_max_slice())) {
    throw std::invalid_argument(
        "AffineOperator: source violates the interior margin");
  }
}

Section AffineOperator::apply(const Section& s) const {
  require_same_lattice(source_, s);
  return apply_wave_operator(s) + source_;
}

DualObservable formal_adjoint_apply(const AffineOperator& p,
                                    const Section& h) {
  const LatticeSpacetime& lat = p.lattice();
  require_same_lattice(p.source(), h);
  if (!h.supported_in_slices(lat.support_min_slice(),
                             lat.support_max_slice())) {
    throw std::invalid_argument(
        "formal_adjoint_apply: support violates the interior margin");
  }
  Section c(lat);
  for (int t = 0; t < lat.n_t(); ++t) {
    for (int x = 0; x < lat.n_x(); ++x) {
      const double v = h(t, x) * p.source()(t, x);
      if (v != 0.0) c.at(t, x) = v;
    }
  }
  return DualObservable(std::move(c), apply_wave_operator(h));
}

Section solve_reference(const AffineOperator& p) {
  const Section& s_star = p.reference_solution();
  const Section residual = p.apply(s_star);
  if (residual.max_abs() > tol::green) {
    throw std::runtime_error("solve_reference: residual exceeds tolerance");
  }
  return s_star;
}

}  // namespace aqft
