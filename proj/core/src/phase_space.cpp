#include "aqft/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aqft/tolerances.hpp"

namespace aqft {

CauchyData CauchyData::zero(int n_x) {
  return CauchyData{std::vector<double>(n_x, 0.0),
                    std::vector<double>(n_x, 0.0)};
}

double CauchyData::max_abs() const {
  double m = 0.0;
  for (double v : u) m = std::max(m, std::abs(v));
  for (double v : u_next) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_difference(const CauchyData& a, const CauchyData& b) {
  if (a.u.size() != b.u.size()) {
    throw std::invalid_argument("CauchyData: size mismatch");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.u.size(); ++i) {
    m = std::max(m, std::abs(a.u[i] - b.u[i]));
    m = std::max(m, std::abs(a.u_next[i] - b.u_next[i]));
  }
  return m;
}

PhaseVector::PhaseVector(const LatticeSpacetime& lat, double i_prime,
                         CauchyData data)
    : lat_(lat), i_prime_(i_prime), data_(std::move(data)) {
  if (static_cast<int>(data_.u.size()) != lat.n_x() ||
      static_cast<int>(data_.u_next.size()) != lat.n_x()) {
    throw std::invalid_argument("PhaseVector: data size mismatch");
  }
}

namespace {

CauchyData read_reference_data(const Section& propagated) {
  const LatticeSpacetime& lat = propagated.lattice();
  const int ts = lat.reference_slice();
  CauchyData data = CauchyData::zero(lat.n_x());
  for (int x = 0; x < lat.n_x(); ++x) {
    data.u[x] = propagated(ts, x);
    data.u_next[x] = propagated(ts + 1, x);
  }
  return data;
}

}  // namespace

PhaseVector classify(const DualObservable& phi, const AffineOperator& p) {
  const LatticeSpacetime& lat = p.lattice();
  if (!(phi.lattice() == lat)) {
    throw std::invalid_argument("classify: lattice mismatch");
  }
  if (!phi.supported_in_slices(lat.first_interior_slice(),
                               lat.reference_slice() - 1)) {
    throw std::invalid_argument(
        "classify: support extends past the reference slice");
  }
  const double i_prime = phi.evaluate(p.reference_solution());
  // Beyond the support of the linear part the advanced branch vanishes, so
  // the causal propagator is its retarded branch at the reference slices.
  const Section propagated = green_retarded(phi.linear_part());
  return PhaseVector(lat, i_prime, read_reference_data(propagated));
}

double tau(const DualObservable& phi, const DualObservable& psi) {
  if (!(phi.lattice() == psi.lattice())) {
    throw std::invalid_argument("tau: lattice mismatch");
  }
  return pairing(phi.linear_part(), causal_propagator(psi.linear_part()));
}

double tau_canonical(const PhaseVector& a, const PhaseVector& b) {
  if (!(a.lattice() == b.lattice())) {
    throw std::invalid_argument("tau_canonical: lattice mismatch");
  }
  const LatticeSpacetime& lat = a.lattice();
  double sum = 0.0;
  for (int x = 0; x < lat.n_x(); ++x) {
    sum += a.data().u_next[x] * b.data().u[x] -
           a.data().u[x] * b.data().u_next[x];
  }
  return (lat.dx() / lat.dt()) * sum;
}

bool is_null(const PhaseVector& pv) {
  const double scale = std::max(1.0, std::abs(pv.i_prime()));
  return pv.data().max_abs() <= tol::null_data * scale;
}

PhaseVector eta(const Section& h, const AffineOperator& p) {
  const LatticeSpacetime& lat = p.lattice();
  require_same_lattice(h, p.source());
  Section c(lat);
  const Section& s_star = p.reference_solution();
  for (int t = 0; t < lat.n_t(); ++t) {
    for (int x = 0; x < lat.n_x(); ++x) {
      const double v = -h(t, x) * s_star(t, x);
      if (v != 0.0) c.at(t, x) = v;
    }
  }
  return classify(DualObservable(std::move(c), h), p);
}

CauchyData eta_inv(const DualObservable& phi) {
  const LatticeSpacetime& lat = phi.lattice();
  if (!phi.linear_part().supported_in_slices(lat.first_interior_slice(),
                                             lat.reference_slice() - 1)) {
    throw std::invalid_argument(
        "eta_inv: support extends past the reference slice");
  }
  return read_reference_data(green_retarded(phi.linear_part()));
}

Section section_from_cauchy_data(const LatticeSpacetime& lat,
                                 const CauchyData& data) {
  if (static_cast<int>(data.u.size()) != lat.n_x() ||
      static_cast<int>(data.u_next.size()) != lat.n_x()) {
    throw std::invalid_argument("section_from_cauchy_data: size mismatch");
  }
  const int ts = lat.reference_slice();
  const double dt2 = lat.dt() * lat.dt();
  const double idx2 = 1.0 / (lat.dx() * lat.dx());
  const double m2 = lat.mass() * lat.mass();
  Section w(lat);
  for (int x = 0; x < lat.n_x(); ++x) {
    w.at(ts, x) = data.u[x];
    w.at(ts + 1, x) = data.u_next[x];
  }
  // Forward above the data slices, backward below; the arithmetic matches
  // the Green recursions term for term.
  for (int t = ts + 1; t <= lat.n_t() - 2; ++t) {
    for (int x = 0; x < lat.n_x(); ++x) {
      const double lap = (w(t, x + 1) - 2.0 * w(t, x) + w(t, x - 1)) * idx2;
      w.at(t + 1, x) = 2.0 * w(t, x) - w(t - 1, x) + dt2 * (lap - m2 * w(t, x));
    }
  }
  for (int t = ts; t >= 1; --t) {
    for (int x = 0; x < lat.n_x(); ++x) {
      const double lap = (w(t, x + 1) - 2.0 * w(t, x) + w(t, x - 1)) * idx2;
      w.at(t - 1, x) = 2.0 * w(t, x) - w(t + 1, x) + dt2 * (lap - m2 * w(t, x));
    }
  }
  return w;
}

namespace {

// Asserts that the section is negligible outside [t_lo, t_hi] relative to
// scale, then zeroes it there exactly.
Section clamp_to_slices(const Section& s, int t_lo, int t_hi, double scale) {
  const LatticeSpacetime& lat = s.lattice();
  Section out(lat);
  for (int t = 0; t < lat.n_t(); ++t) {
    const bool inside = (t >= t_lo && t <= t_hi);
    for (int x = 0; x < lat.n_x(); ++x) {
      const double v = s(t, x);
      if (inside) {
        out.at(t, x) = v;
      } else if (std::abs(v) > tol::leakage * scale) {
        throw std::runtime_error("support leakage above tolerance");
      }
    }
  }
  return out;
}

}  // namespace

Section compact_representative(const LatticeSpacetime& lat,
                               const CauchyData& data, int cutoff_slice) {
  if (cutoff_slice < lat.support_min_slice() + 1 ||
      cutoff_slice > lat.n_t() - 5) {
    throw std::invalid_argument("compact_representative: bad cutoff slice");
  }
  const Section w = section_from_cauchy_data(lat, data);
  Section chi_w(lat);
  for (int t = cutoff_slice; t < lat.n_t(); ++t) {
    for (int x = 0; x < lat.n_x(); ++x) chi_w.at(t, x) = w(t, x);
  }
  // P_V(chi w) vanishes identically outside the three slices where the
  // cutoff varies; what remains there is recomputation roundoff.
  const Section h = apply_wave_operator(chi_w);
  return clamp_to_slices(h, cutoff_slice - 1, cutoff_slice + 1,
                         std::max(1.0, w.max_abs() / (lat.dt() * lat.dt())));
}

RegionEmbedding::RegionEmbedding(AffineOperator source, AffineOperator target,
                                 int time_offset)
    : source_(std::move(source)), target_(std::move(target)),
      offset_(time_offset) {
  const LatticeSpacetime& ls = source_.lattice();
  const LatticeSpacetime& lt = target_.lattice();
  if (!ls.same_geometry(lt)) {
    throw std::invalid_argument(
        "RegionEmbedding: incompatible spatial geometry");
  }
  if (offset_ < 0 || offset_ + ls.n_t() > lt.n_t()) {
    throw std::invalid_argument("RegionEmbedding: window out of range");
  }
  // Operator compatibility: the target source restricted to the window
  // must coincide with the source's source.
  for (int t = 0; t < ls.n_t(); ++t) {
    for (int x = 0; x < ls.n_x(); ++x) {
      if (target_.source()(t + offset_, x) != source_.source()(t, x)) {
        throw std::invalid_argument(
            "RegionEmbedding: sources disagree on the window");
      }
    }
  }
}

Region RegionEmbedding::image() const {
  return Region::window(target_.lattice(), offset_,
                        offset_ + source_.lattice().n_t() - 1);
}

Section RegionEmbedding::push(const Section& s) const {
  require_same_lattice(s, source_.source());
  Section out(target_.lattice());
  for (int t = 0; t < source_.lattice().n_t(); ++t) {
    for (int x = 0; x < s.lattice().n_x(); ++x) {
      const double v = s(t, x);
      if (v != 0.0) out.at(t + offset_, x) = v;
    }
  }
  return out;
}

Section RegionEmbedding::pull(const Section& s) const {
  require_same_lattice(s, target_.source());
  Section out(source_.lattice());
  for (int t = 0; t < source_.lattice().n_t(); ++t) {
    for (int x = 0; x < out.lattice().n_x(); ++x) {
      const double v = s(t + offset_, x);
      if (v != 0.0) out.at(t, x) = v;
    }
  }
  return out;
}

DualObservable RegionEmbedding::push(const DualObservable& phi) const {
  return DualObservable(push(phi.constant_part()), push(phi.linear_part()));
}

DualObservable RegionEmbedding::pull(const DualObservable& phi) const {
  const int lo = offset_;
  const int hi = offset_ + source_.lattice().n_t() - 1;
  if (!phi.supported_in_slices(lo, hi)) {
    throw std::invalid_argument(
        "RegionEmbedding::pull: support outside the window");
  }
  return DualObservable(pull(phi.constant_part()), pull(phi.linear_part()));
}

RegionEmbedding compose(const RegionEmbedding& g, const RegionEmbedding& f) {
  if (!(f.target_op().lattice() == g.source_op().lattice())) {
    throw std::invalid_argument("compose: embeddings are not composable");
  }
  return RegionEmbedding(f.source_op(), g.target_op(),
                         f.time_offset() + g.time_offset());
}

DualObservable timeslice_deform(const DualObservable& phi, const Region& win,
                                const AffineOperator& p) {
  const LatticeSpacetime& lat = p.lattice();
  if (!(phi.lattice() == lat)) {
    throw std::invalid_argument("timeslice_deform: lattice mismatch");
  }
  if (win.kind() != Region::Kind::time_window) {
    throw std::invalid_argument("timeslice_deform: window region required");
  }
  const int t_a = win.t_begin();
  const int t_b = win.t_end();
  if (t_b - t_a < 4) {
    throw std::invalid_argument("timeslice_deform: window too narrow");
  }
  const int t_mid = (t_a + t_b) / 2;

  // Split the linear part at t_mid - 1; the upper half is pushed down with
  // the advanced solution, the lower half up with the retarded one.
  const Section& lin = phi.linear_part();
  Section lin_upper(lat);
  Section lin_lower(lat);
  for (int t = 0; t < lat.n_t(); ++t) {
    for (int x = 0; x < lat.n_x(); ++x) {
      const double v = lin(t, x);
      if (v == 0.0) continue;
      if (t >= t_mid - 1) {
        lin_upper.at(t, x) = v;
      } else {
        lin_lower.at(t, x) = v;
      }
    }
  }

  // h = -chi G-(lin_upper) - (1 - chi) G+(lin_lower) with the sharp step
  // chi = [t >= t_mid].
  const Section adv = green_advanced(lin_upper);
  const Section ret = green_retarded(lin_lower);
  Section h(lat);
  for (int t = 0; t < lat.n_t(); ++t) {
    const bool chi = t >= t_mid;
    for (int x = 0; x < lat.n_x(); ++x) {
      const double v = chi ? -adv(t, x) : -ret(t, x);
      if (v != 0.0) h.at(t, x) = v;
    }
  }

  const Section p_v_h = apply_wave_operator(h);
  const double scale =
      std::max({1.0, lin.max_abs(), p_v_h.max_abs()});
  const Section lin_new =
      clamp_to_slices(lin + p_v_h, t_mid - 1, t_mid, scale);

  // Scalar sector: the raw constant part c + h J is traded for a bump on
  // the middle slice with the same integral; the difference is trivial.
  double integral = 0.0;
  for (int t = 0; t < lat.n_t(); ++t) {
    for (int x = 0; x < lat.n_x(); ++x) {
      integral += phi.constant_part()(t, x) + h(t, x) * p.source()(t, x);
    }
  }
  Section c_new(lat);
  const double height = integral / lat.n_x();
  if (height != 0.0) {
    for (int x = 0; x < lat.n_x(); ++x) c_new.at(t_mid, x) = height;
  }
  return DualObservable(std::move(c_new), lin_new);
}

WindowIsoReport pushforward_is_iso_on_window(const RegionEmbedding& emb) {
  WindowIsoReport report;
  const LatticeSpacetime& lt = emb.target_op().lattice();
  const LatticeSpacetime& ls = emb.source_op().lattice();
  const int t_a = emb.time_offset() + 2;
  const int t_b = emb.time_offset() + ls.n_t() - 5;
  if (t_b - t_a < 4) return report;  // window unusable for deformation
  const Region win = Region::window(lt, t_a, t_b);

  // Spanning family of target classes: linear deltas on two adjacent
  // slices plus one generator of the null direction.
  std::vector<DualObservable> spanning;
  const int t_s = lt.support_min_slice();
  for (int x = 0; x < lt.n_x(); ++x) {
    for (int step = 0; step <= 1; ++step) {
      Section lin(lt);
      lin.at(t_s + step, x) = 1.0;
      spanning.emplace_back(Section(lt), std::move(lin));
    }
  }
  {
    Section c(lt);
    c.at(t_s, 0) = 1.0;
    spanning.emplace_back(std::move(c), Section(lt));
  }

  report.ok = true;
  for (const DualObservable& psi : spanning) {
    const PhaseVector want = classify(psi, emb.target_op());
    const DualObservable deformed = timeslice_deform(psi, win, emb.target_op());
    const DualObservable back = emb.push(emb.pull(deformed));
    const PhaseVector got = classify(back, emb.target_op());
    const double delta =
        std::max(std::abs(want.i_prime() - got.i_prime()),
                 max_abs_difference(want.data(), got.data()));
    report.max_canonical_delta = std::max(report.max_canonical_delta, delta);
    const double scale = std::max(1.0, want.data().max_abs());
    if (delta > tol::green * scale) report.ok = false;
    ++report.generators_checked;
  }
  return report;
}

}  // namespace aqft
