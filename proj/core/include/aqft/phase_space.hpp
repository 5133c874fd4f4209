#pragma once

#include <vector>

#include "aqft/fields.hpp"

namespace aqft {

/// Values of a homogeneous solution on the reference slice t* and t*+1.
/// This pins the solution down completely: stepping forward and backward
/// reconstructs it on the whole lattice.
struct CauchyData {
  std::vector<double> u;
  std::vector<double> u_next;

  static CauchyData zero(int n_x);
  bool operator==(const CauchyData&) const = default;
  double max_abs() const;
};

double max_abs_difference(const CauchyData& a, const CauchyData& b);

/// Canonical form of an observable class: the pair (I', data) is a complete
/// invariant of the quotient by trivial observables and adjoint images.
/// I' is the evaluation against the reference solution; data is the causal
/// propagator of the linear part read off at the reference slice.
class PhaseVector {
 public:
  PhaseVector(const LatticeSpacetime& lat, double i_prime, CauchyData data);

  const LatticeSpacetime& lattice() const { return lat_; }
  double i_prime() const { return i_prime_; }
  const CauchyData& data() const { return data_; }

 private:
  LatticeSpacetime lat_;
  double i_prime_;
  CauchyData data_;
};

/// Computes the canonical form of [phi]. The linear part must be supported
/// strictly before the reference slice, so that the causal propagator
/// reduces to its retarded branch where the data is read off.
PhaseVector classify(const DualObservable& phi, const AffineOperator& p);

/// Peierls bilinear: sum vol lin_phi * G(lin_psi). Independent of the
/// representatives; antisymmetric for the symmetric fiber pairing.
double tau(const DualObservable& phi, const DualObservable& psi);

/// Equal-time evaluation of the same bilinear from canonical data alone:
///   (dx/dt) sum_x (u_next1 * u2 - u1 * u_next2).
double tau_canonical(const PhaseVector& a, const PhaseVector& b);

/// Null classes are exactly those with vanishing Cauchy data; they are
/// parametrised by I'.
bool is_null(const PhaseVector& pv);

/// Linearization map h -> [<h, . - s*>]; its canonical form has I' = 0 and
/// data given by the propagated h.
PhaseVector eta(const Section& h, const AffineOperator& p);

/// Inverse direction: discard the scalar part, keep the class of the
/// linear part as Cauchy data.
CauchyData eta_inv(const DualObservable& phi);

/// Homogeneous solution with the given values at slices t*, t*+1.
Section section_from_cauchy_data(const LatticeSpacetime& lat,
                                 const CauchyData& data);

/// Compactly supported section h whose propagated class has the given
/// Cauchy data: h = P_V(chi * w) for a step cutoff chi, supported on three
/// slices around cutoff_slice.
Section compact_representative(const LatticeSpacetime& lat,
                               const CauchyData& data, int cutoff_slice = 3);

/// Time-window embedding of a shorter lattice into a longer one with the
/// same spatial geometry and compatible source. Push-forward extends by
/// zero; pull-back restricts.
class RegionEmbedding {
 public:
  RegionEmbedding(AffineOperator source, AffineOperator target,
                  int time_offset);

  const AffineOperator& source_op() const { return source_; }
  const AffineOperator& target_op() const { return target_; }
  int time_offset() const { return offset_; }

  /// The image window in the target lattice.
  Region image() const;

  Section push(const Section& s) const;
  Section pull(const Section& s) const;
  DualObservable push(const DualObservable& phi) const;
  DualObservable pull(const DualObservable& phi) const;

 private:
  AffineOperator source_;
  AffineOperator target_;
  int offset_;
};

/// Composition of two window embeddings (g after f).
RegionEmbedding compose(const RegionEmbedding& g, const RegionEmbedding& f);

/// Deforms phi into an observable supported inside the window without
/// changing its class. The window must span at least five slices
/// (t_b - t_a >= 4).
DualObservable timeslice_deform(const DualObservable& phi, const Region& win,
                                const AffineOperator& p);

struct WindowIsoReport {
  bool ok = false;
  int generators_checked = 0;
  double max_canonical_delta = 0.0;
};

/// Diagnostic for the time-slice property of a window embedding: deforms a
/// spanning family of target classes into the image, pulls back, pushes
/// forward, and compares canonical forms. Returns ok = false when the
/// usable window is too narrow to deform into.
WindowIsoReport pushforward_is_iso_on_window(const RegionEmbedding& emb);

}  // namespace aqft
