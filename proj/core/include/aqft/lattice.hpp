#pragma once

#include <compare>
#include <set>

namespace aqft {

/// Discrete globally hyperbolic background: a spatial circle of n_x sites
/// crossed with n_t time slices. The causal cone is one site per time step,
/// matching the nearest-neighbour stencil of the field operator; with
/// dt <= dx it contains the metric cone.
class LatticeSpacetime {
 public:
  LatticeSpacetime(int n_x, int n_t, double dx, double dt, double mass);

  int n_x() const { return n_x_; }
  int n_t() const { return n_t_; }
  double dx() const { return dx_; }
  double dt() const { return dt_; }
  double mass() const { return mass_; }

  /// Per-site volume weight dt * dx.
  double vol() const { return dt_ * dx_; }

  int wrap_x(int x) const;
  int circle_distance(int x0, int x1) const;

  /// Slices where the second-order stencil can be evaluated.
  int first_interior_slice() const { return 1; }
  int last_interior_slice() const { return n_t_ - 2; }

  /// Margin for compactly supported data: slices [2, n_t-3]. Leaves room
  /// for Green stepping and Cauchy-data extraction at the final slices.
  int support_min_slice() const { return 2; }
  int support_max_slice() const { return n_t_ - 3; }

  /// Slice t* = n_t - 3 where canonical Cauchy data is read off. It lies
  /// after every admissible observable support, so the causal propagator
  /// reduces to its retarded part there.
  int reference_slice() const { return n_t_ - 3; }

  bool same_geometry(const LatticeSpacetime& other) const;

  bool operator==(const LatticeSpacetime&) const = default;

 private:
  int n_x_;
  int n_t_;
  double dx_;
  double dt_;
  double mass_;
};

struct Site {
  int t;
  int x;
  auto operator<=>(const Site&) const = default;
};

using SiteSet = std::set<Site>;

SiteSet causal_future(const LatticeSpacetime& lat, const SiteSet& s);
SiteSet causal_past(const LatticeSpacetime& lat, const SiteSet& s);

/// True iff neither region meets the causal cone of the other,
/// (J+(s1) u J-(s1)) n s2 = {}.
bool causally_disjoint(const LatticeSpacetime& lat, const SiteSet& s1,
                       const SiteSet& s2);

/// Every full constant-time slice is a Cauchy slice.
bool is_cauchy_slice(const LatticeSpacetime& lat, int t);

/// Causally compatible subregion. Only full-spatial time windows are
/// certified causally compatible by construction; anything else carries
/// the general tag and is used for disjointness checks only.
class Region {
 public:
  enum class Kind { time_window, general };

  static Region window(const LatticeSpacetime& lat, int t_a, int t_b);
  static Region general(const LatticeSpacetime& lat, SiteSet sites);

  Kind kind() const { return kind_; }
  const SiteSet& sites() const { return sites_; }
  bool contains(Site s) const { return sites_.count(s) > 0; }
  bool contains_cauchy_slice() const;

  /// Window bounds; only meaningful for time_window regions.
  int t_begin() const { return t_begin_; }
  int t_end() const { return t_end_; }

 private:
  Region(Kind kind, SiteSet sites, int t_begin, int t_end, int n_x)
      : kind_(kind), sites_(std::move(sites)), t_begin_(t_begin),
        t_end_(t_end), n_x_(n_x) {}

  Kind kind_;
  SiteSet sites_;
  int t_begin_;
  int t_end_;
  int n_x_;
};

}  // namespace aqft
