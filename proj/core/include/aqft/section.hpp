#pragma once

#include <vector>

#include "aqft/lattice.hpp"

namespace aqft {

/// Real scalar section over the lattice, indexed by (t, x) with periodic x.
/// Sections are constructed, not measured: the support is the set of sites
/// holding an exactly nonzero value.
class Section {
 public:
  explicit Section(const LatticeSpacetime& lat)
      : lat_(lat),
        values_(static_cast<std::size_t>(lat.n_t()) * lat.n_x(), 0.0) {}

  const LatticeSpacetime& lattice() const { return lat_; }

  double operator()(int t, int x) const {
    return values_[index(t, lat_.wrap_x(x))];
  }
  double& at(int t, int x) { return values_[index(t, lat_.wrap_x(x))]; }

  SiteSet support() const;
  bool is_zero() const;
  /// Support lies within time slices [t_lo, t_hi].
  bool supported_in_slices(int t_lo, int t_hi) const;
  /// Smallest/largest slice carrying support; {-1, -1} for the zero section.
  std::pair<int, int> support_slice_range() const;

  double max_abs() const;

  /// Weighted pairing  sum vol * a * b  over all sites.
  friend double pairing(const Section& a, const Section& b);

  Section operator+(const Section& other) const;
  Section operator-(const Section& other) const;
  Section operator*(double s) const;
  Section operator-() const { return *this * -1.0; }

 private:
  std::size_t index(int t, int x) const {
    return static_cast<std::size_t>(t) * lat_.n_x() + x;
  }

  LatticeSpacetime lat_;
  std::vector<double> values_;
};

void require_same_lattice(const Section& a, const Section& b);

}  // namespace aqft
