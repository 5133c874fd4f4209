#include "aqft/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <stdexcept>

namespace aqft {

LatticeSpacetime::LatticeSpacetime(int n_x, int n_t, double dx, double dt,
                                   double mass)
    : n_x_(n_x), n_t_(n_t), dx_(dx), dt_(dt), mass_(mass) {
  if (n_x < 3) throw std::invalid_argument("LatticeSpacetime: n_x must be >= 3");
  if (n_t < 8) throw std::invalid_argument("LatticeSpacetime: n_t must be >= 8");
  if (dx <= 0.0 || dt <= 0.0) {
    throw std::invalid_argument("LatticeSpacetime: spacings must be positive");
  }
  if (dt > dx) {
    throw std::invalid_argument(
        "LatticeSpacetime: dt must not exceed dx (causal-cone condition)");
  }
  if (mass <= 0.0) {
    throw std::invalid_argument("LatticeSpacetime: mass must be positive");
  }
}

int LatticeSpacetime::wrap_x(int x) const {
  int r = x % n_x_;
  return r < 0 ? r + n_x_ : r;
}

int LatticeSpacetime::circle_distance(int x0, int x1) const {
  int d = std::abs(wrap_x(x0) - wrap_x(x1));
  return std::min(d, n_x_ - d);
}

bool LatticeSpacetime::same_geometry(const LatticeSpacetime& other) const {
  return n_x_ == other.n_x_ && dx_ == other.dx_ && dt_ == other.dt_ &&
         mass_ == other.mass_;
}

namespace {

void check_sites(const LatticeSpacetime& lat, const SiteSet& s) {
  for (const Site& p : s) {
    if (p.t < 0 || p.t >= lat.n_t() || p.x < 0 || p.x >= lat.n_x()) {
      throw std::invalid_argument("site out of range");
    }
  }
}

// Shared cone sweep; dir = +1 for the future, -1 for the past.
SiteSet cone(const LatticeSpacetime& lat, const SiteSet& s, int dir) {
  check_sites(lat, s);
  SiteSet out;
  for (const Site& p : s) {
    for (int t = p.t; t >= 0 && t < lat.n_t(); t += dir) {
      int k = (t - p.t) * dir;
      for (int x = 0; x < lat.n_x(); ++x) {
        if (lat.circle_distance(p.x, x) <= k) out.insert(Site{t, x});
      }
    }
  }
  return out;
}

}  // namespace

SiteSet causal_future(const LatticeSpacetime& lat, const SiteSet& s) {
  return cone(lat, s, +1);
}

SiteSet causal_past(const LatticeSpacetime& lat, const SiteSet& s) {
  return cone(lat, s, -1);
}

bool causally_disjoint(const LatticeSpacetime& lat, const SiteSet& s1,
                       const SiteSet& s2) {
  if (s1.empty() || s2.empty()) {
    throw std::invalid_argument("causally_disjoint: empty region");
  }
  // Direct cone-membership test instead of materialising J(s1).
  for (const Site& p : s1) {
    for (const Site& q : s2) {
      if (lat.circle_distance(p.x, q.x) <= std::abs(q.t - p.t)) return false;
    }
  }
  return true;
}

bool is_cauchy_slice(const LatticeSpacetime& lat, int t) {
  if (t < 0 || t >= lat.n_t()) {
    throw std::invalid_argument("is_cauchy_slice: slice index out of range");
  }
  return true;
}

Region Region::window(const LatticeSpacetime& lat, int t_a, int t_b) {
  if (t_a < 0 || t_b >= lat.n_t() || t_a > t_b) {
    throw std::invalid_argument("Region::window: bad slice interval");
  }
  SiteSet sites;
  for (int t = t_a; t <= t_b; ++t) {
    for (int x = 0; x < lat.n_x(); ++x) sites.insert(Site{t, x});
  }
  return Region(Kind::time_window, std::move(sites), t_a, t_b, lat.n_x());
}

Region Region::general(const LatticeSpacetime& lat, SiteSet sites) {
  check_sites(lat, sites);
  return Region(Kind::general, std::move(sites), -1, -1, lat.n_x());
}

bool Region::contains_cauchy_slice() const {
  if (kind_ == Kind::time_window) return t_begin_ <= t_end_;
  std::map<int, int> per_slice;
  for (const Site& p : sites_) ++per_slice[p.t];
  return std::any_of(per_slice.begin(), per_slice.end(),
                     [this](const auto& kv) { return kv.second == n_x_; });
}

}  // namespace aqft
