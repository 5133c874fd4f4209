#pragma once

// Shared test fixtures and independent oracles. Everything here stays
// implementation-agnostic: reachability by breadth-first search, Wick sums
// by explicit pairing enumeration, stencils evaluated longhand.

#include <complex>
#include <functional>
#include <vector>

#include "aqft/fields.hpp"
#include "aqft/lattice.hpp"
#include "aqft/rng.hpp"
#include "aqft/section.hpp"

namespace aqft::testing {

inline LatticeSpacetime default_lattice() {
  return LatticeSpacetime(16, 64, 1.0, 0.5, 1.0);
}

inline Section random_interior_section(const LatticeSpacetime& lat, Rng& rng,
                                       int t_lo, int t_hi, int sites = 5) {
  Section s(lat);
  for (int k = 0; k < sites; ++k) {
    s.at(t_lo + rng.index(t_hi - t_lo + 1), rng.index(lat.n_x())) =
        rng.signed_unit();
  }
  return s;
}

/// Dense random section over every site of [t_lo, t_hi].
inline Section random_dense_section(const LatticeSpacetime& lat, Rng& rng,
                                    int t_lo, int t_hi) {
  Section s(lat);
  for (int t = t_lo; t <= t_hi; ++t) {
    for (int x = 0; x < lat.n_x(); ++x) s.at(t, x) = rng.signed_unit();
  }
  return s;
}

inline DualObservable random_observable(const LatticeSpacetime& lat, Rng& rng,
                                        int t_lo, int t_hi, int sites = 4) {
  return DualObservable(random_interior_section(lat, rng, t_lo, t_hi, sites),
                        random_interior_section(lat, rng, t_lo, t_hi, sites));
}

/// Breadth-first reachability oracle for the one-site-per-step cone.
inline SiteSet bfs_cone(const LatticeSpacetime& lat, const SiteSet& start,
                        int dir) {
  SiteSet visited = start;
  SiteSet frontier = start;
  while (!frontier.empty()) {
    SiteSet next;
    for (const Site& p : frontier) {
      const int t = p.t + dir;
      if (t < 0 || t >= lat.n_t()) continue;
      for (int dx : {-1, 0, 1}) {
        const Site q{t, lat.wrap_x(p.x + dx)};
        if (visited.insert(q).second) next.insert(q);
      }
    }
    frontier = std::move(next);
  }
  return visited;
}

/// Longhand stencil of the discrete wave operator at one site.
inline double stencil_at(const Section& s, int t, int x) {
  const LatticeSpacetime& lat = s.lattice();
  const double idt2 = 1.0 / (lat.dt() * lat.dt());
  const double idx2 = 1.0 / (lat.dx() * lat.dx());
  return (s(t + 1, x) - 2.0 * s(t, x) + s(t - 1, x)) * idt2 -
         (s(t, x + 1) - 2.0 * s(t, x) + s(t, x - 1)) * idx2 +
         lat.mass() * lat.mass() * s(t, x);
}

/// Independent Wick oracle: enumerates perfect pairings of {0..n-1}
/// explicitly as index arrays, computing fermionic parity by counting
/// crossings, with no shared code with the library evaluation.
inline std::complex<double> brute_force_pairing_sum(
    int n, bool fermionic,
    const std::function<std::complex<double>(int, int)>& two_point) {
  if (n == 0) return {1.0, 0.0};
  if (n % 2 != 0) return {0.0, 0.0};
  std::vector<std::pair<int, int>> pairs;
  std::vector<bool> used(n, false);
  std::complex<double> total{0.0, 0.0};
  std::function<void()> recurse = [&]() {
    int first = -1;
    for (int i = 0; i < n; ++i) {
      if (!used[i]) {
        first = i;
        break;
      }
    }
    if (first < 0) {
      std::complex<double> value{1.0, 0.0};
      for (const auto& [a, b] : pairs) value *= two_point(a, b);
      if (fermionic) {
        // Parity = number of crossing pairs (a < c < b < d).
        int crossings = 0;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
          for (std::size_t j = i + 1; j < pairs.size(); ++j) {
            const auto& [a, b] = pairs[i];
            const auto& [c, d] = pairs[j];
            if ((a < c && c < b && b < d) || (c < a && a < d && d < b)) {
              ++crossings;
            }
          }
        }
        if (crossings % 2 != 0) value = -value;
      }
      total += value;
      return;
    }
    used[first] = true;
    for (int j = first + 1; j < n; ++j) {
      if (used[j]) continue;
      used[j] = true;
      pairs.emplace_back(first, j);
      recurse();
      pairs.pop_back();
      used[j] = false;
    }
    used[first] = false;
  };
  recurse();
  return total;
}

}  // namespace aqft::testing
