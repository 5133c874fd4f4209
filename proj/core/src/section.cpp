#include "aqft/section.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aqft {

SiteSet Section::support() const {
  SiteSet out;
  for (int t = 0; t < lat_.n_t(); ++t) {
    for (int x = 0; x < lat_.n_x(); ++x) {
      if (values_[index(t, x)] != 0.0) out.insert(Site{t, x});
    }
  }
  return out;
}

bool Section::is_zero() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return v == 0.0; });
}

bool Section::supported_in_slices(int t_lo, int t_hi) const {
  for (int t = 0; t < lat_.n_t(); ++t) {
    if (t >= t_lo && t <= t_hi) continue;
    for (int x = 0; x < lat_.n_x(); ++x) {
      if (values_[index(t, x)] != 0.0) return false;
    }
  }
  return true;
}

std::pair<int, int> Section::support_slice_range() const {
  int lo = -1;
  int hi = -1;
  for (int t = 0; t < lat_.n_t(); ++t) {
    bool nonzero = false;
    for (int x = 0; x < lat_.n_x(); ++x) {
      if (values_[index(t, x)] != 0.0) {
        nonzero = true;
        break;
      }
    }
    if (nonzero) {
      if (lo < 0) lo = t;
      hi = t;
    }
  }
  return {lo, hi};
}

double Section::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double pairing(const Section& a, const Section& b) {
  require_same_lattice(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.values_.size(); ++i) {
    sum += a.values_[i] * b.values_[i];
  }
  return a.lat_.vol() * sum;
}

Section Section::operator+(const Section& other) const {
  require_same_lattice(*this, other);
  Section out(lat_);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    out.values_[i] = values_[i] + other.values_[i];
  }
  return out;
}

Section Section::operator-(const Section& other) const {
  require_same_lattice(*this, other);
  Section out(lat_);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    out.values_[i] = values_[i] - other.values_[i];
  }
  return out;
}

Section Section::operator*(double s) const {
  Section out(lat_);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    out.values_[i] = s * values_[i];
  }
  return out;
}

void require_same_lattice(const Section& a, const Section& b) {
  if (!(a.lattice() == b.lattice())) {
    throw std::invalid_argument("sections live on different lattices");
  }
}

}  // namespace aqft
