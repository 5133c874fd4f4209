#include "aqft/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "aqft/tolerances.hpp"

namespace aqft {

namespace {

using Complex = std::complex<double>;

// Wick pairing sum over an index word; entry(i, j) supplies the two-point
// value of positions i < j.
Complex wick_sum(const std::vector<int>& word, bool fermionic,
                 const std::function<Complex(int, int)>& entry) {
  const int n = static_cast<int>(word.size());
  if (n == 0) return Complex{1.0, 0.0};
  if (n % 2 != 0) return Complex{0.0, 0.0};
  // Positions still unpaired are tracked in a small index list.
  std::vector<int> open(n);
  for (int i = 0; i < n; ++i) open[i] = i;
  std::function<Complex(std::vector<int>&)> rec =
      [&](std::vector<int>& rest) -> Complex {
    if (rest.empty()) return Complex{1.0, 0.0};
    Complex total{0.0, 0.0};
    const int first = rest.front();
    for (std::size_t j = 1; j < rest.size(); ++j) {
      std::vector<int> next;
      next.reserve(rest.size() - 2);
      for (std::size_t k = 1; k < rest.size(); ++k) {
        if (k != j) next.push_back(rest[k]);
      }
      Complex factor = entry(first, rest[j]);
      if (fermionic && (j % 2 == 0)) factor = -factor;
      total += factor * rec(next);
    }
    return total;
  };
  return rec(open);
}

}  // namespace

QuasiFreeState::QuasiFreeState(GeneratorBasisPtr basis,
                               Eigen::MatrixXcd omega2)
    : basis_(std::move(basis)), omega2_(std::move(omega2)) {
  const int n = basis_->size();
  if (omega2_.rows() != n || omega2_.cols() != n) {
    throw std::invalid_argument("QuasiFreeState: omega2 size mismatch");
  }
  const Eigen::MatrixXd& gram = basis_->gram_matrix();
  const double scale =
      std::max({1.0, gram.cwiseAbs().maxCoeff(),
                omega2_.cwiseAbs().maxCoeff()});
  if (basis_->statistics() == Statistics::bosonic) {
    const Eigen::MatrixXd mu = omega2_.real();
    if ((mu - mu.transpose()).cwiseAbs().maxCoeff() > tol::adjoint * scale) {
      throw std::invalid_argument(
          "QuasiFreeState: bosonic real part must be symmetric");
    }
    if ((omega2_.imag() - 0.5 * gram).cwiseAbs().maxCoeff() >
        tol::adjoint * scale) {
      throw std::invalid_argument(
          "QuasiFreeState: imaginary part must equal gram/2");
    }
  } else {
    if ((omega2_ + omega2_.transpose() - gram.cast<Complex>())
            .cwiseAbs()
            .maxCoeff() > tol::adjoint * scale) {
      throw std::invalid_argument(
          "QuasiFreeState: fermionic omega2 + omega2^T must equal the gram");
    }
    if ((omega2_ - omega2_.adjoint()).cwiseAbs().maxCoeff() >
        tol::adjoint * scale) {
      throw std::invalid_argument(
          "QuasiFreeState: fermionic omega2 must be hermitian");
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(omega2_);
  min_eigenvalue_ = solver.eigenvalues().minCoeff();
  if (min_eigenvalue_ < tol::psd_floor * scale) {
    throw std::invalid_argument(
        "QuasiFreeState: two-point matrix has a negative eigenvalue");
  }
}

QuasiFreeState QuasiFreeState::fermionic_from_gram(GeneratorBasisPtr basis) {
  if (basis->statistics() != Statistics::fermionic) {
    throw std::invalid_argument(
        "fermionic_from_gram: fermionic basis required");
  }
  Eigen::MatrixXcd omega2 = 0.5 * basis->gram_matrix().cast<Complex>();
  return QuasiFreeState(std::move(basis), std::move(omega2));
}

Complex QuasiFreeState::evaluate(const AlgebraElement& x) const {
  if (!basis_->compatible_with(*x.basis())) {
    throw std::invalid_argument("evaluate: statistics or basis mismatch");
  }
  const bool fermionic = basis_->statistics() == Statistics::fermionic;
  Complex total{0.0, 0.0};
  for (const auto& [mono, coeff] : x.terms()) {
    total += coeff * wick_sum(mono, fermionic, [&](int i, int j) {
      return omega2_(mono[i], mono[j]);
    });
  }
  return total;
}

Complex QuasiFreeState::moment_of_vectors(
    std::span<const Eigen::VectorXd> vectors) const {
  const bool fermionic = basis_->statistics() == Statistics::fermionic;
  const int n = static_cast<int>(vectors.size());
  std::vector<Eigen::VectorXcd> cvec(n);
  for (int i = 0; i < n; ++i) {
    if (vectors[i].size() != basis_->size()) {
      throw std::invalid_argument("moment_of_vectors: size mismatch");
    }
    cvec[i] = vectors[i].cast<Complex>();
  }
  Eigen::MatrixXcd pair_values(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      pair_values(i, j) = (cvec[i].transpose() * omega2_ * cvec[j]).value();
    }
  }
  std::vector<int> word(n);
  for (int i = 0; i < n; ++i) word[i] = i;
  return wick_sum(word, fermionic,
                  [&](int i, int j) { return pair_values(i, j); });
}

QuasiFreeState ground_state(const PhaseBasis& basis) {
  const LatticeSpacetime& lat = basis.lattice();
  const int n = lat.n_x();
  const double dt = lat.dt();
  const double dx = lat.dx();
  const double m = lat.mass();
  // Per-mode dispersion of the leapfrog step: cos theta_k = 1 - dt^2 w_k^2/2
  // with w_k^2 = m^2 + (4/dx^2) sin^2(pi k / n_x). All modes must be
  // oscillatory for a vacuum to exist.
  Eigen::MatrixXcd amplitudes(2 * n, n);
  for (int k = 0; k < n; ++k) {
    const double s = std::sin(std::numbers::pi * k / n);
    const double wk2 = m * m + 4.0 / (dx * dx) * s * s;
    const double c = 1.0 - 0.5 * dt * dt * wk2;
    if (c <= -1.0) {
      throw std::invalid_argument(
          "ground_state: mode beyond the stability threshold (dt too large)");
    }
    const double theta = std::acos(c);
    const double norm = std::sqrt(n * dt / (2.0 * dx * std::sin(theta)));
    for (int x = 0; x < n; ++x) {
      const double phase = 2.0 * std::numbers::pi * k * x / n;
      const Complex mode = std::polar(norm / n, phase);
      // u-impulse generators carry -(dx/dt) e^{i theta} times the mode,
      // u_next-impulse generators +(dx/dt) times the mode.
      amplitudes(x, k) = -(dx / dt) * mode * std::polar(1.0, theta);
      amplitudes(n + x, k) = (dx / dt) * mode;
    }
  }
  Eigen::MatrixXcd omega2 = amplitudes * amplitudes.adjoint();
  return QuasiFreeState(basis.linear_basis(), std::move(omega2));
}

InducedAffineState::InducedAffineState(QuasiFreeState base, AffineOperator op,
                                       PhaseBasis basis)
    : base_(std::move(base)), op_(std::move(op)), basis_(std::move(basis)) {
  if (!(op_.lattice() == basis_.lattice())) {
    throw std::invalid_argument("InducedAffineState: lattice mismatch");
  }
  if (!base_.basis()->compatible_with(*basis_.linear_basis())) {
    throw std::invalid_argument(
        "InducedAffineState: base state not over the linear basis");
  }
}

Complex InducedAffineState::evaluate(const AlgebraElement& x) const {
  return base_.evaluate(kappa(x, basis_));
}

Complex InducedAffineState::n_point(
    std::span<const DualObservable> obs) const {
  const int n = static_cast<int>(obs.size());
  if (n == 0) return Complex{1.0, 0.0};
  // Classified coordinates split into the central scalar and the linear
  // block; the moment is the sum over partitions into pairs and singlets.
  std::vector<double> central(n);
  Eigen::MatrixXcd pair_values(n, n);
  std::vector<Eigen::VectorXcd> lin(n);
  const int dim = basis_.linear_basis()->size();
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd coords =
        basis_.coordinates(classify(obs[i], op_));
    central[i] = coords(0);
    lin[i] = coords.tail(dim).cast<Complex>();
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      pair_values(i, j) =
          (lin[i].transpose() * base_.omega2() * lin[j]).value();
    }
  }
  // Recursive sum: the first open position is either a singlet or paired
  // with a later one.
  std::function<Complex(std::vector<int>&)> rec =
      [&](std::vector<int>& rest) -> Complex {
    if (rest.empty()) return Complex{1.0, 0.0};
    const int first = rest.front();
    std::vector<int> tail(rest.begin() + 1, rest.end());
    Complex total = central[first] * rec(tail);
    for (std::size_t j = 0; j < tail.size(); ++j) {
      std::vector<int> next;
      next.reserve(tail.size() - 1);
      for (std::size_t k = 0; k < tail.size(); ++k) {
        if (k != j) next.push_back(tail[k]);
      }
      total += pair_values(first, tail[j]) * rec(next);
    }
    return total;
  };
  std::vector<int> open(n);
  for (int i = 0; i < n; ++i) open[i] = i;
  return rec(open);
}

std::vector<std::vector<std::vector<int>>> set_partitions(int n) {
  if (n < 1 || n > 8) {
    throw std::invalid_argument("set_partitions: n out of range [1, 8]");
  }
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<std::vector<int>> current;
  // Index-based loop: the recursion grows `current`, which would invalidate
  // range-for iterators.
  std::function<void(int)> place = [&](int element) {
    if (element > n) {
      out.push_back(current);
      return;
    }
    const std::size_t blocks = current.size();
    for (std::size_t i = 0; i < blocks; ++i) {
      current[i].push_back(element);
      place(element + 1);
      current[i].pop_back();
    }
    current.push_back({element});
    place(element + 1);
    current.pop_back();
  };
  place(1);
  return out;
}

std::map<std::vector<int>, Complex> cumulants_from_moments(
    int n, const MomentFn& moments) {
  if (n < 1 || n > 8) {
    throw std::invalid_argument("cumulants_from_moments: n out of range");
  }
  std::map<std::vector<int>, Complex> cumulants;
  // Subsets by increasing size so that proper partitions only touch
  // already-known cumulants.
  std::vector<std::vector<int>> subsets;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> subset;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) subset.push_back(i + 1);
    }
    subsets.push_back(std::move(subset));
  }
  std::sort(subsets.begin(), subsets.end(),
            [](const auto& a, const auto& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  for (const auto& subset : subsets) {
    const int size = static_cast<int>(subset.size());
    Complex value = moments(subset);
    for (const auto& partition : set_partitions(size)) {
      if (partition.size() <= 1) continue;  // the full block is the unknown
      Complex product{1.0, 0.0};
      for (const auto& block : partition) {
        std::vector<int> mapped;
        mapped.reserve(block.size());
        for (int pos : block) mapped.push_back(subset[pos - 1]);
        product *= cumulants.at(mapped);
      }
      value -= product;
    }
    cumulants.emplace(subset, value);
  }
  return cumulants;
}

std::vector<MomentRow> truncated_moments(const InducedAffineState& state,
                                         std::span<const DualObservable> obs,
                                         int n_max) {
  if (n_max < 1 || n_max > 8) {
    throw std::invalid_argument("truncated_moments: n_max out of range");
  }
  if (static_cast<int>(obs.size()) < n_max) {
    throw std::invalid_argument("truncated_moments: not enough observables");
  }
  const MomentFn moment_fn = [&](const std::vector<int>& tuple) -> Complex {
    std::vector<DualObservable> args;
    args.reserve(tuple.size());
    for (int i : tuple) args.push_back(obs[i - 1]);
    return state.n_point(args);
  };
  const auto cumulants = cumulants_from_moments(n_max, moment_fn);
  std::vector<MomentRow> rows;
  for (int n = 1; n <= n_max; ++n) {
    std::vector<int> prefix(n);
    for (int i = 0; i < n; ++i) prefix[i] = i + 1;
    MomentRow row;
    row.n = n;
    row.moment = moment_fn(prefix);
    row.truncated = cumulants.at(prefix);
    // Scale against the partition sum's own magnitudes.
    double magnitude = std::abs(row.moment);
    for (const auto& partition : set_partitions(n)) {
      if (partition.size() <= 1) continue;
      Complex product{1.0, 0.0};
      for (const auto& block : partition) {
        product *= cumulants.at(block);
      }
      magnitude = std::max(magnitude, std::abs(product));
    }
    row.scale = std::max(1.0, magnitude);
    rows.push_back(row);
  }
  return rows;
}

QuasiFreeCheckReport check_affine_quasifree(
    const InducedAffineState& state, std::span<const DualObservable> samples,
    int n_max) {
  if (n_max < 3 || n_max > 8) {
    throw std::invalid_argument("check_affine_quasifree: n_max out of range");
  }
  QuasiFreeCheckReport report;
  for (int n = 3; n <= n_max; ++n) {
    if (static_cast<int>(samples.size()) < n) break;
    QuasiFreeCheckRow row;
    row.n = n;
    const int windows =
        std::min<int>(3, static_cast<int>(samples.size()) - n + 1);
    for (int w = 0; w < windows; ++w) {
      const auto rows = truncated_moments(state, samples.subspan(w), n);
      const MomentRow& last = rows.back();
      row.max_abs_truncated =
          std::max(row.max_abs_truncated, std::abs(last.truncated));
      row.scale = std::max(row.scale, last.scale);
    }
    row.passed = row.max_abs_truncated <= tol::moment * row.scale;
    report.passed = report.passed && row.passed;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace aqft
