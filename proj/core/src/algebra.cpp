#include "aqft/algebra.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

#include "aqft/tolerances.hpp"

namespace aqft {

namespace {

constexpr std::complex<double> kImag{0.0, 1.0};

bool is_normal_ordered(const std::vector<int>& mono, Statistics stats) {
  for (std::size_t k = 1; k < mono.size(); ++k) {
    if (stats == Statistics::bosonic ? mono[k - 1] > mono[k]
                                     : mono[k - 1] >= mono[k]) {
      return false;
    }
  }
  return true;
}

/// Rewrites a generator word into normal order by adjacent transpositions,
/// accumulating the scalar corrections of the commutation relations.
void normal_order_into(const GeneratorBasis& basis, std::vector<int> word,
                       std::complex<double> coeff,
                       AlgebraElement::TermMap& out) {
  std::vector<std::pair<std::vector<int>, std::complex<double>>> work;
  work.emplace_back(std::move(word), coeff);
  const bool fermionic = basis.statistics() == Statistics::fermionic;
  while (!work.empty()) {
    auto [w, c] = std::move(work.back());
    work.pop_back();
    bool sorted = true;
    for (std::size_t k = 0; k + 1 < w.size(); ++k) {
      const int a = w[k];
      const int b = w[k + 1];
      if (a < b) continue;
      if (a == b) {
        if (!fermionic) continue;
        // Psi_i Psi_i = 1/2 tau(e_i, e_i) 1
        std::vector<int> shorter(w);
        shorter.erase(shorter.begin() + k, shorter.begin() + k + 2);
        work.emplace_back(std::move(shorter), c * 0.5 * basis.gram(a, a));
        sorted = false;
        break;
      }
      // a > b out of order: swap and emit the scalar correction.
      std::vector<int> swapped(w);
      std::swap(swapped[k], swapped[k + 1]);
      std::vector<int> shorter(w);
      shorter.erase(shorter.begin() + k, shorter.begin() + k + 2);
      if (fermionic) {
        // Psi_a Psi_b = -Psi_b Psi_a + tau(b, a) 1
        work.emplace_back(std::move(swapped), -c);
        work.emplace_back(std::move(shorter), c * basis.gram(b, a));
      } else {
        // Psi_a Psi_b = Psi_b Psi_a - i tau(b, a) 1
        work.emplace_back(std::move(swapped), c);
        work.emplace_back(std::move(shorter), -c * kImag * basis.gram(b, a));
      }
      sorted = false;
      break;
    }
    if (sorted) {
      auto [it, inserted] = out.try_emplace(std::move(w), c);
      if (!inserted) it->second += c;
    }
  }
}

}  // namespace

GeneratorBasis::GeneratorBasis(Statistics statistics, Eigen::MatrixXd gram)
    : statistics_(statistics), gram_(std::move(gram)) {
  if (gram_.rows() != gram_.cols()) {
    throw std::invalid_argument("GeneratorBasis: gram must be square");
  }
  const double scale = std::max(1.0, gram_.cwiseAbs().maxCoeff());
  const double sign = statistics_ == Statistics::bosonic ? 1.0 : -1.0;
  if ((gram_ + sign * gram_.transpose()).cwiseAbs().maxCoeff() >
      tol::exact * scale) {
    throw std::invalid_argument(
        statistics_ == Statistics::bosonic
            ? "GeneratorBasis: bosonic gram must be antisymmetric"
            : "GeneratorBasis: fermionic gram must be symmetric");
  }
}

bool GeneratorBasis::compatible_with(const GeneratorBasis& other) const {
  return statistics_ == other.statistics_ &&
         gram_.rows() == other.gram_.rows() && gram_ == other.gram_;
}

PhaseBasis::PhaseBasis(const LatticeSpacetime& lat) : lat_(lat) {
  const int n = lat.n_x();
  elements_.reserve(2 * n + 1);
  elements_.emplace_back(lat, 1.0, CauchyData::zero(n));
  for (int x = 0; x < n; ++x) {
    CauchyData d = CauchyData::zero(n);
    d.u[x] = 1.0;
    elements_.emplace_back(lat, 0.0, std::move(d));
  }
  for (int x = 0; x < n; ++x) {
    CauchyData d = CauchyData::zero(n);
    d.u_next[x] = 1.0;
    elements_.emplace_back(lat, 0.0, std::move(d));
  }
  Eigen::MatrixXd gram(2 * n + 1, 2 * n + 1);
  for (int i = 0; i <= 2 * n; ++i) {
    for (int j = 0; j <= 2 * n; ++j) {
      gram(i, j) = tau_canonical(elements_[i], elements_[j]);
    }
  }
  full_ = std::make_shared<GeneratorBasis>(Statistics::bosonic, gram);
  lin_ = std::make_shared<GeneratorBasis>(
      Statistics::bosonic, gram.bottomRightCorner(2 * n, 2 * n));
}

Eigen::VectorXd PhaseBasis::coordinates(const PhaseVector& pv) const {
  if (!(pv.lattice() == lat_)) {
    throw std::invalid_argument("PhaseBasis: lattice mismatch");
  }
  const int n = lat_.n_x();
  Eigen::VectorXd coords(2 * n + 1);
  coords(0) = pv.i_prime();
  for (int x = 0; x < n; ++x) {
    coords(1 + x) = pv.data().u[x];
    coords(1 + n + x) = pv.data().u_next[x];
  }
  return coords;
}

AlgebraElement AlgebraElement::zero(GeneratorBasisPtr basis) {
  return AlgebraElement(std::move(basis));
}

AlgebraElement AlgebraElement::unit(GeneratorBasisPtr basis) {
  return scalar(std::move(basis), 1.0);
}

AlgebraElement AlgebraElement::scalar(GeneratorBasisPtr basis, Complex value) {
  AlgebraElement out(std::move(basis));
  out.add_term({}, value);
  return out;
}

AlgebraElement AlgebraElement::generator(GeneratorBasisPtr basis, int index) {
  if (index < 0 || index >= basis->size()) {
    throw std::invalid_argument(
        "AlgebraElement: generator index out of range");
  }
  AlgebraElement out(std::move(basis));
  out.add_term({index}, 1.0);
  return out;
}

AlgebraElement AlgebraElement::linear_combination(
    GeneratorBasisPtr basis, const Eigen::VectorXd& coeffs) {
  if (coeffs.size() != basis->size()) {
    throw std::invalid_argument("AlgebraElement: coefficient size mismatch");
  }
  AlgebraElement out(std::move(basis));
  for (int i = 0; i < coeffs.size(); ++i) {
    out.add_term({i}, coeffs(i));
  }
  return out;
}

int AlgebraElement::degree() const {
  int d = 0;
  for (const auto& [mono, coeff] : terms_) {
    d = std::max(d, static_cast<int>(mono.size()));
  }
  return d;
}

AlgebraElement::Complex AlgebraElement::scalar_part() const {
  auto it = terms_.find({});
  return it == terms_.end() ? Complex{0.0, 0.0} : it->second;
}

void AlgebraElement::add_term(const Monomial& mono, Complex coeff) {
  assert(is_normal_ordered(mono, basis_->statistics()));
  if (std::abs(coeff) < tol::coeff_prune) return;
  auto [it, inserted] = terms_.try_emplace(mono, coeff);
  if (!inserted) {
    it->second += coeff;
    if (std::abs(it->second) < tol::coeff_prune) terms_.erase(it);
  }
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& other) const {
  if (!basis_->compatible_with(*other.basis_)) {
    throw std::invalid_argument("AlgebraElement: basis mismatch");
  }
  AlgebraElement out = *this;
  for (const auto& [mono, coeff] : other.terms_) out.add_term(mono, coeff);
  return out;
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& other) const {
  return *this + other * Complex{-1.0, 0.0};
}

AlgebraElement AlgebraElement::operator*(Complex c) const {
  AlgebraElement out(basis_);
  for (const auto& [mono, coeff] : terms_) out.add_term(mono, c * coeff);
  return out;
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& other) const {
  if (!basis_->compatible_with(*other.basis_)) {
    throw std::invalid_argument("mul: statistics or basis mismatch");
  }
  TermMap raw;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : other.terms_) {
      if (static_cast<int>(ma.size() + mb.size()) > max_monomial_degree) {
        throw std::invalid_argument("mul: degree cap exceeded");
      }
      std::vector<int> word(ma);
      word.insert(word.end(), mb.begin(), mb.end());
      normal_order_into(*basis_, std::move(word), ca * cb, raw);
    }
  }
  AlgebraElement out(basis_);
  for (auto& [mono, coeff] : raw) out.add_term(mono, coeff);
  return out;
}

AlgebraElement mul(const AlgebraElement& x, const AlgebraElement& y) {
  return x * y;
}

AlgebraElement AlgebraElement::star() const {
  TermMap raw;
  for (const auto& [mono, coeff] : terms_) {
    Monomial reversed(mono.rbegin(), mono.rend());
    normal_order_into(*basis_, std::move(reversed), std::conj(coeff), raw);
  }
  AlgebraElement out(basis_);
  for (auto& [mono, coeff] : raw) out.add_term(mono, coeff);
  return out;
}

AlgebraElement star(const AlgebraElement& x) { return x.star(); }

double AlgebraElement::max_coefficient_delta(
    const AlgebraElement& other) const {
  double m = 0.0;
  for (const auto& [mono, coeff] : terms_) {
    auto it = other.terms_.find(mono);
    const Complex c = it == other.terms_.end() ? Complex{0.0} : it->second;
    m = std::max(m, std::abs(coeff - c));
  }
  for (const auto& [mono, coeff] : other.terms_) {
    if (terms_.find(mono) == terms_.end()) {
      m = std::max(m, std::abs(coeff));
    }
  }
  return m;
}

std::string AlgebraElement::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  char buf[64];
  for (const auto& [mono, coeff] : terms_) {
    if (!out.empty()) out += " + ";
    std::snprintf(buf, sizeof(buf), "(%.12g%+.12gi)", coeff.real(),
                  coeff.imag());
    out += buf;
    for (int idx : mono) {
      std::snprintf(buf, sizeof(buf), " P%d", idx);
      out += buf;
    }
  }
  return out;
}

AlgebraElement generator(const PhaseVector& pv, const PhaseBasis& basis) {
  return AlgebraElement::linear_combination(basis.algebra_basis(),
                                            basis.coordinates(pv));
}

AlgebraElement functor_map(const Eigen::MatrixXd& map,
                           const AlgebraElement& x) {
  const GeneratorBasis& basis = *x.basis();
  const int n = basis.size();
  if (map.rows() != n || map.cols() != n) {
    throw std::invalid_argument("functor_map: map size mismatch");
  }
  const Eigen::MatrixXd& gram = basis.gram_matrix();
  const double scale = std::max(1.0, gram.cwiseAbs().maxCoeff());
  if ((map.transpose() * gram * map - gram).cwiseAbs().maxCoeff() >
      tol::adjoint * scale) {
    throw std::invalid_argument(
        "functor_map: map does not preserve the gram");
  }
  AlgebraElement out = AlgebraElement::zero(x.basis());
  for (const auto& [mono, coeff] : x.terms()) {
    AlgebraElement term = AlgebraElement::scalar(x.basis(), coeff);
    for (int idx : mono) {
      term = term * AlgebraElement::linear_combination(x.basis(),
                                                       map.col(idx));
    }
    out = out + term;
  }
  return out;
}

AlgebraElement kappa(const AlgebraElement& x, const PhaseBasis& basis) {
  if (x.basis()->statistics() != Statistics::bosonic) {
    throw std::invalid_argument("kappa: bosonic statistics required");
  }
  if (!x.basis()->compatible_with(*basis.algebra_basis())) {
    throw std::invalid_argument("kappa: element not over the full basis");
  }
  AlgebraElement out = AlgebraElement::zero(basis.linear_basis());
  for (const auto& [mono, coeff] : x.terms()) {
    // Psi(e_0) -> 1, Psi(e_i) -> Psi_lin(e_{i-1}); dropping the central
    // index and shifting keeps the word normal-ordered.
    std::vector<int> image;
    image.reserve(mono.size());
    for (int idx : mono) {
      if (idx == 0) continue;
      image.push_back(idx - 1);
    }
    out.add_term(image, coeff);
  }
  return out;
}

}  // namespace aqft
