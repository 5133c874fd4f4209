#pragma once

namespace aqft::tol {

// Exact linear algebra at tiny dimension (functor laws, CCR/CAR relations).
inline constexpr double exact = 1e-12;

// Green-operator residuals and class-equality checks.
inline constexpr double green = 1e-9;

// Integral identities (formal adjoint, state moment identities).
inline constexpr double adjoint = 1e-10;

// Truncated moments of affine quasi-free states.
inline constexpr double moment = 1e-8;

// Eigenvalue floor for positive-semidefinite checks.
inline constexpr double psd_floor = -1e-10;

// Canonical-form null test on Cauchy data.
inline constexpr double null_data = 1e-10;

// Support leakage allowed (then zeroed) in the time-slice deformation.
inline constexpr double leakage = 1e-12;

// Algebra coefficients below this magnitude are pruned.
inline constexpr double coeff_prune = 1e-14;

}  // namespace aqft::tol
