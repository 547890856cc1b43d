#pragma once

#include <cmath>
#include <string>

namespace gsbmi {

/// Tolerance below which |A| or |B| triggers the closed-form limit of the
/// divergence (and makes the direct phi generator ill-defined).
inline constexpr double kLimitTol = 1e-7;

/// Tuning triple (alpha, lambda, beta) of the generalized S-Bregman family,
/// with the derived exponents A = 1 + lambda(1-alpha), B = alpha -
/// lambda(1-alpha) and extended-Bregman index k = A. A + B = 1 + alpha holds
/// exactly.
struct GsbParams {
  double alpha = 0.0;
  double lambda = 0.0;
  double beta = 0.0;

  double A() const { return 1.0 + lambda * (1.0 - alpha); }
  double B() const { return alpha - lambda * (1.0 - alpha); }
  double k() const { return A(); }

  // Sub-family tags. Zero tests are exact: the tags classify user-specified
  // parameters, not numerical noise.
  bool is_power_divergence() const { return alpha == 0.0 && beta == 0.0; }
  bool is_s_divergence() const { return beta == 0.0; }
  bool is_dpd() const { return lambda == 0.0 && beta == 0.0; }
  bool is_squared_l2() const { return beta == 0.0 && alpha == 1.0 && lambda == 0.0; }
  bool is_scaled_bed() const { return alpha == -1.0 && lambda == 0.0 && beta != 0.0; }

  bool a_is_limit() const { return std::abs(A()) <= kLimitTol; }
  bool b_is_limit() const { return std::abs(B()) <= kLimitTol; }

  bool operator==(const GsbParams&) const = default;
};

inline std::string describe(const GsbParams& p) {
  return "(alpha=" + std::to_string(p.alpha) + ", lambda=" + std::to_string(p.lambda) +
         ", beta=" + std::to_string(p.beta) + ")";
}

}  // namespace gsbmi
