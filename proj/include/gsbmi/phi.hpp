#pragma once

#include <functional>
#include <string>

#include "gsbmi/params.hpp"

namespace gsbmi {

/// A strictly convex generator t -> phi(t) with its first two derivatives.
struct PhiGenerator {
  std::function<double(double)> evaluate;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
  std::string description;
};

/// The GSB generator phi(t) = e^{beta t} + t^{1+B/A} / B with analytic
/// derivatives. Throws LimitCase when |A| or |B| is within kLimitTol of zero
/// (those manifolds are handled by the closed-form divergence limits).
PhiGenerator phi_gsb(const GsbParams& params);

/// phi(t) = -log(t)/(2*pi), the Itakura-Saito generator; pairs with index
/// k = 1 in the extended Bregman divergence.
PhiGenerator phi_itakura_saito();

}  // namespace gsbmi
