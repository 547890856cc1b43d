#include "gsbmi/phi.hpp"

#include <cmath>

#include "gsbmi/errors.hpp"

namespace gsbmi {

PhiGenerator phi_gsb(const GsbParams& params) {
  if (params.a_is_limit() || params.b_is_limit())
    throw LimitCase("phi_gsb: A or B within limit tolerance of 0 for " + describe(params) +
                    "; use the divergence limit forms");
  const double A = params.A();
  const double B = params.B();
  const double beta = params.beta;
  const double p = 1.0 + B / A;  // exponent of the polynomial part
  PhiGenerator phi;
  phi.evaluate = [beta, B, p](double t) { return std::exp(beta * t) + std::pow(t, p) / B; };
  phi.d1 = [beta, B, p](double t) {
    return beta * std::exp(beta * t) + p * std::pow(t, p - 1.0) / B;
  };
  phi.d2 = [beta, B, p](double t) {
    return beta * beta * std::exp(beta * t) + p * (p - 1.0) * std::pow(t, p - 2.0) / B;
  };
  phi.description = "gsb" + describe(params);
  return phi;
}

PhiGenerator phi_itakura_saito() {
  constexpr double inv2pi = 0.15915494309189533577;  // 1/(2 pi)
  PhiGenerator phi;
  phi.evaluate = [](double t) { return -inv2pi * std::log(t); };
  phi.d1 = [](double t) { return -inv2pi / t; };
  phi.d2 = [](double t) { return inv2pi / (t * t); };
  phi.description = "itakura-saito";
  return phi;
}

}  // namespace gsbmi
