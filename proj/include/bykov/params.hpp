#pragma once

// Eigenvalue parameters of the two saddle-foci, the global-transition
// parameters, and the derived constants g1, g2, gamma.
//
// The resonances E1 = 2*C1 and C2 = 2*E2 are forced by the zero-trace
// (divergence-free) condition at each equilibrium; they are exact for
// constructed parameter sets and hold to a small relative tolerance for
// spectra estimated from a flow.

#include <cmath>
#include <stdexcept>
#include <string>

#include "bykov/core.hpp"

namespace bykov {

struct SaddleParams {
  double alpha1{0.0};  // angular frequency at sigma1
  double C1{0.0};      // contraction rate at sigma1
  double E1{0.0};      // expansion rate at sigma1 (= 2*C1)
  double alpha2{0.0};  // angular frequency at sigma2
  double E2{0.0};      // expansion rate at sigma2
  double C2{0.0};      // contraction rate at sigma2 (= 2*E2)
};

struct GlobalParams {
  double a{1.0};               // shear of the transition Psi_{1,2}
  double rotation{kPi / 2.0};  // rotation angle of Psi_{2,1}
};

struct ModelParams {
  SaddleParams saddle;
  GlobalParams global;
  double g1{0.0};     // alpha1/E1 > 0
  double g2{0.0};     // -alpha2/E2 < 0
  double gamma{0.0};  // (alpha2*C1)/(alpha1*E2) > 0
};

struct ParamError : std::runtime_error {
  enum class Kind { non_positive, resonance, shear };
  Kind kind;
  std::string name;    // violated parameter or relation
  double residual{0.0};
  ParamError(Kind k, std::string n, double res, const std::string& msg)
      : std::runtime_error(msg), kind(k), name(std::move(n)), residual(res) {}
};

// Validates positivity, a >= 1 and the resonance relations, then derives the
// constants. `resonance_tol` is a relative tolerance; 0 requires exactness
// (the default for user-supplied literals).
inline ModelParams validate_params(double alpha1, double C1, double E1,
                                   double alpha2, double E2, double C2,
                                   double a, double rotation = kPi / 2.0,
                                   double resonance_tol = 0.0) {
  auto positive = [](double v, const char* n) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ParamError(ParamError::Kind::non_positive, n, v,
                       std::string("parameter must be strictly positive: ") + n);
  };
  positive(alpha1, "alpha1");
  positive(C1, "C1");
  positive(E1, "E1");
  positive(alpha2, "alpha2");
  positive(E2, "E2");
  positive(C2, "C2");
  if (!(a >= 1.0) || !std::isfinite(a))
    throw ParamError(ParamError::Kind::shear, "a", a, "shear a must satisfy a >= 1");

  auto resonance = [&](double lhs, double rhs, const char* rel) {
    const double res = std::abs(lhs - rhs);
    if (res > resonance_tol * std::max(std::abs(lhs), std::abs(rhs)))
      throw ParamError(ParamError::Kind::resonance, rel, res,
                       std::string("resonance violated: ") + rel +
                           ", residual " + std::to_string(res));
  };
  resonance(E1, 2.0 * C1, "E1=2C1");
  resonance(C2, 2.0 * E2, "C2=2E2");

  ModelParams p;
  p.saddle = {alpha1, C1, E1, alpha2, E2, C2};
  p.global = {a, rotation};
  p.g1 = alpha1 / E1;
  p.g2 = -alpha2 / E2;
  p.gamma = (alpha2 * C1) / (alpha1 * E2);
  return p;
}

}  // namespace bykov
