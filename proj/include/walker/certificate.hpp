#pragma once

#include "walker/rational.hpp"

namespace walker {

/**
 * @brief Growth hypothesis for f'' = Xi(f', f), f(0) = f'(0) = 1: the caller asserts
 * Xi(x, y) >= epsilon x^a y^b on [1, inf)^2.
 */
struct GrowthBound {
  Rational epsilon;
  Rational a;
  Rational b;
};

enum class CertificateVerdict { certified_blowup, not_applicable };

/// Finite-time blowup of f' follows when epsilon > 0, a, b >= 0 and 2a + b >= 3.
inline CertificateVerdict blowup_certificate(const GrowthBound& bound) {
  bool ok = bound.epsilon.sign() > 0 && bound.a.sign() >= 0 && bound.b.sign() >= 0 &&
            Rational(2) * bound.a + bound.b >= Rational(3);
  return ok ? CertificateVerdict::certified_blowup : CertificateVerdict::not_applicable;
}

inline const char* to_string(CertificateVerdict v) {
  return v == CertificateVerdict::certified_blowup ? "certified-blowup" : "not-applicable";
}

} // namespace walker
