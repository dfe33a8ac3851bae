#pragma once

#include "subcurv/metric.hpp"

// Default numerical tolerances, grouped so every consumer pulls the same
// values.  Mode-dependent ones reflect the accuracy of the derivative
// backend feeding them.
namespace subcurv::tol {

inline constexpr double pd = 1e-10;        // positive-definiteness floor
inline constexpr double frame = 1e-9;      // frame orthonormality / verticality
inline constexpr double rank_rel = 1e-9;   // rank threshold relative to sigma_max
inline constexpr double align = 1e-10;     // below this, mean curvature counts as zero
inline constexpr double sub = 1e-8;        // submersion metric-compatibility residual
inline constexpr double structure = 1e-8;  // structure-tensor axiom residuals
inline constexpr double inv = 1e-6;        // curvature-invariant consistency
inline constexpr double opt = 1e-6;        // plane-optimizer convergence
inline constexpr double xcheck = 1e-5;     // closed-form vs raw cross-checks
inline constexpr double eq = 1e-6;         // equality detection in the theorems
inline constexpr double gap = 1e-7;        // allowed negative slack in a gap
inline constexpr double lemma = 1e-9;      // algebraic-lemma constraint residual

inline constexpr double curv(DerivMode m) {
    return m == DerivMode::Analytic ? 1e-10 : 1e-6;
}
inline constexpr double oneill(DerivMode m) {
    return m == DerivMode::Analytic ? 1e-7 : 1e-5;
}
inline constexpr double fit(DerivMode m) {
    return m == DerivMode::Analytic ? 1e-7 : 1e-4;
}

}  // namespace subcurv::tol
