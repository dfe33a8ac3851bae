#pragma once

#include <string>
#include <utility>
#include <vector>

#include "subcurv/invariants.hpp"
#include "subcurv/space_forms.hpp"

namespace subcurv {

// The algebraic lemma behind the curvature estimates: for k > 2 reals with
// (sum a_i)^2 = (k-1)(sum a_i^2 + b) one has 2 a_1 a_2 >= b, with equality
// exactly when a_1 + a_2 = a_3 = ... = a_k.
struct LemmaInstance {
    int k = 0;
    Eigen::VectorXd a;
    double b = 0;
};

struct LemmaResult {
    double gap = 0;                 // 2 a_1 a_2 - b
    double condition_residual = 0;  // max_j |a_1 + a_2 - a_j|
    bool equality = false;
};

LemmaResult chen_lemma_gap(const LemmaInstance& inst, double lemma_tol = tol::lemma);

// Tolerance knobs threaded through the theorem checkers; negative fit_tol
// falls back to the derivative mode's default.
struct CheckTols {
    double gap_tol = tol::gap;
    double eq_tol = tol::eq;
    double xcheck_tol = tol::xcheck;
    double align_tol = tol::align;
    double fit_tol = -1;
};

struct EqualityCondition {
    std::string label;
    double residual = 0;
    bool pass = false;
};

// One verified inequality.  gap >= 0 means the bound holds (gap is lhs - rhs
// for the fiber estimates and rhs - lhs for the mixed estimate, so that the
// sign convention is uniform); terms is a named breakdown of every quantity
// entering the two sides, in a fixed order.
struct InequalityReport {
    std::string theorem;
    Point point;
    std::vector<Eigen::VectorXd> plane_vectors;  // adapted V1,V2 (and h1,h2)
    double lhs = 0, rhs = 0, gap = 0;
    bool holds = false, equality = false;
    std::vector<EqualityCondition> conditions;
    std::vector<std::pair<std::string, double>> terms;
    std::string note;

    double worst_condition_residual() const;
};

// tau_V^ker - K_V^ker(Pi) >= tau_V^M1 - K_V^M1(Pi) - r^2(r-2)/(2(r-1)) |H|^2,
// with the model-specific closed right-hand sides when a space form model is
// supplied (the closed value is reported after cross-checking it against the
// frame computation).
InequalityReport check_vertical(const SubmersionSetup& setup, const Point& p,
                                const Plane2& pi, const SpaceFormModel* model = nullptr,
                                const CheckTols& tols = {});

// deltaHat2 version: tau_V^ker - sup K_V^ker >= tau_V^M1 - sup K_V^M1
//   - r^2(r-2)/(2(r-1)) |H|^2, both suprema over vertical 2-planes.
InequalityReport check_delta_hat(const SubmersionSetup& setup, const Point& p,
                                 const SpaceFormModel* model = nullptr,
                                 const CheckTols& tols = {});

// Mixed estimate coupling both distributions: the ambient combination
// tau_V^M1 - K_V^M1(Pi) + tau_H^M1 - K_H^M1(P) + sum R^M1(h_i,V_j,V_j,h_i)
// is bounded by fiber, base, and O'Neill terms.
InequalityReport check_horizontal_vertical(const SubmersionSetup& setup, const Point& p,
                                           const Plane2& pi, const Plane2& pp,
                                           const SpaceFormModel* model = nullptr,
                                           const CheckTols& tols = {});

// The equality conditions of the fiber estimate, one residual per family.
// Families referring to a distinguished horizontal direction use H/|H|; when
// H vanishes every horizontal frame direction is tried and the best sweep is
// reported.  Pi is rotated so the distinguished T-component of (V1, V2)
// vanishes before the conditions are read off.
std::vector<EqualityCondition> equality_diagnostics(const SubmersionSetup& setup,
                                                    const Point& p, const Plane2& pi,
                                                    const CheckTols& tols = {});

}  // namespace subcurv
