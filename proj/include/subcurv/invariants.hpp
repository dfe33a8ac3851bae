#pragma once

#include <memory>

#include "subcurv/oneill.hpp"

namespace subcurv {

enum class PlaneSpace { Vertical, Horizontal, Ambient };
enum class CurvModel { Ambient, Induced };
enum class ExtremalMode { Inf, Sup };

// A tangent 2-plane given by two g1-orthonormal coordinate vectors lying in
// the declared subspace.
struct Plane2 {
    PlaneSpace space = PlaneSpace::Ambient;
    Eigen::VectorXd b1, b2;
};

// Scalar-curvature aggregates: tau values are the halves of the frame double
// sums, and tau_M1 = tauV_M1 + tauH_M1 + mixed_sum up to additivity_residual.
struct InvariantBundle {
    double tauV_M1 = 0, tauH_M1 = 0;
    double tauV_ker = 0, tauH_perp = 0;
    double tau_M1 = 0;
    double mixed_sum = 0;  // sum_{a,j} R^{M1}(h_a, V_j, V_j, h_a)
    double additivity_residual = 0;
};

struct ExtremalResult {
    double value = 0;
    Plane2 plane;            // ambient coordinate vectors
    Eigen::VectorXd c1, c2;  // coefficients in the frame of the searched space
};

// delta(2)-type invariants of the fibers and of the horizontal distribution.
struct Delta2Report {
    double tauV_ker = 0, tauH_perp = 0;
    double infK_V = 0, supK_V = 0;  // induced vertical sectional extremes
    double infK_H = 0, supK_H = 0;  // induced horizontal sectional extremes
    double delta2_V = 0;            // tauV_ker - infK_V
    double deltaHat2_V = 0;         // tauV_ker - supK_V
    double deltaHat2_H = 0;         // tauH_perp - supK_H (no inequality attached)
};

// Bundles the ambient curvature, the fundamental-tensor data, and the frame
// at one point so the induced curvatures can be contracted cheaply.  Keeps a
// reference to the setup; the setup must outlive the engine.
class InvariantEngine {
public:
    InvariantEngine(const SubmersionSetup& setup, const FramePair& frames);

    const SubmersionSetup& setup() const { return setup_; }
    const FramePair& frames() const { return oneill_.frames(); }
    const ONeillEngine& oneill() const { return oneill_; }
    const CurvatureTensor& ambient() const { return R_; }
    const Eigen::MatrixXd& g() const { return g_; }

    // ambient R^{M1} on the combined orthonormal frame [V_1..V_r, h_1..h_s]
    double r_m1(int A, int B, int C, int D) const { return Rf_(A, B, C, D); }

    // induced curvature of the fibers: the vertical fundamental equation
    // solved for R^{ker},
    //   R^{ker}(i,j,k,l) = R^{M1}(i,j,k,l) - g(T_ik, T_jl) + g(T_jk, T_il)
    double r_ker(int i, int j, int k, int l) const;

    // induced curvature of the horizontal distribution,
    //   R^{perp}(a,b,c,d) = R^{M1}(a,b,c,d) - 2 g(A_ab, A_cd)
    //                       + g(A_bc, A_ad) - g(A_ac, A_bd)
    double r_perp(int a, int b, int c, int d) const;

    // mixed fundamental equation evaluated from the T/A side:
    //   g((nabla_{h_a}T)(V_i,V_j), h_b) + g((nabla_{V_i}A)(h_a,h_b), V_j)
    //   - g(T_{V_i}h_a, T_{V_j}h_b) + g(A_{h_b}V_j, A_{h_a}V_i)
    // which reproduces R^{M1}(h_a, V_i, V_j, h_b).
    double mixed_rhs(int a, int i, int j, int b) const;

    InvariantBundle scalars() const;

    // full induced tensors on the frame, for plane contractions
    Tensor4 ker_tensor() const;    // r^4
    Tensor4 perp_tensor() const;   // s^4
    Tensor4 frame_tensor(PlaneSpace space, CurvModel model) const;

private:
    const SubmersionSetup& setup_;
    ONeillEngine oneill_;
    CurvatureTensor R_;
    Eigen::MatrixXd g_;
    Tensor4 Rf_;  // ambient tensor in the combined frame
};

// Operation-level wrappers (indices into the vertical/horizontal frames).
double induced_vertical_curvature(const SubmersionSetup& setup, const Point& p,
                                  const FramePair& frames, int i, int j, int k, int l);
double induced_horizontal_curvature(const SubmersionSetup& setup, const Point& p,
                                    const FramePair& frames, int a, int b, int c, int d);
double mixed_curvature(const SubmersionSetup& setup, const Point& p,
                       const FramePair& frames, int a, int i, int j, int b);
InvariantBundle scalar_curvatures(const SubmersionSetup& setup, const Point& p,
                                  const FramePair& frames);

// Sectional curvature of a validated plane.  model = Induced uses the
// fundamental-equation curvature of the plane's distribution (vertical or
// horizontal spaces only); model = Ambient contracts R^{M1} directly.
double sectional_curvature(const SubmersionSetup& setup, const Point& p,
                           const Plane2& plane, CurvModel model);

// Extremize sectional curvature over 2-planes of the given space.  Multistart
// quasi-Newton over a Givens-angle chart of the Grassmannian; deterministic
// lexicographic tie-break on the plane's normalized wedge coordinates.
ExtremalResult extremal_sectional(const SubmersionSetup& setup, const Point& p,
                                  const FramePair& frames, PlaneSpace space,
                                  ExtremalMode mode, CurvModel model);
ExtremalResult extremal_sectional(const InvariantEngine& eng, PlaneSpace space,
                                  ExtremalMode mode, CurvModel model);

Delta2Report delta2_invariants(const InvariantEngine& eng);

// Brute-force extremum over a dense Grassmannian angle grid (test oracle and
// optimizer cross-check); steps subdivisions of [0, pi) per angle.
double dense_grid_extremum(const Tensor4& Rt, int d, ExtremalMode mode, int steps);

}  // namespace subcurv
