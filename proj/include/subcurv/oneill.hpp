#pragma once

#include "subcurv/submersion.hpp"

namespace subcurv {

// Pointwise components of the two fundamental tensors of a submersion,
//   T(E,F) = h nabla_{vE} vF + v nabla_{vE} hF
//   A(E,F) = v nabla_{hE} hF + h nabla_{hE} vF
// in the frames {V_1..V_r}, {h_1..h_s}, together with the fiber mean
// curvature and the divergence-type sum deltaN.
struct ONeillData {
    Tensor3 tH;  // (i,j,l) = g1(T_{Vi} Vj, h_l)      r x r x s
    Tensor3 tV;  // (j,a,i) = g1(T_{Vj} h_a, V_i)     r x s x r
    Tensor3 aV;  // (a,b,i) = g1(A_{ha} h_b, V_i)     s x s x r
    Tensor3 aH;  // (a,j,l) = g1(A_{ha} Vj, h_l)      s x r x s

    Eigen::VectorXd N;  // sum_i T(V_i, V_i), coordinate components
    Eigen::VectorXd H;  // N / r
    double normTH2 = 0, normTV2 = 0, normAV2 = 0, normAH2 = 0;
    double normH2 = 0;
    double deltaN = 0;  // sum_j sum_a g1((nabla_{h_a} T)(V_j,V_j), h_a)
};

// Computes the tensors by differencing the deterministic frame field around
// frames.p (central steps, metric-level derivatives per the setup's mode).
// Also exposes the covariant-derivative contractions of T and A needed by
// the mixed curvature relation.  Keeps a reference to the setup: the setup
// must outlive the engine.
class ONeillEngine {
public:
    // with_derivatives=false skips the nested stencils for nabla-T / nabla-A
    // (deltaN is then NaN and covT/covA must not be called).
    ONeillEngine(const SubmersionSetup& setup, const FramePair& frames,
                 bool with_derivatives = true);

    const ONeillData& data() const { return data_; }
    const FramePair& frames() const { return frames_; }
    const ChristoffelTable& chris() const { return ct_; }

    // g1((nabla_{h_alpha} T)(V_i, V_j), h_beta)
    double covT(int alpha, int i, int j, int beta) const;
    // g1((nabla_{V_i} A)(h_alpha, h_beta), V_j)
    double covA(int i, int alpha, int beta, int j) const;

    // connection coefficients of the frame field:
    // cV(a,i,k) = g1(nabla_{h_a} V_i, V_k), cH(i,a,c) = g1(nabla_{V_i} h_a, h_c)
    double cV(int a, int i, int k) const { return cV_(a, i, k); }
    double cH(int i, int a, int c) const { return cH_(i, a, c); }

private:
    const SubmersionSetup& setup_;
    FramePair frames_;
    ChristoffelTable ct_;
    ONeillData data_;
    bool with_derivs_;

    Tensor3 covVert_;  // (e,k,j) = (nabla_{d/dx_e} V_j)^k
    Tensor3 covHor_;   // (e,k,a)
    Tensor3 cV_, cH_;
    Tensor3 T0_, A0_;  // T(Vi,Vj) and A(ha,hb) at p, coordinate components
    Tensor4 dT_, dA_;  // (e,k,i,j): d/dx_e of the field's k-th component
};

// Convenience wrappers mirroring the operation-level API.
struct TBlocks {
    Tensor3 tH, tV;
};
struct ABlocks {
    Tensor3 aV, aH;
};
struct MeanCurvature {
    Eigen::VectorXd N, H;
    double normH2 = 0;
};

TBlocks compute_T(const SubmersionSetup& setup, const Point& p, const FramePair& frames);
ABlocks compute_A(const SubmersionSetup& setup, const Point& p, const FramePair& frames);
MeanCurvature mean_curvature(const SubmersionSetup& setup, const Point& p,
                             const FramePair& frames);
double delta_N(const SubmersionSetup& setup, const Point& p, const FramePair& frames);
ONeillData oneill_data(const SubmersionSetup& setup, const Point& p,
                       const FramePair& frames);

}  // namespace subcurv
