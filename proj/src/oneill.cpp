#include "subcurv/oneill.hpp"

#include <cmath>
#include <limits>

namespace subcurv {

namespace {

double ip(const Eigen::MatrixXd& g, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return a.dot(g * b);
}

// Coordinate derivatives of the frame field at q: dvert(e,k,j) = d V_j^k / d x_e,
// by central differences of frames_at along each chart direction.
struct FrameStencil {
    Tensor3 dvert, dhor;
};

FrameStencil frame_stencil(const SubmersionSetup& setup, const FramePair& ref,
                           const Point& q) {
    const int n = setup.n(), r = setup.r(), s = setup.s();
    FrameStencil st;
    st.dvert = Tensor3(n, n, r);
    st.dhor = Tensor3(n, n, s);
    for (int e = 0; e < n; ++e) {
        const double h = fd_step1(q[e]);
        Point qp = q, qm = q;
        qp[e] += h;
        qm[e] -= h;
        const FramePair fp = frames_at(setup, qp, ref);
        const FramePair fm = frames_at(setup, qm, ref);
        const double inv2h = 1.0 / (2.0 * h);
        for (int k = 0; k < n; ++k) {
            for (int j = 0; j < r; ++j)
                st.dvert(e, k, j) = (fp.vertical(k, j) - fm.vertical(k, j)) * inv2h;
            for (int a = 0; a < s; ++a)
                st.dhor(e, k, a) = (fp.horizontal(k, a) - fm.horizontal(k, a)) * inv2h;
        }
    }
    return st;
}

// nabla_{d/dx_e} of the j-th column of a frame-field block:
// cov(e,k,j) = d W_j^k / d x_e + sum_a Gamma^k_{e a} W_j^a.
Tensor3 coordinate_cov(const ChristoffelTable& ct, const Tensor3& dW,
                       const Eigen::MatrixXd& W) {
    const int n = dW.dim0(), cols = dW.dim2();
    Tensor3 cov(n, n, cols);
    for (int e = 0; e < n; ++e)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < cols; ++j) {
                double acc = dW(e, k, j);
                for (int a = 0; a < n; ++a) acc += ct.gamma(k, e, a) * W(a, j);
                cov(e, k, j) = acc;
            }
    return cov;
}

Eigen::VectorXd contract_dir(const Tensor3& cov, const Eigen::VectorXd& dir, int j) {
    const int n = cov.dim1();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (int e = 0; e < n; ++e) {
        const double w = dir[e];
        if (w == 0.0) continue;
        for (int k = 0; k < n; ++k) out[k] += w * cov(e, k, j);
    }
    return out;
}

// T(V_i,V_j) and A(h_a,h_b) as coordinate vectors at q, evaluated against the
// smooth frame field determined by ref.
struct FieldsAtQ {
    Tensor3 T;  // (k,i,j)
    Tensor3 A;  // (k,a,b)
};

FieldsAtQ fields_at(const SubmersionSetup& setup, const FramePair& ref, const Point& q) {
    const int n = setup.n(), r = setup.r(), s = setup.s();
    const FramePair fq = frames_at(setup, q, ref);
    const ChristoffelTable cq = christoffel(setup.g1, q);
    const FrameStencil st = frame_stencil(setup, ref, q);
    const Tensor3 covVert = coordinate_cov(cq, st.dvert, fq.vertical);
    const Tensor3 covHor = coordinate_cov(cq, st.dhor, fq.horizontal);

    FieldsAtQ out;
    out.T = Tensor3(n, r, r);
    out.A = Tensor3(n, s, s);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            const Eigen::VectorXd nab = contract_dir(covVert, fq.vertical.col(i), j);
            // horizontal projection in the orthonormal frame
            Eigen::VectorXd proj = Eigen::VectorXd::Zero(n);
            for (int l = 0; l < s; ++l)
                proj += ip(cq.g, nab, fq.horizontal.col(l)) * fq.horizontal.col(l);
            for (int k = 0; k < n; ++k) out.T(k, i, j) = proj[k];
        }
    for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b) {
            const Eigen::VectorXd nab = contract_dir(covHor, fq.horizontal.col(a), b);
            Eigen::VectorXd proj = Eigen::VectorXd::Zero(n);
            for (int i = 0; i < r; ++i)
                proj += ip(cq.g, nab, fq.vertical.col(i)) * fq.vertical.col(i);
            for (int k = 0; k < n; ++k) out.A(k, a, b) = proj[k];
        }
    return out;
}

}  // namespace

ONeillEngine::ONeillEngine(const SubmersionSetup& setup, const FramePair& frames,
                           bool with_derivatives)
    : setup_(setup),
      frames_(frames),
      ct_(christoffel(setup.g1, frames.p)),
      with_derivs_(with_derivatives) {
    const int n = setup.n(), r = setup.r(), s = setup.s();
    const Point& p = frames_.p;
    const Eigen::MatrixXd& g = ct_.g;
    const Eigen::MatrixXd& V = frames_.vertical;
    const Eigen::MatrixXd& Hc = frames_.horizontal;

    const FrameStencil st = frame_stencil(setup_, frames_, p);
    covVert_ = coordinate_cov(ct_, st.dvert, V);
    covHor_ = coordinate_cov(ct_, st.dhor, Hc);

    data_.tH = Tensor3(r, r, s);
    data_.tV = Tensor3(r, s, r);
    data_.aV = Tensor3(s, s, r);
    data_.aH = Tensor3(s, r, s);
    cV_ = Tensor3(s, r, r);
    cH_ = Tensor3(r, s, s);

    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) {
            const Eigen::VectorXd nab = contract_dir(covVert_, V.col(i), j);
            for (int l = 0; l < s; ++l) data_.tH(i, j, l) = ip(g, nab, Hc.col(l));
        }
        for (int a = 0; a < s; ++a) {
            const Eigen::VectorXd nab = contract_dir(covHor_, V.col(i), a);
            for (int k = 0; k < r; ++k) data_.tV(i, a, k) = ip(g, nab, V.col(k));
            for (int c = 0; c < s; ++c) cH_(i, a, c) = ip(g, nab, Hc.col(c));
        }
    }
    for (int a = 0; a < s; ++a) {
        for (int b = 0; b < s; ++b) {
            const Eigen::VectorXd nab = contract_dir(covHor_, Hc.col(a), b);
            for (int i = 0; i < r; ++i) data_.aV(a, b, i) = ip(g, nab, V.col(i));
        }
        for (int j = 0; j < r; ++j) {
            const Eigen::VectorXd nab = contract_dir(covVert_, Hc.col(a), j);
            for (int l = 0; l < s; ++l) data_.aH(a, j, l) = ip(g, nab, Hc.col(l));
            for (int k = 0; k < r; ++k) cV_(a, j, k) = ip(g, nab, V.col(k));
        }
    }

    data_.N = Eigen::VectorXd::Zero(n);
    for (int l = 0; l < s; ++l) {
        double trace = 0;
        for (int i = 0; i < r; ++i) trace += data_.tH(i, i, l);
        data_.N += trace * Hc.col(l);
    }
    data_.H = data_.N / static_cast<double>(r);
    data_.normH2 = ip(g, data_.H, data_.H);

    auto sumsq = [](const Tensor3& t) {
        double acc = 0;
        for (int a = 0; a < t.dim0(); ++a)
            for (int b = 0; b < t.dim1(); ++b)
                for (int c = 0; c < t.dim2(); ++c) acc += t(a, b, c) * t(a, b, c);
        return acc;
    };
    data_.normTH2 = sumsq(data_.tH);
    data_.normTV2 = sumsq(data_.tV);
    data_.normAV2 = sumsq(data_.aV);
    data_.normAH2 = sumsq(data_.aH);

    if (!with_derivs_) {
        data_.deltaN = std::numeric_limits<double>::quiet_NaN();
        return;
    }

    // Coordinate components of T and A at p, then outer central differences of
    // the corresponding fields for the covariant derivatives of T and A.
    T0_ = Tensor3(n, r, r);
    A0_ = Tensor3(n, s, s);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            for (int l = 0; l < s; ++l)
                for (int k = 0; k < n; ++k) T0_(k, i, j) += data_.tH(i, j, l) * Hc(k, l);
    for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b)
            for (int i = 0; i < r; ++i)
                for (int k = 0; k < n; ++k) A0_(k, a, b) += data_.aV(a, b, i) * V(k, i);

    dT_ = Tensor4(n, n, r, r);
    dA_ = Tensor4(n, n, s, s);
    for (int e = 0; e < n; ++e) {
        const double h = fd_step1(p[e]);
        Point qp = p, qm = p;
        qp[e] += h;
        qm[e] -= h;
        const FieldsAtQ fp = fields_at(setup_, frames_, qp);
        const FieldsAtQ fm = fields_at(setup_, frames_, qm);
        const double inv2h = 1.0 / (2.0 * h);
        for (int k = 0; k < n; ++k) {
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j)
                    dT_(e, k, i, j) = (fp.T(k, i, j) - fm.T(k, i, j)) * inv2h;
            for (int a = 0; a < s; ++a)
                for (int b = 0; b < s; ++b)
                    dA_(e, k, a, b) = (fp.A(k, a, b) - fm.A(k, a, b)) * inv2h;
        }
    }

    data_.deltaN = 0;
    for (int j = 0; j < r; ++j)
        for (int a = 0; a < s; ++a) data_.deltaN += covT(a, j, j, a);
}

double ONeillEngine::covT(int alpha, int i, int j, int beta) const {
    const int n = setup_.n(), r = setup_.r();
    const Eigen::VectorXd dir = frames_.horizontal.col(alpha);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    for (int e = 0; e < n; ++e) {
        const double we = dir[e];
        if (we == 0.0) continue;
        for (int k = 0; k < n; ++k) {
            double acc = dT_(e, k, i, j);
            for (int a = 0; a < n; ++a) acc += ct_.gamma(k, e, a) * T0_(a, i, j);
            w[k] += we * acc;
        }
    }
    double out = ip(ct_.g, w, frames_.horizontal.col(beta));
    for (int k = 0; k < r; ++k)
        out -= cV_(alpha, i, k) * data_.tH(k, j, beta) +
               cV_(alpha, j, k) * data_.tH(i, k, beta);
    return out;
}

double ONeillEngine::covA(int i, int alpha, int beta, int j) const {
    const int n = setup_.n(), s = setup_.s();
    const Eigen::VectorXd dir = frames_.vertical.col(i);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    for (int e = 0; e < n; ++e) {
        const double we = dir[e];
        if (we == 0.0) continue;
        for (int k = 0; k < n; ++k) {
            double acc = dA_(e, k, alpha, beta);
            for (int a = 0; a < n; ++a) acc += ct_.gamma(k, e, a) * A0_(a, alpha, beta);
            w[k] += we * acc;
        }
    }
    double out = ip(ct_.g, w, frames_.vertical.col(j));
    for (int c = 0; c < s; ++c)
        out -= cH_(i, alpha, c) * data_.aV(c, beta, j) +
               cH_(i, beta, c) * data_.aV(alpha, c, j);
    return out;
}

namespace {

FramePair local_frames(const SubmersionSetup& setup, const Point& p,
                       const FramePair& frames) {
    if (p.size() == frames.p.size() && p == frames.p) return frames;
    return frames_at(setup, p, frames);
}

}  // namespace

TBlocks compute_T(const SubmersionSetup& setup, const Point& p, const FramePair& frames) {
    const ONeillEngine eng(setup, local_frames(setup, p, frames), false);
    return TBlocks{eng.data().tH, eng.data().tV};
}

ABlocks compute_A(const SubmersionSetup& setup, const Point& p, const FramePair& frames) {
    const ONeillEngine eng(setup, local_frames(setup, p, frames), false);
    return ABlocks{eng.data().aV, eng.data().aH};
}

MeanCurvature mean_curvature(const SubmersionSetup& setup, const Point& p,
                             const FramePair& frames) {
    const ONeillEngine eng(setup, local_frames(setup, p, frames), false);
    return MeanCurvature{eng.data().N, eng.data().H, eng.data().normH2};
}

double delta_N(const SubmersionSetup& setup, const Point& p, const FramePair& frames) {
    const ONeillEngine eng(setup, local_frames(setup, p, frames), true);
    return eng.data().deltaN;
}

ONeillData oneill_data(const SubmersionSetup& setup, const Point& p,
                       const FramePair& frames) {
    const ONeillEngine eng(setup, local_frames(setup, p, frames), true);
    return eng.data();
}

}  // namespace subcurv
