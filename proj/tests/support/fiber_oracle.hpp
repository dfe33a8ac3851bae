#pragma once

// Intrinsic curvature of the fiber through frames.p, computed from scratch:
// the fiber is parametrized by vertical coordinates t -> q(t) = p + Ev t +
// Eh c(t) with F(q(t)) = F(p) solved by Newton, the induced metric
// G(t) = D(t)^T g1(q(t)) D(t) is sampled on a difference stencil, and the
// Riemann tensor of G is assembled directly.  Shares no code with the
// engine's fundamental-equation path.

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>

#include "subcurv/submersion.hpp"

namespace testsup {

class FiberChart {
public:
    FiberChart(const subcurv::SubmersionSetup& setup, const subcurv::FramePair& frames)
        : setup_(setup), frames_(frames), y0_(setup.map.value(frames.p)) {}

    // induced metric in the vertical chart at parameter t
    Eigen::MatrixXd metric(const Eigen::VectorXd& t) const {
        const auto& Ev = frames_.vertical;
        const auto& Eh = frames_.horizontal;
        const int s = frames_.s();
        Eigen::VectorXd c = Eigen::VectorXd::Zero(s);
        subcurv::Point q = frames_.p + Ev * t;
        for (int iter = 0; iter < 50; ++iter) {
            const Eigen::VectorXd resid = setup_.map.value(q) - y0_;
            if (resid.lpNorm<Eigen::Infinity>() < 1e-14) break;
            const Eigen::MatrixXd Jh = setup_.map.jacobian(q) * Eh;
            c -= Jh.colPivHouseholderQr().solve(resid);
            q = frames_.p + Ev * t + Eh * c;
            if (iter == 49) throw std::runtime_error("fiber chart: Newton stalled");
        }
        const Eigen::MatrixXd J = setup_.map.jacobian(q);
        const Eigen::MatrixXd Jh = J * Eh;
        const Eigen::MatrixXd dc = -Jh.colPivHouseholderQr().solve(J * Ev);
        const Eigen::MatrixXd D = Ev + Eh * dc;
        const Eigen::MatrixXd g = subcurv::metric_at(setup_.g1, q).g;
        return D.transpose() * g * D;
    }

private:
    const subcurv::SubmersionSetup& setup_;
    subcurv::FramePair frames_;
    Eigen::VectorXd y0_;
};

// Riemann tensor (fully covariant, K = R(X,Y,Y,X) sign) of a sampled metric
// at t = 0, central differences with step h.
inline subcurv::Tensor4 sampled_riemann(
    const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& G, int d,
    double h = 6e-4) {
    using subcurv::Tensor3;
    using subcurv::Tensor4;
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(d);
    const Eigen::MatrixXd G0 = G(zero);
    const Eigen::MatrixXd Gi = G0.inverse();

    const auto at = [&](int k, double sk, int l, double sl) {
        Eigen::VectorXd t = zero;
        t[k] += sk * h;
        t[l] += sl * h;
        return G(t);
    };

    Tensor3 d1(d, d, d);
    Tensor4 d2(d, d, d, d);
    for (int k = 0; k < d; ++k) {
        const Eigen::MatrixXd Gp = at(k, 1, k, 0), Gm = at(k, -1, k, 0);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                d1(k, i, j) = (Gp(i, j) - Gm(i, j)) / (2 * h);
                d2(k, k, i, j) = (Gp(i, j) - 2 * G0(i, j) + Gm(i, j)) / (h * h);
            }
        for (int l = k + 1; l < d; ++l) {
            const Eigen::MatrixXd App = at(k, 1, l, 1), Apm = at(k, 1, l, -1);
            const Eigen::MatrixXd Amp = at(k, -1, l, 1), Amm = at(k, -1, l, -1);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    const double v =
                        (App(i, j) - Apm(i, j) - Amp(i, j) + Amm(i, j)) / (4 * h * h);
                    d2(k, l, i, j) = v;
                    d2(l, k, i, j) = v;
                }
        }
    }

    Tensor3 gam(d, d, d);
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double acc = 0;
                for (int a = 0; a < d; ++a)
                    acc += Gi(k, a) * (d1(i, a, j) + d1(j, a, i) - d1(a, i, j));
                gam(k, i, j) = acc / 2;
            }

    // dGamma(q,k,i,j) = d_q Gamma^k_ij, with d(G^{-1}) = -G^{-1} dG G^{-1}
    Tensor4 dgam(d, d, d, d);
    for (int q = 0; q < d; ++q) {
        Eigen::MatrixXd dGq(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) dGq(i, j) = d1(q, i, j);
        const Eigen::MatrixXd dGi = -Gi * dGq * Gi;
        for (int k = 0; k < d; ++k)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    double acc = 0;
                    for (int a = 0; a < d; ++a) {
                        const double S = d1(i, a, j) + d1(j, a, i) - d1(a, i, j);
                        const double dS =
                            d2(q, i, a, j) + d2(q, j, a, i) - d2(q, a, i, j);
                        acc += dGi(k, a) * S + Gi(k, a) * dS;
                    }
                    dgam(q, k, i, j) = acc / 2;
                }
    }

    Tensor4 R(d, d, d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    double acc = 0;
                    for (int m = 0; m < d; ++m) {
                        double term = dgam(i, m, j, k) - dgam(j, m, i, k);
                        for (int a = 0; a < d; ++a)
                            term += gam(a, j, k) * gam(m, i, a) -
                                    gam(a, i, k) * gam(m, j, a);
                        acc += G0(l, m) * term;
                    }
                    R(i, j, k, l) = acc;
                }
    return R;
}

inline subcurv::Tensor4 fiber_riemann(const subcurv::SubmersionSetup& setup,
                                      const subcurv::FramePair& frames) {
    const FiberChart chart(setup, frames);
    return sampled_riemann([&](const Eigen::VectorXd& t) { return chart.metric(t); },
                           frames.r());
}

}  // namespace testsup
