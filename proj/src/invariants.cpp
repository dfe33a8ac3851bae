#include "subcurv/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace subcurv {

namespace {

double ip(const Eigen::MatrixXd& g, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return a.dot(g * b);
}

// change of basis: Rf(A,B,C,D) = R(i,j,k,l) E(i,A) E(j,B) E(k,C) E(l,D)
Tensor4 transform4(const Tensor4& R, const Eigen::MatrixXd& E) {
    const int n = static_cast<int>(E.rows()), d = static_cast<int>(E.cols());
    Tensor4 t1(n, n, n, d), t2(n, n, d, d), t3(n, d, d, d), out(d, d, d, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int D = 0; D < d; ++D) {
                    double acc = 0;
                    for (int l = 0; l < n; ++l) acc += R(i, j, k, l) * E(l, D);
                    t1(i, j, k, D) = acc;
                }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int C = 0; C < d; ++C)
                for (int D = 0; D < d; ++D) {
                    double acc = 0;
                    for (int k = 0; k < n; ++k) acc += t1(i, j, k, D) * E(k, C);
                    t2(i, j, C, D) = acc;
                }
    for (int i = 0; i < n; ++i)
        for (int B = 0; B < d; ++B)
            for (int C = 0; C < d; ++C)
                for (int D = 0; D < d; ++D) {
                    double acc = 0;
                    for (int j = 0; j < n; ++j) acc += t2(i, j, C, D) * E(j, B);
                    t3(i, B, C, D) = acc;
                }
    for (int A = 0; A < d; ++A)
        for (int B = 0; B < d; ++B)
            for (int C = 0; C < d; ++C)
                for (int D = 0; D < d; ++D) {
                    double acc = 0;
                    for (int i = 0; i < n; ++i) acc += t3(i, B, C, D) * E(i, A);
                    out(A, B, C, D) = acc;
                }
    return out;
}

Tensor4 block4(const Tensor4& R, int off, int d) {
    Tensor4 out(d, d, d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
                for (int e = 0; e < d; ++e) out(a, b, c, e) = R(off + a, off + b, off + c, off + e);
    return out;
}

// ---- Grassmannian chart: plane = span{R e1, R e2} with
// R = G_{13}(a1)..G_{1d}(a_{d-2}) G_{23}(b1)..G_{2d}(b_{d-2}) ----

void apply_givens(Eigen::VectorXd& v, int p, int q, double c, double s) {
    const double vp = v[p], vq = v[q];
    v[p] = c * vp - s * vq;
    v[q] = s * vp + c * vq;
}

void chart_basis(int d, const Eigen::VectorXd& angles, Eigen::VectorXd& c1,
                 Eigen::VectorXd& c2) {
    c1 = Eigen::VectorXd::Zero(d);
    c2 = Eigen::VectorXd::Zero(d);
    c1[0] = 1;
    c2[1] = 1;
    for (int k = 2; k < d; ++k) {
        const double b = angles[(d - 2) + (k - 2)];
        apply_givens(c2, 1, k, std::cos(b), std::sin(b));
    }
    for (int k = 2; k < d; ++k) {
        const double a = angles[k - 2];
        const double ca = std::cos(a), sa = std::sin(a);
        apply_givens(c1, 0, k, ca, sa);
        apply_givens(c2, 0, k, ca, sa);
    }
}

// curvature as a quadratic form on normalized wedges
struct WedgeForm {
    int d = 0;
    Eigen::MatrixXd M;  // indexed by pairs i<j

    explicit WedgeForm(const Tensor4& Rt) : d(Rt.dim0()) {
        const int nb = d * (d - 1) / 2;
        M = Eigen::MatrixXd::Zero(nb, nb);
        int row = 0;
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j, ++row) {
                int col = 0;
                for (int k = 0; k < d; ++k)
                    for (int l = k + 1; l < d; ++l, ++col) M(row, col) = Rt(i, j, l, k);
            }
        M = ((M + M.transpose()) / 2).eval();
    }

    Eigen::VectorXd wedge(const Eigen::VectorXd& c1, const Eigen::VectorXd& c2) const {
        Eigen::VectorXd w(d * (d - 1) / 2);
        int idx = 0;
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j, ++idx) w[idx] = c1[i] * c2[j] - c1[j] * c2[i];
        return w;
    }

    double eval(const Eigen::VectorXd& angles) const {
        Eigen::VectorXd c1, c2;
        chart_basis(d, angles, c1, c2);
        return wedge(c1, c2).dot(M * wedge(c1, c2));
    }
};

Eigen::VectorXd num_grad(const std::function<double(const Eigen::VectorXd&)>& f,
                         const Eigen::VectorXd& x) {
    const double h = 1e-6;
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd xp = x;
    for (int i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        xp[i] = xi + h;
        const double fp = f(xp);
        xp[i] = xi - h;
        const double fm = f(xp);
        xp[i] = xi;
        g[i] = (fp - fm) / (2 * h);
    }
    return g;
}

// compact BFGS with Armijo backtracking
Eigen::VectorXd bfgs_minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                              Eigen::VectorXd x) {
    const int dim = static_cast<int>(x.size());
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(dim, dim);
    double fx = f(x);
    Eigen::VectorXd g = num_grad(f, x);
    for (int iter = 0; iter < 150; ++iter) {
        if (g.norm() < 1e-10) break;
        Eigen::VectorXd d = -H * g;
        if (g.dot(d) > -1e-14) {
            H.setIdentity();
            d = -g;
        }
        double t = 1.0;
        const double slope = g.dot(d);
        bool moved = false;
        for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
            const double ft = f(x + t * d);
            if (ft <= fx + 1e-4 * t * slope) {
                const Eigen::VectorXd xn = x + t * d;
                const Eigen::VectorXd gn = num_grad(f, xn);
                const Eigen::VectorXd s = xn - x, y = gn - g;
                const double sy = s.dot(y);
                if (sy > 1e-12) {
                    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(dim, dim);
                    H = (I - s * y.transpose() / sy) * H * (I - y * s.transpose() / sy) +
                        s * s.transpose() / sy;
                }
                const double drop = fx - ft;
                x = xn;
                fx = ft;
                g = gn;
                moved = true;
                if (drop < 1e-16 * (1 + std::abs(fx))) iter = 150;
                break;
            }
        }
        if (!moved) break;
    }
    return x;
}

Eigen::VectorXd canonical_wedge(Eigen::VectorXd w) {
    const double n = w.norm();
    if (n > 0) w /= n;
    for (int i = 0; i < w.size(); ++i) {
        if (std::abs(w[i]) > 1e-9) {
            if (w[i] < 0) w = -w;
            break;
        }
    }
    return w;
}

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (int i = 0; i < a.size(); ++i) {
        if (a[i] < b[i] - 1e-12) return true;
        if (a[i] > b[i] + 1e-12) return false;
    }
    return false;
}

struct RawExtremum {
    double value = 0;
    Eigen::VectorXd c1, c2, w;
};

RawExtremum extremize(const Tensor4& Rt, int d, ExtremalMode mode) {
    if (d < 2) throw DimensionTooSmall("extremal_sectional: space dimension < 2");
    const WedgeForm form(Rt);
    RawExtremum best;
    if (d == 2) {
        best.c1 = Eigen::VectorXd::Unit(2, 0);
        best.c2 = Eigen::VectorXd::Unit(2, 1);
        best.w = form.wedge(best.c1, best.c2);
        best.value = best.w.dot(form.M * best.w);
        return best;
    }
    const double sign = (mode == ExtremalMode::Inf) ? 1.0 : -1.0;
    const auto f = [&](const Eigen::VectorXd& ang) { return sign * form.eval(ang); };
    const double kPi = std::acos(-1.0);

    const int dimA = 2 * (d - 2);
    int per_axis = 2;
    while (std::pow(per_axis, dimA) < 32 && per_axis < 8) ++per_axis;
    std::vector<RawExtremum> cand;
    std::vector<int> odo(dimA, 0);
    double best_f = 0;
    while (true) {
        Eigen::VectorXd seed(dimA);
        for (int i = 0; i < dimA; ++i) seed[i] = (odo[i] + 0.5) * kPi / per_axis;
        const Eigen::VectorXd xo = bfgs_minimize(f, seed);
        RawExtremum c;
        c.value = f(xo);
        chart_basis(d, xo, c.c1, c.c2);
        c.w = canonical_wedge(form.wedge(c.c1, c.c2));
        if (cand.empty() || c.value < best_f) best_f = c.value;
        cand.push_back(std::move(c));
        int pos = 0;
        while (pos < dimA && ++odo[pos] == per_axis) odo[pos++] = 0;
        if (pos == dimA) break;
    }
    // value is the best found; the plane is the lexicographically smallest
    // wedge among starts landing within opt_tol of it
    bool have = false;
    for (const auto& c : cand) {
        if (c.value > best_f + tol::opt) continue;
        if (!have || lex_less(c.w, best.w)) {
            best.c1 = c.c1;
            best.c2 = c.c2;
            best.w = c.w;
            have = true;
        }
    }
    best.value = sign * best_f;
    return best;
}

}  // namespace

double dense_grid_extremum(const Tensor4& Rt, int d, ExtremalMode mode, int steps) {
    if (d < 2) throw DimensionTooSmall("dense_grid_extremum: space dimension < 2");
    const WedgeForm form(Rt);
    if (d == 2) {
        const Eigen::VectorXd w =
            form.wedge(Eigen::VectorXd::Unit(2, 0), Eigen::VectorXd::Unit(2, 1));
        return w.dot(form.M * w);
    }
    const int dimA = 2 * (d - 2);
    if (dimA > 4) throw Error("dense_grid_extremum: grid too large beyond Gr(2,4)");
    const double kPi = std::acos(-1.0);
    std::vector<int> odo(dimA, 0);
    double best = 0;
    bool have = false;
    Eigen::VectorXd ang(dimA);
    while (true) {
        for (int i = 0; i < dimA; ++i) ang[i] = odo[i] * kPi / steps;
        const double k = form.eval(ang);
        if (!have || (mode == ExtremalMode::Inf ? k < best : k > best)) {
            best = k;
            have = true;
        }
        int pos = 0;
        while (pos < dimA && ++odo[pos] == steps) odo[pos++] = 0;
        if (pos == dimA) break;
    }
    return best;
}

InvariantEngine::InvariantEngine(const SubmersionSetup& setup, const FramePair& frames)
    : setup_(setup),
      oneill_(setup, frames, true),
      R_(riemann(setup.g1, frames.p)),
      g_(oneill_.chris().g) {
    const int n = setup.n(), r = setup.r();
    Eigen::MatrixXd E(n, n);
    E.leftCols(r) = frames.vertical;
    E.rightCols(setup.s()) = frames.horizontal;
    Rf_ = transform4(R_.R, E);
}

double InvariantEngine::r_ker(int i, int j, int k, int l) const {
    const auto& tH = oneill_.data().tH;
    const int s = setup_.s();
    double tik_jl = 0, til_jk = 0;
    for (int c = 0; c < s; ++c) {
        tik_jl += tH(i, k, c) * tH(j, l, c);
        til_jk += tH(i, l, c) * tH(j, k, c);
    }
    return Rf_(i, j, k, l) - tik_jl + til_jk;
}

double InvariantEngine::r_perp(int a, int b, int c, int d) const {
    const auto& aV = oneill_.data().aV;
    const int r = setup_.r();
    double ab_cd = 0, bc_ad = 0, ac_bd = 0;
    for (int i = 0; i < r; ++i) {
        ab_cd += aV(a, b, i) * aV(c, d, i);
        bc_ad += aV(b, c, i) * aV(a, d, i);
        ac_bd += aV(a, c, i) * aV(b, d, i);
    }
    const int off = r;
    return Rf_(off + a, off + b, off + c, off + d) - 2 * ab_cd + bc_ad - ac_bd;
}

double InvariantEngine::mixed_rhs(int a, int i, int j, int b) const {
    const auto& d = oneill_.data();
    const int r = setup_.r(), s = setup_.s();
    double tt = 0, aa = 0;
    for (int k = 0; k < r; ++k) tt += d.tV(i, a, k) * d.tV(j, b, k);
    for (int l = 0; l < s; ++l) aa += d.aH(b, j, l) * d.aH(a, i, l);
    return oneill_.covT(a, i, j, b) + oneill_.covA(i, a, b, j) - tt + aa;
}

InvariantBundle InvariantEngine::scalars() const {
    const int n = setup_.n(), r = setup_.r(), s = setup_.s();
    InvariantBundle out;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            out.tauV_M1 += Rf_(i, j, j, i) / 2;
            out.tauV_ker += r_ker(i, j, j, i) / 2;
        }
    for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b) {
            out.tauH_M1 += Rf_(r + a, r + b, r + b, r + a) / 2;
            out.tauH_perp += r_perp(a, b, b, a) / 2;
        }
    for (int a = 0; a < s; ++a)
        for (int j = 0; j < r; ++j) out.mixed_sum += Rf_(r + a, j, j, r + a);

    // independent coordinate contraction: 2 tau = g^{ac} g^{bd} R(a,b,d,c)
    const Eigen::MatrixXd& gi = oneill_.chris().ginv;
    double twotau = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                    twotau += gi(a, c) * gi(b, d) * R_.R(a, b, d, c);
    out.tau_M1 = twotau / 2;
    out.additivity_residual =
        std::abs(out.tau_M1 - (out.tauV_M1 + out.tauH_M1 + out.mixed_sum));
    return out;
}

Tensor4 InvariantEngine::ker_tensor() const {
    const int r = setup_.r();
    Tensor4 out(r, r, r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            for (int k = 0; k < r; ++k)
                for (int l = 0; l < r; ++l) out(i, j, k, l) = r_ker(i, j, k, l);
    return out;
}

Tensor4 InvariantEngine::perp_tensor() const {
    const int s = setup_.s();
    Tensor4 out(s, s, s, s);
    for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b)
            for (int c = 0; c < s; ++c)
                for (int d = 0; d < s; ++d) out(a, b, c, d) = r_perp(a, b, c, d);
    return out;
}

Tensor4 InvariantEngine::frame_tensor(PlaneSpace space, CurvModel model) const {
    const int r = setup_.r(), s = setup_.s(), n = setup_.n();
    switch (space) {
        case PlaneSpace::Vertical:
            return model == CurvModel::Induced ? ker_tensor() : block4(Rf_, 0, r);
        case PlaneSpace::Horizontal:
            return model == CurvModel::Induced ? perp_tensor() : block4(Rf_, r, s);
        case PlaneSpace::Ambient:
            if (model == CurvModel::Induced)
                throw ConstraintViolated(
                    "induced curvature needs a vertical or horizontal plane space");
            return block4(Rf_, 0, n);
    }
    throw Error("frame_tensor: bad space");
}

double induced_vertical_curvature(const SubmersionSetup& setup, const Point& p,
                                  const FramePair& frames, int i, int j, int k, int l) {
    const FramePair f = (p == frames.p) ? frames : frames_at(setup, p, frames);
    const ONeillEngine one(setup, f, false);
    const CurvatureTensor R = riemann(setup.g1, f.p);
    const auto& tH = one.data().tH;
    double rm = R.value(f.vertical.col(i), f.vertical.col(j), f.vertical.col(k),
                        f.vertical.col(l));
    double tik_jl = 0, til_jk = 0;
    for (int c = 0; c < setup.s(); ++c) {
        tik_jl += tH(i, k, c) * tH(j, l, c);
        til_jk += tH(i, l, c) * tH(j, k, c);
    }
    return rm - tik_jl + til_jk;
}

double induced_horizontal_curvature(const SubmersionSetup& setup, const Point& p,
                                    const FramePair& frames, int a, int b, int c, int d) {
    const FramePair f = (p == frames.p) ? frames : frames_at(setup, p, frames);
    const ONeillEngine one(setup, f, false);
    const CurvatureTensor R = riemann(setup.g1, f.p);
    const auto& aV = one.data().aV;
    double rm = R.value(f.horizontal.col(a), f.horizontal.col(b), f.horizontal.col(c),
                        f.horizontal.col(d));
    double ab_cd = 0, bc_ad = 0, ac_bd = 0;
    for (int i = 0; i < setup.r(); ++i) {
        ab_cd += aV(a, b, i) * aV(c, d, i);
        bc_ad += aV(b, c, i) * aV(a, d, i);
        ac_bd += aV(a, c, i) * aV(b, d, i);
    }
    return rm - 2 * ab_cd + bc_ad - ac_bd;
}

double mixed_curvature(const SubmersionSetup& setup, const Point& p,
                       const FramePair& frames, int a, int i, int j, int b) {
    const FramePair f = (p == frames.p) ? frames : frames_at(setup, p, frames);
    const InvariantEngine eng(setup, f);
    return eng.mixed_rhs(a, i, j, b);
}

InvariantBundle scalar_curvatures(const SubmersionSetup& setup, const Point& p,
                                  const FramePair& frames) {
    const FramePair f = (p == frames.p) ? frames : frames_at(setup, p, frames);
    const InvariantEngine eng(setup, f);
    return eng.scalars();
}

double sectional_curvature(const SubmersionSetup& setup, const Point& p,
                           const Plane2& plane, CurvModel model) {
    const Eigen::MatrixXd g = metric_at(setup.g1, p).g;
    const double n1 = std::sqrt(std::max(0.0, ip(g, plane.b1, plane.b1)));
    if (n1 < tol::frame) throw DegeneratePlane("plane basis vector has zero length");
    const Eigen::VectorXd u1 = plane.b1 / n1;
    Eigen::VectorXd w = plane.b2 - ip(g, plane.b2, u1) * u1;
    const double nw = std::sqrt(std::max(0.0, ip(g, w, w)));
    if (nw < tol::frame) throw DegeneratePlane("plane basis vectors are parallel");
    const Eigen::VectorXd u2 = w / nw;

    if (plane.space == PlaneSpace::Ambient && model == CurvModel::Induced)
        throw ConstraintViolated(
            "induced curvature needs a vertical or horizontal plane space");

    if (plane.space == PlaneSpace::Ambient) {
        const CurvatureTensor R = riemann(setup.g1, p);
        return R.value(u1, u2, u2, u1);
    }

    const FramePair f = build_frames(setup, p);
    const int r = setup.r(), s = setup.s();
    const bool vert = plane.space == PlaneSpace::Vertical;
    // membership: no component in the complementary distribution
    for (const auto* u : {&u1, &u2}) {
        double off2 = 0;
        if (vert)
            for (int a = 0; a < s; ++a) off2 += std::pow(ip(g, *u, f.horizontal.col(a)), 2);
        else
            for (int i = 0; i < r; ++i) off2 += std::pow(ip(g, *u, f.vertical.col(i)), 2);
        if (std::sqrt(off2) > tol::frame * 10)
            throw ConstraintViolated("plane basis vector leaves its declared space");
    }

    if (model == CurvModel::Ambient) {
        const CurvatureTensor R = riemann(setup.g1, p);
        return R.value(u1, u2, u2, u1);
    }

    const InvariantEngine eng(setup, f);
    const int d = vert ? r : s;
    Eigen::VectorXd c1(d), c2(d);
    for (int k = 0; k < d; ++k) {
        const Eigen::VectorXd col = vert ? f.vertical.col(k) : f.horizontal.col(k);
        c1[k] = ip(g, u1, col);
        c2[k] = ip(g, u2, col);
    }
    const Tensor4 Rt = eng.frame_tensor(plane.space, CurvModel::Induced);
    double acc = 0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l)
                    acc += c1[i] * c2[j] * c2[k] * c1[l] * Rt(i, j, k, l);
    return acc;
}

ExtremalResult extremal_sectional(const InvariantEngine& eng, PlaneSpace space,
                                  ExtremalMode mode, CurvModel model) {
    const auto& setup = eng.setup();
    const auto& f = eng.frames();
    const int d = space == PlaneSpace::Vertical    ? setup.r()
                  : space == PlaneSpace::Horizontal ? setup.s()
                                                    : setup.n();
    const Tensor4 Rt = eng.frame_tensor(space, model);
    const RawExtremum raw = extremize(Rt, d, mode);

    Eigen::MatrixXd E;
    if (space == PlaneSpace::Vertical)
        E = f.vertical;
    else if (space == PlaneSpace::Horizontal)
        E = f.horizontal;
    else {
        E.resize(setup.n(), setup.n());
        E.leftCols(setup.r()) = f.vertical;
        E.rightCols(setup.s()) = f.horizontal;
    }
    ExtremalResult out;
    out.value = raw.value;
    out.c1 = raw.c1;
    out.c2 = raw.c2;
    out.plane.space = space;
    out.plane.b1 = E * raw.c1;
    out.plane.b2 = E * raw.c2;
    return out;
}

ExtremalResult extremal_sectional(const SubmersionSetup& setup, const Point& p,
                                  const FramePair& frames, PlaneSpace space,
                                  ExtremalMode mode, CurvModel model) {
    const FramePair f = (p == frames.p) ? frames : frames_at(setup, p, frames);
    const InvariantEngine eng(setup, f);
    return extremal_sectional(eng, space, mode, model);
}

Delta2Report delta2_invariants(const InvariantEngine& eng) {
    const auto& setup = eng.setup();
    if (setup.r() < 2) throw DimensionTooSmall("delta2_invariants: fiber dimension < 2");
    if (setup.s() < 2)
        throw DimensionTooSmall("delta2_invariants: horizontal dimension < 2");
    const InvariantBundle sc = eng.scalars();
    Delta2Report out;
    out.tauV_ker = sc.tauV_ker;
    out.tauH_perp = sc.tauH_perp;
    out.infK_V =
        extremal_sectional(eng, PlaneSpace::Vertical, ExtremalMode::Inf, CurvModel::Induced)
            .value;
    out.supK_V =
        extremal_sectional(eng, PlaneSpace::Vertical, ExtremalMode::Sup, CurvModel::Induced)
            .value;
    out.infK_H = extremal_sectional(eng, PlaneSpace::Horizontal, ExtremalMode::Inf,
                                    CurvModel::Induced)
                     .value;
    out.supK_H = extremal_sectional(eng, PlaneSpace::Horizontal, ExtremalMode::Sup,
                                    CurvModel::Induced)
                     .value;
    out.delta2_V = out.tauV_ker - out.infK_V;
    out.deltaHat2_V = out.tauV_ker - out.supK_V;
    out.deltaHat2_H = out.tauH_perp - out.supK_H;
    return out;
}

}  // namespace subcurv
