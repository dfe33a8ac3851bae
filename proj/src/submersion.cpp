#include "subcurv/submersion.hpp"

#include <cmath>
#include <limits>

namespace subcurv {

namespace {

std::span<const double> as_span(const Point& p) {
    return {p.data(), static_cast<std::size_t>(p.size())};
}

// Gram-Schmidt step against accepted columns of B under inner product M,
// applied twice for numerical orthogonality.
void orthogonalize(Eigen::VectorXd& u, const Eigen::MatrixXd& B, int cols,
                   const Eigen::MatrixXd& M) {
    for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i < cols; ++i) u -= B.col(i) * (B.col(i).dot(M * u));
}

// Complete the first `got` orthonormal columns of Q (Euclidean) to a full
// orthogonal matrix using canonical seeds in index order.
void complete_orthogonal(Eigen::MatrixXd& Q, int got) {
    const int r = static_cast<int>(Q.rows());
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(r, r);
    for (int c = 0; c < r && got < r; ++c) {
        Eigen::VectorXd v = I.col(c);
        orthogonalize(v, Q, got, I);
        if (v.squaredNorm() < 1e-12) continue;
        Q.col(got++) = v.normalized();
    }
    if (got < static_cast<int>(Q.rows()))
        throw GramSchmidtBreakdown("could not complete an orthonormal basis");
}

void check_orthogonal(const Eigen::MatrixXd& Q) {
    const auto I = Eigen::MatrixXd::Identity(Q.rows(), Q.cols());
    if (Q.rows() != Q.cols() ||
        (Q.transpose() * Q - I).cwiseAbs().maxCoeff() > 1e-10)
        throw ShapeError("frame rotation matrix is not orthogonal");
}

constexpr double kSkip2 = 1e-12;  // squared-norm below which a seed is skipped

}  // namespace

SmoothMap::SmoothMap(int n, int m, std::vector<Expression> components, DerivMode mode)
    : n_(n), m_(m), mode_(mode), comp_(std::move(components)) {
    if (m < 1 || m > n) throw ShapeError("map dimensions must satisfy 1 <= m <= n");
    if (static_cast<int>(comp_.size()) != m)
        throw ShapeError("map has " + std::to_string(comp_.size()) + " components, expected " +
                         std::to_string(m));
    for (const Expression& c : comp_)
        if (c.max_var() > n)
            throw ShapeError("map component '" + c.to_string() + "' references x" +
                             std::to_string(c.max_var()) + " but the chart has " +
                             std::to_string(n) + " coordinates");
    if (mode_ == DerivMode::Analytic) {
        jac_.reserve(static_cast<std::size_t>(m) * n);
        for (int a = 0; a < m; ++a)
            for (int i = 0; i < n; ++i) jac_.push_back(comp_[a].derivative(i));
    }
}

SmoothMap SmoothMap::parse(int n, const std::vector<std::string>& components,
                           DerivMode mode) {
    std::vector<Expression> comp;
    comp.reserve(components.size());
    for (const std::string& text : components) comp.push_back(Expression::parse(text));
    return SmoothMap(n, static_cast<int>(components.size()), std::move(comp), mode);
}

Eigen::VectorXd SmoothMap::value(const Point& p) const {
    if (p.size() != n_) throw ShapeError("point dimension does not match the map");
    Eigen::VectorXd y(m_);
    for (int a = 0; a < m_; ++a) y[a] = comp_[a].eval(as_span(p));
    return y;
}

Eigen::MatrixXd SmoothMap::jacobian(const Point& p) const {
    if (p.size() != n_) throw ShapeError("point dimension does not match the map");
    Eigen::MatrixXd J(m_, n_);
    switch (mode_) {
        case DerivMode::Analytic:
            for (int a = 0; a < m_; ++a)
                for (int i = 0; i < n_; ++i) J(a, i) = jac_[a * n_ + i].eval(as_span(p));
            break;
        case DerivMode::Dual:
            for (int a = 0; a < m_; ++a)
                for (int i = 0; i < n_; ++i) J(a, i) = comp_[a].eval_dual(as_span(p), i);
            break;
        case DerivMode::Difference:
            for (int i = 0; i < n_; ++i) {
                double h = fd_step1(p[i]);
                Point pp = p, pm = p;
                pp[i] += h;
                pm[i] -= h;
                for (int a = 0; a < m_; ++a)
                    J(a, i) = (comp_[a].eval(as_span(pp)) - comp_[a].eval(as_span(pm))) /
                              (2 * h);
            }
            break;
    }
    return J;
}

SubmersionSetup::SubmersionSetup(MetricField g1_, MetricField g2_, SmoothMap map_,
                                 std::shared_ptr<const StructureTensors> structure_)
    : g1(std::move(g1_)), g2(std::move(g2_)), map(std::move(map_)),
      structure(std::move(structure_)) {
    if (map.n() != g1.dim() || map.m() != g2.dim())
        throw ShapeError("metric/map dimensions disagree: g1 is " + std::to_string(g1.dim()) +
                         "-dimensional, g2 is " + std::to_string(g2.dim()) +
                         ", map is " + std::to_string(map.n()) + " -> " +
                         std::to_string(map.m()));
}

Eigen::MatrixXd pushforward(const SubmersionSetup& setup, const Point& p) {
    Eigen::MatrixXd J = setup.map.jacobian(p);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
    double smax = svd.singularValues()(0);
    double smin = svd.singularValues()(setup.m() - 1);
    if (!(smin > tol::rank_rel * smax))
        throw RankDeficient("the map is not a submersion at the given point (singular values " +
                            std::to_string(smin) + " .. " + std::to_string(smax) + ")");
    return J;
}

FramePair build_frames(const SubmersionSetup& setup, const Point& p,
                       std::optional<Eigen::MatrixXd> seed_basis) {
    const int n = setup.n(), m = setup.m(), r = n - m, s = m;

    Eigen::MatrixXd J = pushforward(setup, p);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeFullV);
    Eigen::MatrixXd K = svd.matrixV().rightCols(r);  // Euclidean kernel basis
    Eigen::MatrixXd Pker = K * K.transpose();

    Eigen::MatrixXd g = metric_at(setup.g1, p).g;
    Eigen::MatrixXd seeds =
        seed_basis ? std::move(*seed_basis) : Eigen::MatrixXd::Identity(n, n);
    if (seeds.rows() != n || seeds.cols() != n)
        throw ShapeError("seed basis must be a square matrix of chart dimension");

    FramePair out;
    out.p = p;
    out.vertical = Eigen::MatrixXd(n, r);
    out.horizontal = Eigen::MatrixXd(n, s);
    out.Qv = Eigen::MatrixXd::Identity(r, r);
    out.Qh = Eigen::MatrixXd::Identity(s, s);
    out.seeds = seeds;

    int got = 0;
    for (int c = 0; c < n && got < r; ++c) {
        Eigen::VectorXd u = Pker * seeds.col(c);
        orthogonalize(u, out.vertical, got, g);
        double nrm2 = u.dot(g * u);
        if (nrm2 < kSkip2) continue;
        out.vertical.col(got++) = u / std::sqrt(nrm2);
    }
    if (got < r)
        throw GramSchmidtBreakdown("seed basis spans only " + std::to_string(got) + " of " +
                                   std::to_string(r) + " vertical directions");

    got = 0;
    for (int c = 0; c < n && got < s; ++c) {
        Eigen::VectorXd u = seeds.col(c);
        // remove the vertical part, then orthogonalize within the horizontal set
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i < r; ++i)
                u -= out.vertical.col(i) * (out.vertical.col(i).dot(g * u));
        orthogonalize(u, out.horizontal, got, g);
        double nrm2 = u.dot(g * u);
        if (nrm2 < kSkip2) continue;
        out.horizontal.col(got++) = u / std::sqrt(nrm2);
    }
    if (got < s)
        throw GramSchmidtBreakdown("seed basis spans only " + std::to_string(got) + " of " +
                                   std::to_string(s) + " horizontal directions");
    return out;
}

FramePair frames_at(const SubmersionSetup& setup, const Point& q, const FramePair& ref) {
    FramePair out = build_frames(setup, q, ref.seeds);
    out.vertical = (out.vertical * ref.Qv).eval();
    out.horizontal = (out.horizontal * ref.Qh).eval();
    out.Qv = ref.Qv;
    out.Qh = ref.Qh;

    Eigen::MatrixXd gq = setup.g1.value(q);
    double jump = 0;
    Eigen::MatrixXd Cv = ref.vertical.transpose() * gq * out.vertical;
    Eigen::MatrixXd Ch = ref.horizontal.transpose() * gq * out.horizontal;
    jump = std::max(
        (Cv - Eigen::MatrixXd::Identity(ref.r(), ref.r())).cwiseAbs().maxCoeff(),
        (Ch - Eigen::MatrixXd::Identity(ref.s(), ref.s())).cwiseAbs().maxCoeff());
    if (jump > 0.1)
        throw GramSchmidtBreakdown(
            "frame field is discontinuous between the base point and a stencil point "
            "(Gram jump " +
            std::to_string(jump) + ")");
    return out;
}

FramePair rotate_vertical(const FramePair& frames, const Eigen::MatrixXd& Q) {
    check_orthogonal(Q);
    if (Q.rows() != frames.r()) throw ShapeError("vertical rotation has wrong size");
    FramePair out = frames;
    out.vertical = (frames.vertical * Q).eval();
    out.Qv = (frames.Qv * Q).eval();
    return out;
}

FramePair rotate_horizontal(const FramePair& frames, const Eigen::MatrixXd& Q) {
    check_orthogonal(Q);
    if (Q.rows() != frames.s()) throw ShapeError("horizontal rotation has wrong size");
    FramePair out = frames;
    out.horizontal = (frames.horizontal * Q).eval();
    out.Qh = (frames.Qh * Q).eval();
    return out;
}

namespace {

// Coefficients of vector u in the g-orthonormal frame B; rejects vectors with
// a component outside span(B).
Eigen::VectorXd coefficients_in(const Eigen::MatrixXd& B, const Eigen::MatrixXd& g,
                                const Eigen::VectorXd& u, const char* which) {
    Eigen::VectorXd c = B.transpose() * g * u;
    Eigen::VectorXd res = u - B * c;
    double out = std::sqrt(res.dot(g * res));
    double scale = std::sqrt(u.dot(g * u));
    if (scale < tol::frame) throw DegeneratePlane("plane vector is numerically zero");
    if (out > tol::frame * std::max(1.0, scale))
        throw DegeneratePlane(std::string("plane vector has a component outside the ") +
                              which + " distribution (residual " + std::to_string(out) + ")");
    return c;
}

Eigen::MatrixXd pair_rotation(const Eigen::VectorXd& cu, const Eigen::VectorXd& cw) {
    const int r = static_cast<int>(cu.size());
    Eigen::MatrixXd Q(r, r);
    double nu = cu.norm();
    if (nu < tol::frame) throw DegeneratePlane("plane vector is numerically zero");
    Q.col(0) = cu / nu;
    Eigen::VectorXd w = cw - Q.col(0) * Q.col(0).dot(cw);
    double nw = w.norm();
    if (nw < tol::frame * std::max(1.0, cw.norm()))
        throw DegeneratePlane("plane vectors are parallel");
    Q.col(1) = w / nw;
    complete_orthogonal(Q, 2);
    return Q;
}

}  // namespace

FramePair adapt_vertical_pair(const SubmersionSetup& setup, const FramePair& frames,
                              const Eigen::VectorXd& u, const Eigen::VectorXd& w) {
    if (frames.r() < 2) throw DimensionTooSmall("vertical space has dimension < 2");
    Eigen::MatrixXd g = setup.g1.value(frames.p);
    Eigen::VectorXd cu = coefficients_in(frames.vertical, g, u, "vertical");
    Eigen::VectorXd cw = coefficients_in(frames.vertical, g, w, "vertical");
    return rotate_vertical(frames, pair_rotation(cu, cw));
}

FramePair adapt_horizontal_pair(const SubmersionSetup& setup, const FramePair& frames,
                                const Eigen::VectorXd& u, const Eigen::VectorXd& w) {
    if (frames.s() < 2) throw DimensionTooSmall("horizontal space has dimension < 2");
    Eigen::MatrixXd g = setup.g1.value(frames.p);
    Eigen::VectorXd cu = coefficients_in(frames.horizontal, g, u, "horizontal");
    Eigen::VectorXd cw = coefficients_in(frames.horizontal, g, w, "horizontal");
    return rotate_horizontal(frames, pair_rotation(cu, cw));
}

FramePair align_h1(const SubmersionSetup& setup, const FramePair& frames,
                   const Eigen::VectorXd& Hvec, double align_tol) {
    Eigen::MatrixXd g = setup.g1.value(frames.p);
    double nh = std::sqrt(Hvec.dot(g * Hvec));
    if (nh <= align_tol) return frames;

    Eigen::VectorXd c = coefficients_in(frames.horizontal, g, Hvec, "horizontal");
    const int s = frames.s();
    Eigen::MatrixXd Q(s, s);
    Q.col(0) = c / c.norm();
    complete_orthogonal(Q, 1);
    return rotate_horizontal(frames, Q);
}

FrameResiduals frame_residuals(const SubmersionSetup& setup, const FramePair& frames) {
    Eigen::MatrixXd g = setup.g1.value(frames.p);
    Eigen::MatrixXd J = setup.map.jacobian(frames.p);
    FrameResiduals out;
    const int r = frames.r(), s = frames.s();
    Eigen::MatrixXd Gv = frames.vertical.transpose() * g * frames.vertical;
    Eigen::MatrixXd Gh = frames.horizontal.transpose() * g * frames.horizontal;
    out.ortho_v = (Gv - Eigen::MatrixXd::Identity(r, r)).cwiseAbs().maxCoeff();
    out.ortho_h = (Gh - Eigen::MatrixXd::Identity(s, s)).cwiseAbs().maxCoeff();
    out.cross = (frames.vertical.transpose() * g * frames.horizontal).cwiseAbs().maxCoeff();
    double jscale = std::max(1.0, J.cwiseAbs().maxCoeff());
    out.verticality = (J * frames.vertical).cwiseAbs().maxCoeff() / jscale;
    return out;
}

SubmersionReport validate_submersion(const SubmersionSetup& setup,
                                     const std::vector<Point>& points, double sub_tol) {
    SubmersionReport report;
    report.tolerance = sub_tol;
    for (const Point& p : points) {
        SubmersionPointCheck check;
        check.p = p;
        check.residual = std::numeric_limits<double>::quiet_NaN();
        Eigen::MatrixXd J = pushforward(setup, p);  // RankDeficient propagates
        FramePair frames = build_frames(setup, p);
        try {
            Eigen::VectorXd q = setup.map.value(p);
            Eigen::MatrixXd g2m = setup.g2.value(q);
            Eigen::MatrixXd g1m = setup.g1.value(p);
            Eigen::MatrixXd Fh = J * frames.horizontal;  // m x s
            Eigen::MatrixXd lhs = frames.horizontal.transpose() * g1m * frames.horizontal;
            Eigen::MatrixXd rhs = Fh.transpose() * g2m * Fh;
            check.residual = (lhs - rhs).cwiseAbs().maxCoeff();
            check.ok = check.residual < sub_tol;
            report.max_residual = std::max(report.max_residual, check.residual);
        } catch (const Error& err) {
            check.ok = false;
            check.note = err.what();
        }
        report.pass = report.pass && check.ok;
        report.points.push_back(std::move(check));
    }
    return report;
}

}  // namespace subcurv
