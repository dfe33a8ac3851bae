#include "subcurv/space_forms.hpp"

#include <cmath>

#include "subcurv/metric.hpp"

namespace subcurv {

namespace {

std::span<const double> span_of(const Point& p) {
    return {p.data(), static_cast<size_t>(p.size())};
}

Eigen::VectorXd eval_vector(const std::vector<Expression>& comps, const Point& p) {
    Eigen::VectorXd out(static_cast<int>(comps.size()));
    for (int i = 0; i < out.size(); ++i) out(i) = comps[static_cast<size_t>(i)].eval(span_of(p));
    return out;
}

}  // namespace

StructureTensors StructureTensors::parse(StructureKind kind, int n,
                                         const std::vector<std::vector<std::string>>& J_rows,
                                         const std::vector<std::string>& xi_comps,
                                         const std::vector<std::string>& eta_comps) {
    if (n <= 0) throw ShapeError("structure dimension must be positive");
    if (static_cast<int>(J_rows.size()) != n)
        throw ShapeError("structure matrix needs " + std::to_string(n) + " rows");
    StructureTensors st;
    st.kind = kind;
    st.n = n;
    st.JJ.reserve(static_cast<size_t>(n) * static_cast<size_t>(n));
    for (const auto& row : J_rows) {
        if (static_cast<int>(row.size()) != n)
            throw ShapeError("structure matrix rows need " + std::to_string(n) + " entries");
        for (const auto& e : row) st.JJ.push_back(Expression::parse(e));
    }
    if (kind == StructureKind::AlmostContact) {
        if (static_cast<int>(xi_comps.size()) != n || static_cast<int>(eta_comps.size()) != n)
            throw ShapeError("almost contact structure needs xi and eta with n entries");
        for (const auto& e : xi_comps) st.xi.push_back(Expression::parse(e));
        for (const auto& e : eta_comps) st.eta.push_back(Expression::parse(e));
    } else if (!xi_comps.empty() || !eta_comps.empty()) {
        throw ShapeError("complex structures take no xi / eta");
    }
    return st;
}

Eigen::MatrixXd StructureTensors::J_at(const Point& p) const {
    Eigen::MatrixXd J(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            J(i, j) = JJ[static_cast<size_t>(i * n + j)].eval(span_of(p));
    return J;
}

Eigen::VectorXd StructureTensors::xi_at(const Point& p) const {
    if (kind != StructureKind::AlmostContact)
        throw MissingStructure("complex structure has no xi");
    return eval_vector(xi, p);
}

Eigen::VectorXd StructureTensors::eta_at(const Point& p) const {
    if (kind != StructureKind::AlmostContact)
        throw MissingStructure("complex structure has no eta");
    return eval_vector(eta, p);
}

StructureAt structure_at(const StructureTensors& st, const Point& p) {
    StructureAt at;
    at.contact = st.kind == StructureKind::AlmostContact;
    at.J = st.J_at(p);
    if (at.contact) {
        at.xi = st.xi_at(p);
        at.eta = st.eta_at(p);
    } else {
        at.xi = Eigen::VectorXd::Zero(st.n);
        at.eta = Eigen::VectorXd::Zero(st.n);
    }
    return at;
}

SpaceFormModel SpaceFormModel::real(double c) {
    SpaceFormModel m;
    m.family = ModelFamily::Real;
    m.c = c;
    return m;
}

SpaceFormModel SpaceFormModel::complex_form(double c) {
    SpaceFormModel m;
    m.family = ModelFamily::Complex;
    m.c = c;
    return m;
}

SpaceFormModel SpaceFormModel::generalized_sasakian(double c1, double c2, double c3) {
    SpaceFormModel m;
    m.family = ModelFamily::GeneralizedSasakian;
    m.c1 = c1;
    m.c2 = c2;
    m.c3 = c3;
    return m;
}

SpaceFormModel SpaceFormModel::sasakian(double c) {
    SpaceFormModel m = generalized_sasakian((c + 3) / 4, (c - 1) / 4, (c - 1) / 4);
    m.family = ModelFamily::Sasakian;
    m.c = c;
    return m;
}

SpaceFormModel SpaceFormModel::kenmotsu(double c) {
    SpaceFormModel m = generalized_sasakian((c - 3) / 4, (c + 1) / 4, (c + 1) / 4);
    m.family = ModelFamily::Kenmotsu;
    m.c = c;
    return m;
}

SpaceFormModel SpaceFormModel::cosymplectic(double c) {
    SpaceFormModel m = generalized_sasakian(c / 4, c / 4, c / 4);
    m.family = ModelFamily::Cosymplectic;
    m.c = c;
    return m;
}

SpaceFormModel SpaceFormModel::c_alpha(double c, double alpha) {
    double a2 = alpha * alpha;
    SpaceFormModel m = generalized_sasakian((c + 3 * a2) / 4, (c - a2) / 4, (c - a2) / 4);
    m.family = ModelFamily::CAlpha;
    m.c = c;
    m.alpha = alpha;
    return m;
}

double model_curvature(const SpaceFormModel& model, const Eigen::MatrixXd& g,
                       const StructureAt* st, const Eigen::VectorXd& z1,
                       const Eigen::VectorXd& z2, const Eigen::VectorXd& z3,
                       const Eigen::VectorXd& z4) {
    auto ip = [&g](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        return a.dot(g * b);
    };
    double g13 = ip(z1, z3), g24 = ip(z2, z4), g23 = ip(z2, z3), g14 = ip(z1, z4);
    double real_part = g23 * g14 - g13 * g24;
    if (model.family == ModelFamily::Real) return model.c * real_part;

    if (st == nullptr) throw MissingStructure("model family needs a structure tensor");
    const Eigen::MatrixXd& J = st->J;
    Eigen::VectorXd Jz1 = J * z1, Jz2 = J * z2, Jz3 = J * z3;
    double holo_part = ip(z1, Jz3) * ip(Jz2, z4) - ip(z2, Jz3) * ip(Jz1, z4) +
                       2 * ip(z1, Jz2) * ip(Jz3, z4);

    if (model.family == ModelFamily::Complex)
        return (model.c / 4) * (real_part + holo_part);

    if (!st->contact) throw MissingStructure("model family needs an almost contact structure");
    auto eta = [&st](const Eigen::VectorXd& z) { return st->eta.dot(z); };
    double eta_part = eta(z1) * eta(z3) * g24 - eta(z2) * eta(z3) * g14 +
                      g13 * eta(z2) * eta(z4) - g23 * eta(z1) * eta(z4);
    return model.c1 * real_part + model.c2 * holo_part + model.c3 * eta_part;
}

StructureReport validate_structure(const SubmersionSetup& setup,
                                   const std::vector<Point>& points, double struct_tol) {
    if (!setup.structure) throw MissingStructure("setup declares no structure tensor");
    const StructureTensors& st = *setup.structure;
    StructureReport rep;
    auto axiom = [&rep](const std::string& label) -> double& {
        rep.axioms.push_back({label, 0});
        return rep.axioms.back().residual;
    };
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(st.n, st.n);
    if (st.kind == StructureKind::Complex) {
        double& sq = axiom("J^2 = -I");
        double& comp = axiom("g(JX, JY) = g(X, Y)");
        for (const Point& p : points) {
            Eigen::MatrixXd J = st.J_at(p);
            Eigen::MatrixXd g = metric_at(setup.g1, p).g;
            sq = std::max(sq, (J * J + I).cwiseAbs().maxCoeff());
            comp = std::max(comp, (J.transpose() * g * J - g).cwiseAbs().maxCoeff());
        }
    } else {
        double& unit = axiom("eta(xi) = 1");
        double& sq = axiom("phi^2 = -I + xi (x) eta");
        double& comp = axiom("g(phi X, phi Y) = g(X, Y) - eta(X) eta(Y)");
        double& kerxi = axiom("phi xi = 0");
        double& kereta = axiom("eta o phi = 0");
        for (const Point& p : points) {
            Eigen::MatrixXd J = st.J_at(p);
            Eigen::VectorXd xi = st.xi_at(p), eta = st.eta_at(p);
            Eigen::MatrixXd g = metric_at(setup.g1, p).g;
            unit = std::max(unit, std::abs(eta.dot(xi) - 1));
            sq = std::max(sq, (J * J + I - xi * eta.transpose()).cwiseAbs().maxCoeff());
            comp = std::max(
                comp, (J.transpose() * g * J - g + eta * eta.transpose()).cwiseAbs().maxCoeff());
            kerxi = std::max(kerxi, (J * xi).cwiseAbs().maxCoeff());
            kereta = std::max(kereta, (eta.transpose() * J).cwiseAbs().maxCoeff());
        }
    }
    for (const auto& ax : rep.axioms) rep.max_residual = std::max(rep.max_residual, ax.residual);
    rep.pass = rep.max_residual < struct_tol;
    return rep;
}

PQNorms pq_norms(const SubmersionSetup& setup, const Point& p, const FramePair& frames) {
    if (!setup.structure) throw MissingStructure("setup declares no structure tensor");
    StructureAt at = structure_at(*setup.structure, p);
    Eigen::MatrixXd g = metric_at(setup.g1, p).g;
    const Eigen::MatrixXd& V = frames.vertical;
    const Eigen::MatrixXd& Hh = frames.horizontal;
    PQNorms out;
    out.qform = ((at.J * V).transpose() * g * V).eval();  // (i,j) = g1(J V_i, V_j)
    out.pv = ((at.J * V).transpose() * g * Hh).eval();
    out.pform = ((at.J * Hh).transpose() * g * Hh).eval();
    out.etaV = V.transpose() * at.eta;
    out.etaH = Hh.transpose() * at.eta;
    out.normQ2 = out.qform.squaredNorm();
    out.normP2 = out.pform.squaredNorm();
    out.normPV2 = out.pv.squaredNorm();
    return out;
}

XiPlacement xi_placement(const SubmersionSetup& setup, const Point& p,
                         const FramePair& frames, double align_tol) {
    if (!setup.structure) throw MissingStructure("setup declares no structure tensor");
    if (setup.structure->kind != StructureKind::AlmostContact)
        throw MissingStructure("complex structure has no xi");
    Eigen::VectorXd xi = setup.structure->xi_at(p);
    Eigen::MatrixXd g = metric_at(setup.g1, p).g;
    double horiz = (frames.horizontal.transpose() * g * xi).norm();
    double vert = (frames.vertical.transpose() * g * xi).norm();
    if (horiz <= align_tol) return XiPlacement::Vertical;
    if (vert <= align_tol) return XiPlacement::Horizontal;
    throw MixedStructureVector("xi is neither vertical nor horizontal at the point");
}

ModelFitReport model_fit(const SubmersionSetup& setup, const std::vector<Point>& points,
                         const SpaceFormModel& model) {
    if (model.needs_structure() && !setup.structure)
        throw MissingStructure("model family needs a structure tensor");
    ModelFitReport rep;
    rep.tolerance = tol::fit(setup.g1.mode());
    int n = setup.n();
    Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(n, n);
    for (const Point& p : points) {
        CurvatureTensor R = riemann(setup.g1, p);
        Eigen::MatrixXd g = metric_at(setup.g1, p).g;
        StructureAt at;
        const StructureAt* atp = nullptr;
        if (model.needs_structure()) {
            at = structure_at(*setup.structure, p);
            atp = &at;
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        double want = model_curvature(model, g, atp, basis.col(i), basis.col(j),
                                                      basis.col(k), basis.col(l));
                        rep.residual = std::max(rep.residual, std::abs(R.R(i, j, k, l) - want));
                    }
    }
    rep.pass = rep.residual < rep.tolerance;
    return rep;
}

}  // namespace subcurv
