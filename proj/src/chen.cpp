#include "subcurv/chen.hpp"

#include <algorithm>
#include <cmath>

#include "subcurv/metric.hpp"
#include "subcurv/oneill.hpp"

namespace subcurv {

namespace {

double mean_coeff(int r) {
    return static_cast<double>(r) * r * (r - 2) / (2.0 * (r - 1));
}

void require_fiber(const SubmersionSetup& setup) {
    if (setup.r() <= 2)
        throw FiberTooSmall("fiber dimension r = " + std::to_string(setup.r()) +
                            "; the curvature estimates need r > 2");
}

// T components contracted with a unit horizontal direction u.
Eigen::MatrixXd contract_dir(const Tensor3& tH, int r, int s, const Eigen::VectorXd& u) {
    Eigen::MatrixXd td = Eigen::MatrixXd::Zero(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            for (int a = 0; a < s; ++a) td(i, j) += tH(i, j, a) * u(a);
    return td;
}

// Rotate V1, V2 by angle theta inside the plane they span.
Tensor3 rotate_pair(const Tensor3& tH, int r, int s, double theta) {
    double c = std::cos(theta), sn = std::sin(theta);
    Tensor3 out = tH;
    for (int l = 0; l < s; ++l) {
        double t00 = tH(0, 0, l), t01 = tH(0, 1, l), t11 = tH(1, 1, l);
        out(0, 0, l) = c * c * t00 + 2 * c * sn * t01 + sn * sn * t11;
        out(1, 1, l) = sn * sn * t00 - 2 * c * sn * t01 + c * c * t11;
        out(0, 1, l) = (c * c - sn * sn) * t01 + c * sn * (t11 - t00);
        out(1, 0, l) = out(0, 1, l);
        for (int j = 2; j < r; ++j) {
            double a0 = tH(0, j, l), a1 = tH(1, j, l);
            out(0, j, l) = c * a0 + sn * a1;
            out(1, j, l) = -sn * a0 + c * a1;
            out(j, 0, l) = out(0, j, l);
            out(j, 1, l) = out(1, j, l);
        }
    }
    return out;
}

struct FamilySet {
    std::vector<EqualityCondition> conds;
    double worst = 0;
};

// Evaluate the five equality families for one distinguished direction.
// sweep_l >= 0 marks a frame direction (whose index is then excluded from
// the natural-frame family 4); sweep_l == -1 means u is H/|H| and family 4
// excludes the first frame direction.
FamilySet families_for(const Tensor3& tH, int r, int s, const Eigen::VectorXd& u,
                       int sweep_l, double eq_tol) {
    Eigen::MatrixXd td = contract_dir(tH, r, s, u);
    double theta = 0.5 * std::atan2(2 * td(0, 1), td(0, 0) - td(1, 1));
    Tensor3 tr = rotate_pair(tH, r, s, theta);
    Eigen::MatrixXd tdr = contract_dir(tr, r, s, u);

    double f1 = 0, f2 = 0, f3 = 0, f4 = 0, f5 = 0;
    for (int j = 2; j < r; ++j)
        for (int l = 0; l < s; ++l)
            f1 = std::max({f1, std::abs(tr(0, j, l)), std::abs(tr(1, j, l))});
    for (int i = 2; i < r; ++i)
        for (int j = 2; j < r; ++j) {
            if (i != j) f2 = std::max(f2, std::abs(tdr(i, j)));
            for (int l = 0; l < s; ++l)
                f3 = std::max(f3, std::abs(tr(i, j, l) - tdr(i, j) * u(l)));
        }
    int excluded = sweep_l >= 0 ? sweep_l : 0;
    for (int l = 0; l < s; ++l)
        if (l != excluded) f4 = std::max(f4, std::abs(tr(0, 0, l) + tr(1, 1, l)));
    double t1 = tdr(0, 0) + tdr(1, 1);
    for (int j = 2; j < r; ++j) f5 = std::max(f5, std::abs(tdr(j, j) - t1));

    FamilySet fs;
    auto add = [&fs, eq_tol](const char* label, double res) {
        fs.conds.push_back({label, res, res < eq_tol});
        fs.worst = std::max(fs.worst, res);
    };
    add("T(V1,Vj) and T(V2,Vj) vanish for j > 2", f1);
    add("distinguished T(Vi,Vj) vanishes for distinct i, j > 2", f2);
    add("T(Vi,Vj) lies along the distinguished direction for i, j > 2", f3);
    add("T(V1,V1)^l + T(V2,V2)^l = 0 for l >= 2", f4);
    add("trace chain T(V1,V1) + T(V2,V2) = T(Vj,Vj) along the distinguished direction", f5);
    return fs;
}

// Frame coefficients of H, then the families; when H vanishes all frame
// directions are swept and the best sweep wins.
std::vector<EqualityCondition> diagnostics_from(const SubmersionSetup& setup, const Point& p,
                                                const FramePair& fr, const ONeillData& od,
                                                const CheckTols& tols) {
    int r = fr.r(), s = fr.s();
    Eigen::MatrixXd g = metric_at(setup.g1, p).g;
    Eigen::VectorXd hco = fr.horizontal.transpose() * g * od.H;
    if (hco.norm() > tols.align_tol)
        return families_for(od.tH, r, s, hco.normalized(), -1, tols.eq_tol).conds;
    FamilySet best;
    for (int l0 = 0; l0 < s; ++l0) {
        Eigen::VectorXd u = Eigen::VectorXd::Unit(s, l0);
        FamilySet fs = families_for(od.tH, r, s, u, l0, tols.eq_tol);
        if (l0 == 0 || fs.worst < best.worst) best = std::move(fs);
    }
    return best.conds;
}

void gate_model_fit(const SubmersionSetup& setup, const Point& p, const SpaceFormModel& model,
                    const CheckTols& tols) {
    ModelFitReport fit = model_fit(setup, {p}, model);
    double bar = tols.fit_tol > 0 ? tols.fit_tol : fit.tolerance;
    if (fit.residual >= bar)
        throw ModelMisfit("ambient curvature deviates from the model by " +
                          std::to_string(fit.residual));
}

void cross_check(double closed, double raw, const CheckTols& tols, const char* side) {
    if (std::abs(closed - raw) > tols.xcheck_tol)
        throw ModelMisfit(std::string(side) + " closed form disagrees with the frame value by " +
                          std::to_string(std::abs(closed - raw)));
}

}  // namespace

LemmaResult chen_lemma_gap(const LemmaInstance& inst, double lemma_tol) {
    if (inst.k <= 2) throw ConstraintViolated("the lemma needs k > 2");
    if (inst.a.size() != inst.k)
        throw ShapeError("expected " + std::to_string(inst.k) + " values");
    double sum = inst.a.sum();
    double sq = inst.a.squaredNorm();
    double residual = std::abs(sum * sum - (inst.k - 1) * (sq + inst.b));
    double scale = std::max(1.0, std::max(sum * sum, (inst.k - 1) * (sq + std::abs(inst.b))));
    if (residual >= lemma_tol * scale)
        throw ConstraintViolated("constraint residual " + std::to_string(residual));
    LemmaResult res;
    res.gap = 2 * inst.a(0) * inst.a(1) - inst.b;
    double head = inst.a(0) + inst.a(1);
    for (int j = 2; j < inst.k; ++j)
        res.condition_residual = std::max(res.condition_residual, std::abs(head - inst.a(j)));
    res.equality = res.condition_residual <= 1e-8;
    return res;
}

double InequalityReport::worst_condition_residual() const {
    double w = 0;
    for (const auto& c : conditions) w = std::max(w, c.residual);
    return w;
}

InequalityReport check_vertical(const SubmersionSetup& setup, const Point& p, const Plane2& pi,
                                const SpaceFormModel* model, const CheckTols& tols) {
    require_fiber(setup);
    if (pi.space != PlaneSpace::Vertical)
        throw ConstraintViolated("Pi must be a vertical plane");
    FramePair fr = adapt_vertical_pair(setup, build_frames(setup, p), pi.b1, pi.b2);
    InvariantEngine eng(setup, fr);
    const InvariantBundle bu = eng.scalars();
    const ONeillData& od = eng.oneill().data();
    int r = setup.r();
    double cH = mean_coeff(r);

    InequalityReport rep;
    rep.theorem = "thm31";
    rep.point = p;
    rep.plane_vectors = {fr.vertical.col(0), fr.vertical.col(1)};
    double K_ker = eng.r_ker(0, 1, 1, 0);
    double K_m1 = eng.r_m1(0, 1, 1, 0);
    rep.lhs = bu.tauV_ker - K_ker;
    double rhs_raw = bu.tauV_M1 - K_m1 - cH * od.normH2;
    rep.rhs = rhs_raw;

    rep.terms = {{"tauV_ker", bu.tauV_ker}, {"K_V_ker(Pi)", K_ker},
                 {"tauV_M1", bu.tauV_M1},   {"K_V_M1(Pi)", K_m1},
                 {"normH2", od.normH2},     {"mean_term", cH * od.normH2},
                 {"rhs_raw", rhs_raw}};

    if (model != nullptr) {
        gate_model_fit(setup, p, *model, tols);
        double closed = 0;
        if (model->family == ModelFamily::Real) {
            rep.theorem = "rsf_thm36";
            closed = 0.5 * model->c * (r * r - r - 2) - cH * od.normH2;
        } else if (model->family == ModelFamily::Complex) {
            rep.theorem = "csf_thm38";
            PQNorms pq = pq_norms(setup, p, fr);
            double q12 = pq.qform(0, 1);
            closed = 0.5 * ((model->c / 4) * (r * r - r - 2) +
                            (3 * model->c / 4) * (pq.normQ2 - 2 * q12 * q12)) -
                     cH * od.normH2;
            rep.terms.push_back({"normQ2", pq.normQ2});
            rep.terms.push_back({"g1(V1,QV2)", q12});
        } else {
            rep.theorem = "gssf_thm310";
            PQNorms pq = pq_norms(setup, p, fr);
            XiPlacement place = xi_placement(setup, p, fr, tols.align_tol);
            double q12 = pq.qform(0, 1);
            double theta = pq.etaV(0) * pq.etaV(0) + pq.etaV(1) * pq.etaV(1);
            closed = -cH * od.normH2 + 0.5 * model->c1 * (r * r - r - 2) +
                     1.5 * model->c2 * (pq.normQ2 - 2 * q12 * q12);
            if (place == XiPlacement::Vertical) closed -= model->c3 * ((r - 1) - theta);
            rep.note = place == XiPlacement::Vertical ? "xi vertical" : "xi horizontal";
            rep.terms.push_back({"normQ2", pq.normQ2});
            rep.terms.push_back({"g1(V1,QV2)", q12});
            rep.terms.push_back({"theta_Pi", theta});
        }
        cross_check(closed, rhs_raw, tols, "rhs");
        rep.rhs = closed;
        rep.terms.push_back({"rhs_closed", closed});
    }

    rep.gap = rep.lhs - rep.rhs;
    rep.holds = rep.gap >= -tols.gap_tol;
    rep.equality = std::abs(rep.gap) <= tols.eq_tol;
    rep.conditions = diagnostics_from(setup, p, fr, od, tols);
    return rep;
}

InequalityReport check_delta_hat(const SubmersionSetup& setup, const Point& p,
                                 const SpaceFormModel* model, const CheckTols& tols) {
    require_fiber(setup);
    FramePair fr = build_frames(setup, p);
    InvariantEngine eng(setup, fr);
    const InvariantBundle bu = eng.scalars();
    const ONeillData& od = eng.oneill().data();
    int r = setup.r();
    double cH = mean_coeff(r);

    if (model != nullptr) gate_model_fit(setup, p, *model, tols);

    double sup_ker =
        extremal_sectional(eng, PlaneSpace::Vertical, ExtremalMode::Sup, CurvModel::Induced).value;
    double sup_m1 =
        extremal_sectional(eng, PlaneSpace::Vertical, ExtremalMode::Sup, CurvModel::Ambient).value;

    InequalityReport rep;
    rep.theorem = "thm32";
    rep.point = p;
    rep.lhs = bu.tauV_ker - sup_ker;
    rep.rhs = bu.tauV_M1 - sup_m1 - cH * od.normH2;
    rep.gap = rep.lhs - rep.rhs;
    rep.holds = rep.gap >= -tols.gap_tol;
    rep.equality = std::abs(rep.gap) <= tols.eq_tol;
    rep.terms = {{"tauV_ker", bu.tauV_ker}, {"supK_V_ker", sup_ker},
                 {"tauV_M1", bu.tauV_M1},   {"supK_V_M1", sup_m1},
                 {"normH2", od.normH2},     {"mean_term", cH * od.normH2}};
    return rep;
}

InequalityReport check_horizontal_vertical(const SubmersionSetup& setup, const Point& p,
                                           const Plane2& pi, const Plane2& pp,
                                           const SpaceFormModel* model, const CheckTols& tols) {
    require_fiber(setup);
    if (setup.s() < 2)
        throw DimensionTooSmall("the mixed estimate needs a horizontal 2-plane");
    if (pi.space != PlaneSpace::Vertical)
        throw ConstraintViolated("Pi must be a vertical plane");
    if (pp.space != PlaneSpace::Horizontal)
        throw ConstraintViolated("P must be a horizontal plane");
    FramePair fr = adapt_vertical_pair(setup, build_frames(setup, p), pi.b1, pi.b2);
    fr = adapt_horizontal_pair(setup, fr, pp.b1, pp.b2);
    InvariantEngine eng(setup, fr);
    const InvariantBundle bu = eng.scalars();
    const ONeillData& od = eng.oneill().data();
    int r = setup.r(), s = setup.s();
    double cH = mean_coeff(r);

    double KV_m1 = eng.r_m1(0, 1, 1, 0);
    double KV_ker = eng.r_ker(0, 1, 1, 0);
    double KH_m1 = eng.r_m1(r, r + 1, r + 1, r);
    double KH_perp = eng.r_perp(0, 1, 1, 0);

    double lhs_raw = bu.tauV_M1 - KV_m1 + bu.tauH_M1 - KH_m1 + bu.mixed_sum;

    double a_sum3 = 0, a_sum15 = 0;
    for (int j = 2; j < s; ++j)
        for (int al = 0; al < r; ++al) a_sum3 += od.aV(0, j, al) * od.aV(0, j, al);
    for (int i = 1; i < s; ++i)
        for (int j = 1; j < s; ++j)
            for (int al = 0; al < r; ++al) a_sum15 += od.aV(i, j, al) * od.aV(i, j, al);
    a_sum3 *= 3;
    a_sum15 *= 1.5;

    double rhs = bu.tauH_perp - KH_perp + bu.tauV_ker - KV_ker + cH * od.normH2 -
                 0.5 * od.normAH2 + a_sum3 + a_sum15 - od.deltaN + 0.5 * od.normTV2;

    InequalityReport rep;
    rep.theorem = "thm41";
    rep.point = p;
    rep.plane_vectors = {fr.vertical.col(0), fr.vertical.col(1), fr.horizontal.col(0),
                         fr.horizontal.col(1)};
    rep.lhs = lhs_raw;
    rep.rhs = rhs;
    rep.terms = {{"tauV_M1", bu.tauV_M1},   {"K_V_M1(Pi)", KV_m1},
                 {"tauH_M1", bu.tauH_M1},   {"K_H_M1(P)", KH_m1},
                 {"mixed_sum", bu.mixed_sum}, {"lhs_raw", lhs_raw},
                 {"tauH_perp", bu.tauH_perp}, {"K_H_perp(P)", KH_perp},
                 {"tauV_ker", bu.tauV_ker}, {"K_V_ker(Pi)", KV_ker},
                 {"normH2", od.normH2},     {"mean_term", cH * od.normH2},
                 {"normAH2", od.normAH2},   {"aV_sum_first_row", a_sum3},
                 {"aV_sum_lower_block", a_sum15}, {"deltaN", od.deltaN},
                 {"normTV2", od.normTV2}};

    if (model != nullptr) {
        gate_model_fit(setup, p, *model, tols);
        double dims = static_cast<double>(r) * r + static_cast<double>(s) * s +
                      2.0 * s * r - s - r - 4;
        double closed = 0;
        if (model->family == ModelFamily::Real) {
            rep.theorem = "rsf_thm43";
            closed = 0.5 * model->c * dims;
        } else if (model->family == ModelFamily::Complex) {
            rep.theorem = "csf_thm45";
            PQNorms pq = pq_norms(setup, p, fr);
            double q12 = pq.qform(0, 1), p12 = pq.pform(0, 1);
            double struct_norms =
                pq.normQ2 + pq.normP2 + 2 * pq.normPV2 - 2 * q12 * q12 - 2 * p12 * p12;
            closed = (model->c / 8) * dims + (3 * model->c / 8) * struct_norms;
            rep.terms.push_back({"normQ2", pq.normQ2});
            rep.terms.push_back({"normP2", pq.normP2});
            rep.terms.push_back({"normPV2", pq.normPV2});
            rep.terms.push_back({"g1(V1,QV2)", q12});
            rep.terms.push_back({"g1(h1,Ph2)", p12});
        } else {
            rep.theorem = "gssf_thm47";
            PQNorms pq = pq_norms(setup, p, fr);
            XiPlacement place = xi_placement(setup, p, fr, tols.align_tol);
            double q12 = pq.qform(0, 1), p12 = pq.pform(0, 1);
            double struct_norms =
                pq.normQ2 + pq.normP2 + 2 * pq.normPV2 - 2 * q12 * q12 - 2 * p12 * p12;
            double theta = pq.etaV(0) * pq.etaV(0) + pq.etaV(1) * pq.etaV(1);
            double gamma = pq.etaH(0) * pq.etaH(0) + pq.etaH(1) * pq.etaH(1);
            closed = 0.5 * model->c1 * dims + 1.5 * model->c2 * struct_norms;
            closed -= place == XiPlacement::Vertical ? model->c3 * (r + s - 1 - theta)
                                                     : model->c3 * (s + r - 1 - gamma);
            rep.note = place == XiPlacement::Vertical ? "xi vertical" : "xi horizontal";
            rep.terms.push_back({"normQ2", pq.normQ2});
            rep.terms.push_back({"normP2", pq.normP2});
            rep.terms.push_back({"normPV2", pq.normPV2});
            rep.terms.push_back({"g1(V1,QV2)", q12});
            rep.terms.push_back({"g1(h1,Ph2)", p12});
            rep.terms.push_back({"theta_Pi", theta});
            rep.terms.push_back({"gamma_P", gamma});
        }
        cross_check(closed, lhs_raw, tols, "lhs");
        rep.lhs = closed;
        rep.terms.push_back({"lhs_closed", closed});
    }

    rep.gap = rep.rhs - rep.lhs;
    rep.holds = rep.gap >= -tols.gap_tol;
    rep.equality = std::abs(rep.gap) <= tols.eq_tol;
    rep.conditions = diagnostics_from(setup, p, fr, od, tols);
    return rep;
}

std::vector<EqualityCondition> equality_diagnostics(const SubmersionSetup& setup, const Point& p,
                                                    const Plane2& pi, const CheckTols& tols) {
    require_fiber(setup);
    if (pi.space != PlaneSpace::Vertical)
        throw ConstraintViolated("Pi must be a vertical plane");
    FramePair fr = adapt_vertical_pair(setup, build_frames(setup, p), pi.b1, pi.b2);
    ONeillEngine oe(setup, fr, false);
    return diagnostics_from(setup, p, fr, oe.data(), tols);
}

}  // namespace subcurv
