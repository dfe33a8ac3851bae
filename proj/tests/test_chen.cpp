#include "subcurv/chen.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "support/random.hpp"
#include "support/setups.hpp"

using namespace subcurv;
using testsup::pt;

namespace {

Plane2 vertical_plane(const FramePair& fr) {
    return {PlaneSpace::Vertical, fr.vertical.col(0), fr.vertical.col(1)};
}

Plane2 horizontal_plane(const FramePair& fr) {
    return {PlaneSpace::Horizontal, fr.horizontal.col(0), fr.horizontal.col(1)};
}

double term(const InequalityReport& rep, const std::string& name) {
    for (const auto& [key, val] : rep.terms)
        if (key == name) return val;
    REQUIRE(false);
    return 0;
}

LemmaInstance solved_instance(int k, const Eigen::VectorXd& a) {
    LemmaInstance inst;
    inst.k = k;
    inst.a = a;
    inst.b = a.sum() * a.sum() / (k - 1) - a.squaredNorm();
    return inst;
}

}  // namespace

TEST_CASE("algebraic lemma on solved instances") {
    Eigen::VectorXd a3(3);
    a3 << 1, 1, 2;
    LemmaResult r3 = chen_lemma_gap({3, a3, 2.0});
    CHECK(std::abs(r3.gap) < 1e-15);
    CHECK(r3.equality);
    CHECK(r3.condition_residual < 1e-15);

    Eigen::VectorXd a4 = Eigen::VectorXd::Ones(4);
    LemmaResult r4 = chen_lemma_gap({4, a4, 4.0 / 3});
    CHECK(std::abs(r4.gap - 2.0 / 3) < 1e-12);
    CHECK_FALSE(r4.equality);

    LemmaResult r0 = chen_lemma_gap({5, Eigen::VectorXd::Zero(5), 0.0});
    CHECK(r0.gap == 0.0);
    CHECK(r0.equality);

    Eigen::VectorXd bad(3);
    bad << 1, 1, 1;
    CHECK_THROWS_AS(chen_lemma_gap({3, bad, 1.0}), ConstraintViolated);
    CHECK_THROWS_AS(chen_lemma_gap({2, bad.head(2), 0.0}), ConstraintViolated);
    CHECK_THROWS_AS(chen_lemma_gap({4, bad, 0.0}), ShapeError);
}

TEST_CASE("algebraic lemma holds on random instances") {
    std::mt19937 rng(20250822);
    std::uniform_real_distribution<double> ua(-2.0, 2.0);
    std::uniform_int_distribution<int> uk(3, 10);
    for (int t = 0; t < 300; ++t) {
        int k = uk(rng);
        Eigen::VectorXd a(k);
        for (int i = 0; i < k; ++i) a(i) = ua(rng);
        LemmaResult res = chen_lemma_gap(solved_instance(k, a));
        CHECK(res.gap >= -1e-9);
        if (res.condition_residual < 1e-9) CHECK(std::abs(res.gap) < 1e-7);
    }
    for (int t = 0; t < 50; ++t) {
        int k = uk(rng);
        Eigen::VectorXd a(k);
        a(0) = ua(rng);
        a(1) = ua(rng);
        for (int i = 2; i < k; ++i) a(i) = a(0) + a(1);
        LemmaResult res = chen_lemma_gap(solved_instance(k, a));
        CHECK(std::abs(res.gap) < 1e-7);
        CHECK(res.equality);
    }
}

TEST_CASE("fiber estimate on the totally geodesic example") {
    SubmersionSetup setup = testsup::squared_r6_setup(DerivMode::Analytic);
    Point p = pt({1, 1, 1, 1, 1, 1});
    FramePair fr = build_frames(setup, p);
    InequalityReport rep = check_vertical(setup, p, vertical_plane(fr));
    CHECK(rep.theorem == "thm31");
    CHECK(rep.holds);
    CHECK(rep.equality);
    CHECK(std::abs(rep.gap) < 1e-6);
    CHECK(rep.conditions.size() == 5);
    for (const auto& c : rep.conditions) {
        CHECK(c.pass);
        CHECK(c.residual < 1e-7);
    }

    InequalityReport mixed =
        check_horizontal_vertical(setup, p, vertical_plane(fr), horizontal_plane(fr));
    CHECK(mixed.holds);
    CHECK(mixed.equality);
}

TEST_CASE("fiber estimate on the warped example") {
    SubmersionSetup setup = testsup::warped_r6_setup(DerivMode::Analytic);
    Point p = pt({0, 0, 0, 0, 0, 0});
    FramePair fr = build_frames(setup, p);
    InequalityReport rep = check_vertical(setup, p, vertical_plane(fr));
    CHECK(rep.holds);
    CHECK_FALSE(rep.equality);
    CHECK(std::abs(rep.gap - 0.5) < 1e-4);
    CHECK(std::abs(term(rep, "normH2") - 2.0 / 9) < 1e-5);

    // the natural-frame trace defect T(V1,V1)^l + T(V2,V2)^l is -1 for l >= 2
    CHECK(rep.conditions[3].label == "T(V1,V1)^l + T(V2,V2)^l = 0 for l >= 2");
    CHECK(std::abs(rep.conditions[3].residual - 1.0) < 1e-4);
    CHECK_FALSE(rep.conditions[3].pass);

    InequalityReport dh = check_delta_hat(setup, p);
    CHECK(dh.theorem == "thm32");
    CHECK(dh.holds);
    CHECK(dh.gap > 0);

    InequalityReport mixed =
        check_horizontal_vertical(setup, p, vertical_plane(fr), horizontal_plane(fr));
    CHECK(mixed.holds);
    CHECK(std::abs(mixed.gap - 7.5) < 1e-3);
    CHECK(std::abs(term(mixed, "deltaN") + 2.0) < 1e-4);
}

TEST_CASE("estimates and closed forms on the quaternionic fibration") {
    SubmersionSetup setup = testsup::hopf_setup(DerivMode::Analytic);
    Point p = pt({0.3, -0.2, 0.4, 0.5, 0.1, -0.3, 0.2});
    FramePair fr = build_frames(setup, p);
    Plane2 pi = vertical_plane(fr), pp = horizontal_plane(fr);
    SpaceFormModel unit = SpaceFormModel::real(1.0);

    InequalityReport raw = check_vertical(setup, p, pi);
    CHECK(raw.holds);
    CHECK(raw.equality);

    InequalityReport rsf = check_vertical(setup, p, pi, &unit);
    CHECK(rsf.theorem == "rsf_thm36");
    CHECK(std::abs(rsf.lhs - 2.0) < 1e-4);
    CHECK(std::abs(rsf.rhs - 2.0) < 1e-4);
    CHECK(rsf.equality);
    for (const auto& c : rsf.conditions) CHECK(c.pass);

    InequalityReport dh = check_delta_hat(setup, p, &unit);
    CHECK(std::abs(dh.lhs - 2.0) < 1e-4);
    CHECK(std::abs(dh.rhs - 2.0) < 1e-4);
    CHECK(dh.equality);

    InequalityReport mixed = check_horizontal_vertical(setup, p, pi, pp);
    CHECK(std::abs(mixed.lhs - 19.0) < 1e-3);
    CHECK(std::abs(mixed.rhs - 31.0) < 1e-3);
    CHECK(std::abs(mixed.gap - 12.0) < 1e-3);
    CHECK(mixed.holds);
    CHECK_FALSE(mixed.equality);

    InequalityReport closed = check_horizontal_vertical(setup, p, pi, pp, &unit);
    CHECK(closed.theorem == "rsf_thm43");
    CHECK(std::abs(closed.lhs - 19.0) < 1e-4);
    CHECK(closed.gap >= -1e-6);
    CHECK(std::abs(term(closed, "lhs_closed") - term(closed, "lhs_raw")) < 1e-5);
}

TEST_CASE("gap is invariant under plane reparametrization") {
    SubmersionSetup warped = testsup::warped_r6_setup(DerivMode::Analytic);
    Point p = pt({0.1, -0.2, 0.3, 0.2, -0.1, 0.15});
    FramePair fr = build_frames(warped, p);
    Plane2 pi = vertical_plane(fr);
    double base = check_vertical(warped, p, pi).gap;
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> uphi(0, 6.28);
    for (int t = 0; t < 4; ++t) {
        double phi = uphi(rng);
        Plane2 rot{PlaneSpace::Vertical,
                   std::cos(phi) * fr.vertical.col(0) + std::sin(phi) * fr.vertical.col(1),
                   -std::sin(phi) * fr.vertical.col(0) + std::cos(phi) * fr.vertical.col(1)};
        CHECK(std::abs(check_vertical(warped, p, rot).gap - base) < 1e-7);
    }
    // non-orthogonal spanning pair of the same plane
    Plane2 skew{PlaneSpace::Vertical, fr.vertical.col(0),
                fr.vertical.col(0) + 0.5 * fr.vertical.col(1)};
    CHECK(std::abs(check_vertical(warped, p, skew).gap - base) < 1e-7);
}

TEST_CASE("deltaHat bound dominates every plane choice") {
    for (auto which : {0, 1}) {
        SubmersionSetup setup = which == 0 ? testsup::hopf_setup(DerivMode::Analytic)
                                           : testsup::warped_r6_setup(DerivMode::Analytic);
        Point p = which == 0 ? pt({0.3, -0.2, 0.4, 0.5, 0.1, -0.3, 0.2})
                             : pt({0.1, -0.2, 0.3, 0.2, -0.1, 0.15});
        InequalityReport dh = check_delta_hat(setup, p);
        FramePair fr = build_frames(setup, p);
        std::mt19937 rng(2024 + which);
        for (int t = 0; t < 5; ++t) {
            Eigen::MatrixXd Q = testsup::random_orthogonal(rng, fr.r());
            FramePair rot = rotate_vertical(fr, Q);
            InequalityReport v = check_vertical(setup, p, vertical_plane(rot));
            CHECK(dh.rhs <= v.lhs + 1e-7);
        }
    }
}

TEST_CASE("complex flat example meets the complex closed forms") {
    SubmersionSetup setup = testsup::complex_r6_setup(DerivMode::Analytic);
    Point p = pt({1, 1, 1, 1, 1, 1});
    FramePair fr = build_frames(setup, p);
    SpaceFormModel model = SpaceFormModel::complex_form(0.0);

    InequalityReport rep = check_vertical(setup, p, vertical_plane(fr), &model);
    CHECK(rep.theorem == "csf_thm38");
    CHECK(rep.holds);
    CHECK(rep.equality);
    CHECK(std::abs(term(rep, "rhs_closed") - term(rep, "rhs_raw")) < 1e-5);
    CHECK(std::abs(term(rep, "normQ2")) < 1e-12);

    InequalityReport mixed = check_horizontal_vertical(setup, p, vertical_plane(fr),
                                                       horizontal_plane(fr), &model);
    CHECK(mixed.theorem == "csf_thm45");
    CHECK(mixed.holds);
    CHECK(mixed.equality);
    CHECK(std::abs(term(mixed, "lhs_closed") - term(mixed, "lhs_raw")) < 1e-5);
    CHECK(std::abs(term(mixed, "normPV2") - 3.0) < 1e-12);
}

TEST_CASE("cosymplectic flat example uses the horizontal xi branch") {
    SubmersionSetup setup = testsup::cosymplectic_r7_setup(DerivMode::Analytic);
    Point p = pt({0.2, 0.4, -0.1, 0.3, 0.5, -0.2, 0.6});
    FramePair fr = build_frames(setup, p);
    SpaceFormModel model = SpaceFormModel::cosymplectic(0.0);

    InequalityReport rep = check_vertical(setup, p, vertical_plane(fr), &model);
    CHECK(rep.theorem == "gssf_thm310");
    CHECK(rep.note == "xi horizontal");
    CHECK(rep.holds);
    CHECK(rep.equality);
    CHECK(std::abs(term(rep, "rhs_closed") - term(rep, "rhs_raw")) < 1e-5);

    InequalityReport mixed = check_horizontal_vertical(setup, p, vertical_plane(fr),
                                                       horizontal_plane(fr), &model);
    CHECK(mixed.theorem == "gssf_thm47");
    CHECK(mixed.holds);
    CHECK(mixed.equality);
    CHECK(std::abs(term(mixed, "gamma_P")) < 1e-12);
    CHECK(std::abs(term(mixed, "lhs_closed") - term(mixed, "lhs_raw")) < 1e-5);
}

TEST_CASE("checker error taxonomy") {
    // r = 2 fiber
    SubmersionSetup thin(
        testsup::metric(testsup::diag({"1", "1", "1", "1"}), DerivMode::Analytic),
        testsup::metric(testsup::diag({"1", "1"}), DerivMode::Analytic),
        SmoothMap::parse(4, {"x1", "x2"}, DerivMode::Analytic));
    Point p4 = pt({0, 0, 0, 0});
    FramePair fr4 = build_frames(thin, p4);
    CHECK_THROWS_AS(check_vertical(thin, p4, vertical_plane(fr4)), FiberTooSmall);
    CHECK_THROWS_AS(check_delta_hat(thin, p4), FiberTooSmall);

    // model that does not fit the ambient curvature
    SubmersionSetup warped = testsup::warped_r6_setup(DerivMode::Analytic);
    Point p6 = pt({0, 0, 0, 0, 0, 0});
    FramePair fr6 = build_frames(warped, p6);
    SpaceFormModel unit = SpaceFormModel::real(1.0);
    CHECK_THROWS_AS(check_vertical(warped, p6, vertical_plane(fr6), &unit), ModelMisfit);

    // plane in the wrong distribution
    Plane2 wrong{PlaneSpace::Horizontal, fr6.horizontal.col(0), fr6.horizontal.col(1)};
    CHECK_THROWS_AS(check_vertical(warped, p6, wrong), ConstraintViolated);
    Plane2 off{PlaneSpace::Vertical, fr6.horizontal.col(0), fr6.horizontal.col(1)};
    CHECK_THROWS_AS(check_vertical(warped, p6, off), DegeneratePlane);

    // xi straddling the splitting surfaces as MixedStructureVector
    std::vector<std::vector<std::string>> rows(7, std::vector<std::string>(7, "0"));
    rows[0][1] = "-1";
    rows[1][0] = "1";
    rows[2][3] = "-1";
    rows[3][2] = "1";
    rows[4][5] = "-1";
    rows[5][4] = "1";
    std::vector<std::string> xi{"0", "0", "0", "0", "1", "0", "1"};
    auto tilted = std::make_shared<StructureTensors>(StructureTensors::parse(
        StructureKind::AlmostContact, 7, rows, xi, xi));
    SubmersionSetup straddle(
        testsup::metric(testsup::diag({"1", "1", "1", "1", "1", "1", "1"}), DerivMode::Analytic),
        testsup::metric(testsup::diag({"1", "1", "1", "1"}), DerivMode::Analytic),
        SmoothMap::parse(7, {"x2", "x4", "x6", "x7"}, DerivMode::Analytic), tilted);
    Point p7 = pt({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7});
    FramePair fr7 = build_frames(straddle, p7);
    SpaceFormModel cosym = SpaceFormModel::cosymplectic(0.0);
    CHECK_THROWS_AS(check_vertical(straddle, p7, vertical_plane(fr7), &cosym),
                    MixedStructureVector);
}
