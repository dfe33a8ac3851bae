#include "subcurv/metric.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "support/setups.hpp"

using namespace subcurv;
using testsup::metric;
using testsup::pt;

namespace {

const Point origin6 = pt({0, 0, 0, 0, 0, 0});
const Point generic6 = pt({0.1, -0.2, 0.3, 0.4, -0.1, 0.25});

Eigen::VectorXd rand_vec(int n, std::mt19937& rng) {
    std::normal_distribution<double> N;
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = N(rng);
    return v;
}

}  // namespace

TEST_CASE("metric evaluation") {
    auto euc = metric(testsup::diag({"1", "1", "1"}), DerivMode::Analytic);
    CHECK(euc.value(pt({0.3, -1, 2})).isApprox(Eigen::MatrixXd::Identity(3, 3)));

    auto warped = metric(testsup::warped_r6_g1(), DerivMode::Analytic);
    CHECK(warped.value(origin6).isApprox(Eigen::MatrixXd::Identity(6, 6)));
    Eigen::MatrixXd g = warped.value(generic6);
    CHECK(g(0, 0) == doctest::Approx(std::exp(0.8)));
    CHECK(g(1, 1) == doctest::Approx(std::exp(0.5)));
    CHECK(g(3, 3) == doctest::Approx(std::exp(0.5)));
    CHECK(g(5, 5) == doctest::Approx(std::exp(0.8)));

    auto squared = metric(testsup::squared_r6_g1(), DerivMode::Analytic,
                          testsup::squared_r6_domain());
    CHECK(squared.value(pt({2, 1, 1, 1, 1, 1}))(0, 0) == doctest::Approx(4));

    MetricData md = metric_at(warped, generic6);
    CHECK((md.g * md.ginv).isApprox(Eigen::MatrixXd::Identity(6, 6), 1e-12));
}

TEST_CASE("positive definiteness and domain handling") {
    auto bad = metric(testsup::diag({"x1", "1"}), DerivMode::Analytic);
    CHECK_THROWS_AS(metric_at(bad, pt({-1, 0})), NonPositiveDefinite);
    CHECK_THROWS_AS(metric_at(bad, pt({0, 0})), NonPositiveDefinite);

    auto squared = metric(testsup::squared_r6_g1(), DerivMode::Analytic,
                          testsup::squared_r6_domain());
    CHECK_THROWS_AS(squared.value(pt({0, 1, 1, 1, 1, 1})), DomainViolation);

    // difference stencil crossing the domain wall
    auto narrow = metric({{"x1"}}, DerivMode::Difference,
                         {{Expression::parse("x1"), "x1"}});
    CHECK_THROWS_AS(narrow.d1(pt({1e-8})), StencilOutsideDomain);
    CHECK_NOTHROW(narrow.d1(pt({0.5})));

    CHECK_THROWS_AS(metric({{"1", "0"}, {"0", "1"}, {"0", "1"}}, DerivMode::Analytic),
                    ShapeError);
    CHECK_THROWS_AS(metric({{"1", "x1"}, {"x2", "1"}}, DerivMode::Analytic), ShapeError);
    CHECK_NOTHROW(metric({{"1", "x1*x2"}, {"x2*x1", "3"}}, DerivMode::Analytic));
}

TEST_CASE("christoffel symbols match closed forms") {
    auto warped = metric(testsup::warped_r6_g1(), DerivMode::Analytic);

    ChristoffelTable c0 = christoffel(warped, origin6);
    CHECK(c0.gamma(3, 0, 0) == doctest::Approx(-1));  // -e^{2(x4-x6)} at 0
    CHECK(c0.gamma(0, 0, 3) == doctest::Approx(1));
    CHECK(c0.gamma(5, 1, 1) == doctest::Approx(-1));
    CHECK(c0.gamma(1, 1, 5) == doctest::Approx(1));

    ChristoffelTable cg = christoffel(warped, generic6);
    double w = std::exp(2 * (0.4 - 0.25));
    CHECK(cg.gamma(3, 0, 0) == doctest::Approx(-w));
    CHECK(cg.gamma(5, 1, 1) == doctest::Approx(-1 / w));
    CHECK(cg.gamma(5, 3, 3) == doctest::Approx(-1 / w));
    CHECK(cg.gamma(3, 5, 5) == doctest::Approx(-w));
    CHECK(cg.gamma(3, 3, 5) == doctest::Approx(1));
    CHECK(cg.gamma(5, 3, 5) == doctest::Approx(1));
    CHECK(cg.gamma(0, 0, 3) == doctest::Approx(1));
    CHECK(cg.gamma(2, 2, 2) == doctest::Approx(0));

    auto squared = metric(testsup::squared_r6_g1(), DerivMode::Analytic,
                          testsup::squared_r6_domain());
    ChristoffelTable cs = christoffel(squared, pt({2, 1, 1, 1, 1, 1}));
    CHECK(cs.gamma(0, 0, 0) == doctest::Approx(0.5));  // 1/x1 at x1=2

    auto euc = metric(testsup::diag({"1", "1", "1"}), DerivMode::Analytic);
    ChristoffelTable ce = christoffel(euc, pt({1, 2, 3}));
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(ce.gamma(k, i, j) == 0);
}

TEST_CASE("difference and dual modes track the analytic mode") {
    auto exact = metric(testsup::warped_r6_g1(), DerivMode::Analytic);
    auto diff = metric(testsup::warped_r6_g1(), DerivMode::Difference);
    auto dual = metric(testsup::warped_r6_g1(), DerivMode::Dual);

    ChristoffelTable ca = christoffel(exact, generic6);
    ChristoffelTable cd = christoffel(diff, generic6);
    ChristoffelTable cu = christoffel(dual, generic6);
    double worst_d = 0, worst_u = 0;
    for (int k = 0; k < 6; ++k)
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                worst_d = std::max(worst_d, std::abs(cd.gamma(k, i, j) - ca.gamma(k, i, j)));
                worst_u = std::max(worst_u, std::abs(cu.gamma(k, i, j) - ca.gamma(k, i, j)));
            }
    CHECK(worst_d < 1e-6);
    CHECK(worst_u < 1e-10);

    CurvatureTensor ra = riemann(exact, generic6);
    CurvatureTensor rd = riemann(diff, generic6);
    CurvatureTensor ru = riemann(dual, generic6);
    double worst_rd = 0, worst_ru = 0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            for (int k = 0; k < 6; ++k)
                for (int l = 0; l < 6; ++l) {
                    worst_rd = std::max(worst_rd, std::abs(rd.R(i, j, k, l) - ra.R(i, j, k, l)));
                    worst_ru = std::max(worst_ru, std::abs(ru.R(i, j, k, l) - ra.R(i, j, k, l)));
                }
    CHECK(worst_rd < 1e-6);
    CHECK(worst_ru < 1e-8);
}

TEST_CASE("curvature closed forms") {
    // unit round sphere: R(d_theta, d_phi, d_phi, d_theta) = sin^2(theta)
    auto s2 = metric(testsup::sphere2(), DerivMode::Analytic, testsup::sphere2_domain());
    Point p = pt({M_PI / 3, 0.2});
    CurvatureTensor R = riemann(s2, p);
    CHECK(R.R(0, 1, 1, 0) == doctest::Approx(0.75).epsilon(1e-10));

    auto s2d = metric(testsup::sphere2(), DerivMode::Difference, testsup::sphere2_domain());
    CHECK(riemann(s2d, p).R(0, 1, 1, 0) == doctest::Approx(0.75).epsilon(1e-6));

    // sectional curvature is +1 everywhere on the unit sphere
    double denom = 1.0 * std::pow(std::sin(M_PI / 3), 2);
    CHECK(R.R(0, 1, 1, 0) / denom == doctest::Approx(1.0));

    // flat metrics in curvilinear coordinates: polar g = diag(1, x1^2)
    auto polar = metric(testsup::diag({"1", "x1^2"}), DerivMode::Analytic,
                        {{Expression::parse("x1"), "x1"}});
    CurvatureTensor Rp = riemann(polar, pt({1.3, 0.7}));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) CHECK(std::abs(Rp.R(i, j, k, l)) < 1e-10);

    auto squared = metric(testsup::squared_r6_g1(), DerivMode::Analytic,
                          testsup::squared_r6_domain());
    CurvatureTensor Rs = riemann(squared, pt({1, 1, 1, 1, 1, 1}));
    double worst = 0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            for (int k = 0; k < 6; ++k)
                for (int l = 0; l < 6; ++l) worst = std::max(worst, std::abs(Rs.R(i, j, k, l)));
    CHECK(worst < 1e-7);  // flat: u_i = x_i^2/2 is a Euclidean chart

    // scaling g -> lambda^2 g multiplies every (0,4) component by lambda^2
    auto s2x4 = metric(testsup::diag({"4", "4*sin(x1)^2"}), DerivMode::Analytic,
                       testsup::sphere2_domain());
    CHECK(riemann(s2x4, p).R(0, 1, 1, 0) == doctest::Approx(4 * 0.75).epsilon(1e-10));
}

TEST_CASE("curvature tensor symmetries and metricity") {
    auto warped = metric(testsup::warped_r6_g1(), DerivMode::Analytic);
    CurvatureTensor R = riemann(warped, generic6);
    std::mt19937 rng(7151);

    for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXd z1 = rand_vec(6, rng), z2 = rand_vec(6, rng), z3 = rand_vec(6, rng),
                        z4 = rand_vec(6, rng);
        double v = R.value(z1, z2, z3, z4);
        CHECK(std::abs(v + R.value(z2, z1, z3, z4)) < 1e-9);
        CHECK(std::abs(v + R.value(z1, z2, z4, z3)) < 1e-9);
        CHECK(std::abs(v - R.value(z3, z4, z1, z2)) < 1e-9);
        double bianchi = R.value(z1, z2, z3, z4) + R.value(z2, z3, z1, z4) +
                         R.value(z3, z1, z2, z4);
        CHECK(std::abs(bianchi) < 1e-9);
    }

    // nabla g = 0: dg(k,i,j) = Gamma^a_ki g_aj + Gamma^a_kj g_ia
    ChristoffelTable ct = christoffel(warped, generic6);
    double worst = 0;
    for (int k = 0; k < 6; ++k)
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                double cov = ct.dg(k, i, j);
                for (int a = 0; a < 6; ++a)
                    cov -= ct.gamma(a, k, i) * ct.g(a, j) + ct.gamma(a, k, j) * ct.g(i, a);
                worst = std::max(worst, std::abs(cov));
            }
    CHECK(worst < 1e-10);

    // multilinearity of value()
    Eigen::VectorXd a = rand_vec(6, rng), b = rand_vec(6, rng), c = rand_vec(6, rng),
                    d = rand_vec(6, rng), a2 = rand_vec(6, rng);
    double lhs = R.value(a + 2 * a2, b, c, d);
    double rhs = R.value(a, b, c, d) + 2 * R.value(a2, b, c, d);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("gamma symmetry in lower indices") {
    for (DerivMode mode : {DerivMode::Analytic, DerivMode::Difference, DerivMode::Dual}) {
        auto warped = metric(testsup::warped_r6_g1(), mode);
        ChristoffelTable ct = christoffel(warped, generic6);
        for (int k = 0; k < 6; ++k)
            for (int i = 0; i < 6; ++i)
                for (int j = i + 1; j < 6; ++j)
                    CHECK(ct.gamma(k, i, j) == ct.gamma(k, j, i));  // built symmetric
    }
}
