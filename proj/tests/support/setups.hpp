#pragma once

// Shared chart definitions used across the test suites: warped-product
// examples on R^6, stereographic sphere charts, and simple flat blocks.

#include <string>
#include <vector>

#include "subcurv/metric.hpp"
#include "subcurv/space_forms.hpp"
#include "subcurv/submersion.hpp"

namespace testsup {

using StrMat = std::vector<std::vector<std::string>>;

inline StrMat diag(std::vector<std::string> d) {
    StrMat m(d.size(), std::vector<std::string>(d.size(), "0"));
    for (std::size_t i = 0; i < d.size(); ++i) m[i][i] = std::move(d[i]);
    return m;
}

// R^6 warped metric: diag(e^{2x4}, e^{2x6}, 1, e^{2x6}, 1, e^{2x4})
inline StrMat warped_r6_g1() {
    return diag({"exp(2*x4)", "exp(2*x6)", "1", "exp(2*x6)", "1", "exp(2*x4)"});
}

// polar-style base metric on R^3: diag(1, y3^2, y2^2)
inline StrMat warped_r6_g2() {
    return diag({"1", "x3^2", "x2^2"});
}

// R^6 metric diag(x1^2, 1, x3^2, 1, x5^2, 1) (flat; degenerate on axes)
inline StrMat squared_r6_g1() {
    return diag({"x1^2", "1", "x3^2", "1", "x5^2", "1"});
}

inline std::vector<subcurv::DomainConstraint> squared_r6_domain() {
    using subcurv::Expression;
    return {{Expression::parse("x1^2"), "x1^2"},
            {Expression::parse("x3^2"), "x3^2"},
            {Expression::parse("x5^2"), "x5^2"},
            {Expression::parse("x6^2"), "x6^2"}};
}

// round unit 2-sphere, polar chart (x1, x2) = (theta, phi)
inline StrMat sphere2() { return diag({"1", "sin(x1)^2"}); }

inline std::vector<subcurv::DomainConstraint> sphere2_domain() {
    return {{subcurv::Expression::parse("sin(x1)"), "sin(x1)"}};
}

inline subcurv::MetricField metric(const StrMat& entries, subcurv::DerivMode mode,
                                   std::vector<subcurv::DomainConstraint> dom = {}) {
    return subcurv::MetricField::parse(entries, mode, std::move(dom));
}

inline subcurv::Point pt(std::initializer_list<double> xs) {
    subcurv::Point p(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) p[i++] = x;
    return p;
}

// warped R^6 -> R^3 submersion with a tilt angle (default pi/4)
inline subcurv::SubmersionSetup warped_r6_setup(subcurv::DerivMode mode,
                                                const std::string& alpha = "pi/4") {
    return subcurv::SubmersionSetup(
        metric(warped_r6_g1(), mode), metric(warped_r6_g2(), mode),
        subcurv::SmoothMap::parse(
            6, {"x3*sin(" + alpha + ") - x5*cos(" + alpha + ")", "x4", "x6"}, mode));
}

// squared-diagonal R^6 -> R^3 submersion (coordinate projection)
inline subcurv::SubmersionSetup squared_r6_setup(subcurv::DerivMode mode) {
    return subcurv::SubmersionSetup(
        metric(squared_r6_g1(), mode, squared_r6_domain()),
        metric(diag({"1", "1", "1"}), mode),
        subcurv::SmoothMap::parse(6, {"x2", "x4", "x6"}, mode));
}

// S^2 x S^2 in polar charts, submersion onto the first factor
inline subcurv::SubmersionSetup twosphere_product_setup(subcurv::DerivMode mode) {
    std::vector<subcurv::DomainConstraint> dom{
        {subcurv::Expression::parse("sin(x1)"), "sin(x1)"},
        {subcurv::Expression::parse("sin(x3)"), "sin(x3)"}};
    return subcurv::SubmersionSetup(
        metric(diag({"1", "sin(x1)^2", "1", "sin(x3)^2"}), mode, std::move(dom)),
        metric(sphere2(), mode, sphere2_domain()),
        subcurv::SmoothMap::parse(4, {"x1", "x2"}, mode));
}

// Quaternionic Hopf fibration in stereographic charts: the total space is the
// unit 7-sphere (chart metric 4/(1+|u|^2)^2), the base the 4-sphere of
// curvature 4 (chart metric 1/(1+|y|^2)^2), and the map is y = a*conj(c)/(2A)
// with quaternions a = u1+u2 i+u3 j+u4 k, c = 2u5+2u6 i+2u7 j+(1-|u|^2) k,
// A = u1^2+..+u4^2.  Fibers are totally geodesic 3-spheres.
inline subcurv::SubmersionSetup hopf_setup(subcurv::DerivMode mode) {
    const std::string S = "(x1^2+x2^2+x3^2+x4^2+x5^2+x6^2+x7^2)";
    const std::string A = "(x1^2+x2^2+x3^2+x4^2)";
    const std::string g1e = "4/(1+" + S + ")^2";
    std::vector<subcurv::DomainConstraint> dom{{subcurv::Expression::parse(A), A}};
    return subcurv::SubmersionSetup(
        metric(diag({g1e, g1e, g1e, g1e, g1e, g1e, g1e}), mode, std::move(dom)),
        metric(diag({"1/(1+x1^2+x2^2+x3^2+x4^2)^2", "1/(1+x1^2+x2^2+x3^2+x4^2)^2",
                     "1/(1+x1^2+x2^2+x3^2+x4^2)^2", "1/(1+x1^2+x2^2+x3^2+x4^2)^2"}),
               mode),
        subcurv::SmoothMap::parse(
            7,
            {"(2*(x1*x5+x2*x6+x3*x7) + x4*(1-" + S + "))/(2*" + A + ")",
             "(2*(-x1*x6+x2*x5+x4*x7) - x3*(1-" + S + "))/(2*" + A + ")",
             "(2*(-x1*x7+x3*x5-x4*x6) + x2*(1-" + S + "))/(2*" + A + ")",
             "(2*(x4*x5-x2*x7+x3*x6) - x1*(1-" + S + "))/(2*" + A + ")"},
            mode));
}

// Block-diagonal pairing J d1 = d2, J d3 = d4, J d5 = d6 on R^6.
inline std::shared_ptr<const subcurv::StructureTensors> pairing_J6() {
    std::vector<std::vector<std::string>> rows{
        {"0", "-1", "0", "0", "0", "0"}, {"1", "0", "0", "0", "0", "0"},
        {"0", "0", "0", "-1", "0", "0"}, {"0", "0", "1", "0", "0", "0"},
        {"0", "0", "0", "0", "0", "-1"}, {"0", "0", "0", "0", "1", "0"}};
    return std::make_shared<subcurv::StructureTensors>(
        subcurv::StructureTensors::parse(subcurv::StructureKind::Complex, 6, rows));
}

// Euclidean R^6 with the pairing J, projected onto the even coordinates.
inline subcurv::SubmersionSetup complex_r6_setup(subcurv::DerivMode mode) {
    return subcurv::SubmersionSetup(
        metric(diag({"1", "1", "1", "1", "1", "1"}), mode),
        metric(diag({"1", "1", "1"}), mode),
        subcurv::SmoothMap::parse(6, {"x2", "x4", "x6"}, mode), pairing_J6());
}

// Flat cosymplectic R^7: phi pairs (12)(34)(56), xi = d7, eta = dx7.
inline std::shared_ptr<const subcurv::StructureTensors> cosymplectic7() {
    std::vector<std::vector<std::string>> rows{
        {"0", "-1", "0", "0", "0", "0", "0"}, {"1", "0", "0", "0", "0", "0", "0"},
        {"0", "0", "0", "-1", "0", "0", "0"}, {"0", "0", "1", "0", "0", "0", "0"},
        {"0", "0", "0", "0", "0", "-1", "0"}, {"0", "0", "0", "0", "1", "0", "0"},
        {"0", "0", "0", "0", "0", "0", "0"}};
    std::vector<std::string> zero7{"0", "0", "0", "0", "0", "0", "0"};
    std::vector<std::string> e7 = zero7;
    e7[6] = "1";
    return std::make_shared<subcurv::StructureTensors>(subcurv::StructureTensors::parse(
        subcurv::StructureKind::AlmostContact, 7, rows, e7, e7));
}

// xi lands in the horizontal space (the map keeps x7).
inline subcurv::SubmersionSetup cosymplectic_r7_setup(subcurv::DerivMode mode) {
    return subcurv::SubmersionSetup(
        metric(diag({"1", "1", "1", "1", "1", "1", "1"}), mode),
        metric(diag({"1", "1", "1", "1"}), mode),
        subcurv::SmoothMap::parse(7, {"x2", "x4", "x6", "x7"}, mode), cosymplectic7());
}

}  // namespace testsup
