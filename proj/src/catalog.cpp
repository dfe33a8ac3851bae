#include "subcurv/catalog.hpp"

namespace subcurv {
namespace {

Point point(std::initializer_list<double> xs) {
    Point p(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) p(i++) = x;
    return p;
}

std::vector<std::vector<std::string>> diag_matrix(std::vector<std::string> entries) {
    const int n = static_cast<int>(entries.size());
    std::vector<std::vector<std::string>> rows(n, std::vector<std::string>(n, "0"));
    for (int i = 0; i < n; ++i) rows[i][i] = std::move(entries[i]);
    return rows;
}

std::vector<std::vector<std::string>> identity_matrix(int n) {
    return diag_matrix(std::vector<std::string>(n, "1"));
}

RunConfig gigseh_config() {
    RunConfig cfg;
    cfg.name = "gigseh";
    cfg.n = 6;
    cfg.m = 3;
    cfg.g1 = diag_matrix({"x1^2", "1", "x3^2", "1", "x5^2", "1"});
    cfg.g2 = identity_matrix(3);
    cfg.map = {"x2", "x4", "x6"};
    cfg.points = {point({1, 1, 1, 1, 1, 1})};
    cfg.theorems = {"thm31", "thm32", "thm41"};
    return cfg;
}

RunConfig hopf_config() {
    const std::string S = "(x1^2+x2^2+x3^2+x4^2+x5^2+x6^2+x7^2)";
    const std::string A = "(x1^2+x2^2+x3^2+x4^2)";
    RunConfig cfg;
    cfg.name = "hopf_s7_s4";
    cfg.n = 7;
    cfg.m = 4;
    cfg.g1 = diag_matrix(std::vector<std::string>(7, "4/(1+" + S + ")^2"));
    cfg.g2 = diag_matrix(
        std::vector<std::string>(4, "1/(1+x1^2+x2^2+x3^2+x4^2)^2"));
    cfg.map = {"(2*(x1*x5+x2*x6+x3*x7) + x4*(1-" + S + "))/(2*" + A + ")",
               "(2*(-x1*x6+x2*x5+x4*x7) - x3*(1-" + S + "))/(2*" + A + ")",
               "(2*(-x1*x7+x3*x5-x4*x6) + x2*(1-" + S + "))/(2*" + A + ")",
               "(2*(x4*x5-x2*x7+x3*x6) - x1*(1-" + S + "))/(2*" + A + ")"};
    cfg.model = ModelConfig{"real", 1, 0, 0, 0, 0};
    cfg.points = {point({0.3, -0.2, 0.4, 0.5, 0.1, -0.3, 0.2})};
    cfg.theorems = {"thm31", "thm32", "rsf_thm36", "thm41", "rsf_thm43"};
    return cfg;
}

RunConfig flat_product_config() {
    RunConfig cfg;
    cfg.name = "flat_product";
    cfg.n = 5;
    cfg.m = 2;
    cfg.g1 = identity_matrix(5);
    cfg.g2 = identity_matrix(2);
    cfg.map = {"x1", "x2"};
    cfg.points = {point({0.1, 0.2, 0.3, 0.4, 0.5})};
    cfg.theorems = {"thm31", "thm32", "thm41"};
    return cfg;
}

RunConfig sphere_chart_config() {
    // Stereographic chart of the unit S^5 over a chart of the unit S^2.  The
    // coordinate projection (x4, x5) is a Riemannian submersion only on the
    // locus x1 = x2 = x3 = 0, so the entry carries no theorems; it doubles as
    // the header-only CSV example.
    RunConfig cfg;
    cfg.name = "sphere_chart";
    cfg.n = 5;
    cfg.m = 2;
    cfg.g1 = diag_matrix(std::vector<std::string>(
        5, "4/(1+x1^2+x2^2+x3^2+x4^2+x5^2)^2"));
    cfg.g2 = diag_matrix(std::vector<std::string>(2, "4/(1+x1^2+x2^2)^2"));
    cfg.map = {"x4", "x5"};
    cfg.model = ModelConfig{"real", 1, 0, 0, 0, 0};
    cfg.points = {point({0, 0, 0, 0.4, -0.3})};
    cfg.theorems = {};
    return cfg;
}

RunConfig complex_r6_config() {
    RunConfig cfg;
    cfg.name = "synthetic_complex_r6";
    cfg.n = 6;
    cfg.m = 3;
    cfg.g1 = identity_matrix(6);
    cfg.g2 = identity_matrix(3);
    cfg.map = {"x2", "x4", "x6"};
    StructureConfig st;
    st.kind = StructureKind::Complex;
    st.J = {{"0", "-1", "0", "0", "0", "0"}, {"1", "0", "0", "0", "0", "0"},
            {"0", "0", "0", "-1", "0", "0"}, {"0", "0", "1", "0", "0", "0"},
            {"0", "0", "0", "0", "0", "-1"}, {"0", "0", "0", "0", "1", "0"}};
    cfg.structure = std::move(st);
    cfg.model = ModelConfig{"complex", 0, 0, 0, 0, 0};
    cfg.points = {point({1, 1, 1, 1, 1, 1})};
    cfg.theorems = {"thm31", "csf_thm38", "thm41", "csf_thm45"};
    return cfg;
}

RunConfig cosymplectic_r7_config() {
    RunConfig cfg;
    cfg.name = "cosymplectic_r7";
    cfg.n = 7;
    cfg.m = 4;
    cfg.g1 = identity_matrix(7);
    cfg.g2 = identity_matrix(4);
    cfg.map = {"x2", "x4", "x6", "x7"};
    StructureConfig st;
    st.kind = StructureKind::AlmostContact;
    st.J = {{"0", "-1", "0", "0", "0", "0", "0"}, {"1", "0", "0", "0", "0", "0", "0"},
            {"0", "0", "0", "-1", "0", "0", "0"}, {"0", "0", "1", "0", "0", "0", "0"},
            {"0", "0", "0", "0", "0", "-1", "0"}, {"0", "0", "0", "0", "1", "0", "0"},
            {"0", "0", "0", "0", "0", "0", "0"}};
    st.xi = {"0", "0", "0", "0", "0", "0", "1"};
    st.eta = {"0", "0", "0", "0", "0", "0", "1"};
    cfg.structure = std::move(st);
    cfg.model = ModelConfig{"cosymplectic", 0, 0, 0, 0, 0};
    cfg.points = {point({0.2, 0.4, -0.1, 0.3, 0.5, -0.2, 0.6})};
    cfg.theorems = {"thm31", "gssf_thm310", "thm41", "gssf_thm47"};
    return cfg;
}

}  // namespace

RunConfig girmednh_config(const std::string& alpha) {
    RunConfig cfg;
    cfg.name = "girmednh";
    cfg.n = 6;
    cfg.m = 3;
    cfg.g1 = diag_matrix(
        {"exp(2*x4)", "exp(2*x6)", "1", "exp(2*x6)", "1", "exp(2*x4)"});
    cfg.g2 = diag_matrix({"1", "x3^2", "x2^2"});
    cfg.map = {"x3*sin(" + alpha + ") - x5*cos(" + alpha + ")", "x4", "x6"};
    cfg.points = {point({0, 0, 0, 0, 0, 0})};
    cfg.theorems = {"thm31", "thm32", "thm41"};
    return cfg;
}

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = [] {
        std::vector<CatalogEntry> v;
        v.push_back({"girmednh",
                     "warped-product submersion with nonzero mean curvature; "
                     "strict gaps and one failing equality family",
                     girmednh_config()});
        v.push_back({"gigseh",
                     "totally geodesic fibers over a flat base; every "
                     "inequality is an equality",
                     gigseh_config()});
        v.push_back({"hopf_s7_s4",
                     "quaternionic Hopf fibration S^7 -> S^4(1/2) in a "
                     "stereographic chart; totally geodesic fibers, A != 0",
                     hopf_config()});
        v.push_back({"flat_product",
                     "Euclidean product projection R^5 -> R^2; everything "
                     "vanishes",
                     flat_product_config()});
        v.push_back({"sphere_chart",
                     "round S^5 chart over an S^2 chart, submersion only on "
                     "a locus; validation + model fit, no theorems",
                     sphere_chart_config()});
        v.push_back({"synthetic_complex_r6",
                     "flat complex space form C^3 with the pairing J, "
                     "projected onto the even coordinates",
                     complex_r6_config()});
        v.push_back({"cosymplectic_r7",
                     "flat cosymplectic R^7 with horizontal Reeb field",
                     cosymplectic_r7_config()});
        return v;
    }();
    return entries;
}

const CatalogEntry& catalog_entry(const std::string& name) {
    for (const auto& e : catalog())
        if (e.name == name) return e;
    throw MissingField("unknown catalog entry '" + name + "'");
}

}  // namespace subcurv
