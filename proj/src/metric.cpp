#include "subcurv/metric.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace subcurv {

namespace {

std::span<const double> as_span(const Point& p) {
    return {p.data(), static_cast<std::size_t>(p.size())};
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

double fd_step1(double x) {
    static const double base = std::cbrt(std::numeric_limits<double>::epsilon());
    double h = base * std::max(1.0, std::abs(x));
    volatile double t = x + h;  // make the step exactly representable
    return t - x;
}

double fd_step2(double x) {
    static const double base = std::pow(std::numeric_limits<double>::epsilon(), 0.25);
    double h = base * std::max(1.0, std::abs(x));
    volatile double t = x + h;
    return t - x;
}

std::size_t MetricField::uidx(int i, int j) const {
    // row-major upper triangle, i <= j
    return static_cast<std::size_t>(i) * dim_ - static_cast<std::size_t>(i) * (i - 1) / 2 +
           (j - i);
}

MetricField::MetricField(int dim, std::vector<Expression> upper, DerivMode mode,
                         std::vector<DomainConstraint> domain)
    : dim_(dim), mode_(mode), upper_(std::move(upper)), domain_(std::move(domain)) {
    const std::size_t nu = static_cast<std::size_t>(dim) * (dim + 1) / 2;
    if (dim < 1) throw ShapeError("metric dimension must be >= 1");
    if (upper_.size() != nu)
        throw ShapeError("metric upper triangle has " + std::to_string(upper_.size()) +
                         " entries, expected " + std::to_string(nu));
    for (const Expression& ex : upper_)
        if (ex.max_var() > dim)
            throw ShapeError("metric entry '" + ex.to_string() + "' references x" +
                             std::to_string(ex.max_var()) + " but the chart has " +
                             std::to_string(dim) + " coordinates");
    if (mode_ == DerivMode::Analytic) {
        d1_upper_.reserve(static_cast<std::size_t>(dim) * nu);
        for (int k = 0; k < dim; ++k)
            for (std::size_t u = 0; u < nu; ++u)
                d1_upper_.push_back(upper_[u].derivative(k));
        d2_upper_.reserve(nu * nu);  // pair(k,l) uses the same triangular layout
        for (int k = 0; k < dim; ++k)
            for (int l = k; l < dim; ++l)
                for (std::size_t u = 0; u < nu; ++u)
                    d2_upper_.push_back(d1_upper_[k * nu + u].derivative(l));
    }
}

MetricField MetricField::parse(const std::vector<std::vector<std::string>>& entries,
                               DerivMode mode, std::vector<DomainConstraint> domain) {
    const int n = static_cast<int>(entries.size());
    if (n == 0) throw ShapeError("metric entry matrix is empty");
    for (const auto& row : entries)
        if (static_cast<int>(row.size()) != n)
            throw ShapeError("metric entry matrix is not square");

    std::vector<Expression> upper;
    upper.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) upper.push_back(Expression::parse(entries[i][j]));

    // symmetry: textual match, else canonical-form match, else numeric spot check
    std::mt19937 rng(20240817u);
    std::uniform_real_distribution<double> U(-1.5, 1.5);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (entries[i][j] == entries[j][i]) continue;
            Expression a = Expression::parse(entries[i][j]);
            Expression b = Expression::parse(entries[j][i]);
            if (a.to_string() == b.to_string()) continue;
            int checked = 0;
            for (int t = 0; t < 64 && checked < 5; ++t) {
                std::vector<double> x(n);
                for (double& xi : x) xi = U(rng);
                double va, vb;
                try {
                    va = a.eval(x);
                    vb = b.eval(x);
                } catch (const DomainViolation&) {
                    continue;  // sample outside a singular locus; try another
                }
                if (std::abs(va - vb) >
                    1e-9 * (1 + std::max(std::abs(va), std::abs(vb))))
                    throw ShapeError("metric entries (" + std::to_string(i + 1) + "," +
                                     std::to_string(j + 1) + ") and transpose differ: '" +
                                     entries[i][j] + "' vs '" + entries[j][i] + "'");
                ++checked;
            }
        }
    }
    return MetricField(n, std::move(upper), mode, std::move(domain));
}

void MetricField::check_domain(const Point& p) const {
    for (const auto& c : domain_) {
        double v;
        try {
            v = c.expr.eval(as_span(p));
        } catch (const DomainViolation&) {
            v = -std::numeric_limits<double>::infinity();
        }
        if (!(v > 0)) {
            const std::string& what = c.label.empty() ? c.expr.to_string() : c.label;
            throw DomainViolation("domain constraint '" + what + " > 0' violated (value " +
                                  fmt(v) + ")");
        }
    }
}

Eigen::MatrixXd MetricField::value_unchecked(const Point& p) const {
    Eigen::MatrixXd g(dim_, dim_);
    auto x = as_span(p);
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j) g(i, j) = g(j, i) = upper_[uidx(i, j)].eval(x);
    return g;
}

Eigen::MatrixXd MetricField::value(const Point& p) const {
    if (p.size() != dim_)
        throw ShapeError("point has " + std::to_string(p.size()) + " coordinates, chart has " +
                         std::to_string(dim_));
    check_domain(p);
    return value_unchecked(p);
}

Eigen::MatrixXd MetricField::value_at_stencil(const Point& p, int step_var) const {
    try {
        check_domain(p);
        return value_unchecked(p);
    } catch (const DomainViolation& err) {
        throw StencilOutsideDomain("finite-difference stencil step in x" +
                                   std::to_string(step_var + 1) +
                                   " left the metric's domain: " + err.what());
    }
}

Tensor3 MetricField::d1(const Point& p) const {
    const int n = dim_;
    const std::size_t nu = upper_.size();
    Tensor3 out(n, n, n);
    auto x = as_span(p);
    check_domain(p);

    switch (mode_) {
        case DerivMode::Analytic:
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int j = i; j < n; ++j)
                        out(k, i, j) = out(k, j, i) = d1_upper_[k * nu + uidx(i, j)].eval(x);
            break;
        case DerivMode::Dual:
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int j = i; j < n; ++j)
                        out(k, i, j) = out(k, j, i) = upper_[uidx(i, j)].eval_dual(x, k);
            break;
        case DerivMode::Difference:
            for (int k = 0; k < n; ++k) {
                double h = fd_step1(p[k]);
                Point pp = p, pm = p;
                pp[k] += h;
                pm[k] -= h;
                Eigen::MatrixXd gp = value_at_stencil(pp, k);
                Eigen::MatrixXd gm = value_at_stencil(pm, k);
                for (int i = 0; i < n; ++i)
                    for (int j = i; j < n; ++j)
                        out(k, i, j) = out(k, j, i) = (gp(i, j) - gm(i, j)) / (2 * h);
            }
            break;
    }
    return out;
}

Tensor4 MetricField::d2(const Point& p) const {
    const int n = dim_;
    const std::size_t nu = upper_.size();
    Tensor4 out(n, n, n, n);
    auto x = as_span(p);
    check_domain(p);

    auto mirror = [&](int k, int l, int i, int j, double v) {
        out(k, l, i, j) = out(k, l, j, i) = out(l, k, i, j) = out(l, k, j, i) = v;
    };

    switch (mode_) {
        case DerivMode::Analytic: {
            std::size_t pair = 0;
            for (int k = 0; k < n; ++k)
                for (int l = k; l < n; ++l, ++pair)
                    for (int i = 0; i < n; ++i)
                        for (int j = i; j < n; ++j)
                            mirror(k, l, i, j, d2_upper_[pair * nu + uidx(i, j)].eval(x));
            break;
        }
        case DerivMode::Dual:
            // d/dx_l of the forward-mode gradient in x_k, central step
            for (int k = 0; k < n; ++k)
                for (int l = k; l < n; ++l) {
                    double h = fd_step1(p[l]);
                    Point pp = p, pm = p;
                    pp[l] += h;
                    pm[l] -= h;
                    for (int i = 0; i < n; ++i)
                        for (int j = i; j < n; ++j) {
                            double gp, gm;
                            try {
                                check_domain(pp);
                                gp = upper_[uidx(i, j)].eval_dual(
                                    {pp.data(), static_cast<std::size_t>(n)}, k);
                                check_domain(pm);
                                gm = upper_[uidx(i, j)].eval_dual(
                                    {pm.data(), static_cast<std::size_t>(n)}, k);
                            } catch (const DomainViolation& err) {
                                throw StencilOutsideDomain(
                                    "finite-difference stencil step in x" + std::to_string(l + 1) +
                                    " left the metric's domain: " + err.what());
                            }
                            mirror(k, l, i, j, (gp - gm) / (2 * h));
                        }
                }
            break;
        case DerivMode::Difference: {
            Eigen::MatrixXd g0 = value(p);
            for (int k = 0; k < n; ++k) {
                double hk = fd_step2(p[k]);
                {  // diagonal: (f+ - 2 f0 + f-) / h^2
                    Point pp = p, pm = p;
                    pp[k] += hk;
                    pm[k] -= hk;
                    Eigen::MatrixXd gp = value_at_stencil(pp, k);
                    Eigen::MatrixXd gm = value_at_stencil(pm, k);
                    for (int i = 0; i < n; ++i)
                        for (int j = i; j < n; ++j)
                            mirror(k, k, i, j,
                                   (gp(i, j) - 2 * g0(i, j) + gm(i, j)) / (hk * hk));
                }
                for (int l = k + 1; l < n; ++l) {  // mixed: 4-point cross
                    double hl = fd_step2(p[l]);
                    Point ppp = p, ppm = p, pmp = p, pmm = p;
                    ppp[k] += hk; ppp[l] += hl;
                    ppm[k] += hk; ppm[l] -= hl;
                    pmp[k] -= hk; pmp[l] += hl;
                    pmm[k] -= hk; pmm[l] -= hl;
                    Eigen::MatrixXd gpp = value_at_stencil(ppp, k);
                    Eigen::MatrixXd gpm = value_at_stencil(ppm, k);
                    Eigen::MatrixXd gmp = value_at_stencil(pmp, l);
                    Eigen::MatrixXd gmm = value_at_stencil(pmm, l);
                    for (int i = 0; i < n; ++i)
                        for (int j = i; j < n; ++j)
                            mirror(k, l, i, j,
                                   (gpp(i, j) - gpm(i, j) - gmp(i, j) + gmm(i, j)) /
                                       (4 * hk * hl));
                }
            }
            break;
        }
    }
    return out;
}

MetricData metric_at(const MetricField& field, const Point& p, double pd_tol) {
    MetricData out;
    out.g = field.value(p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.g, Eigen::EigenvaluesOnly);
    out.lambda_min = es.eigenvalues().minCoeff();
    out.lambda_max = es.eigenvalues().maxCoeff();
    if (!(out.lambda_min > pd_tol))
        throw NonPositiveDefinite("metric is not positive definite at the given point "
                                  "(smallest eigenvalue " +
                                  fmt(out.lambda_min) + ")");
    const int n = field.dim();
    out.ginv = out.g.llt().solve(Eigen::MatrixXd::Identity(n, n));
    out.ginv = ((out.ginv + out.ginv.transpose()) / 2).eval();
    return out;
}

ChristoffelTable christoffel(const MetricField& field, const Point& p, double pd_tol) {
    const int n = field.dim();
    MetricData md = metric_at(field, p, pd_tol);
    ChristoffelTable out;
    out.g = std::move(md.g);
    out.ginv = std::move(md.ginv);
    out.dg = field.d1(p);
    out.gamma = Tensor3(n, n, n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double s = 0;
                for (int a = 0; a < n; ++a)
                    s += out.ginv(k, a) *
                         (out.dg(i, a, j) + out.dg(j, a, i) - out.dg(a, i, j));
                out.gamma(k, i, j) = out.gamma(k, j, i) = s / 2;
            }
    return out;
}

double CurvatureTensor::value(const Eigen::VectorXd& z1, const Eigen::VectorXd& z2,
                              const Eigen::VectorXd& z3, const Eigen::VectorXd& z4) const {
    double s = 0;
    for (int i = 0; i < n; ++i) {
        if (z1[i] == 0) continue;
        for (int j = 0; j < n; ++j) {
            if (z2[j] == 0) continue;
            double zij = z1[i] * z2[j];
            for (int k = 0; k < n; ++k) {
                if (z3[k] == 0) continue;
                double zijk = zij * z3[k];
                for (int l = 0; l < n; ++l) s += zijk * z4[l] * R(i, j, k, l);
            }
        }
    }
    return s;
}

CurvatureTensor riemann(const MetricField& field, const Point& p, double pd_tol) {
    const int n = field.dim();
    ChristoffelTable ct = christoffel(field, p, pd_tol);
    Tensor4 dgg = field.d2(p);

    // d ginv / dx_k = -ginv (dg_k) ginv
    std::vector<Eigen::MatrixXd> dginv(n);
    for (int k = 0; k < n; ++k) {
        Eigen::MatrixXd dgk(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) dgk(i, j) = ct.dg(k, i, j);
        dginv[k] = -ct.ginv * dgk * ct.ginv;
    }

    // dGamma(p,k,i,j) = d Gamma^k_ij / dx_p
    Tensor4 dGamma(n, n, n, n);
    for (int q = 0; q < n; ++q)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    double s = 0;
                    for (int a = 0; a < n; ++a) {
                        double S = ct.dg(i, a, j) + ct.dg(j, a, i) - ct.dg(a, i, j);
                        double dS = dgg(q, i, a, j) + dgg(q, j, a, i) - dgg(q, a, i, j);
                        s += dginv[q](k, a) * S + ct.ginv(k, a) * dS;
                    }
                    dGamma(q, k, i, j) = dGamma(q, k, j, i) = s / 2;
                }

    CurvatureTensor out;
    out.n = n;
    out.R = Tensor4(n, n, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;  // R(i,i,.,.) = 0
            for (int k = 0; k < n; ++k) {
                for (int m = 0; m < n; ++m) {
                    double up = dGamma(i, m, j, k) - dGamma(j, m, i, k);
                    for (int a = 0; a < n; ++a)
                        up += ct.gamma(a, j, k) * ct.gamma(m, i, a) -
                              ct.gamma(a, i, k) * ct.gamma(m, j, a);
                    for (int l = 0; l < n; ++l) out.R(i, j, k, l) += ct.g(l, m) * up;
                }
            }
        }
    return out;
}

}  // namespace subcurv
