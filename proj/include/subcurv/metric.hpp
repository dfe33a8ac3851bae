#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "subcurv/errors.hpp"
#include "subcurv/expression.hpp"

namespace subcurv {

using Point = Eigen::VectorXd;

// How coordinate derivatives of fields are obtained.
//   Analytic   - symbolic differentiation, precomputed at construction
//   Difference - central finite differences (step ~ eps^(1/3), second ~ eps^(1/4))
//   Dual       - forward-mode first derivatives; second via differencing the gradient
enum class DerivMode { Analytic, Difference, Dual };

// Strict inequality expr > 0 that every evaluation point must satisfy.
struct DomainConstraint {
    Expression expr;
    std::string label;
};

// Small dense tensors, zero-initialised.
class Tensor3 {
public:
    Tensor3() = default;
    Tensor3(int n0, int n1, int n2)
        : n0_(n0), n1_(n1), n2_(n2), v_(static_cast<std::size_t>(n0) * n1 * n2, 0.0) {}
    double& operator()(int a, int b, int c) {
        return v_[(static_cast<std::size_t>(a) * n1_ + b) * n2_ + c];
    }
    double operator()(int a, int b, int c) const {
        return v_[(static_cast<std::size_t>(a) * n1_ + b) * n2_ + c];
    }
    int dim0() const { return n0_; }
    int dim1() const { return n1_; }
    int dim2() const { return n2_; }

private:
    int n0_ = 0, n1_ = 0, n2_ = 0;
    std::vector<double> v_;
};

class Tensor4 {
public:
    Tensor4() = default;
    Tensor4(int n0, int n1, int n2, int n3)
        : n0_(n0), n1_(n1), n2_(n2), n3_(n3),
          v_(static_cast<std::size_t>(n0) * n1 * n2 * n3, 0.0) {}
    double& operator()(int a, int b, int c, int d) {
        return v_[((static_cast<std::size_t>(a) * n1_ + b) * n2_ + c) * n3_ + d];
    }
    double operator()(int a, int b, int c, int d) const {
        return v_[((static_cast<std::size_t>(a) * n1_ + b) * n2_ + c) * n3_ + d];
    }
    int dim0() const { return n0_; }

private:
    int n0_ = 0, n1_ = 0, n2_ = 0, n3_ = 0;
    std::vector<double> v_;
};

// A coordinate-chart Riemannian metric g_ij(x) with closed-form entries.
// Immutable after construction; in Analytic mode all first and second
// symbolic derivatives are precomputed eagerly, so evaluation is const
// and thread-safe in every mode.
class MetricField {
public:
    // upper: row-major upper triangle including the diagonal,
    // upper[idx(i,j)] = g_ij for i <= j.
    MetricField(int dim, std::vector<Expression> upper, DerivMode mode,
                std::vector<DomainConstraint> domain = {});

    // entries: full dim x dim matrix of expression strings; (i,j) and (j,i)
    // must agree (checked symbolically, then numerically on sample points).
    static MetricField parse(const std::vector<std::vector<std::string>>& entries,
                             DerivMode mode, std::vector<DomainConstraint> domain = {});

    int dim() const { return dim_; }
    DerivMode mode() const { return mode_; }
    const std::vector<DomainConstraint>& domain() const { return domain_; }

    // Throws DomainViolation if p violates a domain constraint.
    void check_domain(const Point& p) const;

    // g_ij(p), exactly symmetric.
    Eigen::MatrixXd value(const Point& p) const;

    // d1(k,i,j) = d g_ij / d x_k.  Stencil points that leave the domain (or
    // make an entry non-finite) raise StencilOutsideDomain in the
    // finite-difference modes.
    Tensor3 d1(const Point& p) const;

    // d2(k,l,i,j) = d^2 g_ij / (d x_k d x_l), symmetric in (k,l) and (i,j).
    Tensor4 d2(const Point& p) const;

private:
    int dim_;
    DerivMode mode_;
    std::vector<Expression> upper_;     // size dim(dim+1)/2
    std::vector<Expression> d1_upper_;  // [k * nu + u], Analytic only
    std::vector<Expression> d2_upper_;  // [pair(k,l) * nu + u], Analytic only
    std::vector<DomainConstraint> domain_;

    std::size_t uidx(int i, int j) const;  // upper-triangle index, i <= j
    Eigen::MatrixXd value_unchecked(const Point& p) const;
    Eigen::MatrixXd value_at_stencil(const Point& p, int step_var) const;
};

// Pointwise metric data with a positive-definiteness certificate.
struct MetricData {
    Eigen::MatrixXd g;
    Eigen::MatrixXd ginv;
    double lambda_min = 0;
    double lambda_max = 0;
};

// Throws NonPositiveDefinite if the smallest eigenvalue is <= pd_tol.
MetricData metric_at(const MetricField& field, const Point& p, double pd_tol = 1e-10);

// Christoffel symbols of the Levi-Civita connection.
struct ChristoffelTable {
    Eigen::MatrixXd g, ginv;
    Tensor3 dg;     // (k,i,j) = d g_ij / d x_k
    Tensor3 gamma;  // (k,i,j) = Gamma^k_ij, symmetric in (i,j)
};

ChristoffelTable christoffel(const MetricField& field, const Point& p,
                             double pd_tol = 1e-10);

// Riemann tensor, fully covariant, with the sign fixed so that
// sectional curvature is K(X,Y) = R(X,Y,Y,X) / (|X|^2 |Y|^2 - g(X,Y)^2)
// and the round sphere has K > 0.
struct CurvatureTensor {
    int n = 0;
    Tensor4 R;  // (i,j,k,l) = R(e_i, e_j, e_k, e_l) in chart coordinates

    double value(const Eigen::VectorXd& z1, const Eigen::VectorXd& z2,
                 const Eigen::VectorXd& z3, const Eigen::VectorXd& z4) const;
};

CurvatureTensor riemann(const MetricField& field, const Point& p,
                        double pd_tol = 1e-10);

// Finite-difference steps (scaled, exactly representable).
double fd_step1(double x);  // ~ eps^(1/3) * max(1, |x|)
double fd_step2(double x);  // ~ eps^(1/4) * max(1, |x|)

}  // namespace subcurv
