#pragma once

#include <memory>
#include <string>
#include <vector>

#include "subcurv/submersion.hpp"

namespace subcurv {

// Almost complex / almost contact structure given by closed-form entries.
// JJ holds the matrix of J (complex) or phi (almost contact) in coordinates,
// (J Z)^i = sum_j JJ(i,j) Z^j; xi is a vector field, eta a covector field.
enum class StructureKind { Complex, AlmostContact };

struct StructureTensors {
    StructureKind kind;
    int n = 0;
    std::vector<Expression> JJ;   // row-major n*n
    std::vector<Expression> xi;   // n entries (AlmostContact only)
    std::vector<Expression> eta;  // n entries (AlmostContact only)

    static StructureTensors parse(StructureKind kind, int n,
                                  const std::vector<std::vector<std::string>>& J_rows,
                                  const std::vector<std::string>& xi_comps = {},
                                  const std::vector<std::string>& eta_comps = {});

    Eigen::MatrixXd J_at(const Point& p) const;
    Eigen::VectorXd xi_at(const Point& p) const;
    Eigen::VectorXd eta_at(const Point& p) const;
};

// Pointwise evaluation bundle used by the model curvature formulas.
struct StructureAt {
    bool contact = false;
    Eigen::MatrixXd J;
    Eigen::VectorXd xi, eta;
};

StructureAt structure_at(const StructureTensors& st, const Point& p);

// Constant-curvature comparison models.  Real: sectional curvature c.
// Complex: constant holomorphic sectional curvature c.  The Sasakian /
// Kenmotsu / cosymplectic / C(alpha) families resolve to a generalized
// Sasakian triple (c1, c2, c3).
enum class ModelFamily {
    Real,
    Complex,
    GeneralizedSasakian,
    Sasakian,
    Kenmotsu,
    Cosymplectic,
    CAlpha,
};

struct SpaceFormModel {
    ModelFamily family = ModelFamily::Real;
    double c = 0;                    // Real / Complex / the resolved families
    double c1 = 0, c2 = 0, c3 = 0;   // generalized Sasakian triple
    double alpha = 0;                // CAlpha only

    static SpaceFormModel real(double c);
    static SpaceFormModel complex_form(double c);
    static SpaceFormModel generalized_sasakian(double c1, double c2, double c3);
    static SpaceFormModel sasakian(double c);
    static SpaceFormModel kenmotsu(double c);
    static SpaceFormModel cosymplectic(double c);
    static SpaceFormModel c_alpha(double c, double alpha);

    bool needs_structure() const { return family != ModelFamily::Real; }
    bool contact_family() const {
        return family != ModelFamily::Real && family != ModelFamily::Complex;
    }
};

// (0,4) model curvature R(Z1,Z2,Z3,Z4) = g(R(Z1,Z2)Z3, Z4) with the sign
// convention K(X,Y) = R(X,Y,Y,X); g is the metric matrix at the point and
// st supplies J / eta when the family needs them (MissingStructure if null).
double model_curvature(const SpaceFormModel& model, const Eigen::MatrixXd& g,
                       const StructureAt* st, const Eigen::VectorXd& z1,
                       const Eigen::VectorXd& z2, const Eigen::VectorXd& z3,
                       const Eigen::VectorXd& z4);

// Axiom residuals of the declared structure, maximized over the given points
// (and implicitly over all vectors: the residuals are matrix norms).
struct StructureReport {
    struct Axiom {
        std::string label;
        double residual = 0;
    };
    std::vector<Axiom> axioms;
    double max_residual = 0;
    bool pass = false;
};

StructureReport validate_structure(const SubmersionSetup& setup,
                                   const std::vector<Point>& points,
                                   double struct_tol = tol::structure);

// Frame components of the structure: qform(i,j) = g1(J V_i, V_j),
// pv(i,a) = g1(J V_i, h_a), pform(a,b) = g1(J h_a, h_b), plus eta on the
// frames (zero vectors for complex structures).
struct PQNorms {
    Eigen::MatrixXd qform, pv, pform;
    Eigen::VectorXd etaV, etaH;
    double normQ2 = 0, normP2 = 0, normPV2 = 0;
};

PQNorms pq_norms(const SubmersionSetup& setup, const Point& p, const FramePair& frames);

// Placement of xi relative to the splitting at p.
enum class XiPlacement { Vertical, Horizontal };

XiPlacement xi_placement(const SubmersionSetup& setup, const Point& p,
                         const FramePair& frames, double align_tol = tol::align);

// Largest deviation |R^{M1} - R^{model}| over all coordinate quadruples at
// each point; pass iff below the mode's fit tolerance.
struct ModelFitReport {
    double residual = 0;
    double tolerance = 0;
    bool pass = false;
};

ModelFitReport model_fit(const SubmersionSetup& setup, const std::vector<Point>& points,
                         const SpaceFormModel& model);

}  // namespace subcurv
