#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "subcurv/metric.hpp"
#include "subcurv/tolerances.hpp"

namespace subcurv {

struct StructureTensors;  // space_forms.hpp

// A smooth map F: R^n -> R^m with closed-form components.
class SmoothMap {
public:
    SmoothMap(int n, int m, std::vector<Expression> components, DerivMode mode);
    static SmoothMap parse(int n, const std::vector<std::string>& components,
                           DerivMode mode);

    int n() const { return n_; }
    int m() const { return m_; }
    DerivMode mode() const { return mode_; }

    Eigen::VectorXd value(const Point& p) const;     // F(p), length m
    Eigen::MatrixXd jacobian(const Point& p) const;  // dF, m x n

private:
    int n_, m_;
    DerivMode mode_;
    std::vector<Expression> comp_;
    std::vector<Expression> jac_;  // [a * n + i], Analytic mode only
};

// Total space, base, map, and optional structure tensors.
struct SubmersionSetup {
    MetricField g1;
    MetricField g2;
    SmoothMap map;
    std::shared_ptr<const StructureTensors> structure;  // may be null

    int n() const { return g1.dim(); }
    int m() const { return g2.dim(); }
    int r() const { return n() - m(); }  // fiber dimension
    int s() const { return m(); }

    SubmersionSetup(MetricField g1_, MetricField g2_, SmoothMap map_,
                    std::shared_ptr<const StructureTensors> structure_ = nullptr);
};

// Orthonormal frames (w.r.t. g1) of the vertical and horizontal spaces at p.
// `vertical`/`horizontal` hold the frame vectors as columns in chart
// coordinates.  Qv/Qh record the rotation applied on top of the deterministic
// default construction, and `seeds` the seed basis used — together they let
// the same frame field be re-evaluated smoothly at nearby points.
struct FramePair {
    Point p;
    Eigen::MatrixXd vertical;    // n x r
    Eigen::MatrixXd horizontal;  // n x s
    Eigen::MatrixXd Qv;          // r x r orthogonal
    Eigen::MatrixXd Qh;          // s x s orthogonal
    Eigen::MatrixXd seeds;       // n x n, columns tried in order

    int r() const { return static_cast<int>(vertical.cols()); }
    int s() const { return static_cast<int>(horizontal.cols()); }
};

// F_* at p as an m x n matrix; throws RankDeficient when rank < m.
Eigen::MatrixXd pushforward(const SubmersionSetup& setup, const Point& p);

// Deterministic orthonormal frames at p.  The vertical frame spans ker F_*
// (null space by SVD, then Gram-Schmidt under g1 over the seed vectors in
// index order); the horizontal frame spans its g1-orthogonal complement.
FramePair build_frames(const SubmersionSetup& setup, const Point& p,
                       std::optional<Eigen::MatrixXd> seed_basis = std::nullopt);

// The same frame field evaluated at a nearby point q: rebuilds the default
// frames at q from ref.seeds and re-applies ref.Qv/ref.Qh.  Throws
// GramSchmidtBreakdown if the frames jump (Gram mismatch > 0.1), which
// signals differentiation across a frame discontinuity.
FramePair frames_at(const SubmersionSetup& setup, const Point& q, const FramePair& ref);

// Rotate frames by a constant orthogonal matrix (columns transform).
FramePair rotate_vertical(const FramePair& frames, const Eigen::MatrixXd& Q);
FramePair rotate_horizontal(const FramePair& frames, const Eigen::MatrixXd& Q);

// Frames with V1, V2 spanning the plane span{u, w} (orthonormalized under g1),
// the rest completed deterministically.  u, w must lie in the vertical space
// within frame_tol; similarly for the horizontal variant.
FramePair adapt_vertical_pair(const SubmersionSetup& setup, const FramePair& frames,
                              const Eigen::VectorXd& u, const Eigen::VectorXd& w);
FramePair adapt_horizontal_pair(const SubmersionSetup& setup, const FramePair& frames,
                                const Eigen::VectorXd& u, const Eigen::VectorXd& w);

// Frames rotated so h1 is parallel to the given horizontal vector (usually the
// mean curvature H).  Returns the input unchanged when |Hvec| <= align_tol.
FramePair align_h1(const SubmersionSetup& setup, const FramePair& frames,
                   const Eigen::VectorXd& Hvec, double align_tol = tol::align);

// Worst-case deviations of a FramePair from exact orthonormality, used by
// validation and the property tests.
struct FrameResiduals {
    double ortho_v = 0;      // max |g1(Vi,Vj) - delta_ij|
    double ortho_h = 0;      // max |g1(hi,hj) - delta_ij|
    double cross = 0;        // max |g1(Vi,hj)|
    double verticality = 0;  // max |F_* Vi| (scaled by the Jacobian's size)
};

FrameResiduals frame_residuals(const SubmersionSetup& setup, const FramePair& frames);

struct SubmersionPointCheck {
    Point p;
    double residual;   // max |g1(h_i,h_j) - g2(F_* h_i, F_* h_j)|
    bool ok;           // residual < tolerance and both sides evaluable
    std::string note;  // set when the base metric could not be evaluated
};

struct SubmersionReport {
    std::vector<SubmersionPointCheck> points;
    double max_residual = 0;
    double tolerance = tol::sub;
    bool pass = true;  // advisory: failures downgrade runs to warnings
};

SubmersionReport validate_submersion(const SubmersionSetup& setup,
                                     const std::vector<Point>& points,
                                     double sub_tol = tol::sub);

}  // namespace subcurv
