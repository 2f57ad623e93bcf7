#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

namespace hbarlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct OutOfDomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Coordinate chart of an explosive triple: coordinates split as (x, y, z)
/// with the central submanifold at y = z = 0 and the distinguished normal
/// directions spanned by y. The domain is an axis-aligned box.
struct ExplosiveChart {
    int dim_x = 0;
    int dim_y = 0;
    int dim_z = 0;
    Vec lo;  // box bounds over all dim() coordinates; empty = unbounded
    Vec hi;

    ExplosiveChart(int nx, int ny, int nz);
    ExplosiveChart(int nx, int ny, int nz, Vec lo_, Vec hi_);

    int dim() const { return dim_x + dim_y + dim_z; }
    bool contains(const Vec& p) const;
    /// Uniform sample from the (clamped) box; unbounded axes use [-1, 1].
    Vec sample(std::mt19937_64& rng) const;
    /// Sample a point of the central submanifold (y = z = 0).
    Vec sample_central(std::mt19937_64& rng) const;
};

/// Point of the exploded chart: (x, y, z, hbar) with (x, hbar*y, hbar^2*z)
/// required to lie in the underlying chart.
struct ExplodedPoint {
    Vec x, y, z;
    double hbar = 0.0;

    Vec flat() const;  // (x, y, z) stacked, without hbar
    static ExplodedPoint split(const ExplosiveChart& chart, const Vec& xyz, double hbar);
};

/// Projection Pr(x, y, z, hbar) = (x, hbar*y, hbar^2*z). Throws
/// OutOfDomainError when the image leaves the chart box.
Vec project(const ExplosiveChart& chart, const ExplodedPoint& p);

/// Smooth map between explosive charts with a derivative oracle. Closed-form
/// partials may be supplied; otherwise central finite differences are used
/// with per-order steps.
class CompatibleMap {
public:
    using EvalFn = std::function<Vec(const Vec&)>;
    // partial of output component `out` with respect to listed coordinates
    using D1Fn = std::function<double(int out, int a, const Vec&)>;
    using D2Fn = std::function<double(int out, int a, int b, const Vec&)>;
    using D3Fn = std::function<double(int out, int a, int b, int c, const Vec&)>;

    CompatibleMap(ExplosiveChart src, ExplosiveChart dst, EvalFn eval);

    const ExplosiveChart& source() const { return src_; }
    const ExplosiveChart& target() const { return dst_; }

    Vec operator()(const Vec& p) const { return eval_(p); }

    void set_closed_form(D1Fn d1, D2Fn d2 = nullptr, D3Fn d3 = nullptr);
    void set_fd_steps(double h1, double h2, double h3);

    double partial1(int out, int a, const Vec& p) const;
    double partial2(int out, int a, int b, const Vec& p) const;
    double partial3(int out, int a, int b, int c, const Vec& p) const;

    bool has_closed_form() const { return static_cast<bool>(d1_); }
    double fd_step1() const { return h1_; }

private:
    ExplosiveChart src_, dst_;
    EvalFn eval_;
    D1Fn d1_;
    D2Fn d2_;
    D3Fn d3_;
    double h1_ = 1e-4, h2_ = 1e-3, h3_ = 5e-3;
};

/// Composition: explosive charts compose like plain maps; derivative oracles
/// of the composite fall back to finite differences.
CompatibleMap compose(const CompatibleMap& outer, const CompatibleMap& inner);

struct CompatibilityReport {
    double max_phi_y_on_central = 0.0;  // |phi^y(x,0,0)|
    double max_phi_z_on_central = 0.0;  // |phi^z(x,0,0)|
    double max_phi_z_y = 0.0;           // |phi^z_y(x,0,0)|
    double max_lower_block = 0.0;       // |phi^y_x|, |phi^z_x| residuals
    int samples = 0;
    double tol = 0.0;
    bool pass = false;
};

/// Checks the defining conditions of a compatible map on sampled central
/// points, including the zero blocks of the block-triangular Jacobian.
CompatibilityReport check_compatible(const CompatibleMap& map, int samples, double tol,
                                     std::mt19937_64& rng);

/// Exploded map. For hbar != 0 this is conjugation by the projection; at
/// hbar = 0 it is the graded linearization
///   (phi^x, y.phi^y_y, 1/2 y^2.phi^z_yy + z.phi^z_z, 0)
/// with every derivative taken at (x, 0, 0).
ExplodedPoint explode_map(const CompatibleMap& map, const ExplodedPoint& p);

/// Jacobian of the exploded map at an hbar = 0 point, assembled from the
/// derivative oracle. Row/column order: (x', y', z', hbar) by (x, y, z, hbar).
Mat explode_jacobian(const CompatibleMap& map, const ExplodedPoint& p);

enum class Verdict { Yes, No, Indeterminate };

struct MapClassification {
    Verdict submersion = Verdict::Indeterminate;
    Verdict immersion = Verdict::Indeterminate;
    Verdict injective_immersion = Verdict::Indeterminate;
};

/// Rank tests of the diagonal blocks phi^x_x, phi^y_y, phi^z_z at sampled
/// central points. Singular values within 10*tol of zero give Indeterminate.
MapClassification classify_map(const CompatibleMap& map, int samples, double tol,
                               std::mt19937_64& rng);

/// 1-form on the base chart whose x and y coefficients vanish on the central
/// submanifold. eval returns all dim() coefficients at a base point.
struct NormalOneForm {
    std::function<Vec(const Vec&)> coeffs;
};

struct FormValue {
    Vec dxyz;       // coefficients of dx, dy, dz in exploded coordinates
    double dhbar = 0.0;
};

/// The exploded form: (Pr* theta)/hbar, with the removable singularity at
/// hbar = 0 filled in by Richardson extrapolation at hbar = +-h, +-h/2.
/// Throws when the two extrapolation levels disagree beyond tol.
FormValue explode_form(const ExplosiveChart& chart, const NormalOneForm& theta,
                       const ExplodedPoint& p, double h = 1e-3, double tol = 1e-6);

/// Pullback of theta through Pr at an exploded point; equals hbar * explode_form.
FormValue projection_pullback(const ExplosiveChart& chart, const NormalOneForm& theta,
                              const ExplodedPoint& p);

struct RescaleFunction {
    std::function<double(const Vec&)> value;  // on the base chart
};

/// Res_r(x, y, z, hbar) = (x, e^r y, e^{2r} z, e^{-r} hbar), r at Pr(p).
ExplodedPoint rescale(const ExplosiveChart& chart, const RescaleFunction& r,
                      const ExplodedPoint& p);

}  // namespace hbarlab
