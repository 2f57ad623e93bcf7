#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>

namespace hbarlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Lie groupoid presented through explicit structure maps on coordinate
/// models of the arrow, pairs, and base spaces. The pairs model is an
/// explicit parameterization: its samples satisfy src(pr1) = tgt(pr2) by
/// construction, and pair_coords inverts (pr1, pr2) on composable arrows.
struct GroupoidChartModel {
    int dim_base = 0;
    int dim_arrow = 0;
    int dim_pairs = 0;

    std::function<Vec(const Vec&)> unit;  // base -> arrow
    std::function<Vec(const Vec&)> inv;   // arrow -> arrow
    std::function<Vec(const Vec&)> src;   // arrow -> base
    std::function<Vec(const Vec&)> tgt;   // arrow -> base
    std::function<Vec(const Vec&)> pr1;   // pairs -> arrow
    std::function<Vec(const Vec&)> pr2;   // pairs -> arrow
    std::function<Vec(const Vec&)> mul;   // pairs -> arrow

    /// pairs coordinates of a composable (g, h); callers guarantee
    /// src(g) = tgt(h).
    std::function<Vec(const Vec&, const Vec&)> pair_coords;

    std::function<Vec(std::mt19937_64&)> sample_base;
    std::function<Vec(std::mt19937_64&)> sample_arrow;
    std::function<Vec(std::mt19937_64&)> sample_pair;
    /// third arrow composable with pr2 of a given pairs point
    std::function<Vec(const Vec&, std::mt19937_64&)> sample_third;
};

struct CheckReport {
    std::map<std::string, double> residuals;  // per-diagram max residual
    int samples = 0;
    double tol = 0.0;
    bool pass = false;

    double max_residual() const;
};

/// Evaluates every commutative diagram of the Lie-groupoid definition as a
/// pointwise identity at random samples. When the model carries an hbar
/// coordinate (assumed last arrow coordinate when hbar_slice is set), a
/// fraction of samples is forced onto hbar = 0.
CheckReport check_axioms(const GroupoidChartModel& model, int n_samples, double tol,
                         std::mt19937_64& rng, bool force_hbar_zero_slice = true);

/// Degree-2 form on the arrow model: antisymmetric coefficient matrix per
/// point, with an optional closed-form exterior derivative.
struct DifferentialFormModel {
    int degree = 2;
    std::function<Mat(const Vec&)> eval;
    std::function<double(const Vec&)> det_hint;  // unused by default
};

/// Multiplicative coboundary of a scalar function:
/// (pr1* - m* + pr2*) f at a pairs point.
double coboundary(const GroupoidChartModel& model, const std::function<double(const Vec&)>& f,
                  const Vec& pair_point);

/// Multiplicative coboundary of a 1-form given by its coefficient array on
/// the arrow model; pullbacks use finite-difference Jacobians of pr1, pr2, m.
Vec coboundary_form(const GroupoidChartModel& model,
                    const std::function<Vec(const Vec&)>& theta, const Vec& pair_point,
                    double fd_step = 1e-5);

/// Coboundary of a 2-form (coefficient matrices), same pullback scheme.
Mat coboundary_two_form(const GroupoidChartModel& model, const DifferentialFormModel& omega,
                        const Vec& pair_point, double fd_step = 1e-5);

struct FormCheckReport {
    double closedness = 0.0;
    double multiplicativity = 0.0;
    double min_abs_det = 0.0;
    bool degenerate = false;
    Vec degenerate_witness;
};

FormCheckReport check_forms(const GroupoidChartModel& model, const DifferentialFormModel& omega,
                            int n_samples, double tol, std::mt19937_64& rng);

/// Max residual of {f o t, g o t}_omega against hbar * Pi(df, dg) at t of the
/// sample. Pi is supplied as the bracket of the base Poisson structure.
double check_target_poisson(const GroupoidChartModel& model, const DifferentialFormModel& omega,
                            const std::function<double(const Vec&)>& f,
                            const std::function<double(const Vec&)>& g,
                            const std::function<double(const Vec&)>& base_bracket,
                            int n_samples, std::mt19937_64& rng, double fd_step = 1e-6);

/// Constant Poisson structure on V with optional Kahler metric.
struct ConstantPoissonData {
    int n = 0;
    Mat Pi;            // antisymmetric n x n
    std::optional<Mat> metric;  // symmetric positive definite when present

    void validate() const;
    // #_Pi, with the contraction slot fixed by multiplicativity of the
    // contact form in the exploded groupoid model
    Vec sharp(const Vec& y) const { return -(Pi * y); }
    double pairing(const Vec& y, const Vec& yp) const { return y.dot(Pi * yp); }
};

ConstantPoissonData standard_symplectic_data(int n);

/// The exploded groupoid over V x R with the closed-form polynomial
/// structure maps of the constant-Poisson model. Arrow coordinates
/// (x, y, z, hbar) with z scalar; pairs coordinates (x, y, y', z, z', hbar).
GroupoidChartModel constant_pi_model(const ConstantPoissonData& data, double box = 2.0);

/// Coefficient matrix of omega_Gamma = dx^i ^ dy_i + dhbar ^ dz on the
/// constant-Pi arrow model.
DifferentialFormModel constant_pi_symplectic_form(int n);

/// Exploded contact-form coefficients y.dx + hbar dz + 2z dhbar on the
/// arrow model (coordinates x, y, z, hbar).
std::function<Vec(const Vec&)> constant_pi_contact_form(int n);

/// Pair groupoid of R^n, pairs model (a, b, c) for ((a,b),(b,c)).
GroupoidChartModel pair_groupoid_model(int n, double box = 2.0);

/// Structure constants of the rescaled su(2) basis:
/// [X',Y'] = Z', [Y',Z'] = hbar^2 X', [Z',X'] = hbar^2 Y'.
using StructureConstants = std::array<std::array<std::array<double, 3>, 3>, 3>;

StructureConstants su2_bracket_family(double hbar);

double jacobi_residual(const StructureConstants& c);

}  // namespace hbarlab
