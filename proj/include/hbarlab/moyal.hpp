#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "hbarlab/groupoid.hpp"  // ConstantPoissonData

namespace hbarlab {

using Cplx = std::complex<double>;

/// Complex samples on a uniform grid centered near 0: coordinate of index i
/// along each axis is (i - n/2) * spacing, so 0 is always a grid point and
/// the grid is a sublattice of itself under differences.
struct LatticeFunction {
    int dim = 1;       // 1 or 2
    int n = 0;         // points per axis
    double spacing = 0.0;
    std::vector<Cplx> values;  // row-major over axes
    bool truncation_warning = false;  // set when boundary mass is non-negligible

    LatticeFunction() = default;
    LatticeFunction(int dim_, int n_, double spacing_);

    double coord(int i) const { return (i - n / 2) * spacing; }
    int size() const;
    double cell_volume() const;

    Cplx& at(int i);               // dim 1
    Cplx& at(int i, int j);        // dim 2
    Cplx get(int i) const;
    Cplx get(int i, int j) const;
    /// value at off-grid index offsets, zero outside the grid
    Cplx get_clamped(int i) const;
    Cplx get_clamped(int i, int j) const;

    double sup_norm() const;
    double boundary_mass() const;  // max |value| on the outermost layer

    static LatticeFunction sample(int dim, int n, double spacing,
                                  const std::function<Cplx(const Vec&)>& f);
};

enum class PolarizationCase { FlatV, Kahler };

/// Prequantization cocycle sigma(y, y') = exp(+-(i/2) hbar Pi(y, y')); the
/// flat-V case carries the + sign, the Kahler case the - sign.
Cplx cocycle_sigma(const Vec& y, const Vec& yp, double hbar, PolarizationCase pcase,
                   const Mat& Pi);

/// Twisted convolution on V*: (a*b)(y) = sum_{y'} a(y') b(y-y') sigma(y', y-y')
/// times the cell volume. Grids must match.
LatticeFunction twisted_convolution(const LatticeFunction& a, const LatticeFunction& b,
                                    double hbar, const Mat& Pi,
                                    PolarizationCase pcase = PolarizationCase::FlatV);

/// Scalar half-form correction data: m = rk P0 - rk D0 and the magnitude of
/// (1/m!)(Pi/2pi)^m in coordinate volume normalization.
struct EpsilonFactor {
    int m = 0;
    double eps = 1.0;
};

EpsilonFactor kahler_epsilon(const ConstantPoissonData& data);

/// Element of the Kahler-case algebra at fixed hbar: either a function of y
/// alone (x-independent) or samples over an (x, y) product grid.
struct MoyalElement {
    double hbar = 0.0;
    bool translation_invariant = true;
    LatticeFunction y_values;          // always present; the y-grid
    // full representation: values indexed x-major over x_grid x y_grid
    int x_n = 0;
    double x_spacing = 0.0;
    std::vector<Cplx> full_values;

    double x_coord(int i) const { return (i - x_n / 2) * x_spacing; }
    Cplx full_at(const std::vector<int>& xi, const std::vector<int>& yi) const;
    /// multilinear interpolation in x at a y grid node
    Cplx interp_x(const Vec& x, const std::vector<int>& yi) const;
    /// multilinear interpolation in both x and y
    Cplx eval(const Vec& x, const Vec& y) const;
    double sup_norm() const;
};

/// Unit multiplier K(x, y, hbar) = e^{-hbar ||y||^2 / 4} hbar^{m/2} eps^{1/2},
/// x-independent; ||.|| is the Kahler norm on V*.
MoyalElement unit_multiplier(double hbar, const ConstantPoissonData& data, int grid_n,
                             double extent);

/// Product formula of the Kahler case:
/// (a*b)(x,y) = hbar^{m/2} eps^{1/2} sum_{y'+y''=y}
///   a(x + (hbar/2)#y'', y') b(x - (hbar/2)#y', y'') e^{-(i/2) hbar Pi(y',y'')} dV.
/// Throws on hbar < 0 (the polarization is not positive there).
MoyalElement kahler_product(const MoyalElement& a, const MoyalElement& b,
                            const ConstantPoissonData& data);

/// Classical-limit evaluation: Richardson limit of
/// hbar^{-m/2} eps^{-1/2} a(x, y, hbar) over a family at hbar, hbar/2, ...
struct Ev0Result {
    Cplx value;
    double residual = 0.0;
};

Ev0Result ev0(const std::vector<MoyalElement>& family, const ConstantPoissonData& data,
              const Vec& x, const Vec& y);

/// Fourier transform of a real-space lattice onto the dual grid with
/// spacing 2 pi / (n h): F(y) = (2 pi)^{-d} h^d sum_x f(x) e^{-i x.y}.
/// Normalized so that at hbar = 0 the twisted convolution intertwines with
/// pointwise multiplication. Throws when spectral mass aliases.
LatticeFunction weyl_quantize(const LatticeFunction& f, double hbar);

/// Inverse of weyl_quantize on the dual grid (test oracle).
LatticeFunction weyl_dequantize(const LatticeFunction& F, int n, double spacing);

/// Poisson bracket {f, g}_Pi = Pi(df, dg) with spectral derivatives.
LatticeFunction poisson_bracket(const LatticeFunction& f, const LatticeFunction& g,
                                const Mat& Pi);

/// sup norm of [Q f, Q g] + i hbar Q({f, g}_Pi), products by the flat-V
/// twisted convolution.
double dirac_defect(const LatticeFunction& f, const LatticeFunction& g, double hbar,
                    const Mat& Pi);

/// Involution of the flat-V algebra: a^*(y) = conj(a(-y)).
LatticeFunction involution(const LatticeFunction& a);

}  // namespace hbarlab
