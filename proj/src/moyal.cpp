#include "hbarlab/moyal.hpp"

#include <cmath>
#include <numbers>

#include "hbarlab/numerics.hpp"

namespace hbarlab {

namespace {

constexpr double kPi = std::numbers::pi;

int flat_size(int dim, int n) {
    int s = 1;
    for (int d = 0; d < dim; ++d) s *= n;
    return s;
}

// flat index <-> per-axis indices for dim 1 or 2
inline void unflatten(int dim, int n, int flat, int* idx) {
    if (dim == 1) {
        idx[0] = flat;
    } else {
        idx[0] = flat / n;
        idx[1] = flat % n;
    }
}

inline Vec grid_coord(int dim, int n, double h, const int* idx) {
    Vec y(dim);
    for (int d = 0; d < dim; ++d) y[d] = (idx[d] - n / 2) * h;
    return y;
}

}  // namespace

LatticeFunction::LatticeFunction(int dim_, int n_, double spacing_)
    : dim(dim_), n(n_), spacing(spacing_) {
    if (dim < 1 || dim > 2) throw std::invalid_argument("LatticeFunction: dim must be 1 or 2");
    if (n < 2) throw std::invalid_argument("LatticeFunction: n must be >= 2");
    values.assign(flat_size(dim, n), Cplx{0.0, 0.0});
}

int LatticeFunction::size() const { return flat_size(dim, n); }

double LatticeFunction::cell_volume() const {
    double v = 1.0;
    for (int d = 0; d < dim; ++d) v *= spacing;
    return v;
}

Cplx& LatticeFunction::at(int i) { return values[i]; }
Cplx& LatticeFunction::at(int i, int j) { return values[i * n + j]; }
Cplx LatticeFunction::get(int i) const { return values[i]; }
Cplx LatticeFunction::get(int i, int j) const { return values[i * n + j]; }

Cplx LatticeFunction::get_clamped(int i) const {
    if (i < 0 || i >= n) return {0.0, 0.0};
    return values[i];
}

Cplx LatticeFunction::get_clamped(int i, int j) const {
    if (i < 0 || i >= n || j < 0 || j >= n) return {0.0, 0.0};
    return values[i * n + j];
}

double LatticeFunction::sup_norm() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
}

double LatticeFunction::boundary_mass() const {
    double m = 0.0;
    int idx[2];
    for (int f = 0; f < size(); ++f) {
        unflatten(dim, n, f, idx);
        bool edge = false;
        for (int d = 0; d < dim; ++d)
            if (idx[d] == 0 || idx[d] == n - 1) edge = true;
        if (edge) m = std::max(m, std::abs(values[f]));
    }
    return m;
}

LatticeFunction LatticeFunction::sample(int dim, int n, double spacing,
                                        const std::function<Cplx(const Vec&)>& f) {
    LatticeFunction g(dim, n, spacing);
    int idx[2];
    for (int fl = 0; fl < g.size(); ++fl) {
        unflatten(dim, n, fl, idx);
        g.values[fl] = f(grid_coord(dim, n, spacing, idx));
    }
    return g;
}

Cplx cocycle_sigma(const Vec& y, const Vec& yp, double hbar, PolarizationCase pcase,
                   const Mat& Pi) {
    const double sign = (pcase == PolarizationCase::FlatV) ? 1.0 : -1.0;
    const double phase = 0.5 * sign * hbar * y.dot(Pi * yp);
    return {std::cos(phase), std::sin(phase)};
}

LatticeFunction twisted_convolution(const LatticeFunction& a, const LatticeFunction& b,
                                    double hbar, const Mat& Pi, PolarizationCase pcase) {
    if (a.dim != b.dim || a.n != b.n || a.spacing != b.spacing)
        throw std::invalid_argument("twisted_convolution: grid mismatch");
    LatticeFunction out(a.dim, a.n, a.spacing);
    const double vol = a.cell_volume();
    const int n = a.n, half = a.n / 2;
    const double sign = (pcase == PolarizationCase::FlatV) ? 1.0 : -1.0;
    int ik[2], ij[2];
    for (int k = 0; k < out.size(); ++k) {
        unflatten(a.dim, n, k, ik);
        Cplx acc{0.0, 0.0};
        for (int j = 0; j < a.size(); ++j) {
            const Cplx av = a.values[j];
            if (av == Cplx{0.0, 0.0}) continue;
            unflatten(a.dim, n, j, ij);
            // index of y - y' is k - j + n/2 per axis
            double yp[2], yq[2];
            int im[2];
            bool in = true;
            for (int d = 0; d < a.dim; ++d) {
                im[d] = ik[d] - ij[d] + half;
                if (im[d] < 0 || im[d] >= n) {
                    in = false;
                    break;
                }
                yq[d] = (im[d] - half) * a.spacing;
                yp[d] = (ij[d] - half) * a.spacing;
            }
            if (!in) continue;
            const Cplx bv = (a.dim == 1) ? b.get(im[0]) : b.get(im[0], im[1]);
            double pairing = 0.0;
            for (int d1 = 0; d1 < a.dim; ++d1)
                for (int d2 = 0; d2 < a.dim; ++d2) pairing += yp[d1] * Pi(d1, d2) * yq[d2];
            const double phase = 0.5 * sign * hbar * pairing;
            acc += av * bv * Cplx{std::cos(phase), std::sin(phase)};
        }
        out.values[k] = acc * vol;
    }
    if (a.boundary_mass() > 1e-6 || b.boundary_mass() > 1e-6) out.truncation_warning = true;
    return out;
}

EpsilonFactor kahler_epsilon(const ConstantPoissonData& data) {
    if (!data.metric) throw std::invalid_argument("kahler_epsilon: Kahler metric required");
    if (data.n % 2 != 0) throw std::invalid_argument("kahler_epsilon: dim V must be even");
    EpsilonFactor e;
    e.m = data.n / 2;
    // |Pf(Pi)| = sqrt(|det Pi|) for antisymmetric Pi
    const double pf = std::sqrt(std::abs(data.Pi.determinant()));
    e.eps = pf / std::pow(2.0 * kPi, e.m);
    return e;
}

Cplx MoyalElement::full_at(const std::vector<int>& xi, const std::vector<int>& yi) const {
    const int dim = y_values.dim;
    int xf = 0, yf = 0;
    for (int d = 0; d < dim; ++d) {
        xf = xf * x_n + xi[d];
        yf = yf * y_values.n + yi[d];
    }
    return full_values[xf * y_values.size() + yf];
}

Cplx MoyalElement::interp_x(const Vec& x, const std::vector<int>& yi) const {
    if (translation_invariant) {
        if (y_values.dim == 1) return y_values.get(yi[0]);
        return y_values.get(yi[0], yi[1]);
    }
    const int dim = y_values.dim;
    // multilinear interpolation over the x grid, zero outside
    int base[2];
    double frac[2];
    for (int d = 0; d < dim; ++d) {
        const double t = x[d] / x_spacing + x_n / 2;
        const double fl = std::floor(t);
        base[d] = static_cast<int>(fl);
        frac[d] = t - fl;
    }
    Cplx acc{0.0, 0.0};
    const int corners = 1 << dim;
    for (int c = 0; c < corners; ++c) {
        double w = 1.0;
        std::vector<int> xi(dim);
        bool in = true;
        for (int d = 0; d < dim; ++d) {
            const int bit = (c >> d) & 1;
            xi[d] = base[d] + bit;
            w *= bit ? frac[d] : (1.0 - frac[d]);
            if (xi[d] < 0 || xi[d] >= x_n) in = false;
        }
        if (in && w != 0.0) acc += w * full_at(xi, yi);
    }
    return acc;
}

Cplx MoyalElement::eval(const Vec& x, const Vec& y) const {
    const int dim = y_values.dim;
    const int n = y_values.n;
    int base[2];
    double frac[2];
    for (int d = 0; d < dim; ++d) {
        const double t = y[d] / y_values.spacing + n / 2;
        const double fl = std::floor(t);
        base[d] = static_cast<int>(fl);
        frac[d] = t - fl;
    }
    Cplx acc{0.0, 0.0};
    const int corners = 1 << dim;
    for (int c = 0; c < corners; ++c) {
        double w = 1.0;
        std::vector<int> yi(dim);
        bool in = true;
        for (int d = 0; d < dim; ++d) {
            const int bit = (c >> d) & 1;
            yi[d] = base[d] + bit;
            w *= bit ? frac[d] : (1.0 - frac[d]);
            if (yi[d] < 0 || yi[d] >= n) in = false;
        }
        if (in && w != 0.0) acc += w * interp_x(x, yi);
    }
    return acc;
}

double MoyalElement::sup_norm() const {
    if (translation_invariant) return y_values.sup_norm();
    double m = 0.0;
    for (const auto& v : full_values) m = std::max(m, std::abs(v));
    return m;
}

MoyalElement unit_multiplier(double hbar, const ConstantPoissonData& data, int grid_n,
                             double extent) {
    if (hbar <= 0.0) throw std::invalid_argument("unit_multiplier: hbar must be positive");
    const auto e = kahler_epsilon(data);
    const Mat ginv = data.metric->inverse();
    MoyalElement K;
    K.hbar = hbar;
    K.translation_invariant = true;
    const double amp = std::pow(hbar, 0.5 * e.m) * std::sqrt(e.eps);
    const double h = 2.0 * extent / grid_n;
    K.y_values = LatticeFunction::sample(data.n, grid_n, h, [&](const Vec& y) -> Cplx {
        const double n2 = y.dot(ginv * y);
        return {amp * std::exp(-0.25 * hbar * n2), 0.0};
    });
    return K;
}

MoyalElement kahler_product(const MoyalElement& a, const MoyalElement& b,
                            const ConstantPoissonData& data) {
    if (a.hbar != b.hbar) throw std::invalid_argument("kahler_product: hbar mismatch");
    if (a.hbar < 0.0)
        throw std::domain_error("kahler_product: polarization not positive for hbar < 0");
    const auto& ga = a.y_values;
    const auto& gb = b.y_values;
    if (ga.dim != gb.dim || ga.n != gb.n || ga.spacing != gb.spacing)
        throw std::invalid_argument("kahler_product: grid mismatch");
    const auto e = kahler_epsilon(data);
    const double pref = std::pow(a.hbar, 0.5 * e.m) * std::sqrt(e.eps) * ga.cell_volume();
    const double hbar = a.hbar;
    const int dim = ga.dim, n = ga.n, half = n / 2;

    MoyalElement out;
    out.hbar = hbar;
    out.translation_invariant = a.translation_invariant && b.translation_invariant;
    out.y_values = LatticeFunction(dim, n, ga.spacing);
    if (!out.translation_invariant) {
        const MoyalElement& fullref = a.translation_invariant ? b : a;
        out.x_n = fullref.x_n;
        out.x_spacing = fullref.x_spacing;
        out.full_values.assign(static_cast<std::size_t>(flat_size(dim, out.x_n)) *
                                   out.y_values.size(),
                               Cplx{0.0, 0.0});
    }

    int ik[2], ij[2];
    const int x_count = out.translation_invariant ? 1 : flat_size(dim, out.x_n);
    std::vector<int> yj(dim), yq(dim);
    for (int xf = 0; xf < x_count; ++xf) {
        int xi[2] = {0, 0};
        if (!out.translation_invariant) unflatten(dim, out.x_n, xf, xi);
        Vec x = Vec::Zero(dim);
        if (!out.translation_invariant)
            for (int d = 0; d < dim; ++d) x[d] = (xi[d] - out.x_n / 2) * out.x_spacing;
        for (int k = 0; k < out.y_values.size(); ++k) {
            unflatten(dim, n, k, ik);
            Cplx acc{0.0, 0.0};
            for (int j = 0; j < ga.size(); ++j) {
                unflatten(dim, n, j, ij);
                bool in = true;
                for (int d = 0; d < dim; ++d) {
                    const int m = ik[d] - ij[d] + half;
                    if (m < 0 || m >= n) {
                        in = false;
                        break;
                    }
                    yj[d] = ij[d];
                    yq[d] = m;
                }
                if (!in) continue;
                Vec ypv(dim), yqv(dim);
                for (int d = 0; d < dim; ++d) {
                    ypv[d] = (yj[d] - half) * ga.spacing;
                    yqv[d] = (yq[d] - half) * ga.spacing;
                }
                Cplx av, bv;
                if (out.translation_invariant) {
                    av = (dim == 1) ? ga.get(yj[0]) : ga.get(yj[0], yj[1]);
                    bv = (dim == 1) ? gb.get(yq[0]) : gb.get(yq[0], yq[1]);
                } else {
                    const Vec xa = x + 0.5 * hbar * data.sharp(yqv);
                    const Vec xb = x - 0.5 * hbar * data.sharp(ypv);
                    av = a.interp_x(xa, yj);
                    bv = b.interp_x(xb, yq);
                }
                const double phase = -0.5 * hbar * ypv.dot(data.Pi * yqv);
                acc += av * bv * Cplx{std::cos(phase), std::sin(phase)};
            }
            if (out.translation_invariant)
                out.y_values.values[k] = acc * pref;
            else
                out.full_values[static_cast<std::size_t>(xf) * out.y_values.size() + k] =
                    acc * pref;
        }
    }
    return out;
}

Ev0Result ev0(const std::vector<MoyalElement>& family, const ConstantPoissonData& data,
              const Vec& x, const Vec& y) {
    if (family.size() < 3)
        throw std::invalid_argument("ev0: need at least three family members");
    const auto e = kahler_epsilon(data);
    std::vector<double> re, im;
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (i > 0) {
            const double ratio = family[i - 1].hbar / family[i].hbar;
            if (std::abs(ratio - 2.0) > 1e-9)
                throw std::invalid_argument("ev0: family must halve hbar step by step");
        }
        const double scale =
            std::pow(family[i].hbar, -0.5 * e.m) / std::sqrt(e.eps);
        const Cplx v = scale * family[i].eval(x, y);
        re.push_back(v.real());
        im.push_back(v.imag());
    }
    // non-convergence: successive differences must not grow
    double d_first = std::hypot(re[1] - re[0], im[1] - im[0]);
    double d_last = std::hypot(re.back() - re[re.size() - 2], im.back() - im[im.size() - 2]);
    if (d_last > d_first + 1e-12 && d_first > 1e-14)
        throw std::runtime_error("ev0: family does not converge; no smooth extension at hbar=0");
    const auto r = richardson_limit(re, 1);
    const auto iR = richardson_limit(im, 1);
    return {Cplx{r.value, iR.value}, std::max(r.residual, iR.residual)};
}

namespace {

/// Axis-separable DFT with centered index phases e^{sign * i * 2pi (j-n/2)(k-n/2)/n}.
std::vector<Cplx> centered_dft(const std::vector<Cplx>& values, int dim, int n, double sign) {
    std::vector<Cplx> phase(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            const double p = sign * 2.0 * kPi * (j - n / 2.0) * (k - n / 2.0) / n;
            phase[static_cast<std::size_t>(j) * n + k] = {std::cos(p), std::sin(p)};
        }
    std::vector<Cplx> work = values;
    if (dim == 1) {
        std::vector<Cplx> next(n, Cplx{0, 0});
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                next[k] += work[j] * phase[static_cast<std::size_t>(j) * n + k];
        return next;
    }
    // axis 1 (inner) then axis 0
    std::vector<Cplx> next(work.size(), Cplx{0, 0});
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            Cplx acc{0, 0};
            for (int j = 0; j < n; ++j)
                acc += work[static_cast<std::size_t>(i) * n + j] *
                       phase[static_cast<std::size_t>(j) * n + k];
            next[static_cast<std::size_t>(i) * n + k] = acc;
        }
    work.swap(next);
    std::fill(next.begin(), next.end(), Cplx{0, 0});
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            const Cplx ph = phase[static_cast<std::size_t>(j) * n + k];
            for (int c = 0; c < n; ++c)
                next[static_cast<std::size_t>(k) * n + c] +=
                    work[static_cast<std::size_t>(j) * n + c] * ph;
        }
    return next;
}

}  // namespace

LatticeFunction weyl_quantize(const LatticeFunction& f, double /*hbar*/) {
    const int n = f.n, dim = f.dim;
    const double hx = f.spacing;
    const double hy = 2.0 * kPi / (n * hx);
    const auto work = centered_dft(f.values, dim, n, -1.0);
    LatticeFunction F(dim, n, hy);
    const double norm = std::pow(hx, dim) / std::pow(2.0 * kPi, dim);
    for (std::size_t i = 0; i < work.size(); ++i) F.values[i] = work[i] * norm;
    // aliasing check: relative mass in the outer quarter of the dual grid
    const double sup = F.sup_norm();
    double outer = 0.0;
    int idx[2];
    for (int fl = 0; fl < F.size(); ++fl) {
        unflatten(dim, n, fl, idx);
        bool out = false;
        for (int d = 0; d < dim; ++d)
            if (std::abs(idx[d] - n / 2) >= (3 * n) / 8) out = true;
        if (out) outer = std::max(outer, std::abs(F.values[fl]));
    }
    if (sup > 0.0 && outer / sup > 1e-6)
        throw std::runtime_error("weyl_quantize: spectral mass near the grid edge; refine the grid");
    return F;
}

LatticeFunction weyl_dequantize(const LatticeFunction& F, int n, double spacing) {
    if (n != F.n) throw std::invalid_argument("weyl_dequantize: size mismatch");
    if (std::abs(F.spacing * spacing * n - 2.0 * kPi) > 1e-9)
        throw std::invalid_argument("weyl_dequantize: grids are not dual");
    const int dim = F.dim;
    const auto work = centered_dft(F.values, dim, n, 1.0);
    LatticeFunction f(dim, n, spacing);
    const double norm = std::pow(F.spacing, dim);
    for (std::size_t i = 0; i < work.size(); ++i) f.values[i] = work[i] * norm;
    return f;
}

LatticeFunction poisson_bracket(const LatticeFunction& f, const LatticeFunction& g,
                                const Mat& Pi) {
    if (f.dim != g.dim || f.n != g.n || f.spacing != g.spacing)
        throw std::invalid_argument("poisson_bracket: grid mismatch");
    const int n = f.n, dim = f.dim;
    // spectral derivatives: multiply by i*y on the dual grid
    auto d1 = [&](const LatticeFunction& u, int axis) {
        LatticeFunction U = weyl_quantize(u, 1.0);
        int idx[2];
        for (int fl = 0; fl < U.size(); ++fl) {
            unflatten(dim, n, fl, idx);
            U.values[fl] *= Cplx{0.0, U.coord(idx[axis])};
        }
        return weyl_dequantize(U, n, u.spacing);
    };
    std::vector<LatticeFunction> df, dg;
    for (int a = 0; a < dim; ++a) {
        df.push_back(d1(f, a));
        dg.push_back(d1(g, a));
    }
    LatticeFunction out(dim, n, f.spacing);
    for (int fl = 0; fl < out.size(); ++fl) {
        Cplx acc{0, 0};
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b)
                if (Pi(a, b) != 0.0) acc += Pi(a, b) * df[a].values[fl] * dg[b].values[fl];
        out.values[fl] = acc;
    }
    return out;
}

double dirac_defect(const LatticeFunction& f, const LatticeFunction& g, double hbar,
                    const Mat& Pi) {
    const LatticeFunction F = weyl_quantize(f, hbar);
    const LatticeFunction G = weyl_quantize(g, hbar);
    const LatticeFunction FG = twisted_convolution(F, G, hbar, Pi, PolarizationCase::FlatV);
    const LatticeFunction GF = twisted_convolution(G, F, hbar, Pi, PolarizationCase::FlatV);
    const LatticeFunction B = poisson_bracket(f, g, Pi);
    const LatticeFunction QB = weyl_quantize(B, hbar);
    double worst = 0.0;
    for (int i = 0; i < FG.size(); ++i) {
        const Cplx defect = (FG.values[i] - GF.values[i]) + Cplx{0.0, hbar} * QB.values[i];
        worst = std::max(worst, std::abs(defect));
    }
    return worst;
}

LatticeFunction involution(const LatticeFunction& a) {
    LatticeFunction out(a.dim, a.n, a.spacing);
    const int n = a.n;
    int idx[2];
    for (int fl = 0; fl < a.size(); ++fl) {
        unflatten(a.dim, n, fl, idx);
        // -y index: n - i when both lie on the grid (i = n/2 maps to itself)
        if (a.dim == 1) {
            const int m = n - idx[0];
            out.values[fl] = (m >= 0 && m < n) ? std::conj(a.get(m)) : Cplx{0, 0};
        } else {
            const int m0 = n - idx[0], m1 = n - idx[1];
            out.values[fl] = (m0 >= 0 && m0 < n && m1 >= 0 && m1 < n)
                                 ? std::conj(a.get(m0, m1))
                                 : Cplx{0, 0};
        }
    }
    return out;
}

}  // namespace hbarlab
