#include "hbarlab/explosion.hpp"

#include <cmath>
#include <sstream>

#include "hbarlab/numerics.hpp"

namespace hbarlab {

namespace {

double box_lo(const Vec& lo, int i) { return lo.size() ? lo[i] : -1.0; }
double box_hi(const Vec& hi, int i) { return hi.size() ? hi[i] : 1.0; }

}  // namespace

ExplosiveChart::ExplosiveChart(int nx, int ny, int nz) : dim_x(nx), dim_y(ny), dim_z(nz) {
    if (nx < 0 || ny < 0 || nz < 0 || nx + ny + nz < 1)
        throw std::invalid_argument("ExplosiveChart: bad dimensions");
}

ExplosiveChart::ExplosiveChart(int nx, int ny, int nz, Vec lo_, Vec hi_)
    : ExplosiveChart(nx, ny, nz) {
    if (lo_.size() != dim() || hi_.size() != dim())
        throw std::invalid_argument("ExplosiveChart: box size mismatch");
    lo = std::move(lo_);
    hi = std::move(hi_);
}

bool ExplosiveChart::contains(const Vec& p) const {
    if (p.size() != dim()) return false;
    if (!lo.size()) return true;
    for (int i = 0; i < dim(); ++i)
        if (p[i] < lo[i] || p[i] > hi[i]) return false;
    return true;
}

Vec ExplosiveChart::sample(std::mt19937_64& rng) const {
    Vec p(dim());
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < dim(); ++i) {
        const double a = box_lo(lo, i);
        const double b = box_hi(hi, i);
        p[i] = a + (b - a) * u(rng);
    }
    return p;
}

Vec ExplosiveChart::sample_central(std::mt19937_64& rng) const {
    Vec p = sample(rng);
    p.tail(dim_y + dim_z).setZero();
    if (!contains(p)) throw OutOfDomainError("chart box does not meet the central submanifold");
    return p;
}

Vec ExplodedPoint::flat() const {
    Vec v(x.size() + y.size() + z.size());
    v << x, y, z;
    return v;
}

ExplodedPoint ExplodedPoint::split(const ExplosiveChart& chart, const Vec& xyz, double hbar) {
    if (xyz.size() != chart.dim()) throw std::invalid_argument("split: size mismatch");
    ExplodedPoint p;
    p.x = xyz.head(chart.dim_x);
    p.y = xyz.segment(chart.dim_x, chart.dim_y);
    p.z = xyz.tail(chart.dim_z);
    p.hbar = hbar;
    return p;
}

Vec project(const ExplosiveChart& chart, const ExplodedPoint& p) {
    Vec q(chart.dim());
    q << p.x, p.hbar * p.y, p.hbar * p.hbar * p.z;
    if (!chart.contains(q)) {
        std::ostringstream os;
        os << "project: image outside chart domain: (" << q.transpose() << ")";
        throw OutOfDomainError(os.str());
    }
    return q;
}

CompatibleMap::CompatibleMap(ExplosiveChart src, ExplosiveChart dst, EvalFn eval)
    : src_(std::move(src)), dst_(std::move(dst)), eval_(std::move(eval)) {}

void CompatibleMap::set_closed_form(D1Fn d1, D2Fn d2, D3Fn d3) {
    d1_ = std::move(d1);
    d2_ = std::move(d2);
    d3_ = std::move(d3);
}

void CompatibleMap::set_fd_steps(double h1, double h2, double h3) {
    h1_ = h1;
    h2_ = h2;
    h3_ = h3;
}

double CompatibleMap::partial1(int out, int a, const Vec& p) const {
    if (d1_) return d1_(out, a, p);
    Vec pp = p, pm = p;
    pp[a] += h1_;
    pm[a] -= h1_;
    return (eval_(pp)[out] - eval_(pm)[out]) / (2.0 * h1_);
}

double CompatibleMap::partial2(int out, int a, int b, const Vec& p) const {
    if (d2_) return d2_(out, a, b, p);
    if (a == b) {
        Vec pp = p, pm = p;
        pp[a] += h2_;
        pm[a] -= h2_;
        return (eval_(pp)[out] - 2.0 * eval_(p)[out] + eval_(pm)[out]) / (h2_ * h2_);
    }
    Vec v = p;
    auto at = [&](double da, double db) {
        Vec q = p;
        q[a] += da;
        q[b] += db;
        return eval_(q)[out];
    };
    return (at(h2_, h2_) - at(h2_, -h2_) - at(-h2_, h2_) + at(-h2_, -h2_)) / (4.0 * h2_ * h2_);
}

double CompatibleMap::partial3(int out, int a, int b, int c, const Vec& p) const {
    if (d3_) return d3_(out, a, b, c, p);
    Vec pp = p, pm = p;
    pp[a] += h3_;
    pm[a] -= h3_;
    return (partial2(out, b, c, pp) - partial2(out, b, c, pm)) / (2.0 * h3_);
}

CompatibleMap compose(const CompatibleMap& outer, const CompatibleMap& inner) {
    if (inner.target().dim() != outer.source().dim())
        throw std::invalid_argument("compose: chart mismatch");
    auto f = [outer, inner](const Vec& p) { return outer(inner(p)); };
    return CompatibleMap(inner.source(), outer.target(), f);
}

CompatibilityReport check_compatible(const CompatibleMap& map, int samples, double tol,
                                     std::mt19937_64& rng) {
    CompatibilityReport rep;
    rep.samples = samples;
    rep.tol = tol;
    const auto& src = map.source();
    const auto& dst = map.target();
    for (int s = 0; s < samples; ++s) {
        const Vec p = src.sample_central(rng);
        const Vec q = map(p);
        for (int j = 0; j < dst.dim_y; ++j)
            rep.max_phi_y_on_central =
                std::max(rep.max_phi_y_on_central, std::abs(q[dst.dim_x + j]));
        for (int j = 0; j < dst.dim_z; ++j)
            rep.max_phi_z_on_central =
                std::max(rep.max_phi_z_on_central, std::abs(q[dst.dim_x + dst.dim_y + j]));
        // phi^z_y must vanish on the central submanifold
        for (int j = 0; j < dst.dim_z; ++j)
            for (int a = 0; a < src.dim_y; ++a)
                rep.max_phi_z_y = std::max(
                    rep.max_phi_z_y,
                    std::abs(map.partial1(dst.dim_x + dst.dim_y + j, src.dim_x + a, p)));
        // lower-left zero blocks of the block-triangular Jacobian
        for (int j = 0; j < dst.dim_y + dst.dim_z; ++j)
            for (int a = 0; a < src.dim_x; ++a)
                rep.max_lower_block =
                    std::max(rep.max_lower_block, std::abs(map.partial1(dst.dim_x + j, a, p)));
    }
    rep.pass = rep.max_phi_y_on_central < tol && rep.max_phi_z_on_central < tol &&
               rep.max_phi_z_y < tol && rep.max_lower_block < tol;
    return rep;
}

ExplodedPoint explode_map(const CompatibleMap& map, const ExplodedPoint& p) {
    const auto& src = map.source();
    const auto& dst = map.target();
    ExplodedPoint out;
    out.hbar = p.hbar;
    if (p.hbar != 0.0) {
        const Vec q = map(project(src, p));
        out.x = q.head(dst.dim_x);
        out.y = q.segment(dst.dim_x, dst.dim_y) / p.hbar;
        out.z = q.tail(dst.dim_z) / (p.hbar * p.hbar);
        return out;
    }
    Vec c(src.dim());
    c.setZero();
    c.head(src.dim_x) = p.x;
    const Vec q = map(c);
    out.x = q.head(dst.dim_x);
    out.y = Vec::Zero(dst.dim_y);
    for (int j = 0; j < dst.dim_y; ++j)
        for (int a = 0; a < src.dim_y; ++a)
            out.y[j] += p.y[a] * map.partial1(dst.dim_x + j, src.dim_x + a, c);
    out.z = Vec::Zero(dst.dim_z);
    for (int j = 0; j < dst.dim_z; ++j) {
        const int oz = dst.dim_x + dst.dim_y + j;
        double v = 0.0;
        for (int a = 0; a < src.dim_y; ++a)
            for (int b = 0; b < src.dim_y; ++b)
                v += 0.5 * p.y[a] * p.y[b] *
                     map.partial2(oz, src.dim_x + a, src.dim_x + b, c);
        for (int czi = 0; czi < src.dim_z; ++czi)
            v += p.z[czi] * map.partial1(oz, src.dim_x + src.dim_y + czi, c);
        out.z[j] = v;
    }
    return out;
}

Mat explode_jacobian(const CompatibleMap& map, const ExplodedPoint& p) {
    if (p.hbar != 0.0)
        throw std::invalid_argument("explode_jacobian: defined at hbar = 0 only");
    const auto& src = map.source();
    const auto& dst = map.target();
    if (src.dim_z > 0 && !map.has_closed_form() && map.fd_step1() > 1e-2)
        throw std::runtime_error(
            "explode_jacobian: third derivatives need closed-form partials or a smaller "
            "finite-difference step");
    Vec c(src.dim());
    c.setZero();
    c.head(src.dim_x) = p.x;

    const int nx = src.dim_x, ny = src.dim_y, nz = src.dim_z;
    const int mx = dst.dim_x, my = dst.dim_y, mz = dst.dim_z;
    const int X = 0, Y = nx, Z = nx + ny;          // source coordinate offsets
    const int OX = 0, OY = mx, OZ = mx + my;       // target component offsets
    Mat J = Mat::Zero(mx + my + mz + 1, nx + ny + nz + 1);
    const int hcol = nx + ny + nz;

    // x' row block
    for (int j = 0; j < mx; ++j) {
        for (int a = 0; a < nx; ++a) J(OX + j, X + a) = map.partial1(OX + j, X + a, c);
        double dh = 0.0;
        for (int a = 0; a < ny; ++a) dh += p.y[a] * map.partial1(OX + j, Y + a, c);
        J(OX + j, hcol) = dh;
    }
    // y' row block
    for (int j = 0; j < my; ++j) {
        for (int a = 0; a < nx; ++a) {
            double v = 0.0;
            for (int b = 0; b < ny; ++b)
                v += p.y[b] * map.partial2(OY + j, X + a, Y + b, c);
            J(OY + j, X + a) = v;
        }
        for (int a = 0; a < ny; ++a) J(OY + j, Y + a) = map.partial1(OY + j, Y + a, c);
        double dh = 0.0;
        for (int a = 0; a < ny; ++a)
            for (int b = 0; b < ny; ++b)
                dh += 0.5 * p.y[a] * p.y[b] * map.partial2(OY + j, Y + a, Y + b, c);
        for (int a = 0; a < nz; ++a) dh += p.z[a] * map.partial1(OY + j, Z + a, c);
        J(OY + j, hcol) = dh;
    }
    // z' row block
    for (int j = 0; j < mz; ++j) {
        for (int a = 0; a < nx; ++a) {
            double v = 0.0;
            for (int b = 0; b < ny; ++b)
                for (int d = 0; d < ny; ++d)
                    v += 0.5 * p.y[b] * p.y[d] * map.partial3(OZ + j, X + a, Y + b, Y + d, c);
            for (int b = 0; b < nz; ++b)
                v += p.z[b] * map.partial2(OZ + j, X + a, Z + b, c);
            J(OZ + j, X + a) = v;
        }
        for (int a = 0; a < ny; ++a) {
            double v = 0.0;
            for (int b = 0; b < ny; ++b)
                v += p.y[b] * map.partial2(OZ + j, Y + a, Y + b, c);
            J(OZ + j, Y + a) = v;
        }
        for (int a = 0; a < nz; ++a) J(OZ + j, Z + a) = map.partial1(OZ + j, Z + a, c);
        double dh = 0.0;
        for (int a = 0; a < ny; ++a)
            for (int b = 0; b < ny; ++b)
                for (int d = 0; d < ny; ++d)
                    dh += (1.0 / 6.0) * p.y[a] * p.y[b] * p.y[d] *
                          map.partial3(OZ + j, Y + a, Y + b, Y + d, c);
        for (int a = 0; a < ny; ++a)
            for (int b = 0; b < nz; ++b)
                dh += p.y[a] * p.z[b] * map.partial2(OZ + j, Y + a, Z + b, c);
        J(OZ + j, hcol) = dh;
    }
    J(mx + my + mz, hcol) = 1.0;
    return J;
}

namespace {

Verdict rank_verdict(const Mat& block, int needed_rank, double tol) {
    if (block.rows() == 0 || block.cols() == 0)
        return needed_rank == 0 ? Verdict::Yes : Verdict::No;
    Eigen::JacobiSVD<Mat> svd(block);
    const auto& sv = svd.singularValues();
    int rank = 0;
    bool ambiguous = false;
    for (int i = 0; i < sv.size(); ++i) {
        if (sv[i] > 10.0 * tol)
            ++rank;
        else if (sv[i] > tol)
            ambiguous = true;
    }
    if (rank >= needed_rank) return Verdict::Yes;
    if (ambiguous) return Verdict::Indeterminate;
    return Verdict::No;
}

Verdict meet(Verdict a, Verdict b) {
    if (a == Verdict::No || b == Verdict::No) return Verdict::No;
    if (a == Verdict::Indeterminate || b == Verdict::Indeterminate)
        return Verdict::Indeterminate;
    return Verdict::Yes;
}

}  // namespace

MapClassification classify_map(const CompatibleMap& map, int samples, double tol,
                               std::mt19937_64& rng) {
    const auto& src = map.source();
    const auto& dst = map.target();
    MapClassification cls;
    cls.submersion = Verdict::Yes;
    cls.immersion = Verdict::Yes;
    std::vector<Vec> centrals;
    std::vector<Vec> images;
    for (int s = 0; s < samples; ++s) {
        const Vec p = src.sample_central(rng);
        centrals.push_back(p);
        images.push_back(map(p));
        Mat bxx(dst.dim_x, src.dim_x), byy(dst.dim_y, src.dim_y), bzz(dst.dim_z, src.dim_z);
        for (int j = 0; j < dst.dim_x; ++j)
            for (int a = 0; a < src.dim_x; ++a) bxx(j, a) = map.partial1(j, a, p);
        for (int j = 0; j < dst.dim_y; ++j)
            for (int a = 0; a < src.dim_y; ++a)
                byy(j, a) = map.partial1(dst.dim_x + j, src.dim_x + a, p);
        for (int j = 0; j < dst.dim_z; ++j)
            for (int a = 0; a < src.dim_z; ++a)
                bzz(j, a) =
                    map.partial1(dst.dim_x + dst.dim_y + j, src.dim_x + src.dim_y + a, p);
        const Verdict sub =
            meet(meet(rank_verdict(bxx, dst.dim_x, tol), rank_verdict(byy, dst.dim_y, tol)),
                 rank_verdict(bzz, dst.dim_z, tol));
        const Verdict imm =
            meet(meet(rank_verdict(bxx, src.dim_x, tol), rank_verdict(byy, src.dim_y, tol)),
                 rank_verdict(bzz, src.dim_z, tol));
        cls.submersion = meet(cls.submersion, sub);
        cls.immersion = meet(cls.immersion, imm);
    }
    cls.injective_immersion = cls.immersion;
    if (cls.immersion == Verdict::Yes) {
        // pairwise separation of sampled central images as an injectivity probe
        for (std::size_t i = 0; i < centrals.size() && cls.injective_immersion == Verdict::Yes;
             ++i)
            for (std::size_t j = i + 1; j < centrals.size(); ++j) {
                const double din = (centrals[i] - centrals[j]).norm();
                const double dout = (images[i] - images[j]).norm();
                if (din > 100.0 * tol && dout < tol) {
                    cls.injective_immersion = Verdict::No;
                    break;
                }
            }
    }
    return cls;
}

FormValue projection_pullback(const ExplosiveChart& chart, const NormalOneForm& theta,
                              const ExplodedPoint& p) {
    const Vec base = project(chart, p);
    const Vec c = theta.coeffs(base);
    const int nx = chart.dim_x, ny = chart.dim_y, nz = chart.dim_z;
    FormValue v;
    v.dxyz = Vec::Zero(nx + ny + nz);
    v.dxyz.head(nx) = c.head(nx);
    v.dxyz.segment(nx, ny) = p.hbar * c.segment(nx, ny);
    v.dxyz.tail(nz) = p.hbar * p.hbar * c.tail(nz);
    v.dhbar = c.segment(nx, ny).dot(p.y) + 2.0 * p.hbar * c.tail(nz).dot(p.z);
    return v;
}

FormValue explode_form(const ExplosiveChart& chart, const NormalOneForm& theta,
                       const ExplodedPoint& p, double h, double tol) {
    if (p.hbar != 0.0) {
        FormValue v = projection_pullback(chart, theta, p);
        v.dxyz /= p.hbar;
        v.dhbar /= p.hbar;
        return v;
    }
    // even average in hbar kills odd terms; two-level Richardson in h^2
    auto eval_at = [&](double hb) {
        ExplodedPoint q = p;
        q.hbar = hb;
        FormValue v = projection_pullback(chart, theta, q);
        v.dxyz /= hb;
        v.dhbar /= hb;
        return v;
    };
    auto even_avg = [&](double hb) {
        FormValue a = eval_at(hb);
        FormValue b = eval_at(-hb);
        a.dxyz = 0.5 * (a.dxyz + b.dxyz);
        a.dhbar = 0.5 * (a.dhbar + b.dhbar);
        return a;
    };
    const FormValue c1 = even_avg(h);
    const FormValue c2 = even_avg(h / 2.0);
    FormValue out;
    out.dxyz = (4.0 * c2.dxyz - c1.dxyz) / 3.0;
    out.dhbar = (4.0 * c2.dhbar - c1.dhbar) / 3.0;
    const double disagreement = std::max((c2.dxyz - c1.dxyz).cwiseAbs().maxCoeff(),
                                         std::abs(c2.dhbar - c1.dhbar));
    if (disagreement > tol)
        throw std::runtime_error(
            "explode_form: extrapolation levels disagree; form is likely not normal");
    return out;
}

ExplodedPoint rescale(const ExplosiveChart& chart, const RescaleFunction& r,
                      const ExplodedPoint& p) {
    const double rv = r.value(project(chart, p));
    ExplodedPoint out;
    out.x = p.x;
    out.y = std::exp(rv) * p.y;
    out.z = std::exp(2.0 * rv) * p.z;
    out.hbar = std::exp(-rv) * p.hbar;
    return out;
}

}  // namespace hbarlab
