#include "hbarlab/groupoid.hpp"

#include <cmath>
#include <stdexcept>

namespace hbarlab {

double CheckReport::max_residual() const {
    double m = 0.0;
    for (const auto& [k, v] : residuals) m = std::max(m, v);
    return m;
}

namespace {

Vec uniform_box(int dim, double box, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-box, box);
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = u(rng);
    return v;
}

void track(CheckReport& rep, const std::string& name, double r) {
    if (std::isnan(r)) r = std::numeric_limits<double>::infinity();
    auto& slot = rep.residuals[name];
    slot = std::max(slot, r);
}

}  // namespace

CheckReport check_axioms(const GroupoidChartModel& model, int n_samples, double tol,
                         std::mt19937_64& rng, bool force_hbar_zero_slice) {
    CheckReport rep;
    rep.samples = n_samples;
    rep.tol = tol;
    for (int s = 0; s < n_samples; ++s) {
        const bool zero_slice = force_hbar_zero_slice && (s % 10 == 0);
        Vec b = model.sample_base(rng);
        Vec g = model.sample_arrow(rng);
        Vec p2 = model.sample_pair(rng);
        if (zero_slice) {
            b[b.size() - 1] = 0.0;
            g[g.size() - 1] = 0.0;
            p2[p2.size() - 1] = 0.0;
        }

        track(rep, "pairs_compatibility", (model.src(model.pr1(p2)) - model.tgt(model.pr2(p2))).norm());

        const Vec g1 = model.pr1(p2);
        const Vec g2 = model.pr2(p2);
        const Vec g3 = model.sample_third(p2, rng);
        const Vec lhs = model.mul(model.pair_coords(model.mul(model.pair_coords(g1, g2)), g3));
        const Vec rhs = model.mul(model.pair_coords(g1, model.mul(model.pair_coords(g2, g3))));
        track(rep, "associativity", (lhs - rhs).norm());

        track(rep, "source_compat", (model.src(model.mul(p2)) - model.src(model.pr2(p2))).norm());
        track(rep, "target_compat", (model.tgt(model.mul(p2)) - model.tgt(model.pr1(p2))).norm());

        track(rep, "unit_source", (model.src(model.unit(b)) - b).norm());
        track(rep, "unit_target", (model.tgt(model.unit(b)) - b).norm());

        track(rep, "right_unit", (model.mul(model.pair_coords(g, model.unit(model.src(g)))) - g).norm());
        track(rep, "left_unit", (model.mul(model.pair_coords(model.unit(model.tgt(g)), g)) - g).norm());

        track(rep, "inv_source", (model.src(model.inv(g)) - model.tgt(g)).norm());
        track(rep, "inv_target", (model.tgt(model.inv(g)) - model.src(g)).norm());

        track(rep, "left_inverse",
              (model.mul(model.pair_coords(model.inv(g), g)) - model.unit(model.src(g))).norm());
        track(rep, "right_inverse",
              (model.mul(model.pair_coords(g, model.inv(g))) - model.unit(model.tgt(g))).norm());
    }
    rep.pass = rep.max_residual() < tol;
    return rep;
}

double coboundary(const GroupoidChartModel& model, const std::function<double(const Vec&)>& f,
                  const Vec& pair_point) {
    return f(model.pr1(pair_point)) - f(model.mul(pair_point)) + f(model.pr2(pair_point));
}

namespace {

Mat fd_jacobian(const std::function<Vec(const Vec&)>& phi, const Vec& p, double h) {
    const Vec f0 = phi(p);
    Mat J(f0.size(), p.size());
    for (int a = 0; a < p.size(); ++a) {
        Vec pp = p, pm = p;
        pp[a] += h;
        pm[a] -= h;
        J.col(a) = (phi(pp) - phi(pm)) / (2.0 * h);
    }
    return J;
}

}  // namespace

Vec coboundary_form(const GroupoidChartModel& model,
                    const std::function<Vec(const Vec&)>& theta, const Vec& pair_point,
                    double fd_step) {
    auto pull = [&](const std::function<Vec(const Vec&)>& phi) -> Vec {
        const Mat J = fd_jacobian(phi, pair_point, fd_step);
        return J.transpose() * theta(phi(pair_point));
    };
    return pull(model.pr1) - pull(model.mul) + pull(model.pr2);
}

Mat coboundary_two_form(const GroupoidChartModel& model, const DifferentialFormModel& omega,
                        const Vec& pair_point, double fd_step) {
    auto pull = [&](const std::function<Vec(const Vec&)>& phi) -> Mat {
        const Mat J = fd_jacobian(phi, pair_point, fd_step);
        return J.transpose() * omega.eval(phi(pair_point)) * J;
    };
    return pull(model.pr1) - pull(model.mul) + pull(model.pr2);
}

FormCheckReport check_forms(const GroupoidChartModel& model, const DifferentialFormModel& omega,
                            int n_samples, double tol, std::mt19937_64& rng) {
    if (omega.degree != 2) throw std::invalid_argument("check_forms: omega must have degree 2");
    FormCheckReport rep;
    rep.min_abs_det = std::numeric_limits<double>::infinity();
    const double h = 1e-4;
    for (int s = 0; s < n_samples; ++s) {
        const Vec g = model.sample_arrow(rng);
        const int d = static_cast<int>(g.size());
        // d(omega) by central differences of the coefficient matrix
        std::vector<Mat> dW(d);
        for (int a = 0; a < d; ++a) {
            Vec gp = g, gm = g;
            gp[a] += h;
            gm[a] -= h;
            dW[a] = (omega.eval(gp) - omega.eval(gm)) / (2.0 * h);
        }
        for (int a = 0; a < d; ++a)
            for (int b = a + 1; b < d; ++b)
                for (int c = b + 1; c < d; ++c) {
                    const double r = dW[a](b, c) - dW[b](a, c) + dW[c](a, b);
                    rep.closedness = std::max(rep.closedness, std::abs(r));
                }
        const double det = std::abs(omega.eval(g).determinant());
        if (det < rep.min_abs_det) {
            rep.min_abs_det = det;
            if (det < 10.0 * tol) {
                rep.degenerate = true;
                rep.degenerate_witness = g;
            }
        }
        const Vec p2 = model.sample_pair(rng);
        const Mat cob = coboundary_two_form(model, omega, p2);
        rep.multiplicativity = std::max(rep.multiplicativity, cob.cwiseAbs().maxCoeff());
    }
    return rep;
}

double check_target_poisson(const GroupoidChartModel& model, const DifferentialFormModel& omega,
                            const std::function<double(const Vec&)>& f,
                            const std::function<double(const Vec&)>& g,
                            const std::function<double(const Vec&)>& base_bracket,
                            int n_samples, std::mt19937_64& rng, double fd_step) {
    double worst = 0.0;
    for (int s = 0; s < n_samples; ++s) {
        const Vec p = model.sample_arrow(rng);
        const Mat W = omega.eval(p);
        auto grad = [&](const std::function<double(const Vec&)>& fn) {
            Vec d(p.size());
            for (int a = 0; a < p.size(); ++a) {
                Vec pp = p, pm = p;
                pp[a] += fd_step;
                pm[a] -= fd_step;
                d[a] = (fn(model.tgt(pp)) - fn(model.tgt(pm))) / (2.0 * fd_step);
            }
            return d;
        };
        const Vec dF = grad(f);
        const Vec dG = grad(g);
        const double bracket = dF.dot(W.inverse() * dG);
        worst = std::max(worst, std::abs(bracket - base_bracket(model.tgt(p))));
    }
    return worst;
}

void ConstantPoissonData::validate() const {
    if (n < 1 || Pi.rows() != n || Pi.cols() != n)
        throw std::invalid_argument("ConstantPoissonData: bad Pi shape");
    if ((Pi + Pi.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("ConstantPoissonData: Pi must be antisymmetric");
    if (metric) {
        if (metric->rows() != n || metric->cols() != n)
            throw std::invalid_argument("ConstantPoissonData: bad metric shape");
        if ((*metric - metric->transpose()).cwiseAbs().maxCoeff() > 1e-12)
            throw std::invalid_argument("ConstantPoissonData: metric must be symmetric");
        Eigen::SelfAdjointEigenSolver<Mat> es(*metric);
        if (es.eigenvalues().minCoeff() <= 0.0)
            throw std::invalid_argument("ConstantPoissonData: metric must be positive definite");
        if (Pi.fullPivLu().rank() == n) {
            const Mat Jc = metric->inverse() * Pi;
            const Mat sq = Jc * Jc;
            const double c2 = -sq.trace() / n;
            if ((sq + c2 * Mat::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-9)
                throw std::invalid_argument(
                    "ConstantPoissonData: metric and Pi do not define a complex structure");
        }
    }
}

ConstantPoissonData standard_symplectic_data(int n) {
    if (n % 2 != 0) throw std::invalid_argument("standard_symplectic_data: n must be even");
    ConstantPoissonData d;
    d.n = n;
    d.Pi = Mat::Zero(n, n);
    for (int i = 0; i < n / 2; ++i) {
        d.Pi(2 * i, 2 * i + 1) = 1.0;
        d.Pi(2 * i + 1, 2 * i) = -1.0;
    }
    d.metric = Mat::Identity(n, n);
    return d;
}

GroupoidChartModel constant_pi_model(const ConstantPoissonData& data, double box) {
    data.validate();
    const int n = data.n;
    const Mat Pi = data.Pi;
    GroupoidChartModel m;
    m.dim_base = n + 1;           // (x, hbar)
    m.dim_arrow = 2 * n + 2;      // (x, y, z, hbar)
    m.dim_pairs = 3 * n + 3;      // (x, y, y', z, z', hbar)

    auto ax = [n](const Vec& g) { return g.head(n); };
    auto ay = [n](const Vec& g) { return g.segment(n, n); };
    auto az = [n](const Vec& g) { return g[2 * n]; };
    auto ah = [n](const Vec& g) { return g[2 * n + 1]; };

    m.unit = [n](const Vec& b) {
        Vec g = Vec::Zero(2 * n + 2);
        g.head(n) = b.head(n);
        g[2 * n + 1] = b[n];
        return g;
    };
    m.inv = [n](const Vec& g) {
        Vec r = g;
        r.segment(n, n) = -g.segment(n, n);
        r[2 * n] = -g[2 * n];
        return r;
    };
    // sign convention: the sharp map is fixed by multiplicativity of the
    // contact form against the -1/2 Pi(y, y') cocycle in mul
    m.src = [n, Pi, ax, ay, ah](const Vec& g) {
        Vec b(n + 1);
        b.head(n) = ax(g) + 0.5 * ah(g) * (Pi * ay(g));
        b[n] = ah(g);
        return b;
    };
    m.tgt = [n, Pi, ax, ay, ah](const Vec& g) {
        Vec b(n + 1);
        b.head(n) = ax(g) - 0.5 * ah(g) * (Pi * ay(g));
        b[n] = ah(g);
        return b;
    };

    auto px = [n](const Vec& p) { return p.head(n); };
    auto py = [n](const Vec& p) { return p.segment(n, n); };
    auto pyp = [n](const Vec& p) { return p.segment(2 * n, n); };
    auto pz = [n](const Vec& p) { return p[3 * n]; };
    auto pzp = [n](const Vec& p) { return p[3 * n + 1]; };
    auto ph = [n](const Vec& p) { return p[3 * n + 2]; };

    auto make_arrow = [n](const Vec& x, const Vec& y, double z, double h) {
        Vec g(2 * n + 2);
        g << x, y, z, h;
        return g;
    };

    m.pr1 = [=](const Vec& p) {
        return make_arrow(px(p) - 0.5 * ph(p) * (Pi * pyp(p)), py(p), pz(p), ph(p));
    };
    m.pr2 = [=](const Vec& p) {
        return make_arrow(px(p) + 0.5 * ph(p) * (Pi * py(p)), pyp(p), pzp(p), ph(p));
    };
    m.mul = [=](const Vec& p) {
        const double cocycle = 0.5 * py(p).dot(Pi * pyp(p));
        return make_arrow(px(p), py(p) + pyp(p), pz(p) + pzp(p) - cocycle, ph(p));
    };
    m.pair_coords = [=](const Vec& g, const Vec& h) {
        Vec p(3 * n + 3);
        p << ax(g) + 0.5 * ah(g) * (Pi * ay(h)), ay(g), ay(h), az(g), az(h), ah(g);
        return p;
    };
    m.sample_base = [box, n](std::mt19937_64& rng) { return uniform_box(n + 1, box, rng); };
    m.sample_arrow = [box, n](std::mt19937_64& rng) { return uniform_box(2 * n + 2, box, rng); };
    m.sample_pair = [box, n](std::mt19937_64& rng) { return uniform_box(3 * n + 3, box, rng); };
    m.sample_third = [=](const Vec& p, std::mt19937_64& rng) {
        const Vec b = m.src(m.pr2(p));
        const Vec y3 = uniform_box(n, box, rng);
        const double z3 = uniform_box(1, box, rng)[0];
        return make_arrow(b.head(n) + 0.5 * b[n] * (Pi * y3), y3, z3, b[n]);
    };
    return m;
}

DifferentialFormModel constant_pi_symplectic_form(int n) {
    DifferentialFormModel omega;
    omega.degree = 2;
    const int d = 2 * n + 2;
    Mat W = Mat::Zero(d, d);
    for (int i = 0; i < n; ++i) {
        W(i, n + i) = 1.0;   // dx^i ^ dy_i
        W(n + i, i) = -1.0;
    }
    W(2 * n + 1, 2 * n) = 1.0;  // dhbar ^ dz
    W(2 * n, 2 * n + 1) = -1.0;
    omega.eval = [W](const Vec&) { return W; };
    return omega;
}

std::function<Vec(const Vec&)> constant_pi_contact_form(int n) {
    return [n](const Vec& g) {
        Vec c = Vec::Zero(2 * n + 2);
        c.head(n) = g.segment(n, n);   // y . dx
        c[2 * n] = g[2 * n + 1];       // hbar dz
        c[2 * n + 1] = 2.0 * g[2 * n]; // 2z dhbar
        return c;
    };
}

GroupoidChartModel pair_groupoid_model(int n, double box) {
    GroupoidChartModel m;
    m.dim_base = n;
    m.dim_arrow = 2 * n;
    m.dim_pairs = 3 * n;
    m.unit = [n](const Vec& b) {
        Vec g(2 * n);
        g << b, b;
        return g;
    };
    m.inv = [n](const Vec& g) {
        Vec r(2 * n);
        r << g.tail(n), g.head(n);
        return r;
    };
    m.src = [n](const Vec& g) { return Vec(g.tail(n)); };
    m.tgt = [n](const Vec& g) { return Vec(g.head(n)); };
    m.pr1 = [n](const Vec& p) { return Vec(p.head(2 * n)); };
    m.pr2 = [n](const Vec& p) { return Vec(p.tail(2 * n)); };
    m.mul = [n](const Vec& p) {
        Vec g(2 * n);
        g << p.head(n), p.tail(n);
        return g;
    };
    m.pair_coords = [n](const Vec& g, const Vec& h) {
        Vec p(3 * n);
        p << g.head(n), g.tail(n), h.tail(n);
        return p;
    };
    m.sample_base = [box, n](std::mt19937_64& rng) { return uniform_box(n, box, rng); };
    m.sample_arrow = [box, n](std::mt19937_64& rng) { return uniform_box(2 * n, box, rng); };
    m.sample_pair = [box, n](std::mt19937_64& rng) { return uniform_box(3 * n, box, rng); };
    m.sample_third = [box, n](const Vec& p, std::mt19937_64& rng) {
        Vec g(2 * n);
        g << p.tail(n), uniform_box(n, box, rng);
        return g;
    };
    return m;
}

StructureConstants su2_bracket_family(double hbar) {
    StructureConstants c{};
    const double h2 = hbar * hbar;
    c[0][1][2] = 1.0;
    c[1][0][2] = -1.0;
    c[1][2][0] = h2;
    c[2][1][0] = -h2;
    c[2][0][1] = h2;
    c[0][2][1] = -h2;
    return c;
}

double jacobi_residual(const StructureConstants& c) {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    double s = 0.0;
                    for (int m = 0; m < 3; ++m)
                        s += c[i][j][m] * c[m][k][l] + c[j][k][m] * c[m][i][l] +
                             c[k][i][m] * c[m][j][l];
                    worst = std::max(worst, std::abs(s));
                }
    return worst;
}

}  // namespace hbarlab
