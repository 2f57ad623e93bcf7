#include "hbarlab/fuzzy.hpp"

#include <cmath>
#include <numbers>

#include "hbarlab/numerics.hpp"

namespace hbarlab {

namespace {

constexpr double kPi = std::numbers::pi;
using Cd = std::complex<double>;
constexpr Cd kI{0.0, 1.0};

MatC exp_hermitian(const MatC& h, Cd factor) {
    Eigen::SelfAdjointEigenSolver<MatC> es(h);
    const auto& lam = es.eigenvalues();
    const MatC& u = es.eigenvectors();
    VecC phases(lam.size());
    for (int i = 0; i < lam.size(); ++i) phases[i] = std::exp(factor * lam[i]);
    return u * phases.asDiagonal() * u.adjoint();
}

}  // namespace

SpinRep spin_rep(int k) {
    if (k < 1) throw std::invalid_argument("spin_rep: k must be >= 1");
    SpinRep rep;
    rep.k = k;
    rep.j = 0.5 * (k - 1);
    MatC jp = MatC::Zero(k, k);  // raising operator in the m = j, j-1, ... basis
    for (int i = 0; i < k - 1; ++i) {
        const double m = rep.j - (i + 1);
        jp(i, i + 1) = std::sqrt(rep.j * (rep.j + 1) - m * (m + 1));
    }
    const MatC jm = jp.adjoint();
    rep.Jx = 0.5 * (jp + jm);
    rep.Jy = -0.5 * kI * (jp - jm);
    rep.Jz = MatC::Zero(k, k);
    for (int i = 0; i < k; ++i) rep.Jz(i, i) = rep.j - i;
    return rep;
}

SphereQuadrature sphere_quadrature(int k) {
    SphereQuadrature q;
    q.n_theta = std::max(k, 8);
    q.n_phi = 2 * q.n_theta;
    const auto gl = gauss_legendre(q.n_theta);
    for (int i = 0; i < q.n_theta; ++i) {
        const double c = gl.nodes[i];
        const double theta = std::acos(c);
        const double s = std::sin(theta);
        for (int p = 0; p < q.n_phi; ++p) {
            const double phi = 2.0 * kPi * p / q.n_phi;
            q.nodes.push_back({s * std::cos(phi), s * std::sin(phi), c});
            q.thetas.push_back(theta);
            q.phis.push_back(phi);
            // half the round volume form: total mass 2 pi
            q.weights.push_back(0.5 * gl.weights[i] * (2.0 * kPi / q.n_phi));
        }
    }
    return q;
}

VecC coherent_state(const SpinRep& rep, double theta, double phi) {
    VecC top = VecC::Zero(rep.k);
    top[0] = 1.0;  // highest weight |j, j>
    const MatC ry = exp_hermitian(rep.Jy, -kI * theta);
    VecC v = ry * top;
    for (int i = 0; i < rep.k; ++i) v[i] *= std::exp(-kI * phi * (rep.j - i));
    return v;
}

CoherentFrame coherent_frame(const SpinRep& rep, const SphereQuadrature& quad) {
    CoherentFrame fr;
    fr.k = rep.k;
    Eigen::SelfAdjointEigenSolver<MatC> es(rep.Jy);
    const auto& lam = es.eigenvalues();
    const MatC& u = es.eigenvectors();
    const VecC top_in_eig = u.adjoint().col(0);  // components of |j,j>
    fr.states.reserve(quad.nodes.size());
    for (std::size_t a = 0; a < quad.nodes.size(); ++a) {
        VecC w(rep.k);
        for (int i = 0; i < rep.k; ++i)
            w[i] = std::exp(-kI * quad.thetas[a] * lam[i]) * top_in_eig[i];
        VecC v = u * w;
        for (int i = 0; i < rep.k; ++i) v[i] *= std::exp(-kI * quad.phis[a] * (rep.j - i));
        fr.states.push_back(std::move(v));
    }
    return fr;
}

std::vector<Cd> covariant_symbol(const FuzzyElement& a, const CoherentFrame& frame) {
    if (a.k != frame.k) throw std::invalid_argument("covariant_symbol: dimension mismatch");
    std::vector<Cd> out;
    out.reserve(frame.states.size());
    for (const auto& psi : frame.states) out.push_back(psi.dot(a.mat * psi));
    return out;
}

static void require_quadrature_order(int k, const SphereQuadrature& quad) {
    if (quad.n_theta < k || quad.n_phi < 2 * k)
        throw std::invalid_argument(
            "quadrature too coarse for k=" + std::to_string(k) + ": need at least " +
            std::to_string(k) + " polar and " + std::to_string(2 * k) + " azimuthal nodes");
}

double resolution_of_identity(const SpinRep& rep, const CoherentFrame& frame,
                              const SphereQuadrature& quad) {
    require_quadrature_order(rep.k, quad);
    MatC acc = MatC::Zero(rep.k, rep.k);
    for (std::size_t i = 0; i < frame.states.size(); ++i)
        acc += quad.weights[i] * (frame.states[i] * frame.states[i].adjoint());
    acc *= rep.k / (2.0 * kPi);
    return (acc - MatC::Identity(rep.k, rep.k)).norm();
}

FuzzyElement toeplitz_quantize(const std::vector<Cd>& f, const CoherentFrame& frame,
                               const SphereQuadrature& quad) {
    if (f.size() != frame.states.size())
        throw std::invalid_argument("toeplitz_quantize: node count mismatch");
    require_quadrature_order(frame.k, quad);
    FuzzyElement out;
    out.k = frame.k;
    out.mat = MatC::Zero(frame.k, frame.k);
    for (std::size_t i = 0; i < f.size(); ++i)
        out.mat += quad.weights[i] * f[i] * (frame.states[i] * frame.states[i].adjoint());
    out.mat *= frame.k / (2.0 * kPi);
    return out;
}

FuzzyElement toeplitz_quantize(const std::function<double(const Vec3&)>& f,
                               const CoherentFrame& frame, const SphereQuadrature& quad) {
    std::vector<Cd> vals;
    vals.reserve(quad.nodes.size());
    for (const auto& x : quad.nodes) vals.push_back(Cd{f(x), 0.0});
    return toeplitz_quantize(vals, frame, quad);
}

double kernel_convolution_check(const FuzzyElement& a, const FuzzyElement& b,
                                const CoherentFrame& frame, const SphereQuadrature& quad) {
    if (a.k != frame.k || b.k != frame.k)
        throw std::invalid_argument("kernel_convolution_check: dimension mismatch");
    require_quadrature_order(frame.k, quad);
    const Eigen::Index nn = static_cast<Eigen::Index>(frame.states.size());
    MatC psi(frame.k, nn);
    for (Eigen::Index z = 0; z < nn; ++z) psi.col(z) = frame.states[z];
    // kernels K_a(x, z) = <psi_x| a |psi_z>
    const MatC ka = psi.adjoint() * a.mat * psi;
    const MatC kb = psi.adjoint() * b.mat * psi;
    const MatC kab = psi.adjoint() * (a.mat * b.mat) * psi;
    Eigen::VectorXd w(nn);
    for (Eigen::Index z = 0; z < nn; ++z) w[z] = quad.weights[z];
    const MatC conv = (frame.k / (2.0 * kPi)) * ka * w.asDiagonal() * kb;
    return (kab - conv).cwiseAbs().maxCoeff();
}

double symbol_theorem_check(const CoherentFrame& frame, const SphereQuadrature& quad) {
    require_quadrature_order(frame.k, quad);
    const int k = frame.k;
    auto deviation = [&](const VecC& phi) {
        double acc = 0.0;
        for (std::size_t i = 0; i < frame.states.size(); ++i)
            acc += quad.weights[i] * std::norm(frame.states[i].dot(phi));
        acc *= k / (2.0 * kPi);
        return std::abs(acc - phi.squaredNorm());
    };
    double worst = 0.0;
    for (int i = 0; i < k; ++i) {
        VecC e = VecC::Zero(k);
        e[i] = 1.0;
        worst = std::max(worst, deviation(e));
    }
    worst = std::max(worst, deviation(frame.states[0]));
    return worst;
}

SphereSymbol builtin_symbol(const std::string& name) {
    auto poly = [&name](std::function<double(const Vec3&)> v,
                        std::function<Vec3(const Vec3&)> g) {
        return SphereSymbol{name, std::move(v), std::move(g)};
    };
    if (name == "constant")
        return poly([](const Vec3&) { return 1.0; }, [](const Vec3&) { return Vec3::Zero().eval(); });
    if (name == "x")
        return poly([](const Vec3& p) { return p.x(); },
                    [](const Vec3&) { return Vec3{1, 0, 0}; });
    if (name == "y")
        return poly([](const Vec3& p) { return p.y(); },
                    [](const Vec3&) { return Vec3{0, 1, 0}; });
    if (name == "z")
        return poly([](const Vec3& p) { return p.z(); },
                    [](const Vec3&) { return Vec3{0, 0, 1}; });
    if (name == "zz")
        return poly([](const Vec3& p) { return p.z() * p.z(); },
                    [](const Vec3& p) { return Vec3{0, 0, 2 * p.z()}; });
    if (name == "xy")
        return poly([](const Vec3& p) { return p.x() * p.y(); },
                    [](const Vec3& p) { return Vec3{p.y(), p.x(), 0}; });
    if (name == "xz")
        return poly([](const Vec3& p) { return p.x() * p.z(); },
                    [](const Vec3& p) { return Vec3{p.z(), 0, p.x()}; });
    if (name == "zzz")
        return poly([](const Vec3& p) { return std::pow(p.z(), 3); },
                    [](const Vec3& p) { return Vec3{0, 0, 3 * p.z() * p.z()}; });
    if (name == "xyz")
        return poly([](const Vec3& p) { return p.x() * p.y() * p.z(); },
                    [](const Vec3& p) {
                        return Vec3{p.y() * p.z(), p.x() * p.z(), p.x() * p.y()};
                    });
    if (name == "zzzz")
        return poly([](const Vec3& p) { return std::pow(p.z(), 4); },
                    [](const Vec3& p) { return Vec3{0, 0, 4 * std::pow(p.z(), 3)}; });
    throw std::invalid_argument("builtin_symbol: unknown symbol '" + name + "'");
}

ClassicalLimitCurve classical_limit_curve(const SphereSymbol& f,
                                          const std::vector<int>& k_list) {
    ClassicalLimitCurve curve;
    curve.k_list = k_list;
    for (int k : k_list) {
        const auto rep = spin_rep(k);
        const auto quad = sphere_quadrature(k);
        const auto frame = coherent_frame(rep, quad);
        const auto qf = toeplitz_quantize(f.value, frame, quad);
        const auto sym = covariant_symbol(qf, frame);
        double e = 0.0;
        for (std::size_t i = 0; i < sym.size(); ++i)
            e = std::max(e, std::abs(sym[i] - Cd{f.value(quad.nodes[i]), 0.0}));
        curve.errors.push_back(e);
    }
    for (std::size_t i = 1; i < curve.errors.size(); ++i)
        if (curve.errors[i] > curve.errors[i - 1]) curve.monotone = false;
    std::vector<double> kk(k_list.begin(), k_list.end());
    bool all_small = true;
    for (double e : curve.errors)
        if (e > 1e-13) all_small = false;
    curve.fitted_order = all_small ? 0.0 : -fit_loglog_slope(kk, curve.errors);
    return curve;
}

double operator_norm(const MatC& a) {
    return a.jacobiSvd().singularValues()(0);
}

double dirac_defect_sphere(const SphereSymbol& f, const SphereSymbol& g, int k) {
    const auto rep = spin_rep(k);
    // products of bandlimited symbols need extra quadrature headroom
    const auto quad = sphere_quadrature(std::max(k + 8, 2 * 8));
    const auto frame = coherent_frame(rep, quad);
    const auto qf = toeplitz_quantize(f.value, frame, quad);
    const auto qg = toeplitz_quantize(g.value, frame, quad);
    auto bracket = [&](const Vec3& p) {
        return kSphereBracketCoefficient * p.dot(f.grad(p).cross(g.grad(p)));
    };
    const auto qb = toeplitz_quantize(std::function<double(const Vec3&)>(bracket), frame, quad);
    const MatC defect =
        kI * static_cast<double>(k) * (qf.mat * qg.mat - qg.mat * qf.mat) + qb.mat;
    return operator_norm(defect);
}

MatC wigner_matrix(const SpinRep& rep, double alpha, double beta, double gamma) {
    auto zrot = [&](double ang) {
        MatC d = MatC::Zero(rep.k, rep.k);
        for (int i = 0; i < rep.k; ++i) d(i, i) = std::exp(-kI * ang * (rep.j - i));
        return d;
    };
    return zrot(alpha) * exp_hermitian(rep.Jy, -kI * beta) * zrot(gamma);
}

Mat3 euler_rotation(double alpha, double beta, double gamma) {
    return (Eigen::AngleAxisd(alpha, Vec3::UnitZ()) * Eigen::AngleAxisd(beta, Vec3::UnitY()) *
            Eigen::AngleAxisd(gamma, Vec3::UnitZ()))
        .toRotationMatrix();
}

double equivariance_residual(const SphereSymbol& f, int k, double alpha, double beta,
                             double gamma) {
    const auto rep = spin_rep(k);
    const auto quad = sphere_quadrature(std::max(k + 8, 16));
    const auto frame = coherent_frame(rep, quad);
    const Mat3 r = euler_rotation(alpha, beta, gamma);
    const Mat3 rinv = r.transpose();
    const auto qf = toeplitz_quantize(f.value, frame, quad);
    auto rotated = [&](const Vec3& p) { return f.value(rinv * p); };
    const auto qrf = toeplitz_quantize(std::function<double(const Vec3&)>(rotated), frame, quad);
    const MatC d = wigner_matrix(rep, alpha, beta, gamma);
    return (d * qf.mat * d.adjoint() - qrf.mat).norm();
}

}  // namespace hbarlab
