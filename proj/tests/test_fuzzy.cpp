#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "hbarlab/fuzzy.hpp"

using namespace hbarlab;
using Cd = std::complex<double>;

TEST_CASE("spin representation ladders and commutators") {
    const auto r1 = spin_rep(1);
    CHECK(r1.j == 0.0);
    CHECK(r1.Jz.cwiseAbs().maxCoeff() < 1e-15);

    const auto r2 = spin_rep(2);
    CHECK(r2.j == doctest::Approx(0.5));
    CHECK(std::abs(r2.Jz(0, 0) - Cd(0.5, 0.0)) < 1e-15);
    CHECK(std::abs(r2.Jz(1, 1) - Cd(-0.5, 0.0)) < 1e-15);
    CHECK(std::abs(r2.Jx(0, 1) - Cd(0.5, 0.0)) < 1e-15);
    CHECK(std::abs(r2.Jy(0, 1) - Cd(0.0, -0.5)) < 1e-15);

    for (int k : {2, 3, 5, 9}) {
        const auto r = spin_rep(k);
        const MatC cxy = r.Jx * r.Jy - r.Jy * r.Jx - Cd(0.0, 1.0) * r.Jz;
        const MatC cyz = r.Jy * r.Jz - r.Jz * r.Jy - Cd(0.0, 1.0) * r.Jx;
        const MatC czx = r.Jz * r.Jx - r.Jx * r.Jz - Cd(0.0, 1.0) * r.Jy;
        CHECK(cxy.cwiseAbs().maxCoeff() < 1e-12);
        CHECK(cyz.cwiseAbs().maxCoeff() < 1e-12);
        CHECK(czx.cwiseAbs().maxCoeff() < 1e-12);
        // Casimir j(j+1)
        const double j = r.j;
        const MatC cas = r.Jx * r.Jx + r.Jy * r.Jy + r.Jz * r.Jz;
        CHECK((cas - j * (j + 1.0) * MatC::Identity(k, k)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("quadrature mass and node placement") {
    for (int k : {1, 4, 12}) {
        const auto quad = sphere_quadrature(k);
        double mass = 0.0;
        for (std::size_t i = 0; i < quad.weights.size(); ++i) {
            mass += quad.weights[i];
            CHECK(std::abs(quad.nodes[i].norm() - 1.0) < 1e-14);
        }
        CHECK(mass == doctest::Approx(2.0 * M_PI).epsilon(1e-13));
    }
}

TEST_CASE("coherent state overlap law") {
    // |<psi_p|psi_q>|^2 = ((1 + p.q)/2)^{k-1}
    for (int k : {2, 5, 11}) {
        const auto rep = spin_rep(k);
        const auto quad = sphere_quadrature(k);
        double worst = 0.0;
        for (int a = 0; a < 6; ++a)
            for (int b = 0; b < 6; ++b) {
                const int ia = a * 17 % (int)quad.nodes.size();
                const int ib = b * 31 % (int)quad.nodes.size();
                const VecC pa = coherent_state(rep, quad.thetas[ia], quad.phis[ia]);
                const VecC pb = coherent_state(rep, quad.thetas[ib], quad.phis[ib]);
                const double lhs = std::norm(Cd(pa.dot(pb)));
                const double rhs =
                    std::pow((1.0 + quad.nodes[ia].dot(quad.nodes[ib])) / 2.0, k - 1);
                worst = std::max(worst, std::abs(lhs - rhs));
            }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("resolution of the identity") {
    for (int k : {1, 2, 3, 8, 16, 32}) {
        const auto rep = spin_rep(k);
        const auto quad = sphere_quadrature(k);
        const auto frame = coherent_frame(rep, quad);
        CHECK(resolution_of_identity(rep, frame, quad) < 1e-9);
    }
    // a quadrature for a smaller k cannot integrate the overlap degree
    const auto rep = spin_rep(12);
    const auto coarse = sphere_quadrature(4);
    const auto frame = coherent_frame(rep, coarse);
    CHECK_THROWS(resolution_of_identity(rep, frame, coarse));
}

TEST_CASE("quantization is unital and hermitian") {
    const int k = 9;
    const auto rep = spin_rep(k);
    const auto quad = sphere_quadrature(k);
    const auto frame = coherent_frame(rep, quad);

    const auto one = toeplitz_quantize(builtin_symbol("constant").value, frame, quad);
    CHECK((one.mat - MatC::Identity(k, k)).cwiseAbs().maxCoeff() < 1e-10);

    const auto qz = toeplitz_quantize(builtin_symbol("z").value, frame, quad);
    CHECK((qz.mat - qz.mat.adjoint().eval()).cwiseAbs().maxCoeff() < 1e-12);
    // Q(z) is diagonal with equally spaced eigenvalues
    for (int i = 0; i < k; ++i)
        for (int jj = 0; jj < k; ++jj)
            if (i != jj) CHECK(std::abs(qz.mat(i, jj)) < 1e-12);
    const double step = (qz.mat(0, 0) - qz.mat(1, 1)).real();
    for (int i = 0; i + 1 < k; ++i)
        CHECK((qz.mat(i, i) - qz.mat(i + 1, i + 1)).real() == doctest::Approx(step).epsilon(1e-10));
}

TEST_CASE("reproducing kernel composes through the quadrature") {
    for (int k : {6, 12}) {
        const auto rep = spin_rep(k);
        const auto quad = sphere_quadrature(k);
        const auto frame = coherent_frame(rep, quad);
        const auto a = toeplitz_quantize(builtin_symbol("x").value, frame, quad);
        const auto b = toeplitz_quantize(builtin_symbol("zz").value, frame, quad);
        CHECK(kernel_convolution_check(a, b, frame, quad) < 1e-9);
    }
}

TEST_CASE("norms of vectors are recovered from frame coefficients") {
    const int k = 10;
    const auto rep = spin_rep(k);
    const auto quad = sphere_quadrature(k);
    const auto frame = coherent_frame(rep, quad);
    CHECK(symbol_theorem_check(frame, quad) < 1e-10);
}

TEST_CASE("classical limit of the Berezin transform at order 1/k") {
    const auto linear = classical_limit_curve(builtin_symbol("z"), {4, 8, 16, 32});
    CHECK(linear.monotone);
    CHECK(linear.fitted_order > 0.8);
    CHECK(linear.fitted_order < 1.2);
    // quadratic symbols enter the asymptotic regime later
    const auto quad = classical_limit_curve(builtin_symbol("zz"), {16, 32, 64});
    CHECK(quad.monotone);
    CHECK(quad.fitted_order > 0.8);
    CHECK(quad.fitted_order < 1.2);
    const auto flat = classical_limit_curve(builtin_symbol("constant"), {4, 8, 16});
    for (double e : flat.errors) CHECK(e < 1e-12);
}

TEST_CASE("quantization preserves positivity and the mean") {
    const int k = 7;
    const auto rep = spin_rep(k);
    const auto quad = sphere_quadrature(k);
    const auto frame = coherent_frame(rep, quad);
    // f = (1 + z)/2 >= 0 on the sphere
    const auto q = toeplitz_quantize(
        [](const Vec3& p) { return 0.5 * (1.0 + p[2]); }, frame, quad);
    Eigen::SelfAdjointEigenSolver<MatC> es(q.mat);
    CHECK(es.eigenvalues().minCoeff() > -1e-12);
    // normalized trace = mean of f over the half-volume normalization
    double mean = 0.0, mass = 0.0;
    for (std::size_t i = 0; i < quad.weights.size(); ++i) {
        mean += quad.weights[i] * 0.5 * (1.0 + quad.nodes[i][2]);
        mass += quad.weights[i];
    }
    mean /= mass;
    CHECK(std::abs(q.mat.trace().real() / k - mean) < 1e-12);
}

TEST_CASE("rotation equivariance of the quantization") {
    for (int k : {4, 9}) {
        CHECK(equivariance_residual(builtin_symbol("x"), k, 0.7, 0.4, -1.1) < 1e-8);
        CHECK(equivariance_residual(builtin_symbol("zz"), k, -0.3, 1.2, 0.5) < 1e-8);
    }
    // Wigner matrices are unitary and compose over the z-subgroup
    const auto rep = spin_rep(5);
    const auto D = wigner_matrix(rep, 0.3, 0.8, -0.2);
    CHECK((D * D.adjoint() - MatC::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
    const auto Da = wigner_matrix(rep, 0.3, 0.0, 0.0);
    const auto Db = wigner_matrix(rep, 0.4, 0.0, 0.0);
    CHECK((Da * Db - wigner_matrix(rep, 0.7, 0.0, 0.0)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("commutator defect against the sphere bracket") {
    // f = g: the defect vanishes identically
    CHECK(dirac_defect_sphere(builtin_symbol("z"), builtin_symbol("z"), 12) < 1e-12);
    // z against zz: both quantize to commuting diagonal matrices and the
    // bracket vanishes pointwise
    CHECK(dirac_defect_sphere(builtin_symbol("z"), builtin_symbol("zz"), 12) < 1e-10);
    // generic pair decays at first order in 1/k
    std::vector<double> ks{8, 16, 32};
    std::vector<double> defects;
    for (double k : ks) defects.push_back(dirac_defect_sphere(builtin_symbol("x"),
                                                              builtin_symbol("y"), (int)k));
    CHECK(defects[0] > defects[2]);
    const double order = std::log(defects[0] / defects[2]) / std::log(ks[2] / ks[0]);
    CHECK(order > 0.8);
}
