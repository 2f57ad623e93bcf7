#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hbarlab {

using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Spin-(k-1)/2 representation on C^k; Jz diagonal with entries j, j-1, ..., -j.
struct SpinRep {
    int k = 0;
    double j = 0.0;
    MatC Jx, Jy, Jz;
};

SpinRep spin_rep(int k);

/// Product quadrature on S^2: Gauss-Legendre in cos(theta), uniform in phi,
/// weighted by half the round volume form so the total mass is 2*pi.
struct SphereQuadrature {
    int n_theta = 0;
    int n_phi = 0;
    std::vector<Vec3> nodes;
    std::vector<double> thetas;  // per node
    std::vector<double> phis;
    std::vector<double> weights;
};

SphereQuadrature sphere_quadrature(int k);

/// Coherent states |psi_x> = exp(-i phi Jz) exp(-i theta Jy) |j, j> at the
/// quadrature nodes.
struct CoherentFrame {
    int k = 0;
    std::vector<VecC> states;
};

CoherentFrame coherent_frame(const SpinRep& rep, const SphereQuadrature& quad);

/// Single coherent state at spherical angles (theta, phi).
VecC coherent_state(const SpinRep& rep, double theta, double phi);

struct FuzzyElement {
    int k = 0;
    MatC mat;
};

/// Covariant (Berezin) symbol: I(a)(x) = <psi_x| a |psi_x> per node.
std::vector<std::complex<double>> covariant_symbol(const FuzzyElement& a,
                                                   const CoherentFrame& frame);

/// Frobenius residual of (k/2pi) sum_i w_i |psi_i><psi_i| - Id.
/// Throws when the quadrature cannot integrate degree 2(k-1) exactly.
double resolution_of_identity(const SpinRep& rep, const CoherentFrame& frame,
                              const SphereQuadrature& quad);

/// Toeplitz operator Q(f) = (k/2pi) sum_i w_i f(x_i) |psi_i><psi_i|.
FuzzyElement toeplitz_quantize(const std::vector<std::complex<double>>& f,
                               const CoherentFrame& frame, const SphereQuadrature& quad);
FuzzyElement toeplitz_quantize(const std::function<double(const Vec3&)>& f,
                               const CoherentFrame& frame, const SphereQuadrature& quad);

/// Max over node pairs (x, y) of
/// |<psi_x| a b |psi_y> - (k/2pi) sum_z w_z <psi_x|a|psi_z><psi_z|b|psi_y>|.
double kernel_convolution_check(const FuzzyElement& a, const FuzzyElement& b,
                                const CoherentFrame& frame, const SphereQuadrature& quad);

/// Max deviation, over a rank-one basis |e_i><e_i| plus the coherent state at
/// the first node, between <phi|phi> and (k/2pi) sum_i w_i |<psi_i|phi>|^2.
double symbol_theorem_check(const CoherentFrame& frame, const SphereQuadrature& quad);

/// Symbol with its ambient gradient (restriction of a polynomial on R^3).
struct SphereSymbol {
    std::string name;
    std::function<double(const Vec3&)> value;
    std::function<Vec3(const Vec3&)> grad;
};

/// Builtin symbols: constant, x, y, z and products up to degree 4
/// (e.g. "zz", "xy", "zzz", "zzzz", "xyz"). Throws on unknown names.
SphereSymbol builtin_symbol(const std::string& name);

/// Sup-norm error of the Berezin transform I(Q(f)) against f per k, with a
/// fitted convergence order in 1/k.
struct ClassicalLimitCurve {
    std::vector<int> k_list;
    std::vector<double> errors;
    double fitted_order = 0.0;
    bool monotone = true;
};

ClassicalLimitCurve classical_limit_curve(const SphereSymbol& f,
                                          const std::vector<int>& k_list);

/// Operator norm of i k [Q f, Q g] + Q({f, g}), where the bracket inverting
/// the half-volume form is {f, g} = 2 x . (grad f x grad g).
double dirac_defect_sphere(const SphereSymbol& f, const SphereSymbol& g, int k);

/// Bracket coefficient recorded in reports: {f,g} = c * x . (grad f x grad g).
inline constexpr double kSphereBracketCoefficient = 2.0;

/// Wigner matrix of the rotation with Euler angles (alpha, beta, gamma):
/// D = exp(-i alpha Jz) exp(-i beta Jy) exp(-i gamma Jz).
MatC wigner_matrix(const SpinRep& rep, double alpha, double beta, double gamma);

/// SO(3) matrix for the same Euler angles, R = Rz(alpha) Ry(beta) Rz(gamma).
Mat3 euler_rotation(double alpha, double beta, double gamma);

/// Frobenius residual of D Q(f) D^* - Q(f o R^{-1}).
double equivariance_residual(const SphereSymbol& f, int k, double alpha, double beta,
                             double gamma);

double operator_norm(const MatC& a);

}  // namespace hbarlab
