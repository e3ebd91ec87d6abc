#ifndef DPW_WILLMORE_HPP
#define DPW_WILLMORE_HPP

#include <functional>

#include "dpw/dpw.hpp"

namespace dpw {

/// The explicit S^6 two-sphere example: exact ingredients.
namespace willmore {

/// The 4x4 block B1(z) = (1/2)[[2iz,-2z,-i,1],[-2iz,2z,-i,1],[-2,-2i,-z,-iz],[2i,-2,-iz,z]].
RationalMatrix b1_block();

/// I_{1,3} = diag(-1,1,1,1).
CMat i13();

/// D = diag(-I4, I4) and the ambient form J = diag(-1,1,...,1) on R^{1,7}.
CMat d_matrix();
CMat j_matrix();

/// The grading element adapted to the example: exp(pi xi) = D exactly,
/// [xi, A(z)] = i A(z) exactly; spectrum {±2i, ±i, ±i, 0, 0}.
CMat xi_adapted();

/// The minimal grading element of the example: [xi, A(z)] = i A(z) exactly,
/// exp(pi xi) = -D (the center-shifted base point), spectrum {±i, ±i, 0,...}.
/// Its extended solution is circle-invariant and realizes the minimal loop
/// support [-2, 2] of Ad(phi).
CMat xi_invariant();

/// The full 8x8 potential eta = lambda^{-1} [[0, B1],[-B1^t I13, 0]] dz in the
/// SO+(1,7) context with h = D, based at z0 = 0, grading attached.
PotentialSpec example_potential();

}  // namespace willmore

struct WillmoreSample {
    Cplx z;
    Cplx lambda;
    Eigen::Matrix<double, 7, 1> x;  // point of S^6
};

/// The closed-form associated family x_lambda(z).
WillmoreSample closed_form_x(Cplx z, Cplx lambda);

/// Lorentzian 4-plane of the mean-curvature sphere congruence at z, as the
/// J-orthogonal projector onto span{Y, Re Y_z, Im Y_z, Yhat} of the scaled
/// lightcone lift Y = mu (1, x), <Y_z, Y_zb> = 1/2.
Eigen::MatrixXd conformal_gauss_4plane(const std::function<WillmoreSample(Cplx)>& surface, Cplx z,
                                       double spacing = 1e-4);

/// The pipeline's 4-plane at a frame: projector onto the first four columns
/// of F(z, zb, lambda) w.r.t. J (gauge-invariant under the SO+(1,3) block).
Eigen::MatrixXd frame_4plane(const LaurentMatrix& frame, Cplx lambda);

/// Operator-norm distance of the two projectors.
double plane_deviation(const Eigen::MatrixXd& p1, const Eigen::MatrixXd& p2);

enum class PairType { TypeI, TypeII };

struct PotentialShape {
    int m = 0;                        // half-dimension
    std::vector<PairType> pair_types; // per column pair
    int shape_index = 0;              // 1..m-1 when the pattern is homogeneous
};

/// Pattern-match the column pairs of a polynomial 4x(2m-4) block:
/// type (ii) is vhat_j = i v_j; type (i) is the paired-row pattern, searched
/// up to signed coordinate permutations. Throws NoMatch.
PotentialShape classify_shape(const RationalMatrix& b1, const std::vector<Cplx>& probes);

}  // namespace dpw

#endif
