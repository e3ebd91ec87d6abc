#ifndef DPW_ROOTS_HPP
#define DPW_ROOTS_HPP

#include <map>
#include <vector>

#include "dpw/liectx.hpp"

namespace dpw {

/// One root of the complexified algebra w.r.t. the chosen maximal torus:
/// the functional values Im theta(t_k) on the torus basis, plus a root vector.
struct Root {
    Eigen::VectorXd theta;  // theta(t_k) = i * theta[k]
    CMat vector;            // ad-eigenvector in g^C
    bool positive = false;
};

/// Cartan subalgebra data of the compact real form: torus basis, roots,
/// simple roots, and the dual basis xi_j with theta_j(xi_k) = i delta_jk.
struct CartanData {
    GroupContext ctx;
    std::vector<CMat> torus;       // basis t_1..t_l of t (commuting, real form)
    std::vector<Root> roots;       // all roots with root vectors
    std::vector<int> simple;       // indices into roots of the simple roots
    std::vector<CMat> dual_basis;  // xi_1..xi_l
    std::vector<CMat> torus_c;     // t^C basis (same matrices, complex span)

    int rank() const { return static_cast<int>(torus.size()); }
};

CartanData cartan_data(const GroupContext& ctx);

/// Value of a root functional on an arbitrary torus element (coefficients of
/// xi in the torus basis solved by least squares). Returns Im theta(xi).
double root_value(const CartanData& cd, const Root& r, const CMat& xi);

/// A torus element with its integer ad-grading.
struct CanonicalElement {
    CMat xi;
    std::map<int, std::vector<CMat>> grading;  // j -> basis of g^xi_j
    int height = 0;
    bool is_canonical = false;
    std::vector<int> index_set;  // subset of simple-root indices (1-based), if built as one
};

/// Fill the grading of xi (eigenvalues of ad xi must be i*integers within tol).
CanonicalElement grading(const CMat& xi, const CartanData& cd);

/// All 2^l - 1 nonzero subset sums of the dual basis, gradings computed.
std::vector<CanonicalElement> enumerate_canonical(const CartanData& cd);

/// Canonicality test: theta_j(xi) in {0, i} for all simple roots.
bool is_canonical_element(const CartanData& cd, const CMat& xi, double tol = 1e-8);

/// lambda-graded bases of u0_xi (all lambda powers) and (u0_xi)_T (even only):
/// at lambda-power j the space  (+)_{j<k<=r} g^xi_k.
struct U0Spaces {
    std::map<int, std::vector<CMat>> full;    // j -> basis
    std::map<int, std::vector<CMat>> t_part;  // even j only
    int dim_full = 0;
    int dim_t = 0;
};

U0Spaces u0_spaces(const CanonicalElement& ce);

/// The loop gamma_xi(e^{it}) = exp(t xi) as sum_j lambda^j P_j over the
/// spectral projections of xi. Requires integral spectrum; half-integral
/// spectra raise HalfIntegerConvention (use gamma_xi_double / adjoint image).
LaurentMatrix gamma_xi_loop(const CMat& xi, double tol = 1e-8);

/// Double-cover convention: the loop in mu = lambda^{1/2}; exponent k of the
/// result means lambda^{k/2}. Defined whenever the spectrum is half-integral.
LaurentMatrix gamma_xi_double(const CMat& xi, double tol = 1e-8);

/// Ad(gamma_xi(lambda)) expressed on a basis of g^C: always integral.
LaurentMatrix gamma_xi_ad(const CMat& xi, const std::vector<CMat>& g_basis, double tol = 1e-8);

/// Evidence that exp(pi xi) realizes h: exact residual, and the spectral
/// conjugacy residual (eigenvalue multisets of exp(pi xi) and h compared).
struct ExpPiReport {
    double exact = 0.0;
    double conjugacy = 0.0;
};

ExpPiReport exp_pi_check(const CMat& xi, const CMat& h);

/// Matrix exponential and related helpers (Eigen MatrixFunctions wrappers
/// with a spectral fallback kept out of line for compile-time hygiene).
CMat mat_exp(const CMat& x);
CMat mat_sqrt_principal(const CMat& x);  // throws IwasawaCellBoundary on R_- spectrum
CMat mat_sqrt_hermitian(const CMat& x);  // hermitian positive-definite root

}  // namespace dpw

#endif
