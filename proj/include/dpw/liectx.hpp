#ifndef DPW_LIECTX_HPP
#define DPW_LIECTX_HPP

#include <string>
#include <vector>

#include "dpw/laurent.hpp"

namespace dpw {

enum class Family { SpecialLinear, Orthogonal };
enum class Reality { RealEntries, CompactUnitary };

/// A concrete matrix Lie group realization: the complex group
/// G^C = { A : A^t J A = J, det A = 1 } (J = identity and the J-condition
/// dropped for the special-linear family), a real form inside it, and the
/// inner involution datum h with sigma = conjugation by h.
struct GroupContext {
    std::string name;
    int dim = 0;
    Family family = Family::Orthogonal;
    Reality reality = Reality::RealEntries;
    bool compact_form = false;     // the real form is compact
    bool natively_compact = false; // no distinct compact dual
    CMat J;                        // defining symmetric bilinear form
    CMat h;                        // h^2 = e, sigma = Ad(h)
    double tol = 1e-10;

    static GroupContext so_compact(int n);                  // SO(n), J = e
    static GroupContext so_lorentz(int n, const CMat& h);   // SO+(1,n-1), J = diag(-1,1,..,1)
    static GroupContext su(int n, const CMat& h);           // SU(n) in SL(n,C)

    GroupContext with_h(const CMat& new_h) const;

    /// Diagonal T with T_ii = i where J_ii = -1, else 1; conjugation by T
    /// carries the standard orthogonal/unitary realization onto this one.
    CMat signature_twist() const;

    CMat identity() const { return CMat::Identity(dim, dim); }
};

/// Switch between a non-compact real form and its compact partner inside the
/// same complexified group (same J, same h). Involutive.
GroupContext compact_dual(const GroupContext& ctx);

/// Residuals of group membership: form preservation, unit determinant,
/// reality of the real form.
struct MembershipReport {
    double form_residual = 0.0;
    double det_residual = 0.0;
    double reality_residual = 0.0;
    double max() const;
};

MembershipReport in_group(const CMat& m, const GroupContext& ctx);

/// ||X^t J + J X|| for the orthogonal family, |tr X| for special-linear.
double algebra_residual(const CMat& x, const GroupContext& ctx);

/// Reality residual of a single matrix value against the real form.
double reality_residual(const CMat& m, const GroupContext& ctx);

/// Reality residual of a loop on circle samples (values in the real form).
double loop_reality_residual(const LaurentMatrix& g, const GroupContext& ctx, int samples = 16);

/// The anti-holomorphic loop involution fixing the real-form loop group,
/// applied coefficientwise. RealEntries: (g^c)_k = conj(g_{-k}). Compact
/// forms: tau(g)^{-1} g is returned by iwasawa directly; here tau(g) needs a
/// loop inversion, so the fixed-point residual is exposed instead.
LaurentMatrix conj_form_loop(const LaurentMatrix& g, const GroupContext& ctx);

/// sigma-eigenspace projections: X_k = (X + hXh^{-1})/2, X_p = (X - hXh^{-1})/2.
std::pair<CMat, CMat> project_kp(const CMat& x, const GroupContext& ctx);

/// max over circle samples of || h g(-lambda) h^{-1} - g(lambda) ||.
double check_twisted(const LaurentMatrix& g, const GroupContext& ctx, int samples = 16);

/// Algebra-level twisting: even coefficients in k^C, odd in p^C.
double check_twisted_algebra(const LaurentMatrix& x, const GroupContext& ctx);

/// Cartan decomposition data of the real form: bases of k and p (real spans)
/// and of the complexified algebra.
struct CartanPair {
    std::vector<CMat> k_basis;
    std::vector<CMat> p_basis;
    std::vector<CMat> g_basis;  // basis of g^C (complex span)

    CMat project_k(const CMat& x, const CMat& h) const;  // (x + hxh)/2
    CMat project_p(const CMat& x, const CMat& h) const;
};

/// Basis of the real form g (real span): antisymmetric real matrices for
/// orthogonal RealEntries, T-twisted rotations for orthogonal compact duals,
/// antihermitian traceless for su(n).
std::vector<CMat> real_form_basis(const GroupContext& ctx);

/// Basis of g^C as a complex vector space.
std::vector<CMat> complex_algebra_basis(const GroupContext& ctx);

CartanPair cartan_pair(const GroupContext& ctx);

/// Distance from x to the span of the given basis (complex coefficients),
/// via least squares. Used for subspace membership checks.
double span_distance(const CMat& x, const std::vector<CMat>& basis);

/// Orthonormal projector (Frobenius inner product) onto the complex span.
CMat span_projector(const std::vector<CMat>& basis);  // acts on vec(X), dim n^2 x n^2

}  // namespace dpw

#endif
