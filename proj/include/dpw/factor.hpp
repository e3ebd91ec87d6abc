#ifndef DPW_FACTOR_HPP
#define DPW_FACTOR_HPP

#include "dpw/liectx.hpp"
#include "dpw/roots.hpp"

namespace dpw {

struct BirkhoffResult {
    LaurentMatrix minus;  // support <= 0, constant term e
    LaurentMatrix plus;   // support >= 0
    bool in_big_cell = true;
    double residual = 0.0;
};

/// g = minus * plus on the open big cell. The negative Fourier coefficients of
/// minus^{-1} solve a block-Toeplitz linear system; a singular system signals
/// the complement of the big cell.
BirkhoffResult birkhoff(const LaurentMatrix& g, const GroupContext& ctx, int trunc, double tol);

struct IwasawaResult {
    LaurentMatrix unitary;  // real-form-valued on the circle, sigma-twisted
    LaurentMatrix plus;     // support >= 0, gauge-normalized value at 0
    bool singular = false;
    double residual = 0.0;      // reconstruction residual on circle samples
    double constancy = 0.0;     // residual of the constant middle term
};

/// Global Iwasawa split for compact real forms: g = unitary * plus with
/// plus(0) hermitian positive definite.
IwasawaResult iwasawa_compact(const LaurentMatrix& g, const GroupContext& ctx_u, int trunc,
                              double tol);

/// Local Iwasawa split for non-compact real forms: g = F * V+ on the open
/// cell; the cell boundary raises IwasawaCellBoundary.
IwasawaResult iwasawa_noncompact(const LaurentMatrix& g, const GroupContext& ctx_g, int trunc,
                                 double tol);

/// Dispatch on the context's real form.
IwasawaResult iwasawa(const LaurentMatrix& g, const GroupContext& ctx, int trunc, double tol);

struct PRQResult {
    CMat r;  // in the parabolic PR = exp(pr), pr = (+)_{j>=0} g^xi_j
    CMat q;  // unipotent in the opposite Q = exp(q), q = (+)_{j<0} g^xi_j
};

/// V = R * Q in the xi-adapted eigenbasis via unpivoted block LU; pivot
/// breakdown means the point lies outside the generic (omega = e) cell.
PRQResult prq_split(const CMat& v, const CanonicalElement& ce);

/// Default truncation degree for factorization outputs.
int default_trunc(const LaurentMatrix& g);

/// exp of a loop-algebra element by terminating/converging power series;
/// support capped at max_deg with a tail check.
LaurentMatrix loop_exp(const LaurentMatrix& x, int max_deg = 64, double tol = 1e-13);

}  // namespace dpw

#endif
