#include "dpw/factor.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace dpw {

namespace {

double max_abs(const CMat& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

double circle_residual(const LaurentMatrix& a, const LaurentMatrix& b, const LaurentMatrix& g,
                       int samples = 64) {
    double r = 0.0;
    for (int s = 0; s < samples; ++s) {
        Cplx lam = std::polar(1.0, 2.0 * M_PI * s / samples);
        r = std::max(r, max_abs(a.eval(lam) * b.eval(lam) - g.eval(lam)));
    }
    return r;
}

}  // namespace

int default_trunc(const LaurentMatrix& g) {
    return 2 * (g.k_max() - g.k_min()) + 4;
}

BirkhoffResult birkhoff(const LaurentMatrix& g, const GroupContext& ctx, int trunc, double tol) {
    const int n = g.dim();
    const int nneg = std::max(1, std::max(-g.k_min(), trunc));

    // u := minus^{-1}, support in [-nneg, 0], u_0 = e, chosen so that u*g has
    // no negative Fourier modes:  sum_k u_k g_{j-k} = -g_j  for j = -1..-nneg.
    CMat t = CMat::Zero(nneg * n, nneg * n);
    CMat rhs = CMat::Zero(nneg * n, n);
    auto gk = [&](int k) { return g.coeff(k); };
    // unknown row-block i holds u_{-i}; equation column-block j is mode -j.
    // (u g)_{-j} = sum_i u_{-i} g_{-j+i} = -g_{-j}
    // assemble transposed so a single LU solve covers all rows of u.
    for (int i = 1; i <= nneg; ++i)
        for (int j = 1; j <= nneg; ++j)
            t.block((j - 1) * n, (i - 1) * n, n, n) = gk(-j + i).transpose();
    for (int j = 1; j <= nneg; ++j)
        rhs.block((j - 1) * n, 0, n, n) = -gk(-j).transpose();

    Eigen::PartialPivLU<CMat> lu(t);
    CMat sol = lu.solve(rhs);
    if (max_abs(t * sol - rhs) > 1e-6 * std::max(1.0, max_abs(rhs)))
        throw OutsideBigCell("birkhoff: block-Toeplitz system singular");

    LaurentMatrix u(n);
    u.set_coeff(0, ctx.identity());
    for (int i = 1; i <= nneg; ++i) {
        CMat ui = sol.block((i - 1) * n, 0, n, n).transpose();
        if (max_abs(ui) > 1e-14) u.set_coeff(-i, ui);
    }

    BirkhoffResult res{LaurentMatrix(n), LaurentMatrix(n)};
    LaurentMatrix minus(n);
    try {
        minus = linv_truncated(u, trunc, tol).restricted(-trunc, 0).trimmed(1e-14);
    } catch (const SingularLoop&) {
        throw OutsideBigCell("birkhoff: minus factor not invertible on the circle");
    }
    LaurentMatrix plus = lmul(u, g);
    double tail = plus.tail_norm(0, plus.k_max());
    if (tail > tol)
        throw TruncationOverflow("birkhoff: plus factor keeps negative modes (tail " +
                                 std::to_string(tail) + ")");
    res.minus = minus;
    res.plus = plus.restricted(0, plus.k_max()).trimmed(1e-14);
    res.residual = circle_residual(res.minus, res.plus, g);
    if (res.residual > tol)
        throw TruncationOverflow("birkhoff: reconstruction residual " +
                                 std::to_string(res.residual));
    return res;
}

namespace {

// Common tail of both Iwasawa splits, after the middle constant term S and
// its inverse square root t0 have been found:  F = X t0, plus = t0^{-1} n+.
IwasawaResult assemble_iwasawa(const LaurentMatrix& g, const LaurentMatrix& x,
                               const LaurentMatrix& nplus, const CMat& t0, double constancy,
                               double tol) {
    IwasawaResult r{LaurentMatrix(g.dim()), LaurentMatrix(g.dim())};
    r.unitary = (x * t0).trimmed(1e-14);
    r.plus = (CMat(t0.inverse()) * nplus).trimmed(1e-14);
    r.constancy = constancy;
    r.residual = circle_residual(r.unitary, r.plus, g);
    if (r.residual > tol)
        throw TruncationOverflow("iwasawa: reconstruction residual " +
                                 std::to_string(r.residual));
    return r;
}

}  // namespace

IwasawaResult iwasawa_compact(const LaurentMatrix& g, const GroupContext& ctx_u, int trunc,
                              double tol) {
    if (!ctx_u.compact_form) throw Error("iwasawa_compact: context is not a compact real form");
    // N = tau(g)^{-1} g = g^* g; Birkhoff N = n- n+; X = g n+^{-1};
    // S = X^* X is constant, hermitian positive; t0 = S^{-1/2}.
    LaurentMatrix big = lmul(g.star(), g);
    BirkhoffResult bk = birkhoff(big, ctx_u, trunc, tol);
    LaurentMatrix npinv = linv_truncated(bk.plus, trunc, tol);
    LaurentMatrix x = lmul(g, npinv).trimmed(1e-13);
    LaurentMatrix s = lmul(x.star(), x);
    CMat s0 = s.coeff(0);
    double constancy = s.tail_norm(0, 0);
    CMat t0 = mat_sqrt_hermitian(s0).inverse();
    return assemble_iwasawa(g, x, bk.plus, t0, constancy, tol);
}

IwasawaResult iwasawa_noncompact(const LaurentMatrix& g, const GroupContext& ctx_g, int trunc,
                                 double tol) {
    if (ctx_g.compact_form) throw Error("iwasawa_noncompact: context real form is compact");
    if (ctx_g.reality != Reality::RealEntries)
        throw Error("iwasawa_noncompact: expected a real-entry form");
    try {
        LaurentMatrix gc_inv = linv_truncated(g.conj_loop(), trunc, tol);
        LaurentMatrix big = lmul(gc_inv, g).trimmed(1e-13);
        BirkhoffResult bk = birkhoff(big, ctx_g, trunc, tol);
        LaurentMatrix npinv = linv_truncated(bk.plus, trunc, tol);
        LaurentMatrix x = lmul(g, npinv).trimmed(1e-13);
        LaurentMatrix xc_inv = linv_truncated(x.conj_loop(), trunc, tol);
        LaurentMatrix s = lmul(xc_inv, x);
        CMat s0 = s.coeff(0);
        double constancy = s.tail_norm(0, 0);
        CMat t0 = mat_sqrt_principal(s0).inverse();
        return assemble_iwasawa(g, x, bk.plus, t0, constancy, tol);
    } catch (const OutsideBigCell& e) {
        throw IwasawaCellBoundary(std::string("iwasawa_noncompact: ") + e.what());
    } catch (const SingularLoop& e) {
        throw IwasawaCellBoundary(std::string("iwasawa_noncompact: ") + e.what());
    }
}

IwasawaResult iwasawa(const LaurentMatrix& g, const GroupContext& ctx, int trunc, double tol) {
    return ctx.compact_form ? iwasawa_compact(g, ctx, trunc, tol)
                            : iwasawa_noncompact(g, ctx, trunc, tol);
}

PRQResult prq_split(const CMat& v, const CanonicalElement& ce) {
    const int n = static_cast<int>(v.rows());
    // xi-eigenbasis sorted by descending eigenvalue: pr = block upper,
    // q = strictly block lower.
    Eigen::ComplexEigenSolver<CMat> es(ce.xi);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::vector<double> mu(n);
    for (int i = 0; i < n; ++i) mu[i] = es.eigenvalues()(i).imag();
    std::sort(order.begin(), order.end(), [&](int a, int b) { return mu[a] > mu[b]; });
    CMat c(n, n);
    std::vector<double> smu(n);
    for (int i = 0; i < n; ++i) {
        c.col(i) = es.eigenvectors().col(order[i]);
        smu[i] = mu[order[i]];
    }
    // block boundaries where the eigenvalue drops
    std::vector<int> starts{0};
    for (int i = 1; i < n; ++i)
        if (std::abs(smu[i] - smu[i - 1]) > 0.5) starts.push_back(i);
    starts.push_back(n);

    CMat cinv = c.inverse();
    CMat m = cinv * v * c;
    // M = R~ Q~  <=>  M^{-1} = Q~^{-1} R~^{-1} = (block unit lower)(block upper):
    // unpivoted block LU of M^{-1}.
    Eigen::PartialPivLU<CMat> mlu(m);
    CMat a = mlu.inverse();
    const int nb = static_cast<int>(starts.size()) - 1;
    CMat l = CMat::Identity(n, n), u = CMat::Zero(n, n);
    for (int b = 0; b < nb; ++b) {
        int i0 = starts[b], w = starts[b + 1] - i0;
        CMat piv = a.block(i0, i0, w, w);
        Eigen::FullPivLU<CMat> plu(piv);
        if (plu.rank() < w)
            throw NonGenericCell("prq_split: pivot block singular (omega != e cell)");
        u.block(i0, i0, w, n - i0) = a.block(i0, i0, w, n - i0);
        if (i0 + w < n) {
            CMat col = a.block(i0 + w, i0, n - i0 - w, w) * plu.inverse();
            l.block(i0 + w, i0, n - i0 - w, w) = col;
            a.block(i0 + w, i0 + w, n - i0 - w, n - i0 - w) -=
                col * a.block(i0, i0 + w, w, n - i0 - w);
        }
    }
    PRQResult res;
    CMat qtilde = l.inverse();       // Q~ = L^{-1}, block unit lower
    CMat rtilde = u.inverse();       // R~ = U^{-1}, block upper
    res.q = c * qtilde * cinv;
    res.r = c * rtilde * cinv;
    return res;
}

LaurentMatrix loop_exp(const LaurentMatrix& x, int max_deg, double tol) {
    const int n = x.dim();
    LaurentMatrix acc = LaurentMatrix::identity(n);
    LaurentMatrix term = LaurentMatrix::identity(n);
    for (int k = 1; k <= 60; ++k) {
        term = lmul(term, x) * Cplx(1.0 / k);
        term = term.restricted(-max_deg, max_deg).trimmed(1e-300);
        acc = acc + term;
        if (term.max_coeff_norm() < tol) return acc.trimmed(1e-15);
    }
    throw TruncationOverflow("loop_exp: series did not settle (argument too large?)");
}

}  // namespace dpw
