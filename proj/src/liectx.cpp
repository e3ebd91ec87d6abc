#include "dpw/liectx.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace dpw {

namespace {
double max_abs(const CMat& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }
}

GroupContext GroupContext::so_compact(int n) {
    GroupContext c;
    c.name = "so(" + std::to_string(n) + ")";
    c.dim = n;
    c.family = Family::Orthogonal;
    c.reality = Reality::RealEntries;
    c.compact_form = true;
    c.natively_compact = true;
    c.J = CMat::Identity(n, n);
    c.h = CMat::Identity(n, n);
    return c;
}

GroupContext GroupContext::so_lorentz(int n, const CMat& h) {
    GroupContext c;
    c.name = "so+(1," + std::to_string(n - 1) + ")";
    c.dim = n;
    c.family = Family::Orthogonal;
    c.reality = Reality::RealEntries;
    c.compact_form = false;
    c.natively_compact = false;
    c.J = CMat::Identity(n, n);
    c.J(0, 0) = -1.0;
    c.h = h;
    if (max_abs(h * h - CMat::Identity(n, n)) > 1e-12)
        throw Error("GroupContext: h^2 != e");
    return c;
}

GroupContext GroupContext::su(int n, const CMat& h) {
    GroupContext c;
    c.name = "su(" + std::to_string(n) + ")";
    c.dim = n;
    c.family = Family::SpecialLinear;
    c.reality = Reality::CompactUnitary;
    c.compact_form = true;
    c.natively_compact = true;
    c.J = CMat::Identity(n, n);
    c.h = h;
    if (max_abs(h * h - CMat::Identity(n, n)) > 1e-12)
        throw Error("GroupContext: h^2 != e");
    return c;
}

GroupContext GroupContext::with_h(const CMat& new_h) const {
    GroupContext c = *this;
    if (max_abs(new_h * new_h - CMat::Identity(dim, dim)) > 1e-12)
        throw Error("GroupContext: h^2 != e");
    c.h = new_h;
    return c;
}

CMat GroupContext::signature_twist() const {
    CMat t = CMat::Identity(dim, dim);
    for (int i = 0; i < dim; ++i)
        if (J(i, i).real() < 0) t(i, i) = Cplx(0.0, 1.0);
    return t;
}

GroupContext compact_dual(const GroupContext& ctx) {
    if (ctx.natively_compact)
        throw AlreadyCompact("compact_dual: " + ctx.name + " has no distinct dual");
    GroupContext c = ctx;
    if (ctx.reality == Reality::RealEntries) {
        c.reality = Reality::CompactUnitary;
        c.compact_form = true;
        c.name = ctx.name + "^";
    } else {
        c.reality = Reality::RealEntries;
        c.compact_form = false;
        c.name = ctx.name.substr(0, ctx.name.size() - 1);
    }
    return c;
}

double MembershipReport::max() const {
    return std::max({form_residual, det_residual, reality_residual});
}

MembershipReport in_group(const CMat& m, const GroupContext& ctx) {
    MembershipReport r;
    if (ctx.family == Family::Orthogonal)
        r.form_residual = max_abs(m.transpose() * ctx.J * m - ctx.J);
    r.det_residual = std::abs(m.determinant() - Cplx(1.0));
    r.reality_residual = reality_residual(m, ctx);
    return r;
}

double algebra_residual(const CMat& x, const GroupContext& ctx) {
    if (ctx.family == Family::Orthogonal)
        return max_abs(x.transpose() * ctx.J + ctx.J * x);
    return std::abs(x.trace());
}

double reality_residual(const CMat& m, const GroupContext& ctx) {
    if (ctx.reality == Reality::RealEntries) return max_abs(m - m.conjugate());
    return max_abs(m.adjoint() * m - CMat::Identity(ctx.dim, ctx.dim));
}

double loop_reality_residual(const LaurentMatrix& g, const GroupContext& ctx, int samples) {
    double r = 0.0;
    for (int s = 0; s < samples; ++s) {
        Cplx lam = std::polar(1.0, 2.0 * M_PI * s / samples);
        r = std::max(r, reality_residual(g.eval(lam), ctx));
    }
    return r;
}

LaurentMatrix conj_form_loop(const LaurentMatrix& g, const GroupContext& ctx) {
    if (ctx.reality != Reality::RealEntries)
        throw Error("conj_form_loop: coefficientwise involution only for real-entry forms");
    return g.conj_loop();
}

std::pair<CMat, CMat> project_kp(const CMat& x, const GroupContext& ctx) {
    if (algebra_residual(x, ctx) > 1e-8 * std::max(1.0, max_abs(x)))
        throw NotInAlgebra("project_kp: input not in the complexified algebra");
    CMat hxh = ctx.h * x * ctx.h;  // h = h^{-1}
    return {0.5 * (x + hxh), 0.5 * (x - hxh)};
}

double check_twisted(const LaurentMatrix& g, const GroupContext& ctx, int samples) {
    double r = 0.0;
    for (int s = 0; s < samples; ++s) {
        Cplx lam = std::polar(1.0, 2.0 * M_PI * s / samples);
        r = std::max(r, max_abs(ctx.h * g.eval(-lam) * ctx.h - g.eval(lam)));
    }
    return r;
}

double check_twisted_algebra(const LaurentMatrix& x, const GroupContext& ctx) {
    double r = 0.0;
    for (const auto& [k, a] : x.coeffs()) {
        CMat hah = ctx.h * a * ctx.h;
        r = std::max(r, max_abs((k % 2 == 0) ? CMat(a - hah) : CMat(a + hah)) * 0.5);
    }
    return r;
}

CMat CartanPair::project_k(const CMat& x, const CMat& h) const { return 0.5 * (x + h * x * h); }
CMat CartanPair::project_p(const CMat& x, const CMat& h) const { return 0.5 * (x - h * x * h); }

std::vector<CMat> real_form_basis(const GroupContext& ctx) {
    const int n = ctx.dim;
    std::vector<CMat> out;
    if (ctx.family == Family::Orthogonal) {
        // so(J): J*A, A antisymmetric; real form selects the reality slice.
        if (ctx.reality == Reality::RealEntries) {
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b) {
                    CMat e = CMat::Zero(n, n);
                    e(a, b) = 1.0;
                    e(b, a) = -1.0;
                    out.push_back(ctx.J * e);
                }
        } else {
            CMat t = ctx.signature_twist();
            CMat ti = t.inverse();
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b) {
                    CMat e = CMat::Zero(n, n);
                    e(a, b) = 1.0;
                    e(b, a) = -1.0;
                    out.push_back(t * e * ti);
                }
        }
    } else {
        // su(n): antihermitian traceless
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) {
                CMat e = CMat::Zero(n, n), f = CMat::Zero(n, n);
                e(a, b) = 1.0;
                e(b, a) = -1.0;
                f(a, b) = Cplx(0.0, 1.0);
                f(b, a) = Cplx(0.0, 1.0);
                out.push_back(e);
                out.push_back(f);
            }
        for (int a = 0; a + 1 < n; ++a) {
            CMat d = CMat::Zero(n, n);
            d(a, a) = Cplx(0.0, 1.0);
            d(a + 1, a + 1) = Cplx(0.0, -1.0);
            out.push_back(d);
        }
    }
    return out;
}

std::vector<CMat> complex_algebra_basis(const GroupContext& ctx) {
    const int n = ctx.dim;
    std::vector<CMat> out;
    if (ctx.family == Family::Orthogonal) {
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) {
                CMat e = CMat::Zero(n, n);
                e(a, b) = 1.0;
                e(b, a) = -1.0;
                out.push_back(ctx.J * e);
            }
    } else {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (a != b) {
                    CMat e = CMat::Zero(n, n);
                    e(a, b) = 1.0;
                    out.push_back(e);
                }
        for (int a = 0; a + 1 < n; ++a) {
            CMat d = CMat::Zero(n, n);
            d(a, a) = 1.0;
            d(a + 1, a + 1) = -1.0;
            out.push_back(d);
        }
    }
    return out;
}

CartanPair cartan_pair(const GroupContext& ctx) {
    CartanPair cp;
    cp.g_basis = complex_algebra_basis(ctx);
    // split the real-form basis by sigma eigenvalue; the +-projections of
    // basis elements stay in the real form because sigma commutes with it.
    for (const auto& x : real_form_basis(ctx)) {
        CMat xk = 0.5 * (x + ctx.h * x * ctx.h);
        CMat xp = 0.5 * (x - ctx.h * x * ctx.h);
        if (max_abs(xk) > 1e-12) cp.k_basis.push_back(xk);
        if (max_abs(xp) > 1e-12) cp.p_basis.push_back(xp);
    }
    // prune to independent sets via column-pivoted QR on vectorized matrices
    auto prune = [n = ctx.dim](std::vector<CMat>& v) {
        if (v.empty()) return;
        CMat m(n * n, static_cast<int>(v.size()));
        for (size_t j = 0; j < v.size(); ++j)
            m.col(static_cast<int>(j)) = Eigen::Map<const CVec>(v[j].data(), n * n);
        Eigen::ColPivHouseholderQR<CMat> qr(m);
        qr.setThreshold(1e-10);
        const int rank = static_cast<int>(qr.rank());
        std::vector<CMat> kept;
        for (int i = 0; i < rank; ++i) kept.push_back(v[qr.colsPermutation().indices()(i)]);
        v = std::move(kept);
    };
    prune(cp.k_basis);
    prune(cp.p_basis);
    return cp;
}

double span_distance(const CMat& x, const std::vector<CMat>& basis) {
    const int n = static_cast<int>(x.rows());
    if (basis.empty()) return max_abs(x);
    CMat m(n * n, static_cast<int>(basis.size()));
    for (size_t j = 0; j < basis.size(); ++j)
        m.col(static_cast<int>(j)) = Eigen::Map<const CVec>(basis[j].data(), n * n);
    CVec b = Eigen::Map<const CVec>(x.data(), n * n);
    CVec sol = m.colPivHouseholderQr().solve(b);
    return (m * sol - b).cwiseAbs().maxCoeff();
}

CMat span_projector(const std::vector<CMat>& basis) {
    if (basis.empty()) throw Error("span_projector: empty basis");
    const int n = static_cast<int>(basis[0].rows());
    CMat m(n * n, static_cast<int>(basis.size()));
    for (size_t j = 0; j < basis.size(); ++j)
        m.col(static_cast<int>(j)) = Eigen::Map<const CVec>(basis[j].data(), n * n);
    Eigen::HouseholderQR<CMat> qr(m);
    CMat q = qr.householderQ() * CMat::Identity(n * n, static_cast<int>(basis.size()));
    return q * q.adjoint();
}

}  // namespace dpw
