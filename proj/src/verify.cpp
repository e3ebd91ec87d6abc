#include "dpw/verify.hpp"

#include <cmath>
#include <sstream>

namespace dpw {

namespace {
double max_abs(const CMat& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }
}

void VerificationReport::add(const std::string& name, double residual, Cplx location, double tol,
                             const std::string& note) {
    checks[name] = CheckResult{residual, location, tol, residual < tol, note};
}

bool VerificationReport::all_pass() const {
    for (const auto& [k, v] : checks)
        if (!v.pass) return false;
    return true;
}

std::string VerificationReport::render() const {
    std::ostringstream os;
    os.precision(15);
    for (const auto& [k, v] : checks) {
        os << (v.pass ? "PASS" : "FAIL") << "  " << k << "  residual=" << v.residual
           << "  tol=" << v.tolerance << "  at z=(" << v.location.real() << ","
           << v.location.imag() << ")";
        if (!v.note.empty()) os << "  [" << v.note << "]";
        os << "\n";
    }
    return os.str();
}

std::string VerificationReport::render_kv() const {
    std::ostringstream os;
    os.precision(15);
    for (const auto& [k, v] : checks)
        os << k << ".residual=" << v.residual << "\n"
           << k << ".tol=" << v.tolerance << "\n"
           << k << ".pass=" << (v.pass ? 1 : 0) << "\n";
    return os.str();
}

Stencil stencil_frames(const PotentialSpec& p, Cplx center, double h, FrameKind which, int trunc,
                       double tol) {
    Stencil st{center, h, {}};
    std::vector<Cplx> pts;
    for (int iy = -1; iy <= 1; ++iy)
        for (int ix = -1; ix <= 1; ++ix) pts.push_back(center + Cplx(ix * h, iy * h));
    st.f = frames_at(p, pts, which, trunc, tol);
    return st;
}

namespace {

// central differences of loops on the stencil
LaurentMatrix diff_x(const Stencil& st, int iy) {
    return (st.at(2, iy) - st.at(0, iy)) * Cplx(1.0 / (2.0 * st.h));
}
LaurentMatrix diff_y(const Stencil& st, int ix) {
    return (st.f[2 * 3 + ix] - st.f[0 * 3 + ix]) * Cplx(1.0 / (2.0 * st.h));
}

}  // namespace

HarmonicityResult harmonicity_residual(const Stencil& st, const GroupContext& ctx,
                                       const std::vector<Cplx>& lambda_samples) {
    HarmonicityResult out;
    const int n = ctx.dim;
    if (st.h <= 0.0) throw GridTooCoarse("harmonicity_residual: empty stencil");

    // alpha at the center and at the edge midpoints needed for curl terms
    auto alpha_at = [&](int ix, int iy, const LaurentMatrix& d) {
        LaurentMatrix finv = linv_truncated(st.at(ix, iy), 2 * (st.at(ix, iy).k_max() -
                                                                st.at(ix, iy).k_min()) + 8,
                                            1e-7);
        return lmul(finv, d).trimmed(1e-12);
    };

    LaurentMatrix ax_c = alpha_at(1, 1, diff_x(st, 1));
    LaurentMatrix ay_c = alpha_at(1, 1, diff_y(st, 1));

    // lambda-structure of alpha^{1,0} and alpha^{0,1}
    LaurentMatrix az = (ax_c - ay_c * Cplx(0.0, 1.0)) * Cplx(0.5);
    LaurentMatrix azb = (ax_c + ay_c * Cplx(0.0, 1.0)) * Cplx(0.5);
    auto structure_of = [&](const LaurentMatrix& a, int p_power) {
        double r = 0.0;
        for (const auto& [k, m] : a.coeffs()) {
            if (k == p_power) {
                // p^C housing
                CMat proj_k = 0.5 * (m + ctx.h * m * ctx.h);
                r = std::max(r, max_abs(proj_k));
            } else if (k == 0) {
                CMat proj_p = 0.5 * (m - ctx.h * m * ctx.h);
                r = std::max(r, max_abs(proj_p));
            } else {
                r = std::max(r, max_abs(m));
            }
        }
        return r;
    };
    out.structure = std::max(structure_of(az, -1), structure_of(azb, 1));

    // flatness d(alpha) + 1/2 [alpha, alpha] = 0:
    //   d_x alpha_y - d_y alpha_x + [alpha_x, alpha_y] at the center
    LaurentMatrix ay_xp = alpha_at(2, 1, diff_y(st, 2));
    LaurentMatrix ay_xm = alpha_at(0, 1, diff_y(st, 0));
    LaurentMatrix ax_yp = alpha_at(1, 2, diff_x(st, 2));
    LaurentMatrix ax_ym = alpha_at(1, 0, diff_x(st, 0));
    LaurentMatrix curl = (ay_xp - ay_xm) * Cplx(1.0 / (2.0 * st.h)) -
                         (ax_yp - ax_ym) * Cplx(1.0 / (2.0 * st.h));
    for (auto lam : lambda_samples) {
        CMat axm = ax_c.eval(lam), aym = ay_c.eval(lam);
        CMat res = curl.eval(lam) + axm * aym - aym * axm;
        out.flatness = std::max(out.flatness, max_abs(res));
    }
    (void)n;
    return out;
}

RichardsonResult harmonicity_richardson(const PotentialSpec& p, Cplx center, double h,
                                        FrameKind which, const std::vector<Cplx>& lambda_samples,
                                        int trunc, double tol) {
    RichardsonResult r;
    r.fine = harmonicity_residual(stencil_frames(p, center, h, which, trunc, tol), p.ctx,
                                  lambda_samples);
    r.coarse = harmonicity_residual(stencil_frames(p, center, 2 * h, which, trunc, tol), p.ctx,
                                    lambda_samples);
    double f = r.fine.max(), c = r.coarse.max();
    r.ratio = f > 1e-14 ? c / f : 16.0;
    return r;
}

int uniton_number(const LaurentMatrix& phi, const std::vector<CMat>& g_basis, double cutoff) {
    // Fourier support of Ad(phi): expand phi B_j phi^{-1} over lambda via
    // circle sampling against the basis
    const int n = phi.dim();
    const int span = phi.k_max() - phi.k_min();
    const int deg = 2 * span + 2;
    const int ns = 4 * (deg + 1);
    std::vector<CMat> vals(ns), invs(ns);
    for (int s = 0; s < ns; ++s) {
        Cplx lam = std::polar(1.0, 2.0 * M_PI * s / ns);
        vals[s] = phi.eval(lam);
        invs[s] = vals[s].inverse();
    }
    int k = 0;
    for (const auto& b : g_basis) {
        for (int m = deg; m >= 1; --m) {
            if (m <= k) break;
            CMat cp = CMat::Zero(n, n), cm = CMat::Zero(n, n);
            for (int s = 0; s < ns; ++s) {
                CMat ad = vals[s] * b * invs[s];
                cp += ad * std::polar(1.0, -2.0 * M_PI * m * s / ns);
                cm += ad * std::polar(1.0, 2.0 * M_PI * m * s / ns);
            }
            if (max_abs(cp) / ns > cutoff || max_abs(cm) / ns > cutoff) {
                k = std::max(k, m);
                break;
            }
        }
    }
    return k;
}

double isotropy_check(const RationalMatrix& b1, const CMat& i13,
                      const std::vector<Cplx>& probes) {
    double r = 0.0;
    for (auto z : probes) {
        CMat b = b1.eval(z);
        r = std::max(r, max_abs(b.transpose() * i13 * b));
    }
    return r;
}

ExtendedLawsResult extended_solution_laws(const std::vector<LaurentMatrix>& phi_stencil, double h,
                                          const std::vector<Cplx>& lambda_samples) {
    if (phi_stencil.size() != 9) throw GridTooCoarse("extended_solution_laws: need a 3x3 stencil");
    ExtendedLawsResult out;
    const int n = phi_stencil[0].dim();
    const CMat id = CMat::Identity(n, n);
    auto at = [&](int ix, int iy) -> const LaurentMatrix& { return phi_stencil[iy * 3 + ix]; };

    for (int iy = 0; iy < 3; ++iy)
        for (int ix = 0; ix < 3; ++ix)
            out.based = std::max(out.based, max_abs(at(ix, iy).eval(1.0) - id));

    // Fb = phi(-1); A = (1/2) Fb^{-1} dFb at the center
    auto fb = [&](int ix, int iy) { return at(ix, iy).eval(-1.0); };
    CMat fb_c = fb(1, 1);
    CMat fbx = (fb(2, 1) - fb(0, 1)) / (2.0 * h);
    CMat fby = (fb(1, 2) - fb(1, 0)) / (2.0 * h);
    CMat fbz = 0.5 * (fbx - Cplx(0.0, 1.0) * fby);
    CMat fbzb = 0.5 * (fbx + Cplx(0.0, 1.0) * fby);
    CMat fbinv = fb_c.inverse();
    CMat a10 = 0.5 * fbinv * fbz;
    CMat a01 = 0.5 * fbinv * fbzb;

    LaurentMatrix px = (at(2, 1) - at(0, 1)) * Cplx(1.0 / (2.0 * h));
    LaurentMatrix py = (at(1, 2) - at(1, 0)) * Cplx(1.0 / (2.0 * h));
    LaurentMatrix pz = (px - py * Cplx(0.0, 1.0)) * Cplx(0.5);
    LaurentMatrix pzb = (px + py * Cplx(0.0, 1.0)) * Cplx(0.5);

    for (auto lam : lambda_samples) {
        CMat phi_c = at(1, 1).eval(lam);
        CMat r1 = pz.eval(lam) - (Cplx(1.0) - Cplx(1.0) / lam) * phi_c * a10;
        CMat r2 = pzb.eval(lam) - (Cplx(1.0) - lam) * phi_c * a01;
        out.ode = std::max({out.ode, max_abs(r1), max_abs(r2)});
    }
    return out;
}

}  // namespace dpw
