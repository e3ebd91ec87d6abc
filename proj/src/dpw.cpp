#include "dpw/dpw.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace dpw {

namespace {
double max_abs(const CMat& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }
}

CMat PotentialSpec::eval_sum(Cplx z) const {
    CMat a = CMat::Zero(ctx.dim, ctx.dim);
    for (const auto& [j, m] : coefficients) a += m.eval(z);
    return a;
}

std::vector<Cplx> PotentialSpec::pole_list() const {
    std::vector<Cplx> out;
    for (const auto& [j, m] : coefficients)
        for (auto p : m.pole_set()) {
            bool seen = false;
            for (auto q : out)
                if (std::abs(p - q) < 1e-9) { seen = true; break; }
            if (!seen) out.push_back(p);
        }
    return out;
}

int PotentialSpec::support_cap() const {
    if (!ce) return ctx.dim;
    // k-fold products of positive-grade coefficients shift the xi-eigenvalue
    // filtration by at least k, so they vanish beyond the spectral width of xi
    // in the defining representation (the adjoint height can be smaller and
    // does not bound matrix products).
    Eigen::ComplexEigenSolver<CMat> es(ce->xi, false);
    double lo = 0.0, hi = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        double s = es.eigenvalues()(i).imag();
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    return std::max(ce->height, static_cast<int>(std::lround(hi - lo)));
}

PotentialReport validate_potential(const PotentialSpec& p, double tol) {
    PotentialReport rep;
    rep.poles = p.pole_list();

    // sample away from poles
    std::vector<Cplx> probes{{0.3, 0.17}, {-0.52, 0.41}, {0.11, -0.83}};
    for (auto& z : probes) {
        for (auto q : rep.poles)
            while (std::abs(z - q) < 1e-3) z += Cplx(0.013, 0.007);
    }

    for (auto z : probes) {
        if (p.ce) {
            for (const auto& [j, m] : p.coefficients) {
                auto it = p.ce->grading.find(j + 1);
                CMat v = m.eval(z);
                if (max_abs(v) < 1e-14) continue;
                double d = (it == p.ce->grading.end()) ? max_abs(v)
                                                       : span_distance(v, it->second);
                rep.grading_residual = std::max(rep.grading_residual, d / max_abs(v));
                if (p.mode == PotentialMode::Normalized && j % 2 != 0)
                    rep.parity_residual = std::max(rep.parity_residual, max_abs(v));
            }
        }
        // nilpotency of the summed coefficient
        CMat a = p.eval_sum(z);
        CMat pw = a;
        int idx = 1;
        double scale = std::max(1.0, max_abs(a));
        while (idx < p.ctx.dim && max_abs(pw) > tol * std::pow(scale, idx)) {
            pw = pw * a;
            ++idx;
        }
        rep.nilpotency_index = std::max(rep.nilpotency_index, idx);
        rep.nilpotency_residual =
            std::max(rep.nilpotency_residual, max_abs(pw) / std::pow(scale, idx));
    }
    if (rep.parity_residual > tol)
        throw ParityViolation("validate_potential: even-grade coefficient in normalized mode");
    if (rep.grading_residual > tol)
        throw GradingViolation("validate_potential: coefficient leaves its grade (residual " +
                               std::to_string(rep.grading_residual) + ")");
    if (rep.nilpotency_residual > tol) {
        rep.ok = false;
        throw GradingViolation("validate_potential: coefficient values are not nilpotent");
    }
    return rep;
}

namespace {

// Taylor coefficients of the summed potential coefficient along z(s) = a + s d,
// per matrix entry, up to the given order.
std::vector<CMat> potential_taylor(const PotentialSpec& p, Cplx a, Cplx d, int order) {
    const int n = p.ctx.dim;
    std::vector<CMat> out(order + 1, CMat::Zero(n, n));
    for (const auto& [j, m] : p.coefficients) {
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                const RationalFn& f = m.at(r, c);
                if (f.is_zero()) continue;
                std::vector<Cplx> t = f.taylor(a, order);
                Cplx dp(1.0);
                for (int q = 0; q <= order; ++q) {
                    out[q](r, c) += t[q] * dp;
                    dp *= d;
                }
            }
    }
    return out;
}

}  // namespace

LaurentMatrix solve_meromorphic_frame(const PotentialSpec& p, Cplx z,
                                      const std::vector<Cplx>& waypoints) {
    if (p.mode != PotentialMode::Normalized)
        throw Error("solve_meromorphic_frame: normalized-mode potentials only");
    const int n = p.ctx.dim;
    const int cap = p.support_cap();
    const int kmax = cap + 1;  // one guard slot beyond the forced degree bound
    constexpr int order = 24;

    std::vector<Cplx> path{p.z0};
    path.insert(path.end(), waypoints.begin(), waypoints.end());
    path.push_back(z);

    std::vector<Cplx> poles = p.pole_list();

    // F[k] is the coefficient of lambda^{-k}
    std::vector<CMat> f(kmax + 1, CMat::Zero(n, n));
    f[0] = CMat::Identity(n, n);

    for (size_t leg = 0; leg + 1 < path.size(); ++leg) {
        Cplx a = path[leg], b = path[leg + 1];
        double len = std::abs(b - a);
        if (len == 0.0) continue;
        // step bounded by the distance to the nearest pole along the leg
        double dist = std::numeric_limits<double>::infinity();
        for (auto q : poles) {
            // coarse distance from segment to pole
            for (double s = 0.0; s <= 1.0; s += 0.0625)
                dist = std::min(dist, std::abs(a + s * (b - a) - q));
        }
        if (dist < 1e-6)
            throw PathThroughPole("solve_meromorphic_frame: path passes through a pole");
        double hmax = std::min(0.5, 0.4 * dist);
        int steps = std::max(1, static_cast<int>(std::ceil(len / hmax)));

        for (int s = 0; s < steps; ++s) {
            Cplx za = a + (b - a) * (double(s) / steps);
            Cplx d = (b - a) / double(steps);
            std::vector<CMat> at = potential_taylor(p, za, d, order);
            // dF/ds = F A(z(s)) dz/ds along z(s) = za + s d
            for (auto& m : at) m *= d;
            // series coefficients c[k][q] of F_{-k} in the segment parameter
            std::vector<std::vector<CMat>> c(kmax + 1,
                                             std::vector<CMat>(order + 1, CMat::Zero(n, n)));
            for (int k = 0; k <= kmax; ++k) c[k][0] = f[k];
            for (int q = 0; q < order; ++q) {
                for (int k = 1; k <= kmax; ++k) {
                    CMat acc = CMat::Zero(n, n);
                    for (int m = 0; m <= q; ++m) acc += c[k - 1][q - m] * at[m];
                    c[k][q + 1] = acc / double(q + 1);
                }
            }
            double tail = 0.0, scale = 0.0;
            for (int k = 0; k <= kmax; ++k) {
                CMat sum = CMat::Zero(n, n);
                for (int q = order; q >= 0; --q) sum += c[k][q];
                tail = std::max(tail, max_abs(c[k][order]) + max_abs(c[k][order - 1]));
                f[k] = sum;
                scale = std::max(scale, max_abs(sum));
            }
            if (tail > 1e-10 * std::max(1.0, scale))
                throw PathThroughPole(
                    "solve_meromorphic_frame: series step failed to converge (pole too close)");
        }
    }

    if (max_abs(f[kmax]) > 1e-11)
        throw SupportOverflow("solve_meromorphic_frame: drift beyond the degree bound (norm " +
                              std::to_string(max_abs(f[kmax])) + ")");
    LaurentMatrix out(n);
    for (int k = 0; k <= cap; ++k)
        if (max_abs(f[k]) > 1e-14) out.set_coeff(-k, f[k]);
    return out;
}

int Grid::side() const { return 2 * static_cast<int>(std::round(radius / spacing)) + 1; }
int Grid::size() const { return side() * side(); }

Cplx Grid::point(int ix, int iy) const {
    int half = (side() - 1) / 2;
    return center + Cplx((ix - half) * spacing, (iy - half) * spacing);
}

bool Grid::inside_disc(int ix, int iy) const {
    return std::abs(point(ix, iy) - center) <= radius + 1e-12;
}

FrameField build_frame(const PotentialSpec& p, const Grid& grid, FrameKind which, int trunc,
                       double tol) {
    FrameField ff;
    ff.ctx = (which == FrameKind::Compact && !p.ctx.compact_form) ? compact_dual(p.ctx) : p.ctx;
    if (which == FrameKind::NonCompact && p.ctx.compact_form)
        throw Error("build_frame: non-compact build requested in a compact context");
    ff.grid = grid;
    ff.z0 = p.z0;
    const int side = grid.side();
    ff.frames.assign(grid.size(), LaurentMatrix(p.ctx.dim));
    ff.minus_frames.assign(grid.size(), LaurentMatrix(p.ctx.dim));
    ff.ok.assign(grid.size(), false);
    ff.failure.assign(grid.size(), "");
    for (int iy = 0; iy < side; ++iy)
        for (int ix = 0; ix < side; ++ix) {
            int idx = grid.index(ix, iy);
            Cplx z = grid.point(ix, iy);
            if (std::abs(z - p.z0) < 1e-13) ff.base_index = idx;
            try {
                LaurentMatrix fm = solve_meromorphic_frame(p, z);
                IwasawaResult iw = iwasawa(fm, ff.ctx, trunc, tol);
                ff.frames[idx] = iw.unitary;
                ff.minus_frames[idx] = fm;
                ff.ok[idx] = true;
            } catch (const Error& e) {
                ff.failure[idx] = e.what();
            }
        }
    if (ff.base_index >= 0 && ff.ok[ff.base_index])
        ff.frames[ff.base_index] = LaurentMatrix::identity(p.ctx.dim);
    return ff;
}

std::vector<LaurentMatrix> frames_at(const PotentialSpec& p, const std::vector<Cplx>& pts,
                                     FrameKind which, int trunc, double tol) {
    GroupContext ctx =
        (which == FrameKind::Compact && !p.ctx.compact_form) ? compact_dual(p.ctx) : p.ctx;
    std::vector<LaurentMatrix> out;
    out.reserve(pts.size());
    for (auto z : pts) {
        LaurentMatrix fm = solve_meromorphic_frame(p, z);
        out.push_back(iwasawa(fm, ctx, trunc, tol).unitary);
    }
    return out;
}

CartanEmbedded cartan_embed(const FrameField& f, int trunc, double tol) {
    CartanEmbedded ce;
    ce.maps.assign(f.frames.size(), LaurentMatrix(f.ctx.dim));
    const CMat id = f.ctx.identity();
    for (size_t i = 0; i < f.frames.size(); ++i) {
        if (!f.ok[i]) continue;
        LaurentMatrix finv = linv_truncated(f.frames[i], trunc, tol);
        LaurentMatrix emb = (f.frames[i] * f.ctx.h * finv).trimmed(1e-13);
        LaurentMatrix sq = lmul(emb, emb);
        for (int s = 0; s < 8; ++s) {
            Cplx lam = std::polar(1.0, 2.0 * M_PI * s / 8);
            ce.involution_residual =
                std::max(ce.involution_residual, max_abs(sq.eval(lam) - id));
        }
        ce.maps[i] = std::move(emb);
    }
    if (f.base_index >= 0 && f.ok[f.base_index])
        ce.base_residual = max_abs(ce.maps[f.base_index].eval(1.0) - f.ctx.h);
    return ce;
}

ExtendedSolutionField extended_solution(const FrameField& f, const CMat& xi_tilde) {
    ExtendedSolutionField es;
    // exp(pi xi) must reproduce h up to the central sign; the sign flip only
    // translates the target conjugacy class by the center and keeps the
    // T-invariance identity intact.
    ExpPiReport pi = exp_pi_check(xi_tilde, f.ctx.h);
    ExpPiReport pim = exp_pi_check(xi_tilde, CMat(-f.ctx.h));
    if (std::min(pi.exact, pim.exact) > 1e-9)
        throw Error("extended_solution: exp(pi xi) != +-h (residual " + std::to_string(pi.exact) +
                    ")");
    LaurentMatrix gamma = gamma_xi_loop(xi_tilde);
    es.phi.assign(f.frames.size(), LaurentMatrix(f.ctx.dim));
    const CMat id = f.ctx.identity();
    for (size_t i = 0; i < f.frames.size(); ++i) {
        if (!f.ok[i]) continue;
        CMat f1inv = f.frames[i].eval(1.0).inverse();
        LaurentMatrix phi = (gamma * f.frames[i] * f1inv).trimmed(1e-13);
        es.based_residual = std::max(es.based_residual, max_abs(phi.eval(1.0) - id));
        CMat pm1inv = phi.eval(-1.0).inverse();
        for (int s = 1; s < 8; s += 2) {
            Cplx lam = std::polar(1.0, 2.0 * M_PI * s / 8);
            es.t_invariance = std::max(
                es.t_invariance, max_abs(phi.eval(-lam) * pm1inv - phi.eval(lam)));
        }
        es.phi[i] = std::move(phi);
    }
    return es;
}

RecoveredPotential normalized_potential_of(const FrameField& f, int max_degree, double tol) {
    const int n = f.ctx.dim;
    const int side = f.grid.side();
    const double h = f.grid.spacing;

    // lambda^{-1} coefficient samples of F-^{-1} dF-/dz by central differences
    std::vector<Cplx> zs;
    std::vector<CMat> as;
    for (int iy = 1; iy + 1 < side; ++iy)
        for (int ix = 1; ix + 1 < side; ++ix) {
            int i0 = f.grid.index(ix, iy);
            int ixp = f.grid.index(ix + 1, iy), ixm = f.grid.index(ix - 1, iy);
            int iyp = f.grid.index(ix, iy + 1), iym = f.grid.index(ix, iy - 1);
            if (!(f.ok[i0] && f.ok[ixp] && f.ok[ixm] && f.ok[iyp] && f.ok[iym])) continue;
            const LaurentMatrix& fm = f.minus_frames[i0];
            LaurentMatrix dx = (f.minus_frames[ixp] - f.minus_frames[ixm]) * Cplx(1.0 / (2 * h));
            LaurentMatrix dy = (f.minus_frames[iyp] - f.minus_frames[iym]) * Cplx(1.0 / (2 * h));
            LaurentMatrix dz = (dx - dy * Cplx(0.0, 1.0)) * Cplx(0.5);
            LaurentMatrix fminv = linv_truncated(fm, 12, 1e-8);
            LaurentMatrix eta = lmul(fminv, dz);
            zs.push_back(f.grid.point(ix, iy));
            as.push_back(eta.coeff(-1));
        }
    if (zs.size() < 4) throw GridTooCoarse("normalized_potential_of: too few interior points");

    // entry-wise polynomial least squares with degree escalation
    RecoveredPotential out{PotentialSpec{f.ctx, std::nullopt, f.z0, {}, PotentialMode::Normalized}};
    RationalMatrix rm(n, n);
    double scale = 0.0;
    for (const auto& a : as) scale = std::max(scale, max_abs(a));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            bool fitted = false;
            for (int deg = 0; deg <= max_degree && !fitted; ++deg) {
                CMat vand(zs.size(), deg + 1);
                CVec rhs(zs.size());
                for (size_t i = 0; i < zs.size(); ++i) {
                    Cplx zp(1.0);
                    for (int q = 0; q <= deg; ++q) {
                        vand(static_cast<int>(i), q) = zp;
                        zp *= zs[i];
                    }
                    rhs(static_cast<int>(i)) = as[i](r, c);
                }
                CVec coef = vand.colPivHouseholderQr().solve(rhs);
                double res = (vand * coef - rhs).cwiseAbs().maxCoeff();
                if (res < tol * std::max(1.0, scale)) {
                    std::vector<Cplx> cs(deg + 1);
                    for (int q = 0; q <= deg; ++q)
                        cs[q] = std::abs(coef(q)) > tol * 1e-2 ? coef(q) : Cplx(0.0);
                    rm.at(r, c) = RationalFn(Polynomial(std::move(cs)));
                    out.fit_residual = std::max(out.fit_residual, res);
                    fitted = true;
                }
            }
            if (!fitted)
                throw FitDegreeExceeded("normalized_potential_of: entry (" + std::to_string(r) +
                                        "," + std::to_string(c) + ") not polynomial up to degree " +
                                        std::to_string(max_degree));
        }
    out.spec.coefficients.emplace_back(0, std::move(rm));
    return out;
}

MCFormReport mc_form_check(const std::map<int, RationalMatrix>& c,
                           const std::vector<std::pair<int, RationalMatrix>>& ladder,
                           const std::vector<Cplx>& probes, double fd_step) {
    MCFormReport rep;
    if (c.empty() || probes.empty()) return rep;
    const int n = c.begin()->second.rows();
    auto c_loop = [&](Cplx z) {
        LaurentMatrix x(n);
        for (const auto& [j, m] : c) x.add_coeff(j, m.eval(z));
        return x;
    };
    for (auto z : probes) {
        LaurentMatrix e0 = loop_exp(c_loop(z));
        LaurentMatrix exp_p = loop_exp(c_loop(z + fd_step));
        LaurentMatrix exp_m = loop_exp(c_loop(z - fd_step));
        LaurentMatrix exp_ip = loop_exp(c_loop(z + Cplx(0, fd_step)));
        LaurentMatrix exp_im = loop_exp(c_loop(z - Cplx(0, fd_step)));
        LaurentMatrix dx = (exp_p - exp_m) * Cplx(1.0 / (2 * fd_step));
        LaurentMatrix dy = (exp_ip - exp_im) * Cplx(1.0 / (2 * fd_step));
        LaurentMatrix dz = (dx - dy * Cplx(0.0, 1.0)) * Cplx(0.5);
        LaurentMatrix e0inv = linv_truncated(e0, 4 * (e0.k_max() - e0.k_min() + 1), 1e-9);
        LaurentMatrix form = lmul(e0inv, dz).trimmed(1e-12);
        LaurentMatrix decl(n);
        for (const auto& [j, m] : ladder) decl.add_coeff(j, m.eval(z));
        rep.residual = std::max(rep.residual, (form - decl).max_coeff_norm());
        if (rep.extracted.empty())
            for (const auto& [k, m] : form.coeffs()) rep.extracted[k] = m;
    }
    return rep;
}

}  // namespace dpw
