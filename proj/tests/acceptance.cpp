// Acceptance gate: the eight end-to-end criteria, one PASS/FAIL line each.
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "dpw/verify.hpp"
#include "dpw/willmore.hpp"

using namespace dpw;

namespace {

int failures = 0;

void report(int idx, const char* name, bool ok, const std::string& detail) {
    std::printf("%s  [%d] %s: %s\n", ok ? "PASS" : "FAIL", idx, name, detail.c_str());
    if (!ok) ++failures;
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

double max_abs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

std::mt19937 rng(987654321);

CMat random_combo(const std::vector<CMat>& basis, double scale, bool complex_coeffs) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CMat x = CMat::Zero(basis[0].rows(), basis[0].cols());
    for (auto& b : basis) {
        Cplx c = complex_coeffs ? Cplx(u(rng), u(rng)) : Cplx(u(rng), 0.0);
        x += scale * c * b;
    }
    return x;
}

LaurentMatrix random_real_twisted(const GroupContext& ctx, const CartanPair& cp, int kmax,
                                  double scale) {
    LaurentMatrix x(ctx.dim);
    bool compact = ctx.compact_form;
    CMat x0 = random_combo(cp.k_basis, scale, false);
    x.set_coeff(0, compact ? CMat((x0 - x0.adjoint()) / 2.0) : CMat((x0 + x0.conjugate()) / 2.0));
    for (int k = 1; k <= kmax; ++k) {
        auto& basis = (k % 2 == 0) ? cp.k_basis : cp.p_basis;
        CMat n = random_combo(basis, scale, true);
        x.add_coeff(k, n);
        x.add_coeff(-k, compact ? CMat(-n.adjoint()) : CMat(n.conjugate()));
    }
    return x;
}

LaurentMatrix random_plus_twisted(const GroupContext& ctx, const CartanPair& cp, int kmax,
                                  double scale) {
    LaurentMatrix x(ctx.dim);
    for (int k = 1; k <= kmax; ++k)
        x.set_coeff(k, random_combo((k % 2 == 0) ? cp.k_basis : cp.p_basis, scale, true));
    return x;
}

/// A potential with random linear-polynomial coefficients in the odd grading
/// spaces of the example's height-3 element (grades 1 and 3).
PotentialSpec random_potential(double scale) {
    PotentialSpec p = willmore::example_potential();
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto& ce = *p.ce;
    p.coefficients.clear();
    for (int j : {0, 2}) {
        auto it = ce.grading.find(j + 1);
        if (it == ce.grading.end()) continue;
        RationalMatrix m(8, 8);
        for (int r = 0; r < 8; ++r)
            for (int c = 0; c < 8; ++c) m.at(r, c) = RationalFn(Polynomial{});
        CMat c0 = random_combo(it->second, scale, true);
        CMat c1 = random_combo(it->second, scale, true);
        for (int r = 0; r < 8; ++r)
            for (int c = 0; c < 8; ++c)
                if (std::abs(c0(r, c)) > 0 || std::abs(c1(r, c)) > 0)
                    m.at(r, c) = RationalFn(Polynomial{c0(r, c), c1(r, c)});
        p.coefficients.emplace_back(j, std::move(m));
    }
    return p;
}

std::vector<Cplx> circle_samples() {
    std::vector<Cplx> out;
    for (int s = 1; s < 8; ++s) out.push_back(std::polar(1.0, 2 * M_PI * s / 8.0));
    return out;
}

// --- criterion 1: full-disc closed-form comparison ---------------------------

FrameField criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    PotentialSpec spec = willmore::example_potential();
    Grid grid{Cplx(0.0), 1.0, 0.05};
    FrameField ff = build_frame(spec, grid, FrameKind::NonCompact, 12, 1e-9);

    std::vector<Cplx> lams{Cplx(1, 0), Cplx(0, 1), Cplx(-1, 0)};
    double max_dev = 0.0;
    int boundary = 0, total = 0;
    const int side = grid.side();
    for (int iy = 0; iy < side; ++iy)
        for (int ix = 0; ix < side; ++ix) {
            if (!grid.inside_disc(ix, iy)) continue;
            ++total;
            int idx = grid.index(ix, iy);
            if (!ff.ok[idx]) {
                ++boundary;
                continue;
            }
            Cplx z = grid.point(ix, iy);
            for (auto lam : lams) {
                Eigen::MatrixXd p1 = frame_4plane(ff.frames[idx], lam);
                Eigen::MatrixXd p2 = conformal_gauss_4plane(
                    [lam](Cplx w) { return closed_form_x(w, lam); }, z);
                max_dev = std::max(max_dev, plane_deviation(p1, p2));
            }
        }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = max_dev < 1e-5 && boundary == 0 && secs < 120.0;
    report(1, "closed-form surface comparison",
           ok,
           std::to_string(total) + " points, max plane deviation " + fmt(max_dev) +
               " (tol 1e-5), boundary points " + std::to_string(boundary) + ", " + fmt(secs) +
               " s");
    return ff;
}

// --- criterion 2: uniton number ----------------------------------------------

void criterion_2(const FrameField& ff) {
    // the minimal grading element turns the pipeline output into the
    // circle-invariant representative, whose adjoint loop support is [-2,2]
    ExtendedSolutionField es = extended_solution(ff, willmore::xi_invariant());
    auto basis = complex_algebra_basis(ff.ctx);
    const int side = ff.grid.side();
    bool ok = true;
    int sampled = 0;
    std::vector<std::pair<int, int>> picks{{side / 2 + 3, side / 2},
                                           {side / 2 - 6, side / 2 + 8},
                                           {side / 2 + 10, side / 2 - 5}};
    for (auto [ix, iy] : picks) {
        int idx = ff.grid.index(ix, iy);
        if (!ff.ok[idx]) continue;
        ++sampled;
        ok = ok && uniton_number(es.phi[idx], basis) == 2;
    }
    ok = ok && sampled == 3;
    report(2, "uniton number of the example", ok,
           "expected 2 exactly at " + std::to_string(sampled) + " sampled points");
}

// --- criterion 3: compact/non-compact duality + harmonicity -------------------

struct BuiltPair {
    PotentialSpec spec;
    FrameField compact;
    FrameField noncompact;
};

std::vector<BuiltPair> criterion_3() {
    std::vector<PotentialSpec> pots{willmore::example_potential()};
    for (int i = 0; i < 5; ++i) pots.push_back(random_potential(0.25));

    Grid grid{Cplx(0.0), 0.1, 0.05};
    std::vector<BuiltPair> built;
    double dual_dev = 0.0, harm = 0.0, ratio = 1e9;
    auto lams = circle_samples();
    bool ok = true;
    for (auto& p : pots) {
        validate_potential(p);
        BuiltPair bp{p, build_frame(p, grid, FrameKind::Compact, 16, 1e-9),
                     build_frame(p, grid, FrameKind::NonCompact, 16, 1e-9)};
        for (size_t i = 0; i < bp.compact.frames.size(); ++i) {
            if (!bp.compact.ok[i] || !bp.noncompact.ok[i]) {
                ok = false;
                continue;
            }
            BirkhoffResult bu = birkhoff(bp.compact.frames[i], bp.compact.ctx, 20, 1e-9);
            BirkhoffResult bg = birkhoff(bp.noncompact.frames[i], bp.noncompact.ctx, 20, 1e-9);
            dual_dev = std::max(dual_dev, (bu.minus - bg.minus).max_coeff_norm());
        }
        for (FrameKind which : {FrameKind::Compact, FrameKind::NonCompact}) {
            RichardsonResult r =
                harmonicity_richardson(p, p.z0 + Cplx(0.31, 0.22), 1e-3, which, lams, 16, 1e-9);
            harm = std::max(harm, r.fine.max());
            ratio = std::min(ratio, r.ratio);
        }
        built.push_back(std::move(bp));
    }
    // harmonicity tolerance from the convergence study: the residual is pure
    // second-order stencil error with coefficient ~10, hence ~1e-5 at h = 1e-3
    ok = ok && dual_dev < 1e-10 && harm < 2e-5 && ratio > 3.5;
    report(3, "real-form duality and harmonicity", ok,
           "6 potentials x 2 forms: minus-factor agreement " + fmt(dual_dev) +
               " (tol 1e-10), harmonicity " + fmt(harm) + " (tol 2e-5), richardson ratio >= " +
               fmt(ratio));
    return built;
}

// --- criterion 4: 200 factorization roundtrips each ---------------------------

void criterion_4() {
    CMat h8 = CMat::Identity(8, 8);
    h8.topLeftCorner(4, 4) = -CMat::Identity(4, 4);
    GroupContext g = GroupContext::so_lorentz(8, h8);
    GroupContext u = compact_dual(g);
    CartanPair cpg = cartan_pair(g);
    CartanPair cpu = cartan_pair(u);
    CanonicalElement ce = grading(willmore::xi_adapted(), cartan_data(g));

    double rec = 0.0, uniq = 0.0;
    bool ok = true;
    try {
        for (int trial = 0; trial < 200; ++trial) {
            // birkhoff
            LaurentMatrix xm(8), xp(8);
            for (int k = 1; k <= 3; ++k)
                xm.set_coeff(-k, random_combo((k % 2 == 0) ? cpg.k_basis : cpg.p_basis, 0.1, true));
            for (int k = 0; k <= 2; ++k)
                xp.set_coeff(k, random_combo((k % 2 == 0) ? cpg.k_basis : cpg.p_basis, 0.1, true));
            LaurentMatrix minus = loop_exp(xm), plus = loop_exp(xp);
            LaurentMatrix prod = lmul(minus, plus);
            BirkhoffResult b = birkhoff(prod, g, 32, 1e-10);
            rec = std::max(rec, b.residual);
            uniq = std::max(uniq, (b.minus - minus).max_coeff_norm());
            uniq = std::max(uniq, (b.plus - plus).max_coeff_norm());

            // compact iwasawa
            LaurentMatrix fu = loop_exp(random_real_twisted(u, cpu, 2, 0.08)).trimmed(1e-14);
            CMat k0u = random_combo(cpu.k_basis, 0.15, false);
            k0u = (k0u - k0u.adjoint()) / 2.0;
            LaurentMatrix pu =
                lmul(LaurentMatrix::constant(mat_exp(CMat(Cplx(0, 1) * k0u))),
                     loop_exp(random_plus_twisted(u, cpu, 2, 0.08)).trimmed(1e-14));
            LaurentMatrix gu = lmul(fu, pu);
            IwasawaResult iu = iwasawa(gu, u, 32, 1e-10);
            rec = std::max(rec, iu.residual);
            uniq = std::max(uniq, (iu.unitary - fu).max_coeff_norm());
            uniq = std::max(uniq, (iu.plus - pu).max_coeff_norm());

            // non-compact iwasawa
            LaurentMatrix fg = loop_exp(random_real_twisted(g, cpg, 2, 0.08)).trimmed(1e-14);
            CMat k0g = random_combo(cpg.k_basis, 0.15, false);
            k0g = (k0g + k0g.conjugate()) / 2.0;
            LaurentMatrix pg =
                lmul(LaurentMatrix::constant(mat_exp(CMat(Cplx(0, 1) * k0g))),
                     loop_exp(random_plus_twisted(g, cpg, 2, 0.08)).trimmed(1e-14));
            LaurentMatrix gg = lmul(fg, pg);
            IwasawaResult ig = iwasawa(gg, g, 32, 1e-10);
            rec = std::max(rec, ig.residual);
            uniq = std::max(uniq, (ig.unitary - fg).max_coeff_norm());
            uniq = std::max(uniq, (ig.plus - pg).max_coeff_norm());

            // PR x Q
            std::uniform_real_distribution<double> ud(-1.0, 1.0);
            auto combo = [&](int lo, int hi) {
                CMat x = CMat::Zero(8, 8);
                for (auto& [j, bj] : ce.grading)
                    if (j >= lo && j <= hi)
                        for (auto& bm : bj) x += 0.25 * Cplx(ud(rng), ud(rng)) * bm;
                return x;
            };
            CMat r = mat_exp(combo(0, 3)), q = mat_exp(combo(-3, -1));
            PRQResult pr = prq_split(r * q, ce);
            rec = std::max(rec, max_abs(pr.r * pr.q - r * q));
            uniq = std::max(uniq, max_abs(pr.r - r));
            uniq = std::max(uniq, max_abs(pr.q - q));
        }
    } catch (const Error& e) {
        ok = false;
        report(4, "factorization roundtrips", false, std::string("exception: ") + e.what());
        return;
    }
    ok = ok && rec < 1e-9 && uniq < 1e-9;
    report(4, "factorization roundtrips", ok,
           "200 each of birkhoff / compact / non-compact / parabolic: reconstruction " + fmt(rec) +
               ", factor uniqueness " + fmt(uniq) + " (tol 1e-9)");
}

// --- criterion 5: grading laws for all canonical elements ----------------------

double bracket_law(const CanonicalElement& ce, int dim) {
    double worst = 0.0;
    for (auto& [j, bj] : ce.grading)
        for (auto& [k, bk] : ce.grading)
            for (auto& a : bj)
                for (auto& b : bk) {
                    CMat br = a * b - b * a;
                    if (max_abs(br) < 1e-13) continue;
                    auto it = ce.grading.find(j + k);
                    if (it == ce.grading.end()) {
                        worst = std::max(worst, max_abs(br));
                        continue;
                    }
                    worst = std::max(worst, span_distance(br, it->second));
                }
    (void)dim;
    return worst;
}

std::vector<CMat> collect(const CanonicalElement& ce, bool odd_positive, bool nonneg) {
    std::vector<CMat> out;
    for (auto& [j, bj] : ce.grading) {
        if (odd_positive && (j < 1 || j % 2 == 0)) continue;
        if (!odd_positive && nonneg && j < 0) continue;
        if (!odd_positive && !nonneg && j < 1) continue;
        out.insert(out.end(), bj.begin(), bj.end());
    }
    return out;
}

double projector_gap(const std::vector<CMat>& a, const std::vector<CMat>& b) {
    if (a.empty() && b.empty()) return 0.0;
    if (a.empty() || b.empty()) return 1.0;
    return (span_projector(a) - span_projector(b)).cwiseAbs().maxCoeff();
}

void criterion_5() {
    double worst = 0.0;
    bool ok = true;
    int checked = 0, isotropy_checked = 0;

    auto run_group = [&](const GroupContext& ctx) {
        CartanData cd = cartan_data(ctx);
        const int n = ctx.dim;
        for (const auto& ce : enumerate_canonical(cd)) {
            ++checked;
            worst = std::max(worst, bracket_law(ce, n));

            // doubling the element shares grade zero and the positive part
            CanonicalElement ce2 = grading(CMat(2.0 * ce.xi), cd);
            worst = std::max(worst, projector_gap(ce.grading.at(0), ce2.grading.at(0)));
            worst = std::max(worst,
                             projector_gap(collect(ce, false, false), collect(ce2, false, false)));

            // pr cap p^C = odd positive grades, whenever exp(pi xi) squares to e
            CMat hx = mat_exp(CMat(M_PI * ce.xi));
            if (max_abs(hx * hx - CMat::Identity(n, n)) > 1e-10) continue;
            ++isotropy_checked;
            std::vector<CMat> pr = collect(ce, false, true);
            // p^C basis w.r.t. sigma = Ad(hx)
            std::vector<CMat> pc;
            for (auto& [j, bj] : ce.grading)
                for (auto& b : bj) {
                    CMat pp = 0.5 * (b - hx * b * hx.inverse());
                    if (max_abs(pp) > 1e-8) pc.push_back(pp);
                }
            // intersection via the common-fixed-point nullspace
            CMat ppr = span_projector(pr), ppc = span_projector(pc);
            const int nn = n * n;
            CMat stack(2 * nn, nn);
            stack.topRows(nn) = CMat::Identity(nn, nn) - ppr;
            stack.bottomRows(nn) = CMat::Identity(nn, nn) - ppc;
            Eigen::JacobiSVD<CMat> svd(stack, Eigen::ComputeFullV);
            std::vector<CMat> inter;
            for (int i = 0; i < nn; ++i)
                if (svd.singularValues()(i) < 1e-8) {
                    CMat m(n, n);
                    for (int r = 0; r < n; ++r)
                        for (int c = 0; c < n; ++c) m(r, c) = svd.matrixV()(c * n + r, i);
                    inter.push_back(m);
                }
            worst = std::max(worst, projector_gap(inter, collect(ce, true, false)));
        }
    };

    CMat h8 = CMat::Identity(8, 8);
    h8.topLeftCorner(4, 4) = -CMat::Identity(4, 4);
    run_group(compact_dual(GroupContext::so_lorentz(8, h8)));
    CMat h4 = CMat::Identity(4, 4);
    h4(2, 2) = h4(3, 3) = -1.0;
    run_group(GroupContext::su(4, h4));

    ok = worst < 1e-10 && checked == 22;
    report(5, "grading laws over all canonical elements", ok,
           std::to_string(checked) + " elements (so(8)+su(4)), " +
               std::to_string(isotropy_checked) + " with involutive exp(pi xi); worst residual " +
               fmt(worst) + " (tol 1e-10)");
}

// --- criteria 6+7: embedding involution, base point, support bounds -----------

void criteria_6_7(const std::vector<BuiltPair>& built) {
    double invol = 0.0, base = 0.0, support = 0.0, example_support = 0.0;
    bool first = true;
    for (const auto& bp : built) {
        // generic nilpotent coefficients fill the whole spectral-width window;
        // the example's isotropic block stays within the adjoint height [-3,0]
        int cap = bp.spec.support_cap();
        for (const FrameField* f : {&bp.compact, &bp.noncompact}) {
            CartanEmbedded emb = cartan_embed(*f, 16, 1e-9);
            invol = std::max(invol, emb.involution_residual);
            base = std::max(base, emb.base_residual);
            for (size_t i = 0; i < f->minus_frames.size(); ++i) {
                if (!f->ok[i]) continue;
                support = std::max(support, f->minus_frames[i].tail_norm(-cap, 0));
                if (first)
                    example_support =
                        std::max(example_support, f->minus_frames[i].tail_norm(-3, 0));
            }
        }
        first = false;
    }
    report(6, "symmetric-space embedding", invol < 1e-9 && base == 0.0,
           "involution residual " + fmt(invol) + " (tol 1e-9), base value exact (" + fmt(base) +
               ")");
    report(7, "minus-factor support bound", support < 1e-11 && example_support < 1e-11,
           "tail beyond the spectral-width window: " + fmt(support) +
               ", example beyond [-3,0]: " + fmt(example_support) + " (tol 1e-11)");
}

// --- criterion 8: extended-solution laws --------------------------------------

void criterion_8() {
    std::vector<PotentialSpec> pots{willmore::example_potential(), random_potential(0.25),
                                    random_potential(0.25)};
    double based = 0.0, ode = 0.0;
    auto lams = circle_samples();
    for (auto& p : pots) {
        double h = 1e-3;
        Grid grid{Cplx(0.27, 0.18), h, h};
        FrameField ff = build_frame(p, grid, FrameKind::NonCompact, 16, 1e-9);
        ExtendedSolutionField es = extended_solution(ff, willmore::xi_adapted());
        based = std::max(based, es.based_residual);
        ExtendedLawsResult laws = extended_solution_laws(es.phi, h, lams);
        based = std::max(based, laws.based);
        ode = std::max(ode, laws.ode);
    }
    report(8, "extended-solution laws", based < 1e-12 && ode < 5e-6,
           "basing residual " + fmt(based) + " (tol 1e-12), ODE residual " + fmt(ode) +
               " (tol 5e-6, spacing 1e-3)");
}

}  // namespace

int main() {
    FrameField ff = criterion_1();
    criterion_2(ff);
    std::vector<BuiltPair> built = criterion_3();
    criterion_4();
    criterion_5();
    criteria_6_7(built);
    criterion_8();
    if (failures) std::printf("ACCEPTANCE: %d criterion(s) failed\n", failures);
    else std::printf("ACCEPTANCE: all 8 criteria passed\n");
    return failures == 0 ? 0 : 1;
}
