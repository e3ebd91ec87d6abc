#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dpw/roots.hpp"
#include "dpw/verify.hpp"
#include "dpw/willmore.hpp"

using namespace dpw;

namespace {

double max_abs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

std::vector<Cplx> circle_samples() {
    std::vector<Cplx> out;
    for (int s = 1; s < 8; ++s) out.push_back(std::polar(1.0, 2 * M_PI * s / 8.0));
    return out;
}

}  // namespace

TEST_CASE("stencil frames sit at the expected points") {
    PotentialSpec p = willmore::example_potential();
    Cplx center(0.31, 0.22);
    double h = 1e-2;
    Stencil st = stencil_frames(p, center, h, FrameKind::NonCompact);
    REQUIRE(st.f.size() == 9);
    CHECK(st.center == center);
    CHECK(st.h == h);
    auto direct = frames_at(p, {center, center + Cplx(h, 0), center + Cplx(0, -h)},
                            FrameKind::NonCompact);
    CHECK((st.at(1, 1) - direct[0]).max_coeff_norm() < 1e-12);
    CHECK((st.at(2, 1) - direct[1]).max_coeff_norm() < 1e-12);
    CHECK((st.at(1, 0) - direct[2]).max_coeff_norm() < 1e-12);
}

TEST_CASE("harmonicity of the example in both real forms") {
    PotentialSpec p = willmore::example_potential();
    Cplx center(0.31, 0.22);
    auto lams = circle_samples();
    for (FrameKind which : {FrameKind::NonCompact, FrameKind::Compact}) {
        RichardsonResult r = harmonicity_richardson(p, center, 1e-3, which, lams);
        // convergence study: the h^2 coefficient of the stencil error is ~10,
        // so the residual at h = 1e-3 sits near 1e-5
        CHECK(r.fine.max() < 2e-5);
        CHECK(r.ratio > 3.5);  // second-order decay from h to 2h
    }
}

TEST_CASE("a corrupted frame fails harmonicity") {
    PotentialSpec p = willmore::example_potential();
    Stencil st = stencil_frames(p, Cplx(0.31, 0.22), 1e-3, FrameKind::NonCompact);
    HarmonicityResult clean = harmonicity_residual(st, p.ctx, circle_samples());
    CHECK(clean.max() < 2e-5);

    CMat c0 = st.f[4].coeff(0);
    c0(2, 5) += Cplx(1e-3, 0.0);
    st.f[4].set_coeff(0, c0);
    HarmonicityResult bad = harmonicity_residual(st, p.ctx, circle_samples());
    CHECK(bad.max() > 1e-3);
    CHECK(bad.max() > 50.0 * clean.max());
}

TEST_CASE("uniton number oracles") {
    // identity loop: zero
    GroupContext g = GroupContext::so_lorentz(8, willmore::d_matrix());
    auto basis = complex_algebra_basis(g);
    CHECK(uniton_number(LaurentMatrix::identity(8), basis) == 0);

    // gamma of a grading element of height r has Ad-support exactly [-r, r]
    LaurentMatrix gam = gamma_xi_loop(willmore::xi_adapted());
    CHECK(uniton_number(gam, basis) == 3);

    CMat hsu = CMat::Identity(2, 2);
    hsu(1, 1) = -1.0;
    GroupContext s = GroupContext::su(2, hsu);
    CMat xi2(2, 2);
    xi2 << Cplx(0, 1), 0, 0, Cplx(0, -1);
    CHECK(uniton_number(gamma_xi_loop(xi2), complex_algebra_basis(s)) == 2);
}

TEST_CASE("the example extended solution has uniton number two") {
    PotentialSpec p = willmore::example_potential();

    // the minimal grading element: exactly grade-one on the whole potential,
    // with exp(pi xi) = -D (center-shifted base point)
    CMat xi = willmore::xi_invariant();
    CMat a = p.eval_sum(Cplx(0.37, -0.21));
    CHECK(max_abs(CMat(xi * a - a * xi) - Cplx(0, 1) * a) == 0.0);
    CHECK(max_abs(mat_exp(CMat(M_PI * xi)) + willmore::d_matrix()) < 1e-13);

    Grid grid{Cplx(0.0), 0.2, 0.1};
    auto basis = complex_algebra_basis(p.ctx);
    for (FrameKind which : {FrameKind::NonCompact, FrameKind::Compact}) {
        FrameField ff = build_frame(p, grid, which, 16, 1e-11);
        ExtendedSolutionField es = extended_solution(ff, xi);
        CHECK(es.based_residual < 1e-11);
        CHECK(es.t_invariance < 1e-10);
        CHECK(uniton_number(es.phi[grid.index(3, 2)], basis) == 2);
        CHECK(uniton_number(es.phi[grid.index(1, 1)], basis) == 2);
        CHECK(uniton_number(es.phi[grid.index(4, 4)], basis) == 2);
    }

    // the height-3 adapted element yields a larger (non-minimal) representative
    FrameField ff = build_frame(p, grid, FrameKind::Compact, 16, 1e-11);
    ExtendedSolutionField es = extended_solution(ff, willmore::xi_adapted());
    CHECK(uniton_number(es.phi[grid.index(3, 2)], basis) == 3);
}

TEST_CASE("extended solution laws on a stencil") {
    PotentialSpec p = willmore::example_potential();
    Cplx center(0.31, 0.22);
    double h = 1e-3;
    Grid grid{center, h, h};
    FrameField ff = build_frame(p, grid, FrameKind::NonCompact);
    ExtendedSolutionField es = extended_solution(ff, willmore::xi_adapted());
    REQUIRE(es.phi.size() == 9);

    auto lams = circle_samples();
    ExtendedLawsResult laws = extended_solution_laws(es.phi, h, lams);
    CHECK(laws.based < 1e-12);
    CHECK(laws.ode < 5e-6);

    // left shift by a constant-in-z loop with value e at lambda = 1 preserves
    // the laws (the shifted family is again an extended solution)
    LaurentMatrix shift = gamma_xi_loop(willmore::xi_adapted());
    std::vector<LaurentMatrix> shifted;
    for (auto& phi : es.phi) shifted.push_back(lmul(shift, phi));
    ExtendedLawsResult laws2 = extended_solution_laws(shifted, h, lams);
    CHECK(laws2.based < 1e-11);
    CHECK(laws2.ode < 5e-6);
}

TEST_CASE("verification report bookkeeping") {
    VerificationReport rep;
    rep.add("alpha", 1e-12, Cplx(0.0), 1e-9);
    rep.add("beta", 2.0, Cplx(0.5, 0.5), 1e-9, "deliberately failing");
    CHECK_FALSE(rep.all_pass());
    CHECK(rep.checks.at("alpha").pass);
    CHECK_FALSE(rep.checks.at("beta").pass);
    std::string kv = rep.render_kv();
    CHECK(kv.find("alpha") != std::string::npos);
    CHECK(kv.find("beta") != std::string::npos);
    rep.checks.erase("beta");
    CHECK(rep.all_pass());
}

TEST_CASE("isotropy of the example block") {
    std::vector<Cplx> probes{Cplx(0.3, 0.1), Cplx(-0.7, 0.4), Cplx(0.0), Cplx(1.2, -0.9)};
    CHECK(isotropy_check(willmore::b1_block(), willmore::i13(), probes) < 1e-12);

    // a generic block is not isotropic
    RationalMatrix m(4, 4);
    for (int r = 0; r < 4; ++r) m.at(r, r) = RationalFn(Polynomial{1.0});
    CHECK(isotropy_check(m, willmore::i13(), probes) > 0.5);
}
