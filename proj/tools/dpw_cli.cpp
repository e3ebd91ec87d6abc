// Command-line front end: potential ingestion, pipeline orchestration,
// verification reports, factorization, and the closed-form surface demo.
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dpw/potfile.hpp"
#include "dpw/verify.hpp"
#include "dpw/willmore.hpp"

namespace fs = std::filesystem;
using namespace dpw;

namespace {

std::string fmt15(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

std::vector<Cplx> lambdas_from_degrees(const std::vector<double>& deg) {
    std::vector<Cplx> out;
    for (double a : deg) out.push_back(std::polar(1.0, a * M_PI / 180.0));
    if (out.empty()) out.push_back(Cplx(1.0));
    return out;
}

void print_header(const std::string& cmd, double tol, int trunc) {
    std::cout << "# command=" << cmd << " tol=" << fmt15(tol) << " trunc=" << trunc << "\n";
}

int cmd_canonical(const std::string& family, int dim) {
    GroupContext ctx = family == "su" ? GroupContext::su(dim, CMat::Identity(dim, dim))
                                      : GroupContext::so_compact(dim);
    CartanData cd = cartan_data(ctx);
    std::cout << "# canonical elements of " << ctx.name << " (rank " << cd.rank() << ")\n";
    std::cout << "index_set  height  grade_dims  dim_u0  dim_u0_T\n";
    for (const auto& ce : enumerate_canonical(cd)) {
        std::string idx;
        for (int i : ce.index_set) idx += (idx.empty() ? "" : ",") + std::to_string(i);
        U0Spaces u = u0_spaces(ce);
        std::string dims;
        for (int j = 0; j <= ce.height; ++j) {
            auto it = ce.grading.find(j);
            int d = it == ce.grading.end() ? 0 : static_cast<int>(it->second.size());
            dims += (j ? "," : "") + std::to_string(d);
        }
        std::cout << "{" << idx << "}  " << ce.height << "  [" << dims << "]  " << u.dim_full
                  << "  " << u.dim_t << "\n";
    }
    return 0;
}

void write_map_csv(const fs::path& path, const FrameField& ff, const std::vector<Cplx>& lams) {
    std::ofstream os(path);
    os << "z_re,z_im,lambda_arg";
    for (int r = 0; r < ff.ctx.dim; ++r)
        for (int c = 0; c < ff.ctx.dim; ++c) os << ",f" << r << c << "_re,f" << r << c << "_im";
    os << "\n";
    const int side = ff.grid.side();
    for (int iy = 0; iy < side; ++iy)
        for (int ix = 0; ix < side; ++ix) {
            int idx = ff.grid.index(ix, iy);
            if (!ff.ok[idx] || !ff.grid.inside_disc(ix, iy)) continue;
            LaurentMatrix finv = linv_truncated(ff.frames[idx], default_trunc(ff.frames[idx]),
                                                1e-8);
            LaurentMatrix emb = ff.frames[idx] * ff.ctx.h * finv;
            Cplx z = ff.grid.point(ix, iy);
            for (auto lam : lams) {
                CMat m = emb.eval(lam);
                os << fmt15(z.real()) << "," << fmt15(z.imag()) << ","
                   << fmt15(std::arg(lam));
                for (int r = 0; r < ff.ctx.dim; ++r)
                    for (int c = 0; c < ff.ctx.dim; ++c)
                        os << "," << fmt15(m(r, c).real()) << "," << fmt15(m(r, c).imag());
                os << "\n";
            }
        }
}

int build_one(const ParsedPotential& pot, FrameKind which, const fs::path& outdir, int trunc,
              double tol) {
    FrameFieldFile ff;
    ff.potential = pot;
    ff.which = which;
    ff.field = build_frame(pot.spec, pot.grid, which, trunc, tol);
    std::string tag = which == FrameKind::Compact ? "compact" : "noncompact";
    {
        std::ofstream os(outdir / ("frames_" + tag + ".txt"));
        write_frame_field(os, ff);
    }
    write_map_csv(outdir / ("map_" + tag + ".csv"), ff.field,
                  lambdas_from_degrees(pot.lambda_deg));
    int failed = 0, total = 0;
    const int side = ff.field.grid.side();
    for (int iy = 0; iy < side; ++iy)
        for (int ix = 0; ix < side; ++ix)
            if (ff.field.grid.inside_disc(ix, iy)) {
                ++total;
                if (!ff.field.ok[ff.field.grid.index(ix, iy)]) ++failed;
            }
    std::cout << tag << ".points=" << total << "\n" << tag << ".failed=" << failed << "\n";
    return failed;
}

int cmd_build(const std::string& potfile, const std::string& which, const std::string& out,
              int trunc, double tol) {
    ParsedPotential pot = read_potential_file(potfile);
    if (!pot.has_grid) {
        std::cerr << "error: potential file has no grid block\n";
        return 2;
    }
    fs::create_directories(out);
    print_header("build", tol, trunc);
    PotentialReport rep = validate_potential(pot.spec);
    std::cout << "potential.grading_residual=" << fmt15(rep.grading_residual) << "\n";
    std::cout << "potential.nilpotency_index=" << rep.nilpotency_index << "\n";
    int failed = 0;
    if (which == "compact" || which == "both")
        failed += build_one(pot, FrameKind::Compact, out, trunc, tol);
    if (which == "noncompact" || which == "both")
        failed += build_one(pot, FrameKind::NonCompact, out, trunc, tol);
    return failed == 0 ? 0 : 1;
}

int cmd_verify(const std::string& framefile, double tol, int trunc) {
    FrameFieldFile ff = read_frame_field(framefile);
    const FrameField& f = ff.field;
    const PotentialSpec& spec = ff.potential.spec;
    print_header("verify", tol, trunc);

    VerificationReport rep;
    PotentialReport pr = validate_potential(spec);
    rep.add("potential.grading", pr.grading_residual, spec.z0, 1e-8);
    rep.add("potential.nilpotency", pr.nilpotency_residual, spec.z0, 1e-8);

    // frame values: real form, twisted, support bound on the minus factors
    double reality = 0.0, twisted = 0.0, support = 0.0;
    Cplx worst(0.0);
    const int side = f.grid.side();
    const int cap = spec.support_cap();
    for (int iy = 0; iy < side; ++iy)
        for (int ix = 0; ix < side; ++ix) {
            int idx = f.grid.index(ix, iy);
            if (!f.ok[idx] || !f.grid.inside_disc(ix, iy)) continue;
            double r = loop_reality_residual(f.frames[idx], f.ctx, 8);
            if (r > reality) { reality = r; worst = f.grid.point(ix, iy); }
            twisted = std::max(twisted, check_twisted(f.frames[idx], f.ctx, 8));
            support = std::max(support, f.minus_frames[idx].tail_norm(-cap, 0));
        }
    rep.add("frames.reality", reality, worst, 1e-7);
    rep.add("frames.twisted", twisted, worst, 1e-7);
    rep.add("frames.support_bound", support, worst, 1e-11,
            "lambda-support of F- within [-" + std::to_string(cap) + ",0]");

    CartanEmbedded emb = cartan_embed(f, trunc, tol);
    rep.add("embedding.involution", emb.involution_residual, spec.z0, 1e-9);
    rep.add("embedding.base", emb.base_residual, spec.z0, 1e-12, "exact F(z0)=h");

    if (spec.ce) {
        ExpPiReport pi = exp_pi_check(spec.ce->xi, f.ctx.h);
        if (pi.exact < 1e-9) {
            ExtendedSolutionField es = extended_solution(f, spec.ce->xi);
            rep.add("extended.based", es.based_residual, spec.z0, 1e-12, "exact phi(1)=e");
            rep.add("extended.t_invariance", es.t_invariance, spec.z0, 1e-7);
        }
    }

    // local fine-spacing laws at a probe off the base point
    Cplx probe = spec.z0 + Cplx(0.31, 0.22);
    std::vector<Cplx> lams{Cplx(0, 1), Cplx(-1, 0), std::polar(1.0, 0.77)};
    FrameKind which = ff.which;
    RichardsonResult rich = harmonicity_richardson(spec, probe, 1e-3, which, lams, trunc, tol);
    rep.add("harmonicity.structure", rich.fine.structure, probe, 2e-5);
    rep.add("harmonicity.flatness", rich.fine.flatness, probe, 2e-5);
    rep.add("harmonicity.richardson", rich.ratio >= 3.5 ? 0.0 : 3.5 - rich.ratio, probe, 1.0,
            "decay ratio " + fmt15(rich.ratio));

    std::cout << rep.render() << "\n" << rep.render_kv();
    return rep.all_pass() ? 0 : 1;
}

int cmd_factor(const std::string& loopfile, const std::string& mode, int trunc, double tol) {
    ParsedLoop pl = read_loop_file(loopfile);
    print_header("factor", tol, trunc);
    int t = trunc > 0 ? trunc : default_trunc(pl.loop);
    if (mode == "birkhoff") {
        GroupContext ctx = pl.ctx ? *pl.ctx
                                  : GroupContext::so_compact(pl.loop.dim());
        BirkhoffResult b = birkhoff(pl.loop, ctx, t, tol);
        std::cout << "residual=" << fmt15(b.residual) << "\n";
        std::cout << "minus\n";
        write_loop_file(std::cout, b.minus.trimmed(1e-14));
        std::cout << "plus\n";
        write_loop_file(std::cout, b.plus.trimmed(1e-14));
        return 0;
    }
    if (mode == "iwasawa") {
        if (!pl.ctx) {
            std::cerr << "error: iwasawa factorization needs 'group'/'h' lines in the loop file\n";
            return 2;
        }
        IwasawaResult iw = iwasawa(pl.loop, *pl.ctx, t, tol);
        std::cout << "residual=" << fmt15(iw.residual) << "\n";
        std::cout << "constancy=" << fmt15(iw.constancy) << "\n";
        std::cout << "unitary\n";
        write_loop_file(std::cout, iw.unitary.trimmed(1e-14), &*pl.ctx);
        std::cout << "plus\n";
        write_loop_file(std::cout, iw.plus.trimmed(1e-14));
        return 0;
    }
    std::cerr << "error: unknown factor mode '" << mode << "'\n";
    return 2;
}

int cmd_willmore_demo(const std::string& out, Cplx center, double radius, double spacing,
                      const std::vector<double>& lambda_deg, int trunc, double tol, bool obj,
                      const std::vector<int>& obj_axes) {
    print_header("willmore-demo", tol, trunc);
    PotentialSpec spec = willmore::example_potential();
    Grid grid{center, radius, spacing};
    std::vector<Cplx> lams = lambdas_from_degrees(
        lambda_deg.empty() ? std::vector<double>{0.0, 90.0, 180.0} : lambda_deg);

    FrameField ff = build_frame(spec, grid, FrameKind::NonCompact, trunc, tol);

    fs::create_directories(out);
    std::ofstream csv(fs::path(out) / "willmore_samples.csv");
    csv << "z_re,z_im,lambda_arg,x1,x2,x3,x4,x5,x6,x7\n";

    double max_dev = 0.0;
    Cplx worst(0.0);
    int boundary = 0, total = 0;
    const int side = grid.side();
    for (int iy = 0; iy < side; ++iy)
        for (int ix = 0; ix < side; ++ix) {
            if (!grid.inside_disc(ix, iy)) continue;
            ++total;
            int idx = grid.index(ix, iy);
            Cplx z = grid.point(ix, iy);
            if (!ff.ok[idx]) { ++boundary; continue; }
            for (auto lam : lams) {
                WillmoreSample s = closed_form_x(z, lam);
                csv << fmt15(z.real()) << "," << fmt15(z.imag()) << "," << fmt15(std::arg(lam));
                for (int k = 0; k < 7; ++k) csv << "," << fmt15(s.x(k));
                csv << "\n";
                Eigen::MatrixXd p1 = frame_4plane(ff.frames[idx], lam);
                Eigen::MatrixXd p2 = conformal_gauss_4plane(
                    [lam](Cplx zz) { return closed_form_x(zz, lam); }, z);
                double d = plane_deviation(p1, p2);
                if (d > max_dev) { max_dev = d; worst = z; }
            }
        }

    if (obj) {
        // triangulated lambda=1 image in the chosen coordinate projection
        std::ofstream objs(fs::path(out) / "willmore.obj");
        objs << "# projection axes x" << obj_axes[0] << " x" << obj_axes[1] << " x"
             << obj_axes[2] << "\n";
        std::vector<int> vid(grid.size(), 0);
        int next = 1;
        for (int iy = 0; iy < side; ++iy)
            for (int ix = 0; ix < side; ++ix) {
                if (!grid.inside_disc(ix, iy)) continue;
                WillmoreSample s = closed_form_x(grid.point(ix, iy), 1.0);
                objs << "v " << fmt15(s.x(obj_axes[0] - 1)) << " " << fmt15(s.x(obj_axes[1] - 1))
                     << " " << fmt15(s.x(obj_axes[2] - 1)) << "\n";
                vid[grid.index(ix, iy)] = next++;
            }
        for (int iy = 0; iy + 1 < side; ++iy)
            for (int ix = 0; ix + 1 < side; ++ix) {
                int a = vid[grid.index(ix, iy)], b = vid[grid.index(ix + 1, iy)];
                int c = vid[grid.index(ix + 1, iy + 1)], d = vid[grid.index(ix, iy + 1)];
                if (a && b && c) objs << "f " << a << " " << b << " " << c << "\n";
                if (a && c && d) objs << "f " << a << " " << c << " " << d << "\n";
            }
    }

    std::cout << "points=" << total << "\n";
    std::cout << "iwasawa_boundary_points=" << boundary << "\n";
    std::cout << "max_plane_deviation=" << fmt15(max_dev) << " at z=(" << fmt15(worst.real())
              << "," << fmt15(worst.imag()) << ")\n";
    bool pass = max_dev < 1e-5 && boundary == 0;
    std::cout << (pass ? "max_plane_deviation < 1e-5\nPASS\n" : "FAIL\n");
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"loop-group factorization pipeline for finite-uniton harmonic maps"};
    app.require_subcommand(1);

    double tol = 1e-9;
    int trunc = 12;
    unsigned seed = 12345;
    app.add_option("--tol", tol, "numerical tolerance override");
    app.add_option("--trunc", trunc, "loop truncation degree");
    app.add_option("--seed", seed, "seed for randomized checks");

    auto* canonical = app.add_subcommand("canonical", "canonical-element table for a group");
    std::string family = "so_compact";
    int dim = 8;
    canonical->add_option("family", family, "so_compact|su")->required();
    canonical->add_option("dim", dim, "matrix dimension")->required();

    auto* build = app.add_subcommand("build", "build frame fields from a potential file");
    std::string potfile, which = "both", out = ".";
    build->add_option("potential", potfile, "potential file")->required();
    build->add_option("--which", which, "compact|noncompact|both");
    build->add_option("--out", out, "output directory");

    auto* verify = app.add_subcommand("verify", "verification suite on a saved frame field");
    std::string framefile;
    verify->add_option("framefield", framefile, "frame-field file")->required();

    auto* factor = app.add_subcommand("factor", "factor a loop from a loop file");
    std::string loopfile, mode = "birkhoff";
    factor->add_option("loop", loopfile, "loop file")->required();
    factor->add_option("--mode", mode, "birkhoff|iwasawa");

    auto* demo = app.add_subcommand("willmore-demo",
                                    "closed-form surface vs pipeline Gauss planes");
    std::vector<double> grid_center{0.0, 0.0};
    double grid_radius = 1.0, grid_spacing = 0.05;
    std::vector<double> lambda_deg;
    bool obj = false;
    std::vector<int> obj_axes{2, 3, 1};
    std::string demo_out = ".";
    demo->add_option("--grid-center", grid_center, "re im")->expected(2);
    demo->add_option("--grid-radius", grid_radius, "disc radius");
    demo->add_option("--grid-spacing", grid_spacing, "lattice spacing");
    demo->add_option("--lambda", lambda_deg, "circle angles in degrees")->delimiter(',');
    demo->add_option("--out", demo_out, "output directory");
    demo->add_flag("--obj", obj, "also write a triangulated OBJ of the lambda=1 image");
    demo->add_option("--obj-axes", obj_axes, "three coordinate indices in 1..7")->expected(3);

    CLI11_PARSE(app, argc, argv);

    try {
        if (canonical->parsed()) return cmd_canonical(family, dim);
        if (build->parsed()) return cmd_build(potfile, which, out, trunc, tol);
        if (verify->parsed()) return cmd_verify(framefile, tol, trunc);
        if (factor->parsed()) return cmd_factor(loopfile, mode, trunc, tol);
        if (demo->parsed()) {
            for (int a : obj_axes)
                if (a < 1 || a > 7) {
                    std::cerr << "error: --obj-axes entries must be in 1..7\n";
                    return 2;
                }
            return cmd_willmore_demo(demo_out, Cplx(grid_center[0], grid_center[1]), grid_radius,
                                     grid_spacing, lambda_deg, trunc, tol, obj, obj_axes);
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
