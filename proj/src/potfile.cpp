#include "dpw/potfile.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>

namespace dpw {

namespace {

std::string fmt15(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

}  // namespace

std::string format_complex(Cplx v) {
    if (v.imag() == 0.0) return fmt15(v.real());
    if (v.real() == 0.0) return fmt15(v.imag()) + "i";
    return fmt15(v.real()) + (v.imag() < 0.0 ? "-" : "+") + fmt15(std::abs(v.imag())) + "i";
}

Cplx parse_complex(const std::string& token, int line, int column) {
    const char* p = token.c_str();
    auto bad = [&]() -> ParseError {
        return ParseError(line, column, "malformed complex literal '" + token + "'");
    };
    auto read_part = [&](bool& imag) -> double {
        imag = false;
        if (*p == 'i' || ((*p == '+' || *p == '-') && p[1] == 'i')) {
            double s = (*p == '-') ? -1.0 : 1.0;
            p += (*p == 'i') ? 1 : 2;
            imag = true;
            return s;
        }
        char* end = nullptr;
        double v = std::strtod(p, &end);
        if (end == p) throw bad();
        p = end;
        if (*p == 'i') {
            imag = true;
            ++p;
        }
        return v;
    };
    bool im1 = false;
    double a = read_part(im1);
    if (*p == '\0') return im1 ? Cplx(0.0, a) : Cplx(a, 0.0);
    if (im1 || (*p != '+' && *p != '-')) throw bad();
    bool im2 = false;
    double b = read_part(im2);
    if (!im2 || *p != '\0') throw bad();
    return Cplx(a, b);
}

namespace {

struct Token {
    std::string text;
    int line = 0;
    int column = 0;
};

using TokenLine = std::vector<Token>;

std::vector<TokenLine> tokenize(const std::string& text) {
    std::vector<TokenLine> out;
    std::istringstream is(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        TokenLine tl;
        size_t i = 0;
        while (i < raw.size()) {
            if (std::isspace(static_cast<unsigned char>(raw[i]))) { ++i; continue; }
            if (raw[i] == '#') break;
            size_t j = i;
            while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
            tl.push_back({raw.substr(i, j - i), lineno, static_cast<int>(i) + 1});
            i = j;
        }
        if (!tl.empty()) out.push_back(std::move(tl));
    }
    return out;
}

double to_double(const Token& t) {
    char* end = nullptr;
    double v = std::strtod(t.text.c_str(), &end);
    if (end != t.text.c_str() + t.text.size())
        throw ParseError(t.line, t.column, "expected a number, got '" + t.text + "'");
    return v;
}

int to_int(const Token& t) {
    double v = to_double(t);
    int i = static_cast<int>(std::lround(v));
    if (v != i) throw ParseError(t.line, t.column, "expected an integer, got '" + t.text + "'");
    return i;
}

Cplx to_complex(const Token& t) { return parse_complex(t.text, t.line, t.column); }

void need(const TokenLine& tl, size_t count, const char* what) {
    if (tl.size() < count)
        throw ParseError(tl[0].line, tl[0].column,
                         std::string("'") + tl[0].text + "' line needs " + what);
}

// shared loop-block reader: cursor sits after the header line; consumes up to
// and including the given terminator line
LaurentMatrix read_loop_block(const std::vector<TokenLine>& lines, size_t& cur, int dim,
                              const std::string& terminator) {
    LaurentMatrix g(dim);
    CMat acc;
    int cur_k = 0;
    bool have_k = false;
    auto flush = [&]() {
        if (have_k) g.add_coeff(cur_k, acc);
    };
    for (; cur < lines.size(); ++cur) {
        const TokenLine& tl = lines[cur];
        const std::string& key = tl[0].text;
        if (key == terminator) {
            flush();
            ++cur;
            return g;
        }
        if (key == "coeff") {
            need(tl, 2, "an exponent");
            flush();
            cur_k = to_int(tl[1]);
            acc = CMat::Zero(dim, dim);
            have_k = true;
        } else if (key == "row") {
            need(tl, static_cast<size_t>(dim) + 2, "row index and dim values");
            if (!have_k) throw ParseError(tl[0].line, tl[0].column, "'row' before 'coeff'");
            int r = to_int(tl[1]);
            if (r < 0 || r >= dim) throw ParseError(tl[1].line, tl[1].column, "row out of range");
            for (int c = 0; c < dim; ++c) acc(r, c) = to_complex(tl[2 + c]);
        } else {
            throw ParseError(tl[0].line, tl[0].column, "unexpected key '" + key + "' in loop block");
        }
    }
    throw ParseError(lines.back()[0].line, 1, "missing '" + terminator + "'");
}

void write_loop_block(std::ostream& os, const LaurentMatrix& g, const std::string& terminator) {
    for (const auto& [k, m] : g.coeffs()) {
        os << "coeff " << k << "\n";
        for (int r = 0; r < g.dim(); ++r) {
            os << "row " << r;
            for (int c = 0; c < g.dim(); ++c) os << " " << format_complex(m(r, c));
            os << "\n";
        }
    }
    os << terminator << "\n";
}

GroupContext make_context(const Token& fam, int dim, const std::vector<Cplx>& hdiag,
                          const Token& where) {
    CMat h = CMat::Identity(dim, dim);
    if (!hdiag.empty()) {
        if (static_cast<int>(hdiag.size()) != dim)
            throw ParseError(where.line, where.column, "h diagonal length != dim");
        for (int i = 0; i < dim; ++i) h(i, i) = hdiag[i];
    }
    if (fam.text == "so_lorentz") return GroupContext::so_lorentz(dim, h);
    if (fam.text == "so_compact") return GroupContext::so_compact(dim).with_h(h);
    if (fam.text == "su") return GroupContext::su(dim, h);
    throw ParseError(fam.line, fam.column, "unknown group family '" + fam.text + "'");
}

}  // namespace

ParsedPotential parse_potential_text(const std::string& text, const std::string& name) {
    auto lines = tokenize(text);
    if (lines.empty()) throw ParseError(1, 1, name + ": empty potential file");

    std::optional<Token> family;
    int dim = 0;
    std::vector<Cplx> hdiag;
    Cplx z0(0.0, 0.0);
    PotentialMode mode = PotentialMode::Normalized;
    std::vector<int> canonical_idx;
    std::vector<std::tuple<int, int, Cplx>> xi_entries;
    struct CoeffBlock {
        int j;
        std::vector<std::tuple<int, int, RationalFn>> entries;
    };
    std::vector<CoeffBlock> blocks;
    ParsedPotential out;

    for (size_t cur = 0; cur < lines.size(); ++cur) {
        const TokenLine& tl = lines[cur];
        const std::string& key = tl[0].text;
        if (key == "group") {
            need(tl, 3, "family and dimension");
            family = tl[1];
            dim = to_int(tl[2]);
            if (dim < 2) throw ParseError(tl[2].line, tl[2].column, "dimension too small");
        } else if (key == "h") {
            need(tl, 2, "diagonal values");
            hdiag.clear();
            for (size_t i = 1; i < tl.size(); ++i) hdiag.push_back(to_complex(tl[i]));
        } else if (key == "basepoint") {
            need(tl, 3, "re and im");
            z0 = Cplx(to_double(tl[1]), to_double(tl[2]));
        } else if (key == "mode") {
            need(tl, 2, "normalized|extended");
            if (tl[1].text == "normalized") mode = PotentialMode::Normalized;
            else if (tl[1].text == "extended") mode = PotentialMode::ExtendedSolution;
            else throw ParseError(tl[1].line, tl[1].column, "unknown mode '" + tl[1].text + "'");
        } else if (key == "canonical") {
            need(tl, 2, "index values");
            for (size_t i = 1; i < tl.size(); ++i) canonical_idx.push_back(to_int(tl[i]));
        } else if (key == "xi") {
            need(tl, 4, "row col value");
            xi_entries.emplace_back(to_int(tl[1]), to_int(tl[2]), to_complex(tl[3]));
        } else if (key == "coeff") {
            need(tl, 2, "a lambda power");
            blocks.push_back({to_int(tl[1]), {}});
        } else if (key == "entry") {
            if (blocks.empty())
                throw ParseError(tl[0].line, tl[0].column, "'entry' before any 'coeff'");
            need(tl, 6, "row col num ... den ...");
            int r = to_int(tl[1]), c = to_int(tl[2]);
            if (tl[3].text != "num")
                throw ParseError(tl[3].line, tl[3].column, "expected 'num'");
            size_t i = 4;
            std::vector<Cplx> num, den;
            while (i < tl.size() && tl[i].text != "den") num.push_back(to_complex(tl[i++]));
            if (i >= tl.size() || tl[i].text != "den")
                throw ParseError(tl[0].line, tl[0].column, "missing 'den' section");
            ++i;
            while (i < tl.size()) den.push_back(to_complex(tl[i++]));
            if (den.empty()) throw ParseError(tl[0].line, tl[0].column, "empty denominator");
            blocks.back().entries.emplace_back(
                r, c, RationalFn(Polynomial(std::move(num)), Polynomial(std::move(den))));
        } else if (key == "grid") {
            need(tl, 5, "center_re center_im radius spacing");
            out.grid.center = Cplx(to_double(tl[1]), to_double(tl[2]));
            out.grid.radius = to_double(tl[3]);
            out.grid.spacing = to_double(tl[4]);
            if (out.grid.radius <= 0 || out.grid.spacing <= 0)
                throw ParseError(tl[3].line, tl[3].column, "radius and spacing must be positive");
            out.has_grid = true;
        } else if (key == "lambda") {
            need(tl, 2, "angles in degrees");
            for (size_t i = 1; i < tl.size(); ++i) out.lambda_deg.push_back(to_double(tl[i]));
        } else {
            throw ParseError(tl[0].line, tl[0].column, "unknown key '" + key + "'");
        }
    }

    if (!family) throw ParseError(1, 1, name + ": missing 'group' line");
    out.spec.ctx = make_context(*family, dim, hdiag, *family);
    out.spec.z0 = z0;
    out.spec.mode = mode;
    for (const auto& b : blocks) {
        RationalMatrix m(dim, dim);
        for (const auto& [r, c, f] : b.entries) {
            if (r < 0 || r >= dim || c < 0 || c >= dim)
                throw ParseError(family->line, family->column, "entry index out of range");
            m.at(r, c) = f;
        }
        out.spec.coefficients.emplace_back(b.j, std::move(m));
    }

    if (!canonical_idx.empty() && !xi_entries.empty())
        throw ParseError(family->line, family->column, "give either 'canonical' or 'xi', not both");
    if (!canonical_idx.empty()) {
        CartanData cd = cartan_data(out.spec.ctx);
        CMat xi = CMat::Zero(dim, dim);
        for (int idx : canonical_idx) {
            if (idx < 1 || idx > cd.rank())
                throw ParseError(family->line, family->column, "canonical index out of range");
            xi += cd.dual_basis[idx - 1];
        }
        CanonicalElement ce = grading(xi, cd);
        ce.index_set = canonical_idx;
        out.spec.ce = std::move(ce);
    } else if (!xi_entries.empty()) {
        CMat xi = CMat::Zero(dim, dim);
        for (const auto& [r, c, v] : xi_entries) {
            if (r < 0 || r >= dim || c < 0 || c >= dim)
                throw ParseError(family->line, family->column, "xi index out of range");
            xi(r, c) = v;
        }
        out.spec.ce = grading(xi, cartan_data(out.spec.ctx));
    }
    return out;
}

ParsedPotential read_potential_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError(0, 0, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_potential_text(buf.str(), path);
}

namespace {

std::string family_name(const GroupContext& ctx) {
    if (ctx.family == Family::SpecialLinear) return "su";
    return ctx.natively_compact ? "so_compact" : "so_lorentz";
}

void render_context(std::ostream& os, const GroupContext& ctx) {
    os << "group " << family_name(ctx) << " " << ctx.dim << "\n";
    os << "h";
    for (int i = 0; i < ctx.dim; ++i) os << " " << format_complex(ctx.h(i, i));
    os << "\n";
}

void render_poly(std::ostream& os, const Polynomial& p) {
    if (p.is_zero()) {
        os << " 0";
        return;
    }
    for (int k = 0; k <= p.degree(); ++k) os << " " << format_complex(p.coeff(k));
}

}  // namespace

std::string render_potential(const ParsedPotential& p) {
    std::ostringstream os;
    render_context(os, p.spec.ctx);
    os << "basepoint " << fmt15(p.spec.z0.real()) << " " << fmt15(p.spec.z0.imag()) << "\n";
    os << "mode " << (p.spec.mode == PotentialMode::Normalized ? "normalized" : "extended")
       << "\n";
    if (p.spec.ce) {
        if (!p.spec.ce->index_set.empty()) {
            os << "canonical";
            for (int i : p.spec.ce->index_set) os << " " << i;
            os << "\n";
        } else {
            const CMat& xi = p.spec.ce->xi;
            for (int r = 0; r < xi.rows(); ++r)
                for (int c = 0; c < xi.cols(); ++c)
                    if (xi(r, c) != Cplx(0.0))
                        os << "xi " << r << " " << c << " " << format_complex(xi(r, c)) << "\n";
        }
    }
    for (const auto& [j, m] : p.spec.coefficients) {
        os << "coeff " << j << "\n";
        for (int r = 0; r < m.rows(); ++r)
            for (int c = 0; c < m.cols(); ++c) {
                const RationalFn& f = m.at(r, c);
                if (f.is_zero()) continue;
                os << "entry " << r << " " << c << " num";
                render_poly(os, f.num());
                os << " den";
                render_poly(os, f.den());
                os << "\n";
            }
    }
    if (p.has_grid)
        os << "grid " << fmt15(p.grid.center.real()) << " " << fmt15(p.grid.center.imag()) << " "
           << fmt15(p.grid.radius) << " " << fmt15(p.grid.spacing) << "\n";
    if (!p.lambda_deg.empty()) {
        os << "lambda";
        for (double a : p.lambda_deg) os << " " << fmt15(a);
        os << "\n";
    }
    return os.str();
}

void write_loop_file(std::ostream& os, const LaurentMatrix& g, const GroupContext* ctx) {
    os << "loop\n";
    os << "dim " << g.dim() << "\n";
    if (ctx) render_context(os, *ctx);
    write_loop_block(os, g, "endloop");
}

ParsedLoop parse_loop_text(const std::string& text, const std::string& name) {
    auto lines = tokenize(text);
    if (lines.empty()) throw ParseError(1, 1, name + ": empty loop file");
    ParsedLoop out;
    size_t cur = 0;
    if (lines[cur][0].text != "loop")
        throw ParseError(lines[0][0].line, lines[0][0].column, "expected 'loop' header");
    ++cur;
    int dim = 0;
    std::optional<Token> family;
    std::vector<Cplx> hdiag;
    for (; cur < lines.size(); ++cur) {
        const TokenLine& tl = lines[cur];
        if (tl[0].text == "dim") {
            need(tl, 2, "a dimension");
            dim = to_int(tl[1]);
        } else if (tl[0].text == "group") {
            need(tl, 3, "family and dimension");
            family = tl[1];
        } else if (tl[0].text == "h") {
            hdiag.clear();
            for (size_t i = 1; i < tl.size(); ++i) hdiag.push_back(to_complex(tl[i]));
        } else {
            break;
        }
    }
    if (dim <= 0) throw ParseError(lines[0][0].line, 1, "missing 'dim' line");
    out.loop = read_loop_block(lines, cur, dim, "endloop");
    if (family) out.ctx = make_context(*family, dim, hdiag, *family);
    return out;
}

ParsedLoop read_loop_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError(0, 0, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_loop_text(buf.str(), path);
}

void write_frame_field(std::ostream& os, const FrameFieldFile& f) {
    os << "framefield\n";
    os << "which " << (f.which == FrameKind::Compact ? "compact" : "noncompact") << "\n";
    os << "potential\n" << render_potential(f.potential) << "endpotential\n";
    const int side = f.field.grid.side();
    for (int iy = 0; iy < side; ++iy)
        for (int ix = 0; ix < side; ++ix) {
            int idx = f.field.grid.index(ix, iy);
            if (f.field.ok[idx]) {
                os << "point " << ix << " " << iy << " ok\n";
                os << "frame\n";
                write_loop_block(os, f.field.frames[idx], "endframe");
                os << "minus\n";
                write_loop_block(os, f.field.minus_frames[idx], "endminus");
            } else {
                os << "point " << ix << " " << iy << " fail " << f.field.failure[idx] << "\n";
            }
        }
    os << "endframefield\n";
}

FrameFieldFile read_frame_field(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError(0, 0, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << is.rdbuf();
    auto lines = tokenize(buf.str());
    if (lines.empty() || lines[0][0].text != "framefield")
        throw ParseError(1, 1, path + ": expected 'framefield' header");

    FrameFieldFile out;
    size_t cur = 1;
    if (cur < lines.size() && lines[cur][0].text == "which") {
        need(lines[cur], 2, "compact|noncompact");
        out.which =
            lines[cur][1].text == "compact" ? FrameKind::Compact : FrameKind::NonCompact;
        ++cur;
    }
    if (cur >= lines.size() || lines[cur][0].text != "potential")
        throw ParseError(lines[std::min(cur, lines.size() - 1)][0].line, 1,
                         "expected 'potential' block");
    ++cur;
    // slice the embedded potential block back into text
    std::ostringstream pot;
    for (; cur < lines.size() && lines[cur][0].text != "endpotential"; ++cur) {
        for (const auto& t : lines[cur]) pot << t.text << " ";
        pot << "\n";
    }
    if (cur >= lines.size()) throw ParseError(lines.back()[0].line, 1, "missing 'endpotential'");
    ++cur;
    out.potential = parse_potential_text(pot.str(), path);
    if (!out.potential.has_grid)
        throw ParseError(lines[0][0].line, 1, "frame field needs a grid block");

    FrameField& ff = out.field;
    const PotentialSpec& spec = out.potential.spec;
    ff.ctx = (out.which == FrameKind::Compact && !spec.ctx.compact_form) ? compact_dual(spec.ctx)
                                                                         : spec.ctx;
    ff.grid = out.potential.grid;
    ff.z0 = spec.z0;
    const int dim = spec.ctx.dim;
    ff.frames.assign(ff.grid.size(), LaurentMatrix(dim));
    ff.minus_frames.assign(ff.grid.size(), LaurentMatrix(dim));
    ff.ok.assign(ff.grid.size(), false);
    ff.failure.assign(ff.grid.size(), "");
    const int side = ff.grid.side();

    while (cur < lines.size() && lines[cur][0].text != "endframefield") {
        const TokenLine& tl = lines[cur];
        if (tl[0].text != "point")
            throw ParseError(tl[0].line, tl[0].column, "expected 'point' or 'endframefield'");
        need(tl, 4, "ix iy ok|fail");
        int ix = to_int(tl[1]), iy = to_int(tl[2]);
        if (ix < 0 || ix >= side || iy < 0 || iy >= side)
            throw ParseError(tl[1].line, tl[1].column, "point index outside the grid");
        int idx = ff.grid.index(ix, iy);
        if (tl[3].text == "ok") {
            ++cur;
            if (cur >= lines.size() || lines[cur][0].text != "frame")
                throw ParseError(tl[0].line, 1, "expected 'frame' block");
            ++cur;
            ff.frames[idx] = read_loop_block(lines, cur, dim, "endframe");
            if (cur >= lines.size() || lines[cur][0].text != "minus")
                throw ParseError(tl[0].line, 1, "expected 'minus' block");
            ++cur;
            ff.minus_frames[idx] = read_loop_block(lines, cur, dim, "endminus");
            ff.ok[idx] = true;
        } else {
            std::string msg;
            for (size_t i = 4; i < tl.size(); ++i) msg += (i > 4 ? " " : "") + tl[i].text;
            ff.failure[idx] = msg;
            ++cur;
        }
        if (std::abs(ff.grid.point(ix, iy) - ff.z0) < 1e-13) ff.base_index = idx;
    }
    if (cur >= lines.size()) throw ParseError(lines.back()[0].line, 1, "missing 'endframefield'");
    return out;
}

}  // namespace dpw
