#ifndef DPW_POTFILE_HPP
#define DPW_POTFILE_HPP

#include <iosfwd>
#include <string>

#include "dpw/dpw.hpp"

namespace dpw {

/// Line-oriented key-value file formats: a human-writable potential
/// description, machine-generated loop files (exponent -> matrix rows),
/// and frame-field files (the potential block embedded for re-derivation).
/// All writers emit 15 significant digits with fixed ordering, so identical
/// inputs produce byte-identical files.

/// Fixed-format complex literal: "1.5", "-2i", "0.25+0.5i".
std::string format_complex(Cplx v);
Cplx parse_complex(const std::string& token, int line, int column);

struct ParsedPotential {
    PotentialSpec spec;
    Grid grid;
    std::vector<double> lambda_deg;  // requested circle angles, degrees
    bool has_grid = false;
};

ParsedPotential parse_potential_text(const std::string& text, const std::string& name = "<text>");
ParsedPotential read_potential_file(const std::string& path);
std::string render_potential(const ParsedPotential& p);

void write_loop_file(std::ostream& os, const LaurentMatrix& g,
                     const GroupContext* ctx = nullptr);

struct ParsedLoop {
    LaurentMatrix loop;
    std::optional<GroupContext> ctx;

    ParsedLoop() : loop(1) {}
};

ParsedLoop parse_loop_text(const std::string& text, const std::string& name = "<text>");
ParsedLoop read_loop_file(const std::string& path);

struct FrameFieldFile {
    ParsedPotential potential;
    FrameKind which = FrameKind::NonCompact;
    FrameField field;
};

void write_frame_field(std::ostream& os, const FrameFieldFile& f);
FrameFieldFile read_frame_field(const std::string& path);

}  // namespace dpw

#endif
