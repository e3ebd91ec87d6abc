#ifndef DPW_DPW_HPP
#define DPW_DPW_HPP

#include <optional>
#include <string>
#include <vector>

#include "dpw/factor.hpp"
#include "dpw/liectx.hpp"
#include "dpw/roots.hpp"

namespace dpw {

enum class PotentialMode { Normalized, ExtendedSolution };

/// A nilpotent-valued meromorphic one-form: normalized mode is
/// eta = lambda^{-1} (sum_j A'_j(z)) dz; extended-solution mode attaches
/// A'_j to lambda^j instead.
struct PotentialSpec {
    GroupContext ctx;
    std::optional<CanonicalElement> ce;
    Cplx z0{0.0, 0.0};
    std::vector<std::pair<int, RationalMatrix>> coefficients;  // j -> A'_j(z)
    PotentialMode mode = PotentialMode::Normalized;

    /// Pointwise sum of all A'_j (the lambda^{-1} coefficient in normalized mode).
    CMat eval_sum(Cplx z) const;
    std::vector<Cplx> pole_list() const;
    int support_cap() const;  // spectral width of xi if known, else dim
};

struct PotentialReport {
    double grading_residual = 0.0;    // distance of A'_j values to g^xi_{j+1}
    double parity_residual = 0.0;     // even-grade contamination (normalized mode)
    double nilpotency_residual = 0.0; // || A(z)^m || at the forced index
    int nilpotency_index = 0;
    std::vector<Cplx> poles;
    bool ok = true;
};

/// Grading membership, parity, nilpotency and pole bookkeeping. Throws
/// GradingViolation / ParityViolation when a residual exceeds the tolerance.
PotentialReport validate_potential(const PotentialSpec& p, double tol = 1e-8);

/// Solve dF- = F- eta, F-(z0) = e along the straight path z0 -> z by
/// per-segment power-series propagation of the lambda-graded coefficients.
LaurentMatrix solve_meromorphic_frame(const PotentialSpec& p, Cplx z,
                                      const std::vector<Cplx>& waypoints = {});

/// Rectangular lattice (complete nx x ny stencil; disc mask applied by
/// comparisons downstream).
struct Grid {
    Cplx center{0.0, 0.0};
    double radius = 1.0;
    double spacing = 0.1;

    int side() const;           // points per axis
    int size() const;           // side^2
    Cplx point(int ix, int iy) const;
    bool inside_disc(int ix, int iy) const;
    int index(int ix, int iy) const { return iy * side() + ix; }
};

enum class FrameKind { Compact, NonCompact };

struct FrameField {
    GroupContext ctx;
    Grid grid;
    Cplx z0{0.0, 0.0};
    int base_index = -1;
    std::vector<LaurentMatrix> frames;       // per lattice point
    std::vector<LaurentMatrix> minus_frames; // Birkhoff minus factors (F- per point)
    std::vector<bool> ok;
    std::vector<std::string> failure;

    const LaurentMatrix& at(int ix, int iy) const { return frames[grid.index(ix, iy)]; }
};

/// Per-point F- then the Iwasawa split in the requested real form; frames are
/// based (F(z0) = e). Per-point failures are recorded, not fatal.
FrameField build_frame(const PotentialSpec& p, const Grid& grid, FrameKind which,
                       int trunc = 12, double tol = 1e-9);

/// Frames at an explicit point list (stencil evaluations for verifications).
std::vector<LaurentMatrix> frames_at(const PotentialSpec& p, const std::vector<Cplx>& pts,
                                     FrameKind which, int trunc = 12, double tol = 1e-9);

struct CartanEmbedded {
    std::vector<LaurentMatrix> maps;  // per point, 2x2-involutive loops
    double involution_residual = 0.0; // max || f^2 - e ||
    double base_residual = 0.0;       // || f(z0) - h ||
};

/// f = F h F^{-1} per point.
CartanEmbedded cartan_embed(const FrameField& f, int trunc = 16, double tol = 1e-9);

struct ExtendedSolutionField {
    std::vector<LaurentMatrix> phi;   // per point, phi(1) = e
    double based_residual = 0.0;      // max || phi(1) - e ||
    double t_invariance = 0.0;        // max || phi(-l) phi(-1)^{-1} - phi(l) ||
};

/// phi = gamma_xi(lambda) F(z, lambda) F(z, 1)^{-1}; requires exp(pi xi) = h
/// up to the central sign.
ExtendedSolutionField extended_solution(const FrameField& f, const CMat& xi_tilde);

struct RecoveredPotential {
    PotentialSpec spec;
    double fit_residual = 0.0;
};

/// Birkhoff the frames, finite-difference the minus factors, and fit the
/// lambda^{-1} coefficient entries by low-degree polynomials.
RecoveredPotential normalized_potential_of(const FrameField& f, int max_degree = 8,
                                           double tol = 1e-5);

struct MCFormReport {
    double residual = 0.0;                      // declared ladder vs FD Maurer-Cartan form
    std::map<int, CMat> extracted;              // lambda-power -> A'_j sample at the probe
};

/// C given per lambda-power as rational matrices; checks
/// (exp C)^{-1} d(exp C) = sum_j lambda^j A'_j dz at probe points.
MCFormReport mc_form_check(const std::map<int, RationalMatrix>& c,
                           const std::vector<std::pair<int, RationalMatrix>>& ladder,
                           const std::vector<Cplx>& probes, double fd_step = 1e-5);

}  // namespace dpw

#endif
