#ifndef DPW_VERIFY_HPP
#define DPW_VERIFY_HPP

#include <map>
#include <string>

#include "dpw/dpw.hpp"

namespace dpw {

struct CheckResult {
    double residual = 0.0;
    Cplx location{0.0, 0.0};
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

struct VerificationReport {
    std::map<std::string, CheckResult> checks;

    void add(const std::string& name, double residual, Cplx location, double tol,
             const std::string& note = "");
    bool all_pass() const;
    std::string render() const;       // human-readable
    std::string render_kv() const;    // machine-readable key=value lines
};

/// Frames on a 3x3 stencil around a center, the probe for local residuals.
struct Stencil {
    Cplx center;
    double h;
    std::vector<LaurentMatrix> f;  // 9 frames, row-major (iy*3+ix), ix,iy in {0,1,2}

    const LaurentMatrix& at(int ix, int iy) const { return f[iy * 3 + ix]; }
};

Stencil stencil_frames(const PotentialSpec& p, Cplx center, double h, FrameKind which,
                       int trunc = 12, double tol = 1e-9);

/// Maurer-Cartan structure of alpha = F^{-1} dF at a stencil: lambda-support
/// (lambda^{-1} dz part in p^C, lambda^0 in k^C, lambda dz~ part in p^C, no
/// other powers) and flatness d(alpha) + 1/2 [alpha, alpha] = 0 at lambda
/// samples. Both are second-order in the stencil spacing.
struct HarmonicityResult {
    double structure = 0.0;
    double flatness = 0.0;
    double max() const { return std::max(structure, flatness); }
};

HarmonicityResult harmonicity_residual(const Stencil& st, const GroupContext& ctx,
                                       const std::vector<Cplx>& lambda_samples);

/// Residuals with Richardson confirmation: evaluates at spacing h and 2h and
/// reports the decay ratio (expected >= ~3.5 for order 2).
struct RichardsonResult {
    HarmonicityResult fine;
    HarmonicityResult coarse;
    double ratio = 0.0;
};

RichardsonResult harmonicity_richardson(const PotentialSpec& p, Cplx center, double h,
                                        FrameKind which, const std::vector<Cplx>& lambda_samples,
                                        int trunc = 12, double tol = 1e-9);

/// Minimal k with Ad(phi(z)) Fourier support in [-k, k]; coefficients below
/// the cutoff treated as zero.
int uniton_number(const LaurentMatrix& phi, const std::vector<CMat>& g_basis,
                  double cutoff = 1e-9);

/// Coefficient-wise norm of B1^t I13 B1 (polynomial matrix identity).
double isotropy_check(const RationalMatrix& b1, const CMat& i13,
                      const std::vector<Cplx>& probes);

/// Uhlenbeck's laws on a stencil of extended solutions:
///   phi(1) = e;  d_z phi = (1 - l^{-1}) phi A10;  d_zb phi = (1 - l) phi A01,
/// with A = (1/2) Fb^{-1} dFb and Fb = phi(-1).
struct ExtendedLawsResult {
    double based = 0.0;      // || phi(1) - e ||
    double ode = 0.0;        // max ODE residual over lambda samples
};

ExtendedLawsResult extended_solution_laws(const std::vector<LaurentMatrix>& phi_stencil,
                                          double h, const std::vector<Cplx>& lambda_samples);

}  // namespace dpw

#endif
