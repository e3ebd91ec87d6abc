#include "dpw/roots.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace dpw {

namespace {

double max_abs(const CMat& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

CMat bracket(const CMat& a, const CMat& b) { return a * b - b * a; }

// Coordinates of algebra elements w.r.t. a fixed basis, via one QR factorization.
struct BasisCoords {
    explicit BasisCoords(const std::vector<CMat>& basis) {
        n = static_cast<int>(basis[0].rows());
        m.resize(n * n, static_cast<int>(basis.size()));
        for (size_t j = 0; j < basis.size(); ++j)
            m.col(static_cast<int>(j)) = Eigen::Map<const CVec>(basis[j].data(), n * n);
        qr.compute(m);
    }
    CVec coords(const CMat& x) const {
        CVec b = Eigen::Map<const CVec>(x.data(), n * n);
        CVec c = qr.solve(b);
        if ((m * c - b).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, b.cwiseAbs().maxCoeff()))
            throw NotInAlgebra("element outside the algebra span");
        return c;
    }
    int n;
    CMat m;
    Eigen::ColPivHouseholderQR<CMat> qr;
};

// ad(x) as a matrix on the given basis.
CMat ad_matrix(const CMat& x, const std::vector<CMat>& basis, const BasisCoords& bc) {
    const int d = static_cast<int>(basis.size());
    CMat a(d, d);
    for (int j = 0; j < d; ++j) a.col(j) = bc.coords(bracket(x, basis[j]));
    return a;
}

std::vector<CMat> torus_basis(const GroupContext& ctx) {
    const int n = ctx.dim;
    std::vector<CMat> out;
    if (ctx.family == Family::Orthogonal) {
        CMat t = ctx.signature_twist();
        CMat ti = t.inverse();
        for (int k = 0; 2 * k + 1 < n; ++k) {
            CMat e = CMat::Zero(n, n);
            e(2 * k, 2 * k + 1) = 1.0;
            e(2 * k + 1, 2 * k) = -1.0;
            out.push_back(t * e * ti);
        }
    } else {
        for (int k = 0; k + 1 < n; ++k) {
            CMat d = CMat::Zero(n, n);
            d(k, k) = Cplx(0.0, 1.0);
            d(k + 1, k + 1) = Cplx(0.0, -1.0);
            out.push_back(d);
        }
    }
    return out;
}

Eigen::VectorXi snap_int(const Eigen::VectorXd& v, double tol, const char* what) {
    Eigen::VectorXi w(v.size());
    for (int i = 0; i < v.size(); ++i) {
        double r = std::round(v(i));
        if (std::abs(v(i) - r) > tol) throw NonIntegralElement(what);
        w(i) = static_cast<int>(r);
    }
    return w;
}

}  // namespace

CartanData cartan_data(const GroupContext& ctx) {
    CartanData cd;
    cd.ctx = ctx;
    cd.torus = torus_basis(ctx);
    cd.torus_c = cd.torus;
    const int l = cd.rank();

    std::vector<CMat> gb = complex_algebra_basis(ctx);
    BasisCoords bc(gb);

    // generic torus combination; deterministic coefficients
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> uni(0.5, 1.5);
    CMat hgen = CMat::Zero(ctx.dim, ctx.dim);
    std::vector<double> cgen(l);
    for (int k = 0; k < l; ++k) {
        cgen[k] = uni(rng);
        hgen += cgen[k] * cd.torus[k];
    }

    CMat adh = ad_matrix(hgen, gb, bc);
    Eigen::ComplexEigenSolver<CMat> es(adh);
    std::vector<CMat> adts(l);
    for (int k = 0; k < l; ++k) adts[k] = ad_matrix(cd.torus[k], gb, bc);

    const int d = static_cast<int>(gb.size());
    for (int i = 0; i < d; ++i) {
        Cplx nu = es.eigenvalues()(i);
        if (std::abs(nu) < 1e-7) continue;  // torus / zero-root directions
        CVec w = es.eigenvectors().col(i);
        CMat x = CMat::Zero(ctx.dim, ctx.dim);
        for (int j = 0; j < d; ++j) x += w(j) * gb[j];
        Root r;
        r.theta.resize(l);
        for (int k = 0; k < l; ++k) {
            Cplx th = (adts[k] * w).dot(w) / w.dot(w);  // Eigen dot conjugates first arg
            th = std::conj(th);
            if (std::abs(th.real()) > 1e-7)
                throw Error("cartan_data: non-imaginary root value (torus not compact?)");
            r.theta(k) = th.imag();
        }
        // snap to integers (these algebras have integral theta on our torus)
        Eigen::VectorXi ti = snap_int(r.theta, 1e-6, "cartan_data: non-integral root");
        for (int k = 0; k < l; ++k) r.theta(k) = ti(k);
        // lexicographic positivity
        for (int k = 0; k < l; ++k) {
            if (r.theta(k) != 0.0) {
                r.positive = r.theta(k) > 0.0;
                break;
            }
        }
        r.vector = x / x.norm();
        cd.roots.push_back(std::move(r));
    }

    // simple roots: positive roots not equal to a sum of two positive roots
    auto key = [l](const Eigen::VectorXd& t) {
        std::vector<int> k(l);
        for (int i = 0; i < l; ++i) k[i] = static_cast<int>(std::lround(t(i)));
        return k;
    };
    std::vector<std::vector<int>> pos;
    for (const auto& r : cd.roots)
        if (r.positive) pos.push_back(key(r.theta));
    for (size_t i = 0; i < cd.roots.size(); ++i) {
        if (!cd.roots[i].positive) continue;
        auto ki = key(cd.roots[i].theta);
        bool decomposable = false;
        for (const auto& a : pos) {
            std::vector<int> rest(l);
            for (int m = 0; m < l; ++m) rest[m] = ki[m] - a[m];
            if (rest == ki || std::all_of(rest.begin(), rest.end(), [](int v) { return v == 0; }))
                continue;
            if (std::find(pos.begin(), pos.end(), rest) != pos.end()) {
                decomposable = true;
                break;
            }
        }
        if (!decomposable) {
            // avoid duplicates (same functional can appear once per root vector)
            bool dup = false;
            for (int s : cd.simple)
                if (key(cd.roots[s].theta) == ki) dup = true;
            if (!dup) cd.simple.push_back(static_cast<int>(i));
        }
    }
    std::sort(cd.simple.begin(), cd.simple.end(), [&](int a, int b) {
        for (int k = 0; k < l; ++k) {
            if (cd.roots[a].theta(k) != cd.roots[b].theta(k))
                return cd.roots[a].theta(k) > cd.roots[b].theta(k);
        }
        return false;
    });
    if (static_cast<int>(cd.simple.size()) != l)
        throw Error("cartan_data: simple root count " + std::to_string(cd.simple.size()) +
                    " != rank " + std::to_string(l));

    // dual basis: theta_j(xi_k) = i delta_jk
    Eigen::MatrixXd a(l, l);
    for (int j = 0; j < l; ++j)
        for (int m = 0; m < l; ++m) a(j, m) = cd.roots[cd.simple[j]].theta(m);
    Eigen::MatrixXd ainv = a.inverse();
    for (int k = 0; k < l; ++k) {
        CMat xi = CMat::Zero(ctx.dim, ctx.dim);
        for (int m = 0; m < l; ++m) xi += ainv(m, k) * cd.torus[m];
        cd.dual_basis.push_back(xi);
    }
    return cd;
}

double root_value(const CartanData& cd, const Root& r, const CMat& xi) {
    // solve xi = sum c_m t_m in the torus (least squares over vectorized matrices)
    const int n = cd.ctx.dim, l = cd.rank();
    CMat m(n * n, l);
    for (int k = 0; k < l; ++k)
        m.col(k) = Eigen::Map<const CVec>(cd.torus[k].data(), n * n);
    CVec b = Eigen::Map<const CVec>(xi.data(), n * n);
    CVec c = m.colPivHouseholderQr().solve(b);
    double v = 0.0;
    for (int k = 0; k < l; ++k) v += c(k).real() * r.theta(k);
    return v;
}

CanonicalElement grading(const CMat& xi, const CartanData& cd) {
    CanonicalElement ce;
    ce.xi = xi;
    std::vector<CMat> gb = complex_algebra_basis(cd.ctx);
    BasisCoords bc(gb);
    CMat adxi = ad_matrix(xi, gb, bc);
    Eigen::ComplexEigenSolver<CMat> es(adxi, false);
    const int d = static_cast<int>(gb.size());
    std::set<int> levels;
    for (int i = 0; i < d; ++i) {
        Cplx nu = es.eigenvalues()(i);
        if (std::abs(nu.real()) > 1e-7)
            throw NonIntegralElement("grading: ad-eigenvalue off the imaginary axis");
        double mu = nu.imag();
        double r = std::round(mu);
        if (std::abs(mu - r) > 1e-8)
            throw NonIntegralElement("grading: non-integral ad-eigenvalue");
        levels.insert(static_cast<int>(r));
    }
    // eigenspace bases via SVD nullspaces: accurate for repeated eigenvalues,
    // where non-symmetric eigenvector extraction loses half the digits
    int found = 0;
    for (int j : levels) {
        CMat shifted = adxi - Cplx(0.0, static_cast<double>(j)) * CMat::Identity(d, d);
        Eigen::JacobiSVD<CMat> svd(shifted, Eigen::ComputeFullV);
        for (int i = 0; i < d; ++i) {
            if (svd.singularValues()(i) > 1e-7) continue;
            CVec w = svd.matrixV().col(i);
            CMat x = CMat::Zero(cd.ctx.dim, cd.ctx.dim);
            for (int k = 0; k < d; ++k) x += w(k) * gb[k];
            ce.grading[j].push_back(x / x.norm());
            ++found;
        }
    }
    if (found != d) throw Error("grading: eigenspace dimensions do not sum to dim g");
    for (const auto& [j, v] : ce.grading)
        if (!v.empty()) ce.height = std::max(ce.height, j);
    ce.is_canonical = is_canonical_element(cd, xi);
    return ce;
}

bool is_canonical_element(const CartanData& cd, const CMat& xi, double tol) {
    for (int s : cd.simple) {
        double v = root_value(cd, cd.roots[s], xi);
        if (std::abs(v) > tol && std::abs(v - 1.0) > tol) return false;
    }
    return true;
}

std::vector<CanonicalElement> enumerate_canonical(const CartanData& cd) {
    const int l = cd.rank();
    std::vector<CanonicalElement> out;
    for (int mask = 1; mask < (1 << l); ++mask) {
        CMat xi = CMat::Zero(cd.ctx.dim, cd.ctx.dim);
        std::vector<int> idx;
        for (int j = 0; j < l; ++j)
            if (mask & (1 << j)) {
                xi += cd.dual_basis[j];
                idx.push_back(j + 1);
            }
        CanonicalElement ce = grading(xi, cd);
        ce.index_set = idx;
        out.push_back(std::move(ce));
    }
    return out;
}

U0Spaces u0_spaces(const CanonicalElement& ce) {
    U0Spaces u;
    const int r = ce.height;
    for (int j = 0; j < r; ++j) {
        std::vector<CMat> basis;
        for (int k = j + 1; k <= r; ++k) {
            auto it = ce.grading.find(k);
            if (it != ce.grading.end())
                basis.insert(basis.end(), it->second.begin(), it->second.end());
        }
        if (basis.empty()) continue;
        u.dim_full += static_cast<int>(basis.size());
        if (j % 2 == 0) {
            u.dim_t += static_cast<int>(basis.size());
            u.t_part[j] = basis;
        }
        u.full[j] = std::move(basis);
    }
    return u;
}

namespace {

// spectrum of xi as half-integers (mu where eigenvalue = i*mu/1), snapped
std::pair<std::vector<double>, Eigen::ComplexEigenSolver<CMat>> xi_spectrum(const CMat& xi,
                                                                            double tol) {
    auto es = Eigen::ComplexEigenSolver<CMat>(xi);
    const int n = static_cast<int>(xi.rows());
    std::vector<double> mu(n);
    for (int i = 0; i < n; ++i) {
        Cplx w = es.eigenvalues()(i);
        if (std::abs(w.real()) > tol)
            throw NonQuantizedSpectrum("gamma_xi: eigenvalue off the imaginary axis");
        double m = w.imag();
        double r2 = std::round(2.0 * m) / 2.0;
        if (std::abs(m - r2) > tol)
            throw NonQuantizedSpectrum("gamma_xi: spectrum not in i*(Z/2)");
        mu[i] = r2;
    }
    return {mu, std::move(es)};
}

LaurentMatrix spectral_loop(const std::vector<double>& mu,
                            const Eigen::ComplexEigenSolver<CMat>& es, double scale) {
    const int n = static_cast<int>(es.eigenvectors().rows());
    CMat vinv = es.eigenvectors().inverse();
    LaurentMatrix g(n);
    for (int i = 0; i < n; ++i) {
        int k = static_cast<int>(std::lround(mu[i] * scale));
        CMat p = es.eigenvectors().col(i) * vinv.row(i);
        g.add_coeff(k, p);
    }
    return g;
}

}  // namespace

LaurentMatrix gamma_xi_loop(const CMat& xi, double tol) {
    auto [mu, es] = xi_spectrum(xi, tol);
    for (double m : mu)
        if (std::abs(m - std::round(m)) > tol)
            throw HalfIntegerConvention(
                "gamma_xi_loop: half-integral spectrum; use gamma_xi_double or the adjoint image");
    return spectral_loop(mu, es, 1.0);
}

LaurentMatrix gamma_xi_double(const CMat& xi, double tol) {
    auto [mu, es] = xi_spectrum(xi, tol);
    return spectral_loop(mu, es, 2.0);
}

LaurentMatrix gamma_xi_ad(const CMat& xi, const std::vector<CMat>& g_basis, double tol) {
    BasisCoords bc(g_basis);
    CMat adxi = ad_matrix(xi, g_basis, bc);
    Eigen::ComplexEigenSolver<CMat> es(adxi);
    const int d = static_cast<int>(g_basis.size());
    std::vector<double> mu(d);
    for (int i = 0; i < d; ++i) {
        Cplx w = es.eigenvalues()(i);
        if (std::abs(w.real()) > tol || std::abs(w.imag() - std::round(w.imag())) > tol)
            throw NonQuantizedSpectrum("gamma_xi_ad: adjoint spectrum not integral");
        mu[i] = std::round(w.imag());
    }
    return spectral_loop(mu, es, 1.0);
}

ExpPiReport exp_pi_check(const CMat& xi, const CMat& h) {
    ExpPiReport r;
    CMat e = mat_exp(M_PI * xi);
    r.exact = max_abs(e - h);
    auto sorted_eigs = [](const CMat& m) {
        Eigen::ComplexEigenSolver<CMat> es(m, false);
        std::vector<Cplx> v(m.rows());
        for (int i = 0; i < m.rows(); ++i) v[i] = es.eigenvalues()(i);
        std::sort(v.begin(), v.end(), [](Cplx a, Cplx b) {
            return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
        });
        return v;
    };
    auto ve = sorted_eigs(e), vh = sorted_eigs(h);
    for (size_t i = 0; i < ve.size(); ++i)
        r.conjugacy = std::max(r.conjugacy, std::abs(ve[i] - vh[i]));
    return r;
}

CMat mat_exp(const CMat& x) { return x.exp(); }

CMat mat_sqrt_principal(const CMat& x) {
    Eigen::ComplexEigenSolver<CMat> es(x, false);
    for (int i = 0; i < x.rows(); ++i) {
        Cplx w = es.eigenvalues()(i);
        if (w.real() < 0.0 && std::abs(w.imag()) < 1e-12 * std::abs(w.real()))
            throw IwasawaCellBoundary("principal square root: eigenvalue on the negative axis");
        if (std::abs(w) < 1e-14)
            throw IwasawaCellBoundary("principal square root: singular argument");
    }
    return x.sqrt();
}

CMat mat_sqrt_hermitian(const CMat& x) {
    CMat s = 0.5 * (x + x.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> es(s);
    for (int i = 0; i < s.rows(); ++i)
        if (es.eigenvalues()(i) <= 0.0)
            throw IwasawaCellBoundary("hermitian square root: non-positive spectrum");
    return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
           es.eigenvectors().adjoint();
}

}  // namespace dpw
