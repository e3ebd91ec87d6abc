#include "dpw/willmore.hpp"

#include <cmath>

#include <Eigen/SVD>

namespace dpw {

namespace willmore {

RationalMatrix b1_block() {
    const Cplx i(0.0, 1.0);
    RationalMatrix b(4, 4);
    auto lin = [](Cplx c0, Cplx c1) { return RationalFn(Polynomial{c0, c1}); };
    // row 0: (2iz, -2z, -i, 1) / 2
    b.at(0, 0) = lin(0.0, i);
    b.at(0, 1) = lin(0.0, -1.0);
    b.at(0, 2) = lin(-0.5 * i, 0.0);
    b.at(0, 3) = lin(0.5, 0.0);
    // row 1: (-2iz, 2z, -i, 1) / 2
    b.at(1, 0) = lin(0.0, -i);
    b.at(1, 1) = lin(0.0, 1.0);
    b.at(1, 2) = lin(-0.5 * i, 0.0);
    b.at(1, 3) = lin(0.5, 0.0);
    // row 2: (-2, -2i, -z, -iz) / 2
    b.at(2, 0) = lin(-1.0, 0.0);
    b.at(2, 1) = lin(-i, 0.0);
    b.at(2, 2) = lin(0.0, -0.5);
    b.at(2, 3) = lin(0.0, -0.5 * i);
    // row 3: (2i, -2, -iz, z) / 2
    b.at(3, 0) = lin(i, 0.0);
    b.at(3, 1) = lin(-1.0, 0.0);
    b.at(3, 2) = lin(0.0, -0.5 * i);
    b.at(3, 3) = lin(0.0, 0.5);
    return b;
}

CMat i13() {
    CMat m = CMat::Identity(4, 4);
    m(0, 0) = -1.0;
    return m;
}

CMat d_matrix() {
    CMat m = CMat::Identity(8, 8);
    for (int k = 0; k < 4; ++k) m(k, k) = -1.0;
    return m;
}

CMat j_matrix() {
    CMat m = CMat::Identity(8, 8);
    m(0, 0) = -1.0;
    return m;
}

CMat xi_adapted() {
    const Cplx i(0.0, 1.0);
    CMat xi = CMat::Zero(8, 8);
    xi(0, 1) = i;
    xi(1, 0) = i;
    xi(2, 3) = 1.0;
    xi(3, 2) = -1.0;
    xi(4, 5) = 2.0;
    xi(5, 4) = -2.0;
    return xi;
}

CMat xi_invariant() {
    CMat xi = CMat::Zero(8, 8);
    xi(4, 5) = 1.0;
    xi(5, 4) = -1.0;
    xi(6, 7) = 1.0;
    xi(7, 6) = -1.0;
    return xi;
}

PotentialSpec example_potential() {
    GroupContext ctx = GroupContext::so_lorentz(8, d_matrix());
    RationalMatrix b = b1_block();
    const CMat q = i13();
    RationalMatrix a(8, 8);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            a.at(r, 4 + c) = b.at(r, c);
            // lower-left block -B^t I13: entry (4+r, c) = -B(c, r) * q(c, c)
            a.at(4 + r, c) = b.at(c, r) * (-q(c, c));
        }
    PotentialSpec p;
    p.ctx = ctx;
    p.ce = grading(xi_adapted(), cartan_data(ctx));
    p.z0 = Cplx(0.0, 0.0);
    p.coefficients.emplace_back(0, std::move(a));
    p.mode = PotentialMode::Normalized;
    return p;
}

}  // namespace willmore

WillmoreSample closed_form_x(Cplx z, Cplx lambda) {
    const Cplx i(0.0, 1.0);
    Cplx zb = std::conj(z);
    double r2 = (z * zb).real();
    Cplx li = 1.0 / lambda;
    double den = 1 + r2 + 5 * r2 * r2 / 4 + 4 * r2 * r2 * r2 / 9 + r2 * r2 * r2 * r2 / 36;
    Cplx v[7] = {
        1 - r2 - 3 * r2 * r2 / 4 + 4 * r2 * r2 * r2 / 9 - r2 * r2 * r2 * r2 / 36,
        -i * (z - zb) * (1 + r2 * r2 * r2 / 9),
        (z + zb) * (1 + r2 * r2 * r2 / 9),
        -i * (li * z * z - lambda * zb * zb) * (1 - r2 * r2 / 12),
        (li * z * z + lambda * zb * zb) * (1 - r2 * r2 / 12),
        -i * (r2 / 2) * (li * z - lambda * zb) * (1 + 4 * r2 / 3),
        (r2 / 2) * (li * z + lambda * zb) * (1 + 4 * r2 / 3),
    };
    WillmoreSample s{z, lambda, {}};
    for (int k = 0; k < 7; ++k) s.x(k) = v[k].real() / den;
    return s;
}

namespace {

using Vec8 = Eigen::Matrix<double, 8, 1>;
using CVec8 = Eigen::Matrix<Cplx, 8, 1>;

Cplx lorentz(const CVec8& a, const CVec8& b) {
    Cplx s = -a(0) * b(0);
    for (int k = 1; k < 8; ++k) s += a(k) * b(k);
    return s;
}

Eigen::MatrixXd span_plane_projector(const Eigen::Matrix<double, 8, 4>& v,
                                     const Eigen::MatrixXd& j) {
    Eigen::Matrix4d g = v.transpose() * j * v;
    return v * g.inverse() * v.transpose() * j;
}

}  // namespace

Eigen::MatrixXd conformal_gauss_4plane(const std::function<WillmoreSample(Cplx)>& surface, Cplx z,
                                       double spacing) {
    const double h = spacing;
    auto lift0 = [&](Cplx zz) {
        Vec8 y;
        y(0) = 1.0;
        y.tail<7>() = surface(zz).x;
        return y;
    };
    // scaled lightcone lift: <Y_z, Y_zb> = 1/2
    auto lift = [&](Cplx zz) {
        CVec8 yx = (lift0(zz + h) - lift0(zz - h)).cast<Cplx>() / (2.0 * h);
        CVec8 yy = (lift0(zz + Cplx(0, h)) - lift0(zz - Cplx(0, h))).cast<Cplx>() / (2.0 * h);
        CVec8 yz = (yx - Cplx(0, 1) * yy) / 2.0;
        CVec8 yzb = (yx + Cplx(0, 1) * yy) / 2.0;
        double s = lorentz(yz, yzb).real();
        return Vec8(lift0(zz) / std::sqrt(2.0 * s));
    };
    Vec8 yc = lift(z);
    Vec8 yph = lift(z + h), ymh = lift(z - h);
    Vec8 ypi = lift(z + Cplx(0, h)), ymi = lift(z - Cplx(0, h));
    CVec8 yx = (yph - ymh).cast<Cplx>() / (2.0 * h);
    CVec8 yy = (ypi - ymi).cast<Cplx>() / (2.0 * h);
    CVec8 yz = (yx - Cplx(0, 1) * yy) / 2.0;
    // mixed second derivative = Laplacian / 4 (real)
    Vec8 yzzb = (yph + ymh + ypi + ymi - 4.0 * yc) / (4.0 * h * h);
    double c = lorentz(yzzb.cast<Cplx>(), yzzb.cast<Cplx>()).real();
    Vec8 yhat = 2.0 * yzzb + 2.0 * c * yc;

    Eigen::Matrix<double, 8, 4> v;
    v.col(0) = yc;
    for (int k = 0; k < 8; ++k) {
        v(k, 1) = yz(k).real();
        v(k, 2) = yz(k).imag();
    }
    v.col(3) = yhat;
    return span_plane_projector(v, willmore::j_matrix().real());
}

Eigen::MatrixXd frame_4plane(const LaurentMatrix& frame, Cplx lambda) {
    if (frame.dim() != 8) throw DimensionMismatch("frame_4plane: 8x8 frames only");
    CMat f = frame.eval(lambda);
    Eigen::Matrix<double, 8, 4> v = f.leftCols(4).real();
    return span_plane_projector(v, willmore::j_matrix().real());
}

double plane_deviation(const Eigen::MatrixXd& p1, const Eigen::MatrixXd& p2) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(p1 - p2);
    return svd.singularValues()(0);
}

namespace {

// row_b = sigma * row_a (one constant sigma across all samples), zero rows allowed
bool proportional_rows(const std::vector<Cplx>& a, const std::vector<Cplx>& b, double scale,
                       double tol) {
    size_t ref = 0;
    double amax = 0.0;
    for (size_t k = 0; k < a.size(); ++k)
        if (std::abs(a[k]) > amax) { amax = std::abs(a[k]); ref = k; }
    if (amax < tol * scale) {
        for (auto w : b)
            if (std::abs(w) > tol * scale) return false;
        return true;
    }
    Cplx sigma = b[ref] / a[ref];
    for (size_t k = 0; k < a.size(); ++k)
        if (std::abs(b[k] - sigma * a[k]) > tol * scale) return false;
    return true;
}

}  // namespace

PotentialShape classify_shape(const RationalMatrix& b1, const std::vector<Cplx>& probes) {
    if (b1.rows() != 4 || b1.cols() % 2 != 0 || b1.cols() < 2)
        throw DimensionMismatch("classify_shape: need a 4 x 2(m-2) block");
    if (probes.size() < 2) throw NoMatch("classify_shape: need at least two probes");
    const int pairs = b1.cols() / 2;
    PotentialShape out;
    out.m = pairs + 2;

    std::vector<CMat> vals;
    double scale = 0.0;
    for (auto z : probes) {
        vals.push_back(b1.eval(z));
        scale = std::max(scale, vals.back().cwiseAbs().maxCoeff());
    }
    if (scale == 0.0) {
        // zero rows are trivially proportional: the all-type-(i) pattern
        out.pair_types.assign(pairs, PairType::TypeI);
        out.shape_index = 1;
        return out;
    }
    const double tol = 1e-9;

    for (int j = 0; j < pairs; ++j) {
        // type (ii): vhat = i v
        double res2 = 0.0;
        for (const auto& m : vals)
            res2 = std::max(res2,
                            (m.col(2 * j + 1) - Cplx(0, 1) * m.col(2 * j)).cwiseAbs().maxCoeff());
        if (res2 < tol * scale) {
            out.pair_types.push_back(PairType::TypeII);
            continue;
        }
        // type (i): two row pairs, each proportional with a constant factor,
        // the same pattern in both columns (search over row partitions)
        auto row_samples = [&](int r, int c) {
            std::vector<Cplx> s;
            for (const auto& m : vals) s.push_back(m(r, 2 * j + c));
            return s;
        };
        const int part[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
        bool type1 = false;
        for (const auto& p : part) {
            auto pair_ok = [&](int ra, int rb) {
                for (int c = 0; c < 2; ++c) {
                    auto a = row_samples(ra, c), b = row_samples(rb, c);
                    if (!proportional_rows(a, b, scale, tol) &&
                        !proportional_rows(b, a, scale, tol))
                        return false;
                }
                return true;
            };
            if (pair_ok(p[0], p[1]) && pair_ok(p[2], p[3])) { type1 = true; break; }
        }
        if (!type1)
            throw NoMatch("classify_shape: column pair " + std::to_string(j + 1) +
                          " matches neither pattern");
        out.pair_types.push_back(PairType::TypeI);
    }

    // homogeneous patterns: a (possibly empty) run of type (ii) pairs first
    int lead = 0;
    while (lead < pairs && out.pair_types[lead] == PairType::TypeII) ++lead;
    bool prefix = true;
    for (int j = lead; j < pairs; ++j)
        if (out.pair_types[j] == PairType::TypeII) prefix = false;
    out.shape_index = prefix ? lead + 1 : 0;
    return out;
}

}  // namespace dpw
