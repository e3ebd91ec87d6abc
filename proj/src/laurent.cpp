#include "dpw/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace dpw {

namespace {

double max_abs(const CMat& a) {
    return a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
}

int next_pow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace

// ---------------------------------------------------------------------------
// LaurentMatrix

LaurentMatrix::LaurentMatrix(int dim) : dim_(dim) {
    if (dim <= 0) throw DimensionMismatch("LaurentMatrix: dim must be positive");
}

LaurentMatrix LaurentMatrix::identity(int dim) {
    LaurentMatrix g(dim);
    g.coeffs_[0] = CMat::Identity(dim, dim);
    return g;
}

LaurentMatrix LaurentMatrix::constant(const CMat& a) {
    return monomial(0, a);
}

LaurentMatrix LaurentMatrix::monomial(int k, const CMat& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("LaurentMatrix: coefficient not square");
    LaurentMatrix g(static_cast<int>(a.rows()));
    g.coeffs_[k] = a;
    return g;
}

CMat LaurentMatrix::coeff(int k) const {
    auto it = coeffs_.find(k);
    return it == coeffs_.end() ? CMat::Zero(dim_, dim_) : it->second;
}

void LaurentMatrix::set_coeff(int k, const CMat& a) {
    if (a.rows() != dim_ || a.cols() != dim_)
        throw DimensionMismatch("set_coeff: wrong coefficient shape");
    coeffs_[k] = a;
}

void LaurentMatrix::add_coeff(int k, const CMat& a) {
    if (a.rows() != dim_ || a.cols() != dim_)
        throw DimensionMismatch("add_coeff: wrong coefficient shape");
    auto it = coeffs_.find(k);
    if (it == coeffs_.end())
        coeffs_[k] = a;
    else
        it->second += a;
}

int LaurentMatrix::k_min() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }
int LaurentMatrix::k_max() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

CMat LaurentMatrix::eval(Cplx lambda) const {
    if (lambda == Cplx(0.0) && k_min() < 0)
        throw EvaluationAtPole("loop evaluation at lambda=0 with negative support");
    // Horner over the shifted exponent range.
    if (coeffs_.empty()) return CMat::Zero(dim_, dim_);
    const int lo = k_min(), hi = k_max();
    CMat acc = CMat::Zero(dim_, dim_);
    for (int k = hi; k >= lo; --k) {
        acc *= lambda;
        auto it = coeffs_.find(k);
        if (it != coeffs_.end()) acc += it->second;
    }
    if (lo != 0) acc *= std::pow(lambda, lo);
    return acc;
}

LaurentMatrix LaurentMatrix::trimmed(double tol) const {
    LaurentMatrix g(dim_);
    for (const auto& [k, a] : coeffs_)
        if (max_abs(a) > tol) g.coeffs_[k] = a;
    return g;
}

LaurentMatrix LaurentMatrix::restricted(int lo, int hi) const {
    LaurentMatrix g(dim_);
    for (const auto& [k, a] : coeffs_)
        if (k >= lo && k <= hi) g.coeffs_[k] = a;
    return g;
}

double LaurentMatrix::tail_norm(int lo, int hi) const {
    double t = 0.0;
    for (const auto& [k, a] : coeffs_)
        if (k < lo || k > hi) t = std::max(t, max_abs(a));
    return t;
}

double LaurentMatrix::max_coeff_norm() const {
    double t = 0.0;
    for (const auto& [k, a] : coeffs_) t = std::max(t, max_abs(a));
    return t;
}

LaurentMatrix LaurentMatrix::shifted(int k) const {
    LaurentMatrix g(dim_);
    for (const auto& [j, a] : coeffs_) g.coeffs_[j + k] = a;
    return g;
}

LaurentMatrix LaurentMatrix::negate_lambda() const {
    LaurentMatrix g(dim_);
    for (const auto& [k, a] : coeffs_) g.coeffs_[k] = (k % 2 == 0) ? a : CMat(-a);
    return g;
}

LaurentMatrix LaurentMatrix::star() const {
    LaurentMatrix g(dim_);
    for (const auto& [k, a] : coeffs_) g.coeffs_[-k] = a.adjoint();
    return g;
}

LaurentMatrix LaurentMatrix::conj_loop() const {
    LaurentMatrix g(dim_);
    for (const auto& [k, a] : coeffs_) g.coeffs_[-k] = a.conjugate();
    return g;
}

LaurentMatrix LaurentMatrix::transpose_loop() const {
    LaurentMatrix g(dim_);
    for (const auto& [k, a] : coeffs_) g.coeffs_[k] = a.transpose();
    return g;
}

LaurentMatrix LaurentMatrix::operator+(const LaurentMatrix& o) const {
    if (dim_ != o.dim_) throw DimensionMismatch("loop sum: dimension mismatch");
    LaurentMatrix g = *this;
    for (const auto& [k, a] : o.coeffs_) g.add_coeff(k, a);
    return g;
}

LaurentMatrix LaurentMatrix::operator-(const LaurentMatrix& o) const {
    if (dim_ != o.dim_) throw DimensionMismatch("loop difference: dimension mismatch");
    LaurentMatrix g = *this;
    for (const auto& [k, a] : o.coeffs_) g.add_coeff(k, -a);
    return g;
}

LaurentMatrix LaurentMatrix::operator*(const LaurentMatrix& o) const { return lmul(*this, o); }

LaurentMatrix LaurentMatrix::operator*(Cplx s) const {
    LaurentMatrix g(dim_);
    for (const auto& [k, a] : coeffs_) g.coeffs_[k] = a * s;
    return g;
}

LaurentMatrix operator*(const CMat& a, const LaurentMatrix& g) {
    if (a.cols() != g.dim()) throw DimensionMismatch("const*loop: dimension mismatch");
    LaurentMatrix r(g.dim());
    for (const auto& [k, c] : g.coeffs()) r.set_coeff(k, a * c);
    return r;
}

LaurentMatrix LaurentMatrix::operator*(const CMat& a) const {
    if (a.rows() != dim_) throw DimensionMismatch("loop*const: dimension mismatch");
    LaurentMatrix r(dim_);
    for (const auto& [k, c] : coeffs_) r.set_coeff(k, c * a);
    return r;
}

LaurentMatrix lmul(const LaurentMatrix& a, const LaurentMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("lmul: dimension mismatch");
    LaurentMatrix g(a.dim());
    for (const auto& [ka, ca] : a.coeffs())
        for (const auto& [kb, cb] : b.coeffs()) g.add_coeff(ka + kb, ca * cb);
    return g;
}

CMat leval(const LaurentMatrix& a, Cplx lambda) { return a.eval(lambda); }

LaurentMatrix linv_truncated(const LaurentMatrix& a, int max_deg, double tol) {
    const int n = a.dim();
    const int span = a.k_max() - a.k_min();
    const int N = next_pow2(std::max(4 * (span + 2 * max_deg + 1), 16));
    const double two_pi = 2.0 * M_PI;

    std::vector<CMat> vals(N);
    for (int s = 0; s < N; ++s) {
        Cplx lam = std::polar(1.0, two_pi * s / N);
        CMat v = a.eval(lam);
        Eigen::FullPivLU<CMat> lu(v);
        if (!lu.isInvertible())
            throw SingularLoop("linv_truncated: determinant vanishes on the unit circle");
        vals[s] = lu.inverse();
    }
    LaurentMatrix b(n);
    for (int k = -max_deg; k <= max_deg; ++k) {
        CMat c = CMat::Zero(n, n);
        for (int s = 0; s < N; ++s)
            c += vals[s] * std::polar(1.0, -two_pi * k * s / N);
        c /= static_cast<double>(N);
        if (max_abs(c) > 1e-14) b.set_coeff(k, c);
    }
    // residual on the sample
    double res = 0.0;
    LaurentMatrix ab = lmul(a, b);
    for (int s = 0; s < N; s += std::max(1, N / 32)) {
        Cplx lam = std::polar(1.0, two_pi * s / N);
        res = std::max(res, max_abs(ab.eval(lam) - CMat::Identity(n, n)));
    }
    if (res > tol)
        throw TruncationOverflow("linv_truncated: residual " + std::to_string(res) +
                                 " exceeds tol at degree " + std::to_string(max_deg));
    return b;
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(std::initializer_list<Cplx> coeffs) : coeffs_(coeffs) { trim(); }
Polynomial::Polynomial(std::vector<Cplx> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::monomial(int k, Cplx c) {
    std::vector<Cplx> v(k + 1, Cplx(0.0));
    v[k] = c;
    return Polynomial(std::move(v));
}

void Polynomial::trim() {
    while (!coeffs_.empty() && std::abs(coeffs_.back()) == 0.0) coeffs_.pop_back();
}

int Polynomial::degree() const { return static_cast<int>(coeffs_.size()) - 1; }

Cplx Polynomial::coeff(int k) const {
    return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[k] : Cplx(0.0);
}

Cplx Polynomial::eval(Cplx z) const {
    Cplx acc(0.0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    std::vector<Cplx> v(std::max(coeffs_.size(), o.coeffs_.size()), Cplx(0.0));
    for (size_t i = 0; i < coeffs_.size(); ++i) v[i] += coeffs_[i];
    for (size_t i = 0; i < o.coeffs_.size(); ++i) v[i] += o.coeffs_[i];
    return Polynomial(std::move(v));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * Cplx(-1.0); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (coeffs_.empty() || o.coeffs_.empty()) return Polynomial();
    std::vector<Cplx> v(coeffs_.size() + o.coeffs_.size() - 1, Cplx(0.0));
    for (size_t i = 0; i < coeffs_.size(); ++i)
        for (size_t j = 0; j < o.coeffs_.size(); ++j) v[i + j] += coeffs_[i] * o.coeffs_[j];
    return Polynomial(std::move(v));
}

Polynomial Polynomial::operator*(Cplx s) const {
    std::vector<Cplx> v = coeffs_;
    for (auto& c : v) c *= s;
    return Polynomial(std::move(v));
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return Polynomial();
    std::vector<Cplx> v(coeffs_.size() - 1);
    for (size_t i = 1; i < coeffs_.size(); ++i) v[i - 1] = coeffs_[i] * Cplx(double(i));
    return Polynomial(std::move(v));
}

Polynomial Polynomial::antiderivative() const {
    std::vector<Cplx> v(coeffs_.size() + 1, Cplx(0.0));
    for (size_t i = 0; i < coeffs_.size(); ++i) v[i + 1] = coeffs_[i] / Cplx(double(i + 1));
    return Polynomial(std::move(v));
}

std::vector<Cplx> Polynomial::roots() const {
    const int d = degree();
    if (d <= 0) return {};
    CMat comp = CMat::Zero(d, d);
    for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -coeffs_[i] / coeffs_[d];
    Eigen::ComplexEigenSolver<CMat> es(comp, /*computeEigenvectors=*/false);
    std::vector<Cplx> r(d);
    for (int i = 0; i < d; ++i) r[i] = es.eigenvalues()(i);
    std::sort(r.begin(), r.end(), [](Cplx a, Cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return r;
}

double Polynomial::max_abs_coeff() const {
    double t = 0.0;
    for (auto c : coeffs_) t = std::max(t, std::abs(c));
    return t;
}

// ---------------------------------------------------------------------------
// RationalFn

namespace {
constexpr double kRootClusterTol = 1e-9;

Polynomial from_roots(Cplx lead, const std::vector<Cplx>& roots) {
    Polynomial p{lead};
    for (auto r : roots) p = p * Polynomial{-r, Cplx(1.0)};
    return p;
}
}  // namespace

RationalFn::RationalFn(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw Error("RationalFn: zero denominator");
    reduce();
}

RationalFn RationalFn::constant(Cplx c) { return RationalFn(Polynomial{c}); }

void RationalFn::reduce() {
    if (num_.is_zero()) {
        den_ = Polynomial{Cplx(1.0)};
        return;
    }
    if (den_.degree() == 0) {
        num_ = num_ * (Cplx(1.0) / den_.coeff(0));
        den_ = Polynomial{Cplx(1.0)};
        return;
    }
    // cancel common roots within the clustering tolerance
    std::vector<Cplx> nr = num_.roots();
    std::vector<Cplx> dr = den_.roots();
    Cplx nlead = num_.coeff(num_.degree());
    Cplx dlead = den_.coeff(den_.degree());
    for (auto it = dr.begin(); it != dr.end();) {
        auto match = std::find_if(nr.begin(), nr.end(),
                                  [&](Cplx r) { return std::abs(r - *it) < kRootClusterTol; });
        if (match != nr.end()) {
            nr.erase(match);
            it = dr.erase(it);
        } else {
            ++it;
        }
    }
    num_ = from_roots(nlead / dlead, nr);
    den_ = from_roots(Cplx(1.0), dr);
}

Cplx RationalFn::eval(Cplx z) const {
    Cplx d = den_.eval(z);
    if (std::abs(d) < 1e-13 * std::max(1.0, den_.max_abs_coeff()))
        throw EvaluationAtPole("rational function evaluated at a pole");
    return num_.eval(z) / d;
}

std::vector<Cplx> RationalFn::pole_set() const { return den_.roots(); }

RationalFn RationalFn::operator+(const RationalFn& o) const {
    return RationalFn(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}
RationalFn RationalFn::operator-(const RationalFn& o) const {
    return RationalFn(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}
RationalFn RationalFn::operator*(const RationalFn& o) const {
    return RationalFn(num_ * o.num_, den_ * o.den_);
}
RationalFn RationalFn::operator*(Cplx s) const { return RationalFn(num_ * s, den_); }

std::vector<Cplx> RationalFn::taylor(Cplx a, int order) const {
    if (pole_distance(a) < 1e-9)
        throw PathThroughPole("taylor expansion centered at a pole");
    // shift both polynomials to w = z - a, then divide power series
    auto shift = [&](const Polynomial& p) {
        // repeated synthetic division by (z - a): remainders are the shifted coefficients
        std::vector<Cplx> c(order + 1, Cplx(0.0));
        std::vector<Cplx> work(p.coeffs().begin(), p.coeffs().end());
        for (int j = 0; j <= order && !work.empty(); ++j) {
            std::vector<Cplx> q(work.size() > 1 ? work.size() - 1 : 0);
            Cplx carry(0.0);
            for (int i = static_cast<int>(work.size()) - 1; i >= 1; --i) {
                carry = work[i] + carry * a;
                q[i - 1] = carry;
            }
            c[j] = work[0] + carry * a;
            work = std::move(q);
        }
        return c;
    };
    std::vector<Cplx> nc = shift(num_), dc = shift(den_);
    if (std::abs(dc[0]) < 1e-14) throw PathThroughPole("taylor: denominator vanishes at center");
    std::vector<Cplx> t(order + 1, Cplx(0.0));
    for (int j = 0; j <= order; ++j) {
        Cplx s = nc[j];
        for (int i = 1; i <= j; ++i) s -= dc[i] * t[j - i];
        t[j] = s / dc[0];
    }
    return t;
}

double RationalFn::pole_distance(Cplx a) const {
    double d = std::numeric_limits<double>::infinity();
    for (auto p : den_.roots()) d = std::min(d, std::abs(a - p));
    return d;
}

Cplx ratfn_eval(const RationalFn& f, Cplx z) { return f.eval(z); }
std::vector<Cplx> pole_set(const RationalFn& f) { return f.pole_set(); }

// ---------------------------------------------------------------------------
// RationalMatrix

RationalMatrix::RationalMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

RationalMatrix RationalMatrix::from_constant(const CMat& a) {
    RationalMatrix m(static_cast<int>(a.rows()), static_cast<int>(a.cols()));
    for (int r = 0; r < m.rows_; ++r)
        for (int c = 0; c < m.cols_; ++c)
            if (a(r, c) != Cplx(0.0)) m.at(r, c) = RationalFn::constant(a(r, c));
    return m;
}

RationalFn& RationalMatrix::at(int r, int c) { return entries_[r * cols_ + c]; }
const RationalFn& RationalMatrix::at(int r, int c) const { return entries_[r * cols_ + c]; }

CMat RationalMatrix::eval(Cplx z) const {
    CMat m(rows_, cols_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) m(r, c) = at(r, c).eval(z);
    return m;
}

std::vector<Cplx> RationalMatrix::pole_set() const {
    std::vector<Cplx> out;
    for (const auto& e : entries_)
        for (auto p : e.pole_set()) {
            bool seen = false;
            for (auto q : out)
                if (std::abs(p - q) < 1e-9) { seen = true; break; }
            if (!seen) out.push_back(p);
        }
    return out;
}

bool RationalMatrix::is_polynomial() const {
    for (const auto& e : entries_)
        if (!e.is_polynomial()) return false;
    return true;
}

int RationalMatrix::max_num_degree() const {
    int d = -1;
    for (const auto& e : entries_) d = std::max(d, e.num().degree());
    return d;
}

}  // namespace dpw
