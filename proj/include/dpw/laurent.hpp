#ifndef DPW_LAURENT_HPP
#define DPW_LAURENT_HPP

#include <complex>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "dpw/errors.hpp"

namespace dpw {

using Cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Matrix-valued Laurent polynomial in the loop parameter.  Finite support,
/// immutable-by-convention after construction; all operations return fresh values.
class LaurentMatrix {
public:
    explicit LaurentMatrix(int dim);

    static LaurentMatrix identity(int dim);
    static LaurentMatrix constant(const CMat& a);
    static LaurentMatrix monomial(int k, const CMat& a);

    int dim() const { return dim_; }

    /// Coefficient of lambda^k (zero matrix if outside support).
    CMat coeff(int k) const;
    void set_coeff(int k, const CMat& a);
    void add_coeff(int k, const CMat& a);

    bool has_coeff(int k) const { return coeffs_.count(k) != 0; }
    const std::map<int, CMat>& coeffs() const { return coeffs_; }

    int k_min() const;
    int k_max() const;

    CMat eval(Cplx lambda) const;

    /// Drops coefficients with max-norm below tol.
    LaurentMatrix trimmed(double tol) const;
    /// Restriction to exponents in [lo, hi].
    LaurentMatrix restricted(int lo, int hi) const;
    /// Max norm of coefficients outside [lo, hi].
    double tail_norm(int lo, int hi) const;

    double max_coeff_norm() const;

    /// Multiplication by lambda^k.
    LaurentMatrix shifted(int k) const;
    /// g(lambda) -> g(-lambda).
    LaurentMatrix negate_lambda() const;
    /// Coefficientwise adjoint with exponent reflection: equals g(lambda)^* on the circle.
    LaurentMatrix star() const;
    /// Coefficientwise conjugate with exponent reflection: equals conj(g(lambda)) on the circle.
    LaurentMatrix conj_loop() const;
    /// Coefficientwise transpose: equals g(lambda)^t pointwise.
    LaurentMatrix transpose_loop() const;

    LaurentMatrix operator+(const LaurentMatrix& o) const;
    LaurentMatrix operator-(const LaurentMatrix& o) const;
    LaurentMatrix operator*(const LaurentMatrix& o) const;
    LaurentMatrix operator*(Cplx s) const;

    /// Left/right multiplication by a constant matrix.
    friend LaurentMatrix operator*(const CMat& a, const LaurentMatrix& g);
    LaurentMatrix operator*(const CMat& a) const;

private:
    int dim_;
    std::map<int, CMat> coeffs_;
};

LaurentMatrix lmul(const LaurentMatrix& a, const LaurentMatrix& b);
CMat leval(const LaurentMatrix& a, Cplx lambda);

/// Inverse loop via unit-circle sampling and discrete Fourier inversion.
/// Throws SingularLoop if the determinant vanishes on the sample,
/// TruncationOverflow if the residual exceeds tol at the requested degree.
LaurentMatrix linv_truncated(const LaurentMatrix& a, int max_deg, double tol);

/// Complex polynomial in the surface parameter, coefficients in ascending order.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(std::initializer_list<Cplx> coeffs);
    explicit Polynomial(std::vector<Cplx> coeffs);
    static Polynomial monomial(int k, Cplx c = 1.0);

    int degree() const;  // -1 for the zero polynomial
    bool is_zero() const { return coeffs_.empty(); }
    Cplx coeff(int k) const;
    const std::vector<Cplx>& coeffs() const { return coeffs_; }

    Cplx eval(Cplx z) const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(Cplx s) const;

    Polynomial derivative() const;
    Polynomial antiderivative() const;

    /// Roots via the companion matrix; empty for degree <= 0.
    std::vector<Cplx> roots() const;

    double max_abs_coeff() const;

private:
    void trim();
    std::vector<Cplx> coeffs_;
};

/// Quotient of complex polynomials, stored reduced (common roots clustered
/// at tolerance 1e-9 are cancelled).
class RationalFn {
public:
    RationalFn() : num_{}, den_{{1.0}} {}
    RationalFn(Polynomial num, Polynomial den);
    RationalFn(Polynomial num) : num_(std::move(num)), den_{{1.0}} {}  // NOLINT
    static RationalFn constant(Cplx c);

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    bool is_polynomial() const { return den_.degree() == 0; }
    bool is_zero() const { return num_.is_zero(); }

    Cplx eval(Cplx z) const;  // throws EvaluationAtPole
    std::vector<Cplx> pole_set() const;

    RationalFn operator+(const RationalFn& o) const;
    RationalFn operator-(const RationalFn& o) const;
    RationalFn operator*(const RationalFn& o) const;
    RationalFn operator*(Cplx s) const;

    /// Taylor coefficients about a, orders 0..order.  Throws PathThroughPole
    /// when a is within tol of a pole.
    std::vector<Cplx> taylor(Cplx a, int order) const;

    /// Distance from a to the nearest pole (infinity if none).
    double pole_distance(Cplx a) const;

private:
    void reduce();
    Polynomial num_, den_;
};

Cplx ratfn_eval(const RationalFn& f, Cplx z);
std::vector<Cplx> pole_set(const RationalFn& f);

/// Dense matrix with rational-function entries.
class RationalMatrix {
public:
    RationalMatrix() : rows_(0), cols_(0) {}
    RationalMatrix(int rows, int cols);
    static RationalMatrix from_constant(const CMat& a);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    RationalFn& at(int r, int c);
    const RationalFn& at(int r, int c) const;

    CMat eval(Cplx z) const;
    std::vector<Cplx> pole_set() const;
    bool is_polynomial() const;
    int max_num_degree() const;

private:
    int rows_, cols_;
    std::vector<RationalFn> entries_;
};

}  // namespace dpw

#endif
