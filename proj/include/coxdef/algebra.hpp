#ifndef COXDEF_ALGEBRA_HPP
#define COXDEF_ALGEBRA_HPP

/*
 * Exact arithmetic in the real cyclotomic field Q(2cos(pi/L)).
 *
 * Every angle quantity the library manipulates lives in one global number
 * field per problem instance, generated by z := 2cos(pi/L) where L is the lcm
 * of all finite edge labels.  Elements are represented as rational polynomials
 * in z reduced modulo the minimal polynomial of z; all decisions (signs,
 * comparisons, equality with cos(pi/m)) are made exactly, with certified
 * rational intervals obtained by Sturm isolation plus bisection.  No
 * floating-point value ever enters a decision path.
 */

#include <memory>
#include <set>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "coxdef/errors.hpp"

namespace coxdef {

// ---------------------------------------------------------------------------
// RationalPoly: dense polynomial over Q, coefficients low-to-high degree.
// Invariant: no trailing zero coefficients (the zero polynomial is empty).
// ---------------------------------------------------------------------------
struct RationalPoly {
    std::vector<mpq_class> c;

    RationalPoly() = default;
    explicit RationalPoly(std::vector<mpq_class> coeffs);

    // degree of the zero polynomial is -1
    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    const mpq_class& lead() const { return c.back(); }

    void normalize();  // strip trailing zeros

    static RationalPoly constant(const mpq_class& v);
    static RationalPoly x();  // the monomial x
};

bool operator==(const RationalPoly& a, const RationalPoly& b);
RationalPoly operator+(const RationalPoly& a, const RationalPoly& b);
RationalPoly operator-(const RationalPoly& a, const RationalPoly& b);
RationalPoly operator*(const RationalPoly& a, const RationalPoly& b);
RationalPoly operator*(const mpq_class& k, const RationalPoly& a);
RationalPoly operator-(const RationalPoly& a);

// Euclidean division: a = q*b + r with deg r < deg b.  b must be nonzero.
void poly_divrem(const RationalPoly& a, const RationalPoly& b, RationalPoly& q,
                 RationalPoly& r);
RationalPoly poly_derivative(const RationalPoly& a);
mpq_class poly_eval(const RationalPoly& a, const mpq_class& x);
std::string poly_to_string(const RationalPoly& a);

// Number of real roots of square-free f in the half-open interval (a, b],
// computed from the Sturm sequence of f with the zeros-ignored sign-change
// convention.
int sturm_count(const RationalPoly& f, const mpq_class& a, const mpq_class& b);

// Isolating interval (lo, hi] for the LARGEST real root of square-free f,
// with the endpoint sign invariant f(lo) < 0 < f(hi) (valid because the
// largest root is simple and f is monic up to a positive factor).
void isolate_largest_root(const RationalPoly& f, mpq_class& lo, mpq_class& hi);

// ---------------------------------------------------------------------------
// NumberField: the ambient real field Q(z), z = 2cos(pi/L).
// ---------------------------------------------------------------------------
struct NumberField {
    RationalPoly modulus;  // minimal polynomial of z over Q, monic
    mpq_class lo, hi;      // (lo, hi] isolates z among the roots of modulus;
                           // sign invariant: modulus(lo) < 0 < modulus(hi)
    long L = 1;

    int degree() const { return modulus.degree(); }
};

using FieldPtr = std::shared_ptr<const NumberField>;

// Minimal polynomial of 2cos(2pi/n) over Q, derived from the n-th cyclotomic
// polynomial via Phi_n(x) = x^{phi(n)/2} * Psi_n(x + 1/x) for n > 2.
RationalPoly minpoly_two_cos(long n);

// n-th cyclotomic polynomial (exact integer coefficients).
RationalPoly cyclotomic(long n);

// Field containing every cos(pi/m) for m in `labels`:  L = lcm(labels),
// modulus = minpoly_two_cos(2L).  Throws FieldTooLarge past the size guards.
FieldPtr field_for_labels(const std::set<long>& labels);

// ---------------------------------------------------------------------------
// AlgebraicReal: element of a NumberField (or a plain rational when the field
// pointer is empty).  Immutable value type; all operations are exact.
// ---------------------------------------------------------------------------
class AlgebraicReal {
  public:
    AlgebraicReal() = default;  // zero
    AlgebraicReal(int v);       // NOLINT: implicit by design (Eigen literals)
    AlgebraicReal(long v);      // NOLINT
    AlgebraicReal(const mpq_class& v);  // NOLINT
    AlgebraicReal(std::vector<mpq_class> rep, FieldPtr field);

    // z itself
    static AlgebraicReal primitive(const FieldPtr& field);

    const std::vector<mpq_class>& rep() const { return rep_; }
    const FieldPtr& field() const { return field_; }

    bool is_zero() const { return rep_.empty(); }
    bool is_rational() const { return rep_.size() <= 1; }
    mpq_class as_rational() const;  // requires is_rational()

    // exact sign in {-1, 0, +1}
    int sign() const;

    // certified enclosure [lo, hi] of the real value (rational endpoints)
    void enclosure(mpq_class& lo, mpq_class& hi) const;

    double to_double() const;  // display only, never used in decisions
    std::string to_string() const;

    friend AlgebraicReal operator+(const AlgebraicReal& a, const AlgebraicReal& b);
    friend AlgebraicReal operator-(const AlgebraicReal& a, const AlgebraicReal& b);
    friend AlgebraicReal operator*(const AlgebraicReal& a, const AlgebraicReal& b);
    friend AlgebraicReal operator/(const AlgebraicReal& a, const AlgebraicReal& b);
    AlgebraicReal operator-() const;
    AlgebraicReal& operator+=(const AlgebraicReal& b);
    AlgebraicReal& operator-=(const AlgebraicReal& b);
    AlgebraicReal& operator*=(const AlgebraicReal& b);

    friend bool operator==(const AlgebraicReal& a, const AlgebraicReal& b);
    friend bool operator!=(const AlgebraicReal& a, const AlgebraicReal& b);
    friend bool operator<(const AlgebraicReal& a, const AlgebraicReal& b);
    friend bool operator<=(const AlgebraicReal& a, const AlgebraicReal& b);
    friend bool operator>(const AlgebraicReal& a, const AlgebraicReal& b);
    friend bool operator>=(const AlgebraicReal& a, const AlgebraicReal& b);

  private:
    // Representation reduced mod the field modulus, trailing zeros stripped.
    std::vector<mpq_class> rep_;
    FieldPtr field_;  // empty pointer = plain rational (rep_ size <= 1)

    void reduce_();
    friend FieldPtr common_field(const AlgebraicReal& a, const AlgebraicReal& b);
};

// Named wrappers (the operator forms are the primary interface).
AlgebraicReal add(const AlgebraicReal& a, const AlgebraicReal& b);
AlgebraicReal sub(const AlgebraicReal& a, const AlgebraicReal& b);
AlgebraicReal mul(const AlgebraicReal& a, const AlgebraicReal& b);
AlgebraicReal neg(const AlgebraicReal& a);
AlgebraicReal inv(const AlgebraicReal& a);  // DivisionByZero on 0
int sign(const AlgebraicReal& a);
AlgebraicReal abs(const AlgebraicReal& a);

// cos(pi/m) as an element of `field`; requires m | field->L (NotInField).
// The result is certified: its double equals cos(pi/m) via the exact test
// equals_cos_pi_over below, asserted at construction.
AlgebraicReal embed_cos(long m, const FieldPtr& field);

// Exact test  v == cos(pi/m)  for m >= 1:  2v must be annihilated by
// minpoly_two_cos(2m) and lie in the isolating interval of that polynomial's
// largest root (the largest root of Psi_{2m} is exactly 2cos(pi/m)).
bool equals_cos_pi_over(const AlgebraicReal& v, long m);

// Power-sum polynomial p_k with p_k(x + 1/x) = x^k + x^{-k}:
// p_0 = 2, p_1 = y, p_k = y*p_{k-1} - p_{k-2}.
RationalPoly power_sum_poly(long k);

// Hashing (for deduplication maps; exact comparison resolves collisions).
std::size_t hash_mpq(const mpq_class& q);
std::size_t hash_algebraic(const AlgebraicReal& a);
inline void hash_combine(std::size_t& seed, std::size_t v) {
    seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace coxdef

// ---------------------------------------------------------------------------
// Eigen scalar adapter
// ---------------------------------------------------------------------------
#include <Eigen/Core>

namespace Eigen {
template <>
struct NumTraits<coxdef::AlgebraicReal> {
    using Real = coxdef::AlgebraicReal;
    using NonInteger = coxdef::AlgebraicReal;
    using Nested = coxdef::AlgebraicReal;
    using Literal = coxdef::AlgebraicReal;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 8,
        AddCost = 60,
        MulCost = 300,
    };
    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }
};
}  // namespace Eigen

namespace coxdef {
using Mat = Eigen::Matrix<AlgebraicReal, Eigen::Dynamic, Eigen::Dynamic>;
using Vec = Eigen::Matrix<AlgebraicReal, Eigen::Dynamic, 1>;
}  // namespace coxdef

#endif  // COXDEF_ALGEBRA_HPP
