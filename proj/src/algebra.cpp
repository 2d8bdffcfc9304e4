#include "coxdef/algebra.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <utility>

namespace coxdef {

namespace {

int sgn_q(const mpq_class& q) { return mpz_sgn(q.get_num().get_mpz_t()); }

// Greatest common divisor of all coefficients (positive), used to keep Sturm
// remainder chains small.  Returns 1 for the zero polynomial.
mpq_class poly_content(const RationalPoly& p) {
    if (p.is_zero()) return mpq_class(1);
    mpz_class num_gcd = 0;
    mpz_class den_lcm = 1;
    for (const auto& q : p.c) {
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), q.get_num().get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), q.get_den().get_mpz_t());
    }
    mpq_class content(num_gcd);
    content /= mpq_class(den_lcm);
    if (sgn_q(content) < 0) content = -content;
    if (sgn_q(content) == 0) content = 1;
    return content;
}

RationalPoly make_primitive(const RationalPoly& p) {
    if (p.is_zero()) return p;
    mpq_class content = poly_content(p);
    RationalPoly out = p;
    for (auto& q : out.c) q /= content;
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// RationalPoly
// ---------------------------------------------------------------------------

RationalPoly::RationalPoly(std::vector<mpq_class> coeffs) : c(std::move(coeffs)) {
    normalize();
}

void RationalPoly::normalize() {
    while (!c.empty() && sgn_q(c.back()) == 0) c.pop_back();
}

RationalPoly RationalPoly::constant(const mpq_class& v) {
    RationalPoly p;
    if (sgn_q(v) != 0) p.c = {v};
    return p;
}

RationalPoly RationalPoly::x() {
    RationalPoly p;
    p.c = {mpq_class(0), mpq_class(1)};
    return p;
}

bool operator==(const RationalPoly& a, const RationalPoly& b) { return a.c == b.c; }

RationalPoly operator+(const RationalPoly& a, const RationalPoly& b) {
    RationalPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), mpq_class(0));
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
    r.normalize();
    return r;
}

RationalPoly operator-(const RationalPoly& a, const RationalPoly& b) {
    RationalPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), mpq_class(0));
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
    r.normalize();
    return r;
}

RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
    if (a.is_zero() || b.is_zero()) return RationalPoly();
    RationalPoly r;
    r.c.assign(a.c.size() + b.c.size() - 1, mpq_class(0));
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (sgn_q(a.c[i]) == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    }
    r.normalize();
    return r;
}

RationalPoly operator*(const mpq_class& k, const RationalPoly& a) {
    if (sgn_q(k) == 0) return RationalPoly();
    RationalPoly r = a;
    for (auto& q : r.c) q *= k;
    return r;
}

RationalPoly operator-(const RationalPoly& a) {
    RationalPoly r = a;
    for (auto& q : r.c) q = -q;
    return r;
}

void poly_divrem(const RationalPoly& a, const RationalPoly& b, RationalPoly& q,
                 RationalPoly& r) {
    if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
    r = a;
    q = RationalPoly();
    const int db = b.degree();
    if (a.degree() < db) return;
    q.c.assign(a.degree() - db + 1, mpq_class(0));
    const mpq_class& blead = b.lead();
    while (r.degree() >= db) {
        const int k = r.degree() - db;
        mpq_class factor = r.lead() / blead;
        q.c[k] = factor;
        // r -= factor * x^k * b
        for (int i = 0; i <= db; ++i) r.c[k + i] -= factor * b.c[i];
        r.normalize();
    }
    q.normalize();
}

RationalPoly poly_derivative(const RationalPoly& a) {
    RationalPoly d;
    if (a.degree() < 1) return d;
    d.c.resize(a.c.size() - 1);
    for (size_t i = 1; i < a.c.size(); ++i) d.c[i - 1] = mpq_class(static_cast<long>(i)) * a.c[i];
    d.normalize();
    return d;
}

mpq_class poly_eval(const RationalPoly& a, const mpq_class& x) {
    mpq_class acc(0);
    for (auto it = a.c.rbegin(); it != a.c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::string poly_to_string(const RationalPoly& a) {
    if (a.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = a.degree(); i >= 0; --i) {
        mpq_class v = a.c[static_cast<size_t>(i)];
        if (sgn_q(v) == 0) continue;
        if (first) {
            if (sgn_q(v) < 0) {
                os << "-";
                v = -v;
            }
        } else {
            os << (sgn_q(v) > 0 ? " + " : " - ");
            if (sgn_q(v) < 0) v = -v;
        }
        first = false;
        if (i == 0) {
            os << v.get_str();
        } else {
            if (v != 1) os << v.get_str() << "*";
            os << "x";
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Sturm sequences and root isolation
// ---------------------------------------------------------------------------

namespace {

std::vector<RationalPoly> sturm_sequence(const RationalPoly& f) {
    std::vector<RationalPoly> seq;
    seq.push_back(make_primitive(f));
    RationalPoly d = poly_derivative(f);
    if (d.is_zero()) return seq;
    seq.push_back(make_primitive(d));
    while (true) {
        RationalPoly q, r;
        poly_divrem(seq[seq.size() - 2], seq.back(), q, r);
        if (r.is_zero()) break;
        seq.push_back(make_primitive(-r));
    }
    return seq;
}

// Sign variations of the sequence evaluated at x, zeros ignored.
int variations_at(const std::vector<RationalPoly>& seq, const mpq_class& x) {
    int count = 0;
    int prev = 0;
    for (const auto& p : seq) {
        const int s = sgn_q(poly_eval(p, x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++count;
        prev = s;
    }
    return count;
}

}  // namespace

int sturm_count(const RationalPoly& f, const mpq_class& a, const mpq_class& b) {
    if (f.degree() < 1) return 0;
    const auto seq = sturm_sequence(f);
    return variations_at(seq, a) - variations_at(seq, b);
}

void isolate_largest_root(const RationalPoly& f, mpq_class& lo, mpq_class& hi) {
    if (f.is_zero() || f.degree() < 1)
        throw InternalInvariantBroken("isolate_largest_root: need positive degree");
    if (sgn_q(f.lead()) <= 0)
        throw InternalInvariantBroken("isolate_largest_root: need positive lead");
    if (f.degree() == 1) {
        // Exact rational root; (root-1, root] with f(lo) < 0 = f(hi).
        mpq_class root = -f.c[0] / f.c[1];
        lo = root - 1;
        hi = root;
        return;
    }
    // Cauchy-style bound: every root has |x| < 1 + max|c_i|/lead.
    mpq_class bound(2);
    for (size_t i = 0; i + 1 < f.c.size(); ++i) {
        mpq_class t = abs(f.c[i]) / f.lead();
        if (t + 1 > bound) bound = t + 1;
    }
    const auto seq = sturm_sequence(f);
    lo = -bound;
    hi = bound;
    int total = variations_at(seq, lo) - variations_at(seq, hi);
    if (total < 1) throw InternalInvariantBroken("isolate_largest_root: no real roots");
    while (total > 1) {
        mpq_class mid = (lo + hi) / 2;
        const int upper = variations_at(seq, mid) - variations_at(seq, hi);
        if (upper >= 1) {
            lo = mid;
            total = upper;
        } else {
            hi = mid;
            total -= upper;  // upper == 0
            total = variations_at(seq, lo) - variations_at(seq, hi);
        }
    }
    // Endpoint sign invariant (used for cheap refinement later): exactly one
    // simple root in (lo, hi] and positive lead force f(lo) < 0 < f(hi) as
    // long as neither endpoint is a root; irreducible inputs of degree >= 2
    // have no rational roots, so this holds.
    if (sgn_q(poly_eval(f, lo)) >= 0 || sgn_q(poly_eval(f, hi)) <= 0)
        throw InternalInvariantBroken("isolate_largest_root: endpoint signs");
}

// ---------------------------------------------------------------------------
// Cyclotomic polynomials and minimal polynomials of 2cos
// ---------------------------------------------------------------------------

RationalPoly cyclotomic(long n) {
    static std::map<long, RationalPoly> cache;
    static std::mutex cache_mutex;
    if (n < 1) throw InternalInvariantBroken("cyclotomic: n must be >= 1");
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    // x^n - 1 divided by the product of Phi_d over proper divisors d of n.
    RationalPoly xn_minus_1;
    xn_minus_1.c.assign(static_cast<size_t>(n) + 1, mpq_class(0));
    xn_minus_1.c[0] = -1;
    xn_minus_1.c[static_cast<size_t>(n)] = 1;
    RationalPoly denom = RationalPoly::constant(1);
    for (long d = 1; d < n; ++d) {
        if (n % d == 0) denom = denom * cyclotomic(d);
    }
    RationalPoly q, r;
    poly_divrem(xn_minus_1, denom, q, r);
    if (!r.is_zero()) throw InternalInvariantBroken("cyclotomic: division not exact");
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        cache.emplace(n, q);
    }
    return q;
}

RationalPoly power_sum_poly(long k) {
    // p_0 = 2, p_1 = y, p_k = y*p_{k-1} - p_{k-2}; p_k(x + 1/x) = x^k + x^-k.
    if (k < 0) throw InternalInvariantBroken("power_sum_poly: k must be >= 0");
    RationalPoly prev = RationalPoly::constant(2);
    if (k == 0) return prev;
    RationalPoly cur = RationalPoly::x();
    for (long i = 2; i <= k; ++i) {
        RationalPoly next = RationalPoly::x() * cur - prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

RationalPoly minpoly_two_cos(long n) {
    if (n < 1) throw InternalInvariantBroken("minpoly_two_cos: n must be >= 1");
    if (n == 1) {
        // 2cos(2pi) = 2
        return RationalPoly({mpq_class(-2), mpq_class(1)});
    }
    if (n == 2) {
        // 2cos(pi) = -2
        return RationalPoly({mpq_class(2), mpq_class(1)});
    }
    // Phi_n is palindromic of even degree N for n > 2, and
    // Phi_n(x) = x^{N/2} * Psi_n(x + 1/x); read off Psi_n in the p_j basis.
    const RationalPoly phi = cyclotomic(n);
    const int N = phi.degree();
    if (N % 2 != 0) throw InternalInvariantBroken("minpoly_two_cos: odd phi degree");
    const int h = N / 2;
    RationalPoly psi = RationalPoly::constant(phi.c[static_cast<size_t>(h)]);
    for (int j = 1; j <= h; ++j) {
        psi = psi + phi.c[static_cast<size_t>(h + j)] * power_sum_poly(j);
    }
    return psi;
}

// ---------------------------------------------------------------------------
// NumberField
// ---------------------------------------------------------------------------

namespace {
constexpr long kMaxFieldL = 1000;
constexpr int kMaxFieldDegree = 64;
}  // namespace

FieldPtr field_for_labels(const std::set<long>& labels) {
    long L = 2;  // empty label set: everything is rational
    for (long m : labels) {
        if (m < 2) throw InternalInvariantBroken("field_for_labels: labels must be >= 2");
        L = std::lcm(L, m);
        if (L > kMaxFieldL)
            throw FieldTooLarge("field_for_labels: lcm of labels exceeds " +
                                std::to_string(kMaxFieldL));
    }
    auto field = std::make_shared<NumberField>();
    field->L = L;
    field->modulus = minpoly_two_cos(2 * L);
    if (field->modulus.degree() > kMaxFieldDegree)
        throw FieldTooLarge("field_for_labels: field degree exceeds " +
                            std::to_string(kMaxFieldDegree));
    isolate_largest_root(field->modulus, field->lo, field->hi);
    return field;
}

// ---------------------------------------------------------------------------
// AlgebraicReal
// ---------------------------------------------------------------------------

AlgebraicReal::AlgebraicReal(int v) {
    if (v != 0) rep_ = {mpq_class(v)};
}

AlgebraicReal::AlgebraicReal(long v) {
    if (v != 0) rep_ = {mpq_class(v)};
}

AlgebraicReal::AlgebraicReal(const mpq_class& v) {
    if (sgn_q(v) != 0) rep_ = {v};
}

AlgebraicReal::AlgebraicReal(std::vector<mpq_class> rep, FieldPtr field)
    : rep_(std::move(rep)), field_(std::move(field)) {
    reduce_();
}

void AlgebraicReal::reduce_() {
    if (field_) {
        const int d = field_->modulus.degree();
        if (d == 0) throw InternalInvariantBroken("AlgebraicReal: constant modulus");
        // Reduce mod the monic modulus.
        while (static_cast<int>(rep_.size()) - 1 >= d) {
            const size_t k = rep_.size() - 1 - static_cast<size_t>(d);
            mpq_class factor = rep_.back();
            rep_.pop_back();
            if (sgn_q(factor) != 0) {
                for (int i = 0; i < d; ++i)
                    rep_[k + static_cast<size_t>(i)] -= factor * field_->modulus.c[static_cast<size_t>(i)];
            }
        }
    }
    while (!rep_.empty() && sgn_q(rep_.back()) == 0) rep_.pop_back();
    if (!field_ && rep_.size() > 1)
        throw InternalInvariantBroken("AlgebraicReal: non-constant rep without field");
    if (rep_.empty()) field_.reset();  // canonical zero is field-free
}

AlgebraicReal AlgebraicReal::primitive(const FieldPtr& field) {
    if (!field) throw InternalInvariantBroken("primitive: null field");
    return AlgebraicReal({mpq_class(0), mpq_class(1)}, field);
}

mpq_class AlgebraicReal::as_rational() const {
    if (rep_.empty()) return mpq_class(0);
    if (rep_.size() == 1) return rep_[0];
    throw InternalInvariantBroken("as_rational: value is not rational");
}

FieldPtr common_field(const AlgebraicReal& a, const AlgebraicReal& b) {
    if (!a.field_) return b.field_;
    if (!b.field_) return a.field_;
    if (a.field_ == b.field_) return a.field_;
    if (a.field_->L == b.field_->L && a.field_->modulus == b.field_->modulus)
        return a.field_;
    throw InternalInvariantBroken("AlgebraicReal: mixing distinct number fields");
}

AlgebraicReal operator+(const AlgebraicReal& a, const AlgebraicReal& b) {
    FieldPtr f = common_field(a, b);
    std::vector<mpq_class> rep(std::max(a.rep_.size(), b.rep_.size()), mpq_class(0));
    for (size_t i = 0; i < a.rep_.size(); ++i) rep[i] = a.rep_[i];
    for (size_t i = 0; i < b.rep_.size(); ++i) rep[i] += b.rep_[i];
    return AlgebraicReal(std::move(rep), std::move(f));
}

AlgebraicReal operator-(const AlgebraicReal& a, const AlgebraicReal& b) {
    FieldPtr f = common_field(a, b);
    std::vector<mpq_class> rep(std::max(a.rep_.size(), b.rep_.size()), mpq_class(0));
    for (size_t i = 0; i < a.rep_.size(); ++i) rep[i] = a.rep_[i];
    for (size_t i = 0; i < b.rep_.size(); ++i) rep[i] -= b.rep_[i];
    return AlgebraicReal(std::move(rep), std::move(f));
}

AlgebraicReal operator*(const AlgebraicReal& a, const AlgebraicReal& b) {
    if (a.is_zero() || b.is_zero()) return AlgebraicReal();
    FieldPtr f = common_field(a, b);
    std::vector<mpq_class> rep(a.rep_.size() + b.rep_.size() - 1, mpq_class(0));
    for (size_t i = 0; i < a.rep_.size(); ++i) {
        if (sgn_q(a.rep_[i]) == 0) continue;
        for (size_t j = 0; j < b.rep_.size(); ++j) rep[i + j] += a.rep_[i] * b.rep_[j];
    }
    return AlgebraicReal(std::move(rep), std::move(f));
}

AlgebraicReal AlgebraicReal::operator-() const {
    AlgebraicReal r = *this;
    for (auto& q : r.rep_) q = -q;
    return r;
}

AlgebraicReal& AlgebraicReal::operator+=(const AlgebraicReal& b) {
    *this = *this + b;
    return *this;
}
AlgebraicReal& AlgebraicReal::operator-=(const AlgebraicReal& b) {
    *this = *this - b;
    return *this;
}
AlgebraicReal& AlgebraicReal::operator*=(const AlgebraicReal& b) {
    *this = *this * b;
    return *this;
}

AlgebraicReal inv(const AlgebraicReal& a) {
    if (a.is_zero()) throw DivisionByZero("inv: division by zero");
    if (a.is_rational()) {
        mpq_class v = a.as_rational();
        AlgebraicReal r(mpq_class(1) / v);
        // keep the field so downstream ops stay in it
        if (a.field()) return AlgebraicReal({mpq_class(1) / v}, a.field());
        return r;
    }
    // Extended Euclid over Q[x]: u*rep + v*modulus = g (constant, since the
    // modulus is irreducible and 0 < deg rep < deg modulus).
    RationalPoly r0 = a.field()->modulus;
    RationalPoly r1(std::vector<mpq_class>(a.rep().begin(), a.rep().end()));
    RationalPoly s0;  // coefficient of rep in r0's expansion: 0
    RationalPoly s1 = RationalPoly::constant(1);
    while (r1.degree() > 0) {
        RationalPoly q, rem;
        poly_divrem(r0, r1, q, rem);
        RationalPoly s2 = s0 - q * s1;
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (r1.is_zero())
        throw InternalInvariantBroken("inv: reducible modulus detected");
    // r1 is the constant gcd; u = s1 / r1.
    mpq_class g = r1.c[0];
    std::vector<mpq_class> rep = s1.c;
    for (auto& q : rep) q /= g;
    return AlgebraicReal(std::move(rep), a.field());
}

AlgebraicReal operator/(const AlgebraicReal& a, const AlgebraicReal& b) {
    return a * inv(b);
}

bool operator==(const AlgebraicReal& a, const AlgebraicReal& b) {
    // Defined representations are canonical within a field, but one side may
    // be a plain rational: compare via the difference.
    if (a.rep_.size() != b.rep_.size()) return (a - b).is_zero();
    return (a - b).is_zero();
}
bool operator!=(const AlgebraicReal& a, const AlgebraicReal& b) { return !(a == b); }
bool operator<(const AlgebraicReal& a, const AlgebraicReal& b) {
    return (a - b).sign() < 0;
}
bool operator<=(const AlgebraicReal& a, const AlgebraicReal& b) {
    return (a - b).sign() <= 0;
}
bool operator>(const AlgebraicReal& a, const AlgebraicReal& b) {
    return (a - b).sign() > 0;
}
bool operator>=(const AlgebraicReal& a, const AlgebraicReal& b) {
    return (a - b).sign() >= 0;
}

namespace {

// Closed rational interval arithmetic, just enough for Horner evaluation.
struct IntervalQ {
    mpq_class lo, hi;
};

IntervalQ interval_add(const IntervalQ& a, const IntervalQ& b) {
    return {a.lo + b.lo, a.hi + b.hi};
}

IntervalQ interval_mul(const IntervalQ& a, const IntervalQ& b) {
    mpq_class p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    mpq_class lo = std::min(std::min(p1, p2), std::min(p3, p4));
    mpq_class hi = std::max(std::max(p1, p2), std::max(p3, p4));
    return {lo, hi};
}

IntervalQ interval_horner(const std::vector<mpq_class>& rep, const IntervalQ& z) {
    IntervalQ acc{mpq_class(0), mpq_class(0)};
    for (auto it = rep.rbegin(); it != rep.rend(); ++it) {
        acc = interval_mul(acc, z);
        acc = interval_add(acc, IntervalQ{*it, *it});
    }
    return acc;
}

}  // namespace

int AlgebraicReal::sign() const {
    if (rep_.empty()) return 0;
    if (rep_.size() == 1) return sgn_q(rep_[0]);
    // Nonzero is guaranteed: deg rep < deg modulus and the modulus is the
    // minimal polynomial of z, so rep(z) != 0.  Refine the isolating interval
    // of z until the Horner enclosure of rep(z) excludes zero.  Bisection uses
    // the endpoint sign invariant modulus(lo) < 0 < modulus(hi): the single
    // root in (lo, hi] is simple, so sign(modulus(mid)) > 0 puts it below mid.
    mpq_class zl = field_->lo;
    mpq_class zh = field_->hi;
    while (true) {
        IntervalQ val = interval_horner(rep_, IntervalQ{zl, zh});
        if (sgn_q(val.lo) > 0) return 1;
        if (sgn_q(val.hi) < 0) return -1;
        mpq_class mid = (zl + zh) / 2;
        if (sgn_q(poly_eval(field_->modulus, mid)) > 0)
            zh = mid;
        else
            zl = mid;
    }
}

void AlgebraicReal::enclosure(mpq_class& lo, mpq_class& hi) const {
    if (rep_.size() <= 1) {
        lo = hi = rep_.empty() ? mpq_class(0) : rep_[0];
        return;
    }
    mpq_class zl = field_->lo;
    mpq_class zh = field_->hi;
    // 80 bisection steps give an enclosure far below any display need.
    for (int i = 0; i < 80; ++i) {
        mpq_class mid = (zl + zh) / 2;
        if (sgn_q(poly_eval(field_->modulus, mid)) > 0)
            zh = mid;
        else
            zl = mid;
    }
    IntervalQ val = interval_horner(rep_, IntervalQ{zl, zh});
    lo = val.lo;
    hi = val.hi;
}

double AlgebraicReal::to_double() const {
    mpq_class lo, hi;
    enclosure(lo, hi);
    mpq_class mid = (lo + hi) / 2;
    return mid.get_d();
}

std::string AlgebraicReal::to_string() const {
    if (rep_.empty()) return "0";
    if (rep_.size() == 1) return rep_[0].get_str();
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < rep_.size(); ++i) {
        if (i) os << ", ";
        os << rep_[i].get_str();
    }
    os << "] (z = 2cos(pi/" << field_->L << "))";
    return os.str();
}

AlgebraicReal add(const AlgebraicReal& a, const AlgebraicReal& b) { return a + b; }
AlgebraicReal sub(const AlgebraicReal& a, const AlgebraicReal& b) { return a - b; }
AlgebraicReal mul(const AlgebraicReal& a, const AlgebraicReal& b) { return a * b; }
AlgebraicReal neg(const AlgebraicReal& a) { return -a; }
int sign(const AlgebraicReal& a) { return a.sign(); }
AlgebraicReal abs(const AlgebraicReal& a) { return a.sign() < 0 ? -a : a; }

std::size_t hash_mpq(const mpq_class& q) {
    // Fold the numerator and denominator limbs into an FNV-style hash,
    // seeding with the sign so that q and -q differ.
    std::size_t h = 1469598103934665603ULL;
    const auto fold_mpz = [&h](const mpz_class& z) {
        const mpz_srcptr p = z.get_mpz_t();
        h = (h ^ static_cast<std::size_t>(mpz_sgn(p) + 2)) * 1099511628211ULL;
        const size_t n = mpz_size(p);
        for (size_t i = 0; i < n; ++i)
            h = (h ^ static_cast<std::size_t>(mpz_getlimbn(p, i))) * 1099511628211ULL;
    };
    fold_mpz(q.get_num());
    fold_mpz(q.get_den());
    return h;
}

std::size_t hash_algebraic(const AlgebraicReal& a) {
    std::size_t h = a.rep().size();
    for (const auto& q : a.rep()) hash_combine(h, hash_mpq(q));
    return h;
}

bool equals_cos_pi_over(const AlgebraicReal& v, long m) {
    if (m < 1) throw InternalInvariantBroken("equals_cos_pi_over: m must be >= 1");
    const AlgebraicReal w = v + v;  // compare 2v against 2cos(pi/m)
    const RationalPoly psi = minpoly_two_cos(2 * m);
    // Exact Horner evaluation of psi at w.
    AlgebraicReal acc;
    for (auto it = psi.c.rbegin(); it != psi.c.rend(); ++it)
        acc = acc * w + AlgebraicReal(*it);
    if (!acc.is_zero()) return false;
    // w is a root of psi; it equals 2cos(pi/m) iff it is the LARGEST root
    // (2cos(k*pi/m) over gcd(k, 2m) = 1 is maximized at k = 1).
    mpq_class lo, hi;
    isolate_largest_root(psi, lo, hi);
    return (w - AlgebraicReal(lo)).sign() > 0 && (AlgebraicReal(hi) - w).sign() >= 0;
}

AlgebraicReal embed_cos(long m, const FieldPtr& field) {
    if (m < 1) throw InternalInvariantBroken("embed_cos: m must be >= 1");
    if (!field) {
        // Without a field only the rational values are available.
        if (m == 1) return AlgebraicReal(mpq_class(-1));
        if (m == 2) return AlgebraicReal(mpq_class(0));
        if (m == 3) return AlgebraicReal(mpq_class(1, 2));
        throw NotInField("embed_cos: cos(pi/" + std::to_string(m) +
                         ") needs a number field");
    }
    if (m == 1) return AlgebraicReal({mpq_class(-1)}, field);
    if (field->L % m != 0)
        throw NotInField("embed_cos: " + std::to_string(m) + " does not divide L = " +
                         std::to_string(field->L));
    // 2cos(pi/m) = p_k(z) with k = L/m, since p_k(2cos t) = 2cos(kt).
    const RationalPoly pk = power_sum_poly(field->L / m);
    std::vector<mpq_class> rep = pk.c;
    for (auto& q : rep) q /= 2;
    AlgebraicReal result(std::move(rep), field);
    if (!equals_cos_pi_over(result, m))
        throw InternalInvariantBroken("embed_cos: certification failed");
    return result;
}

}  // namespace coxdef
