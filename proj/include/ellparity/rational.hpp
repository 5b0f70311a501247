#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ellparity {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer num(const Rational& x) { return boost::multiprecision::numerator(x); }
inline Integer den(const Rational& x) { return boost::multiprecision::denominator(x); }

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingularModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedCaseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Valuations take values in Z union {+infinity}; the infinite value is a
// first-class state, not a sentinel integer.
class ExtInt {
public:
    ExtInt() : finite_(true), v_(0) {}
    ExtInt(long v) : finite_(true), v_(v) {}  // NOLINT(google-explicit-constructor)
    static ExtInt infinity() {
        ExtInt e;
        e.finite_ = false;
        return e;
    }
    bool is_finite() const { return finite_; }
    long value() const {
        if (!finite_) throw InputError("ExtInt: infinite valuation has no integer value");
        return v_;
    }
    ExtInt operator+(const ExtInt& o) const {
        if (!finite_ || !o.finite_) return infinity();
        return ExtInt(v_ + o.v_);
    }
    bool operator==(const ExtInt& o) const {
        return finite_ == o.finite_ && (!finite_ || v_ == o.v_);
    }
    bool operator!=(const ExtInt& o) const { return !(*this == o); }
    bool operator<(const ExtInt& o) const {
        if (!finite_) return false;
        if (!o.finite_) return true;
        return v_ < o.v_;
    }
    std::string str() const { return finite_ ? std::to_string(v_) : std::string("+inf"); }

private:
    bool finite_;
    long v_;
};

// ord_p of an integer; 0 maps to +infinity.
inline ExtInt valuation(const Integer& x, const Integer& p) {
    if (p < 2) throw InputError("valuation: p must be at least 2");
    if (x == 0) return ExtInt::infinity();
    Integer y = x;
    long v = 0;
    while (y % p == 0) {
        y /= p;
        ++v;
    }
    return ExtInt(v);
}

inline ExtInt valuation(const Rational& x, const Integer& p) {
    if (x == 0) return ExtInt::infinity();
    return ExtInt(valuation(num(x), p).value() - valuation(den(x), p).value());
}

// x / p^ord_p(x) as a rational (the p-unit part).
inline Rational unit_part(const Rational& x, const Integer& p) {
    if (x == 0) throw InputError("unit_part of zero");
    long v = valuation(x, p).value();
    long a = v < 0 ? -v : v;
    Rational ppow = 1;
    for (long i = 0; i < a; ++i) ppow *= Rational(p);
    Rational r;
    if (v >= 0)
        r = x / ppow;
    else
        r = x * ppow;
    return r;
}

inline Integer pow_int(const Integer& b, unsigned long e) {
    Integer r = 1, x = b;
    while (e) {
        if (e & 1) r *= x;
        x *= x;
        e >>= 1;
    }
    return r;
}

inline Rational pow_rat(const Rational& b, long e) {
    Rational r = 1, x = (e >= 0) ? b : Rational(1) / b;
    unsigned long a = static_cast<unsigned long>(e >= 0 ? e : -e);
    while (a) {
        if (a & 1) r *= x;
        x *= x;
        a >>= 1;
    }
    return r;
}

inline Integer isqrt(const Integer& n) {
    if (n < 0) throw InputError("isqrt of negative");
    return boost::multiprecision::sqrt(n);
}

inline bool is_square(const Integer& n) {
    if (n < 0) return false;
    Integer r = isqrt(n);
    return r * r == n;
}

inline bool is_square(const Rational& q) {
    return q >= 0 && is_square(num(q)) && is_square(den(q));
}

inline std::optional<Rational> sqrt_exact(const Rational& q) {
    if (!is_square(q)) return std::nullopt;
    return Rational(isqrt(num(q)), isqrt(den(q)));
}

// --- small deterministic PRNG (stable across platforms, unlike
// std::uniform_int_distribution) ---
struct SplitMix64 {
    uint64_t s;
    explicit SplitMix64(uint64_t seed) : s(seed) {}
    uint64_t next() {
        uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // uniform in [0, n)
    uint64_t below(uint64_t n) { return n ? next() % n : 0; }
    long range(long lo, long hi) {  // inclusive
        return lo + static_cast<long>(below(static_cast<uint64_t>(hi - lo + 1)));
    }
};

// --- integer factorization for the harness ---

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}
inline uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

// deterministic for n < 3.3e24 with this witness set
inline bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool comp = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                comp = false;
                break;
            }
        }
        if (comp) return false;
    }
    return true;
}

inline uint64_t gcd_u64(uint64_t a, uint64_t b) {
    while (b) {
        uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline uint64_t brent_rho(uint64_t n, uint64_t c0) {
    if (n % 2 == 0) return 2;
    uint64_t y = 2, c = c0, m = 128, g = 1, r = 1, q = 1, x = 0, ys = 0;
    while (g == 1) {
        x = y;
        for (uint64_t i = 0; i < r; ++i) y = (mulmod_u64(y, y, n) + c) % n;
        uint64_t k = 0;
        while (k < r && g == 1) {
            ys = y;
            uint64_t lim = std::min(m, r - k);
            for (uint64_t i = 0; i < lim; ++i) {
                y = (mulmod_u64(y, y, n) + c) % n;
                q = mulmod_u64(q, x > y ? x - y : y - x, n);
            }
            g = gcd_u64(q, n);
            k += lim;
        }
        r <<= 1;
    }
    if (g == n) {
        g = 1;
        while (g == 1) {
            ys = (mulmod_u64(ys, ys, n) + c) % n;
            g = gcd_u64(x > ys ? x - ys : ys - x, n);
        }
    }
    return g;
}

inline void factor_u64_into(uint64_t n, std::map<Integer, long>& out) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        out[Integer(n)] += 1;
        return;
    }
    for (uint64_t c = 1;; ++c) {
        uint64_t d = brent_rho(n, c);
        if (d != n && d != 1) {
            factor_u64_into(d, out);
            factor_u64_into(n / d, out);
            return;
        }
    }
}

// Factors |n|. Inputs in the harness are at most ~2^63 after trial division.
inline std::map<Integer, long> factor_integer(Integer n) {
    if (n == 0) throw InputError("factor_integer(0)");
    if (n < 0) n = -n;
    std::map<Integer, long> out;
    for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
        while (n % p == 0) {
            out[Integer(p)] += 1;
            n /= p;
        }
    }
    uint64_t d = 17;
    while (n > 1 && Integer(d) * d <= n && d < 100000) {
        while (n % d == 0) {
            out[Integer(d)] += 1;
            n /= d;
        }
        d += 2;
    }
    if (n > 1) {
        if (n > Integer("18446744073709551615"))
            throw UnsupportedCaseError("factor_integer: cofactor exceeds 64 bits");
        factor_u64_into(static_cast<uint64_t>(n), out);
    }
    return out;
}

// Smallest positive squarefree integer in the square class of q.
inline Integer squarefree_part(const Rational& q) {
    if (q == 0) throw InputError("squarefree_part(0)");
    Integer n = num(q) * den(q);
    bool neg = n < 0;
    if (neg) n = -n;
    auto f = factor_integer(n);
    Integer r = 1;
    for (auto& [p, e] : f)
        if (e % 2) r *= p;
    return neg ? -r : r;
}

}  // namespace ellparity
