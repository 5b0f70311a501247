#pragma once

#include "ellparity/polynomial.hpp"
#include "ellparity/rational.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <tuple>
#include <vector>

namespace ellparity {

// F_{p^f} as F_p[t]/(m(t)) with m the canonical defining polynomial:
// the lexicographically smallest monic irreducible of degree f
// (coefficient string c_{f-1}..c_0 read as a base-p counter).
// Coefficients live in int64; p is assumed < 2^62.
class FFField;
using FFFieldPtr = std::shared_ptr<const FFField>;

class FFElement {
public:
    FFElement() : F_(nullptr), c_{0} {}
    FFElement(FFFieldPtr F, std::vector<int64_t> c);
    explicit FFElement(int v) : F_(nullptr), c_{v} {}  // scalar; attached lazily

    const FFFieldPtr& field() const { return F_; }
    const std::vector<int64_t>& coeffs() const { return c_; }
    bool is_zero() const {
        for (auto a : c_)
            if (a) return false;
        return true;
    }
    bool operator==(const FFElement& o) const;
    FFElement operator+(const FFElement& o) const;
    FFElement operator-(const FFElement& o) const;
    FFElement operator-() const;
    FFElement operator*(const FFElement& o) const;
    FFElement operator/(const FFElement& o) const;
    FFElement inverse() const;
    FFElement pow(Integer e) const;

    // total order used for canonical choices (degree-major coefficient order)
    bool operator<(const FFElement& o) const { return c_ < o.c_; }

private:
    FFFieldPtr F_;
    std::vector<int64_t> c_;
    friend class FFField;
    void attach(const FFFieldPtr& F);
};

class FFField : public std::enable_shared_from_this<FFField> {
public:
    static FFFieldPtr make(int64_t p, int f);

    int64_t p() const { return p_; }
    int f() const { return f_; }
    Integer order() const { return pow_int(Integer(p_), static_cast<unsigned long>(f_)); }
    const std::vector<int64_t>& modulus() const { return mod_; }

    FFElement zero() const { return element({0}); }
    FFElement one() const { return element({1}); }
    FFElement gen() const { return f_ == 1 ? element({0}) : element({0, 1}); }
    FFElement from_int(const Integer& n) const {
        Integer r = n % p_;
        if (r < 0) r += p_;
        return element({static_cast<int64_t>(r)});
    }
    FFElement element(std::vector<int64_t> c) const;

    bool is_square(const FFElement& x) const;
    // sqrt of a square (Tonelli-Shanks for odd p, Frobenius for p = 2)
    FFElement sqrt(const FFElement& x) const;
    // y^2 + y = x solvable? (char 2); solves by F_2-linear algebra
    bool artin_schreier_solvable(const FFElement& x) const;

    // all distinct roots in F_{p^f} of a polynomial over this field
    std::vector<FFElement> roots(const Poly<FFElement>& g) const;

    int64_t p_;
    int f_;
    std::vector<int64_t> mod_;  // monic degree f, ascending, coefficients mod p

    int64_t addm(int64_t a, int64_t b) const {
        int64_t r = a + b;
        return r >= p_ ? r - p_ : r;
    }
    int64_t subm(int64_t a, int64_t b) const {
        int64_t r = a - b;
        return r < 0 ? r + p_ : r;
    }
    int64_t mulm(int64_t a, int64_t b) const {
        return static_cast<int64_t>(mulmod_u64(static_cast<uint64_t>(a), static_cast<uint64_t>(b),
                                               static_cast<uint64_t>(p_)));
    }
    int64_t invm(int64_t a) const {
        return static_cast<int64_t>(
            powmod_u64(static_cast<uint64_t>(a), static_cast<uint64_t>(p_ - 2), static_cast<uint64_t>(p_)));
    }
    std::vector<int64_t> mul_raw(const std::vector<int64_t>& a, const std::vector<int64_t>& b) const;
};

inline FFElement::FFElement(FFFieldPtr F, std::vector<int64_t> c) : F_(std::move(F)), c_(std::move(c)) {
    c_.resize(F_->f(), 0);
}

inline void FFElement::attach(const FFFieldPtr& F) {
    if (!F_) {
        int64_t v = c_.empty() ? 0 : c_[0];
        *this = F->from_int(Integer(v));
    }
}

inline FFElement FFField::element(std::vector<int64_t> c) const {
    c.resize(f_, 0);
    for (auto& a : c) {
        a %= p_;
        if (a < 0) a += p_;
    }
    return FFElement(shared_from_this(), std::move(c));
}

inline bool FFElement::operator==(const FFElement& o) const {
    FFElement a = *this, b = o;
    if (!a.F_ && !b.F_) return a.c_[0] == b.c_[0];
    if (!a.F_) a.attach(b.F_);
    if (!b.F_) b.attach(a.F_);
    return a.c_ == b.c_;
}

inline FFElement FFElement::operator+(const FFElement& o) const {
    FFElement a = *this, b = o;
    if (!a.F_ && !b.F_) return FFElement(static_cast<int>(a.c_[0] + b.c_[0]));
    if (!a.F_) a.attach(b.F_);
    if (!b.F_) b.attach(a.F_);
    std::vector<int64_t> r(a.c_.size());
    for (size_t i = 0; i < r.size(); ++i) r[i] = a.F_->addm(a.c_[i], b.c_[i]);
    return FFElement(a.F_, std::move(r));
}

inline FFElement FFElement::operator-(const FFElement& o) const {
    FFElement a = *this, b = o;
    if (!a.F_ && !b.F_) return FFElement(static_cast<int>(a.c_[0] - b.c_[0]));
    if (!a.F_) a.attach(b.F_);
    if (!b.F_) b.attach(a.F_);
    std::vector<int64_t> r(a.c_.size());
    for (size_t i = 0; i < r.size(); ++i) r[i] = a.F_->subm(a.c_[i], b.c_[i]);
    return FFElement(a.F_, std::move(r));
}

inline FFElement FFElement::operator-() const {
    if (!F_) return FFElement(-static_cast<int>(c_[0]));
    std::vector<int64_t> r(c_.size());
    for (size_t i = 0; i < r.size(); ++i) r[i] = F_->subm(0, c_[i]);
    return FFElement(F_, std::move(r));
}

inline std::vector<int64_t> FFField::mul_raw(const std::vector<int64_t>& a,
                                             const std::vector<int64_t>& b) const {
    std::vector<int64_t> prod(2 * f_ - 1, 0);
    for (int i = 0; i < f_; ++i) {
        if (!a[i]) continue;
        for (int j = 0; j < f_; ++j)
            prod[i + j] = addm(prod[i + j], mulm(a[i], b[j]));
    }
    for (int k = 2 * f_ - 2; k >= f_; --k) {
        int64_t t = prod[k];
        if (!t) continue;
        prod[k] = 0;
        for (int j = 0; j < f_; ++j)
            prod[k - f_ + j] = subm(prod[k - f_ + j], mulm(t, mod_[j]));
    }
    prod.resize(f_);
    return prod;
}

inline FFElement FFElement::operator*(const FFElement& o) const {
    FFElement a = *this, b = o;
    if (!a.F_ && !b.F_) return FFElement(static_cast<int>(a.c_[0] * b.c_[0]));
    if (!a.F_) a.attach(b.F_);
    if (!b.F_) b.attach(a.F_);
    return FFElement(a.F_, a.F_->mul_raw(a.c_, b.c_));
}

inline FFElement FFElement::pow(Integer e) const {
    if (!F_) throw InputError("pow on unattached scalar");
    if (e < 0) return inverse().pow(-e);
    FFElement r = F_->one(), x = *this;
    while (e > 0) {
        if (e % 2 == 1) r = r * x;
        x = x * x;
        e /= 2;
    }
    return r;
}

inline FFElement FFElement::inverse() const {
    if (is_zero()) throw InputError("inverse of zero in finite field");
    return pow(F_->order() - 2);
}

inline FFElement FFElement::operator/(const FFElement& o) const {
    FFElement a = *this, b = o;
    if (!a.F_) a.attach(b.F_);
    if (!b.F_) b.attach(a.F_);
    return a * b.inverse();
}

namespace detail {

inline bool ff_poly_irreducible(int64_t p, const std::vector<int64_t>& m);

}  // namespace detail

inline FFFieldPtr FFField::make(int64_t p, int f) {
    auto F = std::make_shared<FFField>();
    F->p_ = p;
    F->f_ = f;
    if (f == 1) {
        F->mod_ = {0, 1};
        return F;
    }
    // canonical modulus: first monic irreducible in base-p counter order
    std::vector<int64_t> c(f, 0);
    for (;;) {
        std::vector<int64_t> m = c;
        m.push_back(1);
        if (detail::ff_poly_irreducible(p, m)) {
            F->mod_ = m;
            return F;
        }
        int i = 0;
        while (i < f && ++c[i] == p) c[i++] = 0;
        if (i == f) throw InputError("no irreducible polynomial found");
    }
}

namespace detail {

// gcd of polynomials over F_p (raw int64 vectors, ascending)
inline std::vector<int64_t> fp_gcd(int64_t p, std::vector<int64_t> a, std::vector<int64_t> b) {
    auto deg = [](const std::vector<int64_t>& v) {
        int d = static_cast<int>(v.size()) - 1;
        while (d >= 0 && v[d] == 0) --d;
        return d;
    };
    while (deg(b) >= 0) {
        int da = deg(a), db = deg(b);
        if (da < db) {
            std::swap(a, b);
            continue;
        }
        // a -= lc(a)/lc(b) * x^(da-db) * b
        uint64_t inv = powmod_u64(static_cast<uint64_t>(b[db]), static_cast<uint64_t>(p - 2),
                                  static_cast<uint64_t>(p));
        int64_t f = static_cast<int64_t>(
            mulmod_u64(static_cast<uint64_t>(a[da]), inv, static_cast<uint64_t>(p)));
        for (int i = 0; i <= db; ++i) {
            int64_t t = static_cast<int64_t>(mulmod_u64(static_cast<uint64_t>(f),
                                                        static_cast<uint64_t>(b[i]),
                                                        static_cast<uint64_t>(p)));
            int64_t& ai = a[da - db + i];
            ai = (ai - t) % p;
            if (ai < 0) ai += p;
        }
        if (deg(a) < deg(b)) std::swap(a, b);
        while (deg(a) > deg(b) && deg(b) >= 0) {
            // continue reduction in next loop iteration
            break;
        }
        if (deg(a) >= deg(b)) continue;
    }
    return a;
}

// x^(p^k) mod m over F_p via repeated squaring in F_p[x]/(m)
inline std::vector<int64_t> fp_frobenius_power(int64_t p, const std::vector<int64_t>& m, int k) {
    int f = static_cast<int>(m.size()) - 1;
    auto mulmodpoly = [&](const std::vector<int64_t>& a, const std::vector<int64_t>& b) {
        std::vector<int64_t> prod(2 * f - 1, 0);
        for (int i = 0; i < f; ++i) {
            if (!a[i]) continue;
            for (int j = 0; j < f; ++j) {
                prod[i + j] = (prod[i + j] +
                               static_cast<int64_t>(mulmod_u64(static_cast<uint64_t>(a[i]),
                                                               static_cast<uint64_t>(b[j]),
                                                               static_cast<uint64_t>(p)))) %
                              p;
            }
        }
        for (int kk = 2 * f - 2; kk >= f; --kk) {
            int64_t t = prod[kk];
            if (!t) continue;
            prod[kk] = 0;
            for (int j = 0; j < f; ++j) {
                int64_t s = static_cast<int64_t>(mulmod_u64(static_cast<uint64_t>(t),
                                                            static_cast<uint64_t>(m[j]),
                                                            static_cast<uint64_t>(p)));
                prod[kk - f + j] = ((prod[kk - f + j] - s) % p + p) % p;
            }
        }
        prod.resize(f);
        return prod;
    };
    std::vector<int64_t> x(f, 0);
    if (f == 1) {
        x[0] = 0;
        return x;
    }
    x[1] = 1;
    std::vector<int64_t> r = x;
    // compute x^(p^k): k rounds of x -> x^p
    for (int round = 0; round < k; ++round) {
        // r <- r^p by square-and-multiply over exponent p
        std::vector<int64_t> base = r;
        std::vector<int64_t> acc(f, 0);
        acc[0] = 1;
        uint64_t e = static_cast<uint64_t>(p);
        while (e) {
            if (e & 1) acc = mulmodpoly(acc, base);
            base = mulmodpoly(base, base);
            e >>= 1;
        }
        r = acc;
    }
    return r;
}

inline bool ff_poly_irreducible(int64_t p, const std::vector<int64_t>& m) {
    int f = static_cast<int>(m.size()) - 1;
    // x^(p^f) == x mod m, and gcd(x^(p^(f/q)) - x, m) == 1 for prime q | f
    auto deg = [](const std::vector<int64_t>& v) {
        int d = static_cast<int>(v.size()) - 1;
        while (d >= 0 && v[d] == 0) --d;
        return d;
    };
    std::vector<int64_t> xf = fp_frobenius_power(p, m, f);
    // xf must equal x
    for (int i = 0; i < f; ++i) {
        int64_t want = (i == 1) ? 1 : 0;
        if (f == 1) want = 0;
        if (xf[i] != want && f > 1) return false;
    }
    if (f == 1) return true;
    for (int q : {2, 3, 5}) {
        if (f % q) continue;
        std::vector<int64_t> xq = fp_frobenius_power(p, m, f / q);
        if (static_cast<int>(xq.size()) > 1) xq[1] = ((xq[1] - 1) % p + p) % p;
        auto g = fp_gcd(p, m, xq);
        if (deg(g) > 0) return false;
    }
    return true;
}

}  // namespace detail

inline bool FFField::is_square(const FFElement& x) const {
    if (x.is_zero()) return true;
    if (p_ == 2) return true;  // Frobenius is bijective
    FFElement t = x.pow((order() - 1) / 2);
    return t == one();
}

inline bool FFField::artin_schreier_solvable(const FFElement& x) const {
    if (p_ != 2) throw InputError("artin_schreier_solvable requires characteristic 2");
    // Tr(x) = 0 over F_2
    FFElement tr = x;
    FFElement fr = x;
    for (int i = 1; i < f_; ++i) {
        fr = fr * fr;
        tr = tr + fr;
    }
    return tr.is_zero();
}

inline FFElement FFField::sqrt(const FFElement& x) const {
    if (x.is_zero()) return zero();
    if (p_ == 2) {
        // inverse Frobenius: x^(2^(f-1)... ) actually x^(q/2) with q = 2^f
        return x.pow(order() / 2);
    }
    if (!is_square(x)) throw InputError("sqrt of non-square in finite field");
    Integer q = order();
    if (q % 4 == 3) return x.pow((q + 1) / 4);
    // Tonelli-Shanks in F_q
    Integer Q = q - 1;
    long S = 0;
    while (Q % 2 == 0) {
        Q /= 2;
        ++S;
    }
    // find a non-square deterministically
    FFElement z = zero();
    {
        std::vector<int64_t> c(f_, 0);
        for (;;) {
            int i = 0;
            while (i < f_ && ++c[i] == p_) c[i++] = 0;
            if (i == f_) throw InputError("no non-square found");
            FFElement cand = element(c);
            if (!cand.is_zero() && !is_square(cand)) {
                z = cand;
                break;
            }
        }
    }
    FFElement M_pow = z.pow(Q);
    FFElement t = x.pow(Q);
    FFElement r = x.pow((Q + 1) / 2);
    long M = S;
    while (!(t == one())) {
        FFElement tt = t;
        long i = 0;
        while (!(tt == one())) {
            tt = tt * tt;
            ++i;
        }
        FFElement b = M_pow;
        for (long j = 0; j < M - i - 1; ++j) b = b * b;
        M = i;
        M_pow = b * b;
        t = t * M_pow;
        r = r * b;
    }
    return r;
}

inline std::vector<FFElement> FFField::roots(const Poly<FFElement>& g0) const {
    std::vector<FFElement> out;
    if (g0.is_zero()) throw InputError("roots of zero polynomial");
    Poly<FFElement> g = g0;
    bool zero_root = false;
    while (g.degree() >= 1 && g[0].is_zero()) {
        zero_root = true;
        g = g / Poly<FFElement>({zero(), one()});
    }
    if (zero_root) out.push_back(zero());
    if (g.degree() < 1) return out;
    g = g.monic();
    // keep only linear-factor part: gcd(x^q - x, g)
    Poly<FFElement> xq;  // x^q mod g
    {
        Poly<FFElement> base({zero(), one()});
        Poly<FFElement> acc({one()});
        Integer e = order();
        while (e > 0) {
            if (e % 2 == 1) acc = (acc * base) % g;
            base = (base * base) % g;
            e /= 2;
        }
        xq = acc;
    }
    Poly<FFElement> lin = gcd(g, xq - Poly<FFElement>({zero(), one()}));
    // split lin into linear factors
    std::vector<Poly<FFElement>> stack;
    if (lin.degree() >= 1) stack.push_back(lin.monic());
    SplitMix64 rng(0x5eedULL);
    while (!stack.empty()) {
        Poly<FFElement> h = stack.back();
        stack.pop_back();
        if (h.degree() == 0) continue;
        if (h.degree() == 1) {
            out.push_back(-h[0]);
            continue;
        }
        // random splitting
        for (int attempt = 0; attempt < 200; ++attempt) {
            std::vector<int64_t> cc(f_);
            for (auto& a : cc) a = static_cast<int64_t>(rng.below(static_cast<uint64_t>(p_)));
            FFElement c = element(cc);
            Poly<FFElement> shifted({c, one()});
            Poly<FFElement> d;
            if (p_ == 2) {
                // trace map T(x) = x + x^2 + ... + x^(2^(f'-1)) of c*x splits
                Poly<FFElement> t = (shifted * c) % h;
                Poly<FFElement> acc = t;
                Integer reps = order();
                long bits = 0;
                Integer tmp = reps;
                while (tmp > 1) {
                    tmp /= 2;
                    ++bits;
                }
                Poly<FFElement> cur = t;
                for (long i = 1; i < bits; ++i) {
                    cur = (cur * cur) % h;
                    acc = acc + cur;
                }
                d = gcd(h, acc);
            } else {
                Poly<FFElement> base = shifted % h;
                Poly<FFElement> acc({one()});
                Integer e = (order() - 1) / 2;
                while (e > 0) {
                    if (e % 2 == 1) acc = (acc * base) % h;
                    base = (base * base) % h;
                    e /= 2;
                }
                d = gcd(h, acc - Poly<FFElement>({one()}));
            }
            if (d.degree() > 0 && d.degree() < h.degree()) {
                stack.push_back(d.monic());
                stack.push_back((h / d).monic());
                break;
            }
            if (attempt == 199) throw PrecisionError("finite-field root splitting failed");
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

using FFPoly = Poly<FFElement>;

// extended gcd over F_q: returns (g, u, v) monic g with u*a + v*b = g
inline std::tuple<FFPoly, FFPoly, FFPoly> ff_ext_gcd(const FFPoly& a, const FFPoly& b) {
    FFPoly r0 = a, r1 = b;
    FFPoly s0 = FFPoly({FFElement(1)}), s1;
    FFPoly t0, t1 = FFPoly({FFElement(1)});
    while (!r1.is_zero()) {
        auto [q, r] = r0.divmod(r1);
        FFPoly s = s0 - q * s1, t = t0 - q * t1;
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    FFElement inv = FFElement(1) / r0.lc();
    return {r0 * inv, s0 * inv, t0 * inv};
}

// full factorization of a nonzero polynomial over F_q into monic irreducibles
// with multiplicities (leading coefficient dropped)
inline std::vector<std::pair<FFPoly, int>> ff_factor(const FFFieldPtr& F, FFPoly g) {
    std::vector<std::pair<FFPoly, int>> out;
    if (g.degree() < 1) return out;
    g = g.monic();
    // squarefree decomposition, characteristic p aware
    std::vector<std::pair<FFPoly, int>> sqfree;  // (squarefree poly, multiplicity)
    std::function<void(FFPoly, int)> sff = [&](FFPoly h, int mult) {
        if (h.degree() < 1) return;
        FFPoly hp = h.derivative();
        if (hp.is_zero()) {
            // h = g(x^p); take p-th roots of coefficients
            int64_t p = F->p();
            std::vector<FFElement> c;
            for (int i = 0; i <= h.degree(); i += static_cast<int>(p))
                c.push_back(h[static_cast<size_t>(i)].pow(F->order() / p));
            sff(FFPoly(std::move(c)), mult * static_cast<int>(p));
            return;
        }
        FFPoly d = gcd(h, hp);
        FFPoly w = h / d;  // product of squarefree part factors
        int i = 1;
        while (w.degree() >= 1) {
            FFPoly y = gcd(w, d);
            FFPoly fac = w / y;
            if (fac.degree() >= 1) sqfree.push_back({fac.monic(), mult * i});
            w = y;
            if (!y.is_zero()) d = d / y;
            ++i;
        }
        if (d.degree() >= 1) sff(d, mult);
    };
    sff(g, 1);
    // distinct-degree + equal-degree on each squarefree piece
    SplitMix64 rng(0xfac70eULL);
    for (auto& [sq, mult] : sqfree) {
        FFPoly h = sq;
        FFPoly xq_power = FFPoly({F->zero(), F->one()});  // iterated x^(q^d) mod h
        int d = 1;
        while (h.degree() >= 1) {
            if (2 * d > h.degree()) {
                out.push_back({h.monic(), mult});
                break;
            }
            // xq_power <- xq_power^q mod h
            {
                FFPoly base = xq_power % h;
                FFPoly acc({F->one()});
                Integer e = F->order();
                while (e > 0) {
                    if (e % 2 == 1) acc = (acc * base) % h;
                    base = (base * base) % h;
                    e /= 2;
                }
                xq_power = acc;
            }
            FFPoly gd = gcd(h, xq_power - FFPoly({F->zero(), F->one()}));
            if (gd.degree() > 0) {
                // split gd into irreducibles of degree d
                std::vector<FFPoly> stack{gd.monic()};
                while (!stack.empty()) {
                    FFPoly c = stack.back();
                    stack.pop_back();
                    if (c.degree() == d) {
                        out.push_back({c, mult});
                        continue;
                    }
                    for (int attempt = 0;; ++attempt) {
                        if (attempt >= 200) throw PrecisionError("equal-degree splitting failed");
                        // random poly of degree < c.degree()
                        std::vector<FFElement> rc;
                        for (int i = 0; i < c.degree(); ++i) {
                            std::vector<int64_t> cc(static_cast<size_t>(F->f()));
                            for (auto& a : cc)
                                a = static_cast<int64_t>(rng.below(static_cast<uint64_t>(F->p())));
                            rc.push_back(F->element(cc));
                        }
                        FFPoly r(std::move(rc));
                        if (r.degree() < 0) continue;
                        FFPoly split;
                        if (F->p() == 2) {
                            FFPoly acc = r % c, cur = r % c;
                            long bits = static_cast<long>(F->f()) * d;
                            for (long i = 1; i < bits; ++i) {
                                cur = (cur * cur) % c;
                                acc = acc + cur;
                            }
                            split = gcd(c, acc);
                        } else {
                            Integer e = (pow_int(F->order(), static_cast<unsigned long>(d)) - 1) / 2;
                            FFPoly base = r % c;
                            FFPoly acc({F->one()});
                            while (e > 0) {
                                if (e % 2 == 1) acc = (acc * base) % c;
                                base = (base * base) % c;
                                e /= 2;
                            }
                            split = gcd(c, acc - FFPoly({F->one()}));
                        }
                        if (split.degree() > 0 && split.degree() < c.degree()) {
                            stack.push_back(split.monic());
                            stack.push_back((c / split).monic());
                            break;
                        }
                    }
                }
                h = h / gd;
            }
            ++d;
        }
    }
    return out;
}

}  // namespace ellparity
