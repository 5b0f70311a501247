#pragma once

#include "ellparity/finite_field.hpp"
#include "ellparity/polynomial.hpp"
#include "ellparity/rational.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace ellparity {

class LocalField;
using LocalFieldPtr = std::shared_ptr<const LocalField>;
class LocalElement;

// A finite extension K/Q_p in unramified-then-Eisenstein shape:
//   U = Q_p[t]/(unram), deg f, unram a lift of the canonical F_{p^f} modulus;
//   K = U[pi]/(eis),    deg e, eis Eisenstein over U.
// Elements are arrays c[i][j] (pi^i t^j), coefficients mod p^N, with an
// optional global denominator p^{-dshift}. An element with denominator d is
// known modulo pi^{e(N-d)}; valuations read off the Eisenstein basis exactly.
class LocalField : public std::enable_shared_from_this<LocalField> {
public:
    int64_t p;
    int e, f;
    int N;  // coefficient precision: coefficients live in Z/p^N
    Integer pN;
    FFFieldPtr res;                         // residue field F_{p^f}
    std::vector<Integer> unram;             // monic, length f+1
    std::vector<std::vector<Integer>> eis;  // length e+1, each a U-vector (length f); eis[e] = [1,0..]

    static LocalFieldPtr qp(int64_t p, int N);
    static LocalFieldPtr unramified(int64_t p, int f, int N);
    static LocalFieldPtr make(int64_t p, int e, int f, int N,
                              std::vector<std::vector<Integer>> eis_coeffs);
    LocalFieldPtr with_precision(int N2) const;

    int degree() const { return e * f; }
    Integer residue_order() const { return pow_int(Integer(p), static_cast<unsigned long>(f)); }
    long val_of_2() const {  // v_pi(2)
        return p == 2 ? e : 0;
    }

    LocalElement zero() const;
    LocalElement one() const;
    LocalElement uniformizer() const;
    LocalElement from_rational(const Rational& q) const;
    LocalElement from_integer(const Integer& n) const;
    LocalElement lift(const FFElement& a) const;  // Teichmueller-free lift
    LocalElement element(std::vector<Integer> c, int dshift = 0) const;

    bool same_field(const LocalField& o) const {
        return p == o.p && e == o.e && f == o.f && unram == o.unram && eis_eq(o);
    }

    // --- internal coefficient helpers (U = length-f Integer vectors mod p^N) ---
    std::vector<Integer> u_zero() const { return std::vector<Integer>(f, Integer(0)); }
    std::vector<Integer> u_one() const {
        auto v = u_zero();
        v[0] = 1;
        return v;
    }
    std::vector<Integer> u_add(const std::vector<Integer>& a, const std::vector<Integer>& b) const;
    std::vector<Integer> u_sub(const std::vector<Integer>& a, const std::vector<Integer>& b) const;
    std::vector<Integer> u_mul(const std::vector<Integer>& a, const std::vector<Integer>& b) const;
    std::vector<Integer> u_smul(const std::vector<Integer>& a, const Integer& s) const;
    long u_val(const std::vector<Integer>& a) const;  // min v_p, or N if all 0

private:
    bool eis_eq(const LocalField& o) const {
        if (eis.size() != o.eis.size()) return false;
        for (size_t i = 0; i < eis.size(); ++i)
            if (eis[i] != o.eis[i]) return false;
        return true;
    }
};

class LocalElement {
public:
    LocalElement() : K_(nullptr), dshift_(0), prec_(0) {}
    LocalElement(LocalFieldPtr K, std::vector<Integer> c, int dshift, int prec = -1)
        : K_(std::move(K)), dshift_(dshift), prec_(prec), c_(std::move(c)) {
        if (prec_ < 0) prec_ = K_->N;
        normalize();
    }
    explicit LocalElement(int v) : K_(nullptr), dshift_(0), prec_(0), c_{Integer(v)} {}  // lazy scalar

    const LocalFieldPtr& field() const { return K_; }
    bool attached() const { return K_ != nullptr; }

    LocalElement operator+(const LocalElement& o) const;
    LocalElement operator-(const LocalElement& o) const;
    LocalElement operator-() const;
    LocalElement operator*(const LocalElement& o) const;
    LocalElement operator/(const LocalElement& o) const;
    LocalElement inverse() const;
    bool operator==(const LocalElement& o) const;

    // pi-adic absolute precision of this representation
    long abs_prec() const { return K_->e * static_cast<long>(prec_ - dshift_); }
    int coeff_prec() const { return prec_; }

    // exact valuation in pi-units; throws PrecisionError if the element is
    // indistinguishable from 0 at current precision (unless allow_zero, in
    // which case such elements report +infinity).
    ExtInt valuation(bool allow_zero = true) const;
    bool is_zero_at_precision() const;
    bool certified_nonzero() const {
        auto v = valuation(true);
        return v.is_finite();
    }

    LocalElement pow(long n) const;
    LocalElement times_p_power(long k) const;  // multiply by p^k (any sign)
    LocalElement shift_down(long k) const;     // divide by pi^k, valuation must allow it

    FFElement residue() const;  // requires valuation >= 0
    // digit expansion x = sum digits[k] pi^(val + k); length n
    std::vector<FFElement> digits(int n) const;

    // canonical total order on elements (valuation, then digit string);
    // ties broken as equal. Used for deterministic orbit representatives.
    static int canonical_cmp(const LocalElement& a, const LocalElement& b);

    const std::vector<Integer>& raw() const { return c_; }
    int dshift() const { return dshift_; }

    std::string str() const;

private:
    LocalFieldPtr K_;
    int dshift_;
    int prec_;                // coords accurate modulo p^prec_
    std::vector<Integer> c_;  // size e*f, index i*f + j

    void normalize();
    void attach(const LocalFieldPtr& K) {
        if (!K_) {
            Integer v = c_.empty() ? Integer(0) : c_[0];
            *this = K->from_integer(v);
        }
    }
    friend class LocalField;
};

// ---------- LocalField implementation ----------

inline std::vector<Integer> LocalField::u_add(const std::vector<Integer>& a,
                                              const std::vector<Integer>& b) const {
    std::vector<Integer> r(f);
    for (int j = 0; j < f; ++j) {
        r[j] = a[j] + b[j];
        if (r[j] >= pN) r[j] -= pN;
    }
    return r;
}

inline std::vector<Integer> LocalField::u_sub(const std::vector<Integer>& a,
                                              const std::vector<Integer>& b) const {
    std::vector<Integer> r(f);
    for (int j = 0; j < f; ++j) {
        r[j] = a[j] - b[j];
        if (r[j] < 0) r[j] += pN;
    }
    return r;
}

inline std::vector<Integer> LocalField::u_smul(const std::vector<Integer>& a, const Integer& s) const {
    std::vector<Integer> r(f);
    Integer ss = s % pN;
    if (ss < 0) ss += pN;
    for (int j = 0; j < f; ++j) r[j] = (a[j] * ss) % pN;
    return r;
}

inline std::vector<Integer> LocalField::u_mul(const std::vector<Integer>& a,
                                              const std::vector<Integer>& b) const {
    std::vector<Integer> prod(2 * f - 1, Integer(0));
    for (int i = 0; i < f; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < f; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % pN;
    }
    for (int k = 2 * f - 2; k >= f; --k) {
        Integer t = prod[k];
        if (t == 0) continue;
        prod[k] = 0;
        for (int j = 0; j < f; ++j) {
            prod[k - f + j] = (prod[k - f + j] - t * unram[j]) % pN;
            if (prod[k - f + j] < 0) prod[k - f + j] += pN;
        }
    }
    prod.resize(f);
    return prod;
}

inline long LocalField::u_val(const std::vector<Integer>& a) const {
    long best = N;
    for (int j = 0; j < f; ++j) {
        if (a[j] == 0) continue;
        Integer x = a[j];
        long v = 0;
        while (x % p == 0 && v < best) {
            x /= p;
            ++v;
        }
        if (v < best) best = v;
        if (best == 0) return 0;
    }
    return best;
}

inline LocalFieldPtr LocalField::qp(int64_t p, int N) {
    return unramified(p, 1, N);
}

inline LocalFieldPtr LocalField::unramified(int64_t p, int f, int N) {
    auto K = std::make_shared<LocalField>();
    K->p = p;
    K->e = 1;
    K->f = f;
    K->N = N;
    K->pN = pow_int(Integer(p), static_cast<unsigned long>(N));
    K->res = FFField::make(p, f);
    K->unram.assign(K->res->modulus().begin(), K->res->modulus().end());
    // eis = x - p
    K->eis.resize(2);
    K->eis[0] = K->u_zero();
    K->eis[0][0] = K->pN - (Integer(p) % K->pN);
    if (K->eis[0][0] == K->pN) K->eis[0][0] = 0;
    K->eis[1] = K->u_one();
    return K;
}

inline LocalFieldPtr LocalField::make(int64_t p, int e, int f, int N,
                                      std::vector<std::vector<Integer>> eis_coeffs) {
    auto K = std::make_shared<LocalField>();
    K->p = p;
    K->e = e;
    K->f = f;
    K->N = N;
    K->pN = pow_int(Integer(p), static_cast<unsigned long>(N));
    K->res = FFField::make(p, f);
    K->unram.assign(K->res->modulus().begin(), K->res->modulus().end());
    K->eis = std::move(eis_coeffs);
    for (auto& u : K->eis) {
        u.resize(f, Integer(0));
        for (auto& x : u) {
            x %= K->pN;
            if (x < 0) x += K->pN;
        }
    }
    // sanity: Eisenstein shape
    if (static_cast<int>(K->eis.size()) != e + 1) throw InputError("eis degree mismatch");
    if (K->u_val(K->eis[0]) != 1) throw InputError("eisenstein constant term must have v_p = 1");
    for (int i = 1; i < e; ++i)
        if (K->u_val(K->eis[i]) < 1) throw InputError("eisenstein coefficient not in the maximal ideal");
    return K;
}

inline LocalFieldPtr LocalField::with_precision(int N2) const {
    if (N2 == N) return shared_from_this();
    auto K = std::make_shared<LocalField>();
    K->p = p;
    K->e = e;
    K->f = f;
    K->N = N2;
    K->pN = pow_int(Integer(p), static_cast<unsigned long>(N2));
    K->res = res;
    K->unram = unram;
    K->eis = eis;
    for (auto& u : K->eis)
        for (auto& x : u) {
            x %= K->pN;
            if (x < 0) x += K->pN;
        }
    return K;
}

inline LocalElement LocalField::element(std::vector<Integer> c, int dshift) const {
    c.resize(static_cast<size_t>(e) * f, Integer(0));
    for (auto& x : c) {
        x %= pN;
        if (x < 0) x += pN;
    }
    return LocalElement(shared_from_this(), std::move(c), dshift);
}

inline LocalElement LocalField::zero() const { return element({}); }
inline LocalElement LocalField::one() const { return element({Integer(1)}); }
inline LocalElement LocalField::uniformizer() const {
    if (e == 1) return from_integer(Integer(p));
    std::vector<Integer> c(static_cast<size_t>(e) * f, Integer(0));
    c[f] = 1;  // pi^1 t^0
    return element(std::move(c));
}

inline LocalElement LocalField::from_integer(const Integer& n) const {
    std::vector<Integer> c(static_cast<size_t>(e) * f, Integer(0));
    c[0] = n % pN;
    if (c[0] < 0) c[0] += pN;
    return LocalElement(shared_from_this(), std::move(c), 0);
}

inline LocalElement LocalField::from_rational(const Rational& q) const {
    Integer nu = num(q), de = den(q);
    int shift = 0;
    while (de % p == 0) {
        de /= p;
        ++shift;
    }
    // invert the p-unit denominator mod p^N
    Integer inv = 1;
    {
        // Newton: inv_{k+1} = inv_k (2 - de*inv_k)
        Integer m = p;
        // inverse mod p first
        Integer d0 = de % p;
        if (d0 < 0) d0 += p;
        inv = powmod_u64(static_cast<uint64_t>(d0 % p), static_cast<uint64_t>(p - 2),
                         static_cast<uint64_t>(p));
        while (m < pN) {
            m = m * m;
            inv = inv * (2 - de * inv) % m;
            if (inv < 0) inv += m;
        }
        inv %= pN;
        if (inv < 0) inv += pN;
    }
    Integer v = nu % pN * inv % pN;
    if (v < 0) v += pN;
    std::vector<Integer> c(static_cast<size_t>(e) * f, Integer(0));
    c[0] = v;
    return LocalElement(shared_from_this(), std::move(c), shift);
}

inline LocalElement LocalField::lift(const FFElement& a) const {
    std::vector<Integer> c(static_cast<size_t>(e) * f, Integer(0));
    for (int j = 0; j < f; ++j) c[j] = a.coeffs()[j];
    return LocalElement(shared_from_this(), std::move(c), 0);
}

// ---------- LocalElement implementation ----------

inline void LocalElement::normalize() {
    if (!K_) return;
    while (dshift_ > 0 && prec_ > 1) {
        bool all = true;
        for (auto& x : c_)
            if (x % K_->p != 0) {
                all = false;
                break;
            }
        if (!all) break;
        for (auto& x : c_) x /= K_->p;
        --dshift_;
        --prec_;
    }
}

inline LocalElement LocalElement::operator+(const LocalElement& o) const {
    LocalElement a = *this, b = o;
    if (!a.K_ && !b.K_) return LocalElement(static_cast<int>(a.c_[0] + b.c_[0]));
    if (!a.K_) a.attach(b.K_);
    if (!b.K_) b.attach(a.K_);
    const auto& K = *a.K_;
    int d = std::max(a.dshift_, b.dshift_);
    Integer fa = pow_int(Integer(K.p), static_cast<unsigned long>(d - a.dshift_));
    Integer fb = pow_int(Integer(K.p), static_cast<unsigned long>(d - b.dshift_));
    int qa = std::min(K.N, a.prec_ + (d - a.dshift_));
    int qb = std::min(K.N, b.prec_ + (d - b.dshift_));
    int q = std::min(qa, qb);
    std::vector<Integer> r(a.c_.size());
    for (size_t i = 0; i < r.size(); ++i) {
        r[i] = (a.c_[i] * fa + b.c_[i] * fb) % K.pN;
        if (r[i] < 0) r[i] += K.pN;
    }
    return LocalElement(a.K_, std::move(r), d, q);
}

inline LocalElement LocalElement::operator-() const {
    if (!K_) return LocalElement(static_cast<int>(-c_[0]));
    std::vector<Integer> r(c_.size());
    for (size_t i = 0; i < r.size(); ++i) {
        r[i] = c_[i] == 0 ? Integer(0) : K_->pN - c_[i];
    }
    return LocalElement(K_, std::move(r), dshift_, prec_);
}

inline LocalElement LocalElement::operator-(const LocalElement& o) const { return *this + (-o); }

inline LocalElement LocalElement::operator*(const LocalElement& o) const {
    LocalElement a = *this, b = o;
    if (!a.K_ && !b.K_) return LocalElement(static_cast<int>(a.c_[0] * b.c_[0]));
    if (!a.K_) a.attach(b.K_);
    if (!b.K_) b.attach(a.K_);
    const auto& K = *a.K_;
    int e = K.e, f = K.f;
    // polynomial in pi with U-coefficients
    std::vector<std::vector<Integer>> prod(2 * e - 1, K.u_zero());
    for (int i = 0; i < e; ++i) {
        std::vector<Integer> ai(a.c_.begin() + i * f, a.c_.begin() + (i + 1) * f);
        if (K.u_val(ai) >= K.N) continue;
        for (int j = 0; j < e; ++j) {
            std::vector<Integer> bj(b.c_.begin() + j * f, b.c_.begin() + (j + 1) * f);
            prod[i + j] = K.u_add(prod[i + j], K.u_mul(ai, bj));
        }
    }
    for (int k = 2 * e - 2; k >= e; --k) {
        std::vector<Integer> t = prod[k];
        if (K.u_val(t) >= K.N) continue;
        prod[k] = K.u_zero();
        for (int j = 0; j < e; ++j) {
            prod[k - e + j] = K.u_sub(prod[k - e + j], K.u_mul(t, K.eis[j]));
        }
    }
    std::vector<Integer> r(static_cast<size_t>(e) * f);
    for (int i = 0; i < e; ++i)
        for (int j = 0; j < f; ++j) r[i * f + j] = prod[i][j];
    return LocalElement(a.K_, std::move(r), a.dshift_ + b.dshift_, std::min(a.prec_, b.prec_));
}

inline ExtInt LocalElement::valuation(bool allow_zero) const {
    if (!K_) throw InputError("valuation of unattached scalar");
    const auto& K = *K_;
    // coordinates are only accurate modulo p^prec_: digits above that level
    // are representation noise and must not certify nonzeroness
    long cap = static_cast<long>(prec_);
    if (cap <= 0) throw PrecisionError("element has no remaining precision");
    long best = -1;
    for (int i = 0; i < K.e; ++i) {
        std::vector<Integer> ui(c_.begin() + i * K.f, c_.begin() + (i + 1) * K.f);
        long v = K.u_val(ui);
        if (v >= cap) continue;
        long piv = K.e * v + i;
        if (best < 0 || piv < best) best = piv;
    }
    if (best < 0) {
        if (allow_zero) return ExtInt::infinity();
        throw PrecisionError("element is zero to working precision");
    }
    return ExtInt(best - static_cast<long>(K.e) * dshift_);
}

inline bool LocalElement::is_zero_at_precision() const {
    if (!K_) return c_[0] == 0;
    return !valuation(true).is_finite();
}

inline bool LocalElement::operator==(const LocalElement& o) const {
    LocalElement a = *this, b = o;
    if (!a.K_ && !b.K_) return a.c_[0] == b.c_[0];
    if (!a.K_) a.attach(b.K_);
    if (!b.K_) b.attach(a.K_);
    return (a - b).is_zero_at_precision();
}

inline LocalElement LocalElement::times_p_power(long k) const {
    if (!K_) throw InputError("times_p_power on scalar");
    LocalElement r = *this;
    if (k >= 0) {
        Integer f = pow_int(Integer(K_->p), static_cast<unsigned long>(k));
        for (auto& x : r.c_) x = x * f % K_->pN;
        r.prec_ = static_cast<int>(std::min<long>(K_->N, static_cast<long>(r.prec_) + k));
    } else {
        r.dshift_ += static_cast<int>(-k);
        if (r.dshift_ >= r.prec_)
            throw PrecisionError("denominator exhausted working precision");
    }
    r.normalize();
    return r;
}

inline LocalElement LocalElement::pow(long n) const {
    if (!K_) throw InputError("pow on scalar");
    if (n < 0) return inverse().pow(-n);
    LocalElement r = K_->one(), x = *this;
    unsigned long a = static_cast<unsigned long>(n);
    while (a) {
        if (a & 1) r = r * x;
        x = x * x;
        a >>= 1;
    }
    return r;
}

inline LocalElement LocalElement::inverse() const {
    if (!K_) throw InputError("inverse of scalar");
    const auto& K = *K_;
    ExtInt v = valuation(false);
    long val = v.value();
    // normalize to a p-unit: z = x * pi^k has valuation divisible by e,
    // z = p^m * u with u a unit.
    long k = ((-val) % K.e + K.e) % K.e;
    LocalElement z = *this;
    if (k) z = z * K.uniformizer().pow(k);
    long mprime = (val + k) / K.e;          // z = p^mprime * unit
    long strip = mprime + z.dshift_;        // p-divisibility of the integral part
    LocalElement u = z;
    Integer pm = pow_int(Integer(K.p), static_cast<unsigned long>(strip));
    for (auto& x : u.c_) {
        if (x % pm != 0) throw PrecisionError("inverse: unexpected non-divisibility");
        x /= pm;
    }
    u.dshift_ = 0;
    u.prec_ -= static_cast<int>(strip);
    if (u.prec_ <= 0) throw PrecisionError("inverse: no precision left after stripping");
    // Newton inverse of the unit u
    FFElement r0 = u.residue().inverse();
    LocalElement y = K.lift(r0);
    LocalElement two = K.from_integer(2);
    long prec = 1;
    while (prec <= K.N) {
        y = y * (two - u * y);
        prec *= 2;
    }
    // x^{-1} = pi^k * u^{-1} * p^{-mprime}
    LocalElement out = y;
    if (k) out = out * K.uniformizer().pow(k);
    out = out.times_p_power(-mprime);
    return out;
}

inline LocalElement LocalElement::operator/(const LocalElement& o) const {
    LocalElement b = o;
    if (!b.attached() && attached()) b.attach(K_);
    if (!attached() && b.attached()) {
        LocalElement a = *this;
        a.attach(b.K_);
        return a * b.inverse();
    }
    if (!attached() && !b.attached()) {
        if (c_[0] % o.c_[0] != 0) throw InputError("scalar division inexact");
        return LocalElement(static_cast<int>(c_[0] / o.c_[0]));
    }
    return *this * b.inverse();
}

inline FFElement LocalElement::residue() const {
    if (!K_) throw InputError("residue of scalar");
    LocalElement t = *this;
    t.normalize();
    if (t.dshift_ > 0) throw InputError("residue of non-integral element");
    if (t.prec_ < 1) throw PrecisionError("residue: no precision left");
    std::vector<int64_t> c(K_->f);
    for (int j = 0; j < K_->f; ++j) c[j] = static_cast<int64_t>(t.c_[j] % K_->p);
    return K_->res->element(std::move(c));
}

inline LocalElement LocalElement::shift_down(long k) const {
    if (k == 0) return *this;
    const auto& K = *K_;
    if (k < 0) return *this * K.uniformizer().pow(-k);
    return *this * K.uniformizer().inverse().pow(k);
}

inline std::vector<FFElement> LocalElement::digits(int n) const {
    const auto& K = *K_;
    std::vector<FFElement> out;
    ExtInt v = valuation(true);
    if (!v.is_finite()) {
        out.assign(static_cast<size_t>(std::max(n, 0)), K.res->zero());
        return out;
    }
    LocalElement x = shift_down(v.value());
    // each pi-shift costs a p-division in this representation, so never ask
    // for more digits than the element can certify
    n = std::min<long>(n, x.prec_ - x.dshift_ - 1);
    for (int i = 0; i < n; ++i) {
        FFElement d = x.residue();
        out.push_back(d);
        x = (x - K.lift(d)).shift_down(1);
    }
    return out;
}

inline int LocalElement::canonical_cmp(const LocalElement& a, const LocalElement& b) {
    ExtInt va = a.valuation(true), vb = b.valuation(true);
    if (!va.is_finite() && !vb.is_finite()) return 0;
    if (!va.is_finite()) return 1;
    if (!vb.is_finite()) return -1;
    if (va.value() != vb.value()) return va.value() < vb.value() ? -1 : 1;
    int n = std::min({16, a.prec_ - a.dshift_ - 2, b.prec_ - b.dshift_ - 2});
    if (n < 1) n = 1;
    auto da = a.digits(n), db = b.digits(n);
    n = static_cast<int>(std::min(da.size(), db.size()));
    for (int i = 0; i < n; ++i) {
        if (da[i] < db[i]) return -1;
        if (db[i] < da[i]) return 1;
    }
    return 0;
}

inline std::string LocalElement::str() const {
    if (!K_) return "scalar(" + c_[0].str() + ")";
    std::string s = "[";
    for (size_t i = 0; i < c_.size(); ++i) {
        if (i) s += ",";
        s += c_[i].str();
    }
    s += "]";
    if (dshift_) s += "/p^" + std::to_string(dshift_);
    return s;
}

// value of |x|_K as an exact rational: q^{-v(x)} with q the residue order.
inline Rational normalized_abs(const LocalElement& x) {
    ExtInt v = x.valuation(true);
    if (!v.is_finite()) return Rational(0);
    Rational q(x.field()->residue_order());
    return pow_rat(q, -v.value());
}

}  // namespace ellparity
