#pragma once

#include "ellparity/rational.hpp"

#include <algorithm>
#include <vector>

namespace ellparity {

// Dense univariate polynomial; coefficients ascending. T is a commutative
// ring value type (Rational, LocalElement, FFElement, ...).
template <typename T>
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<T> c) : c_(std::move(c)) { trim(); }
    Poly(std::initializer_list<T> c) : c_(c) { trim(); }
    static Poly zero() { return Poly(); }
    static Poly constant(const T& a) { return Poly(std::vector<T>{a}); }
    static Poly x() { return Poly(std::vector<T>{T(0), T(1)}); }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const T& operator[](size_t i) const {
        static const T z = T(0);
        return i < c_.size() ? c_[i] : z;
    }
    const std::vector<T>& coeffs() const { return c_; }
    const T& lc() const {
        if (c_.empty()) throw InputError("lc of zero polynomial");
        return c_.back();
    }
    bool is_monic() const { return !c_.empty() && c_.back() == T(1); }

    Poly operator+(const Poly& o) const {
        std::vector<T> r(std::max(c_.size(), o.c_.size()), T(0));
        for (size_t i = 0; i < r.size(); ++i) r[i] = (*this)[i] + o[i];
        return Poly(std::move(r));
    }
    Poly operator-(const Poly& o) const {
        std::vector<T> r(std::max(c_.size(), o.c_.size()), T(0));
        for (size_t i = 0; i < r.size(); ++i) r[i] = (*this)[i] - o[i];
        return Poly(std::move(r));
    }
    Poly operator-() const {
        std::vector<T> r = c_;
        for (auto& a : r) a = -a;
        return Poly(std::move(r));
    }
    Poly operator*(const Poly& o) const {
        if (is_zero() || o.is_zero()) return Poly();
        std::vector<T> r(c_.size() + o.c_.size() - 1, T(0));
        for (size_t i = 0; i < c_.size(); ++i)
            for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] = r[i + j] + c_[i] * o.c_[j];
        return Poly(std::move(r));
    }
    Poly operator*(const T& a) const {
        std::vector<T> r = c_;
        for (auto& x : r) x = x * a;
        return Poly(std::move(r));
    }
    bool operator==(const Poly& o) const {
        if (c_.size() != o.c_.size()) return false;
        for (size_t i = 0; i < c_.size(); ++i)
            if (!(c_[i] == o.c_[i])) return false;
        return true;
    }

    T eval(const T& x) const {
        T r(0);
        for (size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
        return r;
    }
    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<T> r(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) {
            T k(0);
            for (size_t j = 0; j < i; ++j) k = k + T(1);
            r[i - 1] = c_[i] * k;
        }
        return Poly(std::move(r));
    }
    // f(x + a)
    Poly translate(const T& a) const {
        Poly r;
        Poly shift({a, T(1)});
        for (size_t i = c_.size(); i-- > 0;) r = r * shift + Poly::constant(c_[i]);
        return r;
    }
    // f(a*x)
    Poly scale_arg(const T& a) const {
        std::vector<T> r = c_;
        T pw(1);
        for (size_t i = 0; i < r.size(); ++i) {
            r[i] = r[i] * pw;
            pw = pw * a;
        }
        return Poly(std::move(r));
    }
    // x^deg * f(1/x)
    Poly reversed() const {
        std::vector<T> r(c_.rbegin(), c_.rend());
        return Poly(std::move(r));
    }

    // division with remainder; requires invertible leading coefficient
    std::pair<Poly, Poly> divmod(const Poly& d) const {
        if (d.is_zero()) throw InputError("polynomial division by zero");
        Poly r = *this;
        T zero_of_ring = d.lc() - d.lc();
        std::vector<T> q(std::max<int>(degree() - d.degree() + 1, 0), zero_of_ring);
        T inv = T(1) / d.lc();
        while (!r.is_zero() && r.degree() >= d.degree()) {
            int k = r.degree() - d.degree();
            T f = r.lc() * inv;
            q[k] = f;
            std::vector<T> rc = r.c_;
            for (int i = 0; i <= d.degree(); ++i) rc[k + i] = rc[k + i] - f * d.c_[i];
            rc.pop_back();
            r = Poly(std::move(rc));
        }
        return {Poly(std::move(q)), r};
    }
    Poly operator/(const Poly& d) const {
        auto [q, r] = divmod(d);
        if (!r.is_zero()) throw InputError("inexact polynomial division");
        return q;
    }
    Poly operator%(const Poly& d) const { return divmod(d).second; }

    Poly monic() const { return *this * (T(1) / lc()); }

private:
    std::vector<T> c_;
    void trim() {
        while (!c_.empty() && c_.back() == T(0)) c_.pop_back();
    }
};

template <typename T>
Poly<T> gcd(Poly<T> a, Poly<T> b) {
    while (!b.is_zero()) {
        Poly<T> r = a % b;
        a = b;
        b = r;
    }
    return a.is_zero() ? a : a.monic();
}

// Res_x(a, b) over a commutative ring via Sylvester determinant with
// fraction-free elimination (degrees here never exceed 6).
template <typename T>
T resultant(const Poly<T>& a, const Poly<T>& b) {
    if (a.is_zero() || b.is_zero()) return T(0);
    int m = a.degree(), n = b.degree();
    if (m == 0) {
        T r(1);
        for (int i = 0; i < n; ++i) r = r * a[0];
        return r;
    }
    if (n == 0) {
        T r(1);
        for (int i = 0; i < m; ++i) r = r * b[0];
        return r;
    }
    int N = m + n;
    std::vector<std::vector<T>> M(N, std::vector<T>(N, T(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) M[i][i + j] = a[m - j];
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) M[n + i][i + j] = b[n - j];
    // Bareiss; exact in any integral domain embedded in a field
    T det(1);
    T prev(1);
    int sign = 1;
    for (int k = 0; k < N; ++k) {
        int piv = -1;
        for (int i = k; i < N; ++i)
            if (!(M[i][k] == T(0))) {
                piv = i;
                break;
            }
        if (piv < 0) return T(0);
        if (piv != k) {
            std::swap(M[piv], M[k]);
            sign = -sign;
        }
        for (int i = k + 1; i < N; ++i) {
            for (int j = k + 1; j < N; ++j) {
                M[i][j] = (M[k][k] * M[i][j] - M[i][k] * M[k][j]) / prev;
            }
            M[i][k] = T(0);
        }
        prev = M[k][k];
    }
    det = M[N - 1][N - 1];
    return sign == 1 ? det : -det;
}

template <typename T>
T discriminant(const Poly<T>& f) {
    int n = f.degree();
    if (n < 1) throw InputError("discriminant of constant");
    T r = resultant(f, f.derivative());
    r = r / f.lc();
    // (-1)^{n(n-1)/2}
    if ((n * (n - 1) / 2) % 2) r = -r;
    return r;
}

using QPoly = Poly<Rational>;

// all rational roots of a nonzero rational polynomial, with multiplicity 1
// (callers pass squarefree inputs)
inline std::vector<Rational> rational_roots(const QPoly& f) {
    std::vector<Rational> roots;
    if (f.is_zero()) throw InputError("rational_roots of zero");
    QPoly g = f;
    bool zero_root = false;
    while (g.degree() >= 1 && g[0] == 0) {
        zero_root = true;
        g = g / QPoly::x();
    }
    if (zero_root) roots.push_back(Rational(0));
    if (g.degree() < 1) return roots;
    // clear denominators
    Integer L = 1;
    for (auto& c : g.coeffs()) L = boost::multiprecision::lcm(L, den(c));
    std::vector<Integer> ic;
    for (auto& c : g.coeffs()) ic.push_back(num(c * Rational(L)));
    Integer a0 = ic.front(), an = ic.back();
    auto divisors = [](const Integer& n) {
        std::vector<Integer> ds{1};
        for (auto& [p, e] : factor_integer(n)) {
            size_t sz = ds.size();
            Integer pk = 1;
            for (long i = 0; i < e; ++i) {
                pk *= p;
                for (size_t j = 0; j < sz; ++j) ds.push_back(ds[j] * pk);
            }
        }
        return ds;
    };
    for (auto& pnum : divisors(a0))
        for (auto& pden : divisors(an)) {
            for (int s : {1, -1}) {
                Rational cand(s * pnum, pden);
                if (g.eval(cand) == 0) {
                    if (std::find(roots.begin(), roots.end(), cand) == roots.end())
                        roots.push_back(cand);
                }
            }
        }
    std::sort(roots.begin(), roots.end());
    return roots;
}

// number of real roots of a squarefree rational polynomial in (a, b];
// pass whole = true for all of R. Sturm chains over exact rationals.
inline int sturm_count(const QPoly& f, const Rational& a, const Rational& b, bool whole = false) {
    std::vector<QPoly> chain{f, f.derivative()};
    while (!chain.back().is_zero()) {
        QPoly r = -(chain[chain.size() - 2] % chain.back());
        chain.push_back(r);
    }
    chain.pop_back();
    auto signs_at = [&](const Rational& x, int at_inf) {
        // at_inf: 0 finite, +1 at +infty, -1 at -infty
        int changes = 0, last = 0;
        for (auto& g : chain) {
            if (g.is_zero()) continue;
            Rational v;
            int s;
            if (at_inf == 0) {
                v = g.eval(x);
                s = v == 0 ? 0 : (v > 0 ? 1 : -1);
            } else {
                Rational lcv = g.lc();
                s = lcv > 0 ? 1 : -1;
                if (at_inf < 0 && g.degree() % 2) s = -s;
            }
            if (s == 0) continue;
            if (last != 0 && s != last) ++changes;
            last = s;
        }
        return changes;
    };
    if (whole) return signs_at(0, -1) - signs_at(0, +1);
    return signs_at(a, 0) - signs_at(b, 0);
}

inline int count_real_roots(const QPoly& f) { return sturm_count(f, 0, 0, true); }

}  // namespace ellparity
