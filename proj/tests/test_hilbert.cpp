#include "ellparity/local_factor.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace ellparity;

namespace {

// Brute-force Hilbert symbol oracle over Q_p: strips square parts, then
// searches for a certified witness of z^2 = a x^2 + b y^2 with a
// multivariate-Hensel slack criterion. Independent of the production path.
int hilbert_oracle_qp(Rational a, Rational b, int64_t p) {
    auto strip = [&](Rational x) {
        long v = valuation(x, Integer(p)).value();
        long down = (v >= 0) ? 2 * (v / 2) : 2 * ((v - 1) / 2);
        return x / pow_rat(Rational(p), down);
    };
    a = strip(a);
    b = strip(b);
    // now v(a), v(b) in {0,1}; clear remaining denominators (v >= 0 holds)
    Integer A = num(a) * den(b), B = num(b) * den(a);
    // common square factor den(a)^... : (a, b) unchanged mod squares since
    // den(a)den(b) is a p-unit: multiply both by den(a)den(b)
    long vp2 = (p == 2) ? 1 : 0;
    long k = 2 * (vp2 + 1) + 3;  // v(F) >= k with unit coordinate certifies
    Integer pk = pow_int(Integer(p), static_cast<unsigned long>(k));
    auto md = [&](Integer x) {
        x %= pk;
        if (x < 0) x += pk;
        return x;
    };
    Integer Am = md(A), Bm = md(B);
    std::vector<bool> sq(static_cast<size_t>(pk), false);
    for (Integer z = 0; z < pk; ++z) sq[static_cast<size_t>(md(z * z))] = true;
    for (Integer x = 0; x < pk; ++x) {
        for (Integer y = 0; y < pk; ++y) {
            Integer t = md(Am * x * x + Bm * y * y);
            // needs a primitive triple; z determined mod p^k up to sign
            if (!sq[static_cast<size_t>(t)]) continue;
            // find z with z^2 = t mod p^k
            for (Integer z = 0; z < pk; ++z) {
                if (md(z * z) != t) continue;
                bool prim = (x % p != 0) || (y % p != 0) || (z % p != 0);
                if (prim) return 1;
                break;
            }
        }
    }
    return -1;
}

}  // namespace

TEST_CASE("hilbert symbol trivial and paper cases") {
    auto Q2 = LocalField::qp(2, 24);
    auto Q3 = LocalField::qp(3, 20);
    // (1, b) = +1
    CHECK(hilbert_symbol_local(Q3->from_integer(1), Q3->from_integer(7)) == 1);
    // (-1, -1) over Q_2 = -1
    CHECK(hilbert_symbol_local(Q2->from_integer(-1), Q2->from_integer(-1)) == -1);
    // (-1, 3) over Q_3 = -1
    CHECK(hilbert_symbol_local(Q3->from_integer(-1), Q3->from_integer(3)) == -1);
    CHECK(minus_one_minus_one_local(Q3) == 1);
    CHECK(minus_one_minus_one_local(Q2) == -1);
}

TEST_CASE("hilbert symbol vs brute force over Q_p, small sweep") {
    for (int64_t p : {2, 3, 5}) {
        auto Qp = LocalField::qp(p, 24);
        std::vector<Rational> vals;
        for (long u : {1, 2, 3, 5, 6, 7, -1, -2, -3, -5}) {
            if (u % p == 0 && p != 2 && p != 3 && p != 5) continue;
            vals.push_back(Rational(u));
            vals.push_back(Rational(u) * p);
        }
        int checked = 0;
        for (auto& a : vals)
            for (auto& b : vals) {
                if (checked > 150) break;
                int got = hilbert_symbol_local(Qp->from_rational(a), Qp->from_rational(b));
                int want = hilbert_oracle_qp(a, b, p);
                INFO("p=" << p << " a=" << a << " b=" << b);
                CHECK(got == want);
                ++checked;
            }
    }
}

TEST_CASE("hilbert bimultiplicativity and standard identities") {
    SplitMix64 rng(99);
    for (int64_t p : {2, 3, 5, 7}) {
        auto Qp = LocalField::qp(p, 24);
        auto rnd = [&]() {
            for (;;) {
                long n = rng.range(-60, 60);
                if (n != 0) return Qp->from_rational(Rational(n));
            }
        };
        for (int i = 0; i < 25; ++i) {
            auto a = rnd(), ap = rnd(), b = rnd();
            int lhs = hilbert_symbol_local(a * ap, b);
            int rhs = hilbert_symbol_local(a, b) * hilbert_symbol_local(ap, b);
            CHECK(lhs == rhs);
            // symmetry
            CHECK(hilbert_symbol_local(a, b) == hilbert_symbol_local(b, a));
            // (a, -a) = 1
            CHECK(hilbert_symbol_local(a, -a) == 1);
            // (a, 1-a) = 1 when both nonzero
            auto one_minus = Qp->one() - a;
            if (one_minus.certified_nonzero())
                CHECK(hilbert_symbol_local(a, one_minus) == 1);
        }
        // (a,-b)(b,-c)(c,-a) = (-1,-1) for a + b + c = 0
        for (int i = 0; i < 25; ++i) {
            long av = rng.range(-40, 40), bv = rng.range(-40, 40);
            long cv = -av - bv;
            if (av == 0 || bv == 0 || cv == 0) continue;
            auto a = Qp->from_rational(Rational(av));
            auto b = Qp->from_rational(Rational(bv));
            auto c = Qp->from_rational(Rational(cv));
            int prod = hilbert_symbol_local(a, -b) * hilbert_symbol_local(b, -c) *
                       hilbert_symbol_local(c, -a);
            CHECK(prod == minus_one_minus_one_local(Qp));
        }
    }
}

TEST_CASE("hilbert over extensions: norm compatibility") {
    // (a, Nb)_K = (a, b)_L for a in K, b in L
    // L = Q_2(sqrt 2)
    auto pieces = factor_over_local(QPoly({Rational(-2), Rational(0), Rational(1)}), 2, 26);
    auto L = pieces[0].field;
    auto sqrt2 = pieces[0].root;
    auto Q2 = LocalField::qp(2, 26);
    SplitMix64 rng(5);
    for (int i = 0; i < 12; ++i) {
        long av = rng.range(-30, 30);
        if (av == 0) continue;
        auto aK = Q2->from_rational(Rational(av));
        auto aL = L->from_rational(Rational(av));
        // random b in L
        long b0 = rng.range(-20, 20), b1 = rng.range(-20, 20);
        if (b0 == 0 && b1 == 0) continue;
        auto bL = L->from_rational(Rational(b0)) + sqrt2 * L->from_rational(Rational(b1));
        if (!bL.certified_nonzero()) continue;
        auto nb = norm_to_qp(bL);
        int lhs = hilbert_symbol_local(aK, nb);
        int rhs = hilbert_symbol_local(aL, bL);
        CHECK(lhs == rhs);
    }
    // minus_one_minus_one on the ramified quadratic over Q_2: degree 2 -> +1
    CHECK(minus_one_minus_one_local(L) == 1);
}

TEST_CASE("hilbert over odd ramified extension") {
    // L = Q_3(sqrt 3): (-1, -1)_L = +1, and unit-unit symbols are trivial
    auto pieces = factor_over_local(QPoly({Rational(-3), Rational(0), Rational(1)}), 3, 22);
    auto L = pieces[0].field;
    CHECK(hilbert_symbol_local(L->from_integer(-1), L->from_integer(-1)) == 1);
    // (pi, u): chi(u) over residue field F_3
    auto piL = pieces[0].root;
    CHECK(hilbert_symbol_local(piL, L->from_integer(-1)) == -1);  // -1 is not a QR mod 3
}
