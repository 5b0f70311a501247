#include "ellparity/signs.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace ellparity;

namespace {

using QM = WeierstrassModel<Rational>;

QM curve(long a1, long a2, long a3, long a4, long a6) {
    return QM(Rational(a1), Rational(a2), Rational(a3), Rational(a4), Rational(a6));
}

LocalPlace place_for(const QM& E, int64_t p, int extra = 30) {
    long vd = 0;
    if (E.disc() != 0) {
        auto v = valuation(E.disc(), Integer(p));
        vd = v.is_finite() ? std::max(0L, v.value()) : 0;
    }
    return LocalPlace::qp(p, static_cast<int>(vd) + extra);
}

// classification rule: +1 on good and nonsplit multiplicative, -1 on split
int rule_12(const LocalCurveData& d) {
    switch (d.cls) {
        case ReductionClass::Good: return 1;
        case ReductionClass::NonsplitMultiplicative: return 1;
        case ReductionClass::SplitMultiplicative: return -1;
        default: throw InputError("rule_12 on additive place");
    }
}

}  // namespace

TEST_CASE("sigma: C-ratio internal consistency and spec examples") {
    auto Q5 = LocalField::qp(5, 26);
    // (a=0, b=1) over Q_5
    int s = sigma_two_isogeny(Q5->from_integer(0), Q5->from_integer(1));
    // the two expressions of the definition agree by construction; recompute
    // the ratio explicitly
    TwoIsogeny<LocalElement> phi(Q5->from_integer(0), Q5->from_integer(1));
    auto CE = fudge_factor(phi.domain(), Q5->from_integer(2));
    auto CE2 = fudge_factor(phi.codomain(), Q5->from_integer(2));
    CHECK(s == ((CE2.ord2 - CE.ord2) % 2 ? -1 : 1));
    // good reduction at p = 5 for both: sigma = +1
    CHECK(s == 1);
}

TEST_CASE("sigma is invariant under rescaling the differential") {
    // the C-ratio form cancels any omega' scale by construction; check that
    // scaling both models consistently leaves sigma unchanged
    auto Q3 = LocalField::qp(3, 30);
    SplitMix64 rng(17);
    for (int i = 0; i < 15; ++i) {
        long a = rng.range(-9, 9), b = rng.range(-9, 9);
        if (b == 0 || a * a - 4 * b == 0) continue;
        int s1 = sigma_two_isogeny(Q3->from_integer(a), Q3->from_integer(b));
        // (a, b) -> (u^2 a, u^4 b) rescales the model by u
        long u = 3;
        int s2 = sigma_two_isogeny(Q3->from_integer(a * u * u), Q3->from_integer(b * u * u * u * u));
        CHECK(s1 == s2);
    }
}

TEST_CASE("h-symbol: branches and continuity") {
    auto Q3 = LocalField::qp(3, 24);
    CHECK(h_symbol(Q3->from_integer(0), Q3->from_integer(1)) ==
          hilbert_symbol_local(Q3->from_integer(-2), Q3->from_integer(-1)));
    CHECK(h_symbol(Q3->from_integer(0), Q3->from_integer(1)) == 1);
    // branch consistency: a = p^6 vs a = 0
    for (int64_t p : {3, 5, 7}) {
        auto Qp = LocalField::qp(p, 26);
        Rational a6 = pow_rat(Rational(p), 6);
        CHECK(h_symbol(Qp->from_rational(a6), Qp->from_integer(1)) ==
              h_symbol(Qp->from_integer(0), Qp->from_integer(1)));
    }
    // and over Q_2 with more slack in the exponent
    auto Q2 = LocalField::qp(2, 30);
    Rational a10 = pow_rat(Rational(2), 10);
    CHECK(h_symbol(Q2->from_rational(a10), Q2->from_integer(1)) ==
          h_symbol(Q2->from_integer(0), Q2->from_integer(1)));
}

TEST_CASE("local root number: worked examples") {
    // archimedean
    CHECK(archimedean_root_number() == -1);
    // split multiplicative at 11
    auto E11 = curve(0, -1, 1, 0, 0);
    CHECK(local_root_number(E11, place_for(E11, 11)) == -1);
    // good reduction, d = 1: w = +1 and the O-sign product is +1
    auto E = curve(0, 0, 0, -1, 0);
    CHECK(local_root_number(E, place_for(E, 5)) == 1);
}

TEST_CASE("classification rule vs the product formula, all residue characteristics") {
    SplitMix64 rng(525600);
    int checked = 0;
    for (int64_t p : {2, 3, 5, 7}) {
        int per_p = 0;
        while (per_p < 30) {
            auto E = curve(rng.range(-10, 10), rng.range(-10, 10), rng.range(-10, 10),
                           rng.range(-10, 10), rng.range(-10, 10));
            if (E.disc() == 0) continue;
            auto pl = place_for(E, p);
            auto data = tate_algorithm(attach_model(E, pl.K));
            if (data.cls == ReductionClass::Additive) continue;
            int w = local_root_number(E, pl);
            INFO("p=" << p << " curve " << E.a1 << "," << E.a2 << "," << E.a3 << "," << E.a4 << ","
                      << E.a6 << " type " << data.type.str());
            CHECK(w == rule_12(data));
            ++per_p;
            ++checked;
        }
    }
    CHECK(checked >= 120);
}

TEST_CASE("m-invariants: trivial branches and the sign identity") {
    // d = 1, good reduction, odd p: everything trivial
    auto E = curve(0, 0, 0, -1, 0);
    auto pl = place_for(E, 5);
    auto ctx = build_isogeny_context(E, pl);
    CHECK(ctx.d == 1);
    auto m = m_invariants(E, pl, &ctx);
    CHECK(m.m1eps == 1);      // d odd
    CHECK(m.m1epsrho == 1);   // d != 6
    CHECK(m.m() == minus_one_minus_one_local(pl.K) * local_root_number(E, pl, nullptr, &ctx));
}

TEST_CASE("sign identity m = (-1,-1) w across d and residue characteristics") {
    SplitMix64 rng(83);
    struct Sample {
        QM E;
        std::vector<int64_t> ps;
    };
    std::vector<Sample> samples = {
        {curve(0, 0, 0, -1, 0), {2, 3, 5, 7}},    // d = 1
        {curve(0, 0, 0, 1, 0), {2, 3, 5, 7}},     // d = 2
        {curve(0, 0, 0, -3, 1), {2, 3, 5, 7}},    // d = 3 (square disc cubic)
        {curve(0, -1, 1, 0, 0), {2, 3, 5, 11}},   // d = 6
        {curve(0, 0, 0, 0, 2), {2, 3, 5}},        // additive at 2
        {curve(0, 0, 0, 0, 3), {2, 3, 5}},        // additive at 3
        {curve(0, 0, 0, 6, 4), {2, 3, 5}},
        {curve(1, 0, 0, -1, 1), {2, 3, 7}},
    };
    int total = 0;
    for (auto& s : samples) {
        for (auto p : s.ps) {
            auto pl = place_for(s.E, p);
            auto ctx = build_isogeny_context(s.E, pl);
            auto m = m_invariants(s.E, pl, &ctx);
            int w = local_root_number(s.E, pl, nullptr, &ctx);
            INFO("p=" << p << " d=" << ctx.d << " curve " << s.E.a2 << "," << s.E.a4 << ","
                      << s.E.a6);
            CHECK(m.m() == minus_one_minus_one_local(pl.K) * w);
            ++total;
        }
    }
    // plus random small curves over p = 2, 3
    for (int64_t p : {2, 3}) {
        int done = 0;
        while (done < 12) {
            auto E = curve(0, rng.range(-6, 6), 0, rng.range(-6, 6), rng.range(-6, 6));
            if (E.disc() == 0) continue;
            auto pl = place_for(E, p);
            try {
                auto ctx = build_isogeny_context(E, pl);
                auto m = m_invariants(E, pl, &ctx);
                int w = local_root_number(E, pl, nullptr, &ctx);
                INFO("p=" << p << " d=" << ctx.d << " curve 0," << E.a2 << ",0," << E.a4 << ","
                          << E.a6);
                CHECK(m.m() == minus_one_minus_one_local(pl.K) * w);
                ++done;
                ++total;
            } catch (const PrecisionError&) {
                continue;  // rare: skip rather than retune inside the unit test
            }
        }
    }
    CHECK(total >= 40);
}

TEST_CASE("conjugate kernels give equal sigmas over the splitting field") {
    // representative independence of the orbit products
    auto E = curve(0, -1, 1, 0, 0);  // d = 6
    for (int64_t p : {5, 11}) {
        auto pl = place_for(E, p);
        auto ctx = build_isogeny_context(E, pl);
        if (ctx.d < 3) continue;
        std::vector<int> sig;
        for (auto& [a, b] : ctx.pairs_in_F) sig.push_back(sigma_two_isogeny(a, b));
        for (size_t i = 1; i < sig.size(); ++i) CHECK(sig[i] == sig[0]);
    }
}

TEST_CASE("lemma 8.5 identity: spec examples") {
    QPoly x3x({Rational(0), Rational(-1), Rational(0), Rational(1)});  // x^3 - x
    {
        auto r = lemma85_check(x3x, LocalPlace::qp(5, 26));
        CHECK(r.equal());
        CHECK(r.expected == 1);
    }
    {
        auto r = lemma85_check(x3x, LocalPlace::qp(2, 30));
        CHECK(r.equal());
        CHECK(r.expected == -1);
    }
    {
        QPoly f({Rational(-2), Rational(0), Rational(0), Rational(1)});  // x^3 - 2
        auto r = lemma85_check(f, LocalPlace::qp(5, 26));
        CHECK(r.equal());
        CHECK(r.product == 1);
    }
}

TEST_CASE("lemma 8.5 identity: random cubics") {
    SplitMix64 rng(858);
    for (int64_t p : {2, 3, 5}) {
        int done = 0;
        while (done < 25) {
            QPoly f({Rational(rng.range(-12, 12)), Rational(rng.range(-12, 12)),
                     Rational(rng.range(-12, 12)), Rational(1)});
            if (discriminant(f) == 0) continue;
            long vd = valuation(discriminant(f), Integer(p)).value();
            auto pl = LocalPlace::qp(p, static_cast<int>(vd) + 28);
            auto r = lemma85_check(f, pl);
            INFO("p=" << p << " f = x^3 + " << f[2] << "x^2 + " << f[1] << "x + " << f[0]);
            CHECK(r.equal());
            ++done;
        }
    }
}

TEST_CASE("kappa: trivial, archimedean, odd-p good cases") {
    auto E = curve(0, 0, 0, -1, 0);
    // F = K: +1 (square twist)
    CHECK(kappa_local(E, Rational(4), place_for(E, 5)) == 1);
    // K = R, F = C: disconnected E(R) gives -1
    CHECK(kappa_real(E, Rational(-1)) == -1);
    CHECK(kappa_real(curve(0, 0, 0, 1, 0), Rational(-1)) == 1);
    CHECK(kappa_real(E, Rational(2)) == 1);
    // good reduction, unramified F/K, odd p: all three C-values are 1
    CHECK(kappa_local(E, Rational(2), place_for(E, 5)) == 1);  // 2 is not a QR mod 5
    // 2-adic proper extension: typed unsupported error
    CHECK_THROWS_AS(kappa_local(E, Rational(3), place_for(E, 2)), UnsupportedCaseError);
}

TEST_CASE("Kramer-Tunnell identity at supported places") {
    // F = K: both sides trivial
    {
        auto E = curve(0, 0, 0, -1, 0);
        auto r = kt_identity_check(E, Rational(9), place_for(E, 5));
        CHECK(r.equal());
        CHECK(r.lhs == 1);
    }
    // archimedean example: y^2 = x^3 - x, r = -1
    {
        auto r = kt_identity_check_real(curve(0, 0, 0, -1, 0), Rational(-1));
        CHECK(r.equal());
    }
    // random odd places
    SplitMix64 rng(4242);
    for (int64_t p : {3, 5, 7}) {
        int done = 0;
        while (done < 15) {
            auto E = curve(0, rng.range(-8, 8), 0, rng.range(-8, 8), rng.range(-8, 8));
            if (E.disc() == 0) continue;
            long r0 = rng.range(-15, 15);
            if (r0 == 0) continue;
            Rational r(r0);
            auto pl = place_for(E, p);
            try {
                auto chk = kt_identity_check(E, r, pl);
                INFO("p=" << p << " r=" << r << " curve 0," << E.a2 << ",0," << E.a4 << "," << E.a6);
                CHECK(chk.equal());
                ++done;
            } catch (const UnsupportedCaseError&) {
                continue;
            } catch (const PrecisionError&) {
                continue;
            }
        }
    }
}

TEST_CASE("isogeny sign formula: paper pairs and random data") {
    // (a=0, b=1, p_isog=2) over Q_5
    {
        auto pl = LocalPlace::qp(5, 30);
        auto r = isogeny_formula_check(Rational(0), Rational(1), 2, pl);
        CHECK(r.equal());
    }
    // the pair (22, -7) over Q_7: multiplicative reduction
    {
        auto pl = LocalPlace::qp(7, 34);
        WeierstrassModel<Rational> E(Rational(0), Rational(22), Rational(0), Rational(-7), Rational(0));
        auto data = tate_algorithm(attach_model(E, pl.K));
        CHECK((data.cls == ReductionClass::SplitMultiplicative ||
               data.cls == ReductionClass::NonsplitMultiplicative));
        auto r = isogeny_formula_check(Rational(22), Rational(-7), 2, pl);
        CHECK(r.equal());
    }
    // the pair (1, -12) for p_isog = 3 over Q_5
    {
        auto pl = LocalPlace::qp(5, 34);
        auto r = isogeny_formula_check(Rational(1), Rational(-12), 3, pl);
        CHECK(r.equal());
    }
    SplitMix64 rng(777);
    for (int64_t p : {2, 3, 5}) {
        int done = 0;
        while (done < 15) {
            long a = rng.range(-9, 9), b = rng.range(-9, 9);
            if (b == 0 || a * a - 4 * b == 0) continue;
            WeierstrassModel<Rational> E(Rational(0), Rational(a), Rational(0), Rational(b),
                                         Rational(0));
            long vd = valuation(E.disc(), Integer(p)).value();
            auto pl = LocalPlace::qp(p, static_cast<int>(vd) + 30);
            try {
                auto r = isogeny_formula_check(Rational(a), Rational(b), 2, pl);
                INFO("p=" << p << " (a,b)=(" << a << "," << b << ")");
                CHECK(r.equal());
                ++done;
            } catch (const PrecisionError&) {
                continue;
            }
        }
    }
    for (int64_t p : {2, 3, 5, 7}) {
        int done = 0;
        while (done < 8) {
            long a = rng.range(-7, 7), b = rng.range(-7, 7);
            if (a == 0 || b == 0 || 4 * a + 27 * b == 0) continue;
            auto D = three_isogeny_domain(Rational(a), Rational(b));
            long vd = valuation(D.disc(), Integer(p)).value();
            auto pl = LocalPlace::qp(p, static_cast<int>(vd) + 30);
            try {
                auto r = isogeny_formula_check(Rational(a), Rational(b), 3, pl);
                INFO("p=" << p << " 3-isog (a,b)=(" << a << "," << b << ")");
                CHECK(r.equal());
                ++done;
            } catch (const PrecisionError&) {
                continue;
            }
        }
    }
}

TEST_CASE("isogeny sign identity is invariant under model rescaling") {
    SplitMix64 rng(31415);
    auto pl = LocalPlace::qp(3, 36);
    int done = 0;
    while (done < 10) {
        long a = rng.range(-6, 6), b = rng.range(-6, 6);
        if (b == 0 || a * a - 4 * b == 0) continue;
        long u = 3;
        auto r1 = isogeny_formula_check(Rational(a), Rational(b), 2, pl);
        auto r2 = isogeny_formula_check(Rational(a * u * u), Rational(b * u * u * u * u), 2, pl);
        CHECK(r1.equal());
        CHECK(r2.equal());
        CHECK(r1.lhs == r2.lhs);
        ++done;
    }
}
