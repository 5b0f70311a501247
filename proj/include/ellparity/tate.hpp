#pragma once

#include "ellparity/local_factor.hpp"
#include "ellparity/weierstrass.hpp"

#include <string>

namespace ellparity {

enum class ReductionClass { Good, SplitMultiplicative, NonsplitMultiplicative, Additive };

struct KodairaType {
    enum Kind { I0, In, II, III, IV, I0star, Instar, IVstar, IIIstar, IIstar } kind = I0;
    int n = 0;  // for In / Instar
    bool operator==(const KodairaType& o) const { return kind == o.kind && n == o.n; }
    std::string str() const {
        switch (kind) {
            case I0: return "I0";
            case In: return "I" + std::to_string(n);
            case II: return "II";
            case III: return "III";
            case IV: return "IV";
            case I0star: return "I0*";
            case Instar: return "I" + std::to_string(n) + "*";
            case IVstar: return "IV*";
            case IIIstar: return "III*";
            case IIstar: return "II*";
        }
        return "?";
    }
};

using LocalModel = WeierstrassModel<LocalElement>;

inline const LocalFieldPtr& model_field(const LocalModel& E) {
    for (const LocalElement* c : {&E.a1, &E.a2, &E.a3, &E.a4, &E.a6})
        if (c->attached()) return c->field();
    throw InputError("model has no attached coefficients");
}

struct LocalCurveData {
    KodairaType type;
    long tamagawa = 1;
    long v_min_disc = 0;
    long conductor_exponent = 0;
    ReductionClass cls = ReductionClass::Good;
    ModelTransform<LocalElement> to_minimal;  // input model -> minimal model
    LocalModel minimal;
    long u_valuation = 0;  // v(u) of the minimalizing transform

    LocalCurveData(LocalModel m) : minimal(std::move(m)) {}
};

namespace detail {

// residue of x / pi^k; theory guarantees integrality, precision errors
// surface as exceptions so the caller can retry at higher N
inline FFElement res_shift(const LocalElement& x, long k) {
    auto v = x.valuation(true);
    if (v.is_finite() && v.value() < k) throw PrecisionError("tate: unexpected low valuation");
    return x.shift_down(k).residue();
}

// distinct-root and rationality tests for Y^2 + bY + c over the residue field
inline bool quad_distinct(const FFFieldPtr& F, const FFElement& b, const FFElement& c) {
    if (F->p() != 2) return !(b * b - FFElement(4) * c).is_zero();
    return !b.is_zero();
}
inline bool quad_split(const FFFieldPtr& F, const FFElement& b, const FFElement& c) {
    // distinct roots assumed; do the roots lie in F?
    if (F->p() != 2) return F->is_square(b * b - FFElement(4) * c);
    return F->artin_schreier_solvable(c / (b * b));
}
inline FFElement quad_double_root(const FFFieldPtr& F, const FFElement& b, const FFElement& c) {
    if (F->p() != 2) return -(b / FFElement(2));
    return F->sqrt(-c);  // char 2: Y^2 = -c = c
}

}  // namespace detail

// Full Tate algorithm over any supported local field, every residue
// characteristic. The p >= 5 shortcut table exists only in the tests.
inline LocalCurveData tate_algorithm(const LocalModel& input0) {
    const LocalFieldPtr& K = model_field(input0);
    const FFFieldPtr& F = K->res;
    LocalElement piK = K->uniformizer();
    // attach any scalar coefficients so downstream arithmetic is uniform
    auto att = [&](const LocalElement& x) {
        return x.attached() ? x : K->from_integer(Integer(x.raw().empty() ? 0 : x.raw()[0]));
    };
    LocalModel E(att(input0.a1), att(input0.a2), att(input0.a3), att(input0.a4), att(input0.a6));
    ModelTransform<LocalElement> total{K->one(), K->zero(), K->zero(), K->zero()};
    auto apply = [&](const LocalElement& u, const LocalElement& r, const LocalElement& s,
                     const LocalElement& t) {
        E = E.transform(u, r, s, t);
        total = total.then(ModelTransform<LocalElement>{u, r, s, t});
    };
    // integral model
    {
        long k = 0;
        auto need = [&](const LocalElement& a, int i) {
            auto v = a.valuation(true);
            if (!v.is_finite()) return 0L;
            if (v.value() >= 0) return 0L;
            return (-v.value() + i - 1) / i;
        };
        k = std::max({need(E.a1, 1), need(E.a2, 2), need(E.a3, 3), need(E.a4, 4), need(E.a6, 6)});
        if (k > 0) apply(piK.inverse().pow(k), K->zero(), K->zero(), K->zero());
    }

    LocalCurveData out(E);
    for (int restart = 0; restart < 40; ++restart) {
        LocalElement delta = E.disc();
        auto vd = delta.valuation(true);
        if (!vd.is_finite()) {
            if (delta.is_zero_at_precision() && delta.abs_prec() <= 0)
                throw PrecisionError("tate: discriminant below precision");
            throw SingularModelError("tate: singular model");
        }
        long n = vd.value();
        if (n >= static_cast<long>(E.a1.abs_prec()) - 2 * K->e)
            throw PrecisionError("tate: discriminant valuation too close to precision");
        out.v_min_disc = n;
        if (n == 0) {
            out.type = {KodairaType::I0, 0};
            out.tamagawa = 1;
            out.conductor_exponent = 0;
            out.cls = ReductionClass::Good;
            break;
        }
        // move the singular point of the reduction to the origin
        {
            FFElement x0 = F->zero(), y0 = F->zero();
            if (K->p != 2) {
                FFElement inv2 = F->from_int(1) / F->from_int(2);
                FFElement inv4 = inv2 * inv2;
                FFPoly g({detail::res_shift(E.b6(), 0) * inv4, detail::res_shift(E.b4(), 0) * inv2,
                          detail::res_shift(E.b2(), 0) * inv4, F->one()});
                FFPoly gg = gcd(g, g.derivative());
                if (gg.degree() < 1) throw PrecisionError("tate: lost the singular point");
                auto rts = F->roots(gg);
                if (rts.empty()) throw PrecisionError("tate: singular point not rational");
                x0 = rts.front();
                y0 = -(detail::res_shift(E.a1, 0) * x0 + detail::res_shift(E.a3, 0)) * inv2;
            } else {
                FFElement A1 = detail::res_shift(E.a1, 0), A2 = detail::res_shift(E.a2, 0);
                FFElement A3 = detail::res_shift(E.a3, 0), A4 = detail::res_shift(E.a4, 0);
                FFElement A6 = detail::res_shift(E.a6, 0);
                if (!A1.is_zero()) {
                    x0 = A3 / A1;
                    y0 = (x0 * x0 + A4) / A1;
                } else {
                    x0 = F->sqrt(A4);
                    y0 = F->sqrt(x0 * x0 * x0 + A2 * x0 * x0 + A4 * x0 + A6);
                }
            }
            if (!x0.is_zero() || !y0.is_zero()) apply(K->one(), K->lift(x0), K->zero(), K->lift(y0));
        }
        // step 3: multiplicative?
        if (E.b2().valuation(true) == ExtInt(0)) {
            FFElement A1 = detail::res_shift(E.a1, 0), A2 = detail::res_shift(E.a2, 0);
            bool split;
            if (K->p != 2)
                split = F->is_square(A1 * A1 + FFElement(4) * A2);
            else
                split = F->artin_schreier_solvable(A2 / (A1 * A1));
            out.type = {KodairaType::In, static_cast<int>(n)};
            out.tamagawa = split ? n : (n % 2 == 0 ? 2 : 1);
            out.conductor_exponent = 1;
            out.cls = split ? ReductionClass::SplitMultiplicative : ReductionClass::NonsplitMultiplicative;
            break;
        }
        out.cls = ReductionClass::Additive;
        auto val_ge = [&](const LocalElement& a, long k) {
            auto v = a.valuation(true);
            return !v.is_finite() || v.value() >= k;
        };
        // step 4: type II
        if (!val_ge(E.a6, 2)) {
            out.type = {KodairaType::II, 0};
            out.tamagawa = 1;
            out.conductor_exponent = n;
            break;
        }
        // step 5: type III
        if (!val_ge(E.b8(), 3)) {
            out.type = {KodairaType::III, 0};
            out.tamagawa = 2;
            out.conductor_exponent = n - 1;
            break;
        }
        // step 6: type IV
        if (!val_ge(E.b6(), 3)) {
            FFElement b = detail::res_shift(E.a3, 1), c = -detail::res_shift(E.a6, 2);
            out.type = {KodairaType::IV, 0};
            out.tamagawa = detail::quad_split(F, b, c) ? 3 : 1;
            out.conductor_exponent = n - 2;
            break;
        }
        // normalize: pi | a1, a2; pi^2 | a3, a4; pi^3 | a6
        if (K->p != 2) {
            LocalElement inv2 = K->from_integer(2).inverse();
            apply(K->one(), K->zero(), -(E.a1 * inv2), K->zero());
            apply(K->one(), K->zero(), K->zero(), -(E.a3 * inv2));
        } else {
            if (!val_ge(E.a1, 1)) throw PrecisionError("tate: a1 not divisible at p=2");
            LocalElement s = K->lift(F->sqrt(detail::res_shift(E.a2, 0)));
            apply(K->one(), K->zero(), s, K->zero());
            if (!val_ge(E.a3, 2)) throw PrecisionError("tate: a3 normalization failed");
            LocalElement t = piK * K->lift(F->sqrt(detail::res_shift(E.a6, 2)));
            apply(K->one(), K->zero(), K->zero(), t);
        }
        if (!(val_ge(E.a1, 1) && val_ge(E.a2, 1) && val_ge(E.a3, 2) && val_ge(E.a4, 2) &&
              val_ge(E.a6, 3)))
            throw PrecisionError("tate: normalization invariant violated");
        // step 7: P(T) = T^3 + a2,1 T^2 + a4,2 T + a6,3
        FFPoly P({detail::res_shift(E.a6, 3), detail::res_shift(E.a4, 2), detail::res_shift(E.a2, 1),
                  F->one()});
        FFPoly Pg = gcd(P, P.derivative());
        if (Pg.degree() == 0) {
            out.type = {KodairaType::I0star, 0};
            out.tamagawa = 1 + static_cast<long>(F->roots(P).size());
            out.conductor_exponent = n - 4;
            break;
        }
        if (Pg.degree() == 1) {
            // double root; move it to 0 and run the I_nu* subprocedure
            FFElement t0 = -Pg[0];
            if (!t0.is_zero()) apply(K->one(), piK * K->lift(t0), K->zero(), K->zero());
            long q = 2, nu = 1;
            bool done = false;
            while (!done) {
                // Y^2 + a3,q Y - a6,2q
                {
                    FFElement b = detail::res_shift(E.a3, q), c = -detail::res_shift(E.a6, 2 * q);
                    if (detail::quad_distinct(F, b, c)) {
                        out.type = {KodairaType::Instar, static_cast<int>(nu)};
                        out.tamagawa = detail::quad_split(F, b, c) ? 4 : 2;
                        out.conductor_exponent = n - 4 - nu;
                        done = true;
                        break;
                    }
                    FFElement y0 = detail::quad_double_root(F, b, c);
                    if (!y0.is_zero())
                        apply(K->one(), K->zero(), K->zero(), piK.pow(q) * K->lift(y0));
                }
                nu += 1;
                // a2,1 X^2 + a4,q+1 X + a6,2q+1
                {
                    FFElement alpha = detail::res_shift(E.a2, 1);
                    FFElement beta = detail::res_shift(E.a4, q + 1);
                    FFElement gamma = detail::res_shift(E.a6, 2 * q + 1);
                    bool distinct;
                    if (K->p != 2)
                        distinct = !(beta * beta - FFElement(4) * alpha * gamma).is_zero();
                    else
                        distinct = !beta.is_zero();
                    if (distinct) {
                        bool split;
                        if (K->p != 2)
                            split = F->is_square(beta * beta - FFElement(4) * alpha * gamma);
                        else
                            split = F->artin_schreier_solvable(alpha * gamma / (beta * beta));
                        out.type = {KodairaType::Instar, static_cast<int>(nu)};
                        out.tamagawa = split ? 4 : 2;
                        out.conductor_exponent = n - 4 - nu;
                        done = true;
                        break;
                    }
                    FFElement x0 = (K->p != 2) ? -(beta / (FFElement(2) * alpha)) : F->sqrt(gamma / alpha);
                    if (!x0.is_zero())
                        apply(K->one(), piK.pow(q) * K->lift(x0), K->zero(), K->zero());
                }
                nu += 1;
                q += 1;
                if (q > n + 4) throw PrecisionError("tate: I_n* subprocedure overran");
            }
            if (done) break;
        }
        // triple root: move it to 0
        {
            FFElement tau;
            if (K->p != 3) {
                tau = -(detail::res_shift(E.a2, 1) / FFElement(3));
            } else {
                // P = (T - tau)^3 = T^3 - tau^3 in characteristic 3; the cube
                // map is the Frobenius, inverted by x -> x^(q/3)
                FFElement c = -detail::res_shift(E.a6, 3);
                tau = c.pow(F->order() / 3);
            }
            if (!tau.is_zero()) apply(K->one(), piK * K->lift(tau), K->zero(), K->zero());
        }
        // step 8: IV*
        {
            FFElement b = detail::res_shift(E.a3, 2), c = -detail::res_shift(E.a6, 4);
            if (detail::quad_distinct(F, b, c)) {
                out.type = {KodairaType::IVstar, 0};
                out.tamagawa = detail::quad_split(F, b, c) ? 3 : 1;
                out.conductor_exponent = n - 6;
                break;
            }
            FFElement y0 = detail::quad_double_root(F, b, c);
            if (!y0.is_zero()) apply(K->one(), K->zero(), K->zero(), piK.pow(2) * K->lift(y0));
        }
        // step 9: III*
        if (!val_ge(E.a4, 4)) {
            out.type = {KodairaType::IIIstar, 0};
            out.tamagawa = 2;
            out.conductor_exponent = n - 7;
            break;
        }
        // step 10: II*
        if (!val_ge(E.a6, 6)) {
            out.type = {KodairaType::IIstar, 0};
            out.tamagawa = 1;
            out.conductor_exponent = n - 8;
            break;
        }
        // non-minimal: rescale and restart
        apply(piK, K->zero(), K->zero(), K->zero());
    }
    out.minimal = E;
    out.to_minimal = total;
    out.u_valuation = total.u.valuation(false).value();
    return out;
}

enum class SplitType { Split, Nonsplit };

inline SplitType reduction_split_test(const LocalModel& E) {
    auto data = tate_algorithm(E);
    if (data.cls == ReductionClass::SplitMultiplicative) return SplitType::Split;
    if (data.cls == ReductionClass::NonsplitMultiplicative) return SplitType::Nonsplit;
    throw InputError("reduction_split_test: reduction is not multiplicative");
}

// C(E/K, omega) = c * |omega / omega_min| with omega = w * (dx/(2y+a1x+a3)
// of the given model). Exact rational value plus its 2- and 3-adic parities.
struct FudgeFactor {
    Rational value;
    long ord2 = 0, ord3 = 0;
    int parity(int l) const { return ((l == 2 ? ord2 : ord3) % 2) ? -1 : 1; }
};

inline FudgeFactor fudge_factor_from_data(const LocalCurveData& data, const LocalFieldPtr& K,
                                          long w_val) {
    FudgeFactor C;
    long m = data.u_valuation - w_val;  // |omega/omega_min| = q^m
    Rational q(K->residue_order());
    C.value = Rational(data.tamagawa) * pow_rat(q, m);
    C.ord2 = valuation(Integer(data.tamagawa), Integer(2)).value() + (K->p == 2 ? m * K->f : 0);
    C.ord3 = valuation(Integer(data.tamagawa), Integer(3)).value() + (K->p == 3 ? m * K->f : 0);
    return C;
}

inline FudgeFactor fudge_factor(const LocalModel& E, const LocalElement& w_scale) {
    const LocalFieldPtr& K = model_field(E);
    auto data = tate_algorithm(E);
    return fudge_factor_from_data(data, K, w_scale.valuation(false).value());
}

inline int O_sign(const LocalModel& E, const LocalElement& w_scale, int l) {
    if (l != 2 && l != 3) throw InputError("O_sign: l must be 2 or 3");
    return fudge_factor(E, w_scale).parity(l);
}

}  // namespace ellparity
