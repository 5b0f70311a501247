#pragma once

#include "ellparity/tate.hpp"

#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace ellparity {

// ledger of named signs with provenance, as produced by the evaluators
struct SignRecord {
    std::string name;
    int value;
    std::string provenance;
};

struct SignLedger {
    std::vector<SignRecord> records;
    void add(std::string name, int value, std::string prov) {
        records.push_back({std::move(name), value, std::move(prov)});
    }
};

// A non-archimedean place, with the rational polynomial that produced the
// completion. The defining polynomial is the crutch for building composite
// extensions when the base is not Q_p itself.
struct LocalPlace {
    LocalFieldPtr K;
    QPoly def_poly;  // monic rational; x for Q_p

    static LocalPlace qp(int64_t p, int N) {
        return LocalPlace{LocalField::qp(p, N), QPoly({Rational(0), Rational(1)})};
    }
};

inline WeierstrassModel<LocalElement> attach_model(const WeierstrassModel<Rational>& E,
                                                   const LocalFieldPtr& K) {
    return WeierstrassModel<LocalElement>(K->from_rational(E.a1), K->from_rational(E.a2),
                                          K->from_rational(E.a3), K->from_rational(E.a4),
                                          K->from_rational(E.a6));
}

// ---------- sigma_phi ----------

// sigma for the 2-isogeny E_{a,b} -> E'_{a,b} over the non-archimedean field
// of a and b: (-1)^(ord_2 C(E')/C(E)), any coherent differential pair.
inline int sigma_two_isogeny(const LocalElement& a, const LocalElement& b) {
    const LocalFieldPtr& K = a.field() ? a.field() : b.field();
    TwoIsogeny<LocalElement> phi(a, b);
    LocalElement w = K->from_integer(2);
    auto CE = fudge_factor(phi.domain(), w);
    auto CE2 = fudge_factor(phi.codomain(), w);
    return CE.parity(2) * CE2.parity(2);
}

// sigma for the 3-isogeny from y^2 = x^3 + a(x-b)^2 over the field of a, b
inline int sigma_three_isogeny(const LocalElement& a, const LocalElement& b) {
    const LocalFieldPtr& K = a.field() ? a.field() : b.field();
    LocalElement w = K->from_integer(2);
    auto CE = fudge_factor(three_isogeny_domain(a, b), w);
    auto CE2 = fudge_factor(three_isogeny_codomain(a, b), w);
    return CE.parity(3) * CE2.parity(3);
}

// ---------- the h-function of the 2-isogeny sign formula ----------

// h(a, b) = (a,-b)(-2a, a^2-4b) for a != 0, (-2,-b) for a = 0; the two
// branches agree for |a| small.
inline int h_symbol(const LocalElement& a, const LocalElement& b) {
    const LocalFieldPtr& K = a.field() ? a.field() : b.field();
    if (!b.certified_nonzero()) throw InputError("h_symbol: b = 0");
    LocalElement disc = a * a - K->from_integer(4) * b;
    if (!disc.certified_nonzero()) throw InputError("h_symbol: a^2 - 4b = 0");
    if (!a.certified_nonzero()) {
        return hilbert_symbol_local(K->from_integer(-2), -b);
    }
    return hilbert_symbol_local(a, -b) * hilbert_symbol_local(K->from_integer(-2) * a, disc);
}

// archimedean h over R: same formula with real Hilbert symbols
inline int hilbert_symbol_real(const Rational& a, const Rational& b) {
    return (a < 0 && b < 0) ? -1 : 1;
}

inline int h_symbol_real(const Rational& a, const Rational& b) {
    if (b == 0 || a * a - 4 * b == 0) throw InputError("h_symbol_real: singular input");
    if (a == 0) return hilbert_symbol_real(-2, -b);
    return hilbert_symbol_real(a, -b) * hilbert_symbol_real(-2 * a, a * a - 4 * b);
}

// ---------- local two-torsion context ----------

struct OrbitData {
    LocalFieldPtr field;   // K(P)
    LocalElement a, b;     // f(x + r) = x^3 + a x^2 + b x at the representative
    int size;
};

struct IsogenyLocalContext {
    LocalFieldPtr K;
    int d = 1;                       // [K(E[2]) : K]
    QPoly cubic;                     // monic rational 2-division cubic
    Rational disc;                   // disc(cubic); square class of Delta_E
    std::vector<OrbitData> orbits;   // one entry per Galois orbit
    LocalFieldPtr F;                 // splitting field (== K when d = 1)
    std::vector<std::pair<LocalElement, LocalElement>> pairs_in_F;  // at all three roots
    // for d = 2: which entry of pairs_in_F is the K-rational kernel point
    int rational_pair_index = -1;
    LocalFieldPtr M;                 // K(sqrt(disc)); == K if disc is a square in K
};

namespace detail {

inline void sort_canonical(std::vector<LocalElement>& v) {
    std::sort(v.begin(), v.end(), [](const LocalElement& x, const LocalElement& y) {
        return LocalElement::canonical_cmp(x, y) < 0;
    });
}

inline std::vector<std::pair<LocalElement, LocalElement>> translated_pairs(
    const QPoly& f, const LocalFieldPtr& L) {
    LPoly fl = attach_poly(f, L);
    auto roots = local_roots(fl);
    if (roots.size() != 3) throw PrecisionError("splitting field does not split the cubic");
    sort_canonical(roots);
    std::vector<std::pair<LocalElement, LocalElement>> out;
    for (auto& r : roots) {
        auto [a, b] = kernel_translate(fl, r);
        out.push_back({a, b});
    }
    return out;
}

}  // namespace detail

inline IsogenyLocalContext build_isogeny_context(const WeierstrassModel<Rational>& E,
                                                 const LocalPlace& pl) {
    IsogenyLocalContext ctx;
    ctx.K = pl.K;
    ctx.cubic = E.two_division_cubic();
    ctx.disc = discriminant(ctx.cubic);
    if (ctx.disc == 0) throw SingularModelError("two-torsion cubic not squarefree");
    const LocalFieldPtr& K = pl.K;
    LPoly fK = attach_poly(ctx.cubic, K);
    auto kroots = local_roots(fK);
    detail::sort_canonical(kroots);
    LocalElement discK = K->from_rational(ctx.disc);
    bool disc_square = lf_is_square(discK);

    if (kroots.size() == 3) {
        ctx.d = 1;
        ctx.F = K;
        ctx.M = K;
        for (auto& r : kroots) {
            auto [a, b] = kernel_translate(fK, r);
            ctx.orbits.push_back({K, a, b, 1});
        }
        for (auto& r : kroots) {
            auto [a, b] = kernel_translate(fK, r);
            ctx.pairs_in_F.push_back({a, b});
        }
        return ctx;
    }
    if (kroots.size() == 1) {
        ctx.d = 2;
        auto Q = quadratic_extension(K, discK);
        if (Q.split) throw PrecisionError("d=2 classification contradicts square disc");
        ctx.F = Q.ext;
        ctx.M = Q.ext;
        // rational orbit
        auto [ar, br] = kernel_translate(fK, kroots[0]);
        ctx.orbits.push_back({K, ar, br, 1});
        // conjugate pair orbit over F
        ctx.pairs_in_F = detail::translated_pairs(ctx.cubic, ctx.F);
        // locate the K-rational root among the F-roots
        LPoly fF = attach_poly(ctx.cubic, ctx.F);
        auto froots = local_roots(fF);
        detail::sort_canonical(froots);
        LocalElement rK_in_F = Q.emb(kroots[0]);
        int idx = -1;
        for (size_t i = 0; i < froots.size(); ++i)
            if ((froots[i] - rK_in_F).is_zero_at_precision()) idx = static_cast<int>(i);
        if (idx < 0) throw PrecisionError("rational root lost in the quadratic extension");
        ctx.rational_pair_index = idx;
        int pair_idx = (idx == 0) ? 1 : 0;
        auto [ap, bp] = kernel_translate(fF, froots[static_cast<size_t>(pair_idx)]);
        ctx.orbits.push_back({ctx.F, ap, bp, 2});
        return ctx;
    }
    // no roots in K: the cubic is irreducible over K; d = 3 or 6
    ctx.d = disc_square ? 3 : 6;
    // construct the cubic extension K(P)
    LocalFieldPtr cubic_field;
    if (K->degree() == 1) {
        auto pieces = factor_over_local(ctx.cubic, K->p, K->N);
        if (pieces.size() != 1 || pieces[0].field->degree() != 3)
            throw PrecisionError("inconsistent local cubic factorization");
        cubic_field = pieces[0].field;
    } else if (K->degree() == 2 && pl.def_poly.degree() == 2) {
        // K = Q_p(sqrt(D)) with D = disc(def_poly); here d must be 3 (degree cap)
        if (ctx.d != 3)
            throw UnsupportedCaseError("two-torsion degree 6 over a quadratic base exceeds the cap");
        Rational D = discriminant(pl.def_poly);
        auto pieces = factor_over_local(ctx.cubic, K->p, K->N);
        if (pieces.size() != 1 || pieces[0].field->degree() != 3)
            throw PrecisionError("cubic splits over Q_p but not over the base?");
        auto S = pieces[0].field;
        auto QS = quadratic_extension(S, S->from_rational(D));
        if (QS.split) throw PrecisionError("base quadratic splits inside the cubic field");
        cubic_field = QS.ext;
    } else {
        throw UnsupportedCaseError("cubic two-torsion extension over this base is out of range");
    }
    if (ctx.d == 3) {
        ctx.F = cubic_field;
        ctx.M = K;
        ctx.pairs_in_F = detail::translated_pairs(ctx.cubic, ctx.F);
        ctx.orbits.push_back({ctx.F, ctx.pairs_in_F[0].first, ctx.pairs_in_F[0].second, 3});
        return ctx;
    }
    // d = 6: K(P) is the cubic field; F = K(P)(sqrt disc); M = K(sqrt disc)
    {
        LPoly fC = attach_poly(ctx.cubic, cubic_field);
        auto croots = local_integral_roots(fC);
        if (croots.empty()) {
            croots = local_roots(fC);
        }
        if (croots.empty()) throw PrecisionError("cubic field lost its root");
        detail::sort_canonical(croots);
        auto [a, b] = kernel_translate(fC, croots[0]);
        ctx.orbits.push_back({cubic_field, a, b, 3});
        auto QF = quadratic_extension(cubic_field, cubic_field->from_rational(ctx.disc));
        if (QF.split) throw PrecisionError("d=6 but disc is square in the cubic field");
        ctx.F = QF.ext;
        ctx.pairs_in_F = detail::translated_pairs(ctx.cubic, ctx.F);
        auto QM = quadratic_extension(K, discK);
        if (QM.split) throw PrecisionError("d=6 but disc is square in the base");
        ctx.M = QM.ext;
    }
    return ctx;
}

// ---------- O-signs with the coherent differential convention ----------

namespace detail {

// ord_l parity of C(E/L, dx/y) for the simplified rational model over L
inline int O_sign_curve(const WeierstrassModel<Rational>& E, const LocalFieldPtr& L, int l) {
    auto EL = attach_model(E.simplified(), L);
    return fudge_factor(EL, L->from_integer(2)).parity(l);
}

// ord_l parity of C(E'_{a,b}/L, dx'/y') for the 2-isogeny codomain at (a, b)
inline int O_sign_codomain(const LocalElement& a, const LocalElement& b, int l) {
    const LocalFieldPtr& L = a.field() ? a.field() : b.field();
    TwoIsogeny<LocalElement> phi(a, b);
    return fudge_factor(phi.codomain(), L->from_integer(2)).parity(l);
}

}  // namespace detail

// ---------- local root number (the four-row product formula) ----------

inline int local_root_number(const WeierstrassModel<Rational>& E, const LocalPlace& pl,
                             SignLedger* ledger = nullptr, const IsogenyLocalContext* pre = nullptr) {
    IsogenyLocalContext own;
    if (!pre) {
        own = build_isogeny_context(E, pl);
        pre = &own;
    }
    const IsogenyLocalContext& ctx = *pre;
    const LocalFieldPtr& K = ctx.K;
    int w = 1;
    std::ostringstream prov;
    if (ctx.d == 1) {
        w *= detail::O_sign_curve(E, K, 2);
        for (auto& orb : ctx.orbits) w *= detail::O_sign_codomain(orb.a, orb.b, 2);
        prov << "d=1 product of four O-signs over the base";
    } else if (ctx.d == 2) {
        const OrbitData& rat = ctx.orbits[0];   // kernel defined over K
        const OrbitData& pair = ctx.orbits[1];  // conjugate kernel over F
        w *= detail::O_sign_curve(E, K, 2);
        w *= detail::O_sign_codomain(rat.a, rat.b, 2);
        // E' base-changed to F, and one conjugate curve over F
        const auto& [aF, bF] = ctx.pairs_in_F[static_cast<size_t>(ctx.rational_pair_index)];
        w *= detail::O_sign_codomain(aF, bF, 2);
        w *= detail::O_sign_codomain(pair.a, pair.b, 2);
        prov << "d=2 O-signs over the base and the quadratic splitting field";
    } else if (ctx.d == 3) {
        w *= detail::O_sign_curve(E, ctx.F, 2);
        w *= detail::O_sign_codomain(ctx.orbits[0].a, ctx.orbits[0].b, 2);
        prov << "d=3 O-signs over the Galois cubic splitting field";
    } else {
        const OrbitData& orb = ctx.orbits[0];  // over the cubic field L'
        w *= detail::O_sign_curve(E, orb.field, 2);
        w *= detail::O_sign_codomain(orb.a, orb.b, 2);
        w *= detail::O_sign_curve(E, ctx.F, 2);
        w *= detail::O_sign_codomain(ctx.pairs_in_F[0].first, ctx.pairs_in_F[0].second, 2);
        w *= detail::O_sign_curve(E, ctx.M, 3);
        w *= detail::O_sign_curve(E, ctx.F, 3);
        prov << "d=6 O-signs over the cubic, sextic and quadratic fields";
    }
    if (K->p == 2 && (K->degree() % 2)) w = -w;
    if (ledger) ledger->add("w", w, prov.str());
    return w;
}

inline int archimedean_root_number() { return -1; }

// ---------- m-invariants and the sign identity they satisfy ----------

struct MInvariants {
    int m1rho = 1, m1eps = 1, m1epsrho = 1;
    int m() const { return m1rho * m1eps * m1epsrho; }
};

inline MInvariants m_invariants(const WeierstrassModel<Rational>& E, const LocalPlace& pl,
                                const IsogenyLocalContext* pre = nullptr) {
    IsogenyLocalContext own;
    if (!pre) {
        own = build_isogeny_context(E, pl);
        pre = &own;
    }
    const IsogenyLocalContext& ctx = *pre;
    MInvariants m;
    for (auto& orb : ctx.orbits) m.m1rho *= sigma_two_isogeny(orb.a, orb.b);
    if (ctx.d % 2 == 0) {
        for (auto& [a, b] : ctx.pairs_in_F) m.m1eps *= sigma_two_isogeny(a, b);
    }
    if (ctx.d == 6) {
        m.m1epsrho = detail::O_sign_curve(E, ctx.F, 3) * detail::O_sign_curve(E, ctx.M, 3);
    }
    return m;
}

// ---------- kappa and the Kramer-Tunnell identity ----------

// kappa(E, K(sqrt r)/K) for non-archimedean K of odd residue characteristic
// (or trivial extension). Residue characteristic 2 with a proper extension is
// outside the computable range and reports a typed error.
inline int kappa_local(const WeierstrassModel<Rational>& E, const Rational& r, const LocalPlace& pl) {
    const LocalFieldPtr& K = pl.K;
    LocalElement rK = K->from_rational(r);
    if (!rK.certified_nonzero()) throw InputError("kappa: twist by zero");
    if (lf_is_square(rK)) return 1;  // trivial extension: the norm map is onto
    if (K->p == 2)
        throw UnsupportedCaseError(
            "kappa over a 2-adic field with a proper quadratic extension is not computable here");
    auto S = E.simplified();
    auto Er = quadratic_twist(S, r);
    auto Q = quadratic_extension(K, rK);
    LocalElement w2K = K->from_integer(2);
    auto CE = fudge_factor(attach_model(S, K), w2K);
    auto CEr = fudge_factor(attach_model(Er, K), w2K);
    auto CEF = fudge_factor(attach_model(S, Q.ext), Q.ext->from_integer(2));
    return CE.parity(2) * CEr.parity(2) * CEF.parity(2);
}

// kappa at a real place: F = C when r < 0; the norm image is the identity
// component, so the index is the component group order.
inline int kappa_real(const WeierstrassModel<Rational>& E, const Rational& r) {
    if (r == 0) throw InputError("kappa: twist by zero");
    if (r > 0) return 1;  // trivial extension R/R
    return real_components(E) == 2 ? -1 : 1;
}

struct IdentityCheck {
    int lhs = 1, rhs = 1;
    bool equal() const { return lhs == rhs; }
};

// w(E/K) w(E_r/K) (-Delta_E, r)_K  ==  kappa(E, K(sqrt r)/K)
inline IdentityCheck kt_identity_check(const WeierstrassModel<Rational>& E, const Rational& r,
                                       const LocalPlace& pl) {
    IdentityCheck out;
    auto S = E.simplified();
    auto Er = quadratic_twist(S, r);
    int wE = local_root_number(E, pl);
    int wEr = local_root_number(Er, pl);
    Rational mdelta = -E.disc();
    int art = hilbert_symbol_local(pl.K->from_rational(mdelta), pl.K->from_rational(r));
    out.lhs = wE * wEr * art;
    out.rhs = kappa_local(E, r, pl);
    return out;
}

inline IdentityCheck kt_identity_check_real(const WeierstrassModel<Rational>& E, const Rational& r) {
    IdentityCheck out;
    int wE = archimedean_root_number();
    int wEr = archimedean_root_number();
    int art = hilbert_symbol_real(-E.disc(), r);
    out.lhs = wE * wEr * art;
    out.rhs = kappa_real(E, r);
    return out;
}

// ---------- the monic-cubic symbol-product identity ----------

struct Lemma85Result {
    int product = 1;
    int expected = 1;
    bool equal() const { return product == expected; }
};

// For each Galois orbit of roots of the squarefree monic cubic f, evaluate
// the h-function at the translated pair over K(r); the product over orbit
// representatives equals (-1,-1)_K. The a_r = 0 branch follows the
// continuity-consistent form (-2, -b_r).
inline Lemma85Result lemma85_check(const QPoly& f, const LocalPlace& pl) {
    if (f.degree() != 3 || !(f.lc() == Rational(1)))
        throw InputError("lemma85_check expects a monic cubic");
    if (discriminant(f) == 0) throw InputError("lemma85_check expects a squarefree cubic");
    const LocalFieldPtr& K = pl.K;
    Lemma85Result out;
    out.expected = minus_one_minus_one_local(K);
    LPoly fK = attach_poly(f, K);
    auto kroots = local_roots(fK);
    detail::sort_canonical(kroots);
    if (kroots.size() == 3) {
        for (auto& r : kroots) {
            auto [a, b] = kernel_translate(fK, r);
            out.product *= h_symbol(a, b);
        }
        return out;
    }
    if (kroots.size() == 1) {
        auto [a0, b0] = kernel_translate(fK, kroots[0]);
        out.product *= h_symbol(a0, b0);
        Rational D = discriminant(f);
        auto Q = quadratic_extension(K, K->from_rational(D));
        if (Q.split) throw PrecisionError("cubic with one root but square disc");
        auto pairs = detail::translated_pairs(f, Q.ext);
        // pick a root not equal to the embedded rational one
        LPoly fF = attach_poly(f, Q.ext);
        auto froots = local_roots(fF);
        detail::sort_canonical(froots);
        LocalElement rF = Q.emb(kroots[0]);
        for (auto& rr : froots) {
            if (!(rr - rF).is_zero_at_precision()) {
                auto [a, b] = kernel_translate(fF, rr);
                out.product *= h_symbol(a, b);
                break;
            }
        }
        return out;
    }
    // irreducible cubic over K: one orbit; K(r) depends on disc square class
    if (K->degree() > 2) throw UnsupportedCaseError("lemma85 over bases of degree > 2");
    LocalFieldPtr Kr;
    if (K->degree() == 1) {
        auto pieces = factor_over_local(f, K->p, K->N);
        if (pieces.size() != 1) throw PrecisionError("irreducible cubic split unexpectedly");
        Kr = pieces[0].field;
    } else {
        throw UnsupportedCaseError("lemma85 cubic orbits over quadratic bases are unused");
    }
    LPoly fr = attach_poly(f, Kr);
    auto rroots = local_roots(fr);
    if (rroots.empty()) throw PrecisionError("cubic field lost its root");
    detail::sort_canonical(rroots);
    auto [a, b] = kernel_translate(fr, rroots[0]);
    out.product *= h_symbol(a, b);
    return out;
}

// ---------- the p-isogeny sign identity ----------

// w(E/K) == sigma_phi * (h(a,b) for p = 2 | (-1, K(ker)/K) for p = 3)
inline IdentityCheck isogeny_formula_check(const Rational& a, const Rational& b, int p_isog,
                                           const LocalPlace& pl) {
    IdentityCheck out;
    const LocalFieldPtr& K = pl.K;
    LocalElement aK = K->from_rational(a), bK = K->from_rational(b);
    if (p_isog == 2) {
        if (b == 0 || a * a - 4 * b == 0) throw SingularModelError("singular 2-isogeny datum");
        WeierstrassModel<Rational> E(Rational(0), a, Rational(0), b, Rational(0));
        out.lhs = local_root_number(E, pl);
        out.rhs = sigma_two_isogeny(aK, bK) * h_symbol(aK, bK);
        return out;
    }
    if (p_isog == 3) {
        if (a == 0 || b == 0 || 4 * a + 27 * b == 0)
            throw SingularModelError("singular 3-isogeny datum");
        WeierstrassModel<Rational> E(Rational(0), a, Rational(0), -2 * a * b, a * b * b);
        out.lhs = local_root_number(E, pl);
        int art = hilbert_symbol_local(K->from_integer(-1), aK);
        out.rhs = sigma_three_isogeny(aK, bK) * art;
        return out;
    }
    throw InputError("isogeny_formula_check: p must be 2 or 3");
}

}  // namespace ellparity
