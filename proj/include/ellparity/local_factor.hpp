#pragma once

#include "ellparity/local_field.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <tuple>
#include <vector>

namespace ellparity {

using LPoly = Poly<LocalElement>;

inline LPoly attach_poly(const QPoly& g, const LocalFieldPtr& K) {
    std::vector<LocalElement> c;
    for (auto& a : g.coeffs()) c.push_back(K->from_rational(a));
    return LPoly(std::move(c));
}

inline bool lpoly_integral(const LPoly& g) {
    for (auto& c : g.coeffs()) {
        auto v = c.valuation(true);
        if (v.is_finite() && v.value() < 0) return false;
    }
    return true;
}

inline Poly<FFElement> reduce_poly(const LPoly& g) {
    std::vector<FFElement> c;
    for (auto& a : g.coeffs()) c.push_back(a.residue());
    return Poly<FFElement>(std::move(c));
}

inline LPoly lift_poly(const Poly<FFElement>& g, const LocalFieldPtr& K) {
    std::vector<LocalElement> c;
    for (auto& a : g.coeffs()) c.push_back(K->lift(a));
    return LPoly(std::move(c));
}

// minimal p-valuation over the coefficients (the content in p-powers)
inline long lpoly_content_v(const LPoly& g) {
    long best = g.coeffs().empty() ? 0 : 1L << 30;
    for (auto& c : g.coeffs()) {
        auto v = c.valuation(true);
        if (v.is_finite()) best = std::min(best, v.value());
    }
    return best;
}

// ---------- Hensel machinery ----------

// Newton refinement of a simple root: v(g(x0)) > 2 v(g'(x0)).
inline LocalElement hensel_refine(const LPoly& g, LocalElement x) {
    LPoly gp = g.derivative();
    for (int it = 0; it < 200; ++it) {
        LocalElement val = g.eval(x);
        auto v = val.valuation(true);
        if (!v.is_finite()) return x;
        LocalElement der = gp.eval(x);
        if (!der.certified_nonzero()) throw PrecisionError("hensel_refine: derivative vanished");
        if (v.value() >= x.abs_prec()) return x;
        x = x - val / der;
    }
    throw PrecisionError("hensel_refine did not converge");
}

// Lift a coprime factorization: g monic integral, gbar = Abar * Bbar with
// gcd(Abar, Bbar) = 1, Abar monic. Returns monic (A, B) with g = A*B mod p^N.
inline std::pair<LPoly, LPoly> hensel_split(const LPoly& g, const FFPoly& Abar0,
                                            const FFPoly& Bbar0) {
    const LocalFieldPtr& K = g.coeffs().front().field();
    FFPoly Abar = Abar0.monic(), Bbar = Bbar0.monic();
    auto [d, U0, V0] = ff_ext_gcd(Abar, Bbar);
    if (d.degree() != 0) throw InputError("hensel_split: factors not coprime");
    LPoly A = lift_poly(Abar, K), B = lift_poly(Bbar, K);
    for (int j = 1; j < K->N; ++j) {
        LPoly diff = g - A * B;
        // diff has content >= j; next digit
        bool nonzero = false;
        for (auto& c : diff.coeffs()) {
            auto v = c.valuation(true);
            if (v.is_finite() && v.value() < static_cast<long>(K->e) * j) {
                throw PrecisionError("hensel_split: lift drifted");
            }
            if (v.is_finite()) nonzero = true;
        }
        if (!nonzero) break;
        std::vector<FFElement> dd;
        for (auto& c : diff.coeffs()) dd.push_back(c.times_p_power(-j).residue());
        FFPoly dbar(std::move(dd));
        if (dbar.is_zero()) continue;
        FFPoly dA = (V0 * dbar) % Abar;
        FFPoly dB = (dbar - dA * Bbar) / Abar;
        Integer pj = pow_int(Integer(K->p), static_cast<unsigned long>(j));
        A = A + lift_poly(dA, K) * K->from_integer(pj);
        B = B + lift_poly(dB, K) * K->from_integer(pj);
    }
    return {A, B};
}

// All roots of g lying in O_K; g integral with unit content, not necessarily
// monic (non-monic inputs arise from branch substitutions). Complete for
// separable g. depth guards against non-separable input.
inline std::vector<LocalElement> local_integral_roots(const LPoly& g, int depth = 0) {
    const LocalFieldPtr& K = g.coeffs().front().field();
    std::vector<LocalElement> out;
    if (g.degree() < 1) return out;
    if (depth > 4 * K->e * K->N) throw PrecisionError("root branching too deep");
    Poly<FFElement> gbar = reduce_poly(g);
    if (gbar.degree() < 0) throw InputError("local_integral_roots: zero content");
    LPoly gp = g.derivative();
    for (auto& r0 : K->res->roots(gbar)) {
        // multiplicity in the reduction
        bool simple = !(gbar.derivative().eval(r0).is_zero());
        LocalElement lift0 = K->lift(r0);
        if (simple) {
            out.push_back(hensel_refine(g, lift0));
            continue;
        }
        // branch: x = lift0 + pi * z
        LPoly h = g.translate(lift0);
        std::vector<LocalElement> c = h.coeffs();
        LocalElement piK = K->uniformizer();
        LocalElement pw = K->one();
        for (size_t i = 0; i < c.size(); ++i) {
            c[i] = c[i] * pw;
            pw = pw * piK;
        }
        LPoly hs(std::move(c));
        long cont = lpoly_content_v(hs);
        if (cont >= static_cast<long>(K->e) * (K->N - 2))
            throw PrecisionError("root branching exhausted precision");
        std::vector<LocalElement> cc = hs.coeffs();
        for (auto& x : cc) x = x.shift_down(cont);
        LPoly hnorm(std::move(cc));
        for (auto& z : local_integral_roots(hnorm, depth + 1)) {
            out.push_back(lift0 + piK * z);
        }
    }
    return out;
}

// all roots of g in K (integral or not); g need not be integral
inline std::vector<LocalElement> local_roots(const LPoly& g0) {
    if (g0.degree() < 1) return {};
    const LocalFieldPtr& K = g0.coeffs().front().field();
    // scale x = y / pi^s to force integrality of the monic normalization
    LPoly g = g0.monic();
    long s = 0;
    for (int i = 0; i < g.degree(); ++i) {
        auto v = g[static_cast<size_t>(i)].valuation(true);
        if (!v.is_finite()) continue;
        long need = -v.value();
        // v(c_i) + s*(deg - i) >= 0
        long k = (need + (g.degree() - i) - 1) / (g.degree() - i);
        s = std::max(s, k);
    }
    LocalElement piK = K->uniformizer();
    LPoly h = g;
    if (s > 0) {
        // h(y) = pi^(s*deg) * g(y/pi^s)
        std::vector<LocalElement> c = g.coeffs();
        for (int i = 0; i <= g.degree(); ++i)
            c[static_cast<size_t>(i)] = c[static_cast<size_t>(i)] * piK.pow(s * (g.degree() - i));
        h = LPoly(std::move(c));
    }
    std::vector<LocalElement> out;
    for (auto& y : local_integral_roots(h)) out.push_back(y.shift_down(s));
    // roots of g0 with negative valuation beyond the scaling are impossible:
    // the scaling bound makes every root of the monic normalization integral.
    return out;
}

// ---------- embeddings and unramified extension ----------

struct FieldHom {
    LocalFieldPtr from, to;
    LocalElement t_img, pi_img;
    LocalElement operator()(const LocalElement& x) const {
        // evaluate sum c_ij t^j pi^i at the images
        const auto& K = *from;
        LocalElement acc = to->zero();
        LocalElement pipow = to->one();
        for (int i = 0; i < K.e; ++i) {
            LocalElement upart = to->zero();
            LocalElement tpow = to->one();
            for (int j = 0; j < K.f; ++j) {
                upart = upart + tpow * to->from_integer(x.raw()[static_cast<size_t>(i) * K.f + j]);
                tpow = tpow * t_img;
            }
            acc = acc + upart * pipow;
            pipow = pipow * pi_img;
        }
        if (x.dshift() > 0) acc = acc.times_p_power(-x.dshift());
        return acc;
    }
    LPoly operator()(const LPoly& g) const {
        std::vector<LocalElement> c;
        for (auto& a : g.coeffs()) c.push_back((*this)(a));
        return LPoly(std::move(c));
    }
};

// K -> unramified extension of relative degree k (same Eisenstein polynomial)
inline std::pair<LocalFieldPtr, FieldHom> unramified_extension(const LocalFieldPtr& K, int k) {
    if (k == 1) {
        FieldHom id{K, K, K->f == 1 ? K->zero() : [&] {
                        std::vector<Integer> c(static_cast<size_t>(K->e) * K->f, Integer(0));
                        c[1] = 1;
                        return K->element(std::move(c));
                    }(),
                    K->uniformizer()};
        return {K, id};
    }
    int f2 = K->f * k;
    auto U2 = LocalField::unramified(K->p, f2, K->N);
    // image of t: root of K->unram in U2
    LPoly un = attach_poly(
        [&] {
            std::vector<Rational> c;
            for (auto& a : K->unram) c.push_back(Rational(a));
            return QPoly(std::move(c));
        }(),
        U2);
    auto roots = local_integral_roots(un);
    if (roots.empty()) throw PrecisionError("unramified embedding root not found");
    std::sort(roots.begin(), roots.end(), [](const LocalElement& a, const LocalElement& b) {
        return LocalElement::canonical_cmp(a, b) < 0;
    });
    LocalElement t2 = roots.front();
    LocalFieldPtr L;
    if (K->e == 1) {
        L = U2;
    } else {
        // transport Eisenstein coefficients through the embedding of U
        FieldHom uhom{LocalField::unramified(K->p, K->f, K->N), U2,
                      t2, U2->from_integer(Integer(K->p))};
        std::vector<std::vector<Integer>> eis2;
        for (auto& u : K->eis) {
            LocalElement img = uhom(LocalField::unramified(K->p, K->f, K->N)->element(
                std::vector<Integer>(u.begin(), u.end())));
            std::vector<Integer> raw(img.raw().begin(), img.raw().begin() + f2);
            eis2.push_back(std::move(raw));
        }
        L = LocalField::make(K->p, K->e, f2, K->N, std::move(eis2));
        // re-express t2 inside L (U2 sits inside L as the i = 0 slice)
        std::vector<Integer> c(static_cast<size_t>(L->e) * L->f, Integer(0));
        for (int j = 0; j < f2; ++j) c[static_cast<size_t>(j)] = t2.raw()[static_cast<size_t>(j)];
        t2 = L->element(std::move(c));
    }
    FieldHom hom{K, L, t2, L->uniformizer()};
    return {L, hom};
}

// ---------- characteristic polynomials over the base ----------

// char poly of multiplication-by-x on K as a Q_p-vector space (dimension ef),
// coefficients reported mod p^N as Integers; used for factor identification
// and norms to Q_p.
inline std::vector<Integer> charpoly_over_qp(const LocalElement& x0) {
    const LocalFieldPtr& K = x0.field();
    int n = K->degree();
    LocalElement x = x0;
    int dsh = x.dshift();
    // strip denominators; char poly of p^dsh * x is computed, caller adjusts
    // (we instead require integral input)
    if (dsh > 0) throw InputError("charpoly_over_qp requires an integral element");
    // columns: x * basis(i,j)
    std::vector<std::vector<Integer>> M(static_cast<size_t>(n), std::vector<Integer>(static_cast<size_t>(n)));
    for (int i = 0; i < K->e; ++i)
        for (int j = 0; j < K->f; ++j) {
            std::vector<Integer> c(static_cast<size_t>(n), Integer(0));
            c[static_cast<size_t>(i) * K->f + j] = 1;
            LocalElement b = K->element(std::move(c));
            LocalElement prod = x * b;
            for (int r = 0; r < n; ++r) M[static_cast<size_t>(r)][static_cast<size_t>(i) * K->f + j] =
                prod.raw()[static_cast<size_t>(r)];
        }
    // det(T*I - M) over (Z/p^N)[T] by cofactor expansion on the first column
    struct ZP {
        std::vector<Integer> c;  // poly in T
    };
    std::function<std::vector<Integer>(const std::vector<std::vector<std::vector<Integer>>>&)> detf;
    // build matrix of polynomials: entry (r,c) = (r==c ? T : 0) - M[r][c]
    auto polmul = [&](const std::vector<Integer>& a, const std::vector<Integer>& b) {
        std::vector<Integer> r(a.size() + b.size() - 1, Integer(0));
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < b.size(); ++j) {
                r[i + j] = (r[i + j] + a[i] * b[j]) % K->pN;
                if (r[i + j] < 0) r[i + j] += K->pN;
            }
        return r;
    };
    std::vector<std::vector<std::vector<Integer>>> PM(static_cast<size_t>(n),
        std::vector<std::vector<Integer>>(static_cast<size_t>(n)));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            Integer m0 = (K->pN - M[static_cast<size_t>(r)][static_cast<size_t>(c)]) % K->pN;
            if (r == c)
                PM[static_cast<size_t>(r)][static_cast<size_t>(c)] = {m0, Integer(1)};
            else
                PM[static_cast<size_t>(r)][static_cast<size_t>(c)] = {m0};
        }
    detf = [&](const std::vector<std::vector<std::vector<Integer>>>& A) -> std::vector<Integer> {
        size_t m = A.size();
        if (m == 1) return A[0][0];
        std::vector<Integer> acc{Integer(0)};
        for (size_t r = 0; r < m; ++r) {
            // minor
            std::vector<std::vector<std::vector<Integer>>> B(m - 1,
                std::vector<std::vector<Integer>>(m - 1));
            size_t rr = 0;
            for (size_t i = 0; i < m; ++i) {
                if (i == r) continue;
                for (size_t j = 1; j < m; ++j) B[rr][j - 1] = A[i][j];
                ++rr;
            }
            auto term = polmul(A[r][0], detf(B));
            if (r % 2) {
                for (auto& t : term) t = t == 0 ? t : K->pN - t;
            }
            if (acc.size() < term.size()) acc.resize(term.size(), Integer(0));
            for (size_t i = 0; i < term.size(); ++i) acc[i] = (acc[i] + term[i]) % K->pN;
        }
        return acc;
    };
    auto cp = detf(PM);
    cp.resize(static_cast<size_t>(n) + 1, Integer(0));
    return cp;
}

// norm to Q_p: (-1)^n * charpoly(0); handles denominators by scaling.
inline LocalElement norm_to_qp(const LocalElement& x) {
    const LocalFieldPtr& K = x.field();
    int n = K->degree();
    LocalElement y = x;
    int dsh = y.dshift();
    if (dsh > 0) y = y.times_p_power(dsh);
    auto cp = charpoly_over_qp(y);
    Integer c0 = cp[0];
    if (n % 2) c0 = (K->pN - c0) % K->pN;
    auto Qp = LocalField::qp(K->p, K->N);
    LocalElement nm = Qp->from_integer(c0);
    if (dsh > 0) nm = nm.times_p_power(-static_cast<long>(dsh) * n);
    return nm;
}

// ---------- squares and square roots ----------

inline bool lf_is_square(const LocalElement& x0);
inline LocalElement lf_sqrt(const LocalElement& x0);

namespace detail {

// for a unit u at p = 2: repeatedly absorb even-level defects; returns
// (status, s) with u = s^2 * z and z = 1 + (pi^k ...), status: 1 square,
// 0 nonsquare, and s the partial square root when status = 1.
inline std::pair<int, LocalElement> two_adic_unit_sqrt(const LocalElement& u0) {
    const LocalFieldPtr& K = u0.field();
    long e = K->e;
    LocalElement s = K->lift(K->res->sqrt(u0.residue()));
    LocalElement z = u0 / (s * s);
    for (int guard = 0; guard < 8 * K->N; ++guard) {
        LocalElement w = z - K->one();
        auto v = w.valuation(true);
        if (!v.is_finite() || v.value() >= 2 * e + 1) {
            // Newton to full precision: solve y^2 = z, y = 1 + ...
            LocalElement y = K->one();
            for (int it = 0; it < 8 * K->N; ++it) {
                LocalElement err = y * y - z;
                auto ve = err.valuation(true);
                if (!ve.is_finite() || ve.value() >= y.abs_prec()) break;
                y = y - err / (y + y);
            }
            return {1, s * y};
        }
        long k = v.value();
        if (k == 2 * e) {
            // 1 + 4c: square iff Artin-Schreier y^2 + y = c solvable in residue
            LocalElement c = w.times_p_power(-2);
            if (!K->res->artin_schreier_solvable(c.residue())) return {0, s};
            // absorb: z / (1 + 2y)^2 with y a residue AS-solution
            FFElement cy = c.residue();
            // solve y^2 + y = cy by linear algebra over F_2
            const auto& F = K->res;
            int f = F->f();
            // build matrix of map y -> y^2 + y on basis
            std::vector<std::vector<int>> A(static_cast<size_t>(f), std::vector<int>(static_cast<size_t>(f), 0));
            for (int j = 0; j < f; ++j) {
                std::vector<int64_t> bv(static_cast<size_t>(f), 0);
                bv[static_cast<size_t>(j)] = 1;
                FFElement b = F->element(bv);
                FFElement img = b * b + b;
                for (int i = 0; i < f; ++i) A[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    static_cast<int>(img.coeffs()[static_cast<size_t>(i)] & 1);
            }
            std::vector<int> rhs(static_cast<size_t>(f));
            for (int i = 0; i < f; ++i) rhs[static_cast<size_t>(i)] =
                static_cast<int>(cy.coeffs()[static_cast<size_t>(i)] & 1);
            // gaussian elimination over F_2
            std::vector<int> piv(static_cast<size_t>(f), -1);
            int row = 0;
            for (int col = 0; col < f && row < f; ++col) {
                int pr = -1;
                for (int i = row; i < f; ++i)
                    if (A[static_cast<size_t>(i)][static_cast<size_t>(col)]) {
                        pr = i;
                        break;
                    }
                if (pr < 0) continue;
                std::swap(A[static_cast<size_t>(pr)], A[static_cast<size_t>(row)]);
                std::swap(rhs[static_cast<size_t>(pr)], rhs[static_cast<size_t>(row)]);
                for (int i = 0; i < f; ++i)
                    if (i != row && A[static_cast<size_t>(i)][static_cast<size_t>(col)]) {
                        for (int j2 = 0; j2 < f; ++j2)
                            A[static_cast<size_t>(i)][static_cast<size_t>(j2)] ^=
                                A[static_cast<size_t>(row)][static_cast<size_t>(j2)];
                        rhs[static_cast<size_t>(i)] ^= rhs[static_cast<size_t>(row)];
                    }
                piv[static_cast<size_t>(col)] = row;
                ++row;
            }
            std::vector<int64_t> sol(static_cast<size_t>(f), 0);
            for (int col = 0; col < f; ++col)
                if (piv[static_cast<size_t>(col)] >= 0) sol[static_cast<size_t>(col)] =
                    rhs[static_cast<size_t>(piv[static_cast<size_t>(col)])];
            FFElement yres = F->element(sol);
            if (!((yres * yres + yres) == cy)) return {0, s};  // inconsistent system
            LocalElement corr = K->one() + K->lift(yres).times_p_power(1);
            s = s * corr;
            z = z / (corr * corr);
            continue;
        }
        if (k % 2 == 1) return {0, s};
        // even defect below 2e: absorb residue square root at level k/2
        LocalElement c = w.shift_down(k);
        FFElement sq = K->res->sqrt(c.residue());
        LocalElement corr = K->one() + K->lift(sq) * K->uniformizer().pow(k / 2);
        s = s * corr;
        z = z / (corr * corr);
    }
    throw PrecisionError("two_adic_unit_sqrt: defect loop exhausted");
}

}  // namespace detail

inline bool lf_is_square(const LocalElement& x0) {
    const LocalFieldPtr& K = x0.field();
    auto v = x0.valuation(true);
    if (!v.is_finite()) return true;  // zero counts as a square
    if (v.value() % 2) return false;
    LocalElement u = x0.shift_down(v.value());
    if (K->p != 2) return K->res->is_square(u.residue());
    return detail::two_adic_unit_sqrt(u).first == 1;
}

inline LocalElement lf_sqrt(const LocalElement& x0) {
    const LocalFieldPtr& K = x0.field();
    auto v = x0.valuation(true);
    if (!v.is_finite()) return K->zero();
    if (v.value() % 2) throw InputError("lf_sqrt: odd valuation");
    LocalElement u = x0.shift_down(v.value());
    LocalElement s;
    if (K->p != 2) {
        FFElement r0 = K->res->sqrt(u.residue());
        s = K->lift(r0);
        for (int it = 0; it < 64; ++it) {
            LocalElement err = s * s - u;
            auto ve = err.valuation(true);
            if (!ve.is_finite() || ve.value() >= s.abs_prec()) break;
            s = s - err / (s + s);
        }
    } else {
        auto [ok, ss] = detail::two_adic_unit_sqrt(u);
        if (!ok) throw InputError("lf_sqrt of non-square");
        s = ss;
    }
    return s.shift_down(-v.value() / 2);
}

// ---------- Eisenstein construction from a totally ramified piece ----------

namespace detail {

// char poly over the unramified base of the multiplication matrix M (entries
// in base B, e_B = 1), via expansion with Poly<LocalElement> entries.
inline std::vector<LocalElement> charpoly_over_unram(
    const std::vector<std::vector<LocalElement>>& M, const LocalFieldPtr& B) {
    size_t m = M.size();
    std::vector<std::vector<LPoly>> A(m, std::vector<LPoly>(m));
    for (size_t r = 0; r < m; ++r)
        for (size_t c = 0; c < m; ++c) {
            if (r == c)
                A[r][c] = LPoly({-M[r][c], B->one()});
            else
                A[r][c] = LPoly({-M[r][c]});
        }
    std::function<LPoly(std::vector<std::vector<LPoly>>&)> detf =
        [&](std::vector<std::vector<LPoly>>& X) -> LPoly {
        size_t n = X.size();
        if (n == 1) return X[0][0];
        LPoly acc;
        for (size_t r = 0; r < n; ++r) {
            std::vector<std::vector<LPoly>> Bm(n - 1, std::vector<LPoly>(n - 1));
            size_t rr = 0;
            for (size_t i = 0; i < n; ++i) {
                if (i == r) continue;
                for (size_t j = 1; j < n; ++j) Bm[rr][j - 1] = X[i][j];
                ++rr;
            }
            LPoly term = X[r][0] * detf(Bm);
            acc = (r % 2) ? acc - term : acc + term;
        }
        return acc;
    };
    LPoly cp = detf(A);
    std::vector<LocalElement> out;
    for (int i = 0; i <= static_cast<int>(m); ++i) out.push_back(cp[static_cast<size_t>(i)]);
    return out;
}

}  // namespace detail

// H monic integral over an unramified base B (e = 1), deg m >= 2, Newton
// polygon a single slope a/m with gcd(a, m) = 1. Returns the totally
// ramified extension L = B[x]/(H) in standard shape and one root of H in L.
inline std::pair<LocalFieldPtr, LocalElement> eisenstein_from_single_slope(const LPoly& H,
                                                                           const LocalFieldPtr& B) {
    if (B->e != 1) throw InputError("eisenstein_from_single_slope: base must be unramified");
    int m = H.degree();
    long a = -1;
    {
        auto v0 = H[0].valuation(true);
        if (!v0.is_finite()) throw InputError("single slope: zero constant term");
        a = v0.value();
    }
    if (std::gcd(a, static_cast<long>(m)) != 1)
        throw UnsupportedCaseError("wild ramified piece with non-coprime slope");
    // quotient arithmetic in B[x]/H with valuation via the beta-basis:
    // v_L(sum c_i beta^i) = min(m * v_B(c_i) + i * a)
    auto qmul = [&](const LPoly& x, const LPoly& y) { return (x * y) % H; };
    // pi_L = beta^xa * p^ya, xa = a^{-1} mod m in [1, m)
    long xa = 1;
    while ((xa * a) % m != 1 % m) ++xa;
    long ya = (1 - xa * a) / m;
    LPoly beta({B->zero(), B->one()});
    LPoly piL({B->one()});
    for (long i = 0; i < xa; ++i) piL = qmul(piL, beta);
    {
        std::vector<LocalElement> c = piL.coeffs();
        for (auto& x : c) x = x.times_p_power(ya);
        piL = LPoly(std::move(c));
    }
    // multiplication matrix of pi_L on basis beta^0..beta^{m-1}
    std::vector<std::vector<LocalElement>> M(static_cast<size_t>(m),
                                             std::vector<LocalElement>(static_cast<size_t>(m), B->zero()));
    for (int j = 0; j < m; ++j) {
        LPoly bj({B->zero()});
        {
            std::vector<LocalElement> c(static_cast<size_t>(j) + 1, B->zero());
            c[static_cast<size_t>(j)] = B->one();
            bj = LPoly(std::move(c));
        }
        LPoly col = qmul(piL, bj);
        for (int r = 0; r < m; ++r) M[static_cast<size_t>(r)][static_cast<size_t>(j)] =
            col[static_cast<size_t>(r)];
    }
    auto cp = detail::charpoly_over_unram(M, B);
    // verify Eisenstein and assemble
    std::vector<std::vector<Integer>> eis;
    for (int i = 0; i <= m; ++i) {
        LocalElement ci = cp[static_cast<size_t>(i)];
        if (ci.dshift() > 0) throw PrecisionError("eisenstein charpoly not integral");
        std::vector<Integer> raw(ci.raw().begin(), ci.raw().begin() + B->f);
        eis.push_back(std::move(raw));
    }
    auto Bf = B;
    {
        auto K = LocalField::unramified(B->p, B->f, B->N);
        // valuations check
        if (K->u_val(eis[0]) != 1) throw PrecisionError("charpoly constant term not Eisenstein");
        for (int i = 1; i < m; ++i)
            if (K->u_val(eis[static_cast<size_t>(i)]) < 1)
                throw PrecisionError("charpoly coefficient not Eisenstein");
    }
    auto L = LocalField::make(B->p, m, B->f, B->N, std::move(eis));
    // root of H inside L: map H coefficients (U-constants) into L
    FieldHom bl{B, L, [&] {
                    std::vector<Integer> c(static_cast<size_t>(L->e) * L->f, Integer(0));
                    if (L->f > 1) c[1] = 1;
                    return L->element(std::move(c));
                }(),
                L->from_integer(Integer(B->p))};
    LPoly HL = bl(H);
    auto roots = local_integral_roots(HL);
    if (roots.empty()) throw PrecisionError("constructed field contains no root");
    std::sort(roots.begin(), roots.end(), [](const LocalElement& x, const LocalElement& y) {
        return LocalElement::canonical_cmp(x, y) < 0;
    });
    return {L, roots.front()};
}

// ---------- relative quadratic extensions ----------

struct QuadExt {
    bool split = false;
    LocalFieldPtr base;
    LocalFieldPtr ext;          // valid when !split
    FieldHom emb;               // base -> ext
    LocalElement sqrt_rad;      // sqrt of the radicand (in ext, or in base when split)
    bool unramified = false;
};

// K(sqrt(D)) for non-square D: standardized field + embedding + sqrt(D).
inline QuadExt quadratic_extension(const LocalFieldPtr& K, const LocalElement& D) {
    QuadExt out;
    out.base = K;
    if (!D.certified_nonzero()) throw PrecisionError("quadratic_extension: zero radicand");
    if (lf_is_square(D)) {
        out.split = true;
        out.sqrt_rad = lf_sqrt(D);
        return out;
    }
    long v = D.valuation(false).value();
    // try the unramified quadratic first (only possible for even valuation)
    if (v % 2 == 0) {
        auto [L, hom] = unramified_extension(K, 2);
        LocalElement DL = hom(D);
        if (lf_is_square(DL)) {
            out.ext = L;
            out.emb = hom;
            out.sqrt_rad = lf_sqrt(DL);
            out.unramified = true;
            return out;
        }
    }
    // ramified: build an Eisenstein-over-K quadratic x^2 + c1 x + c0 for a
    // uniformizer of L, then standardize via the char poly over U.
    LocalElement c1 = K->zero(), c0 = K->zero();
    LocalElement piK = K->uniformizer();
    if (v % 2 != 0) {
        LocalElement D1 = D.shift_down(v - 1);  // valuation 1
        c0 = -D1;
    } else {
        if (K->p != 2) throw PrecisionError("odd p: even-valuation nonsquare must be unramified");
        LocalElement u = D.shift_down(v);
        // strip square part: u = s^2 (1 + pi^k w), k odd < 2e
        auto [ok, s] = detail::two_adic_unit_sqrt(u);
        if (ok) throw PrecisionError("quadratic_extension: inconsistent square test");
        LocalElement z = u / (s * s);
        LocalElement w = z - K->one();
        long k = w.valuation(false).value();
        if (k % 2 == 0 || k >= 2 * K->e)
            throw PrecisionError("quadratic_extension: defect normalization failed");
        // sqrt(z) = 1 + t*pi^{(k-1)/2} with t^2 + 2 pi^{-(k-1)/2} t - pi w1 = 0,
        // where w = pi^k w1... work with exact elements:
        LocalElement w1 = w.shift_down(k - 1);       // valuation 1
        LocalElement two = K->from_integer(2);
        c1 = (two).shift_down((k - 1) / 2);
        c0 = -w1;
    }
    // charpoly of multiplication by gamma on basis {pi^i, gamma pi^i}
    // gamma^2 = -c1 gamma - c0
    int e = K->e, f = K->f;
    auto U = LocalField::unramified(K->p, f, K->N);
    // K-element -> e x e matrix over U for multiplication on {pi^i}
    auto kmat = [&](const LocalElement& x) {
        std::vector<std::vector<LocalElement>> M(static_cast<size_t>(e),
                                                 std::vector<LocalElement>(static_cast<size_t>(e), U->zero()));
        for (int j = 0; j < e; ++j) {
            std::vector<Integer> c(static_cast<size_t>(e) * f, Integer(0));
            c[static_cast<size_t>(j) * f] = 1;
            LocalElement b = K->element(std::move(c));
            LocalElement prod = x * b;
            if (prod.dshift() > 0) throw PrecisionError("kmat: non-integral product");
            for (int i = 0; i < e; ++i) {
                std::vector<Integer> raw(prod.raw().begin() + static_cast<size_t>(i) * f,
                                         prod.raw().begin() + static_cast<size_t>(i + 1) * f);
                M[static_cast<size_t>(i)][static_cast<size_t>(j)] = U->element(std::move(raw));
            }
        }
        return M;
    };
    auto M0 = kmat(-c0);
    auto M1 = kmat(-c1);
    int n = 2 * e;
    std::vector<std::vector<LocalElement>> M(static_cast<size_t>(n),
                                             std::vector<LocalElement>(static_cast<size_t>(n), U->zero()));
    // basis order: pi^0..pi^{e-1}, gamma pi^0..gamma pi^{e-1}
    for (int j = 0; j < e; ++j) {
        // gamma * pi^j = gamma pi^j
        M[static_cast<size_t>(e + j)][static_cast<size_t>(j)] = U->one();
        // gamma * (gamma pi^j) = (-c0) pi^j + (-c1) gamma pi^j
        for (int i = 0; i < e; ++i) {
            M[static_cast<size_t>(i)][static_cast<size_t>(e + j)] = M0[static_cast<size_t>(i)][static_cast<size_t>(j)];
            M[static_cast<size_t>(e + i)][static_cast<size_t>(e + j)] = M1[static_cast<size_t>(i)][static_cast<size_t>(j)];
        }
    }
    auto cp = detail::charpoly_over_unram(M, U);
    std::vector<std::vector<Integer>> eis;
    for (int i = 0; i <= n; ++i) {
        LocalElement ci = cp[static_cast<size_t>(i)];
        if (ci.dshift() > 0) throw PrecisionError("quad ext charpoly not integral");
        std::vector<Integer> raw(ci.raw().begin(), ci.raw().begin() + f);
        eis.push_back(std::move(raw));
    }
    if (U->u_val(eis[0]) != 1) throw PrecisionError("quad ext: charpoly not Eisenstein at 0");
    for (int i = 1; i < n; ++i)
        if (U->u_val(eis[static_cast<size_t>(i)]) < 1)
            throw PrecisionError("quad ext: charpoly not Eisenstein");
    auto L = LocalField::make(K->p, n, f, K->N, std::move(eis));
    // embedding: t -> t, pi -> the root of K's Eisenstein polynomial in L
    // for which D becomes a square.
    LocalElement tL = [&] {
        std::vector<Integer> c(static_cast<size_t>(L->e) * L->f, Integer(0));
        if (L->f > 1) c[1] = 1;
        return L->element(std::move(c));
    }();
    // K's Eisenstein polynomial, coefficients mapped into L via U
    LPoly eisK;
    {
        std::vector<LocalElement> c;
        for (auto& u : K->eis) {
            LocalElement uc = L->zero();
            LocalElement tp = L->one();
            for (int j = 0; j < f; ++j) {
                uc = uc + tp * L->from_integer(u[static_cast<size_t>(j)]);
                tp = tp * tL;
            }
            c.push_back(uc);
        }
        eisK = LPoly(std::move(c));
    }
    auto cands = local_integral_roots(eisK);
    std::sort(cands.begin(), cands.end(), [](const LocalElement& x, const LocalElement& y) {
        return LocalElement::canonical_cmp(x, y) < 0;
    });
    for (auto& piImg : cands) {
        FieldHom hom{K, L, tL, piImg};
        LocalElement DL = hom(D);
        if (lf_is_square(DL)) {
            out.ext = L;
            out.emb = hom;
            out.sqrt_rad = lf_sqrt(DL);
            return out;
        }
    }
    throw PrecisionError("quadratic_extension: no compatible embedding found");
}

// coordinates of z in the basis {emb(b_i), zeta*emb(b_i)} of ext over base,
// zeta = Q.sqrt_rad. Requires the basis elements and z to be integral.
inline std::pair<LocalElement, LocalElement> quad_coordinates(const QuadExt& Q,
                                                              const LocalElement& z) {
    if (Q.split) throw InputError("quad_coordinates on split algebra");
    const LocalFieldPtr& L = Q.ext;
    const LocalFieldPtr& K = Q.base;
    int n = L->degree();
    int half = K->degree();
    std::vector<LocalElement> colelts;
    for (int i = 0; i < K->e; ++i)
        for (int j = 0; j < K->f; ++j) {
            std::vector<Integer> c(static_cast<size_t>(K->e) * K->f, Integer(0));
            c[static_cast<size_t>(i) * K->f + j] = 1;
            colelts.push_back(Q.emb(K->element(std::move(c))));
        }
    for (int i = 0; i < half; ++i) colelts.push_back(colelts[static_cast<size_t>(i)] * Q.sqrt_rad);
    LocalElement zz = z;
    long scale_p = 0;  // we solved for z * p^scale_p
    while (zz.dshift() > 0) {
        zz = zz.times_p_power(1);
        ++scale_p;
    }
    for (auto& ce : colelts)
        if (ce.dshift() > 0) throw InputError("quad_coordinates: non-integral basis");
    std::vector<std::vector<Integer>> A(static_cast<size_t>(n),
                                        std::vector<Integer>(static_cast<size_t>(n) + 1));
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r)
            A[static_cast<size_t>(r)][static_cast<size_t>(c)] = colelts[static_cast<size_t>(c)].raw()[static_cast<size_t>(r)];
    for (int r = 0; r < n; ++r) A[static_cast<size_t>(r)][static_cast<size_t>(n)] = zz.raw()[static_cast<size_t>(r)];
    const Integer& pN = L->pN;
    int64_t p = L->p;
    auto vp = [&](const Integer& x) {
        if (x == 0) return L->N;
        Integer y = x;
        int v = 0;
        while (y % p == 0) {
            y /= p;
            ++v;
        }
        return v;
    };
    auto invmod = [&](Integer a) {
        a %= pN;
        if (a < 0) a += pN;
        Integer m = p;
        Integer inv = powmod_u64(static_cast<uint64_t>(a % p), static_cast<uint64_t>(p - 2),
                                 static_cast<uint64_t>(p));
        while (m < pN) {
            m = m * m;
            inv = inv * (2 - a * inv) % m;
            if (inv < 0) inv += m;
        }
        inv %= pN;
        if (inv < 0) inv += pN;
        return inv;
    };
    std::vector<int> colof(static_cast<size_t>(n), -1);
    std::vector<bool> usedr(static_cast<size_t>(n), false);
    for (int c = 0; c < n; ++c) {
        int br = -1;
        int bv = L->N + 1;
        for (int r = 0; r < n; ++r) {
            if (usedr[static_cast<size_t>(r)]) continue;
            int v = vp(A[static_cast<size_t>(r)][static_cast<size_t>(c)]);
            if (v < bv) {
                bv = v;
                br = r;
            }
        }
        // the basis is a unit-triangularizable lattice basis only up to a
        // bounded index; allow pivots of small positive valuation
        if (br < 0 || bv >= L->N / 2) throw PrecisionError("quad_coordinates: singular system");
        usedr[static_cast<size_t>(br)] = true;
        colof[static_cast<size_t>(c)] = br;
        // scale pivot row so pivot becomes p^bv (divide row and rhs by unit)
        Integer piv = A[static_cast<size_t>(br)][static_cast<size_t>(c)];
        Integer unit = piv / pow_int(Integer(p), static_cast<unsigned long>(bv));
        Integer uinv = invmod(unit);
        for (int cc = 0; cc <= n; ++cc)
            A[static_cast<size_t>(br)][static_cast<size_t>(cc)] =
                A[static_cast<size_t>(br)][static_cast<size_t>(cc)] * uinv % pN;
        for (int r = 0; r < n; ++r) {
            if (r == br) continue;
            // eliminate using divisibility by p^bv
            Integer target = A[static_cast<size_t>(r)][static_cast<size_t>(c)];
            if (vp(target) < bv) throw PrecisionError("quad_coordinates: pivot defect");
            Integer fmul = target / pow_int(Integer(p), static_cast<unsigned long>(bv));
            if (fmul == 0) continue;
            for (int cc = 0; cc <= n; ++cc) {
                A[static_cast<size_t>(r)][static_cast<size_t>(cc)] =
                    (A[static_cast<size_t>(r)][static_cast<size_t>(cc)] -
                     fmul * A[static_cast<size_t>(br)][static_cast<size_t>(cc)]) % pN;
                if (A[static_cast<size_t>(r)][static_cast<size_t>(cc)] < 0)
                    A[static_cast<size_t>(r)][static_cast<size_t>(cc)] += pN;
            }
        }
    }
    // back out coordinates: pivot rows now hold p^bv * coord in column c
    std::vector<Integer> xc(static_cast<size_t>(half)), yc(static_cast<size_t>(half));
    std::vector<int> shifts(static_cast<size_t>(n), 0);
    for (int c = 0; c < n; ++c) {
        int r = colof[static_cast<size_t>(c)];
        Integer rhs = A[static_cast<size_t>(r)][static_cast<size_t>(n)];
        Integer piv = A[static_cast<size_t>(r)][static_cast<size_t>(c)];
        int bv = vp(piv);
        if (vp(rhs) < bv) throw PrecisionError("quad_coordinates: inexact solve");
        Integer coord = rhs / pow_int(Integer(p), static_cast<unsigned long>(bv));
        if (c < half)
            xc[static_cast<size_t>(c)] = coord;
        else
            yc[static_cast<size_t>(c - half)] = coord;
    }
    LocalElement x = K->element(std::move(xc));
    LocalElement y = K->element(std::move(yc));
    if (scale_p > 0) {
        x = x.times_p_power(-scale_p);
        y = y.times_p_power(-scale_p);
    }
    return {x, y};
}

// Nm_{ext/base}(z) = x^2 - rad * y^2 where z = x + y*sqrt(rad)
inline LocalElement quad_norm(const QuadExt& Q, const LocalElement& rad, const LocalElement& z) {
    auto [x, y] = quad_coordinates(Q, z);
    return x * x - rad * (y * y);
}

// ---------- factorization of rational polynomials over Q_p ----------

struct LocalFactorPiece {
    LocalFieldPtr field;
    FieldHom from_base;   // Q_p (or intermediate base) -> field
    LocalElement root;    // a root of the input polynomial in `field`
};

namespace detail {

inline FieldHom identity_hom(const LocalFieldPtr& K) {
    LocalElement t_img;
    if (K->f > 1) {
        std::vector<Integer> c(static_cast<size_t>(K->e) * K->f, Integer(0));
        c[1] = 1;
        t_img = K->element(std::move(c));
    } else {
        t_img = K->zero();
    }
    return FieldHom{K, K, t_img, K->uniformizer()};
}

inline FieldHom compose(const FieldHom& outer, const FieldHom& inner) {
    return FieldHom{inner.from, outer.to, outer(inner.t_img), outer(inner.pi_img)};
}

// minimal root valuation of a monic integral polynomial with reduction x^m,
// as a rational (from the Newton polygon's last segment)
inline Rational min_root_valuation(const LPoly& g) {
    int m = g.degree();
    Rational best(-1);
    for (int i = 0; i < m; ++i) {
        auto v = g[static_cast<size_t>(i)].valuation(true);
        if (!v.is_finite()) continue;
        Rational cand(v.value(), m - i);
        if (best < 0 || cand < best) best = cand;
    }
    if (best < 0) throw PrecisionError("polygon: all coefficients vanish at precision");
    return best;
}

inline std::vector<LocalFactorPiece> factor_pieces(const LPoly& g, const LocalFieldPtr& B,
                                                   int depth) {
    if (B->e != 1) throw InputError("factor_pieces: base must be unramified");
    if (depth > 60) throw PrecisionError("factor recursion too deep");
    std::vector<LocalFactorPiece> out;
    int m = g.degree();
    if (m <= 0) return out;
    if (m == 1) {
        out.push_back({B, identity_hom(B), -g[0]});
        return out;
    }
    auto gbar = reduce_poly(g);
    auto fac = ff_factor(B->res, gbar);
    if (fac.size() >= 2) {
        FFPoly A = fac[0].first;
        for (int i = 1; i < fac[0].second; ++i) A = A * fac[0].first;
        FFPoly Bb({B->res->one()});
        for (size_t i = 1; i < fac.size(); ++i)
            for (int j = 0; j < fac[i].second; ++j) Bb = Bb * fac[i].first;
        auto [GA, GB] = hensel_split(g, A, Bb);
        auto r1 = factor_pieces(GA, B, depth + 1);
        auto r2 = factor_pieces(GB, B, depth + 1);
        out.insert(out.end(), r1.begin(), r1.end());
        out.insert(out.end(), r2.begin(), r2.end());
        return out;
    }
    const FFPoly& h = fac[0].first;
    int mult = fac[0].second;
    if (mult == 1) {
        if (h.degree() == 1) {
            out.push_back({B, identity_hom(B), hensel_refine(g, B->lift(-h[0]))});
            return out;
        }
        auto [L, hom] = unramified_extension(B, h.degree());
        LPoly gl = hom(g);
        auto rts = L->res->roots(reduce_poly(gl));
        if (rts.empty()) throw PrecisionError("unramified factor lost its residue root");
        out.push_back({L, hom, hensel_refine(gl, L->lift(rts.front()))});
        return out;
    }
    if (h.degree() >= 2) {
        // move to the unramified extension where h splits, then regroup the
        // conjugate pieces: every Q_p-factor appears exactly deg(h) times.
        auto [B2, hom] = unramified_extension(B, h.degree());
        auto sub = factor_pieces(hom(g), B2, depth + 1);
        for (auto& piece : sub) piece.from_base = compose(piece.from_base, hom);
        // group by the characteristic polynomial of the root over Q_p
        std::vector<std::vector<Integer>> keys;
        std::vector<LocalFactorPiece> kept;
        std::vector<int> seen;
        for (auto& piece : sub) {
            auto cp = charpoly_over_qp(piece.root);
            Integer modulus = pow_int(Integer(B->p), static_cast<unsigned long>(std::max(2, B->N - 6)));
            for (auto& c : cp) c %= modulus;
            bool found = false;
            for (size_t k = 0; k < keys.size(); ++k) {
                if (keys[k] == cp) {
                    seen[k] += 1;
                    found = true;
                    break;
                }
            }
            if (!found) {
                keys.push_back(cp);
                seen.push_back(1);
                kept.push_back(piece);
            }
        }
        for (size_t k = 0; k < keys.size(); ++k)
            if (seen[k] != h.degree())
                throw PrecisionError("conjugate grouping mismatch; raise precision");
        return kept;
    }
    // h linear with multiplicity m = deg g: translate the cluster to 0
    LocalElement lam = B->lift(-h[0]);
    LPoly g1 = g.translate(lam);
    // B-rational roots first (length-one polygon segments live in B)
    auto broots = local_integral_roots(g1);
    if (!broots.empty()) {
        LPoly rem = g1;
        for (auto& r : broots) {
            out.push_back({B, identity_hom(B), lam + r});
            rem = rem.divmod(LPoly({-r, B->one()})).first;
        }
        if (rem.degree() >= 1) {
            for (auto& piece : factor_pieces(rem, B, depth + 1)) {
                piece.root = piece.from_base(lam) + piece.root;
                out.push_back(std::move(piece));
            }
        }
        return out;
    }
    Rational vmin = min_root_valuation(g1);
    long sigma = static_cast<long>(num(vmin) / den(vmin));
    LPoly g2 = g1;
    if (sigma >= 1) {
        std::vector<LocalElement> c = g1.coeffs();
        LocalElement ppw = B->from_integer(Integer(B->p));
        for (int i = 0; i <= m; ++i) {
            // c_i * p^(sigma * i) / p^(sigma * m)
            c[static_cast<size_t>(i)] = c[static_cast<size_t>(i)].times_p_power(sigma * i).times_p_power(-sigma * m);
        }
        g2 = LPoly(std::move(c));
        if (!lpoly_integral(g2)) throw PrecisionError("sigma scaling produced non-integral poly");
    }
    auto g2bar = reduce_poly(g2);
    int k = 0;
    while (k <= g2bar.degree() && g2bar[static_cast<size_t>(k)].is_zero()) ++k;
    auto remap = [&](std::vector<LocalFactorPiece> pieces) {
        for (auto& piece : pieces) {
            LocalElement r = piece.root;
            if (sigma >= 1) r = r.times_p_power(sigma);
            piece.root = piece.from_base(lam) + r;
            out.push_back(std::move(piece));
        }
    };
    if (k == 0) {
        // unit cluster reappeared; recurse on the residue structure
        remap(factor_pieces(g2, B, depth + 1));
        return out;
    }
    if (k < m) {
        // split off roots of positive valuation from the unit part
        FFPoly zk({B->res->zero(), B->res->one()});
        FFPoly A({B->res->one()});
        for (int i = 0; i < k; ++i) A = A * zk;
        FFPoly W = g2bar / A;
        auto [GA, GB] = hensel_split(g2, A, W);
        remap(factor_pieces(GA, B, depth + 1));
        remap(factor_pieces(GB, B, depth + 1));
        return out;
    }
    // reduction is exactly z^m: totally ramified candidate
    {
        Rational v0 = Rational(g2[0].valuation(false).value());
        bool single_slope = true;
        for (int i = 1; i < m; ++i) {
            auto vi = g2[static_cast<size_t>(i)].valuation(true);
            if (!vi.is_finite()) continue;
            // point must lie on or above the line through (0, v0), (m, 0)
            if (Rational(vi.value()) < v0 * Rational(m - i, m)) single_slope = false;
        }
        long a = g2[0].valuation(false).value();
        if (!single_slope || std::gcd(a, static_cast<long>(m)) != 1)
            throw UnsupportedCaseError(
                "ramified factor beyond supported Newton polygon shapes (degree > 3 wild case)");
        auto [L, root] = eisenstein_from_single_slope(g2, B);
        FieldHom hom{B, L, [&] {
                         std::vector<Integer> c(static_cast<size_t>(L->e) * L->f, Integer(0));
                         if (L->f > 1) c[1] = 1;
                         return L->element(std::move(c));
                     }(),
                     L->from_integer(Integer(B->p))};
        std::vector<LocalFactorPiece> one;
        one.push_back({L, hom, root});
        remap(std::move(one));
        return out;
    }
}

}  // namespace detail

// Irreducible factors of a squarefree monic rational polynomial over Q_p:
// one entry per factor, carrying the completion as a standardized LocalField
// and an approximate root (the embedding datum). Degrees e*f sum to deg.
inline std::vector<LocalFactorPiece> factor_over_local(const QPoly& poly, int64_t p, int N) {
    if (poly.degree() < 1 || poly.degree() > 6)
        throw InputError("factor_over_local expects degree in [1, 6]");
    if (!(poly.lc() == Rational(1))) throw InputError("factor_over_local expects monic input");
    if (discriminant(poly) == 0) throw InputError("factor_over_local expects squarefree input");
    auto Qp = LocalField::qp(p, N);
    // clear denominators: x = y / p^s
    long s = 0;
    for (int i = 0; i < poly.degree(); ++i) {
        auto v = valuation(poly[static_cast<size_t>(i)], Integer(p));
        if (!v.is_finite()) continue;
        long need = -v.value();
        if (need > 0) {
            long k = (need + (poly.degree() - i) - 1) / (poly.degree() - i);
            s = std::max(s, k);
        }
    }
    QPoly scaled = poly;
    if (s > 0) {
        std::vector<Rational> c = poly.coeffs();
        for (int i = 0; i <= poly.degree(); ++i)
            c[static_cast<size_t>(i)] =
                c[static_cast<size_t>(i)] * pow_rat(Rational(p), s * (poly.degree() - i));
        scaled = QPoly(std::move(c));
    }
    auto pieces = detail::factor_pieces(attach_poly(scaled, Qp), Qp, 0);
    if (s > 0)
        for (auto& piece : pieces) piece.root = piece.root.times_p_power(-s);
    int total = 0;
    for (auto& piece : pieces) total += piece.field->degree();
    if (total != poly.degree()) throw PrecisionError("factor degrees do not sum to the input degree");
    return pieces;
}

// ---------- Hilbert symbols ----------

// quadratic residue character of the residue field at odd p
inline int residue_chi(const LocalFieldPtr& K, const FFElement& u) {
    if (u.is_zero()) throw InputError("residue_chi of zero");
    return K->res->is_square(u) ? 1 : -1;
}

inline int hilbert_symbol_local(const LocalElement& a0, const LocalElement& b0) {
    const LocalFieldPtr& K = a0.field() ? a0.field() : b0.field();
    LocalElement a = a0, b = b0;
    if (!a.certified_nonzero() || !b.certified_nonzero())
        throw PrecisionError("hilbert symbol of (near-)zero argument");
    if (K->p != 2) {
        long va = a.valuation(false).value(), vb = b.valuation(false).value();
        FFElement ua = a.shift_down(va).residue();
        FFElement ub = b.shift_down(vb).residue();
        int chi_m1 = residue_chi(K, -K->res->one());
        int res = 1;
        if ((va % 2) && (vb % 2) && chi_m1 == -1) res = -res;
        if (vb % 2 && residue_chi(K, ua) == -1) res = -res;
        if (va % 2 && residue_chi(K, ub) == -1) res = -res;
        return res;
    }
    // p = 2
    long e = K->e;
    auto norm_val = [&](LocalElement x) {
        long v = x.valuation(false).value();
        long down = 2 * (v >= 0 ? v / 2 : (v - 1) / 2);
        return x.shift_down(down);
    };
    a = norm_val(a);
    b = norm_val(b);
    if (lf_is_square(a) || lf_is_square(b)) return 1;
    if (lf_is_square(-(a * b))) return 1;
    if (a.valuation(false).value() == 1 && b.valuation(false).value() == 1) {
        b = norm_val(-(a * b));  // (a,b) = (a,-ab)
    }
    // witness search: exists w with a + b w^2 or b + a w^2 a square
    long levels = 2 * e + 1;
    int f = K->f;
    int64_t p = K->p;
    std::vector<int64_t> digits(static_cast<size_t>(levels) * f, 0);
    auto build = [&]() {
        LocalElement w = K->zero();
        LocalElement piK = K->uniformizer();
        LocalElement pw = K->one();
        for (long i = 0; i < levels; ++i) {
            std::vector<int64_t> d(digits.begin() + i * f, digits.begin() + (i + 1) * f);
            w = w + K->lift(K->res->element(std::move(d))) * pw;
            pw = pw * piK;
        }
        return w;
    };
    for (;;) {
        LocalElement w = build();
        LocalElement w2 = w * w;
        for (int form = 0; form < 2; ++form) {
            LocalElement t = form == 0 ? a + b * w2 : b + a * w2;
            if (t.certified_nonzero() && lf_is_square(t)) return 1;
        }
        // odometer
        size_t i = 0;
        while (i < digits.size() && ++digits[i] == p) digits[i++] = 0;
        if (i == digits.size()) break;
    }
    return -1;
}

// (-1,-1)_K via the quaternion table; +1 for odd residue characteristic,
// (-1)^[K:Q_2] for 2-adic fields.
inline int minus_one_minus_one_local(const LocalFieldPtr& K) {
    if (K->p != 2) return 1;
    return (K->degree() % 2) ? -1 : 1;
}

}  // namespace ellparity
