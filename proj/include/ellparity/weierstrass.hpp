#pragma once

#include "ellparity/polynomial.hpp"
#include "ellparity/rational.hpp"

#include <array>
#include <optional>
#include <string>

namespace ellparity {

// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over a coefficient domain D
// (Rational, LocalElement, finite fields in tests). All derived invariants
// follow the standard formulas; c4^3 - c6^2 = 1728 Delta holds identically.
template <typename D>
struct WeierstrassModel {
    D a1, a2, a3, a4, a6;

    WeierstrassModel(D A1, D A2, D A3, D A4, D A6)
        : a1(std::move(A1)), a2(std::move(A2)), a3(std::move(A3)), a4(std::move(A4)), a6(std::move(A6)) {}

    D b2() const { return a1 * a1 + D(4) * a2; }
    D b4() const { return D(2) * a4 + a1 * a3; }
    D b6() const { return a3 * a3 + D(4) * a6; }
    D b8() const { return a1 * a1 * a6 + D(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4; }
    D c4() const { return b2() * b2() - D(24) * b4(); }
    D c6() const { return -(b2() * b2() * b2()) + D(36) * b2() * b4() - D(216) * b6(); }
    D disc() const {
        D B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
        return -(B2 * B2 * B8) - D(8) * B4 * B4 * B4 - D(27) * B6 * B6 + D(9) * B2 * B4 * B6;
    }
    D j() const {
        D d = disc();
        if (d == D(0)) throw SingularModelError("j-invariant of singular model");
        D C4 = c4();
        return C4 * C4 * C4 / d;
    }

    // x -> u^2 x' + r, y -> u^3 y' + u^2 s x' + t
    WeierstrassModel transform(const D& u, const D& r, const D& s, const D& t) const {
        D u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;
        D A1 = (a1 + D(2) * s) / u;
        D A2 = (a2 - s * a1 + D(3) * r - s * s) / u2;
        D A3 = (a3 + r * a1 + D(2) * t) / u3;
        D A4 = (a4 - s * a3 + D(2) * r * a2 - (t + r * s) * a1 + D(3) * r * r - D(2) * s * t) / u4;
        D A6 = (a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1) / u6;
        return WeierstrassModel(A1, A2, A3, A4, A6);
    }

    // eliminate a1, a3 (characteristic 0): y^2 = x^3 + (b2/4)x^2 + (b4/2)x + b6/4
    WeierstrassModel simplified() const {
        D half = D(1) / D(2);
        return transform(D(1), D(0), -a1 * half, -a3 * half);
    }

    // the 2-division cubic f with y^2 = f(x) on the simplified model
    Poly<D> two_division_cubic() const {
        D q = D(1) / D(4);
        return Poly<D>({b6() * q, b4() * (D(1) / D(2)), b2() * q, D(1)});
    }

    bool operator==(const WeierstrassModel& o) const {
        return a1 == o.a1 && a2 == o.a2 && a3 == o.a3 && a4 == o.a4 && a6 == o.a6;
    }
};

// transform parameters with composition semantics matching
// WeierstrassModel::transform
template <typename D>
struct ModelTransform {
    D u{1}, r{0}, s{0}, t{0};
    static ModelTransform identity() { return ModelTransform{D(1), D(0), D(0), D(0)}; }
    // apply `then` after *this (coordinates change by *this, then by `then`)
    ModelTransform then(const ModelTransform& o) const {
        D u2 = u * u, u3 = u2 * u;
        return ModelTransform{u * o.u, r + u2 * o.r, s + u * o.s, t + u2 * s * o.r + u3 * o.t};
    }
};

// quadratic twist by r of a simplified model y^2 = x^3 + a x^2 + b x + c:
// E_r : y^2 = x^3 + r a x^2 + r^2 b x + r^3 c
template <typename D>
WeierstrassModel<D> quadratic_twist(const WeierstrassModel<D>& E, const D& r) {
    if (r == D(0)) throw InputError("quadratic twist by zero");
    WeierstrassModel<D> S = E.simplified();
    return WeierstrassModel<D>(D(0), r * S.a2, D(0), r * r * S.a4, r * r * r * S.a6);
}

// f(x + r) = x^3 + a_r x^2 + b_r x for a root r of the monic cubic f
template <typename D>
std::pair<D, D> kernel_translate(const Poly<D>& f, const D& r) {
    if (f.degree() != 3 || !(f.lc() == D(1))) throw InputError("kernel_translate expects a monic cubic");
    if (!(f.eval(r) == D(0))) throw InputError("kernel_translate: r is not a root");
    Poly<D> g = f.translate(r);
    return {g[2], g[1]};
}

// 2-isogeny with kernel {O, (0,0)} on y^2 = x^3 + a x^2 + b x;
// codomain y^2 = x^3 - 2a x^2 + (a^2 - 4b) x; phi(x,y) = (x + a + b/x, y - by/x^2);
// the codomain differential dx'/y' pulls back to dx/y.
template <typename D>
struct TwoIsogeny {
    D a, b;
    TwoIsogeny(D A, D B) : a(std::move(A)), b(std::move(B)) {
        if (b == D(0) || a * a - D(4) * b == D(0))
            throw SingularModelError("two_isogeny: singular family member");
    }
    WeierstrassModel<D> domain() const {
        return WeierstrassModel<D>(D(0), a, D(0), b, D(0));
    }
    WeierstrassModel<D> codomain() const {
        return WeierstrassModel<D>(D(0), D(-2) * a, D(0), a * a - D(4) * b, D(0));
    }
    TwoIsogeny dual() const { return TwoIsogeny(D(-2) * a, a * a - D(4) * b); }
};

// codomain of the 3-isogeny from y^2 = x^3 + a(x - b)^2 with kernel x = 0:
// y^2 = x^3 + a x^2 + 18ab x + ab(16a - 27b)
template <typename D>
WeierstrassModel<D> three_isogeny_codomain(const D& a, const D& b) {
    if (a == D(0) || b == D(0) || D(4) * a + D(27) * b == D(0))
        throw SingularModelError("three_isogeny: singular family member");
    return WeierstrassModel<D>(D(0), a, D(0), D(18) * a * b, a * b * (D(16) * a - D(27) * b));
}

template <typename D>
WeierstrassModel<D> three_isogeny_domain(const D& a, const D& b) {
    if (a == D(0) || b == D(0) || D(4) * a + D(27) * b == D(0))
        throw SingularModelError("three_isogeny: singular family member");
    // x^3 + a(x-b)^2 = x^3 + a x^2 - 2ab x + a b^2
    return WeierstrassModel<D>(D(0), a, D(0), D(-2) * a * b, a * b * b);
}

// ---------- rational two-torsion classification ----------

enum class GaloisType { Trivial, C2, C3, S3 };

struct TwoTorsionData {
    QPoly cubic;                    // monic two-division cubic over Q
    std::vector<Rational> rational_roots;
    std::optional<QPoly> quadratic_factor;  // when exactly one rational root
    Rational disc;                  // disc(cubic); same square class as Delta_E
    int d;                          // [Q(E[2]) : Q] in {1, 2, 3, 6}
    GaloisType galois;
};

inline TwoTorsionData classify_two_torsion(const WeierstrassModel<Rational>& E) {
    TwoTorsionData T;
    T.cubic = E.two_division_cubic();
    T.disc = discriminant(T.cubic);
    if (T.disc == 0) throw SingularModelError("two-torsion cubic is not squarefree");
    T.rational_roots = rational_roots(T.cubic);
    if (T.rational_roots.size() == 3) {
        T.d = 1;
        T.galois = GaloisType::Trivial;
    } else if (T.rational_roots.size() == 1) {
        T.d = 2;
        T.galois = GaloisType::C2;
        QPoly lin({-T.rational_roots[0], Rational(1)});
        T.quadratic_factor = T.cubic / lin;
    } else {
        bool square_disc = is_square(T.disc);
        T.d = square_disc ? 3 : 6;
        T.galois = square_disc ? GaloisType::C3 : GaloisType::S3;
    }
    return T;
}

// ---------- exact real-place analysis ----------

// number of connected components of E(R): 2 iff Delta > 0
inline int real_components(const WeierstrassModel<Rational>& E) {
    Rational d = E.disc();
    if (d == 0) throw SingularModelError("real_components of singular model");
    return d > 0 ? 2 : 1;
}

// Is phi_{a,b} : E_{a,b}(R) -> E'_{a,b}(R) surjective? Decided exactly by the
// image of the descent map E'(R) -> R*/R*^2, (x,y) -> x, (0,0) -> a^2 - 4b:
// the cokernel is nontrivial iff a negative class is hit.
inline bool two_isogeny_real_surjective(const Rational& a, const Rational& b) {
    if (b == 0 || a * a - 4 * b == 0) throw SingularModelError("singular two-isogeny family member");
    if (b < 0) return true;  // E' connected
    // E' roots: 0, a - 2 sqrt(b), a + 2 sqrt(b); negative x on E'(R) exists
    // iff a < 0 (then the bounded oval sits left of 0), and (0,0)' has class
    // a^2 - 4b.
    if (a * a - 4 * b < 0) return false;
    return a > 0;
}

// sign of sigma_phi at a real place for the 2-isogeny family
inline int two_isogeny_sigma_real(const Rational& a, const Rational& b) {
    // #ker phi_R = 2; sigma = -1 iff surjective
    return two_isogeny_real_surjective(a, b) ? -1 : 1;
}

// sigma_phi at a real place for the 3-isogeny family y^2 = x^3 + a(x-b)^2:
// kernel points (0, +-b sqrt(a)) are real iff a > 0; phi is onto on R-points.
inline int three_isogeny_sigma_real(const Rational& a, const Rational& b) {
    if (a == 0 || b == 0 || 4 * a + 27 * b == 0)
        throw SingularModelError("singular three-isogeny family member");
    return a > 0 ? -1 : 1;
}

// sigma_phi over C: kernel is full, map is onto; ord_p(1/p) = -1
inline int isogeny_sigma_complex() { return -1; }

}  // namespace ellparity
