#pragma once

// Sparse exact polynomials over the fixed variable set {D, lam, mu}, where D
// stands for the formal symbol usually written with a partial-derivative
// glyph, and lam/mu are the two spectral variables.  Terms live in a
// std::map keyed by exponent triples, so iteration order (and therefore
// printing and serialization) is canonical: lexicographic in (d, l, m).
//
// BasicPoly is generic over its coefficient type C.  C = Rat gives the
// ordinary polynomial ring; C = LinExpr (see linear.hpp) gives polynomials
// whose coefficients are linear forms in solver unknowns.  Only the mixed
// product (generic C times a Rat polynomial) exists, which keeps everything
// a module over the scalar ring and makes it impossible to accidentally
// build terms quadratic in unknowns.

#include "rational.hpp"

#include <algorithm>
#include <compare>
#include <map>
#include <string>
#include <vector>

namespace loopw {

enum class Var : int { D = 0, Lam = 1, Mu = 2 };

struct Monomial {
    int d = 0; // exponent of D
    int l = 0; // exponent of lam
    int m = 0; // exponent of mu

    auto operator<=>(const Monomial&) const = default;

    int exp(Var v) const {
        switch (v) {
            case Var::D: return d;
            case Var::Lam: return l;
            default: return m;
        }
    }
    Monomial plus(const Monomial& o) const { return {d + o.d, l + o.l, m + o.m}; }
};

/// Operations each coefficient type must provide.
template <class C>
struct CoeffOps;

template <>
struct CoeffOps<Rat> {
    static bool is_zero(const Rat& c) { return c == 0; }
    static Rat neg(const Rat& c) { return -c; }
    static void add_into(Rat& a, const Rat& b) { a += b; }
    static Rat scaled(const Rat& c, const Rat& s) { return c * s; }
};

template <class C>
class BasicPoly {
public:
    using Ops = CoeffOps<C>;
    using Terms = std::map<Monomial, C>;

    BasicPoly() = default;

    static BasicPoly term(const Monomial& mo, C c) {
        BasicPoly p;
        if (!Ops::is_zero(c)) p.terms_.emplace(mo, std::move(c));
        return p;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    C coeff(const Monomial& mo) const {
        auto it = terms_.find(mo);
        return it == terms_.end() ? C{} : it->second;
    }

    void add_term(const Monomial& mo, const C& c) {
        if (Ops::is_zero(c)) return;
        auto [it, fresh] = terms_.try_emplace(mo, c);
        if (!fresh) {
            Ops::add_into(it->second, c);
            if (Ops::is_zero(it->second)) terms_.erase(it);
        }
    }

    BasicPoly& operator+=(const BasicPoly& o) {
        for (const auto& [mo, c] : o.terms_) add_term(mo, c);
        return *this;
    }
    BasicPoly& operator-=(const BasicPoly& o) {
        for (const auto& [mo, c] : o.terms_) add_term(mo, Ops::neg(c));
        return *this;
    }
    friend BasicPoly operator+(BasicPoly a, const BasicPoly& b) { return a += b; }
    friend BasicPoly operator-(BasicPoly a, const BasicPoly& b) { return a -= b; }
    BasicPoly operator-() const {
        BasicPoly out;
        for (const auto& [mo, c] : terms_) out.terms_.emplace(mo, Ops::neg(c));
        return out;
    }

    /// Scale by an exact rational.
    friend BasicPoly operator*(const BasicPoly& a, const Rat& s) {
        BasicPoly out;
        if (s == 0) return out;
        for (const auto& [mo, c] : a.terms_) out.add_term(mo, Ops::scaled(c, s));
        return out;
    }
    friend BasicPoly operator*(const Rat& s, const BasicPoly& a) { return a * s; }

    /// Mixed product: coefficients stay in C, the right factor is scalar-valued.
    friend BasicPoly operator*(const BasicPoly& a, const BasicPoly<Rat>& b) {
        BasicPoly out;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms())
                out.add_term(ma.plus(mb), Ops::scaled(ca, cb));
        return out;
    }

    bool operator==(const BasicPoly& o) const { return terms_ == o.terms_; }

    int degree(Var v) const {
        int deg = -1; // -1 for the zero polynomial
        for (const auto& [mo, c] : terms_) deg = std::max(deg, mo.exp(v));
        return deg;
    }
    bool depends_on(Var v) const {
        for (const auto& [mo, c] : terms_)
            if (mo.exp(v) > 0) return true;
        return false;
    }
    /// Exponents of v that occur with a nonzero coefficient.
    std::vector<int> support(Var v) const {
        std::vector<int> out;
        for (const auto& [mo, c] : terms_) {
            int e = mo.exp(v);
            bool seen = false;
            for (int x : out) seen = seen || (x == e);
            if (!seen) out.push_back(e);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Simultaneous substitution: each mapped variable is replaced by its
    /// scalar-polynomial image in one pass, so an image may mention the
    /// variable it replaces (lam -> -D-lam is the important involution).
    BasicPoly substituted(const std::map<Var, BasicPoly<Rat>>& images) const {
        // Precompute image powers up to the needed exponent.
        std::map<Var, std::vector<BasicPoly<Rat>>> powers;
        for (const auto& [v, img] : images) {
            int need = 0;
            for (const auto& [mo, c] : terms_) need = std::max(need, mo.exp(v));
            auto& tower = powers[v];
            tower.reserve(need + 1);
            tower.push_back(poly_rat_one());
            for (int k = 1; k <= need; ++k) tower.push_back(tower.back() * img);
        }
        BasicPoly out;
        for (const auto& [mo, c] : terms_) {
            // Residual monomial in the untouched variables.
            Monomial rest = mo;
            for (const auto& [v, img] : images) {
                switch (v) {
                    case Var::D: rest.d = 0; break;
                    case Var::Lam: rest.l = 0; break;
                    case Var::Mu: rest.m = 0; break;
                }
            }
            BasicPoly<Rat> factor = BasicPoly<Rat>::term(rest, Rat(1));
            for (const auto& [v, img] : images) {
                int e = mo.exp(v);
                if (e > 0) factor = factor * powers[v][e];
            }
            for (const auto& [mf, cf] : factor.terms()) out.add_term(mf, Ops::scaled(c, cf));
        }
        return out;
    }

private:
    static BasicPoly<Rat> poly_rat_one() { return BasicPoly<Rat>::term({0, 0, 0}, Rat(1)); }

    Terms terms_;
};

using Poly = BasicPoly<Rat>;

inline Poly poly_zero() { return Poly{}; }
inline Poly poly_const(const Rat& r) { return Poly::term({0, 0, 0}, r); }
inline Poly poly_one() { return poly_const(Rat(1)); }
inline Poly poly_D() { return Poly::term({1, 0, 0}, Rat(1)); }
inline Poly poly_lam() { return Poly::term({0, 1, 0}, Rat(1)); }
inline Poly poly_mu() { return Poly::term({0, 0, 1}, Rat(1)); }
inline Poly poly_var(Var v) {
    switch (v) {
        case Var::D: return poly_D();
        case Var::Lam: return poly_lam();
        default: return poly_mu();
    }
}

inline Poly poly_pow(const Poly& p, int e) {
    Poly acc = poly_one();
    for (int k = 0; k < e; ++k) acc = acc * p;
    return acc;
}

/// Evaluate a polynomial that may use every variable at scalar points.
inline Rat poly_eval(const Poly& p, const Rat& d, const Rat& l, const Rat& m) {
    Rat acc(0);
    for (const auto& [mo, c] : p.terms())
        acc += c * rat_pow(d, mo.d) * rat_pow(l, mo.l) * rat_pow(m, mo.m);
    return acc;
}

inline std::string var_name(Var v) {
    switch (v) {
        case Var::D: return "D";
        case Var::Lam: return "lam";
        default: return "mu";
    }
}

/// Canonical rendering, deterministic because terms are map-ordered.
inline std::string poly_str(const Poly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [mo, c] : p.terms()) {
        Rat a = c;
        if (first) {
            if (a < 0) { out += "-"; a = -a; }
        } else {
            out += (a < 0) ? " - " : " + ";
            if (a < 0) a = -a;
        }
        first = false;
        std::string factors;
        auto emit = [&](Var v, int e) {
            if (e == 0) return;
            if (!factors.empty()) factors += "*";
            factors += var_name(v);
            if (e > 1) factors += "^" + std::to_string(e);
        };
        emit(Var::D, mo.d);
        emit(Var::Lam, mo.l);
        emit(Var::Mu, mo.m);
        if (factors.empty()) out += rat_str(a);
        else if (a == 1) out += factors;
        else out += rat_str(a) + "*" + factors;
    }
    return out;
}

// Shorthands for the substitutions the bracket calculus uses constantly.

/// p with D replaced by D + theta.
template <class C>
BasicPoly<C> shift_D(const BasicPoly<C>& p, const Poly& theta) {
    return p.substituted({{Var::D, poly_D() + theta}});
}
/// p with D replaced by an arbitrary image.
template <class C>
BasicPoly<C> subst_D(const BasicPoly<C>& p, const Poly& image) {
    return p.substituted({{Var::D, image}});
}
/// p with lam replaced by an arbitrary image.
template <class C>
BasicPoly<C> subst_lam(const BasicPoly<C>& p, const Poly& image) {
    return p.substituted({{Var::Lam, image}});
}
/// The skew substitution lam -> -D-lam (an involution).
template <class C>
BasicPoly<C> subst_skew(const BasicPoly<C>& p) {
    return p.substituted({{Var::Lam, -poly_D() - poly_lam()}});
}

} // namespace loopw
