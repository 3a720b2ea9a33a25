#pragma once

// The conformal-algebra core: generators, formal sums over them, the
// built-in loop algebra CLW(b), finite bracket tables, and the exact axiom
// checkers (skew symmetry, the Jacobi identity, grading).
//
// Bracket convention for CLW(b), the loop algebra with two families of
// generators L_i, I_i indexed by integers:
//
//     [L_i lam L_j] = (D + 2 lam) L_{i+j}
//     [L_i lam I_j] = (D + (1-b) lam) I_{i+j}
//     [I_i lam I_j] = 0
//
// and the (I, L) side is never stored: it is evaluated through the skew
// rule [x lam y] = -{ [y lam x] with lam -> -D-lam }, where the substituted
// D multiplies the coefficient polynomials.  The same rule serves finite
// tables, so a table only needs one orientation of each pair.

#include "linear.hpp"

#include <compare>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace loopw {

enum class Family : int { L = 0, I = 1 };

inline std::string family_name(Family f) { return f == Family::L ? "L" : "I"; }

struct GeneratorId {
    Family family = Family::L;
    long index = 0;
    auto operator<=>(const GeneratorId&) const = default;
};

inline GeneratorId gen_L(long i) { return {Family::L, i}; }
inline GeneratorId gen_I(long i) { return {Family::I, i}; }
inline std::string gen_str(const GeneratorId& g) {
    return family_name(g.family) + std::to_string(g.index);
}

struct IndexWindow {
    long lo = 0, hi = -1;
    static IndexWindow symmetric(long w) { return {-w, w}; }
    bool contains(long i) const { return lo <= i && i <= hi; }
    long size() const { return hi < lo ? 0 : hi - lo + 1; }
};

/// Formal finite sum of generators with polynomial coefficients.  The same
/// container serves plain elements (coefficients in D), lambda-bracket
/// values (D and lam), Jacobi intermediates (D, lam, mu), and solver-side
/// values with linear-form coefficients.
template <class C>
struct GenComboT {
    std::map<GeneratorId, BasicPoly<C>> parts;

    bool is_zero() const { return parts.empty(); }

    void add_part(const GeneratorId& g, const BasicPoly<C>& p) {
        if (p.is_zero()) return;
        auto [it, fresh] = parts.try_emplace(g, p);
        if (!fresh) {
            it->second += p;
            if (it->second.is_zero()) parts.erase(it);
        }
    }
    GenComboT& operator+=(const GenComboT& o) {
        for (const auto& [g, p] : o.parts) add_part(g, p);
        return *this;
    }
    GenComboT& operator-=(const GenComboT& o) {
        for (const auto& [g, p] : o.parts) add_part(g, -p);
        return *this;
    }
    friend GenComboT operator+(GenComboT a, const GenComboT& b) { return a += b; }
    friend GenComboT operator-(GenComboT a, const GenComboT& b) { return a -= b; }
    GenComboT operator-() const {
        GenComboT out;
        for (const auto& [g, p] : parts) out.parts.emplace(g, -p);
        return out;
    }
    /// Multiply every coefficient by a scalar polynomial.
    friend GenComboT operator*(const BasicPoly<Rat>& s, const GenComboT& e) {
        GenComboT out;
        for (const auto& [g, p] : e.parts) out.add_part(g, p * s);
        return out;
    }
    /// Apply a polynomial map to every coefficient.
    template <class F>
    GenComboT mapped(F&& f) const {
        GenComboT out;
        for (const auto& [g, p] : parts) out.add_part(g, f(p));
        return out;
    }
    bool operator==(const GenComboT& o) const { return parts == o.parts; }
};

using Element = GenComboT<Rat>;       // coefficients are polynomials in D
using LambdaElement = GenComboT<Rat>; // coefficients may also use lam (and mu)

inline Element element(const GeneratorId& g, const Poly& p = poly_one()) {
    Element e;
    e.add_part(g, p);
    return e;
}

inline std::string combo_str(const LambdaElement& e) {
    if (e.is_zero()) return "0";
    std::string out;
    for (const auto& [g, p] : e.parts) {
        if (!out.empty()) out += " + ";
        out += "(" + poly_str(p) + ")*" + gen_str(g);
    }
    return out;
}

/// Raised when a finite bracket table is asked for a pair it cannot
/// resolve.  Brackets landing outside a table's window are an error, never
/// a silent zero.
struct WindowExceeded : std::runtime_error {
    WindowExceeded(const GeneratorId& x, const GeneratorId& y)
        : std::runtime_error("bracket table window exceeded for pair (" + gen_str(x) +
                             ", " + gen_str(y) + ")") {}
};

/// The skew evaluation of a bracket value: lam -> -D-lam on every
/// coefficient (the substituted D multiplies the polynomial), then negate.
template <class C>
GenComboT<C> skew_of(const GenComboT<C>& value) {
    return (-value).mapped([](const BasicPoly<C>& p) { return subst_skew(p); });
}

class Algebra {
public:
    static Algebra clw(Rat b) {
        Algebra a;
        a.b_ = std::move(b);
        a.is_table_ = false;
        return a;
    }

    static Algebra table(IndexWindow window,
                         std::map<GeneratorId, long> grading,
                         std::map<std::pair<GeneratorId, GeneratorId>, LambdaElement> entries) {
        Algebra a;
        a.is_table_ = true;
        a.window_ = window;
        a.grading_ = std::move(grading);
        a.entries_ = std::move(entries);
        return a;
    }

    /// CLW(b) materialized as a finite table (handy for tests and samples).
    static Algebra clw_table(const Rat& b, IndexWindow window) {
        Algebra src = clw(b);
        std::map<GeneratorId, long> grading;
        std::map<std::pair<GeneratorId, GeneratorId>, LambdaElement> entries;
        for (long i = window.lo; i <= window.hi; ++i) {
            grading[gen_L(i)] = i;
            grading[gen_I(i)] = i;
        }
        for (long i = window.lo; i <= window.hi; ++i)
            for (long j = window.lo; j <= window.hi; ++j) {
                if (!window.contains(i + j)) continue;
                entries[{gen_L(i), gen_L(j)}] = src.bracket_gen(gen_L(i), gen_L(j));
                entries[{gen_L(i), gen_I(j)}] = src.bracket_gen(gen_L(i), gen_I(j));
            }
        return table(window, std::move(grading), std::move(entries));
    }

    bool is_table() const { return is_table_; }
    const Rat& b() const { return b_; }
    IndexWindow window() const { return window_; }

    long grading(const GeneratorId& g) const {
        if (!is_table_) return g.index;
        auto it = grading_.find(g);
        if (it == grading_.end()) throw std::out_of_range("unknown generator " + gen_str(g));
        return it->second;
    }

    /// Generators with indices inside the probe window.
    std::vector<GeneratorId> generators(IndexWindow probe) const {
        std::vector<GeneratorId> out;
        if (is_table_) {
            for (const auto& [g, deg] : grading_)
                if (probe.contains(g.index)) out.push_back(g);
        } else {
            for (long i = probe.lo; i <= probe.hi; ++i) out.push_back(gen_L(i));
            for (long i = probe.lo; i <= probe.hi; ++i) out.push_back(gen_I(i));
        }
        return out;
    }

    /// Can [x lam y] be evaluated?  (Always true for CLW.)
    bool resolvable(const GeneratorId& x, const GeneratorId& y) const {
        if (!is_table_) return true;
        if (!grading_.count(x) || !grading_.count(y)) return false;
        return window_.contains(grading(x) + grading(y));
    }

    /// Generator-level bracket, a lambda-element with coefficients in
    /// (D, lam).
    LambdaElement bracket_gen(const GeneratorId& x, const GeneratorId& y) const {
        if (!is_table_) {
            if (x.family == Family::L && y.family == Family::L)
                return element(gen_L(x.index + y.index), poly_D() + Rat(2) * poly_lam());
            if (x.family == Family::L && y.family == Family::I)
                return element(gen_I(x.index + y.index),
                               poly_D() + (Rat(1) - b_) * poly_lam());
            if (x.family == Family::I && y.family == Family::I) return {};
            return skew_of(bracket_gen(y, x));
        }
        if (!resolvable(x, y)) throw WindowExceeded(x, y);
        auto it = entries_.find({x, y});
        if (it != entries_.end()) return it->second;
        auto tr = entries_.find({y, x});
        if (tr != entries_.end()) return skew_of(tr->second);
        return {}; // declared pair with no entry: zero bracket
    }

private:
    Rat b_{0};
    bool is_table_ = false;
    IndexWindow window_;
    std::map<GeneratorId, long> grading_;
    std::map<std::pair<GeneratorId, GeneratorId>, LambdaElement> entries_;
};

/// Bilinear extension of the generator bracket to elements with polynomial
/// coefficients: [p(D)x lam q(D)y] = p(-lam) q(D+lam) [x lam y].
inline LambdaElement extend_bracket(const Algebra& alg, const Element& x, const Element& y) {
    LambdaElement out;
    for (const auto& [gx, px] : x.parts) {
        Poly left = subst_D(px, -poly_lam());
        for (const auto& [gy, py] : y.parts) {
            Poly right = shift_D(py, poly_lam());
            out += (left * right) * alg.bracket_gen(gx, gy);
        }
    }
    return out;
}

struct Violation {
    std::string axiom;
    std::string input;
    std::string residual;
};

struct AxiomReport {
    bool pass = true;
    std::vector<Violation> violations;

    void flag(std::string axiom, std::string input, std::string residual) {
        pass = false;
        violations.push_back({std::move(axiom), std::move(input), std::move(residual)});
    }
    void merge(const AxiomReport& o) {
        pass = pass && o.pass;
        violations.insert(violations.end(), o.violations.begin(), o.violations.end());
    }
};

/// Skew symmetry on every resolvable ordered pair in the window:
/// [x lam y] + { [y lam x] with lam -> -D-lam } must vanish identically.
inline AxiomReport check_skew(const Algebra& alg, IndexWindow window) {
    AxiomReport rep;
    auto gens = alg.generators(window);
    for (const auto& x : gens)
        for (const auto& y : gens) {
            if (!alg.resolvable(x, y) || !alg.resolvable(y, x)) continue;
            LambdaElement residual = alg.bracket_gen(x, y);
            residual += alg.bracket_gen(y, x).mapped(
                [](const Poly& p) { return subst_skew(p); });
            if (!residual.is_zero())
                rep.flag("skew", "(" + gen_str(x) + ", " + gen_str(y) + ")",
                         combo_str(residual));
        }
    return rep;
}

/// Jacobi identity on every resolvable triple:
/// [x lam [y mu z]] - [[x lam y] lam+mu z] - [y mu [x lam z]] == 0,
/// with the outer-coefficient rule [p(D) g theta c] = p(-theta) [g theta c]
/// applied by substitution.
inline AxiomReport check_jacobi(const Algebra& alg, IndexWindow window) {
    AxiomReport rep;
    auto gens = alg.generators(window);
    auto triple_ok = [&](const GeneratorId& x, const GeneratorId& y, const GeneratorId& z) {
        if (!alg.is_table()) return true;
        long gx = alg.grading(x), gy = alg.grading(y), gz = alg.grading(z);
        IndexWindow w = alg.window();
        return w.contains(gx + gy) && w.contains(gy + gz) && w.contains(gx + gz) &&
               w.contains(gx + gy + gz);
    };
    for (const auto& x : gens)
        for (const auto& y : gens)
            for (const auto& z : gens) {
                if (!triple_ok(x, y, z)) continue;
                LambdaElement t1, t2, t3;
                // T1 = [x lam [y mu z]]
                for (const auto& [g, q] : alg.bracket_gen(y, z).parts) {
                    Poly qmu = subst_lam(q, poly_mu());
                    t1 += shift_D(qmu, poly_lam()) * alg.bracket_gen(x, g);
                }
                // T2 = [[x lam y] lam+mu z]
                for (const auto& [g, p] : alg.bracket_gen(x, y).parts) {
                    Poly factor = subst_D(p, -(poly_lam() + poly_mu()));
                    LambdaElement br = alg.bracket_gen(g, z).mapped(
                        [](const Poly& t) { return subst_lam(t, poly_lam() + poly_mu()); });
                    t2 += factor * br;
                }
                // T3 = [y mu [x lam z]]
                for (const auto& [g, r] : alg.bracket_gen(x, z).parts) {
                    Poly factor = shift_D(r, poly_mu());
                    LambdaElement br = alg.bracket_gen(y, g).mapped(
                        [](const Poly& t) { return subst_lam(t, poly_mu()); });
                    t3 += factor * br;
                }
                LambdaElement residual = t1 - t2 - t3;
                if (!residual.is_zero())
                    rep.flag("jacobi",
                             "(" + gen_str(x) + ", " + gen_str(y) + ", " + gen_str(z) + ")",
                             combo_str(residual));
            }
    return rep;
}

/// Grading: the bracket of degree-i and degree-j generators must be
/// supported on degree i+j generators only.
inline AxiomReport check_graded(const Algebra& alg, IndexWindow window) {
    AxiomReport rep;
    auto gens = alg.generators(window);
    for (const auto& x : gens)
        for (const auto& y : gens) {
            if (!alg.resolvable(x, y)) continue;
            long want = alg.grading(x) + alg.grading(y);
            for (const auto& [g, p] : alg.bracket_gen(x, y).parts)
                if (alg.grading(g) != want)
                    rep.flag("graded", "(" + gen_str(x) + ", " + gen_str(y) + ")",
                             "component " + gen_str(g) + " has degree " +
                                 std::to_string(alg.grading(g)) + ", expected " +
                                 std::to_string(want));
        }
    return rep;
}

/// All three structural checks at once.
inline AxiomReport check_axioms(const Algebra& alg, IndexWindow window) {
    AxiomReport rep = check_skew(alg, window);
    rep.merge(check_jacobi(alg, window));
    rep.merge(check_graded(alg, window));
    return rep;
}

} // namespace loopw
