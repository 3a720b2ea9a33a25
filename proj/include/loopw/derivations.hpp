#pragma once

// Conformal derivations of CLW(b), windowed.
//
// A degree-c derivation candidate is stored by its values on generators,
//
//     D_lam(L_j) = P_j(D, lam) L_{j+c} + Q_j(D, lam) I_{j+c}
//     D_lam(I_j) = R_j(D, lam) L_{j+c} + S_j(D, lam) I_{j+c}
//
// extended to polynomial coefficients by D_lam(q(D) x) = q(D + lam) D_lam(x).
// The derivation property against the bracket,
//
//     D_lam([x mu y]) = [D_lam(x) lam+mu y] + [x mu D_lam(y)],
//
// is an exact polynomial identity per generator pair; the solver turns it
// into linear rows for the coefficient unknowns over an index window and
// reads the classification off the interior projection of the solution
// space, modulo the inner derivations ad(D^k u) whose coordinates fit the
// same ansatz.  The one genuinely new direction (at b = 0 only) maps the
// first family onto the second: L_j -> I_{j+c}, I_j -> 0.

#include "conformal.hpp"

#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace loopw {

template <class C = Rat>
struct ConformalMap {
    long degree = 0;    // index shift
    IndexWindow window; // domain indices
    std::map<GeneratorId, GenComboT<C>> values; // action on each generator, in (D, lam)
};

/// D_lam applied to an element with polynomial coefficients.
template <class C>
GenComboT<C> apply_map(const ConformalMap<C>& m, const Element& x) {
    GenComboT<C> out;
    for (const auto& [g, p] : x.parts) {
        auto it = m.values.find(g);
        if (it == m.values.end())
            throw std::out_of_range("conformal map undefined for " + gen_str(g));
        for (const auto& [h, v] : it->second.parts)
            out.add_part(h, poly_mul(poly_lift<C>(shift_D(p, poly_lam())), v));
    }
    return out;
}

/// Stream the derivation residual for every generator pair the window can
/// express.  Residuals are combinations with coefficients in (D, lam, mu).
template <class C, class Emit>
void derivation_residuals(const Algebra& alg, const ConformalMap<C>& m, Emit&& emit) {
    std::vector<GeneratorId> gens = alg.generators(m.window);
    const Poly lam_mu = poly_lam() + poly_mu();
    auto defined = [&](const GeneratorId& g) { return m.values.count(g) != 0; };

    for (const auto& x : gens)
        for (const auto& y : gens) {
            if (!defined(x) || !defined(y)) continue;
            if (!m.window.contains(x.index + y.index)) continue;

            GenComboT<C> residual;
            // D_lam([x mu y]): bracket coefficients move to mu, then pick up
            // the lam shift of sesquilinearity.
            bool ok = true;
            for (const auto& [g, q] : alg.bracket_gen(x, y).parts) {
                if (!defined(g)) { ok = false; break; }
                Poly qmu = shift_D(subst_lam(q, poly_mu()), poly_lam());
                residual += qmu * m.values.at(g);
            }
            if (!ok) continue;

            // [D_lam(x) lam+mu y]: outer coefficients evaluate D at
            // -(lam+mu); the bracket itself runs at lam+mu.
            for (const auto& [g, p] : m.values.at(x).parts) {
                BasicPoly<C> factor = subst_D(p, -lam_mu);
                for (const auto& [h, br] : alg.bracket_gen(g, y).parts)
                    residual.add_part(
                        h, -poly_mul(factor, poly_lift<C>(subst_lam(br, lam_mu))));
            }

            // [x mu D_lam(y)]: inner coefficients shift D by mu; the bracket
            // runs at mu.
            for (const auto& [g, r] : m.values.at(y).parts) {
                BasicPoly<C> factor = shift_D(r, poly_mu());
                for (const auto& [h, br] : alg.bracket_gen(x, g).parts)
                    residual.add_part(
                        h, -poly_mul(factor, poly_lift<C>(subst_lam(br, poly_mu()))));
            }

            emit(x, y, residual);
        }
}

/// Exact check that a concrete map is a derivation on its window.
inline AxiomReport is_derivation(const Algebra& alg, const ConformalMap<Rat>& m) {
    AxiomReport rep;
    derivation_residuals(alg, m,
                         [&](const GeneratorId& x, const GeneratorId& y,
                             const GenComboT<Rat>& residual) {
                             if (!residual.is_zero())
                                 rep.flag("derivation",
                                          "(" + gen_str(x) + ", " + gen_str(y) + ")",
                                          combo_str(residual));
                         });
    return rep;
}

/// The inner derivation ad(u): x -> [u lam x], for a homogeneous element u.
inline ConformalMap<Rat> inner_derivation(const Algebra& alg, const Element& u,
                                          IndexWindow window) {
    ConformalMap<Rat> m;
    m.window = window;
    bool first = true;
    for (const auto& [g, p] : u.parts) {
        if (first) m.degree = g.index;
        else if (m.degree != g.index)
            throw std::invalid_argument("inner derivation needs a homogeneous element");
        first = false;
    }
    if (first) throw std::invalid_argument("inner derivation of zero");
    for (long i = window.lo; i <= window.hi; ++i) {
        m.values[gen_L(i)] = extend_bracket(alg, u, element(gen_L(i)));
        m.values[gen_I(i)] = extend_bracket(alg, u, element(gen_I(i)));
    }
    return m;
}

/// The family-shift map L_j -> I_{j+c}, I_j -> 0 (a derivation iff b = 0).
inline ConformalMap<Rat> family_shift_derivation(long degree, IndexWindow window) {
    ConformalMap<Rat> m;
    m.degree = degree;
    m.window = window;
    for (long i = window.lo; i <= window.hi; ++i) {
        m.values[gen_L(i)] = element(gen_I(i + degree));
        m.values[gen_I(i)] = {};
    }
    return m;
}

// ---------------------------------------------------------------------------
// Windowed classification.

struct DerivSolveOptions {
    long degree = 0;       // index shift of the maps
    long window = 4;       // symmetric domain radius
    long interior = 2;     // radius of the coordinates the answer is read from
    int pdeg = 3;          // max D-degree of the coefficient ansatz
    int ldeg = 3;          // max lam-degree of the coefficient ansatz
};

struct DerivResult {
    DerivSolveOptions opts;
    SolutionSpace space;   // interior projection of the ansatz solutions
    long inner_rank = 0;   // rank of representable inner maps on those coordinates
    long quotient = 0;     // dim(solutions) - dim(inner span); the outer dimension
    bool family_shift_solves = false; // the family-shift map is a derivation here
    bool family_shift_inner = true;   // ... and lies in the inner span
};

inline std::string deriv_label(char block, long j, int dd, int ll) {
    return std::string(1, block) + "[" + std::to_string(j) + "]_D" + std::to_string(dd) +
           "_lam" + std::to_string(ll);
}

namespace detail {

/// Interior coordinates of a concrete map, in the order of `labels`;
/// nullopt when the map does not fit the ansatz bounds on the interior.
inline std::optional<std::vector<Rat>> map_coords(const ConformalMap<Rat>& m,
                                                  const std::vector<std::string>& labels,
                                                  long interior, int pdeg, int ldeg) {
    std::map<std::string, Rat> flat;
    for (long j = -interior; j <= interior; ++j) {
        auto fill = [&](const GeneratorId& src, Family dstfam, char block) {
            auto it = m.values.find(src);
            if (it == m.values.end()) return true;
            for (const auto& [h, p] : it->second.parts) {
                if (h.family != dstfam) continue;
                if (h.index != src.index + m.degree) return false; // off-degree
                for (const auto& [mo, cc] : p.terms()) {
                    if (mo.m != 0) return false;
                    if (mo.d > pdeg || mo.l > ldeg) return false; // outside ansatz
                    flat[deriv_label(block, src.index, mo.d, mo.l)] = cc;
                }
            }
            return true;
        };
        if (!fill(gen_L(j), Family::L, 'P')) return std::nullopt;
        if (!fill(gen_L(j), Family::I, 'Q')) return std::nullopt;
        if (!fill(gen_I(j), Family::L, 'R')) return std::nullopt;
        if (!fill(gen_I(j), Family::I, 'S')) return std::nullopt;
    }
    std::vector<Rat> out;
    out.reserve(labels.size());
    for (const auto& lab : labels) {
        auto it = flat.find(lab);
        out.push_back(it == flat.end() ? Rat(0) : it->second);
    }
    return out;
}

} // namespace detail

/// Solve the derivation identities for one degree over a window and reduce
/// the interior projection modulo inner derivations.
inline DerivResult solve_derivations(const Rat& b, const DerivSolveOptions& opts) {
    DerivResult out;
    out.opts = opts;
    Algebra alg = Algebra::clw(b);
    IndexWindow window = IndexWindow::symmetric(opts.window);

    LinSystem sys;
    ConformalMap<LinExpr> m;
    m.degree = opts.degree;
    m.window = window;
    std::vector<std::string> interior_labels;
    for (long j = window.lo; j <= window.hi; ++j) {
        GenComboT<LinExpr> lval, ival;
        BasicPoly<LinExpr> P, Q, R, S;
        for (int dd = 0; dd <= opts.pdeg; ++dd)
            for (int ll = 0; ll <= opts.ldeg; ++ll) {
                Monomial mo{dd, ll, 0};
                P.add_term(mo, sys.var(deriv_label('P', j, dd, ll)));
                Q.add_term(mo, sys.var(deriv_label('Q', j, dd, ll)));
                R.add_term(mo, sys.var(deriv_label('R', j, dd, ll)));
                S.add_term(mo, sys.var(deriv_label('S', j, dd, ll)));
                if (std::labs(j) <= opts.interior)
                    for (char blk : {'P', 'Q', 'R', 'S'})
                        interior_labels.push_back(deriv_label(blk, j, dd, ll));
            }
        lval.add_part(gen_L(j + opts.degree), P);
        lval.add_part(gen_I(j + opts.degree), Q);
        ival.add_part(gen_L(j + opts.degree), R);
        ival.add_part(gen_I(j + opts.degree), S);
        m.values[gen_L(j)] = lval;
        m.values[gen_I(j)] = ival;
    }
    sys.set_interior_labels(interior_labels);

    derivation_residuals(alg, m,
                         [&](const GeneratorId&, const GeneratorId&,
                             const GenComboT<LinExpr>& residual) {
                             for (const auto& [h, p] : residual.parts)
                                 sys.add_poly_zero(p);
                         });
    out.space = sys.solve();

    // Inner span on the same interior coordinates.  ad(D^k u) has
    // lam-degree <= k+1, so only finitely many candidates fit the ansatz;
    // enumerate generously and keep the representable ones.
    RowSpace inner(out.space.labels.size());
    for (int k = 0; k <= opts.ldeg + 1; ++k) {
        for (const GeneratorId& base : {gen_L(opts.degree), gen_I(opts.degree)}) {
            ConformalMap<Rat> ad =
                inner_derivation(alg, element(base, poly_pow(poly_D(), k)), window);
            auto coords =
                detail::map_coords(ad, out.space.labels, opts.interior, opts.pdeg, opts.ldeg);
            if (coords) inner.insert(std::move(*coords));
        }
    }
    out.inner_rank = inner.rank();

    RowSpace joint = inner;
    long grew = 0;
    for (const auto& v : out.space.basis)
        if (joint.insert(v)) ++grew;
    out.quotient = grew;

    // The distinguished direction: a derivation exactly at b = 0, and never
    // inner when it is one.
    ConformalMap<Rat> shift = family_shift_derivation(opts.degree, window);
    out.family_shift_solves = is_derivation(alg, shift).pass;
    auto shift_coords =
        detail::map_coords(shift, out.space.labels, opts.interior, opts.pdeg, opts.ldeg);
    if (shift_coords) {
        RowSpace probe = inner;
        out.family_shift_inner = !probe.insert(std::move(*shift_coords));
    } else {
        out.family_shift_inner = false;
    }
    return out;
}

} // namespace loopw
