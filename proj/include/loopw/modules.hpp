#pragma once

// Conformal modules over the loop algebra CLW(b).
//
// Every module this project manipulates lives on at most two basis vectors:
// v spans a free rank-one fiber (coefficients in D act freely) and u spans
// a one-dimensional piece on which D acts by a scalar beta.  A vector is a
// coordinate pair (p, s) meaning p*v + s*u, with the invariant that s never
// mentions D (on the one-dimensional piece any D has already collapsed).
// The module derivative is
//
//     rank-one / sub extension:   (p, s) -> (D p, beta s)
//     quotient extension:         (p, s) -> (D p + s rho(D), beta s)
//
// where rho records how D maps the chosen preimage of the quotient
// generator back into the fiber.  The action of a generator is stored as
// its value on each basis vector and extended to arbitrary vectors by the
// sesquilinearity rule a_lam (q(D) w) = q(D + lam) (a_lam w), implemented
// by expanding q in powers of D and applying the module derivative that
// many times ("partial application").
//
// The same code runs with exact rational coefficients (checking a concrete
// module) and with linear-form coefficients (turning the module identities
// into the rows of a solver system).  Products of two unknown-bearing
// coefficients are structurally impossible in the flows wired here; if a
// future caller wires one, the linear layer throws instead of silently
// producing a nonlinear system.

#include "conformal.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace loopw {

struct ModuleParams {
    Rat b{0};      // loop algebra parameter
    Rat delta{0};  // weight of the rank-one action
    Rat alpha{0};  // translation offset of the rank-one action
    Rat c{1};      // loop direction scaling; must be nonzero
    Rat d{0};      // second-family eigenvalue (only meaningful at b = 0)
};

inline void validate_module_params(const ModuleParams& p) {
    if (p.c == 0) throw std::invalid_argument("module parameter c must be nonzero");
}

inline Rat loop_scale(const ModuleParams& p, long i) { return rat_pow(p.c, i); }

/// Whether the second family can act at all: it is central unless b = 0,
/// and a central generator must act by zero on a rank-one module for the
/// commutator identities to close with a nonzero eigenvalue.
inline bool second_family_acts(const ModuleParams& p) { return p.b == 0; }

template <class C>
struct PairVec {
    BasicPoly<C> v; // coordinate along the rank-one fiber
    BasicPoly<C> u; // coordinate along the one-dimensional piece (D-free)

    bool is_zero() const { return v.is_zero() && u.is_zero(); }
    PairVec& operator+=(const PairVec& o) {
        v += o.v;
        u += o.u;
        return *this;
    }
    PairVec& operator-=(const PairVec& o) {
        v -= o.v;
        u -= o.u;
        return *this;
    }
    friend PairVec operator-(PairVec a, const PairVec& b) { return a -= b; }
    /// Scale componentwise by a scalar polynomial.
    friend PairVec operator*(const PairVec& a, const Poly& s) {
        return {a.v * s, a.u * s};
    }
    bool operator==(const PairVec& o) const { return v == o.v && u == o.u; }
};

template <class C>
PairVec<C> pair_subst_lam(const PairVec<C>& x, const Poly& image) {
    return {subst_lam(x.v, image), subst_lam(x.u, image)};
}

template <class C>
struct ModuleShape {
    ModuleParams par;
    IndexWindow window;
    bool has_u = false;
    Rat beta{0};       // D-eigenvalue on the one-dimensional piece
    BasicPoly<C> rho;  // fiber component of D applied to the u basis vector

    std::map<GeneratorId, PairVec<C>> on_v; // generator action on v, in (D, lam)
    std::map<GeneratorId, PairVec<C>> on_u; // generator action on u, in (D, lam)

    PairVec<C> basis_v() const { return {poly_lift<C>(poly_one()), {}}; }
    PairVec<C> basis_u() const { return {{}, poly_lift<C>(poly_one())}; }

    /// The module derivative on coordinates.
    PairVec<C> derivative(const PairVec<C>& x) const {
        PairVec<C> out;
        out.v = x.v * poly_D();
        if (!x.u.is_zero() && !rho.is_zero()) out.v += poly_mul(x.u, rho);
        if (!x.u.is_zero() && beta != 0) out.u = x.u * beta;
        return out;
    }
};

/// q(D)'s D-powers reinterpreted as module derivatives applied to base.
template <class C>
PairVec<C> partial_apply(const ModuleShape<C>& sh, const BasicPoly<C>& q,
                         const PairVec<C>& base) {
    PairVec<C> out;
    int maxk = q.degree(Var::D);
    PairVec<C> power = base;
    for (int k = 0; k <= maxk; ++k) {
        BasicPoly<C> qk;
        for (const auto& [mo, cc] : q.terms())
            if (mo.d == k) qk.add_term(Monomial{0, mo.l, mo.m}, cc);
        if (!qk.is_zero()) {
            out.v += poly_mul(power.v, qk);
            out.u += poly_mul(power.u, qk);
        }
        if (k < maxk) power = sh.derivative(power);
    }
    return out;
}

/// Action of a generator on an arbitrary coordinate pair, with spectral
/// variable theta (lam, mu, or lam+mu).
template <class C>
PairVec<C> act(const ModuleShape<C>& sh, const GeneratorId& g, const PairVec<C>& x,
               const Poly& theta) {
    auto it = sh.on_v.find(g);
    if (it == sh.on_v.end())
        throw std::out_of_range("module action undefined for " + gen_str(g));
    PairVec<C> out = partial_apply(sh, shift_D(x.v, theta), pair_subst_lam(it->second, theta));
    if (!x.u.is_zero()) {
        if (x.u.depends_on(Var::D))
            throw std::logic_error("one-dimensional coordinate acquired a D dependence");
        if (sh.has_u) {
            auto iu = sh.on_u.find(g);
            if (iu == sh.on_u.end())
                throw std::out_of_range("module action on u undefined for " + gen_str(g));
            PairVec<C> gu = pair_subst_lam(iu->second, theta);
            out.v += poly_mul(x.u, gu.v);
            out.u += poly_mul(x.u, gu.u);
        }
    }
    return out;
}

/// Stream every module-identity residual to a sink.  Residuals:
///   - derivative rule: a_lam (D w) - (D + lam)(a_lam w) for each generator
///     and basis vector;
///   - commutators: a_lam (b_mu w) - b_mu (a_lam w) - [a lam b]_{lam+mu} w
///     for each ordered generator pair whose bracket stays in the window.
/// The filter can exclude pairs (used to defer identities that are not
/// linear in the solver's unknowns).
template <class C, class Emit>
void module_residuals(const Algebra& alg, const ModuleShape<C>& sh, Emit&& emit,
                      const std::function<bool(const GeneratorId&, const GeneratorId&)>&
                          pair_filter = {}) {
    std::vector<GeneratorId> gens = alg.generators(sh.window);
    std::vector<std::pair<std::string, PairVec<C>>> bases;
    bases.emplace_back("v", sh.basis_v());
    if (sh.has_u) bases.emplace_back("u", sh.basis_u());

    for (const auto& g : gens)
        for (const auto& [wname, w] : bases) {
            PairVec<C> val = act(sh, g, w, poly_lam());
            PairVec<C> lhs = act(sh, g, sh.derivative(w), poly_lam());
            PairVec<C> rhs = sh.derivative(val);
            rhs += val * poly_lam();
            lhs -= rhs;
            emit("derivative rule, " + gen_str(g) + " on " + wname, lhs);
        }

    const Poly lam_mu = poly_lam() + poly_mu();
    for (const auto& x : gens)
        for (const auto& y : gens) {
            if (!sh.window.contains(x.index + y.index)) continue;
            if (pair_filter && !pair_filter(x, y)) continue;
            for (const auto& [wname, w] : bases) {
                PairVec<C> t1 = act(sh, x, act(sh, y, w, poly_mu()), poly_lam());
                PairVec<C> t2 = act(sh, y, act(sh, x, w, poly_lam()), poly_mu());
                PairVec<C> t3;
                for (const auto& [g, pbr] : alg.bracket_gen(x, y).parts) {
                    Poly factor = subst_D(pbr, -lam_mu);
                    t3 += act(sh, g, w, lam_mu) * factor;
                }
                PairVec<C> residual = t1 - t2;
                residual -= t3;
                emit("commutator (" + gen_str(x) + ", " + gen_str(y) + ") on " + wname,
                     residual);
            }
        }
}

inline std::string pair_str(const PairVec<Rat>& x) {
    return "(" + poly_str(x.v) + ", " + poly_str(x.u) + ")";
}

/// Exact check of a concrete module structure.
inline AxiomReport check_module(const Algebra& alg, const ModuleShape<Rat>& sh) {
    AxiomReport rep;
    module_residuals(alg, sh, [&](const std::string& what, const PairVec<Rat>& residual) {
        if (!residual.is_zero()) rep.flag("module", what, pair_str(residual));
    });
    return rep;
}

// ---------------------------------------------------------------------------
// Concrete shapes.

/// The rank-one module with parameters (delta, alpha, c, d):
///   L_i lam v = c^i (D + delta lam + alpha) v
///   I_i lam v = [b = 0] d c^i v
template <class C = Rat>
ModuleShape<C> rank1_shape(const ModuleParams& par, IndexWindow window) {
    validate_module_params(par);
    ModuleShape<C> sh;
    sh.par = par;
    sh.window = window;
    Poly lpoly = poly_D() + par.delta * poly_lam() + poly_const(par.alpha);
    for (long i = window.lo; i <= window.hi; ++i) {
        Rat ci = loop_scale(par, i);
        sh.on_v[gen_L(i)] = {poly_lift<C>(lpoly * ci), {}};
        Poly ival = second_family_acts(par) ? poly_const(par.d * ci) : poly_zero();
        sh.on_v[gen_I(i)] = {poly_lift<C>(ival), {}};
    }
    return sh;
}

/// Rank-one shape with a caller-supplied second-family action (used by the
/// solver, where those values carry unknowns).
template <class C>
ModuleShape<C> rank1_shape_with_i(const ModuleParams& par, IndexWindow window,
                                  const std::map<long, BasicPoly<C>>& ivals) {
    ModuleShape<C> sh = rank1_shape<C>(par, window);
    for (long i = window.lo; i <= window.hi; ++i) sh.on_v[gen_I(i)] = {ivals.at(i), {}};
    return sh;
}

// ---------------------------------------------------------------------------
// Rank-one classification within a window.

struct Rank1Result {
    std::map<long, Rat> t;      // multiplicative family propagated from t_1 = c
    bool t_consistent = false;  // t_i t_j == t_{i+j} across the window

    // The linear identities cut out g_space; the one quadratic identity
    // (both actions from the second family) then selects the valid cone
    // inside it.  g_basis spans the certified subspace of genuine actions;
    // g_exact records whether that span provably equals the whole valid
    // set (it can be false only in mixed cases this project never hits).
    SolutionSpace g_space;
    std::vector<std::vector<Rat>> g_basis;
    bool g_exact = false;

    long g_dimension() const { return static_cast<long>(g_basis.size()); }
};

inline std::string rank1_g_label(long i, int dd, int ll) {
    return "g[" + std::to_string(i) + "]_D" + std::to_string(dd) + "_lam" +
           std::to_string(ll);
}

/// Decode a g-space solution vector into per-generator polynomials.
inline std::map<long, Poly> rank1_decode_g(const SolutionSpace& sol,
                                           const std::vector<Rat>& coords) {
    std::map<long, Poly> out;
    for (std::size_t k = 0; k < sol.labels.size(); ++k) {
        if (coords.at(k) == 0) continue;
        const std::string& lab = sol.labels[k];
        long i = std::stol(lab.substr(lab.find('[') + 1));
        auto dpos = lab.find("_D"), lpos = lab.find("_lam");
        int dd = std::stoi(lab.substr(dpos + 2, lpos - dpos - 2));
        int ll = std::stoi(lab.substr(lpos + 4));
        out[i] += Poly::term(Monomial{dd, ll, 0}, coords[k]);
    }
    return out;
}

/// Solve for all module structures extending the standard rank-one action
/// of the first family: propagate the multiplicative family, then solve
/// the linear identities for the second-family action (polynomial ansatz
/// of degree <= 2 in each of D and lam) and verify the one non-linear
/// identity on the solution basis by polarization.
inline Rank1Result solve_rank1(const ModuleParams& par, IndexWindow window) {
    validate_module_params(par);
    Rank1Result out;

    // Multiplicative family: t_0 = 1 forced by t_0^2 = t_0 with t_0 != 0;
    // everything else propagates from t_1.
    out.t[0] = Rat(1);
    for (long i = 1; i <= window.hi; ++i) out.t[i] = out.t[i - 1] * par.c;
    for (long i = -1; i >= window.lo; --i) out.t[i] = out.t[i + 1] / par.c;
    out.t_consistent = true;
    for (long i = window.lo; i <= window.hi; ++i)
        for (long j = window.lo; j <= window.hi; ++j)
            if (window.contains(i + j) && out.t[i] * out.t[j] != out.t[i + j])
                out.t_consistent = false;

    // Linear solve for the second-family action.
    LinSystem sys;
    std::map<long, UPoly> gvals;
    for (long i = window.lo; i <= window.hi; ++i)
        for (int dd = 0; dd <= 2; ++dd)
            for (int ll = 0; ll <= 2; ++ll)
                gvals[i].add_term(Monomial{dd, ll, 0}, sys.var(rank1_g_label(i, dd, ll)));

    ModuleShape<LinExpr> sh = rank1_shape_with_i<LinExpr>(par, window, gvals);
    Algebra alg = Algebra::clw(par.b);
    auto linear_pairs = [](const GeneratorId& x, const GeneratorId& y) {
        return !(x.family == Family::I && y.family == Family::I);
    };
    module_residuals(
        alg, sh,
        [&](const std::string&, const PairVec<LinExpr>& residual) {
            sys.add_poly_zero(residual.v);
            sys.add_poly_zero(residual.u);
        },
        linear_pairs);
    out.g_space = sys.solve();

    // The deferred second-family/second-family identity is quadratic in the
    // ansatz.  A vector of g_space is a genuine action iff the quadratic
    // form Q it defines vanishes there; a subspace is valid iff Q vanishes
    // on each basis vector and each pairwise sum (polarization).
    auto quadratic_holds = [&](const std::vector<Rat>& coords) {
        std::map<long, Poly> g = rank1_decode_g(out.g_space, coords);
        std::map<long, BasicPoly<Rat>> vals;
        for (long i = window.lo; i <= window.hi; ++i) {
            auto it = g.find(i);
            vals[i] = it == g.end() ? poly_zero() : it->second;
        }
        ModuleShape<Rat> concrete = rank1_shape_with_i<Rat>(par, window, vals);
        bool ok = true;
        module_residuals(
            alg, concrete,
            [&](const std::string&, const PairVec<Rat>& residual) {
                ok = ok && residual.is_zero();
            },
            [](const GeneratorId& x, const GeneratorId& y) {
                return x.family == Family::I && y.family == Family::I;
            });
        return ok;
    };
    const auto& basis = out.g_space.basis;
    std::vector<std::vector<Rat>> kept;
    for (const auto& vec : basis)
        if (quadratic_holds(vec)) kept.push_back(vec);
    bool span_valid = true;
    for (std::size_t r = 0; r < kept.size() && span_valid; ++r)
        for (std::size_t s = r + 1; s < kept.size() && span_valid; ++s) {
            std::vector<Rat> sum = kept[r];
            for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += kept[s][k];
            span_valid = quadratic_holds(sum);
        }
    if (span_valid) out.g_basis = std::move(kept);
    // Exactness: the whole linear space survived, or the linear space was a
    // line and that line failed (the valid cone is then {0}), or there was
    // nothing to check.
    out.g_exact = span_valid && (out.g_basis.size() == basis.size() ||
                                 (basis.size() == 1 && out.g_basis.empty()));
    return out;
}

// ---------------------------------------------------------------------------
// Degree-one submodules.

struct SubmoduleSearch {
    bool every_s = false;    // the action is trivial: every monic degree-one
                             // generator spans a submodule
    std::vector<Rat> roots;  // the values s with C[D](D + s) v a submodule
};

/// Rational roots of a polynomial given by ascending coefficients.
inline std::vector<Rat> rational_roots(std::vector<Rat> coeffs) {
    while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
    std::vector<Rat> roots;
    if (coeffs.empty()) return roots; // zero polynomial: caller handles
    std::size_t low = 0;
    while (low < coeffs.size() && coeffs[low] == 0) ++low;
    if (low > 0) roots.push_back(Rat(0));
    if (low + 1 >= coeffs.size()) return roots; // constant after stripping
    // Integerize and enumerate p/q with p | constant, q | leading.
    Int lcm = 1;
    for (std::size_t k = low; k < coeffs.size(); ++k) {
        Int den = rat_den(coeffs[k]);
        Int g = boost::multiprecision::gcd(lcm, den);
        lcm = (lcm / g) * den;
    }
    std::vector<Int> ic;
    for (std::size_t k = low; k < coeffs.size(); ++k)
        ic.push_back(rat_num(coeffs[k]) * (lcm / rat_den(coeffs[k])));
    auto divisors = [](Int n) {
        if (n < 0) n = -n;
        std::vector<Int> out;
        for (Int d = 1; d * d <= n; ++d)
            if (n % d == 0) {
                out.push_back(d);
                out.push_back(n / d);
            }
        return out;
    };
    auto eval = [&](const Rat& s) {
        Rat acc(0);
        for (std::size_t k = ic.size(); k-- > 0;) acc = acc * s + Rat(ic[k]);
        return acc;
    };
    for (const Int& p : divisors(ic.front()))
        for (const Int& q : divisors(ic.back()))
            for (int sign : {1, -1}) {
                Rat cand = Rat(p * sign, q);
                if (eval(cand) != 0) continue;
                bool seen = false;
                for (const Rat& r : roots) seen = seen || r == cand;
                if (!seen) roots.push_back(cand);
            }
    return roots;
}

/// Find the degree-one submodules C[D](D + s) v of a rank-one shape: the
/// generator survives iff substituting D = -s kills every action value.
inline SubmoduleSearch find_degree_one_submodules(const ModuleShape<Rat>& sh) {
    if (sh.has_u) throw std::invalid_argument("submodule search expects a rank-one shape");
    SubmoduleSearch out;

    // lam-coefficientwise: value(D -> -s) = sum_a c_{a,l} (-s)^a lam^l.
    // Collect, for every action value and lam degree, the polynomial in s.
    std::vector<std::vector<Rat>> polys;
    for (const auto& [g, val] : sh.on_v) {
        if (val.v.is_zero()) continue;
        std::map<int, std::vector<Rat>> per_l;
        for (const auto& [mo, cc] : val.v.terms()) {
            auto& vec = per_l[mo.l];
            if (static_cast<int>(vec.size()) <= mo.d) vec.resize(mo.d + 1, Rat(0));
            vec[mo.d] += cc * ((mo.d % 2 == 0) ? Rat(1) : Rat(-1));
        }
        for (auto& [l, vec] : per_l) polys.push_back(vec);
    }
    if (polys.empty()) {
        out.every_s = true;
        return out;
    }

    auto eval_poly = [](const std::vector<Rat>& coeffs, const Rat& s) {
        Rat acc(0);
        for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * s + coeffs[k];
        return acc;
    };
    for (const Rat& cand : rational_roots(polys.front())) {
        bool ok = true;
        for (const auto& p : polys) ok = ok && eval_poly(p, cand) == 0;
        if (ok) out.roots.push_back(cand);
    }
    return out;
}

} // namespace loopw
