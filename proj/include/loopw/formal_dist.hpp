#pragma once

// Formal-distribution layer over the loop Lie algebra LW(a,b).
//
// The Lie algebra has basis L_{alpha,i}, I_{beta,j} (alpha, beta mode
// indices; i, j loop indices) with
//
//     [L_{alpha,i}, L_{beta,j}] = (alpha - beta) L_{alpha+beta, i+j}
//     [L_{alpha,i}, I_{beta,j}] = -(a + b*alpha + beta) I_{alpha+beta, i+j}
//     [I, I] = 0
//
// Generating distributions are graded series
//
//     L_i(z) = sum_alpha L_{alpha,i} z^{-alpha-2}
//     I_j(z) = sum_beta  I_{beta,j} z^{-beta-x}
//
// for a candidate exponent x.  The j-th product a_(j) b is computed
// residue-wise: expanding (z-w)^j binomially, Res_z of each z^t [a(z),b(w)]
// term selects exactly one left mode, so no delta-function machinery is
// ever materialized.  A j-product is a mode series in w; "recognize" fits
// it exactly as (polynomial in D of degree <= 2) applied to a basis
// distribution, an overdetermined linear fit whose failure certifies that
// the family does not close.  Closure holds precisely for x = a-b+1, and
// the formal Fourier transform sum_j lam^j / j! (a_(j) b) then reproduces
// the CLW(b) lambda-brackets of the conformal core.

#include "conformal.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace loopw {

struct Mode {
    Family family = Family::L;
    long alpha = 0; // mode index
    long loop = 0;  // loop index
    auto operator<=>(const Mode&) const = default;
};

inline std::string mode_str(const Mode& m) {
    return family_name(m.family) + "{" + std::to_string(m.alpha) + "," +
           std::to_string(m.loop) + "}";
}

struct LoopParams {
    Rat a{0}, b{0};
};

struct Distribution {
    Family family = Family::L;
    long loop = 0;
    Rat weight{2};

    static Distribution L(long loop) { return {Family::L, loop, Rat(2)}; }
    static Distribution I(long loop, Rat x) { return {Family::I, loop, std::move(x)}; }
};

inline std::string dist_str(const Distribution& d) {
    return family_name(d.family) + std::to_string(d.loop) + "(weight " +
           rat_str(d.weight) + ")";
}

/// Finite rational combination of Lie-algebra modes.
using ModeCombination = std::map<Mode, Rat>;

inline void mc_add(ModeCombination& into, const Mode& m, const Rat& c) {
    if (c == 0) return;
    auto [it, fresh] = into.try_emplace(m, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) into.erase(it);
    }
}
inline void mc_add_scaled(ModeCombination& into, const ModeCombination& src, const Rat& s) {
    for (const auto& [m, c] : src) mc_add(into, m, c * s);
}
inline std::string mc_str(const ModeCombination& mc) {
    if (mc.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : mc) {
        if (!out.empty()) out += " + ";
        out += rat_str(c) + "*" + mode_str(m);
    }
    return out;
}

/// Raised when a residue would have to select a fractional mode index, or
/// a mode label falls outside the integer lattice.  The message names the
/// offending term.
struct StructuralFailure : std::runtime_error {
    explicit StructuralFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Output of a j-product: for each integer slot m in the probe window, the
/// coefficient of w^{-m - ref_weight}.
struct ModeSeries {
    Rat ref_weight{0};
    std::map<long, ModeCombination> slots;

    bool is_zero() const {
        for (const auto& [m, mc] : slots)
            if (!mc.empty()) return false;
        return true;
    }
};

/// Lie bracket of two modes.
inline ModeCombination loop_bracket(const LoopParams& p, const Mode& x, const Mode& y) {
    ModeCombination out;
    if (x.family == Family::L && y.family == Family::L) {
        mc_add(out, Mode{Family::L, x.alpha + y.alpha, x.loop + y.loop},
               Rat(x.alpha) - Rat(y.alpha));
    } else if (x.family == Family::L && y.family == Family::I) {
        mc_add(out, Mode{Family::I, x.alpha + y.alpha, x.loop + y.loop},
               -(p.a + p.b * Rat(x.alpha) + Rat(y.alpha)));
    } else if (x.family == Family::I && y.family == Family::L) {
        mc_add(out, Mode{Family::I, x.alpha + y.alpha, x.loop + y.loop},
               p.a + p.b * Rat(y.alpha) + Rat(x.alpha));
    }
    return out; // (I, I) commute
}

inline long rat_to_long(const Rat& r) {
    return static_cast<long>(rat_num(r));
}

/// j-th product a_(j) b as a mode series on the probe window.
///
/// Expanding (z-w)^j = sum_k C(j,k) z^{j-k} (-w)^k, the z-residue of
/// z^{j-k} [a(z), b(w)] picks the single left mode alpha_k = j-k+1-w(a);
/// the slot-m coefficient then collects beta = m - alpha_k from the right
/// series, and the whole product carries reference weight
/// w(a) + w(b) - j - 1.
inline ModeSeries j_product(const LoopParams& p, const Distribution& a,
                            const Distribution& b, long j, IndexWindow out_window) {
    ModeSeries out;
    out.ref_weight = a.weight + b.weight - Rat(j) - Rat(1);
    for (long m = out_window.lo; m <= out_window.hi; ++m) out.slots[m]; // declare window
    for (long k = 0; k <= j; ++k) {
        Rat alpha_exact = Rat(j - k + 1) - a.weight;
        if (!rat_is_integer(alpha_exact))
            throw StructuralFailure(
                "residue of z^" + std::to_string(j - k) + " term in " + dist_str(a) +
                "_(" + std::to_string(j) + ") " + dist_str(b) +
                " selects non-integer mode alpha = " + rat_str(alpha_exact));
        long alpha = rat_to_long(alpha_exact);
        Rat scale = rat_binom(j, k) * ((k % 2 == 0) ? Rat(1) : Rat(-1));
        for (long m = out_window.lo; m <= out_window.hi; ++m) {
            Mode left{a.family, alpha, a.loop};
            Mode right{b.family, m - alpha, b.loop};
            mc_add_scaled(out.slots[m], loop_bracket(p, left, right), scale);
        }
    }
    return out;
}

/// Smallest N <= jmax such that all products of order >= N vanish on the
/// probe window; nullopt when the order-jmax product is still nonzero.
inline std::optional<long> locality_order(const LoopParams& p, const Distribution& a,
                                          const Distribution& b, long jmax,
                                          IndexWindow probe) {
    long n = jmax + 1;
    for (long j = jmax; j >= 0; --j) {
        if (j_product(p, a, b, j, probe).is_zero()) n = j;
        else break;
    }
    if (n > jmax) return std::nullopt;
    return n;
}

struct RecognizeResult {
    bool in_span = false;
    Element value;       // polynomial in D applied to the basis generator
    std::string witness; // failure description when !in_span
};

/// Exact fit of a mode series as p(D) u for the basis distribution u, with
/// deg p <= 2.  The fit is overdetermined (window must offer at least five
/// slots); any leftover mode, inconsistent row, or non-integer alignment is
/// a certified "not in span" with a witness.
inline RecognizeResult recognize(const ModeSeries& series, const Distribution& basis) {
    RecognizeResult res;
    constexpr int kMaxDeg = 2;
    if (series.slots.size() < kMaxDeg + 3)
        throw std::logic_error("recognition window too small: need at least 5 slots");

    if (series.is_zero()) {
        res.in_span = true;
        return res;
    }

    Rat offset = series.ref_weight - basis.weight;
    if (!rat_is_integer(offset)) {
        res.witness = "series weight " + rat_str(series.ref_weight) +
                      " is not an integer shift of basis weight " + rat_str(basis.weight);
        return res;
    }
    long sigma = rat_to_long(offset);

    // gamma_k(n): coefficient of mode u_n in D^k u at slot n + k.
    auto gamma = [&](int k, long n) {
        Rat acc(1);
        for (int t = 0; t < k; ++t) acc *= -(Rat(n) + basis.weight + Rat(t));
        return acc;
    };

    // Rows: c_k * gamma_k(n) = observed coefficient.
    std::vector<std::array<Rat, kMaxDeg + 2>> rows;
    for (const auto& [m, combo] : series.slots) {
        long s = m + sigma;
        // Union of observed modes and the modes the ansatz predicts.
        std::map<Mode, Rat> all = combo;
        for (int k = 0; k <= kMaxDeg; ++k)
            all.try_emplace(Mode{basis.family, s - k, basis.loop}, Rat(0));
        for (const auto& [mode, coeff] : all) {
            if (mode.family != basis.family || mode.loop != basis.loop) {
                if (coeff != 0) {
                    res.witness = "foreign mode " + mode_str(mode) + " at slot " +
                                  std::to_string(m);
                    return res;
                }
                continue;
            }
            long k = s - mode.alpha;
            if (k < 0 || k > kMaxDeg) {
                if (coeff != 0) {
                    res.witness = "mode " + mode_str(mode) + " at slot " +
                                  std::to_string(m) + " outside the degree-2 span";
                    return res;
                }
                continue;
            }
            std::array<Rat, kMaxDeg + 2> row{};
            row[k] = gamma(static_cast<int>(k), mode.alpha);
            row[kMaxDeg + 1] = coeff;
            rows.push_back(std::move(row));
        }
    }

    // Tiny exact Gaussian elimination with consistency detection.
    std::array<Rat, kMaxDeg + 1> c{};
    std::array<bool, kMaxDeg + 1> pinned{};
    for (int col = 0; col <= kMaxDeg; ++col) {
        std::size_t pr = rows.size();
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (rows[r][col] != 0) { pr = r; break; }
        if (pr == rows.size()) continue;
        auto pivot = rows[pr];
        rows.erase(rows.begin() + static_cast<long>(pr));
        for (auto& row : rows) {
            if (row[col] == 0) continue;
            Rat f = row[col] / pivot[col];
            for (int t = 0; t <= kMaxDeg + 1; ++t) row[t] -= f * pivot[t];
        }
        c[col] = pivot[kMaxDeg + 1] / pivot[col];
        pinned[col] = true;
        // Eliminate earlier columns is unnecessary: each row has one term.
    }
    for (const auto& row : rows) {
        bool only_const = true;
        for (int t = 0; t <= kMaxDeg; ++t) only_const = only_const && row[t] == 0;
        if (only_const && row[kMaxDeg + 1] != 0) {
            res.witness = "inconsistent overdetermined fit (residual " +
                          rat_str(row[kMaxDeg + 1]) + ")";
            return res;
        }
    }

    Poly value;
    for (int k = 0; k <= kMaxDeg; ++k)
        if (pinned[k] && c[k] != 0) value += poly_pow(poly_D(), k) * c[k];

    // Exact reconstruction check over the whole window: the fit must
    // reproduce every observed slot (this also catches any silent
    // underdetermination).
    for (const auto& [m, combo] : series.slots) {
        long s = m + sigma;
        ModeCombination predicted;
        for (int k = 0; k <= kMaxDeg; ++k) {
            if (!pinned[k] || c[k] == 0) continue;
            mc_add(predicted, Mode{basis.family, s - k, basis.loop},
                   c[k] * gamma(k, s - k));
        }
        if (predicted != combo) {
            res.witness = "fit fails to reproduce slot " + std::to_string(m);
            return res;
        }
    }

    res.in_span = true;
    if (!value.is_zero()) res.value.add_part(GeneratorId{basis.family, basis.loop}, value);
    return res;
}

struct PairClosure {
    Distribution left, right;
    long j = 0;
    bool ok = false;
    std::string detail; // recognized value or witness
};

struct ClosureReport {
    bool closed = true;
    std::vector<PairClosure> pairs;
};

inline Distribution closure_basis(const Distribution& a, const Distribution& b,
                                  const Rat& x) {
    if (a.family == Family::L && b.family == Family::L)
        return Distribution::L(a.loop + b.loop);
    return Distribution::I(a.loop + b.loop, x);
}

/// Do all pairwise j-products of {L_i(z), I_i(z)} land back in the span of
/// the family and its D-derivatives?  Exactly the x = a-b+1 criterion.
inline ClosureReport verify_closure(const LoopParams& p, const Rat& x,
                                    IndexWindow loop_window, long mode_window,
                                    long jmax = 3) {
    ClosureReport rep;
    IndexWindow probe = IndexWindow::symmetric(mode_window);
    std::vector<Distribution> dists;
    for (long i = loop_window.lo; i <= loop_window.hi; ++i) dists.push_back(Distribution::L(i));
    for (long i = loop_window.lo; i <= loop_window.hi; ++i) dists.push_back(Distribution::I(i, x));
    for (const auto& da : dists)
        for (const auto& db : dists)
            for (long j = 0; j <= jmax; ++j) {
                PairClosure pc{da, db, j, false, ""};
                try {
                    ModeSeries s = j_product(p, da, db, j, probe);
                    RecognizeResult r = recognize(s, closure_basis(da, db, x));
                    pc.ok = r.in_span;
                    pc.detail = r.in_span ? combo_str(r.value) : r.witness;
                } catch (const StructuralFailure& sf) {
                    pc.ok = false;
                    pc.detail = sf.what();
                }
                if (!pc.ok) rep.closed = false;
                rep.pairs.push_back(std::move(pc));
            }
    return rep;
}

/// Formal Fourier transform sum_j lam^j / j! (a_(j) b), valid once the
/// products are recognized; throws StructuralFailure when recognition
/// fails, since the transform has no target in that case.
inline LambdaElement fourier_lambda_bracket(const LoopParams& p, const Rat& x,
                                            const Distribution& a, const Distribution& b,
                                            long mode_window, long jmax = 3) {
    IndexWindow probe = IndexWindow::symmetric(mode_window);
    LambdaElement out;
    for (long j = 0; j <= jmax; ++j) {
        ModeSeries s = j_product(p, a, b, j, probe);
        RecognizeResult r = recognize(s, closure_basis(a, b, x));
        if (!r.in_span)
            throw StructuralFailure("order-" + std::to_string(j) + " product of " +
                                    dist_str(a) + ", " + dist_str(b) +
                                    " not recognizable: " + r.witness);
        out += (poly_pow(poly_lam(), static_cast<int>(j)) * (Rat(1) / rat_factorial(j))) *
               r.value;
    }
    return out;
}

struct ModeCommutationResult {
    bool pass = false;
    long m = 0, n = 0;
    ModeCombination lhs, rhs;
};

/// The standard Fourier-mode index of a distribution mode: for the series
/// convention sum_t a_(t) z^{-t-1}, the mode with label alpha and weight w
/// sits at t = alpha + w - 1.
inline long fourier_index(const Mode& mode, const Rat& weight) {
    Rat t = Rat(mode.alpha) + weight - Rat(1);
    if (!rat_is_integer(t))
        throw StructuralFailure("mode " + mode_str(mode) +
                                " has non-integer Fourier index " + rat_str(t));
    return rat_to_long(t);
}

/// Check [a_(m), b_(n)] = sum_t C(m,t) (a_(t) b)_(m+n-t) for the modes
/// derived from x and y (m must be non-negative; the sum then runs over
/// t = 0..m exactly).  The right side re-expands the recognized
/// j-products into modes.
inline ModeCommutationResult check_mode_commutation(const LoopParams& p, const Rat& x,
                                                    const Mode& xm, const Mode& ym,
                                                    long mode_window) {
    auto weight_of = [&](Family f) { return f == Family::L ? Rat(2) : x; };
    ModeCommutationResult res;
    res.m = fourier_index(xm, weight_of(xm.family));
    res.n = fourier_index(ym, weight_of(ym.family));
    if (res.m < 0)
        throw std::invalid_argument("mode commutation requires m >= 0, got m = " +
                                    std::to_string(res.m));

    res.lhs = loop_bracket(p, xm, ym);

    Distribution da = xm.family == Family::L ? Distribution::L(xm.loop)
                                             : Distribution::I(xm.loop, x);
    Distribution db = ym.family == Family::L ? Distribution::L(ym.loop)
                                             : Distribution::I(ym.loop, x);
    IndexWindow probe = IndexWindow::symmetric(mode_window);
    for (long t = 0; t <= res.m; ++t) {
        ModeSeries s = j_product(p, da, db, t, probe);
        RecognizeResult r = recognize(s, closure_basis(da, db, x));
        if (!r.in_span)
            throw StructuralFailure("order-" + std::to_string(t) +
                                    " product not recognizable: " + r.witness);
        long target = res.m + res.n - t;
        // (poly(D) u)_(target), re-expanded mode by mode:
        for (const auto& [g, poly] : r.value.parts) {
            Rat w = weight_of(g.family);
            for (const auto& [mo, ck] : poly.terms()) {
                int k = mo.d;
                Rat factor = ck;
                for (int r2 = 0; r2 < k; ++r2) factor *= -(Rat(target) - Rat(r2));
                long base_index = target - k;
                Rat alpha = Rat(base_index) + Rat(1) - w;
                if (!rat_is_integer(alpha))
                    throw StructuralFailure("re-expansion hits non-integer mode");
                mc_add(res.rhs, Mode{g.family, rat_to_long(alpha), g.index},
                       factor * rat_binom(res.m, t));
            }
        }
    }
    res.pass = res.lhs == res.rhs;
    return res;
}

} // namespace loopw
