#pragma once

// Exact linear algebra over the rationals.
//
// LinExpr is an affine form in named unknowns; polynomials with LinExpr
// coefficients (UPoly) are how the solvers carry symbolic ansatz data
// through the same structural formulas the checkers use with concrete
// numbers.  LinSystem collects homogeneous rows "this form vanishes" and
// reduces them on the fly with a sparse fraction-free elimination (integer
// cross-multiplication with per-step content removal), so only the echelon
// survives in memory no matter how many rows the callers generate.
//
// Besides the plain nullspace, a system can declare an "interior" subset of
// unknowns.  Elimination then prefers the remaining (boundary) columns as
// pivots; every echelon row whose leading column is interior is supported
// entirely on interior columns, and those rows cut out exactly the
// projection of the full nullspace onto the interior coordinates: any
// interior point satisfying them extends to a full solution by
// back-substituting the boundary-led rows in reverse elimination order.
// Windowed solvers read their classification off such projections.

#include "poly.hpp"

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace loopw {

/// Affine form: constant + sum coeff_i * unknown_i.
class LinExpr {
public:
    LinExpr() = default;
    explicit LinExpr(Rat constant) : constant_(std::move(constant)) {}

    static LinExpr unknown(int id, Rat coeff = Rat(1)) {
        LinExpr e;
        if (coeff != 0) e.terms_.emplace(id, std::move(coeff));
        return e;
    }

    const Rat& constant() const { return constant_; }
    const std::map<int, Rat>& terms() const { return terms_; }
    bool is_zero() const { return constant_ == 0 && terms_.empty(); }
    bool is_constant() const { return terms_.empty(); }

    LinExpr& operator+=(const LinExpr& o) {
        constant_ += o.constant_;
        for (const auto& [id, c] : o.terms_) add_term(id, c);
        return *this;
    }
    LinExpr& operator-=(const LinExpr& o) {
        constant_ -= o.constant_;
        for (const auto& [id, c] : o.terms_) add_term(id, -c);
        return *this;
    }
    friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
    friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
    LinExpr operator-() const {
        LinExpr out;
        out.constant_ = -constant_;
        for (const auto& [id, c] : terms_) out.terms_.emplace(id, -c);
        return out;
    }
    friend LinExpr operator*(const LinExpr& a, const Rat& s) {
        LinExpr out;
        if (s == 0) return out;
        out.constant_ = a.constant_ * s;
        for (const auto& [id, c] : a.terms_) out.terms_.emplace(id, c * s);
        return out;
    }

    /// Product of two affine forms; legal only when at least one factor is
    /// constant, which keeps every solver system linear by construction.
    static LinExpr mul(const LinExpr& a, const LinExpr& b) {
        if (a.is_constant()) return b * a.constant_;
        if (b.is_constant()) return a * b.constant_;
        throw std::logic_error("product of two non-constant linear forms");
    }

    bool operator==(const LinExpr& o) const {
        return constant_ == o.constant_ && terms_ == o.terms_;
    }

private:
    void add_term(int id, const Rat& c) {
        if (c == 0) return;
        auto [it, fresh] = terms_.try_emplace(id, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Rat constant_{0};
    std::map<int, Rat> terms_;
};

template <>
struct CoeffOps<LinExpr> {
    static bool is_zero(const LinExpr& c) { return c.is_zero(); }
    static LinExpr neg(const LinExpr& c) { return -c; }
    static void add_into(LinExpr& a, const LinExpr& b) { a += b; }
    static LinExpr scaled(const LinExpr& c, const Rat& s) { return c * s; }
};

using UPoly = BasicPoly<LinExpr>;

/// Coefficient-generic product hooks (Rat*Rat, or quasi-linear LinExpr).
template <class C>
struct CoeffMul;
template <>
struct CoeffMul<Rat> {
    static Rat mul(const Rat& a, const Rat& b) { return a * b; }
};
template <>
struct CoeffMul<LinExpr> {
    static LinExpr mul(const LinExpr& a, const LinExpr& b) { return LinExpr::mul(a, b); }
};

/// Product of two polynomials with C coefficients (for C = LinExpr at least
/// one coefficient of each colliding pair must be unknown-free).
template <class C>
BasicPoly<C> poly_mul(const BasicPoly<C>& a, const BasicPoly<C>& b) {
    BasicPoly<C> out;
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms())
            out.add_term(ma.plus(mb), CoeffMul<C>::mul(ca, cb));
    return out;
}

/// Inject a scalar polynomial into C coefficients.
template <class C>
BasicPoly<C> poly_lift(const Poly& p) {
    BasicPoly<C> out;
    for (const auto& [mo, c] : p.terms())
        out.add_term(mo, CoeffOps<C>::scaled(C(Rat(1)), c));
    return out;
}
template <>
inline BasicPoly<Rat> poly_lift<Rat>(const Poly& p) { return p; }

/// Basis of a solution space, expressed over a chosen column set.
struct SolutionSpace {
    std::vector<int> cols;                  // unknown ids, in elimination order
    std::vector<std::string> labels;        // labels of those ids
    std::vector<std::vector<Rat>> basis;    // each inner vector indexed like cols
    long system_rank = 0;                   // rank of the full constraint system
    long ambient_nullity = 0;               // unknowns - rank (full nullspace dim)

    long dimension() const { return static_cast<long>(basis.size()); }
};

class LinSystem {
public:
    /// Get or create an unknown by label.  All unknowns should be created
    /// (and the interior declared) before rows are added.
    int unknown(const std::string& label) {
        auto it = ids_.find(label);
        if (it != ids_.end()) return it->second;
        if (!priority_.empty())
            throw std::logic_error("unknowns must be created before rows are added");
        int id = static_cast<int>(labels_.size());
        ids_.emplace(label, id);
        labels_.push_back(label);
        return id;
    }
    int unknown_count() const { return static_cast<int>(labels_.size()); }
    const std::string& label(int id) const { return labels_.at(id); }

    /// Convenience: the unknown as an affine form.
    LinExpr var(const std::string& label) { return LinExpr::unknown(unknown(label)); }

    /// Declare the columns whose projection the solve should report.  Must
    /// be called before any row is added; boundary columns get eliminated
    /// first.  Without a declaration the solve reports the full nullspace.
    void set_interior(const std::vector<int>& keep) {
        if (!rows_added_ewhere() && priority_.empty()) {
            interior_ = keep;
        } else {
            throw std::logic_error("set_interior must precede rows");
        }
    }
    void set_interior_labels(const std::vector<std::string>& labels) {
        std::vector<int> keep;
        keep.reserve(labels.size());
        for (const auto& l : labels) keep.push_back(unknown(l));
        set_interior(keep);
    }

    /// Impose "e == 0".  The affine constant must already have cancelled;
    /// a leftover constant means the caller wired a known-inconsistent
    /// identity and is a logic error, not a solvable row.
    void add_zero(const LinExpr& e) {
        if (e.constant() != 0)
            throw std::logic_error("inhomogeneous residual row (nonzero constant)");
        if (e.terms().empty()) return;
        ensure_priority();
        Row r;
        r.reserve(e.terms().size());
        Int lcm = 1;
        for (const auto& [id, c] : e.terms()) {
            Int den = rat_den(c);
            Int g = boost::multiprecision::gcd(lcm, den);
            lcm = (lcm / g) * den;
        }
        for (const auto& [id, c] : e.terms()) {
            Int v = rat_num(c) * (lcm / rat_den(c));
            r.emplace_back(priority_[id], v);
        }
        std::sort(r.begin(), r.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        ++rows_seen_;
        eliminate(std::move(r));
    }

    /// Impose that every coefficient of a symbolic polynomial vanishes.
    void add_poly_zero(const UPoly& p) {
        for (const auto& [mo, le] : p.terms()) add_zero(le);
    }

    long rows_seen() const { return rows_seen_; }
    long rank() const { return static_cast<long>(pivots_.size()); }

    /// True when the dense assignment (indexed by unknown id) satisfies the
    /// system.  Echelon rows span the same row space as everything added.
    bool in_nullspace(const std::vector<Rat>& x) const {
        for (const auto& [lead, row] : pivots_) {
            Rat acc(0);
            for (const auto& [p, v] : row) acc += Rat(v) * x.at(inv_priority_[p]);
            if (acc != 0) return false;
        }
        return true;
    }

    /// Solve: basis of the nullspace projected onto the interior columns
    /// (all columns when no interior was declared).
    SolutionSpace solve() const {
        ensure_priority();
        SolutionSpace out;
        out.system_rank = rank();
        out.ambient_nullity = unknown_count() - rank();

        int n = unknown_count();
        int nb = n - static_cast<int>(active_cols_.size());
        // Echelon rows supported entirely on interior columns.
        std::vector<const Row*> inner_rows;
        for (const auto& [lead, row] : pivots_)
            if (lead >= nb) inner_rows.push_back(&row);

        for (int p = nb; p < n; ++p) {
            out.cols.push_back(inv_priority_[p]);
            out.labels.push_back(labels_[inv_priority_[p]]);
        }
        auto local = [&](int p) { return p - nb; };

        for (int f = nb; f < n; ++f) {
            if (pivots_.count(f)) continue; // pinned column
            std::vector<Rat> x(active_cols_.size(), Rat(0));
            x[local(f)] = Rat(1);
            for (auto it = inner_rows.rbegin(); it != inner_rows.rend(); ++it) {
                const Row& row = **it;
                int lead = row.front().first;
                if (lead > f) continue; // involves only later free/pinned cols set to 0
                Rat acc(0);
                for (std::size_t k = 1; k < row.size(); ++k)
                    acc += Rat(row[k].second) * x[local(row[k].first)];
                x[local(lead)] = -acc / Rat(row.front().second);
            }
            out.basis.push_back(std::move(x));
        }
        return out;
    }

private:
    using Row = std::vector<std::pair<int, Int>>; // (priority, coeff), sorted

    bool rows_added_ewhere() const { return rows_seen_ != 0; }

    void ensure_priority() const {
        if (!priority_.empty()) return;
        int n = unknown_count();
        priority_.assign(n, -1);
        inv_priority_.assign(n, -1);
        std::vector<bool> keep(n, false);
        if (interior_.empty()) {
            for (int i = 0; i < n; ++i) keep[i] = true;
        } else {
            for (int id : interior_) keep.at(id) = true;
        }
        int next = 0;
        for (int i = 0; i < n; ++i)
            if (!keep[i]) { priority_[i] = next; inv_priority_[next] = i; ++next; }
        int nb = next;
        for (int i = 0; i < n; ++i)
            if (keep[i]) { priority_[i] = next; inv_priority_[next] = i; ++next; }
        active_cols_.clear();
        for (int p = nb; p < n; ++p) active_cols_.push_back(inv_priority_[p]);
    }

    static void normalize(Row& r) {
        if (r.empty()) return;
        Int g = 0;
        for (const auto& [p, v] : r) g = boost::multiprecision::gcd(g, v);
        if (g == 0) { r.clear(); return; }
        if (r.front().second < 0) g = -g;
        if (g != 1)
            for (auto& [p, v] : r) v /= g;
    }

    /// r <- a*r + b*s, merging sorted rows.
    static Row axpy(const Row& r, const Int& a, const Row& s, const Int& b) {
        Row out;
        out.reserve(r.size() + s.size());
        std::size_t i = 0, j = 0;
        while (i < r.size() || j < s.size()) {
            if (j == s.size() || (i < r.size() && r[i].first < s[j].first)) {
                Int v = r[i].second * a;
                if (v != 0) out.emplace_back(r[i].first, std::move(v));
                ++i;
            } else if (i == r.size() || s[j].first < r[i].first) {
                Int v = s[j].second * b;
                if (v != 0) out.emplace_back(s[j].first, std::move(v));
                ++j;
            } else {
                Int v = r[i].second * a + s[j].second * b;
                if (v != 0) out.emplace_back(r[i].first, std::move(v));
                ++i; ++j;
            }
        }
        return out;
    }

    void eliminate(Row r) {
        normalize(r);
        while (!r.empty()) {
            int lead = r.front().first;
            auto it = pivots_.find(lead);
            if (it == pivots_.end()) {
                pivots_.emplace(lead, std::move(r));
                return;
            }
            const Row& p = it->second;
            Int rv = r.front().second, pv = p.front().second;
            Int g = boost::multiprecision::gcd(rv, pv);
            r = axpy(r, pv / g, p, -(rv / g));
            normalize(r);
        }
    }

    std::map<std::string, int> ids_;
    std::vector<std::string> labels_;
    std::vector<int> interior_;
    mutable std::vector<int> priority_, inv_priority_;
    mutable std::vector<int> active_cols_;
    std::map<int, Row> pivots_;
    long rows_seen_ = 0;
};

/// Dense rational row space for small rank/quotient computations over an
/// explicit coordinate set.
class RowSpace {
public:
    explicit RowSpace(std::size_t ncols) : ncols_(ncols) {}

    /// Returns true when the vector enlarged the span.
    bool insert(std::vector<Rat> v) {
        if (v.size() != ncols_) throw std::logic_error("RowSpace width mismatch");
        for (const auto& [lead, row] : rows_) {
            if (v[lead] == 0) continue;
            Rat f = v[lead];
            for (std::size_t k = 0; k < ncols_; ++k) v[k] -= f * row[k];
        }
        std::size_t lead = ncols_;
        for (std::size_t k = 0; k < ncols_; ++k)
            if (v[k] != 0) { lead = k; break; }
        if (lead == ncols_) return false;
        Rat f = v[lead];
        for (std::size_t k = 0; k < ncols_; ++k) v[k] /= f;
        rows_.emplace(lead, std::move(v));
        return true;
    }

    long rank() const { return static_cast<long>(rows_.size()); }

    bool contains(std::vector<Rat> v) const {
        RowSpace probe(*this);
        return !probe.insert(std::move(v));
    }

private:
    std::size_t ncols_;
    std::map<std::size_t, std::vector<Rat>> rows_; // lead column -> reduced row
};

} // namespace loopw
