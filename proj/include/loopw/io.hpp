#pragma once

// JSON serialization for every value the command-line tool reads or writes.
//
// All numbers that are mathematically rational travel as exact "p/q"
// strings (integers print without the "/q" part); window sizes, indices,
// and exponents are plain JSON integers.  Serialization order is always
// the canonical container order of the underlying value (term order for
// polynomials, generator order for combinations), so a value serializes to
// exactly one byte sequence and reports are reproducible.
//
// File formats:
//
//   Polynomial      [ {"coeff": "p/q", "d": int, "l": int, "m": int}, ... ]
//                   sorted by (d, l, m); the zero polynomial is [].
//
//   Generator       {"family": "L"|"I", "index": int}
//
//   Combination     [ {"generator": {...}, "poly": [...]}, ... ]
//                   (a finite sum of polynomial multiples of generators)
//
//   Bracket table   {"generators": [{"family", "index", "degree"}, ...],
//                    "brackets":   [{"left", "right", "value"}, ...]}
//                   Pairs absent from the list resolve by skew symmetry
//                   from their transpose when that is present, and to zero
//                   otherwise.  The table window is the degree range.
//
//   Cocycle family  {"A": [{"m": int, "value": "p/q"}, ...], ...}
//                   with slots A, Ap (both on the (L,L) block), B, Bp,
//                   Bpp, Bppp (the (L,I) block), C, Cp (the (I,I) block);
//                   absent slots are zero.
//
//   Report          {"command", "config", "verdicts", "dimensions",
//                    "bases", "notes", "exit"} — one envelope for every
//                   subcommand; the inner objects are command-specific but
//                   field order is fixed, so identical runs emit identical
//                   bytes.

#include "central_ext.hpp"
#include "conformal.hpp"
#include "linear.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace loopw {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Scalars.

inline json rat_to_json(const Rat& r) { return rat_str(r); }

inline Rat rat_from_json(const json& j) {
    if (j.is_number_integer()) return Rat(static_cast<long long>(j.get<long long>()));
    if (j.is_string()) return rat_parse(j.get<std::string>());
    throw std::invalid_argument("expected a rational literal, got " + j.dump());
}

// ---------------------------------------------------------------------------
// Polynomials.

inline json poly_to_json(const Poly& p) {
    json out = json::array();
    for (const auto& [mo, c] : p.terms()) {
        json t;
        t["coeff"] = rat_str(c);
        t["d"] = mo.d;
        t["l"] = mo.l;
        t["m"] = mo.m;
        out.push_back(std::move(t));
    }
    return out;
}

inline Poly poly_from_json(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("polynomial must be an array of terms");
    Poly out;
    for (const auto& t : j) {
        Monomial mo{t.at("d").get<int>(), t.at("l").get<int>(), t.at("m").get<int>()};
        out += Poly::term(mo, rat_from_json(t.at("coeff")));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Generators and combinations.

inline json gen_to_json(const GeneratorId& g) {
    json out;
    out["family"] = family_name(g.family);
    out["index"] = g.index;
    return out;
}

inline GeneratorId gen_from_json(const json& j) {
    std::string fam = j.at("family").get<std::string>();
    if (fam != "L" && fam != "I")
        throw std::invalid_argument("unknown generator family: " + fam);
    return {fam == "L" ? Family::L : Family::I, j.at("index").get<long>()};
}

inline json combo_to_json(const LambdaElement& e) {
    json out = json::array();
    for (const auto& [g, p] : e.parts) {
        json part;
        part["generator"] = gen_to_json(g);
        part["poly"] = poly_to_json(p);
        out.push_back(std::move(part));
    }
    return out;
}

inline LambdaElement combo_from_json(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("combination must be an array of parts");
    LambdaElement out;
    for (const auto& part : j)
        out.add_part(gen_from_json(part.at("generator")), poly_from_json(part.at("poly")));
    return out;
}

// ---------------------------------------------------------------------------
// Bracket tables.

struct TableSpec {
    std::map<GeneratorId, long> grading;
    std::map<std::pair<GeneratorId, GeneratorId>, LambdaElement> entries;
};

/// The loop W(b) brackets materialized over a symmetric index window, in
/// file form.  Only the (L, L) and (L, I) pairs are stored; the rest
/// follow by skew symmetry and centrality.
inline TableSpec clw_table_spec(const Rat& b, IndexWindow window) {
    Algebra src = Algebra::clw(b);
    TableSpec t;
    for (long i = window.lo; i <= window.hi; ++i) {
        t.grading[gen_L(i)] = i;
        t.grading[gen_I(i)] = i;
    }
    for (long i = window.lo; i <= window.hi; ++i)
        for (long j = window.lo; j <= window.hi; ++j) {
            if (!window.contains(i + j)) continue;
            t.entries[{gen_L(i), gen_L(j)}] = src.bracket_gen(gen_L(i), gen_L(j));
            t.entries[{gen_L(i), gen_I(j)}] = src.bracket_gen(gen_L(i), gen_I(j));
        }
    return t;
}

inline json table_to_json(const TableSpec& t) {
    json gens = json::array();
    for (const auto& [g, deg] : t.grading) {
        json row;
        row["family"] = family_name(g.family);
        row["index"] = g.index;
        row["degree"] = deg;
        gens.push_back(std::move(row));
    }
    json brs = json::array();
    for (const auto& [pr, val] : t.entries) {
        json row;
        row["left"] = gen_to_json(pr.first);
        row["right"] = gen_to_json(pr.second);
        row["value"] = combo_to_json(val);
        brs.push_back(std::move(row));
    }
    json out;
    out["generators"] = std::move(gens);
    out["brackets"] = std::move(brs);
    return out;
}

inline TableSpec table_from_json(const json& j) {
    TableSpec t;
    for (const auto& row : j.at("generators")) {
        GeneratorId g = gen_from_json(row);
        if (t.grading.count(g))
            throw std::invalid_argument("duplicate generator " + gen_str(g));
        t.grading[g] = row.at("degree").get<long>();
    }
    for (const auto& row : j.at("brackets")) {
        GeneratorId x = gen_from_json(row.at("left"));
        GeneratorId y = gen_from_json(row.at("right"));
        if (!t.grading.count(x) || !t.grading.count(y))
            throw std::invalid_argument("bracket references an undeclared generator");
        t.entries[{x, y}] = combo_from_json(row.at("value"));
    }
    return t;
}

/// Window = the declared degree range; brackets outside it are an error at
/// evaluation time, never a silent zero.
inline Algebra table_to_algebra(const TableSpec& t) {
    if (t.grading.empty()) throw std::invalid_argument("table declares no generators");
    long lo = t.grading.begin()->second, hi = lo;
    for (const auto& [g, deg] : t.grading) {
        lo = std::min(lo, deg);
        hi = std::max(hi, deg);
    }
    return Algebra::table(IndexWindow{lo, hi}, t.grading, t.entries);
}

// ---------------------------------------------------------------------------
// Cocycle families.

inline json cocycle_family_to_json(const CocycleFamily& fam) {
    auto slot = [](const std::map<long, Rat>& f) {
        json out = json::array();
        for (const auto& [m, v] : f) {
            if (v == 0) continue;
            json row;
            row["m"] = m;
            row["value"] = rat_str(v);
            out.push_back(std::move(row));
        }
        return out;
    };
    json out;
    out["A"] = slot(fam.A);
    out["Ap"] = slot(fam.Ap);
    out["B"] = slot(fam.B);
    out["Bp"] = slot(fam.Bp);
    out["Bpp"] = slot(fam.Bpp);
    out["Bppp"] = slot(fam.Bppp);
    out["C"] = slot(fam.C);
    out["Cp"] = slot(fam.Cp);
    return out;
}

inline CocycleFamily cocycle_family_from_json(const json& j) {
    CocycleFamily fam;
    std::map<std::string, std::map<long, Rat>*> slots{
        {"A", &fam.A},     {"Ap", &fam.Ap},     {"B", &fam.B}, {"Bp", &fam.Bp},
        {"Bpp", &fam.Bpp}, {"Bppp", &fam.Bppp}, {"C", &fam.C}, {"Cp", &fam.Cp}};
    for (const auto& [name, rows] : j.items()) {
        auto it = slots.find(name);
        if (it == slots.end())
            throw std::invalid_argument("unknown cocycle family slot: " + name);
        for (const auto& row : rows)
            (*it->second)[row.at("m").get<long>()] = rat_from_json(row.at("value"));
    }
    return fam;
}

// ---------------------------------------------------------------------------
// Solver output fragments.

inline json space_to_json(const SolutionSpace& sp) {
    json out;
    out["labels"] = sp.labels;
    json vecs = json::array();
    for (const auto& v : sp.basis) {
        json row = json::array();
        for (const auto& c : v) row.push_back(rat_str(c));
        vecs.push_back(std::move(row));
    }
    out["vectors"] = std::move(vecs);
    return out;
}

inline json axiom_report_to_json(const AxiomReport& rep) {
    json out;
    out["pass"] = rep.pass;
    json viol = json::array();
    for (const auto& v : rep.violations) {
        json row;
        row["axiom"] = v.axiom;
        row["input"] = v.input;
        row["residual"] = v.residual;
        viol.push_back(std::move(row));
    }
    out["violations"] = std::move(viol);
    return out;
}

// ---------------------------------------------------------------------------
// Report envelope.

/// Every subcommand fills the same envelope, in this field order.
inline json report_envelope(const std::string& command) {
    json out;
    out["command"] = command;
    out["config"] = json::object();
    out["verdicts"] = json::object();
    out["dimensions"] = json::object();
    out["bases"] = json::object();
    out["notes"] = json::array();
    out["exit"] = 0;
    return out;
}

inline void write_report(const std::string& path, const json& report) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open report file: " + path);
    out << report.dump(2) << "\n";
    if (!out) throw std::runtime_error("failed writing report file: " + path);
}

inline json load_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    return json::parse(in); // throws json::parse_error on malformed text
}

} // namespace loopw
