#pragma once

// JSON declaration files: parse and export algebroids together with named
// sections, forms, distributions and connections. Indices are 1-based in the
// file format; structure entries are stored for alpha < beta and completed
// antisymmetrically unless the file overrides the mirror entry explicitly.

#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "gla/connection.hpp"
#include "gla/fixtures.hpp"
#include "gla/ids.hpp"
#include "gla/parse.hpp"

namespace gla {

struct DeclError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Declaration {
    AlgebroidPtr algebroid;
    std::optional<SmoothMap> h;
    std::map<std::string, Section> sections;
    std::map<std::string, Form> forms;
    std::map<std::string, IDS> ids;
    std::map<std::string, Connection> connections;
};

namespace detail {

inline std::size_t decl_index(const nlohmann::json& j, const char* key, std::size_t limit) {
    if (!j.contains(key) || !j[key].is_number_integer())
        throw DeclError(std::string("missing or non-integer index '") + key + "'");
    long long v = j[key].get<long long>();
    if (v < 1 || static_cast<std::size_t>(v) > limit)
        throw DeclError(std::string("index '") + key + "' out of range: " + std::to_string(v));
    return static_cast<std::size_t>(v) - 1;
}

inline ScalarExpr decl_expr(const nlohmann::json& j, const char* key,
                            const std::shared_ptr<const CoordinateSet>& cs) {
    if (!j.contains(key) || !j[key].is_string())
        throw DeclError(std::string("missing expression field '") + key + "'");
    try {
        return parse_expr(j[key].get<std::string>(), cs);
    } catch (const ParseError& e) {
        throw DeclError("bad expression \"" + j[key].get<std::string>() + "\": " + e.what());
    }
}

}  // namespace detail

inline Declaration parse_declaration(const nlohmann::json& j) {
    if (!j.is_object()) throw DeclError("declaration root must be an object");
    if (!j.contains("coordinates") || !j["coordinates"].is_array())
        throw DeclError("missing 'coordinates' array");
    std::vector<std::string> names;
    for (const auto& n : j["coordinates"]) {
        if (!n.is_string()) throw DeclError("coordinate names must be strings");
        names.push_back(n.get<std::string>());
    }
    std::shared_ptr<const CoordinateSet> cs;
    try {
        cs = std::make_shared<CoordinateSet>(std::move(names));
    } catch (const std::invalid_argument& e) {
        throw DeclError(e.what());
    }
    if (!j.contains("rank") || !j["rank"].is_number_integer() || j["rank"].get<long long>() < 1)
        throw DeclError("missing or invalid 'rank'");
    std::size_t p = j["rank"].get<std::size_t>();
    std::size_t m = cs->size();

    FieldMatrix anchor = FieldMatrix::zero(m, p, cs);
    if (j.contains("anchor")) {
        if (!j["anchor"].is_array()) throw DeclError("'anchor' must be an array");
        for (const auto& e : j["anchor"]) {
            std::size_t i = detail::decl_index(e, "i", m);
            std::size_t al = detail::decl_index(e, "alpha", p);
            anchor.at(i, al) = detail::decl_expr(e, "expr", cs);
        }
    }

    ScalarExpr zero = ScalarExpr::constant(cs, Rational(0));
    std::vector table(p, std::vector(p, std::vector<ScalarExpr>(p, zero)));
    std::vector explicit_entry(p, std::vector(p, std::vector<bool>(p, false)));
    if (j.contains("structure")) {
        if (!j["structure"].is_array()) throw DeclError("'structure' must be an array");
        for (const auto& e : j["structure"]) {
            std::size_t g = detail::decl_index(e, "gamma", p);
            std::size_t al = detail::decl_index(e, "alpha", p);
            std::size_t be = detail::decl_index(e, "beta", p);
            if (al == be) throw DeclError("structure entry with alpha = beta");
            table[g][al][be] = detail::decl_expr(e, "expr", cs);
            explicit_entry[g][al][be] = true;
        }
    }
    // Antisymmetric completion of entries whose mirror was not given.
    for (std::size_t g = 0; g < p; ++g)
        for (std::size_t al = 0; al < p; ++al)
            for (std::size_t be = 0; be < p; ++be)
                if (explicit_entry[g][al][be] && !explicit_entry[g][be][al])
                    table[g][be][al] = -table[g][al][be];

    Declaration d;
    Presentation pres = Presentation::Pullback;
    std::optional<SmoothMap> h;
    if (j.contains("h")) {
        if (!j["h"].is_array() || j["h"].size() != m)
            throw DeclError("'h' must list one expression per coordinate");
        std::vector<ScalarExpr> comps;
        for (const auto& e : j["h"]) {
            if (!e.is_string()) throw DeclError("'h' components must be expression strings");
            try {
                comps.push_back(parse_expr(e.get<std::string>(), cs));
            } catch (const ParseError& pe) {
                throw DeclError(std::string("bad 'h' component: ") + pe.what());
            }
        }
        h.emplace(cs, cs, std::move(comps));
        pres = Presentation::BaseN;
    }
    d.algebroid = std::make_shared<Algebroid>(cs, p, std::move(anchor), std::move(table), pres);
    d.h = std::move(h);

    if (j.contains("sections")) {
        for (const auto& [name, arr] : j["sections"].items()) {
            if (!arr.is_array() || arr.size() != p)
                throw DeclError("section '" + name + "' must list rank-many expressions");
            std::vector<ScalarExpr> coeffs;
            for (const auto& e : arr) {
                if (!e.is_string()) throw DeclError("section components must be strings");
                try {
                    coeffs.push_back(parse_expr(e.get<std::string>(), cs));
                } catch (const ParseError& pe) {
                    throw DeclError("section '" + name + "': " + pe.what());
                }
            }
            d.sections.emplace(name, d.algebroid->section(std::move(coeffs)));
        }
    }
    if (j.contains("forms")) {
        for (const auto& [name, obj] : j["forms"].items()) {
            if (!obj.is_object() || !obj.contains("degree") ||
                !obj["degree"].is_number_integer())
                throw DeclError("form '" + name + "' needs an integer 'degree'");
            std::size_t q = obj["degree"].get<std::size_t>();
            Form w(d.algebroid, q);
            if (obj.contains("terms")) {
                for (const auto& t : obj["terms"]) {
                    if (!t.contains("indices") || !t["indices"].is_array() ||
                        t["indices"].size() != q)
                        throw DeclError("form '" + name + "': bad term indices");
                    FormKey key;
                    for (const auto& i : t["indices"]) {
                        long long v = i.get<long long>();
                        if (v < 1 || static_cast<std::size_t>(v) > p)
                            throw DeclError("form '" + name + "': index out of range");
                        key.push_back(static_cast<std::size_t>(v) - 1);
                    }
                    w.add_term(std::move(key), detail::decl_expr(t, "expr", cs));
                }
            }
            d.forms.emplace(name, std::move(w));
        }
    }
    if (j.contains("ids")) {
        for (const auto& [name, obj] : j["ids"].items()) {
            if (!obj.is_object() || !obj.contains("generators") ||
                !obj["generators"].is_array())
                throw DeclError("ids '" + name + "' needs a 'generators' array");
            IDS dist{d.algebroid, {}};
            for (const auto& gen : obj["generators"]) {
                if (!gen.is_array() || gen.size() != p)
                    throw DeclError("ids '" + name + "': generator must list rank-many exprs");
                std::vector<ScalarExpr> coeffs;
                for (const auto& e : gen) {
                    try {
                        coeffs.push_back(parse_expr(e.get<std::string>(), cs));
                    } catch (const ParseError& pe) {
                        throw DeclError("ids '" + name + "': " + pe.what());
                    }
                }
                dist.generators.push_back(d.algebroid->section(std::move(coeffs)));
            }
            d.ids.emplace(name, std::move(dist));
        }
    }
    if (j.contains("connections")) {
        for (const auto& [name, arr] : j["connections"].items()) {
            if (!arr.is_array())
                throw DeclError("connection '" + name + "' must be an entry array");
            Connection c = Connection::zero(d.algebroid);
            for (const auto& e : arr) {
                std::size_t a = detail::decl_index(e, "a", p);
                std::size_t b = detail::decl_index(e, "b", p);
                std::size_t al = detail::decl_index(e, "alpha", p);
                c.gamma[a][b][al] = detail::decl_expr(e, "expr", cs);
            }
            d.connections.emplace(name, std::move(c));
        }
    }
    return d;
}

inline Declaration load_declaration(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DeclError("cannot read file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DeclError("invalid JSON in " + path + ": " + e.what());
    }
    return parse_declaration(j);
}

inline nlohmann::json export_declaration(const Declaration& d) {
    const AlgebroidPtr& a = d.algebroid;
    std::size_t p = a->rank(), m = a->dim();
    nlohmann::json j;
    j["coordinates"] = a->base().names();
    j["rank"] = p;
    nlohmann::json anchor = nlohmann::json::array();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t al = 0; al < p; ++al)
            if (!a->anchor().at(i, al).is_zero())
                anchor.push_back({{"i", i + 1}, {"alpha", al + 1},
                                  {"expr", a->anchor().at(i, al).str()}});
    j["anchor"] = std::move(anchor);
    nlohmann::json structure = nlohmann::json::array();
    for (std::size_t g = 0; g < p; ++g)
        for (std::size_t al = 0; al < p; ++al)
            for (std::size_t be = al + 1; be < p; ++be)
                if (!a->structure(g, al, be).is_zero())
                    structure.push_back({{"gamma", g + 1}, {"alpha", al + 1}, {"beta", be + 1},
                                         {"expr", a->structure(g, al, be).str()}});
    j["structure"] = std::move(structure);
    if (d.h) {
        nlohmann::json h = nlohmann::json::array();
        for (const ScalarExpr& c : d.h->components) h.push_back(c.str());
        j["h"] = std::move(h);
    }
    if (!d.sections.empty()) {
        nlohmann::json sec;
        for (const auto& [name, s] : d.sections) {
            nlohmann::json arr = nlohmann::json::array();
            for (const ScalarExpr& c : s.coeffs) arr.push_back(c.str());
            sec[name] = std::move(arr);
        }
        j["sections"] = std::move(sec);
    }
    if (!d.forms.empty()) {
        nlohmann::json forms;
        for (const auto& [name, w] : d.forms) {
            nlohmann::json obj;
            obj["degree"] = w.degree();
            nlohmann::json terms = nlohmann::json::array();
            for (const auto& [key, coeff] : w.terms()) {
                nlohmann::json idx = nlohmann::json::array();
                for (std::size_t i : key) idx.push_back(i + 1);
                terms.push_back({{"indices", std::move(idx)}, {"expr", coeff.str()}});
            }
            obj["terms"] = std::move(terms);
            forms[name] = std::move(obj);
        }
        j["forms"] = std::move(forms);
    }
    if (!d.ids.empty()) {
        nlohmann::json ids;
        for (const auto& [name, dist] : d.ids) {
            nlohmann::json gens = nlohmann::json::array();
            for (const Section& s : dist.generators) {
                nlohmann::json arr = nlohmann::json::array();
                for (const ScalarExpr& c : s.coeffs) arr.push_back(c.str());
                gens.push_back(std::move(arr));
            }
            ids[name] = {{"generators", std::move(gens)}};
        }
        j["ids"] = std::move(ids);
    }
    if (!d.connections.empty()) {
        nlohmann::json conns;
        for (const auto& [name, c] : d.connections) {
            nlohmann::json arr = nlohmann::json::array();
            for (std::size_t ai = 0; ai < p; ++ai)
                for (std::size_t b = 0; b < p; ++b)
                    for (std::size_t al = 0; al < p; ++al)
                        if (!c.coeff(ai, b, al).is_zero())
                            arr.push_back({{"a", ai + 1}, {"b", b + 1}, {"alpha", al + 1},
                                           {"expr", c.coeff(ai, b, al).str()}});
            conns[name] = std::move(arr);
        }
        j["connections"] = std::move(conns);
    }
    return j;
}

inline Declaration declaration_from_fixture(const Fixture& f) {
    Declaration d;
    d.algebroid = f.algebroid;
    d.ids = f.ids;
    d.connections = f.connections;
    return d;
}

}  // namespace gla
