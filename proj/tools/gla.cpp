// Command-line front end: parse declaration files or builtin fixtures,
// dispatch engine computations, print canonical text or JSON, and encode
// verdicts in the exit code (0 pass, 1 fail, 2 input error).

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gla/declfile.hpp"

namespace {

using namespace gla;
using nlohmann::json;

struct Options {
    bool json_output = false;
    std::string fixture;
    std::string file;
};

Declaration load_input(const Options& opt) {
    if (!opt.fixture.empty()) return declaration_from_fixture(builtin(opt.fixture));
    if (opt.file.empty()) throw DeclError("no input: give FILE or --fixture NAME");
    return load_declaration(opt.file);
}

const Section& named_section(const Declaration& d, const std::string& name) {
    auto it = d.sections.find(name);
    if (it == d.sections.end()) throw DeclError("unknown section: " + name);
    return it->second;
}

const Form& named_form(const Declaration& d, const std::string& name) {
    auto it = d.forms.find(name);
    if (it == d.forms.end()) throw DeclError("unknown form: " + name);
    return it->second;
}

std::string form_str(const Form& w) { return w.str(); }

json form_json(const Form& w) {
    json terms = json::array();
    for (const auto& [key, coeff] : w.terms()) {
        json idx = json::array();
        for (std::size_t i : key) idx.push_back(i + 1);
        terms.push_back({{"indices", std::move(idx)}, {"expr", coeff.str()}});
    }
    return json{{"degree", w.degree()}, {"terms", std::move(terms)}};
}

json section_json(const Section& s) {
    json arr = json::array();
    for (const ScalarExpr& c : s.coeffs) arr.push_back(c.str());
    return arr;
}

void emit(const Options& opt, const json& machine, const std::string& text) {
    if (opt.json_output)
        std::cout << machine.dump(2) << "\n";
    else
        std::cout << text;
}

int cmd_validate(const Options& opt) {
    Declaration d = load_input(opt);
    ValidationReport rep = d.algebroid->validate();
    json out;
    out["verdict"] = rep.all_passed() ? "valid" : "invalid";
    out["checks"] = json::array();
    std::string text;
    for (const auto& e : rep.entries) {
        out["checks"].push_back(
            {{"name", e.name}, {"passed", e.passed}, {"witness", e.witness}});
        text += e.name + ": " + (e.passed ? "pass" : "FAIL " + e.witness) + "\n";
    }
    out["notes"] = rep.notes;
    text += std::string("verdict: ") + (rep.all_passed() ? "valid" : "invalid") + "\n";
    emit(opt, out, text);
    return rep.all_passed() ? 0 : 1;
}

int cmd_bracket(const Options& opt, const std::string& u, const std::string& v) {
    Declaration d = load_input(opt);
    Section r = d.algebroid->bracket(named_section(d, u), named_section(d, v));
    emit(opt, json{{"bracket", section_json(r)}}, "[" + u + "," + v + "] = " + section_str(r) + "\n");
    return 0;
}

int cmd_d(const Options& opt, const std::string& form) {
    Declaration d = load_input(opt);
    Form r = exterior_derivative(named_form(d, form));
    emit(opt, json{{"d", form_json(r)}}, "d " + form + " = " + form_str(r) + "\n");
    return 0;
}

int cmd_wedge(const Options& opt, const std::string& a, const std::string& b) {
    Declaration d = load_input(opt);
    Form r = wedge(named_form(d, a), named_form(d, b));
    emit(opt, json{{"wedge", form_json(r)}}, a + " ^ " + b + " = " + form_str(r) + "\n");
    return 0;
}

int cmd_ip(const Options& opt, const std::string& sec, const std::string& form) {
    Declaration d = load_input(opt);
    Form r = interior(named_section(d, sec), named_form(d, form));
    emit(opt, json{{"ip", form_json(r)}}, "i_" + sec + " " + form + " = " + form_str(r) + "\n");
    return 0;
}

int cmd_lie(const Options& opt, const std::string& sec, const std::string& form) {
    Declaration d = load_input(opt);
    Form r = lie_derivative(named_section(d, sec), named_form(d, form));
    emit(opt, json{{"lie", form_json(r)}}, "L_" + sec + " " + form + " = " + form_str(r) + "\n");
    return 0;
}

int cmd_mc_check(const Options& opt) {
    Declaration d = load_input(opt);
    MaurerCartanReport rep = maurer_cartan_check(d.algebroid);
    json out;
    out["verdict"] = rep.all_passed() ? "pass" : "fail";
    out["entries"] = json::array();
    std::string text = "Maurer-Cartan structure equations\n";
    for (const auto& e : rep.entries) {
        out["entries"].push_back({{"label", e.label},
                                  {"item", e.item},
                                  {"passed", e.passed},
                                  {"witness", e.witness}});
        text += e.label + " " + e.item + ": " + (e.passed ? "pass" : "FAIL " + e.witness) + "\n";
    }
    text += std::string("verdict: ") + (rep.all_passed() ? "pass" : "fail") + "\n";
    emit(opt, out, text);
    return rep.all_passed() ? 0 : 1;
}

Morphism load_morphism(const std::string& path, const Declaration& target) {
    std::ifstream in(path);
    if (!in) throw DeclError("cannot read map file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DeclError(std::string("invalid JSON in map file: ") + e.what());
    }
    if (!j.contains("source")) throw DeclError("map file needs a 'source' declaration");
    Declaration src = parse_declaration(j["source"]);
    auto scs = src.algebroid->base_ptr();
    auto tcs = target.algebroid->base_ptr();
    FieldMatrix mat = FieldMatrix::zero(target.algebroid->rank(), src.algebroid->rank(), scs);
    if (!j.contains("matrix") || !j["matrix"].is_array())
        throw DeclError("map file needs a 'matrix' array");
    for (const auto& e : j["matrix"]) {
        std::size_t r = gla::detail::decl_index(e, "row", target.algebroid->rank());
        std::size_t c = gla::detail::decl_index(e, "col", src.algebroid->rank());
        mat.at(r, c) = gla::detail::decl_expr(e, "expr", scs);
    }
    auto read_map = [&](const char* key, const std::shared_ptr<const CoordinateSet>& from,
                        const std::shared_ptr<const CoordinateSet>& to) {
        if (!j.contains(key) || !j[key].is_array() || j[key].size() != to->size())
            throw DeclError(std::string("map file needs '") + key +
                            "' with one expression per target coordinate");
        std::vector<ScalarExpr> comps;
        for (const auto& e : j[key]) {
            if (!e.is_string()) throw DeclError(std::string(key) + " components must be strings");
            try {
                comps.push_back(parse_expr(e.get<std::string>(), from));
            } catch (const ParseError& pe) {
                throw DeclError(std::string("bad '") + key + "' component: " + pe.what());
            }
        }
        return SmoothMap(from, to, std::move(comps));
    };
    SmoothMap fwd = read_map("base_map", scs, tcs);
    SmoothMap inv = read_map("base_inverse", tcs, scs);
    try {
        return Morphism(src.algebroid, target.algebroid, std::move(mat), std::move(fwd),
                        std::move(inv));
    } catch (const std::invalid_argument& e) {
        throw DeclError(e.what());
    }
}

int cmd_pullback(const Options& opt, const std::string& map_file, const std::string& form) {
    Declaration d = load_input(opt);
    Morphism m = load_morphism(map_file, d);
    json out;
    std::string text;
    auto one = [&](const std::string& name, const Form& w) {
        Form r = pullback_form(m, w);
        out[name] = form_json(r);
        text += "pullback " + name + " = " + form_str(r) + "\n";
    };
    if (!form.empty()) {
        one(form, named_form(d, form));
    } else {
        if (d.forms.empty()) throw DeclError("no forms declared to pull back");
        for (const auto& [name, w] : d.forms) one(name, w);
    }
    emit(opt, out, text);
    return 0;
}

int cmd_ids_check(const Options& opt, const std::string& name, const std::string& method) {
    Declaration d = load_input(opt);
    auto it = d.ids.find(name);
    if (it == d.ids.end()) throw DeclError("unknown ids block: " + name);
    const IDS& dist = it->second;
    json out;
    std::string text;
    bool pass = true;
    auto note = [&](const InvolutivityReport& r) {
        out[r.method] = {{"involutive", r.involutive}, {"witnesses", r.witnesses}};
        text += r.method + ": " + (r.involutive ? "involutive" : "not involutive") + "\n";
        for (const auto& w : r.witnesses) text += "  " + w + "\n";
        pass = pass && r.involutive;
    };
    if (method == "bracket" || method == "all") note(involutive_bracket(dist));
    if (method == "cartan" || method == "all") note(involutive_cartan(dist));
    if (method == "eds" || method == "all") {
        EdsReport r = eds_check(dist);
        json omega = json::array();
        for (const Form& w : r.omega) omega.push_back(form_json(w));
        out["eds"] = {{"involutive", r.involutive},
                      {"consistent", r.consistent},
                      {"omega", std::move(omega)},
                      {"witnesses", r.witnesses}};
        text += std::string("eds: ") +
                (r.involutive && r.consistent ? "closed ideal" : "not an EDS") + "\n";
        for (const auto& w : r.witnesses) text += "  " + w + "\n";
        pass = pass && r.involutive && r.consistent;
    }
    out["verdict"] = pass ? "involutive" : "not involutive";
    text += std::string("verdict: ") + (pass ? "involutive" : "not involutive") + "\n";
    emit(opt, out, text);
    return pass ? 0 : 1;
}

int cmd_conn_check(const Options& opt, const std::string& name,
                   const std::vector<std::string>& identities) {
    Declaration d = load_input(opt);
    auto it = d.connections.find(name);
    if (it == d.connections.end()) throw DeclError("unknown connection: " + name);
    const Connection& c = it->second;
    json out;
    std::string text;
    bool pass = true;
    auto note = [&](const char* key, const IdentityReport& r) {
        json arr = json::array();
        for (const auto& e : r.entries) {
            arr.push_back({{"name", e.name}, {"passed", e.passed}, {"witness", e.witness}});
            if (!e.passed) text += "  FAIL " + e.name + ": " + e.witness + "\n";
        }
        out[key] = std::move(arr);
        text += std::string(key) + ": " + (r.all_passed() ? "pass" : "fail") + "\n";
        pass = pass && r.all_passed();
    };
    for (const std::string& id : identities) {
        if (id == "cartan")
            note("cartan", cartan_identities_check(c));
        else if (id == "bianchi")
            note("bianchi", bianchi_identities_check(c));
        else
            throw DeclError("unknown identity set: " + id);
    }
    out["verdict"] = pass ? "pass" : "fail";
    text += std::string("verdict: ") + (pass ? "pass" : "fail") + "\n";
    emit(opt, out, text);
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact symbolic calculus on generalized Lie algebroids"};
    app.require_subcommand(1);

    Options opt;
    app.add_flag("--json", opt.json_output, "machine-readable output");

    std::string u, v, a, b, sec, form, map_file, ids_name, conn_name;
    std::string method = "all";
    std::string identities = "cartan,bianchi";

    auto add_common = [&](CLI::App* s, bool needs_file = true) {
        if (needs_file) s->add_option("file", opt.file, "declaration file");
        s->add_option("--fixture", opt.fixture, "builtin fixture instead of FILE");
        s->add_flag("--json", opt.json_output, "machine-readable output");
    };

    auto* s_validate = app.add_subcommand("validate", "check the algebroid axioms");
    add_common(s_validate);

    auto* s_bracket = app.add_subcommand("bracket", "bracket of two named sections");
    add_common(s_bracket);
    s_bracket->add_option("--u", u)->required();
    s_bracket->add_option("--v", v)->required();

    auto* s_d = app.add_subcommand("d", "exterior derivative of a named form");
    add_common(s_d);
    s_d->add_option("--form", form)->required();

    auto* s_wedge = app.add_subcommand("wedge", "wedge of two named forms");
    add_common(s_wedge);
    s_wedge->add_option("--a", a)->required();
    s_wedge->add_option("--b", b)->required();

    auto* s_ip = app.add_subcommand("ip", "interior product");
    add_common(s_ip);
    s_ip->add_option("--section", sec)->required();
    s_ip->add_option("--form", form)->required();

    auto* s_lie = app.add_subcommand("lie", "Lie derivative of a form");
    add_common(s_lie);
    s_lie->add_option("--section", sec)->required();
    s_lie->add_option("--form", form)->required();

    auto* s_mc = app.add_subcommand("mc-check", "Maurer-Cartan structure equations");
    add_common(s_mc);

    auto* s_pull = app.add_subcommand("pullback", "pull back forms along a morphism");
    add_common(s_pull);
    s_pull->add_option("--map", map_file, "morphism file")->required();
    s_pull->add_option("--form", form, "pull back one named form");

    auto* s_ids = app.add_subcommand("ids-check", "involutivity of a distribution");
    add_common(s_ids);
    s_ids->add_option("--ids", ids_name)->required();
    s_ids->add_option("--method", method)->check(CLI::IsMember({"bracket", "cartan", "eds", "all"}));

    auto* s_conn = app.add_subcommand("conn-check", "Cartan/Bianchi identities of a connection");
    add_common(s_conn);
    s_conn->add_option("--connection", conn_name)->required();
    s_conn->add_option("--identities", identities, "comma list from {cartan,bianchi}");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (s_validate->parsed()) return cmd_validate(opt);
        if (s_bracket->parsed()) return cmd_bracket(opt, u, v);
        if (s_d->parsed()) return cmd_d(opt, form);
        if (s_wedge->parsed()) return cmd_wedge(opt, a, b);
        if (s_ip->parsed()) return cmd_ip(opt, sec, form);
        if (s_lie->parsed()) return cmd_lie(opt, sec, form);
        if (s_mc->parsed()) return cmd_mc_check(opt);
        if (s_pull->parsed()) return cmd_pullback(opt, map_file, form);
        if (s_ids->parsed()) return cmd_ids_check(opt, ids_name, method);
        if (s_conn->parsed()) {
            std::vector<std::string> ids;
            std::size_t start = 0;
            while (start <= identities.size()) {
                std::size_t comma = identities.find(',', start);
                if (comma == std::string::npos) comma = identities.size();
                if (comma > start) ids.push_back(identities.substr(start, comma - start));
                start = comma + 1;
            }
            return cmd_conn_check(opt, conn_name, ids);
        }
    } catch (const gla::DeclError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
