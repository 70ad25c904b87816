// Command-line frontend: loads JSON session specs, runs the context/
// daseinisation/truth/Heyting/Kochen-Specker computations and emits JSON and
// DOT reports with stable formatting.
//
// Exit codes are part of the scripting interface:
//   0  success
//   2  parse error (bad JSON, bad schema, bad flags)
//   3  invariant violation (non-Hermitian matrix, broken partition, ...)
//   4  unknown name
//   10 no global section / no coloring exists

#include "bohr/bohr.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using bohr::json;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitName = 4;
constexpr int kExitNoSection = 10;

struct Options {
    std::string in_path;
    std::string witness_path;
    std::string json_path;
    std::string dot_path;
    std::string backend; // empty: take it from the spec file
    double epsilon = 1e-9;
    int parallel = 1;

    std::string proj_name;
    std::string context_name;
    std::string obs_name;
    std::string state_name;
    std::string prop_name;
    std::string variance = "contra";
    std::string op;
    std::string lhs;
    std::string rhs;
};

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw bohr::parse_error("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw bohr::parse_error("JSON parse error in " + path + ": " + e.what());
    }
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw bohr::parse_error("cannot write file: " + path);
    out << text;
}

void emit_json(const Options& opt, const json& j) {
    std::string text = j.dump(2) + "\n";
    if (!opt.json_path.empty())
        write_text(opt.json_path, text);
    else
        std::cout << text;
}

bohr::Variance parse_variance(const std::string& v) {
    if (v == "contra") return bohr::Variance::contra;
    if (v == "co") return bohr::Variance::co;
    throw bohr::parse_error("variance must be contra or co");
}

template <class B>
json subobject_to_json(const bohr::Subobject<B>& s) {
    json sections = json::object();
    const bohr::ContextPoset<B>& p = *s.poset;
    for (int i = 0; i < p.size(); ++i) {
        json atoms = json::array();
        for (int a = 0; a < p.context(i).size(); ++a)
            if (s.masks[size_t(i)] & (1u << a)) atoms.push_back(a);
        sections[p.name(i)] = std::move(atoms);
    }
    return json{{"variance", bohr::variance_name(s.variance)}, {"sections", std::move(sections)}};
}

template <class B>
int run_contexts(const json& spec_json, const Options& opt) {
    auto spec = bohr::session_from_json<B>(spec_json);
    bohr::ContextPoset<B> poset = spec.build_poset();

    json out;
    out["backend"] = B::name();
    out["dimension"] = spec.dimension;
    json ctxs = json::array();
    for (int i = 0; i < poset.size(); ++i) {
        json c;
        c["name"] = poset.name(i);
        c["atom_count"] = poset.context(i).size();
        json atoms = json::array();
        for (const auto& a : poset.context(i).atoms()) atoms.push_back(bohr::matrix_to_json<B>(a));
        c["atoms"] = std::move(atoms);
        ctxs.push_back(std::move(c));
    }
    out["contexts"] = std::move(ctxs);
    json order = json::array();
    for (int i = 0; i < poset.size(); ++i)
        for (int j = 0; j < poset.size(); ++j)
            if (i != j && poset.leq(i, j))
                order.push_back(json::array({poset.name(i), poset.name(j)}));
    out["order"] = std::move(order);

    emit_json(opt, out);
    if (!opt.dot_path.empty()) write_text(opt.dot_path, bohr::hasse_dot(poset));
    return kExitOk;
}

template <class B>
int run_dasein(const json& spec_json, const Options& opt) {
    auto spec = bohr::session_from_json<B>(spec_json);
    bohr::ContextPoset<B> poset = spec.build_poset();

    if (!opt.obs_name.empty()) {
        const bohr::Matrix<B>& a = spec.observable(opt.obs_name);
        json rows = json::array();
        for (int i = 0; i < poset.size(); ++i) {
            const bohr::Context<B>& ctx = poset.context(i);
            for (int atom = 0; atom < ctx.size(); ++atom) {
                bohr::Character<B> ch{&ctx, atom};
                bohr::Interval<B> iv = bohr::interval_value(a, ctx, ch);
                rows.push_back(json{{"observable", opt.obs_name},
                                    {"context", poset.name(i)},
                                    {"character", atom},
                                    {"interval", json::array({bohr::real_to_json<B>(iv.lo),
                                                              bohr::real_to_json<B>(iv.hi)})}});
            }
        }
        emit_json(opt, rows);
        return kExitOk;
    }

    bohr::Matrix<B> p = spec.resolve_proposition(opt.proj_name);
    auto idx = poset.index_of(opt.context_name);
    if (!idx) throw bohr::unknown_name_error("unknown context: " + opt.context_name);
    const bohr::Context<B>& ctx = poset.context(*idx);
    json out{{"projection", opt.proj_name},
             {"context", opt.context_name},
             {"outer", bohr::matrix_to_json<B>(bohr::outer_proj(p, ctx))},
             {"inner", bohr::matrix_to_json<B>(bohr::inner_proj(p, ctx))}};
    emit_json(opt, out);
    return kExitOk;
}

template <class B>
int run_truth(const json& spec_json, const Options& opt) {
    auto spec = bohr::session_from_json<B>(spec_json);
    bohr::ContextPoset<B> poset = spec.build_poset();
    const bohr::State<B>& state = spec.state(opt.state_name);
    bohr::Matrix<B> p = spec.resolve_proposition(opt.prop_name);
    bohr::Variance variance = parse_variance(opt.variance);

    bohr::Subobject<B> embedded = variance == bohr::Variance::contra
                                      ? bohr::embed_outer(p, poset)
                                      : bohr::embed_inner(p, poset);
    bohr::MeasureReport<B> report = variance == bohr::Variance::contra
                                        ? bohr::measure_contra(state, embedded)
                                        : bohr::measure_covar(state, embedded);
    bohr::TruthValue<B> tv = bohr::dichotomy(report, variance);

    json members = json::array();
    for (int i = 0; i < poset.size(); ++i)
        if (tv.members[size_t(i)]) members.push_back(poset.name(i));
    json measure = json::object();
    for (int i = 0; i < poset.size(); ++i)
        measure[poset.name(i)] = bohr::real_to_json<B>(report.values[size_t(i)]);
    json out{{"state", opt.state_name},
             {"projection", opt.prop_name},
             {"variance", bohr::variance_name(variance)},
             {"members", std::move(members)},
             {"measure", std::move(measure)}};
    emit_json(opt, out);
    if (!opt.dot_path.empty()) write_text(opt.dot_path, bohr::overlay_dot(poset, embedded));
    return kExitOk;
}

template <class B>
int run_heyting(const json& spec_json, const Options& opt) {
    auto spec = bohr::session_from_json<B>(spec_json);
    bohr::ContextPoset<B> poset = spec.build_poset();
    bohr::Variance variance = parse_variance(opt.variance);

    auto embed = [&](const std::string& name) {
        bohr::Matrix<B> p = spec.resolve_proposition(name);
        return variance == bohr::Variance::contra ? bohr::embed_outer(p, poset)
                                                  : bohr::embed_inner(p, poset);
    };

    if (opt.op != "meet" && opt.op != "join" && opt.op != "implies" && opt.op != "not")
        throw bohr::parse_error("op must be one of meet|join|implies|not");
    if (opt.op != "not" && opt.rhs.empty())
        throw bohr::parse_error("op " + opt.op + " needs --rhs");

    bohr::Subobject<B> lhs = embed(opt.lhs);
    bohr::Subobject<B> result = lhs;
    if (opt.op == "meet")
        result = bohr::sub_meet(lhs, embed(opt.rhs));
    else if (opt.op == "join")
        result = bohr::sub_join(lhs, embed(opt.rhs));
    else if (opt.op == "implies")
        result = bohr::heyting_implies(lhs, embed(opt.rhs));
    else
        result = bohr::heyting_not(lhs);

    emit_json(opt, subobject_to_json<B>(result));
    if (!opt.dot_path.empty()) write_text(opt.dot_path, bohr::overlay_dot(poset, result));
    return kExitOk;
}

template <class B>
int run_ks(const std::optional<json>& spec_json, const Options& opt) {
    if (!opt.witness_path.empty()) {
        bohr::WitnessSpec<B> witness = bohr::witness_from_json<B>(load_json_file(opt.witness_path));
        bohr::ColoringCertificate cert =
            bohr::verify_coloring_witness<B>(witness.dimension, witness.bases, opt.parallel);
        json section = json(nullptr);
        if (cert.choice) {
            json choices = json::object();
            for (size_t b = 0; b < cert.choice->size(); ++b)
                choices[std::to_string(b)] = witness.basis_names[b][size_t((*cert.choice)[b])];
            section = std::move(choices);
        }
        json out{{"colorable", !cert.uncolorable},
                 {"section", std::move(section)},
                 {"nodes_explored", cert.nodes_explored}};
        emit_json(opt, out);
        return cert.uncolorable ? kExitNoSection : kExitOk;
    }

    if (!spec_json) throw bohr::parse_error("ks needs --in or --witness");
    auto spec = bohr::session_from_json<B>(*spec_json);
    bohr::ContextPoset<B> poset = spec.build_poset();
    bohr::SectionSearchResult res = bohr::find_global_section(poset);
    json section = json(nullptr);
    if (res.section) {
        json assignment = json::object();
        for (int i = 0; i < poset.size(); ++i)
            assignment[poset.name(i)] = res.section->atoms[size_t(i)];
        section = std::move(assignment);
    }
    json out{{"colorable", bool(res.section)},
             {"section", std::move(section)},
             {"nodes_explored", res.nodes_explored}};
    emit_json(opt, out);
    if (!opt.dot_path.empty()) write_text(opt.dot_path, bohr::hasse_dot(poset));
    return res.section ? kExitOk : kExitNoSection;
}

int dispatch(const std::string& command, const Options& opt) {
    std::optional<json> spec_json;
    if (!opt.in_path.empty()) spec_json = load_json_file(opt.in_path);

    std::string backend = opt.backend;
    if (backend.empty()) {
        if (spec_json)
            backend = bohr::backend_of_session(*spec_json);
        else
            backend = "rational"; // witness-only runs default to exact arithmetic
    }
    if (backend != "rational" && backend != "float")
        throw bohr::parse_error("backend must be rational or float");
    bohr::FloatBackend::epsilon = opt.epsilon;

    auto with_backend = [&](auto run) {
        if (backend == "rational")
            return run.template operator()<bohr::RationalBackend>();
        return run.template operator()<bohr::FloatBackend>();
    };

    if (command == "ks")
        return with_backend([&]<class B>() { return run_ks<B>(spec_json, opt); });

    if (!spec_json) throw bohr::parse_error(command + " needs --in FILE");
    if (command == "contexts")
        return with_backend([&]<class B>() { return run_contexts<B>(*spec_json, opt); });
    if (command == "dasein")
        return with_backend([&]<class B>() { return run_dasein<B>(*spec_json, opt); });
    if (command == "truth")
        return with_backend([&]<class B>() { return run_truth<B>(*spec_json, opt); });
    if (command == "heyting")
        return with_backend([&]<class B>() { return run_heyting<B>(*spec_json, opt); });
    throw bohr::parse_error("unknown command: " + command);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-dimensional contexts, daseinisation, topos truth values and "
                 "Kochen-Specker checks over matrix *-algebras"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--in", opt.in_path, "session spec JSON file")->check(CLI::ExistingFile);
    app.add_option("--backend", opt.backend, "numeric backend: rational|float");
    app.add_option("--epsilon", opt.epsilon, "float-backend tolerance (default 1e-9)")
        ->check(CLI::PositiveNumber);
    app.add_option("--json", opt.json_path, "write the JSON report to this path");
    app.add_option("--dot", opt.dot_path, "write a DOT diagram to this path");
    app.add_option("--parallel", opt.parallel, "worker threads for the KS search")
        ->check(CLI::PositiveNumber);

    CLI::App* contexts = app.add_subcommand("contexts", "build the intersection-closed poset");
    CLI::App* dasein = app.add_subcommand("dasein", "outer/inner approximations and intervals");
    dasein->add_option("--proj", opt.proj_name, "proposition name");
    dasein->add_option("--context", opt.context_name, "context name");
    dasein->add_option("--obs", opt.obs_name, "observable name (interval table)");
    CLI::App* truth = app.add_subcommand("truth", "state/proposition truth pairing");
    truth->add_option("--state", opt.state_name, "state name")->required();
    truth->add_option("--prop", opt.prop_name, "proposition name")->required();
    truth->add_option("--variance", opt.variance, "contra|co");
    CLI::App* heyting = app.add_subcommand("heyting", "lattice/Heyting operations on propositions");
    heyting->add_option("--variance", opt.variance, "contra|co");
    heyting->add_option("--op", opt.op, "meet|join|implies|not")->required();
    heyting->add_option("--lhs", opt.lhs, "left proposition name")->required();
    heyting->add_option("--rhs", opt.rhs, "right proposition name");
    CLI::App* ks = app.add_subcommand("ks", "global-section / coloring search");
    ks->add_option("--witness", opt.witness_path, "KS witness JSON file")
        ->check(CLI::ExistingFile);
    (void)contexts;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitParse;
    }

    std::string command;
    if (contexts->parsed()) command = "contexts";
    if (dasein->parsed()) command = "dasein";
    if (truth->parsed()) command = "truth";
    if (heyting->parsed()) command = "heyting";
    if (ks->parsed()) command = "ks";

    try {
        if (dasein->parsed() && opt.obs_name.empty() &&
            (opt.proj_name.empty() || opt.context_name.empty()))
            throw bohr::parse_error("dasein needs --obs NAME or --proj NAME --context NAME");
        return dispatch(command, opt);
    } catch (const bohr::unknown_name_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitName;
    } catch (const bohr::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const bohr::invariant_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const bohr::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
