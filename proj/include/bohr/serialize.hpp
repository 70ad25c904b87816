#pragma once

#include "bohr/kscheck.hpp"
#include "bohr/states.hpp"

#include <json.hpp>

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace bohr {

using json = nlohmann::json;

namespace detail {

inline json bigint_to_json(const BigInt& v) {
    static const BigInt lo = BigInt(std::numeric_limits<std::int64_t>::min());
    static const BigInt hi = BigInt(std::numeric_limits<std::int64_t>::max());
    if (v >= lo && v <= hi) return json(v.template convert_to<std::int64_t>());
    return json(v.str());
}

inline BigInt bigint_from_json(const json& j) {
    if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
    if (j.is_string()) return BigInt(j.get<std::string>());
    throw parse_error("expected an integer (or integer string)");
}

} // namespace detail

inline json rational_to_json(const Rational& r) {
    return json::array(
        {detail::bigint_to_json(numerator(r)), detail::bigint_to_json(denominator(r))});
}

inline Rational rational_from_json(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_array() && j.size() == 2) {
        BigInt num = detail::bigint_from_json(j[0]);
        BigInt den = detail::bigint_from_json(j[1]);
        if (den == 0) throw parse_error("rational with zero denominator");
        return Rational(num, den);
    }
    throw parse_error("expected a rational as [num, den] or an integer");
}

template <class B>
json real_to_json(const typename B::Real& v) {
    if constexpr (B::exact)
        return rational_to_json(v);
    else
        return json(v);
}

template <class B>
typename B::Real scalar_part_from_json(const json& j) {
    if constexpr (B::exact) {
        return rational_from_json(j);
    } else {
        if (j.is_number()) return j.get<double>();
        if (j.is_array() && j.size() == 2) {
            Rational r = rational_from_json(j);
            return RationalBackend::to_double(r);
        }
        throw parse_error("expected a number");
    }
}

/// Matrices travel as row arrays of [re, im] entries; the rational backend
/// writes each part as a [num, den] pair. A bare number is accepted on input
/// as a real entry.
template <class B>
json matrix_to_json(const Matrix<B>& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) {
            const auto& z = m(i, j);
            row.push_back(json::array(
                {real_to_json<B>(real(z)), real_to_json<B>(imag(z))}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

template <class B>
Matrix<B> matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw parse_error("matrix must be a nonempty array of rows");
    int rows = int(j.size());
    int cols = int(j[0].size());
    Matrix<B> m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (!j[size_t(i)].is_array() || int(j[size_t(i)].size()) != cols)
            throw parse_error("matrix rows must have equal length");
        for (int c = 0; c < cols; ++c) {
            const json& e = j[size_t(i)][size_t(c)];
            if (e.is_number()) {
                m(i, c) = typename B::Complex(scalar_part_from_json<B>(e));
            } else if (e.is_array() && e.size() == 2) {
                m(i, c) = typename B::Complex(scalar_part_from_json<B>(e[0]),
                                              scalar_part_from_json<B>(e[1]));
            } else {
                throw parse_error("matrix entry must be [re, im] or a number");
            }
        }
    }
    return m;
}

inline json outcomes_to_json(const OutcomeSet& set) {
    json parts = json::array();
    for (const RatInterval& p : set.parts()) {
        json part;
        part["lo"] = p.lo ? rational_to_json(*p.lo) : json(nullptr);
        part["hi"] = p.hi ? rational_to_json(*p.hi) : json(nullptr);
        part["lo_open"] = p.lo_open;
        part["hi_open"] = p.hi_open;
        parts.push_back(std::move(part));
    }
    return parts;
}

inline OutcomeSet outcomes_from_json(const json& j) {
    if (!j.is_array()) throw parse_error("outcome set must be an array of intervals");
    std::vector<RatInterval> parts;
    for (const json& e : j) {
        RatInterval p;
        if (!e.contains("lo") || !e.contains("hi"))
            throw parse_error("outcome interval needs lo and hi");
        if (!e["lo"].is_null()) p.lo = rational_from_json(e["lo"]);
        if (!e["hi"].is_null()) p.hi = rational_from_json(e["hi"]);
        p.lo_open = e.value("lo_open", false) || !p.lo;
        p.hi_open = e.value("hi_open", false) || !p.hi;
        parts.push_back(std::move(p));
    }
    return OutcomeSet(std::move(parts));
}

/// A named proposition: either a literal projection or an (observable,
/// outcome set) pair resolved against the session's observables.
template <class B>
struct PropositionSpec {
    std::optional<Matrix<B>> projection;
    std::string observable;
    OutcomeSet outcomes;
};

template <class B>
struct SessionSpec {
    int dimension = 0;
    std::vector<std::pair<std::string, Context<B>>> contexts;
    std::vector<std::pair<std::string, Matrix<B>>> observables;
    std::vector<std::pair<std::string, State<B>>> states;
    std::vector<std::pair<std::string, PropositionSpec<B>>> propositions;

    ContextPoset<B> build_poset() const { return ContextPoset<B>::build(dimension, contexts); }

    const Matrix<B>& observable(const std::string& name) const {
        for (const auto& [n, m] : observables)
            if (n == name) return m;
        throw unknown_name_error("unknown observable: " + name);
    }
    const State<B>& state(const std::string& name) const {
        for (const auto& [n, s] : states)
            if (n == name) return s;
        throw unknown_name_error("unknown state: " + name);
    }
    const PropositionSpec<B>& proposition(const std::string& name) const {
        for (const auto& [n, p] : propositions)
            if (n == name) return p;
        throw unknown_name_error("unknown proposition: " + name);
    }

    /// The projection a named proposition denotes (resolving observable /
    /// outcome pairs through the spectral decomposition).
    Matrix<B> resolve_proposition(const std::string& name) const {
        const PropositionSpec<B>& p = proposition(name);
        if (p.projection) return *p.projection;
        return spectral_projection(observable(p.observable), p.outcomes);
    }
};

inline std::string backend_of_session(const json& j) {
    std::string backend = j.value("backend", std::string("float"));
    if (backend != "rational" && backend != "float")
        throw parse_error("backend must be \"rational\" or \"float\"");
    return backend;
}

namespace detail {

inline void check_unique(std::vector<std::string> names, const char* what) {
    std::sort(names.begin(), names.end());
    for (size_t i = 1; i < names.size(); ++i)
        if (names[i] == names[i - 1])
            throw parse_error(std::string("duplicate ") + what + " name: " + names[i]);
}

} // namespace detail

template <class B>
SessionSpec<B> session_from_json(const json& j) {
    if (!j.is_object()) throw parse_error("session spec must be an object");
    if (!j.contains("dimension") || !j["dimension"].is_number_integer())
        throw parse_error("session spec needs an integer dimension");
    SessionSpec<B> spec;
    spec.dimension = j["dimension"].get<int>();
    if (spec.dimension < 1 || spec.dimension > 16)
        throw parse_error("dimension must be between 1 and 16");

    const json contexts_j = j.value("contexts", json::array());
    const json observables_j = j.value("observables", json::object());
    const json states_j = j.value("states", json::object());
    const json propositions_j = j.value("propositions", json::object());

    std::vector<std::string> context_names;
    for (const json& c : contexts_j) {
        if (!c.contains("name") || !c["name"].is_string())
            throw parse_error("context needs a name");
        std::string name = c["name"].get<std::string>();
        if (name == "trivial") throw parse_error("context name \"trivial\" is reserved");
        context_names.push_back(name);
        if (c.contains("atoms")) {
            std::vector<Matrix<B>> atoms;
            for (const json& a : c["atoms"]) atoms.push_back(matrix_from_json<B>(a));
            spec.contexts.emplace_back(name, Context<B>(spec.dimension, std::move(atoms)));
        } else if (c.contains("generators")) {
            std::vector<Matrix<B>> gens;
            for (const json& g : c["generators"]) gens.push_back(matrix_from_json<B>(g));
            spec.contexts.emplace_back(name, Context<B>::from_commuting(spec.dimension, gens));
        } else {
            throw parse_error("context " + name + " needs atoms or generators");
        }
    }
    detail::check_unique(context_names, "context");

    std::vector<std::string> obs_names;
    for (const auto& [key, value] : observables_j.items()) {
        Matrix<B> m = matrix_from_json<B>(value);
        require_hermitian(m, ("observable " + key).c_str());
        if (m.rows() != spec.dimension)
            throw dimension_mismatch_error("observable " + key + " has wrong dimension");
        obs_names.push_back(key);
        spec.observables.emplace_back(key, std::move(m));
    }
    detail::check_unique(obs_names, "observable");

    std::vector<std::string> state_names;
    for (const auto& [key, value] : states_j.items()) {
        Matrix<B> m = matrix_from_json<B>(value);
        if (m.rows() != spec.dimension)
            throw dimension_mismatch_error("state " + key + " has wrong dimension");
        state_names.push_back(key);
        spec.states.emplace_back(key, State<B>(std::move(m)));
    }
    detail::check_unique(state_names, "state");

    std::vector<std::string> prop_names;
    for (const auto& [key, value] : propositions_j.items()) {
        PropositionSpec<B> p;
        if (value.contains("projection")) {
            Matrix<B> m = matrix_from_json<B>(value["projection"]);
            require_projection(m, ("proposition " + key).c_str());
            if (m.rows() != spec.dimension)
                throw dimension_mismatch_error("proposition " + key + " has wrong dimension");
            p.projection = std::move(m);
        } else if (value.contains("observable") && value.contains("outcomes")) {
            p.observable = value["observable"].template get<std::string>();
            p.outcomes = outcomes_from_json(value["outcomes"]);
            spec.observable(p.observable); // existence check
        } else {
            throw parse_error("proposition " + key +
                              " needs a projection or an observable/outcomes pair");
        }
        prop_names.push_back(key);
        spec.propositions.emplace_back(key, std::move(p));
    }
    detail::check_unique(prop_names, "proposition");

    return spec;
}

template <class B>
json session_to_json(const SessionSpec<B>& spec) {
    json j;
    j["dimension"] = spec.dimension;
    j["backend"] = B::name();
    json contexts = json::array();
    for (const auto& [name, ctx] : spec.contexts) {
        json c;
        c["name"] = name;
        json atoms = json::array();
        for (const Matrix<B>& a : ctx.atoms()) atoms.push_back(matrix_to_json<B>(a));
        c["atoms"] = std::move(atoms);
        contexts.push_back(std::move(c));
    }
    j["contexts"] = std::move(contexts);
    json observables = json::object();
    for (const auto& [name, m] : spec.observables) observables[name] = matrix_to_json<B>(m);
    j["observables"] = std::move(observables);
    json states = json::object();
    for (const auto& [name, s] : spec.states) states[name] = matrix_to_json<B>(s.rho());
    j["states"] = std::move(states);
    json props = json::object();
    for (const auto& [name, p] : spec.propositions) {
        json e;
        if (p.projection) {
            e["projection"] = matrix_to_json<B>(*p.projection);
        } else {
            e["observable"] = p.observable;
            e["outcomes"] = outcomes_to_json(p.outcomes);
        }
        props[name] = std::move(e);
    }
    j["propositions"] = std::move(props);
    return j;
}

/// KS witness file: named vectors with rational (or float) components,
/// grouped into bases by name.
template <class B>
struct WitnessSpec {
    int dimension = 0;
    std::vector<std::string> vector_names;              // declaration order
    std::vector<std::vector<Matrix<B>>> bases;          // rank-1 projections
    std::vector<std::vector<std::string>> basis_names;  // names per basis
};

template <class B>
WitnessSpec<B> witness_from_json(const json& j) {
    if (!j.contains("dimension") || !j["dimension"].is_number_integer())
        throw parse_error("witness needs an integer dimension");
    WitnessSpec<B> w;
    w.dimension = j["dimension"].get<int>();
    if (!j.contains("vectors") || !j["vectors"].is_object())
        throw parse_error("witness needs a vectors object");

    std::vector<std::pair<std::string, Matrix<B>>> projections;
    for (const auto& [name, comps] : j["vectors"].items()) {
        if (!comps.is_array() || int(comps.size()) != w.dimension)
            throw parse_error("vector " + name + " must have dimension components");
        Matrix<B> v(w.dimension, 1);
        for (int i = 0; i < w.dimension; ++i) {
            const json& e = comps[size_t(i)];
            if (e.is_array() && e.size() == 2 && (e[0].is_array() || e[1].is_array()))
                v(i, 0) = typename B::Complex(scalar_part_from_json<B>(e[0]),
                                              scalar_part_from_json<B>(e[1]));
            else
                v(i, 0) = typename B::Complex(scalar_part_from_json<B>(e));
        }
        if (is_zero(v)) throw parse_error("vector " + name + " is zero");
        Matrix<B> outer = v * v.dagger();
        typename B::Complex nrm = (v.dagger() * v)(0, 0);
        Matrix<B> proj = (typename B::Complex(1) / nrm) * outer;
        w.vector_names.push_back(name);
        projections.emplace_back(name, std::move(proj));
    }

    if (!j.contains("bases") || !j["bases"].is_array())
        throw parse_error("witness needs a bases array");
    for (const json& basis : j["bases"]) {
        std::vector<Matrix<B>> row;
        std::vector<std::string> row_names;
        for (const json& name_j : basis) {
            std::string name = name_j.get<std::string>();
            auto it = std::find_if(projections.begin(), projections.end(),
                                   [&](const auto& pr) { return pr.first == name; });
            if (it == projections.end())
                throw parse_error("basis references unknown vector " + name);
            row.push_back(it->second);
            row_names.push_back(name);
        }
        w.bases.push_back(std::move(row));
        w.basis_names.push_back(std::move(row_names));
    }
    return w;
}

} // namespace bohr
