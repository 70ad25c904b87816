#pragma once

#include "bohr/logic.hpp"

#include <sstream>
#include <string>

namespace bohr {

namespace detail {

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

} // namespace detail

/// Hasse diagram of the context poset: one node per context labelled with its
/// name and atom count, one edge per covering relation, bottom drawn as a
/// box.
template <class B>
std::string hasse_dot(const ContextPoset<B>& poset) {
    std::ostringstream os;
    os << "digraph contexts {\n  rankdir=BT;\n";
    for (int i = 0; i < poset.size(); ++i) {
        os << "  n" << i << " [label=\"" << detail::dot_escape(poset.name(i)) << " ("
           << poset.context(i).size() << ")\"";
        if (i == poset.bottom()) os << " shape=box";
        os << "];\n";
    }
    for (auto [lower, upper] : poset.covers())
        os << "  n" << lower << " -> n" << upper << ";\n";
    os << "}\n";
    return os.str();
}

/// Hasse diagram annotated with per-context section sizes |S(A)|/|Max(A)|.
template <class B>
std::string overlay_dot(const ContextPoset<B>& poset, const Subobject<B>& s) {
    if (s.poset != &poset) throw poset_mismatch_error("overlay_dot: subobject on another poset");
    std::ostringstream os;
    os << "digraph sections {\n  rankdir=BT;\n";
    for (int i = 0; i < poset.size(); ++i) {
        int count = 0;
        for (int a = 0; a < poset.context(i).size(); ++a)
            if (s.masks[size_t(i)] & (1u << a)) ++count;
        os << "  n" << i << " [label=\"" << detail::dot_escape(poset.name(i)) << " " << count
           << "/" << poset.context(i).size() << "\"";
        if (i == poset.bottom()) os << " shape=box";
        os << "];\n";
    }
    for (auto [lower, upper] : poset.covers())
        os << "  n" << lower << " -> n" << upper << ";\n";
    os << "}\n";
    return os.str();
}

} // namespace bohr
