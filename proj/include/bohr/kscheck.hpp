#pragma once

#include "bohr/context.hpp"

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace bohr {

/// A candidate global section: one character (atom index) per poset context.
struct SectionCandidate {
    std::vector<int> atoms;
};

struct SectionSearchResult {
    std::optional<SectionCandidate> section;
    std::uint64_t nodes_explored = 0;
};

/// Independent compatibility re-check: restrictions along every comparable
/// pair must agree.
template <class B>
bool section_compatible(const ContextPoset<B>& poset, const SectionCandidate& cand) {
    if (int(cand.atoms.size()) != poset.size()) return false;
    for (int i = 0; i < poset.size(); ++i)
        for (int j = 0; j < poset.size(); ++j) {
            if (i == j || !poset.leq(i, j)) continue;
            if (poset.restrict_atom(j, i, cand.atoms[size_t(j)]) != cand.atoms[size_t(i)])
                return false;
        }
    return true;
}

/// Exhaustive backtracking search for a global section of the spectral
/// presheaf over the poset. Deterministic: contexts are visited maximal
/// first, atoms in canonical order, so the first hit is the
/// lexicographically first section in that order. Counts every attempted
/// assignment as one explored node.
template <class B>
SectionSearchResult find_global_section(const ContextPoset<B>& poset) {
    std::vector<int> order = poset.topo_max_first();
    std::vector<int> assign(size_t(poset.size()), -1);
    SectionSearchResult result;

    auto compatible = [&](int ctx, int atom) {
        for (int other = 0; other < poset.size(); ++other) {
            if (assign[size_t(other)] < 0 || other == ctx) continue;
            if (poset.leq(ctx, other) &&
                poset.restrict_atom(other, ctx, assign[size_t(other)]) != atom)
                return false;
            if (poset.leq(other, ctx) &&
                poset.restrict_atom(ctx, other, atom) != assign[size_t(other)])
                return false;
        }
        return true;
    };

    auto rec = [&](auto&& self, size_t pos) -> bool {
        if (pos == order.size()) return true;
        int ctx = order[pos];
        for (int atom = 0; atom < poset.context(ctx).size(); ++atom) {
            ++result.nodes_explored;
            if (!compatible(ctx, atom)) continue;
            assign[size_t(ctx)] = atom;
            if (self(self, pos + 1)) return true;
            assign[size_t(ctx)] = -1;
        }
        return false;
    };

    if (rec(rec, 0)) result.section = SectionCandidate{assign};
    return result;
}

/// Evaluates the section's would-be valuation on a projection, through any
/// context whose algebra contains it; consistency across all containing
/// contexts is enforced.
template <class B>
int sections_agree(const ContextPoset<B>& poset, const SectionCandidate& cand,
                   const Matrix<B>& p) {
    require_projection(p, "sections_agree");
    int value = -1;
    for (int i = 0; i < poset.size(); ++i) {
        auto mask = poset.context(i).mask_of_projection(p);
        if (!mask) continue;
        int v = (*mask >> cand.atoms[size_t(i)]) & 1u;
        if (value >= 0 && value != v)
            throw invariant_error("sections_agree: inconsistent valuation across contexts");
        value = v;
    }
    if (value < 0)
        throw not_representable_error("sections_agree: no context contains the projection");
    return value;
}

/// Outcome of the rank-1 coloring search. `uncolorable` is the certified
/// claim; `choice` names the selected vector per basis when a coloring
/// exists; `nodes_explored` is the size of the backtracking tree.
struct ColoringCertificate {
    bool uncolorable = false;
    std::optional<std::vector<int>> choice;
    std::uint64_t nodes_explored = 0;
};

namespace detail {

/// Canonical ids for vectors shared between bases (detected by projection
/// equality), plus the validated shape: each basis must be a partition of the
/// identity into dim rank-1 projections.
template <class B>
std::vector<std::vector<int>> witness_vector_ids(int dim,
                                                 const std::vector<std::vector<Matrix<B>>>& bases,
                                                 int* out_distinct) {
    std::vector<Matrix<B>> seen;
    std::vector<std::vector<int>> ids(bases.size());
    for (size_t b = 0; b < bases.size(); ++b) {
        if (int(bases[b].size()) != dim)
            throw invalid_basis_error("witness basis " + std::to_string(b) + " must have " +
                                      std::to_string(dim) + " vectors");
        Matrix<B> sum = Matrix<B>::zero(dim, dim);
        for (const Matrix<B>& p : bases[b]) {
            require_projection(p, "witness vector");
            if (p.rows() != dim) throw invalid_basis_error("witness vector dimension mismatch");
            if (rank(p) != 1) throw invalid_basis_error("witness vector is not rank 1");
            sum = sum + p;
            int id = -1;
            for (size_t k = 0; k < seen.size(); ++k)
                if (proj_eq(seen[k], p)) {
                    id = int(k);
                    break;
                }
            if (id < 0) {
                seen.push_back(p);
                id = int(seen.size()) - 1;
            }
            ids[b].push_back(id);
        }
        if (!approx_eq(sum, Matrix<B>::identity(dim)))
            throw invalid_basis_error("witness basis " + std::to_string(b) +
                                      " is not a partition of the identity");
        for (int i = 0; i < dim; ++i)
            for (int j = i + 1; j < dim; ++j)
                if (ids[b][size_t(i)] == ids[b][size_t(j)])
                    throw invalid_basis_error("witness basis " + std::to_string(b) +
                                              " repeats a vector");
    }
    *out_distinct = int(seen.size());
    return ids;
}

/// Backtracking over per-basis choices starting from the given first-basis
/// choice; explores the whole subtree unless a coloring is found.
inline bool color_subtree(const std::vector<std::vector<int>>& ids, int distinct,
                          int first_choice, std::vector<int>& choice, std::uint64_t& nodes) {
    std::vector<int> val(size_t(distinct), -1);
    std::vector<int> trail;

    auto set_val = [&](int id, int v) {
        if (val[size_t(id)] >= 0) return val[size_t(id)] == v;
        val[size_t(id)] = v;
        trail.push_back(id);
        return true;
    };
    auto undo_to = [&](size_t mark) {
        while (trail.size() > mark) {
            val[size_t(trail.back())] = -1;
            trail.pop_back();
        }
    };
    auto try_basis = [&](size_t b, int pick) {
        for (size_t i = 0; i < ids[b].size(); ++i)
            if (!set_val(ids[b][i], int(i) == pick ? 1 : 0)) return false;
        return true;
    };

    auto rec = [&](auto&& self, size_t b) -> bool {
        if (b == ids.size()) return true;
        for (int pick = 0; pick < int(ids[b].size()); ++pick) {
            ++nodes;
            size_t mark = trail.size();
            if (try_basis(b, pick)) {
                choice[b] = pick;
                if (self(self, b + 1)) return true;
            }
            choice[b] = -1;
            undo_to(mark);
        }
        return false;
    };

    ++nodes;
    size_t mark = trail.size();
    bool ok = false;
    if (try_basis(0, first_choice)) {
        choice[0] = first_choice;
        ok = rec(rec, 1);
    }
    if (!ok) {
        choice[0] = -1;
        undo_to(mark);
    }
    return ok;
}

} // namespace detail

/// Exhaustive proof-by-search that a family of rank-1 bases does or does not
/// admit a coloring assigning 1 to exactly one vector per basis, consistently
/// on shared vectors. Branches over the first basis may be searched in
/// parallel; each branch is deterministic, the reported coloring is the one
/// from the earliest branch, and node counts are summed over branches, so the
/// outcome is schedule independent.
template <class B>
ColoringCertificate verify_coloring_witness(int dim,
                                            const std::vector<std::vector<Matrix<B>>>& bases,
                                            int threads = 1) {
    ColoringCertificate cert;
    if (bases.empty()) throw invalid_basis_error("witness has no bases");
    int distinct = 0;
    std::vector<std::vector<int>> ids = detail::witness_vector_ids<B>(dim, bases, &distinct);

    const int branches = int(ids[0].size());
    std::vector<std::uint64_t> branch_nodes(size_t(branches), 0);
    std::vector<std::optional<std::vector<int>>> branch_hit(static_cast<size_t>(branches));

    auto run_branch = [&](int first) {
        std::vector<int> choice(ids.size(), -1);
        if (detail::color_subtree(ids, distinct, first, choice, branch_nodes[size_t(first)]))
            branch_hit[size_t(first)] = choice;
    };

    if (threads <= 1) {
        for (int f = 0; f < branches; ++f) run_branch(f);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int t = 0; t < std::min(threads, branches); ++t)
            pool.emplace_back([&] {
                for (int f = next.fetch_add(1); f < branches; f = next.fetch_add(1))
                    run_branch(f);
            });
        for (auto& th : pool) th.join();
    }

    for (std::uint64_t n : branch_nodes) cert.nodes_explored += n;
    for (int f = 0; f < branches; ++f)
        if (branch_hit[size_t(f)]) {
            cert.choice = branch_hit[size_t(f)];
            break;
        }
    cert.uncolorable = !cert.choice;
    return cert;
}

/// The intersection-closed poset generated by treating each witness basis as
/// a maximal context.
template <class B>
ContextPoset<B> poset_from_bases(int dim, const std::vector<std::vector<Matrix<B>>>& bases,
                                 const std::vector<std::string>& names = {}) {
    std::vector<std::pair<std::string, Context<B>>> seeds;
    for (size_t b = 0; b < bases.size(); ++b) {
        std::string name = b < names.size() ? names[b] : "B" + std::to_string(b);
        seeds.emplace_back(name, Context<B>(dim, bases[b]));
    }
    return ContextPoset<B>::build(dim, std::move(seeds));
}

} // namespace bohr
