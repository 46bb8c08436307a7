// Copyright (c) 2026 qdel contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "qdel/errors.hpp"

namespace qdel {

/// Occurrence-count vector of a length-n word over the alphabet {0,...,ell-1}.
/// counts[a] is the number of positions holding symbol a; the counts sum to n.
struct TypeCounts {
    std::vector<int> counts;

    TypeCounts() = default;
    explicit TypeCounts(std::vector<int> c) : counts(std::move(c)) {}

    int alphabet() const { return static_cast<int>(counts.size()); }

    int length() const {
        int n = 0;
        for (int c : counts) n += c;
        return n;
    }

    bool valid() const {
        if (counts.empty()) return false;
        for (int c : counts)
            if (c < 0) return false;
        return true;
    }

    auto operator<=>(const TypeCounts&) const = default;
};

/// Orbit of a TypeCounts under permutations of the symbol labels, stored by its
/// canonical representative (counts sorted non-increasing).
struct TypeClass {
    TypeCounts canonical;

    TypeClass() = default;

    static TypeClass of(const TypeCounts& p) {
        TypeClass c;
        c.canonical = p;
        std::sort(c.canonical.counts.begin(), c.canonical.counts.end(), std::greater<int>());
        return c;
    }

    auto operator<=>(const TypeClass&) const = default;
};

/// A candidate code descriptor: distinct type classes sharing (n, ell), plus the
/// deletion budget t the set is meant to survive.
struct TypeSet {
    int n = 0;
    int ell = 0;
    int t = 0;
    std::vector<TypeClass> classes;

    auto operator<=>(const TypeSet&) const = default;
};

namespace detail {

inline void require(bool ok, const char* msg) {
    if (!ok) throw InputError(msg);
}

}  // namespace detail

/// All count vectors summing to n over an ell-symbol alphabet, in lexicographic
/// order on the counts vector. There are C(n+ell-1, ell-1) of them.
inline std::vector<TypeCounts> enumerate_types(int n, int ell) {
    detail::require(n >= 1, "enumerate_types: n must be >= 1");
    detail::require(ell >= 1, "enumerate_types: ell must be >= 1");
    std::vector<TypeCounts> out;
    std::vector<int> cur(ell, 0);
    // counts are filled left to right; the last coordinate absorbs the remainder
    std::function<void(int, int)> rec = [&](int pos, int remaining) {
        if (pos == ell - 1) {
            cur[pos] = remaining;
            out.emplace_back(cur);
            return;
        }
        for (int c = 0; c <= remaining; ++c) {
            cur[pos] = c;
            rec(pos + 1, remaining - c);
        }
    };
    rec(0, n);
    return out;
}

/// One TypeClass per partition of n into at most ell parts, ordered by
/// descending lexicographic canonical counts ([n,0,..] first).
inline std::vector<TypeClass> enumerate_classes(int n, int ell) {
    detail::require(n >= 1, "enumerate_classes: n must be >= 1");
    detail::require(ell >= 1, "enumerate_classes: ell must be >= 1");
    std::vector<TypeClass> out;
    std::vector<int> cur(ell, 0);
    std::function<void(int, int, int)> rec = [&](int pos, int remaining, int cap) {
        if (pos == ell) {
            if (remaining == 0) {
                TypeClass c;
                c.canonical = TypeCounts(cur);
                out.push_back(std::move(c));
            }
            return;
        }
        for (int c = std::min(cap, remaining); c >= 0; --c) {
            if (remaining - c > (ell - pos - 1) * c) continue;  // later parts cannot absorb the rest
            cur[pos] = c;
            rec(pos + 1, remaining - c, c);
        }
        cur[pos] = 0;
    };
    rec(0, n, n);
    return out;
}

/// All distinct coordinate permutations of the canonical representative, in
/// lexicographic order.
inline std::vector<TypeCounts> class_members(const TypeClass& c) {
    std::vector<int> v = c.canonical.counts;
    std::sort(v.begin(), v.end());
    std::vector<TypeCounts> out;
    do {
        out.emplace_back(v);
    } while (std::next_permutation(v.begin(), v.end()));
    return out;
}

/// Exact binomial coefficient. Intermediate products stay exact because every
/// prefix product is itself a binomial coefficient.
inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return r;
}

/// Number of length-n words with exactly these symbol counts: the multinomial
/// coefficient n! / prod(counts[a]!), computed as a product of binomials.
inline std::uint64_t sequence_count(const TypeCounts& p) {
    detail::require(p.valid(), "sequence_count: invalid type");
    std::uint64_t r = 1;
    int partial = 0;
    for (int c : p.counts) {
        partial += c;
        r *= binomial(partial, c);
    }
    return r;
}

/// Number of words whose type lies anywhere in the class: sum of the member
/// multinomials.
inline std::uint64_t class_sequence_count(const TypeClass& c) {
    std::uint64_t r = 0;
    for (const TypeCounts& m : class_members(c)) r += sequence_count(m);
    return r;
}

/// All types reachable from p by deleting t symbol occurrences: count vectors
/// c' with c'[a] <= p[a] pointwise and sum p - sum c' = t.
inline std::vector<TypeCounts> descendants(const TypeCounts& p, int t) {
    detail::require(p.valid(), "descendants: invalid type");
    const int n = p.length();
    detail::require(t >= 0 && t <= n - 1, "descendants: t out of range [0, n-1]");
    const int ell = p.alphabet();
    std::vector<TypeCounts> out;
    std::vector<int> cur(p.counts);
    std::function<void(int, int)> rec = [&](int pos, int remaining) {
        if (remaining == 0) {
            out.emplace_back(cur);
            return;
        }
        if (pos == ell) return;
        // drop up to min(remaining, p[pos]) occurrences of symbol pos
        for (int d = 0; d <= std::min(remaining, p.counts[pos]); ++d) {
            cur[pos] = p.counts[pos] - d;
            rec(pos + 1, remaining - d);
        }
        cur[pos] = p.counts[pos];
    };
    if (t == 0) {
        out.push_back(p);
    } else {
        rec(0, t);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    return out;
}

/// Counterexample to suitability: two distinct member types sharing the
/// deletion descendant r.
struct SuitabilityWitness {
    TypeCounts q1;
    TypeCounts q2;
    TypeCounts r;
};

struct SuitabilityResult {
    bool suitable = false;
    std::optional<SuitabilityWitness> witness;

    explicit operator bool() const { return suitable; }
};

/// Decides whether no two distinct member types of the set (members of the same
/// class included) share a deletion descendant after t deletions.
inline SuitabilityResult is_suitable(const TypeSet& s) {
    detail::require(!s.classes.empty(), "is_suitable: empty type set");
    detail::require(s.n >= s.t + 1, "is_suitable: need n >= t + 1");
    for (const TypeClass& c : s.classes) {
        detail::require(c.canonical.length() == s.n && c.canonical.alphabet() == s.ell,
                        "is_suitable: class does not match (n, ell)");
    }

    std::vector<TypeCounts> members;
    for (const TypeClass& c : s.classes) {
        for (TypeCounts& m : class_members(c)) members.push_back(std::move(m));
    }
    std::sort(members.begin(), members.end());
    detail::require(std::adjacent_find(members.begin(), members.end()) == members.end(),
                    "is_suitable: classes are not pairwise distinct");

    // Descendant sets are precomputed once; the pairwise scan dominates.
    std::vector<std::vector<TypeCounts>> desc;
    desc.reserve(members.size());
    for (const TypeCounts& m : members) desc.push_back(descendants(m, s.t));

    for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
            std::vector<TypeCounts> common;
            std::set_intersection(desc[i].begin(), desc[i].end(), desc[j].begin(), desc[j].end(),
                                  std::back_inserter(common));
            if (!common.empty()) {
                SuitabilityResult res;
                res.suitable = false;
                res.witness = SuitabilityWitness{members[i], members[j], common.front()};
                return res;
            }
        }
    }
    SuitabilityResult res;
    res.suitable = true;
    return res;
}

enum class SearchStrategy { exhaustive, greedy };

struct SearchOptions {
    SearchStrategy strategy = SearchStrategy::exhaustive;
    std::optional<int> max_set_size;       ///< cap M; sets are not grown past it
    int max_classes = 40;                  ///< class-count cutoff before truncation
    std::uint64_t max_candidates = 1'000'000;  ///< search-node cutoff before truncation
};

struct SearchResult {
    std::vector<TypeSet> sets;
    bool truncated = false;
    std::uint64_t classes_considered = 0;
    std::uint64_t candidates_examined = 0;
};

namespace detail {

/// Pairwise compatibility: no member of a shares a t-deletion descendant with
/// any member of b. Suitability of a set decomposes into internal suitability
/// of each class plus compatibility of every class pair.
inline bool classes_compatible(const std::vector<std::vector<TypeCounts>>& desc_a,
                               const std::vector<std::vector<TypeCounts>>& desc_b) {
    for (const auto& da : desc_a) {
        for (const auto& db : desc_b) {
            std::vector<TypeCounts> common;
            std::set_intersection(da.begin(), da.end(), db.begin(), db.end(),
                                  std::back_inserter(common));
            if (!common.empty()) return false;
        }
    }
    return true;
}

inline bool class_internally_suitable(const std::vector<std::vector<TypeCounts>>& desc) {
    for (std::size_t i = 0; i < desc.size(); ++i) {
        for (std::size_t j = i + 1; j < desc.size(); ++j) {
            std::vector<TypeCounts> common;
            std::set_intersection(desc[i].begin(), desc[i].end(), desc[j].begin(), desc[j].end(),
                                  std::back_inserter(common));
            if (!common.empty()) return false;
        }
    }
    return true;
}

}  // namespace detail

/// Searches for suitable sets of type classes at the given (n, ell, t).
///
/// exhaustive: all maximal suitable sets (maximal cliques of the pairwise
/// compatibility graph over internally suitable classes), deterministic order.
/// greedy: one set grown in descending class-sequence-count order, ties broken
/// by lexicographic canonical representative.
///
/// Exceeding a cutoff reports truncated = true rather than failing.
inline SearchResult search_suitable(int n, int ell, int t, const SearchOptions& opts = {}) {
    detail::require(n >= t + 1, "search_suitable: need n >= t + 1");
    detail::require(t >= 1, "search_suitable: t must be >= 1");
    SearchResult result;

    std::vector<TypeClass> classes = enumerate_classes(n, ell);
    result.classes_considered = classes.size();
    if (static_cast<int>(classes.size()) > opts.max_classes) {
        result.truncated = true;
        return result;
    }

    // Per-member descendant sets, grouped by class.
    std::vector<std::vector<std::vector<TypeCounts>>> desc(classes.size());
    for (std::size_t i = 0; i < classes.size(); ++i) {
        for (const TypeCounts& m : class_members(classes[i])) desc[i].push_back(descendants(m, t));
    }

    std::vector<std::size_t> vertices;
    for (std::size_t i = 0; i < classes.size(); ++i) {
        if (detail::class_internally_suitable(desc[i])) vertices.push_back(i);
    }

    const std::size_t v = vertices.size();
    std::vector<std::vector<bool>> adj(v, std::vector<bool>(v, false));
    for (std::size_t a = 0; a < v; ++a) {
        for (std::size_t b = a + 1; b < v; ++b) {
            bool ok = detail::classes_compatible(desc[vertices[a]], desc[vertices[b]]);
            adj[a][b] = adj[b][a] = ok;
        }
    }

    auto make_set = [&](const std::vector<std::size_t>& picks) {
        TypeSet s;
        s.n = n;
        s.ell = ell;
        s.t = t;
        for (std::size_t p : picks) s.classes.push_back(classes[vertices[p]]);
        std::sort(s.classes.begin(), s.classes.end());
        return s;
    };

    if (opts.strategy == SearchStrategy::greedy) {
        std::vector<std::size_t> order(v);
        for (std::size_t i = 0; i < v; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            std::uint64_t ca = class_sequence_count(classes[vertices[a]]);
            std::uint64_t cb = class_sequence_count(classes[vertices[b]]);
            if (ca != cb) return ca > cb;
            return classes[vertices[a]].canonical < classes[vertices[b]].canonical;
        });
        std::vector<std::size_t> chosen;
        for (std::size_t cand : order) {
            if (opts.max_set_size && static_cast<int>(chosen.size()) >= *opts.max_set_size) break;
            bool ok = true;
            for (std::size_t c : chosen) ok = ok && adj[cand][c];
            if (ok) chosen.push_back(cand);
        }
        if (!chosen.empty()) result.sets.push_back(make_set(chosen));
        return result;
    }

    // Bron-Kerbosch with pivoting; vertex order is the class enumeration order,
    // so the output is reproducible.
    std::vector<std::size_t> R;
    std::uint64_t nodes = 0;
    bool overflow = false;
    std::function<void(std::vector<std::size_t>, std::vector<std::size_t>)> expand =
        [&](std::vector<std::size_t> P, std::vector<std::size_t> X) {
            if (overflow) return;
            if (++nodes > opts.max_candidates) {
                overflow = true;
                return;
            }
            if (opts.max_set_size && static_cast<int>(R.size()) >= *opts.max_set_size) {
                result.sets.push_back(make_set(R));
                return;
            }
            if (P.empty() && X.empty()) {
                if (!R.empty()) result.sets.push_back(make_set(R));
                return;
            }
            // pivot: vertex of P ∪ X with most neighbours in P
            std::size_t pivot = 0;
            std::size_t best = 0;
            bool have = false;
            for (std::size_t u : P) {
                std::size_t deg = 0;
                for (std::size_t w : P)
                    if (adj[u][w]) ++deg;
                if (!have || deg > best) pivot = u, best = deg, have = true;
            }
            for (std::size_t u : X) {
                std::size_t deg = 0;
                for (std::size_t w : P)
                    if (adj[u][w]) ++deg;
                if (!have || deg > best) pivot = u, best = deg, have = true;
            }
            std::vector<std::size_t> cands;
            for (std::size_t u : P)
                if (!adj[pivot][u]) cands.push_back(u);
            for (std::size_t u : cands) {
                std::vector<std::size_t> P2, X2;
                for (std::size_t w : P)
                    if (adj[u][w]) P2.push_back(w);
                for (std::size_t w : X)
                    if (adj[u][w]) X2.push_back(w);
                R.push_back(u);
                expand(std::move(P2), std::move(X2));
                R.pop_back();
                P.erase(std::find(P.begin(), P.end(), u));
                X.push_back(u);
            }
        };

    std::vector<std::size_t> P(v);
    for (std::size_t i = 0; i < v; ++i) P[i] = i;
    expand(std::move(P), {});
    result.candidates_examined = nodes;
    result.truncated = overflow;

    std::sort(result.sets.begin(), result.sets.end());
    result.sets.erase(std::unique(result.sets.begin(), result.sets.end()), result.sets.end());
    return result;
}

}  // namespace qdel
