// Copyright (c) 2026 qdel contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "qdel/combinatorics.hpp"
#include "qdel/errors.hpp"
#include "qdel/hilbert.hpp"

namespace qdel {

/// The cyclic ramp word (0,1,...,t,0,1,...) of length n over Z_{t+1}. Any
/// deletion of at most t components leaves a subsequence from which the
/// deleted positions can be reconstructed exactly.
struct MarkerWord {
    int n = 0;
    int t = 0;
    std::vector<Symbol> symbols;
};

inline MarkerWord marker_sequence(int n, int t) {
    if (n < 1) throw InputError("marker_sequence: n must be >= 1");
    if (t < 1) throw InputError("marker_sequence: t must be >= 1");
    MarkerWord w{n, t, {}};
    w.symbols.reserve(n);
    for (int i = 0; i < n; ++i) w.symbols.push_back(static_cast<Symbol>(i % (t + 1)));
    return w;
}

/// Removes the given (1-based, distinct) positions, order preserved.
inline std::vector<Symbol> delete_components(const std::vector<Symbol>& x,
                                             const std::vector<int>& positions) {
    std::vector<int> s = positions;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
        throw InputError("delete_components: repeated position");
    if (!s.empty() && (s.front() < 1 || s.back() > static_cast<int>(x.size())))
        throw InputError("delete_components: position out of range");
    std::vector<Symbol> out;
    out.reserve(x.size() - s.size());
    std::size_t si = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (si < s.size() && static_cast<int>(i) + 1 == s[si]) {
            ++si;
        } else {
            out.push_back(x[i]);
        }
    }
    return out;
}

/// Reconstructs the deleted positions of marker_sequence(n, t) from the
/// subsequence y.
///
/// The ramp splits into blocks of t+1 strictly increasing symbols (the last
/// block may be shorter). At most t deletions can neither merge two blocks
/// into one increasing run (that would cost >= t+1 deletions) nor erase a
/// full block, so the maximal strictly increasing runs of y correspond
/// one-to-one, in order, to the blocks of x — except a trailing partial block
/// that vanished entirely. Within a block the symbols are distinct, so the
/// surviving symbol values identify the surviving offsets and the deleted
/// positions are the per-block set difference. The result is re-checked by
/// deletion before returning.
inline std::vector<int> recover_positions(const std::vector<Symbol>& y, int n, int t) {
    if (n < 1 || t < 1) throw InputError("recover_positions: need n >= 1 and t >= 1");
    const int m = static_cast<int>(y.size());
    if (m > n) throw InputError("recover_positions: y longer than the marker");
    if (n - m > t)
        throw TooManyDeletionsError("recover_positions: more than t symbols are missing");

    const int block = t + 1;
    const int num_blocks = (n + block - 1) / block;
    auto block_len = [&](int r) { return std::min(block, n - r * block); };

    // maximal strictly increasing runs of y
    std::vector<std::pair<int, int>> runs;  // [begin, end)
    int begin = 0;
    for (int j = 1; j <= m; ++j) {
        if (j == m || y[j - 1] >= y[j]) {
            runs.emplace_back(begin, j);
            begin = j;
        }
    }
    if (static_cast<int>(runs.size()) > num_blocks)
        throw TooManyDeletionsError("recover_positions: more runs than marker blocks");

    std::vector<int> deleted;
    for (int r = 0; r < num_blocks; ++r) {
        const int len = block_len(r);
        std::vector<bool> seen(len, false);
        if (r < static_cast<int>(runs.size())) {
            for (int j = runs[r].first; j < runs[r].second; ++j) {
                if (y[j] >= len)
                    throw TooManyDeletionsError(
                        "recover_positions: symbol does not fit its marker block");
                seen[y[j]] = true;
            }
        }
        for (int s = 0; s < len; ++s)
            if (!seen[s]) deleted.push_back(r * block + s + 1);
    }

    if (static_cast<int>(deleted.size()) > t)
        throw TooManyDeletionsError("recover_positions: no deletion set within budget fits");

    // mandatory self-check: re-deleting must reproduce y exactly
    if (delete_components(marker_sequence(n, t).symbols, deleted) != y)
        throw TooManyDeletionsError("recover_positions: input is not a marker subsequence");
    return deleted;
}

struct LemmaCounterexample {
    std::vector<int> deleted;
    std::optional<std::vector<int>> recovered;  ///< empty if recovery threw
    std::vector<Symbol> subsequence;
};

struct LemmaReport {
    bool ok = false;
    std::uint64_t cases = 0;
    std::optional<LemmaCounterexample> counterexample;
    bool truncated = false;
};

/// Checks, for every deletion set of size <= t, that recovery returns exactly
/// that set, and that distinct sets give distinct subsequences.
inline LemmaReport verify_lemma_exhaustive(int n, int t,
                                           std::uint64_t max_cases = 10'000'000) {
    if (n < 1 || t < 1) throw InputError("verify_lemma_exhaustive: need n >= 1 and t >= 1");
    MarkerWord x = marker_sequence(n, t);
    LemmaReport report;

    std::uint64_t total = 0;
    for (int k = 0; k <= std::min(t, n); ++k) total += binomial(n, k);
    if (total > max_cases) {
        report.truncated = true;
        return report;
    }

    std::map<std::vector<Symbol>, std::vector<int>> images;
    auto run_case = [&](const std::vector<int>& s) {
        ++report.cases;
        auto y = delete_components(x.symbols, s);
        auto [it, fresh] = images.emplace(y, s);
        if (!fresh) {
            report.counterexample = LemmaCounterexample{s, it->second, y};  // injectivity broken
            return false;
        }
        try {
            auto rec = recover_positions(y, n, t);
            if (rec != s) {
                report.counterexample = LemmaCounterexample{s, rec, y};
                return false;
            }
        } catch (const std::exception&) {
            report.counterexample = LemmaCounterexample{s, std::nullopt, y};
            return false;
        }
        return true;
    };

    std::vector<int> stack;
    bool ok = true;
    auto rec_sets = [&](auto&& self, int start, int remaining) -> void {
        if (!ok) return;
        if (!run_case(stack)) {
            ok = false;
            return;
        }
        if (remaining == 0) return;
        for (int p = start; p <= n; ++p) {
            stack.push_back(p);
            self(self, p + 1, remaining - 1);
            stack.pop_back();
            if (!ok) return;
        }
    };
    rec_sets(rec_sets, 1, std::min(t, n));

    report.ok = ok;
    return report;
}

/// Builds the marker word as a computational-basis product state over Z_{t+1}
/// qudits.
inline SparsePureState marker_state(const MarkerWord& w) {
    return SparsePureState::basis_state(SystemShape(w.n, w.t + 1),
                                        BasisString(w.symbols.begin(), w.symbols.end()));
}

}  // namespace qdel
