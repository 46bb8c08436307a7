// Copyright (c) 2026 qdel contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <vector>

#include "qdel/errors.hpp"
#include "qdel/hilbert.hpp"
#include "qdel/marker.hpp"
#include "qdel/pi_code.hpp"

namespace qdel {

/// An erasure-correcting code given by an explicit orthonormal basis on n
/// qudits of dimension ell, able to correct erasures on any position set of
/// size up to erasure_budget.
struct InnerCode {
    int n = 0;
    int ell = 0;
    int erasure_budget = 0;
    std::vector<SparsePureState> logical_basis;

    int levels() const { return static_cast<int>(logical_basis.size()); }
};

/// All position subsets of {1..n} with 1 <= size <= t, lexicographic.
inline std::vector<std::vector<int>> position_subsets_upto(int n, int t) {
    std::vector<std::vector<int>> out;
    std::vector<int> stack;
    auto rec = [&](auto&& self, int start, int remaining) -> void {
        if (!stack.empty()) out.push_back(stack);
        if (remaining == 0) return;
        for (int p = start; p <= n; ++p) {
            stack.push_back(p);
            self(self, p + 1, remaining - 1);
            stack.pop_back();
        }
    };
    rec(rec, 1, std::min(t, n));
    return out;
}

/// Checks the erasure condition on every position set within the budget.
/// Returns the first failing report, or the last passing one.
inline ErasureCheckReport validate_inner_code(const InnerCode& code, double tolerance = 1e-9) {
    if (code.logical_basis.empty()) throw InputError("validate_inner_code: empty basis");
    for (const auto& phi : code.logical_basis) {
        if (phi.shape.positions() != code.n) throw InputError("validate_inner_code: wrong n");
        for (int d : phi.shape.dims)
            if (d != code.ell) throw InputError("validate_inner_code: wrong local dimension");
    }
    ErasureCheckReport last;
    for (const auto& erased : position_subsets_upto(code.n, code.erasure_budget)) {
        last = check_erasure_condition(code.logical_basis, erased, tolerance);
        if (!last.pass) return last;
    }
    return last;
}

/// Second construction: each position carries (inner qudit, marker qudit)
/// fused into one level of dimension (t+1)*ell, composite symbol = inner +
/// ell*marker. Correctly locating deletions reduces them to erasures of the
/// inner code.
struct ComposedCode {
    InnerCode inner;
    MarkerWord marker;

    static ComposedCode of(InnerCode inner_code) {
        ComposedCode c;
        c.marker = marker_sequence(inner_code.n, inner_code.erasure_budget);
        c.inner = std::move(inner_code);
        return c;
    }

    int length() const { return inner.n; }
    int deletion_budget() const { return inner.erasure_budget; }
    int composite_dim() const { return (inner.erasure_budget + 1) * inner.ell; }
    int levels() const { return inner.levels(); }

    SystemShape shape() const { return SystemShape(inner.n, composite_dim()); }
};

inline SparsePureState compose_encode(const ComposedCode& code, const std::vector<cxd>& alpha) {
    if (code.marker.n != code.inner.n)
        throw InputError("compose_encode: marker and inner lengths differ");
    SparsePureState inner_word = superpose(code.inner.logical_basis, alpha);
    SparsePureState out(code.shape());
    const int ell = code.inner.ell;
    for (const auto& [b, a] : inner_word.amps) {
        BasisString z(b.size());
        for (std::size_t i = 0; i < b.size(); ++i)
            z[i] = static_cast<Symbol>(b[i] + ell * code.marker.symbols[i]);
        out.amps.emplace(std::move(z), a);
    }
    return out;
}

/// The deletion channel: traces out the given composite positions; the
/// remaining qudits keep their order but the receiver no longer knows their
/// original labels.
inline DensityOperator delete_qudits(const ComposedCode& code, const SparsePureState& word,
                                     const std::vector<int>& positions) {
    if (static_cast<int>(positions.size()) > code.deletion_budget())
        throw InputError("delete_qudits: more deletions than the budget allows");
    if (positions.empty()) return DensityOperator::pure(word);
    std::vector<int> sorted = positions;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> keep;
    for (int p = 1; p <= word.shape.positions(); ++p)
        if (!std::binary_search(sorted.begin(), sorted.end(), p)) keep.push_back(p);
    if (keep.empty()) throw InputError("delete_qudits: cannot delete every position");
    return partial_trace(word, keep);
}

struct LocateResult {
    std::vector<int> deleted;      ///< 1-based original positions
    DensityOperator inner_state;   ///< post-measurement state on the inner qudits
};

/// Measures the marker subsystem of every received composite qudit. The
/// marker is a basis product state, so the outcome must be deterministic; the
/// outcome word then pins down the deleted positions.
inline LocateResult locate_and_strip(const DensityOperator& received, int n, int t, int ell) {
    const int m = received.shape.positions();
    if (m < 1) throw InputError("locate_and_strip: empty received state");
    if (n - m > t)
        throw ChannelCorruptionError("locate_and_strip: more positions missing than the budget");
    for (int d : received.shape.dims)
        if (d != (t + 1) * ell)
            throw InputError("locate_and_strip: received qudits have the wrong dimension");

    DensityOperator split = factor_all_positions(received, ell, t + 1);
    std::vector<int> marker_positions;
    for (int i = 1; i <= m; ++i) marker_positions.push_back(2 * i);

    auto outcomes = measure_computational(split, marker_positions);
    if (outcomes.size() != 1)
        throw ModelViolationError(
            "locate_and_strip: marker subsystem is mixed; received state is not a deletion "
            "pattern of a codeword");
    if (std::abs(outcomes.front().probability - 1.0) > 1e-12)
        throw ModelViolationError("locate_and_strip: marker outcome is not deterministic");

    const BasisString& y = outcomes.front().outcome;
    LocateResult result;
    try {
        result.deleted = recover_positions(std::vector<Symbol>(y.begin(), y.end()), n, t);
    } catch (const TooManyDeletionsError& e) {
        throw ChannelCorruptionError(std::string("locate_and_strip: ") + e.what());
    }
    result.inner_state = std::move(outcomes.front().post_state);
    return result;
}

/// Locates the deletions, then runs the inner code's erasure recovery on the
/// surviving qudits. Returns the logical density matrix.
inline DensityOperator full_decode(const ComposedCode& code, const DensityOperator& received) {
    LocateResult loc =
        locate_and_strip(received, code.length(), code.deletion_budget(), code.inner.ell);
    RecoveryMap map = build_recovery(code.inner.logical_basis, loc.deleted);
    return apply_recovery(map, loc.inner_state);
}

struct ComposedMetrics {
    int n = 0;
    int composite_dim = 0;
    int levels = 0;
    double rate = 0.0;  ///< over the composite alphabet
};

inline ComposedMetrics code_metrics(const ComposedCode& code) {
    ComposedMetrics m;
    m.n = code.length();
    m.composite_dim = code.composite_dim();
    m.levels = code.levels();
    m.rate = std::log(static_cast<double>(m.levels)) /
             std::log(static_cast<double>(m.composite_dim)) / m.n;
    return m;
}

}  // namespace qdel
