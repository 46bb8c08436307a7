// Copyright (c) 2026 qdel contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qdel/composed.hpp"
#include "qdel/parallel.hpp"
#include "qdel/pi_code.hpp"
#include "qdel/rng.hpp"

namespace qdel {

struct TrialRecord {
    std::uint64_t trial = 0;
    std::vector<int> deleted;
    double fidelity = 0.0;
    bool failed = false;
    std::string error;
};

struct SimulationReport {
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    double min_fidelity = 0.0;
    double mean_fidelity = 0.0;
    std::uint64_t failures = 0;
    std::vector<TrialRecord> trial_log;
};

namespace detail {

inline SparsePureState logical_basis_state(const std::vector<cxd>& alpha) {
    SparsePureState s{SystemShape(std::vector<int>{static_cast<int>(alpha.size())})};
    for (std::size_t k = 0; k < alpha.size(); ++k)
        if (std::abs(alpha[k]) > tol::sparsity_floor)
            s.amps[BasisString{static_cast<Symbol>(k)}] = alpha[k];
    return s;
}

inline SimulationReport aggregate(std::vector<TrialRecord> log, std::uint64_t seed,
                                  double fidelity_tolerance) {
    SimulationReport rep;
    rep.trials = log.size();
    rep.seed = seed;
    rep.min_fidelity = 1.0;
    double sum = 0.0;
    for (auto& r : log) {
        if (r.failed || r.fidelity < 1.0 - fidelity_tolerance) {
            r.failed = true;
            ++rep.failures;
        }
        rep.min_fidelity = std::min(rep.min_fidelity, r.fidelity);
        sum += r.fidelity;
    }
    rep.mean_fidelity = rep.trials ? sum / static_cast<double>(rep.trials) : 0.0;
    rep.trial_log = std::move(log);
    return rep;
}

}  // namespace detail

/// Monte Carlo decode check of a first-construction code: each trial draws a
/// seeded Haar-random logical state and one deletion position. Deterministic
/// for a fixed seed, independent of the thread count.
inline SimulationReport end_to_end_simulate(const PiCode& code, std::uint64_t trials,
                                            std::uint64_t seed, int threads = 1,
                                            double fidelity_tolerance = tol::decode_fidelity) {
    if (trials < 1) throw InputError("end_to_end_simulate: trials must be >= 1");
    const int n = code.length();
    RecoveryMap map = build_recovery(code.logical_basis, {1});

    std::vector<TrialRecord> log(trials);
    parallel_for(trials, threads, [&](std::uint64_t i) {
        TrialRecord& rec = log[i];
        rec.trial = i;
        CounterRng rng = CounterRng::for_stream(seed, i);
        auto alpha = haar_alpha(rng, code.levels());
        int deleted = static_cast<int>(rng.next_below(n)) + 1;
        rec.deleted = {deleted};
        try {
            auto word = encode(code, alpha);
            std::vector<int> keep;
            for (int p = 1; p <= n; ++p)
                if (p != deleted) keep.push_back(p);
            auto logical = apply_recovery(map, partial_trace(word, keep));
            rec.fidelity = fidelity(detail::logical_basis_state(alpha), logical);
        } catch (const std::exception& e) {
            rec.failed = true;
            rec.error = e.what();
        }
    });
    return detail::aggregate(std::move(log), seed, fidelity_tolerance);
}

/// Monte Carlo decode check of a composed code: each trial draws a deletion
/// set of any size up to the budget (the empty set included).
inline SimulationReport end_to_end_simulate(const ComposedCode& code, std::uint64_t trials,
                                            std::uint64_t seed, int threads = 1,
                                            double fidelity_tolerance = tol::decode_fidelity) {
    if (trials < 1) throw InputError("end_to_end_simulate: trials must be >= 1");
    const int n = code.length();
    const int t = code.deletion_budget();

    // recovery maps for every in-budget erasure pattern, built once
    std::map<std::vector<int>, RecoveryMap> maps;
    maps.emplace(std::vector<int>{}, build_recovery(code.inner.logical_basis, {}));
    for (const auto& erased : position_subsets_upto(n, t))
        maps.emplace(erased, build_recovery(code.inner.logical_basis, erased));

    std::vector<TrialRecord> log(trials);
    parallel_for(trials, threads, [&](std::uint64_t i) {
        TrialRecord& rec = log[i];
        rec.trial = i;
        CounterRng rng = CounterRng::for_stream(seed, i);
        auto alpha = haar_alpha(rng, code.levels());
        rec.deleted = random_position_set(rng, n, 0, t);
        try {
            auto word = compose_encode(code, alpha);
            auto received = delete_qudits(code, word, rec.deleted);
            LocateResult loc =
                locate_and_strip(received, n, t, code.inner.ell);
            if (loc.deleted != rec.deleted)
                throw InternalConsistencyError("simulate: located set differs from ground truth");
            auto logical = apply_recovery(maps.at(loc.deleted), loc.inner_state);
            rec.fidelity = fidelity(detail::logical_basis_state(alpha), logical);
        } catch (const std::exception& e) {
            rec.failed = true;
            rec.error = e.what();
        }
    });
    return detail::aggregate(std::move(log), seed, fidelity_tolerance);
}

}  // namespace qdel
