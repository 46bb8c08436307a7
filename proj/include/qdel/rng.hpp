// Copyright (c) 2026 qdel contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "qdel/combinatorics.hpp"
#include "qdel/errors.hpp"
#include "qdel/linalg.hpp"

namespace qdel {

/// Counter-based generator: output i is a hash of (key, i), so streams can be
/// split per trial and parallel runs reproduce serial ones exactly.
struct CounterRng {
    std::uint64_t key = 0;
    std::uint64_t counter = 0;

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static CounterRng for_stream(std::uint64_t seed, std::uint64_t stream) {
        CounterRng r;
        r.key = mix(mix(seed) ^ (stream * 0xd1b54a32d192ed03ULL + 0x2545f4914f6cdd1dULL));
        return r;
    }

    std::uint64_t next_u64() { return mix(key + (++counter) * 0x9e3779b97f4a7c15ULL); }

    /// Uniform in [0, 1) with 53 bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>((static_cast<__uint128_t>(next_u64()) * n) >> 64);
    }

    /// Standard normal via Box-Muller; consumes two uniforms per call.
    double next_gaussian() {
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }
};

/// Haar-random logical coefficient vector of length m.
inline std::vector<cxd> haar_alpha(CounterRng& rng, int m) {
    std::vector<cxd> a(m);
    double n2 = 0.0;
    for (auto& x : a) {
        x = cxd(rng.next_gaussian(), rng.next_gaussian());
        n2 += std::norm(x);
    }
    if (n2 <= 0.0) {
        a.assign(m, cxd(0.0));
        a[0] = 1.0;
        return a;
    }
    for (auto& x : a) x /= std::sqrt(n2);
    return a;
}

/// Uniform draw over all position subsets of {1..n} with min_size <= |s| <=
/// max_size, by unranking a lexicographic combinadic.
inline std::vector<int> random_position_set(CounterRng& rng, int n, int min_size, int max_size) {
    if (min_size < 0 || max_size < min_size || max_size > n)
        throw InputError("random_position_set: bad size bounds");
    std::uint64_t total = 0;
    for (int k = min_size; k <= max_size; ++k) total += binomial(n, k);
    std::uint64_t idx = rng.next_below(total);
    int k = min_size;
    while (idx >= binomial(n, k)) {
        idx -= binomial(n, k);
        ++k;
    }
    // lexicographic unranking of the idx-th k-subset of {1..n}
    std::vector<int> out;
    int next = 1;
    while (static_cast<int>(out.size()) < k) {
        std::uint64_t block = binomial(n - next, k - 1 - static_cast<int>(out.size()));
        if (idx < block) {
            out.push_back(next);
        } else {
            idx -= block;
        }
        ++next;
    }
    return out;
}

}  // namespace qdel
