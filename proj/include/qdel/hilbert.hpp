// Copyright (c) 2026 qdel contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qdel/errors.hpp"
#include "qdel/linalg.hpp"

namespace qdel {

using Symbol = std::uint8_t;
using BasisString = std::vector<Symbol>;

inline std::string basis_to_string(const BasisString& b) {
    std::string s;
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(static_cast<int>(b[i]));
    }
    return s;
}

/// Tensor factor layout: per-position local dimensions, positions 1..n.
struct SystemShape {
    std::vector<int> dims;

    SystemShape() = default;
    explicit SystemShape(std::vector<int> d) : dims(std::move(d)) {}
    /// n positions of equal local dimension.
    SystemShape(int n, int local_dim) : dims(static_cast<std::size_t>(n), local_dim) {}

    int positions() const { return static_cast<int>(dims.size()); }

    bool valid() const {
        if (dims.empty()) return false;
        for (int d : dims)
            if (d < 1) return false;
        return true;
    }

    std::uint64_t total_dim() const {
        std::uint64_t t = 1;
        for (int d : dims) t *= static_cast<std::uint64_t>(d);
        return t;
    }

    bool operator==(const SystemShape&) const = default;
};

/// Mixed-radix rank of a basis string, little-endian (position 1 least
/// significant). This is the index convention for every densified operator.
inline std::uint64_t basis_rank(const BasisString& b, const SystemShape& shape) {
    std::uint64_t r = 0;
    for (int i = shape.positions() - 1; i >= 0; --i)
        r = r * static_cast<std::uint64_t>(shape.dims[i]) + b[i];
    return r;
}

inline BasisString basis_unrank(std::uint64_t r, const SystemShape& shape) {
    BasisString b(shape.positions());
    for (int i = 0; i < shape.positions(); ++i) {
        b[i] = static_cast<Symbol>(r % shape.dims[i]);
        r /= shape.dims[i];
    }
    return b;
}

namespace tol {
inline constexpr double normalization = 1e-12;
inline constexpr double hermiticity = 1e-12;
inline constexpr double sparsity_floor = 1e-15;
inline constexpr double psd_slack = -1e-10;
inline constexpr double decode_fidelity = 1e-9;
inline constexpr double probability_floor = 1e-12;
}  // namespace tol

/// Complex amplitude map over computational basis strings.
struct SparsePureState {
    SystemShape shape;
    std::map<BasisString, cxd> amps;

    SparsePureState() = default;
    explicit SparsePureState(SystemShape s) : shape(std::move(s)) {}

    /// Computational basis state |b>.
    static SparsePureState basis_state(SystemShape s, BasisString b) {
        SparsePureState st(std::move(s));
        st.check_string(b);
        st.amps.emplace(std::move(b), cxd(1.0));
        return st;
    }

    void check_string(const BasisString& b) const {
        if (static_cast<int>(b.size()) != shape.positions())
            throw InputError("basis string length does not match shape");
        for (int i = 0; i < shape.positions(); ++i)
            if (b[i] >= shape.dims[i]) throw InputError("basis symbol out of range");
    }

    void add(const BasisString& b, cxd amp) { amps[b] += amp; }

    double norm_squared() const {
        double n = 0.0;
        for (const auto& [b, a] : amps) n += std::norm(a);
        return n;
    }

    double norm() const { return std::sqrt(norm_squared()); }

    bool is_normalized(double t = tol::normalization) const {
        return std::abs(norm_squared() - 1.0) <= t;
    }

    /// Drops amplitudes below the sparsity floor.
    void cleanup(double floor = tol::sparsity_floor) {
        for (auto it = amps.begin(); it != amps.end();) {
            if (std::abs(it->second) < floor)
                it = amps.erase(it);
            else
                ++it;
        }
    }

    void scale(cxd f) {
        for (auto& [b, a] : amps) a *= f;
    }

    SparsePureState normalized() const {
        SparsePureState out = *this;
        double n = norm();
        if (n <= 0.0) throw InputError("cannot normalize the zero state");
        out.scale(1.0 / n);
        return out;
    }
};

/// <a|b>, conjugate-linear in the first argument. Ordered maps walk together.
inline cxd inner(const SparsePureState& a, const SparsePureState& b) {
    if (a.shape != b.shape) throw InputError("inner: shape mismatch");
    cxd r = 0.0;
    auto ia = a.amps.begin();
    auto ib = b.amps.begin();
    while (ia != a.amps.end() && ib != b.amps.end()) {
        if (ia->first < ib->first)
            ++ia;
        else if (ib->first < ia->first)
            ++ib;
        else {
            r += std::conj(ia->second) * ib->second;
            ++ia;
            ++ib;
        }
    }
    return r;
}

/// |a> tensor |b>: concatenated positions, product amplitudes.
inline SparsePureState tensor(const SparsePureState& a, const SparsePureState& b) {
    std::vector<int> dims = a.shape.dims;
    dims.insert(dims.end(), b.shape.dims.begin(), b.shape.dims.end());
    SparsePureState out{SystemShape(std::move(dims))};
    for (const auto& [ba, aa] : a.amps) {
        for (const auto& [bb, ab] : b.amps) {
            BasisString s = ba;
            s.insert(s.end(), bb.begin(), bb.end());
            out.amps.emplace(std::move(s), aa * ab);
        }
    }
    return out;
}

namespace detail {

/// sigma as 1-based images: position i moves to sigma[i-1]. Carries local
/// dimensions along, so any bijection is representable.
inline SparsePureState reorder_positions(const SparsePureState& s, const std::vector<int>& sigma) {
    const int n = s.shape.positions();
    if (static_cast<int>(sigma.size()) != n) throw InputError("permutation size mismatch");
    std::vector<bool> hit(n, false);
    for (int img : sigma) {
        if (img < 1 || img > n || hit[img - 1]) throw InputError("not a permutation");
        hit[img - 1] = true;
    }
    std::vector<int> dims(n);
    for (int i = 0; i < n; ++i) dims[sigma[i] - 1] = s.shape.dims[i];
    SparsePureState out{SystemShape(std::move(dims))};
    for (const auto& [b, a] : s.amps) {
        BasisString nb(n);
        for (int i = 0; i < n; ++i) nb[sigma[i] - 1] = b[i];
        out.amps.emplace(std::move(nb), a);
    }
    return out;
}

inline std::vector<int> validate_positions(const SystemShape& shape, const std::vector<int>& pos,
                                           const char* who) {
    std::vector<int> p = pos;
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.size() != pos.size()) throw InputError(std::string(who) + ": repeated position");
    if (p.empty()) throw InputError(std::string(who) + ": empty position set");
    if (p.front() < 1 || p.back() > shape.positions())
        throw InputError(std::string(who) + ": position out of range");
    return p;
}

}  // namespace detail

/// Rearranges qudits: position i moves to sigma(i). The permutation must map
/// positions of equal local dimension onto each other.
inline SparsePureState permute_positions(const SparsePureState& s, const std::vector<int>& sigma) {
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (sigma[i] < 1 || sigma[i] > s.shape.positions())
            throw InputError("permute_positions: position out of range");
        if (s.shape.dims[sigma[i] - 1] != s.shape.dims[i])
            throw InputError("permute_positions: permutation mixes unequal local dimensions");
    }
    return detail::reorder_positions(s, sigma);
}

/// rho = sum_i w_i |psi_i><psi_i| with normalized components and positive
/// weights. Keeps deletion-channel outputs sparse: tracing t of n qudits from
/// a pure state yields at most (erased local dimension) components, far below
/// the entry count of an explicit matrix.
struct DensityOperator {
    SystemShape shape;
    struct Component {
        double weight;
        SparsePureState state;
    };
    std::vector<Component> parts;

    DensityOperator() = default;
    explicit DensityOperator(SystemShape s) : shape(std::move(s)) {}

    static DensityOperator pure(const SparsePureState& psi) {
        if (!psi.is_normalized(1e-9))
            throw InputError("DensityOperator::pure: state is not normalized");
        DensityOperator d(psi.shape);
        d.parts.push_back({1.0, psi});
        return d;
    }

    double trace() const {
        double t = 0.0;
        for (const auto& p : parts) t += p.weight * p.state.norm_squared();
        return t;
    }

    cxd entry(const BasisString& x, const BasisString& y) const {
        cxd e = 0.0;
        for (const auto& p : parts) {
            auto ix = p.state.amps.find(x);
            if (ix == p.state.amps.end()) continue;
            auto iy = p.state.amps.find(y);
            if (iy == p.state.amps.end()) continue;
            e += p.weight * ix->second * std::conj(iy->second);
        }
        return e;
    }

    /// Union of the component supports, sorted.
    std::vector<BasisString> support() const {
        std::vector<BasisString> s;
        for (const auto& p : parts)
            for (const auto& [b, a] : p.state.amps) s.push_back(b);
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        return s;
    }
};

/// Materializes the full matrix; only for small systems.
inline DenseOperator to_dense(const DensityOperator& rho, std::uint64_t max_dim = 4096) {
    const std::uint64_t d = rho.shape.total_dim();
    if (d > max_dim) throw InputError("to_dense: total dimension exceeds the dense fallback cap");
    DenseOperator m(static_cast<int>(d));
    for (const auto& p : rho.parts) {
        for (const auto& [bx, ax] : p.state.amps) {
            std::uint64_t rx = basis_rank(bx, rho.shape);
            for (const auto& [by, ay] : p.state.amps) {
                m.at(static_cast<int>(rx), static_cast<int>(basis_rank(by, rho.shape))) +=
                    p.weight * ax * std::conj(ay);
            }
        }
    }
    return m;
}

/// Largest entrywise |a - b| over the union of supports.
inline double density_deviation(const DensityOperator& a, const DensityOperator& b) {
    if (a.shape != b.shape) throw InputError("density_deviation: shape mismatch");
    std::vector<BasisString> sup = a.support();
    for (auto& s : b.support()) sup.push_back(std::move(s));
    std::sort(sup.begin(), sup.end());
    sup.erase(std::unique(sup.begin(), sup.end()), sup.end());
    double dev = 0.0;
    for (const auto& x : sup)
        for (const auto& y : sup) dev = std::max(dev, std::abs(a.entry(x, y) - b.entry(x, y)));
    return dev;
}

/// Partial trace of a pure state, keeping the given positions (1-based) in
/// their original order. One output component per traced substring.
inline DensityOperator partial_trace(const SparsePureState& psi, const std::vector<int>& keep) {
    std::vector<int> k = detail::validate_positions(psi.shape, keep, "partial_trace");
    const int n = psi.shape.positions();
    std::vector<bool> keep_mask(n, false);
    for (int p : k) keep_mask[p - 1] = true;

    std::vector<int> kept_dims;
    for (int i = 0; i < n; ++i)
        if (keep_mask[i]) kept_dims.push_back(psi.shape.dims[i]);
    SystemShape kept_shape{std::move(kept_dims)};

    if (static_cast<int>(k.size()) == n) return DensityOperator::pure(psi);

    std::map<BasisString, std::map<BasisString, cxd>> groups;  // traced substring -> kept amps
    for (const auto& [b, a] : psi.amps) {
        BasisString traced, kept;
        for (int i = 0; i < n; ++i) (keep_mask[i] ? kept : traced).push_back(b[i]);
        groups[std::move(traced)].emplace(std::move(kept), a);
    }

    DensityOperator rho(kept_shape);
    for (auto& [traced, amps] : groups) {
        SparsePureState comp(kept_shape);
        comp.amps = std::move(amps);
        double w = comp.norm_squared();
        if (w <= tol::sparsity_floor * tol::sparsity_floor) continue;
        comp.scale(1.0 / std::sqrt(w));
        rho.parts.push_back({w, std::move(comp)});
    }
    return rho;
}

inline DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep) {
    std::vector<int> k = detail::validate_positions(rho.shape, keep, "partial_trace");
    DensityOperator out;
    bool first = true;
    for (const auto& p : rho.parts) {
        DensityOperator pt = partial_trace(p.state, k);
        if (first) {
            out.shape = pt.shape;
            first = false;
        }
        for (auto& c : pt.parts) out.parts.push_back({p.weight * c.weight, std::move(c.state)});
    }
    if (first) throw InputError("partial_trace: empty density operator");
    return out;
}

/// Tr_kept[ |psi1><psi2| ] as a dense matrix over the erased subsystem,
/// indexed by little-endian ranks of the erased substrings. The workhorse of
/// the erasure-condition checks.
inline DenseOperator reduced_cross_operator(const SparsePureState& psi1,
                                            const SparsePureState& psi2,
                                            const std::vector<int>& erased) {
    if (psi1.shape != psi2.shape) throw InputError("reduced_cross_operator: shape mismatch");
    std::vector<int> e = detail::validate_positions(psi1.shape, erased, "reduced_cross_operator");
    const int n = psi1.shape.positions();
    if (static_cast<int>(e.size()) == n)
        throw InputError("reduced_cross_operator: erased set must be a proper subset");
    std::vector<bool> erased_mask(n, false);
    for (int p : e) erased_mask[p - 1] = true;

    std::vector<int> erased_dims;
    for (int i = 0; i < n; ++i)
        if (erased_mask[i]) erased_dims.push_back(psi1.shape.dims[i]);
    SystemShape erased_shape{std::move(erased_dims)};
    const int dim_e = static_cast<int>(erased_shape.total_dim());

    auto split = [&](const SparsePureState& s) {
        std::map<BasisString, std::vector<std::pair<int, cxd>>> by_kept;
        for (const auto& [b, a] : s.amps) {
            BasisString kept, er;
            for (int i = 0; i < n; ++i) (erased_mask[i] ? er : kept).push_back(b[i]);
            by_kept[std::move(kept)].emplace_back(static_cast<int>(basis_rank(er, erased_shape)),
                                                  a);
        }
        return by_kept;
    };
    auto g1 = split(psi1);
    auto g2 = split(psi2);

    DenseOperator r(dim_e);
    for (const auto& [kept, l1] : g1) {
        auto it = g2.find(kept);
        if (it == g2.end()) continue;
        for (const auto& [e1, a1] : l1)
            for (const auto& [e2, a2] : it->second) r.at(e1, e2) += a1 * std::conj(a2);
    }
    return r;
}

struct MeasurementOutcome {
    BasisString outcome;
    double probability;
    DensityOperator post_state;  ///< on the remaining positions, renormalized
};

/// Projective computational-basis measurement of the given positions. The
/// measured subsystem collapses to a known basis state and is discarded;
/// outcomes below the probability floor are dropped.
inline std::vector<MeasurementOutcome> measure_computational(const DensityOperator& rho,
                                                             const std::vector<int>& positions) {
    std::vector<int> m = detail::validate_positions(rho.shape, positions, "measure_computational");
    const int n = rho.shape.positions();
    if (static_cast<int>(m.size()) == n)
        throw InputError("measure_computational: must keep at least one position");
    std::vector<bool> measured(n, false);
    for (int p : m) measured[p - 1] = true;

    std::vector<int> rest_dims;
    for (int i = 0; i < n; ++i)
        if (!measured[i]) rest_dims.push_back(rho.shape.dims[i]);
    SystemShape rest_shape{std::move(rest_dims)};

    std::map<BasisString, std::vector<DensityOperator::Component>> by_outcome;
    for (const auto& p : rho.parts) {
        std::map<BasisString, std::map<BasisString, cxd>> groups;
        for (const auto& [b, a] : p.state.amps) {
            BasisString out, rest;
            for (int i = 0; i < n; ++i) (measured[i] ? out : rest).push_back(b[i]);
            groups[std::move(out)].emplace(std::move(rest), a);
        }
        for (auto& [out, amps] : groups) {
            SparsePureState comp(rest_shape);
            comp.amps = std::move(amps);
            double w = p.weight * comp.norm_squared();
            if (w <= 0.0) continue;
            comp = comp.normalized();
            by_outcome[out].push_back({w, std::move(comp)});
        }
    }

    std::vector<MeasurementOutcome> outcomes;
    for (auto& [out, comps] : by_outcome) {
        double prob = 0.0;
        for (const auto& c : comps) prob += c.weight;
        if (prob <= tol::probability_floor) continue;
        DensityOperator post(rest_shape);
        for (auto& c : comps) post.parts.push_back({c.weight / prob, std::move(c.state)});
        outcomes.push_back({out, prob, std::move(post)});
    }
    return outcomes;
}

/// <pure| rho |pure>, real and in [0,1] for states.
inline double fidelity(const SparsePureState& pure, const DensityOperator& rho) {
    if (pure.shape != rho.shape) throw InputError("fidelity: shape mismatch");
    double f = 0.0;
    for (const auto& p : rho.parts) f += p.weight * std::norm(inner(pure, p.state));
    return f;
}

/// Splits every position of composite dimension d_low*d_high into a (low,
/// high) pair of adjacent positions; composite symbol s = low + d_low*high.
inline SparsePureState factor_all_positions(const SparsePureState& s, int d_low, int d_high) {
    const int n = s.shape.positions();
    for (int d : s.shape.dims)
        if (d != d_low * d_high)
            throw InputError("factor_all_positions: local dimension is not d_low*d_high");
    SparsePureState out{SystemShape(std::vector<int>([&] {
        std::vector<int> dims;
        for (int i = 0; i < n; ++i) {
            dims.push_back(d_low);
            dims.push_back(d_high);
        }
        return dims;
    }()))};
    for (const auto& [b, a] : s.amps) {
        BasisString nb;
        nb.reserve(static_cast<std::size_t>(2) * n);
        for (int i = 0; i < n; ++i) {
            nb.push_back(static_cast<Symbol>(b[i] % d_low));
            nb.push_back(static_cast<Symbol>(b[i] / d_low));
        }
        out.amps.emplace(std::move(nb), a);
    }
    return out;
}

inline DensityOperator factor_all_positions(const DensityOperator& rho, int d_low, int d_high) {
    DensityOperator out;
    bool first = true;
    for (const auto& p : rho.parts) {
        SparsePureState f = factor_all_positions(p.state, d_low, d_high);
        if (first) {
            out.shape = f.shape;
            first = false;
        }
        out.parts.push_back({p.weight, std::move(f)});
    }
    if (first) throw InputError("factor_all_positions: empty density operator");
    return out;
}

/// Inverse of factor_all_positions: fuses adjacent (low, high) pairs.
inline SparsePureState fuse_adjacent_pairs(const SparsePureState& s) {
    const int n2 = s.shape.positions();
    if (n2 % 2 != 0) throw InputError("fuse_adjacent_pairs: odd number of positions");
    const int n = n2 / 2;
    std::vector<int> dims(n);
    for (int i = 0; i < n; ++i) dims[i] = s.shape.dims[2 * i] * s.shape.dims[2 * i + 1];
    SparsePureState out{SystemShape(std::move(dims))};
    for (const auto& [b, a] : s.amps) {
        BasisString nb(n);
        for (int i = 0; i < n; ++i)
            nb[i] = static_cast<Symbol>(b[2 * i] + s.shape.dims[2 * i] * b[2 * i + 1]);
        out.amps.emplace(std::move(nb), a);
    }
    return out;
}

}  // namespace qdel
