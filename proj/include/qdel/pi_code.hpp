// Copyright (c) 2026 qdel contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "qdel/combinatorics.hpp"
#include "qdel/errors.hpp"
#include "qdel/hilbert.hpp"

namespace qdel {

/// All words whose type lies in the class, as basis strings in lexicographic
/// order.
inline std::vector<BasisString> class_words(const TypeClass& c) {
    std::vector<BasisString> out;
    for (const TypeCounts& m : class_members(c)) {
        BasisString w;
        for (int a = 0; a < m.alphabet(); ++a)
            w.insert(w.end(), static_cast<std::size_t>(m.counts[a]), static_cast<Symbol>(a));
        std::sort(w.begin(), w.end());
        do {
            out.push_back(w);
        } while (std::next_permutation(w.begin(), w.end()));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// First-construction code: level k encodes as the uniform superposition over
/// all words whose type lies in the k-th class.
struct PiCode {
    TypeSet type_set;
    std::vector<SparsePureState> logical_basis;

    static PiCode from_type_set(const TypeSet& s) {
        if (s.classes.empty()) throw InputError("PiCode: empty type set");
        PiCode code;
        code.type_set = s;
        SystemShape shape(s.n, s.ell);
        for (const TypeClass& c : s.classes) {
            if (c.canonical.length() != s.n || c.canonical.alphabet() != s.ell)
                throw InputError("PiCode: class does not match (n, ell)");
            auto words = class_words(c);
            SparsePureState phi(shape);
            const double amp = 1.0 / std::sqrt(static_cast<double>(words.size()));
            for (auto& w : words) phi.amps.emplace(std::move(w), amp);
            code.logical_basis.push_back(std::move(phi));
        }
        return code;
    }

    int levels() const { return static_cast<int>(logical_basis.size()); }
    int length() const { return type_set.n; }
    int local_dim() const { return type_set.ell; }
};

/// sum_k alpha_k |basis_k> for a normalized coefficient vector.
inline SparsePureState superpose(const std::vector<SparsePureState>& basis,
                                 const std::vector<cxd>& alpha) {
    if (basis.empty()) throw InputError("superpose: empty basis");
    if (alpha.size() != basis.size())
        throw InputError("superpose: alpha length does not match the number of levels");
    double n2 = 0.0;
    for (const cxd& a : alpha) n2 += std::norm(a);
    if (std::abs(n2 - 1.0) > tol::normalization)
        throw InputError("superpose: alpha is not normalized");
    SparsePureState out(basis.front().shape);
    for (std::size_t k = 0; k < basis.size(); ++k) {
        if (alpha[k] == cxd(0.0)) continue;
        for (const auto& [b, a] : basis[k].amps) out.amps[b] += alpha[k] * a;
    }
    out.cleanup();
    return out;
}

inline SparsePureState encode(const PiCode& code, const std::vector<cxd>& alpha) {
    return superpose(code.logical_basis, alpha);
}

struct PermutationInvarianceReport {
    bool invariant = false;
    double max_deviation = 0.0;
};

/// Exact check over adjacent transpositions (they generate the full group).
inline PermutationInvarianceReport check_permutation_invariance(
    const std::vector<SparsePureState>& basis) {
    PermutationInvarianceReport rep;
    rep.invariant = true;
    for (const SparsePureState& phi : basis) {
        const int n = phi.shape.positions();
        for (int i = 1; i < n; ++i) {
            std::vector<int> sigma(n);
            for (int p = 0; p < n; ++p) sigma[p] = p + 1;
            std::swap(sigma[i - 1], sigma[i]);
            SparsePureState moved = permute_positions(phi, sigma);
            double dev = 0.0;
            for (const auto& [b, a] : moved.amps) {
                auto it = phi.amps.find(b);
                dev = std::max(dev,
                               std::abs(a - (it == phi.amps.end() ? cxd(0.0) : it->second)));
            }
            for (const auto& [b, a] : phi.amps) {
                if (moved.amps.find(b) == moved.amps.end()) dev = std::max(dev, std::abs(a));
            }
            rep.max_deviation = std::max(rep.max_deviation, dev);
        }
    }
    rep.invariant = rep.max_deviation == 0.0;
    return rep;
}

inline PermutationInvarianceReport check_permutation_invariance(const PiCode& code) {
    return check_permutation_invariance(code.logical_basis);
}

/// Verdict of the erasure-correctability test on a position set: cross
/// operators Tr_kept[|phi_k1><phi_k2|] must vanish and the diagonal reduced
/// operators must agree across levels. Deviation from the maximally mixed
/// state is informative only; first-construction codes satisfy it, general
/// bases need not.
struct ErasureCheckReport {
    std::vector<int> erased;
    bool pass = false;
    double max_cross_deviation = 0.0;
    double max_equalness_deviation = 0.0;
    double deviation_from_maximally_mixed = 0.0;
};

namespace detail {

inline void require_orthonormal(const std::vector<SparsePureState>& basis, double t) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = i; j < basis.size(); ++j) {
            cxd g = inner(basis[i], basis[j]);
            double want = i == j ? 1.0 : 0.0;
            if (std::abs(g - want) > t)
                throw InputError("basis is not orthonormal within tolerance");
        }
    }
}

}  // namespace detail

inline ErasureCheckReport check_erasure_condition(const std::vector<SparsePureState>& basis,
                                                  const std::vector<int>& erased,
                                                  double tolerance = 1e-9) {
    if (basis.empty()) throw InputError("check_erasure_condition: empty basis");
    detail::require_orthonormal(basis, 1e-9);
    ErasureCheckReport rep;
    rep.erased = erased;

    const int levels = static_cast<int>(basis.size());
    std::optional<DenseOperator> first_diag;
    for (int k1 = 0; k1 < levels; ++k1) {
        for (int k2 = k1; k2 < levels; ++k2) {
            DenseOperator r = reduced_cross_operator(basis[k1], basis[k2], erased);
            if (k1 == k2) {
                if (!first_diag) {
                    first_diag = r;
                    rep.deviation_from_maximally_mixed =
                        operator_deviation(r, DenseOperator::identity(r.dim, 1.0 / r.dim));
                } else {
                    rep.max_equalness_deviation =
                        std::max(rep.max_equalness_deviation, operator_deviation(r, *first_diag));
                }
            } else {
                rep.max_cross_deviation = std::max(rep.max_cross_deviation, max_abs(r));
            }
        }
    }
    rep.pass = rep.max_cross_deviation <= tolerance && rep.max_equalness_deviation <= tolerance;
    return rep;
}

/// Erasure-recovery isometry data: orthonormal vectors w_{k,b} on the kept
/// positions, indexed by logical level k and junk index b, with weights
/// lambda_b summing to one. For any encoded alpha the received state equals
/// sum_b lambda_b |w(alpha,b)><w(alpha,b)| with w(alpha,b) = sum_k alpha_k
/// w_{k,b}.
struct RecoveryMap {
    std::vector<int> erased;
    SystemShape kept_shape;
    int levels = 0;
    std::vector<double> junk_weights;
    std::vector<std::vector<SparsePureState>> vectors;  ///< [k][b]
};

/// Builds the recovery map from the Gram structure of the erased-side
/// decomposition |phi_k> = sum_a |a>_erased |u_{k,a}>_kept.
///
/// The Gram blocks <u_{k1,a1}|u_{k2,a2}> must vanish for k1 != k2 and be a
/// k-independent matrix G otherwise; both are verified against the tolerance.
/// With G = sum_b lambda_b e_b e_b† the vectors w_{k,b} = lambda_b^{-1/2}
/// sum_a e_b[a] |u_{k,a}> form an orthonormal family ((U† G U) = Lambda with
/// unitary U), verified before returning. An empty erased set yields the
/// trivial map w_{k,0} = |phi_k>.
inline RecoveryMap build_recovery(const std::vector<SparsePureState>& basis,
                                  const std::vector<int>& erased, double tolerance = 1e-10) {
    if (basis.empty()) throw InputError("build_recovery: empty basis");
    detail::require_orthonormal(basis, 1e-9);
    const int levels = static_cast<int>(basis.size());
    const SystemShape& shape = basis.front().shape;
    const int n = shape.positions();

    RecoveryMap map;
    map.erased = erased;
    map.levels = levels;

    if (erased.empty()) {
        map.kept_shape = shape;
        map.junk_weights = {1.0};
        for (const auto& phi : basis) map.vectors.push_back({phi});
        return map;
    }

    std::vector<int> e = detail::validate_positions(shape, erased, "build_recovery");
    if (static_cast<int>(e.size()) >= n)
        throw InputError("build_recovery: erased set must be a proper subset");
    std::vector<bool> erased_mask(n, false);
    for (int p : e) erased_mask[p - 1] = true;

    std::vector<int> kept_dims, erased_dims;
    for (int i = 0; i < n; ++i)
        (erased_mask[i] ? erased_dims : kept_dims).push_back(shape.dims[i]);
    map.kept_shape = SystemShape(kept_dims);
    SystemShape erased_shape{erased_dims};
    const int dim_e = static_cast<int>(erased_shape.total_dim());

    // u[k][a]: unnormalized kept-side vectors
    std::vector<std::vector<SparsePureState>> u(
        levels, std::vector<SparsePureState>(dim_e, SparsePureState(map.kept_shape)));
    for (int k = 0; k < levels; ++k) {
        for (const auto& [b, amp] : basis[k].amps) {
            BasisString kept, er;
            for (int i = 0; i < n; ++i) (erased_mask[i] ? er : kept).push_back(b[i]);
            u[k][basis_rank(er, erased_shape)].amps[std::move(kept)] += amp;
        }
    }

    // Gram structure: cross blocks vanish, diagonal blocks k-independent.
    DenseOperator gram(dim_e);
    double worst = 0.0;
    for (int k1 = 0; k1 < levels; ++k1) {
        for (int k2 = k1; k2 < levels; ++k2) {
            for (int a1 = 0; a1 < dim_e; ++a1) {
                for (int a2 = 0; a2 < dim_e; ++a2) {
                    cxd g = inner(u[k1][a1], u[k2][a2]);
                    if (k1 == k2 && k1 == 0) {
                        gram.at(a1, a2) = g;
                    } else if (k1 == k2) {
                        worst = std::max(worst, std::abs(g - gram.at(a1, a2)));
                    } else {
                        worst = std::max(worst, std::abs(g));
                    }
                }
            }
        }
    }
    if (worst > tolerance)
        throw NotCorrectableError("build_recovery: Gram factorization violated", worst);

    auto es = hermitian_eigensystem(gram);
    for (std::size_t b = 0; b < es.values.size(); ++b) {
        if (es.values[b] <= 1e-12) continue;  // null directions carry no received weight
        map.junk_weights.push_back(es.values[b]);
    }

    map.vectors.assign(levels, {});
    for (int k = 0; k < levels; ++k) {
        for (std::size_t b = 0; b < es.values.size(); ++b) {
            if (es.values[b] <= 1e-12) continue;
            SparsePureState w(map.kept_shape);
            const double inv = 1.0 / std::sqrt(es.values[b]);
            for (int a = 0; a < dim_e; ++a) {
                if (es.vectors[b][a] == cxd(0.0)) continue;
                for (const auto& [bs, amp] : u[k][a].amps)
                    w.amps[bs] += inv * es.vectors[b][a] * amp;
            }
            w.cleanup();
            map.vectors[k].push_back(std::move(w));
        }
    }

    // orthonormality of the full family
    double ortho_dev = 0.0;
    for (int k1 = 0; k1 < levels; ++k1)
        for (std::size_t b1 = 0; b1 < map.junk_weights.size(); ++b1)
            for (int k2 = k1; k2 < levels; ++k2)
                for (std::size_t b2 = 0; b2 < map.junk_weights.size(); ++b2) {
                    cxd g = inner(map.vectors[k1][b1], map.vectors[k2][b2]);
                    double want = (k1 == k2 && b1 == b2) ? 1.0 : 0.0;
                    ortho_dev = std::max(ortho_dev, std::abs(g - want));
                }
    if (ortho_dev > 1e-10)
        throw InternalConsistencyError("build_recovery: recovery vectors not orthonormal");

    double wsum = 0.0;
    for (double l : map.junk_weights) wsum += l;
    if (std::abs(wsum - 1.0) > 1e-10)
        throw NotCorrectableError("build_recovery: junk weights do not sum to one",
                                  std::abs(wsum - 1.0));
    return map;
}

/// Contracts the received state against the recovery family: logical matrix
/// rho_L[k1,k2] = sum_b <w_{k1,b}| rho |w_{k2,b}>. Support outside the family
/// beyond the tolerance raises DecodeFailure carrying the leaked mass.
inline DensityOperator apply_recovery(const RecoveryMap& map, const DensityOperator& received,
                                      double leak_tolerance = tol::decode_fidelity) {
    if (received.shape != map.kept_shape)
        throw InputError("apply_recovery: received state lives on the wrong shape");
    const int levels = map.levels;
    const int junk = static_cast<int>(map.junk_weights.size());

    DenseOperator logical(levels);
    for (const auto& part : received.parts) {
        // overlaps[k][b] = <w_{k,b}|psi>
        std::vector<std::vector<cxd>> ov(levels, std::vector<cxd>(junk));
        for (int k = 0; k < levels; ++k)
            for (int b = 0; b < junk; ++b) ov[k][b] = inner(map.vectors[k][b], part.state);
        for (int k1 = 0; k1 < levels; ++k1)
            for (int k2 = 0; k2 < levels; ++k2)
                for (int b = 0; b < junk; ++b)
                    logical.at(k1, k2) += part.weight * ov[k1][b] * std::conj(ov[k2][b]);
    }

    const double captured = logical.trace().real();
    const double leak = received.trace() - captured;
    if (leak > leak_tolerance)
        throw DecodeFailure("apply_recovery: received state leaks outside the recovery space",
                            leak);

    auto es = hermitian_eigensystem(logical);
    DensityOperator out{SystemShape(std::vector<int>{levels})};
    for (std::size_t b = 0; b < es.values.size(); ++b) {
        if (es.values[b] <= 1e-14) continue;
        SparsePureState comp(out.shape);
        double nrm = 0.0;
        for (int k = 0; k < levels; ++k) nrm += std::norm(es.vectors[b][k]);
        for (int k = 0; k < levels; ++k) {
            if (std::abs(es.vectors[b][k]) < tol::sparsity_floor) continue;
            comp.amps[BasisString{static_cast<Symbol>(k)}] =
                es.vectors[b][k] / std::sqrt(nrm);
        }
        out.parts.push_back({es.values[b], std::move(comp)});
    }
    return out;
}

/// Decodes one deletion: by permutation invariance the unknown deleted
/// position may be treated as an erasure at position 1, so the received n-1
/// qudits are the kept positions 2..n.
inline DensityOperator correct_deletion(const PiCode& code, const DensityOperator& received) {
    std::vector<int> erased{1};
    RecoveryMap map = build_recovery(code.logical_basis, erased);
    return apply_recovery(map, received);
}

struct CodeMetrics {
    int n = 0;
    int ell = 0;
    int levels = 0;
    double rate = 0.0;
};

/// rate = (log_ell M) / n.
inline CodeMetrics code_metrics(const PiCode& code) {
    CodeMetrics m;
    m.n = code.length();
    m.ell = code.local_dim();
    m.levels = code.levels();
    m.rate = m.ell > 1 ? std::log(static_cast<double>(m.levels)) /
                             std::log(static_cast<double>(m.ell)) / m.n
                       : 0.0;
    return m;
}

}  // namespace qdel
