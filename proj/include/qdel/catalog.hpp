// Copyright (c) 2026 qdel contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qdel/composed.hpp"
#include "qdel/pi_code.hpp"

namespace qdel {

namespace detail {

inline TypeSet type_set_of(int n, int ell, int t, std::vector<std::vector<int>> classes) {
    TypeSet s;
    s.n = n;
    s.ell = ell;
    s.t = t;
    for (auto& c : classes) s.classes.push_back(TypeClass::of(TypeCounts(std::move(c))));
    return s;
}

inline SparsePureState apply_pauli_x(const SparsePureState& s, int qubit) {
    SparsePureState out(s.shape);
    for (const auto& [b, a] : s.amps) {
        BasisString nb = b;
        nb[qubit] = static_cast<Symbol>(1 - nb[qubit]);
        out.amps[std::move(nb)] = a;
    }
    return out;
}

inline SparsePureState apply_pauli_z(const SparsePureState& s, int qubit) {
    SparsePureState out(s.shape);
    for (const auto& [b, a] : s.amps) out.amps[b] = b[qubit] ? -a : a;
    return out;
}

/// Applies a Pauli string given as ops[i] in {'I','X','Z'} per qubit.
inline SparsePureState apply_pauli_string(const SparsePureState& s, const std::string& ops) {
    SparsePureState out = s;
    for (std::size_t q = 0; q < ops.size(); ++q) {
        if (ops[q] == 'X')
            out = apply_pauli_x(out, static_cast<int>(q));
        else if (ops[q] == 'Z')
            out = apply_pauli_z(out, static_cast<int>(q));
    }
    return out;
}

inline void fix_global_phase(SparsePureState& s) {
    // largest-magnitude amplitude becomes positive real; ties resolved by the
    // first basis string in map order
    double best = 0.0;
    cxd anchor = 1.0;
    for (const auto& [b, a] : s.amps) {
        if (std::abs(a) > best + 1e-12) {
            best = std::abs(a);
            anchor = a;
        }
    }
    s.scale(std::conj(anchor) / std::abs(anchor));
}

}  // namespace detail

/// Nakahara's three-qutrit code as a type-set code.
inline TypeSet nakahara_type_set() { return detail::type_set_of(3, 3, 1, {{3, 0, 0}, {1, 1, 1}}); }

inline PiCode pi_n3_l3() { return PiCode::from_type_set(nakahara_type_set()); }

/// Length-7 ternary set as printed in the source example; fails suitability
/// (the class [3,2,2] collides with itself after one deletion). Kept as a
/// negative fixture.
inline PiCode pi_n7_l3_printed() {
    return PiCode::from_type_set(detail::type_set_of(7, 3, 1, {{7, 0, 0}, {5, 1, 1}, {3, 2, 2}}));
}

/// Length-7 ternary maximal suitable set (one of exactly two; M = 3).
inline PiCode pi_n7_l3_m3() {
    return PiCode::from_type_set(detail::type_set_of(7, 3, 1, {{7, 0, 0}, {5, 1, 1}, {3, 3, 1}}));
}

/// Length-8 quaternary set as printed in the source example; fails
/// suitability ([6,1,1,0] and [4,2,1,1] collide with themselves).
inline PiCode pi_n8_l4_printed() {
    return PiCode::from_type_set(
        detail::type_set_of(8, 4, 1, {{8, 0, 0, 0}, {6, 1, 1, 0}, {4, 4, 0, 0}, {4, 2, 1, 1}}));
}

/// Length-8 quaternary maximum suitable set (M = 7).
inline PiCode pi_n8_l4_m7() {
    return PiCode::from_type_set(detail::type_set_of(8, 4, 1,
                                                     {{8, 0, 0, 0},
                                                      {6, 2, 0, 0},
                                                      {5, 1, 1, 1},
                                                      {4, 4, 0, 0},
                                                      {4, 2, 2, 0},
                                                      {3, 3, 1, 1},
                                                      {2, 2, 2, 2}}));
}

/// The five-qubit distance-3 code: |00000> and |11111> projected with
/// (I+g1)(I+g2)(I+g3)(I+g4) over the cyclic stabilizer generators XZZXI,
/// IXZZX, XIXZZ, ZXIXZ, then normalized with a fixed global phase. Corrects
/// any two erasures.
inline std::vector<SparsePureState> five_qubit_basis() {
    const std::vector<std::string> generators{"XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"};
    std::vector<SparsePureState> basis;
    for (int logical = 0; logical < 2; ++logical) {
        BasisString seed(5, static_cast<Symbol>(logical));
        SparsePureState s = SparsePureState::basis_state(SystemShape(5, 2), seed);
        for (const std::string& g : generators) {
            SparsePureState gs = detail::apply_pauli_string(s, g);
            for (const auto& [b, a] : gs.amps) s.amps[b] += a;
            s.cleanup();
        }
        s = s.normalized();
        detail::fix_global_phase(s);
        basis.push_back(std::move(s));
    }
    // exact orthogonality is inherited from the logical Z operator; verified
    // here so a broken edit cannot ship a tilted basis
    if (std::abs(inner(basis[0], basis[1])) > 1e-12)
        throw InternalConsistencyError("five_qubit_basis: projected states are not orthogonal");
    return basis;
}

inline InnerCode five_qubit_inner() {
    InnerCode code;
    code.n = 5;
    code.ell = 2;
    code.erasure_budget = 2;
    code.logical_basis = five_qubit_basis();
    return code;
}

/// The three-qutrit code viewed as a 1-erasure-correcting inner code.
inline InnerCode nakahara_inner() {
    InnerCode code;
    code.n = 3;
    code.ell = 3;
    code.erasure_budget = 1;
    code.logical_basis = pi_n3_l3().logical_basis;
    return code;
}

/// Composite dimension 6, n = 3, corrects one deletion.
inline ComposedCode composed_n3_l3() { return ComposedCode::of(nakahara_inner()); }

/// Composite dimension 6, n = 5, corrects up to two deletions.
inline ComposedCode composed_five_qubit() { return ComposedCode::of(five_qubit_inner()); }

using CatalogCode = std::variant<PiCode, InnerCode, ComposedCode>;

inline std::vector<std::string> catalog_names() {
    return {"pi-n3-l3",          "pi-n7-l3-printed", "pi-n7-l3-m3",
            "pi-n8-l4-printed",  "pi-n8-l4-m7",      "five-qubit",
            "composed-n3-l3",    "composed-five-qubit"};
}

inline std::optional<CatalogCode> find_catalog(const std::string& name) {
    if (name == "pi-n3-l3") return CatalogCode{pi_n3_l3()};
    if (name == "pi-n7-l3-printed") return CatalogCode{pi_n7_l3_printed()};
    if (name == "pi-n7-l3-m3") return CatalogCode{pi_n7_l3_m3()};
    if (name == "pi-n8-l4-printed") return CatalogCode{pi_n8_l4_printed()};
    if (name == "pi-n8-l4-m7") return CatalogCode{pi_n8_l4_m7()};
    if (name == "five-qubit") return CatalogCode{five_qubit_inner()};
    if (name == "composed-n3-l3") return CatalogCode{composed_n3_l3()};
    if (name == "composed-five-qubit") return CatalogCode{composed_five_qubit()};
    return std::nullopt;
}

}  // namespace qdel
