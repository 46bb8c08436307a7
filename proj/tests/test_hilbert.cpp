// Copyright (c) 2026 qdel contributors.
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <numeric>
#include <random>
#include <vector>

#include "qdel/hilbert.hpp"

using namespace qdel;

namespace {

// Dense partial-trace oracle by explicit index contraction over the full
// product space; independent of the sparse implementation path.
struct DenseOracle {
    std::vector<cxd> vec;  // full state vector, index = basis_rank
    SystemShape shape;

    static DenseOracle of(const SparsePureState& s) {
        DenseOracle d;
        d.shape = s.shape;
        d.vec.assign(s.shape.total_dim(), cxd(0.0));
        for (const auto& [b, a] : s.amps) d.vec[basis_rank(b, s.shape)] = a;
        return d;
    }

    // rho_keep[x, y] = sum_t <x,t| psi psi† |y,t>
    DenseOperator reduced(const std::vector<int>& keep) const {
        const int n = shape.positions();
        std::vector<bool> mask(n, false);
        for (int p : keep) mask[p - 1] = true;
        std::vector<int> kd;
        for (int i = 0; i < n; ++i)
            if (mask[i]) kd.push_back(shape.dims[i]);
        SystemShape kshape{kd};
        DenseOperator rho(static_cast<int>(kshape.total_dim()));
        for (std::uint64_t x = 0; x < vec.size(); ++x) {
            if (vec[x] == cxd(0.0)) continue;
            BasisString bx = basis_unrank(x, shape);
            for (std::uint64_t y = 0; y < vec.size(); ++y) {
                if (vec[y] == cxd(0.0)) continue;
                BasisString by = basis_unrank(y, shape);
                bool same_traced = true;
                for (int i = 0; i < n; ++i)
                    if (!mask[i] && bx[i] != by[i]) same_traced = false;
                if (!same_traced) continue;
                BasisString kx, ky;
                for (int i = 0; i < n; ++i) {
                    if (mask[i]) {
                        kx.push_back(bx[i]);
                        ky.push_back(by[i]);
                    }
                }
                rho.at(static_cast<int>(basis_rank(kx, kshape)),
                       static_cast<int>(basis_rank(ky, kshape))) += vec[x] * std::conj(vec[y]);
            }
        }
        return rho;
    }
};

SparsePureState random_state(std::mt19937& rng, const SystemShape& shape, int support) {
    std::normal_distribution<double> g(0.0, 1.0);
    SparsePureState s(shape);
    std::uniform_int_distribution<std::uint64_t> pick(0, shape.total_dim() - 1);
    while (static_cast<int>(s.amps.size()) < support) {
        s.amps[basis_unrank(pick(rng), shape)] = cxd(g(rng), g(rng));
    }
    return s.normalized();
}

SparsePureState ket(std::vector<int> dims, std::vector<int> symbols) {
    BasisString b(symbols.begin(), symbols.end());
    return SparsePureState::basis_state(SystemShape(std::move(dims)), std::move(b));
}

SparsePureState nakahara_zero() {
    SparsePureState s{SystemShape(3, 3)};
    for (int a = 0; a < 3; ++a) {
        s.amps[BasisString{Symbol(a), Symbol(a), Symbol(a)}] = 1.0 / std::sqrt(3.0);
    }
    return s;
}

}  // namespace

TEST_CASE("tensor products", "[hilbert]") {
    auto t = tensor(ket({2}, {0}), ket({2}, {1}));
    REQUIRE(t.amps.size() == 1);
    CHECK(t.amps.at(BasisString{0, 1}) == cxd(1.0));

    SparsePureState plus{SystemShape(1, 2)};
    plus.amps[BasisString{0}] = 1.0 / std::sqrt(2.0);
    plus.amps[BasisString{1}] = 1.0 / std::sqrt(2.0);
    auto t2 = tensor(plus, ket({2}, {0}));
    REQUIRE(t2.amps.size() == 2);
    CHECK(std::abs(t2.amps.at(BasisString{0, 0}) - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(t2.amps.at(BasisString{1, 0}) - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(t2.is_normalized());
}

TEST_CASE("partial trace of a Bell pair is maximally mixed", "[hilbert]") {
    SparsePureState bell{SystemShape(2, 2)};
    bell.amps[BasisString{0, 0}] = 1.0 / std::sqrt(2.0);
    bell.amps[BasisString{1, 1}] = 1.0 / std::sqrt(2.0);

    auto rho = partial_trace(bell, {1});
    CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
    auto m = to_dense(rho);
    CHECK(operator_deviation(m, DenseOperator::identity(2, 0.5)) < 1e-12);
}

TEST_CASE("partial trace keeping everything is the projector", "[hilbert]") {
    std::mt19937 rng(11);
    auto psi = random_state(rng, SystemShape(3, 2), 4);
    auto rho = partial_trace(psi, {1, 2, 3});
    REQUIRE(rho.parts.size() == 1);
    CHECK(std::abs(fidelity(psi, rho) - 1.0) < 1e-12);
}

TEST_CASE("reduced single qudit of the three-qutrit repetition-class state", "[hilbert]") {
    auto rho = partial_trace(nakahara_zero(), {1});
    auto m = to_dense(rho);
    CHECK(operator_deviation(m, DenseOperator::identity(3, 1.0 / 3.0)) < 1e-15);
    // cross-check with the erased-side reducer
    auto r = reduced_cross_operator(nakahara_zero(), nakahara_zero(), {1});
    CHECK(operator_deviation(r, DenseOperator::identity(3, 1.0 / 3.0)) < 1e-15);
}

TEST_CASE("partial trace matches the dense oracle on random states", "[hilbert]") {
    std::mt19937 rng(20260809);
    std::uniform_int_distribution<int> nd(2, 6), dd(2, 4);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<int> dims;
        int n = nd(rng);
        std::uint64_t total = 1;
        for (int i = 0; i < n; ++i) {
            int d = dd(rng);
            if (total * d > 4096) d = 2;
            if (total * d > 4096) break;
            dims.push_back(d);
            total *= d;
        }
        while (dims.size() < 2) dims.push_back(2);
        SystemShape shape{dims};
        auto psi = random_state(rng, shape, std::min<int>(8, static_cast<int>(shape.total_dim())));

        int keep_count = 1 + static_cast<int>(rng() % dims.size());
        std::vector<int> all(dims.size());
        std::iota(all.begin(), all.end(), 1);
        std::shuffle(all.begin(), all.end(), rng);
        std::vector<int> keep(all.begin(), all.begin() + keep_count);
        std::sort(keep.begin(), keep.end());

        auto rho = partial_trace(psi, keep);
        CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
        auto dense = to_dense(rho);
        CHECK(dense.hermiticity_deviation() < 1e-12);
        CHECK(operator_deviation(dense, DenseOracle::of(psi).reduced(keep)) < 1e-12);
    }
}

TEST_CASE("tracing out the second tensor factor returns the first", "[hilbert]") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        auto a = random_state(rng, SystemShape(2, 3), 4);
        auto b = random_state(rng, SystemShape(2, 2), 3);
        auto rho = partial_trace(tensor(a, b), {1, 2});
        CHECK(std::abs(fidelity(a, rho) - 1.0) < 1e-12);
        CHECK(density_deviation(rho, DensityOperator::pure(a)) < 1e-12);
    }
}

TEST_CASE("computational measurement", "[hilbert]") {
    auto rho01 = DensityOperator::pure(ket({2, 2}, {0, 1}));
    auto outcomes = measure_computational(rho01, {1});
    REQUIRE(outcomes.size() == 1);
    CHECK(outcomes[0].outcome == BasisString{0});
    CHECK(std::abs(outcomes[0].probability - 1.0) < 1e-12);

    // I/2 (x) |0><0| : measuring position 1 gives 0,1 with probability 1/2
    SparsePureState b0{SystemShape(2, 2)}, b1{SystemShape(2, 2)};
    b0.amps[BasisString{0, 0}] = 1.0;
    b1.amps[BasisString{1, 0}] = 1.0;
    DensityOperator mixed{SystemShape(2, 2)};
    mixed.parts.push_back({0.5, b0});
    mixed.parts.push_back({0.5, b1});
    auto out2 = measure_computational(mixed, {1});
    REQUIRE(out2.size() == 2);
    CHECK(out2[0].outcome == BasisString{0});
    CHECK(std::abs(out2[0].probability - 0.5) < 1e-12);
    CHECK(std::abs(out2[1].probability - 0.5) < 1e-12);
    for (const auto& o : out2) {
        CHECK(std::abs(fidelity(ket({2}, {0}), o.post_state) - 1.0) < 1e-12);
    }
}

TEST_CASE("measurement probabilities are diagonal marginals", "[hilbert]") {
    std::mt19937 rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        auto psi = random_state(rng, SystemShape(4, 2), 6);
        auto rho = partial_trace(psi, {1, 2, 3});
        auto outcomes = measure_computational(rho, {2, 3});
        double total = 0.0;
        for (const auto& o : outcomes) {
            // marginal = sum over the kept position of diagonal entries
            double marginal = 0.0;
            for (int s = 0; s < 2; ++s) {
                BasisString full{Symbol(s), o.outcome[0], o.outcome[1]};
                marginal += rho.entry(full, full).real();
            }
            CHECK(std::abs(o.probability - marginal) < 1e-12);
            total += o.probability;
        }
        CHECK(std::abs(total - 1.0) < 1e-9);
    }
}

TEST_CASE("permutations act as expected", "[hilbert]") {
    auto s01 = ket({2, 2}, {0, 1});
    CHECK(permute_positions(s01, {1, 2}).amps == s01.amps);
    auto swapped = permute_positions(s01, {2, 1});
    REQUIRE(swapped.amps.size() == 1);
    CHECK(swapped.amps.count(BasisString{1, 0}) == 1);

    // group action: applying sigma then tau equals the composition
    std::mt19937 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        auto psi = random_state(rng, SystemShape(4, 3), 5);
        std::vector<int> sigma{1, 2, 3, 4}, tau{1, 2, 3, 4};
        std::shuffle(sigma.begin(), sigma.end(), rng);
        std::shuffle(tau.begin(), tau.end(), rng);
        std::vector<int> comp(4);
        for (int i = 0; i < 4; ++i) comp[i] = tau[sigma[i] - 1];
        auto two_step = permute_positions(permute_positions(psi, sigma), tau);
        auto one_step = permute_positions(psi, comp);
        REQUIRE(two_step.amps.size() == one_step.amps.size());
        for (const auto& [b, a] : one_step.amps) {
            REQUIRE(two_step.amps.count(b) == 1);
            CHECK(std::abs(two_step.amps.at(b) - a) < 1e-15);
        }
    }

    // permuting unequal local dimensions is refused
    auto het = ket({2, 3}, {0, 2});
    CHECK_THROWS_AS(permute_positions(het, {2, 1}), InputError);
}

TEST_CASE("fidelity basics", "[hilbert]") {
    std::mt19937 rng(9);
    auto psi = random_state(rng, SystemShape(2, 3), 4);
    CHECK(std::abs(fidelity(psi, DensityOperator::pure(psi)) - 1.0) < 1e-12);
    CHECK(fidelity(ket({2}, {0}), DensityOperator::pure(ket({2}, {1}))) == 0.0);
    CHECK_THROWS_AS(fidelity(ket({2}, {0}), DensityOperator::pure(ket({3}, {0}))), InputError);
}

TEST_CASE("factor and fuse are inverse reshapes", "[hilbert]") {
    std::mt19937 rng(17);
    auto psi = random_state(rng, SystemShape(3, 6), 7);
    auto split = factor_all_positions(psi, 3, 2);
    REQUIRE(split.shape.dims == std::vector<int>({3, 2, 3, 2, 3, 2}));
    CHECK(std::abs(split.norm() - 1.0) < 1e-12);
    auto back = fuse_adjacent_pairs(split);
    REQUIRE(back.shape == psi.shape);
    for (const auto& [b, a] : psi.amps) {
        REQUIRE(back.amps.count(b) == 1);
        CHECK(std::abs(back.amps.at(b) - a) < 1e-15);
    }
}

TEST_CASE("input validation", "[hilbert]") {
    auto psi = nakahara_zero();
    CHECK_THROWS_AS(partial_trace(psi, {}), InputError);
    CHECK_THROWS_AS(partial_trace(psi, {0}), InputError);
    CHECK_THROWS_AS(partial_trace(psi, {4}), InputError);
    CHECK_THROWS_AS(partial_trace(psi, std::vector<int>{1, 1}), InputError);
    CHECK_THROWS_AS(SparsePureState::basis_state(SystemShape(2, 2), BasisString{0, 2}),
                    InputError);
}

TEST_CASE("hermitian eigensystem basics", "[hilbert]") {
    // known 2x2: [[0,1],[1,0]]
    DenseOperator x(2);
    x.at(0, 1) = 1.0;
    x.at(1, 0) = 1.0;
    auto es = hermitian_eigensystem(x);
    CHECK(std::abs(es.values[0] - 1.0) < 1e-12);
    CHECK(std::abs(es.values[1] + 1.0) < 1e-12);

    // random Hermitian matrices reconstruct from their eigensystem
    std::mt19937 rng(23);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        int d = 2 + static_cast<int>(rng() % 5);
        DenseOperator m(d);
        for (int r = 0; r < d; ++r) {
            m.at(r, r) = g(rng);
            for (int c = r + 1; c < d; ++c) {
                m.at(r, c) = cxd(g(rng), g(rng));
                m.at(c, r) = std::conj(m.at(r, c));
            }
        }
        auto e = hermitian_eigensystem(m);
        REQUIRE(std::is_sorted(e.values.rbegin(), e.values.rend()));
        DenseOperator rec(d);
        for (int b = 0; b < d; ++b)
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c)
                    rec.at(r, c) += e.values[b] * e.vectors[b][r] * std::conj(e.vectors[b][c]);
        CHECK(operator_deviation(rec, m) < 1e-10);
        for (int b1 = 0; b1 < d; ++b1)
            for (int b2 = 0; b2 < d; ++b2) {
                cxd dot = 0.0;
                for (int r = 0; r < d; ++r) dot += std::conj(e.vectors[b1][r]) * e.vectors[b2][r];
                CHECK(std::abs(dot - (b1 == b2 ? 1.0 : 0.0)) < 1e-10);
            }
    }
}
