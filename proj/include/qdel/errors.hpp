// Copyright (c) 2026 qdel contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace qdel {

/// Invalid argument to a library entry point (bad sizes, ranges, malformed input).
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A basis failed the erasure-recovery factorization beyond tolerance.
struct NotCorrectableError : std::runtime_error {
    NotCorrectableError(const std::string& what, double deviation)
        : std::runtime_error(what), deviation(deviation) {}
    double deviation;
};

/// Received state has support outside the recovery subspace.
struct DecodeFailure : std::runtime_error {
    DecodeFailure(const std::string& what, double leaked_mass)
        : std::runtime_error(what), leaked_mass(leaked_mass) {}
    double leaked_mass;
};

/// Marker subsequence is inconsistent with every deletion pattern within budget.
struct TooManyDeletionsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Received state violates the channel model (e.g. marker is not deterministic).
struct ModelViolationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Marker measurement outcome cannot arise from any in-budget deletion.
struct ChannelCorruptionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Internal invariant broke; indicates a bug, never a user error.
struct InternalConsistencyError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace qdel
