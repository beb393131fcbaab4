#pragma once

#include <optional>
#include <string>

namespace cvfix {

/// Counterexample recorded by a sampling checker: which clause failed and a
/// human-readable rendering of the offending inputs/values.
struct CheckWitness {
    std::string clause;
    std::string detail;
};

/// Outcome of a sampling-based axiom/hypothesis check.
///
/// Invariant: passed implies witness is empty; a failed report carries the
/// first counterexample encountered (deterministic for a fixed seed).
struct CheckReport {
    bool passed = true;
    long long samples_tested = 0;
    std::optional<CheckWitness> witness;

    static CheckReport pass(long long samples) { return {true, samples, std::nullopt}; }

    static CheckReport fail(long long samples, std::string clause, std::string detail) {
        return {false, samples, CheckWitness{std::move(clause), std::move(detail)}};
    }
};

}  // namespace cvfix
