#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "etr/family.hpp"
#include "etr/order.hpp"
#include "etr/setr.hpp"
#include "etr/steps.hpp"

namespace etr::probe {

// ---------------------------------------------------------------------------
// Descending chains

enum class ChainStatus : std::uint8_t {
    Found,
    ConclusiveNone,  // the whole (finite) order was searched
    Inconclusive,    // budget or enumeration ran out first
};

std::string_view to_string(ChainStatus s);

struct ChainResult {
    ChainStatus status = ChainStatus::Inconclusive;
    /// Strictly descending: witness[i+1] < witness[i].
    std::vector<Code> witness;
    std::uint64_t expansions = 0;  // comparisons spent
    std::size_t pool = 0;          // elements in the last searched pool
    std::size_t longest = 0;       // longest chain seen in that pool

    nlohmann::json to_json() const;
};

/// Iterative deepening over enumerate(o, 8), enumerate(o, 16), ...; in each
/// pool a depth-first descent from the top elements with a longest-chain
/// memo. Every comparison counts against `budget`.
ChainResult find_descending_chain(const Order& o, std::size_t target_length, std::uint64_t budget);

// ---------------------------------------------------------------------------
// Fixpoint check of H_phi(X, Y) on a family fragment

struct FixpointViolation {
    Stage stage;
    bool member = false;
    Decision decision = Decision::Unknown;
};

struct FixpointReport {
    bool ok = true;
    std::uint64_t checked = 0;
    /// Lower stages outside the family closure that had to be recomputed.
    std::uint64_t resolved_outside = 0;
    std::vector<FixpointViolation> violations;

    nlohmann::json to_json() const;
};

/// For every (x, n) of the domain: (x, n) in fam iff p confirms the prefix of
/// Y^x, extended bit by bit until decided. Bits of stages in fam.closure are
/// read from it; other lower stages are computed from their own prefixes.
/// Throws FuelExhausted when a prefix stays undecided past `fuel` bits.
FixpointReport check_fixpoint(const Family& fam, const StepPredicate& p, const Order& X,
                              std::uint64_t fuel = 100000);

// ---------------------------------------------------------------------------
// Engine cross-validation

struct EngineOutcome {
    std::optional<Family> family;
    bool fuel_exhausted = false;
    std::string error;  // empty when the engine finished
};

struct AgreementReport {
    EngineOutcome wetr;
    EngineOutcome setr;
    setr::MaterializeStats setr_stats;
    bool both_terminated = false;
    bool agree = false;
    std::vector<Stage> only_wetr;
    std::vector<Stage> only_setr;

    nlohmann::json to_json() const;
};

/// Rank descent of the setr runs is monitored (into setr_stats) when
/// `monitor_ranks` is set.
AgreementReport engines_agree(const PredicatePtr& p, const Order& X, Natural n_max, std::size_t x_budget,
                              std::uint64_t fuel, bool monitor_ranks = true);

// ---------------------------------------------------------------------------
// Erasure f -> f^x

/// Drops the entries (y, a) of f with y <_X x. Throws InvalidElement for an
/// invalid f and NotAMember for x outside X.
ExpElement erase_below(const Order& alpha, const Order& X, const ExpElement& f, Code x);

struct ErasureReport {
    bool ok = true;
    bool exhaustive = false;
    std::uint64_t checks = 0;
    std::uint64_t violations = 0;
    // First violation: f < g but erase(f, x) > erase(g, x).
    std::optional<std::tuple<Code, Code, Code>> first;

    nlohmann::json to_json() const;
};

/// f < g implies erase_below(f, x) <= erase_below(g, x), over every pair of
/// alpha^X and every x when alpha^X has at most 200 elements; otherwise over
/// the first `sample` enumerated elements and members of X.
ErasureReport check_erasure_monotone(const Order& alpha, const Order& X, std::size_t sample);

}  // namespace etr::probe
