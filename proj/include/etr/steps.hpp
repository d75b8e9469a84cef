#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "etr/codes.hpp"
#include "etr/order.hpp"

namespace etr {

/// Finite 0-1 prefix Z[m]: bit i says whether code i belongs to Z.
using BitPrefix = std::vector<std::uint8_t>;
using BitView = std::span<const std::uint8_t>;

/// Confirm <-> phi_0 holds, Refute <-> psi_0 holds.
enum class Decision : std::uint8_t { Unknown, Confirm, Refute };

std::string_view to_string(Decision d);

/// A step formula in Kleene normal form. Implementations must be monotone
/// (a decision survives every extension of the prefix), never Confirm and
/// Refute on comparable prefixes, and never look past the end of the prefix.
class StepPredicate {
public:
    virtual ~StepPredicate() = default;

    virtual Decision decide(Natural n, Code x, BitView prefix) const = 0;

    /// Whether bit `index` can influence decide(n, x, .). Answering false
    /// promises the decision is invariant under flipping that bit.
    virtual bool reads(Natural /*n*/, Code /*x*/, Code /*index*/) const { return true; }

    virtual std::string name() const = 0;
};

using PredicatePtr = std::shared_ptr<const StepPredicate>;

inline Decision step_decide(const StepPredicate& p, Natural n, Code x, BitView prefix) {
    return p.decide(n, x, prefix);
}

struct MonotonicityReport {
    bool ok = true;
    std::uint64_t prefixes_checked = 0;
    // First violation: `extension` extends `prefix` but the decision changed.
    BitPrefix prefix;
    BitPrefix extension;
    Decision before = Decision::Unknown;
    Decision after = Decision::Unknown;

    std::string describe() const;
};

/// Exhaustive over all prefixes of length <= depth.
MonotonicityReport check_monotone(const StepPredicate& p, Natural n, Code x, unsigned depth);

// ---------------------------------------------------------------------------
// Witness predicates P(x, n, m) for the induction encoding.

class WitnessPredicate {
public:
    virtual ~WitnessPredicate() = default;
    virtual bool holds(Code x, Natural n, Natural m) const = 0;
    /// Every witness m satisfies m < bound, when a bound is known.
    virtual std::optional<Natural> witness_bound(Code /*x*/, Natural /*n*/) const { return std::nullopt; }
    virtual std::string name() const = 0;
};

using WitnessPtr = std::shared_ptr<const WitnessPredicate>;

/// P(x,n,m) := m = pair(x,n).
WitnessPtr sum_witness();
/// Like sum_witness, but never true at x = hole.
WitnessPtr hole_at(Code hole);
/// holds'(x,n,m) := holds(x,n,m) and no m' < m holds.
WitnessPtr normalized(WitnessPtr inner);

// ---------------------------------------------------------------------------
// Library predicates

/// Confirm iff n even, Refute iff n odd, on every prefix.
PredicatePtr parity_predicate();

/// Undecided below length 3; then Confirm iff s_0 = 1.
PredicatePtr length3_predicate();

/// Confirm iff the prefix contains a 0: undecided forever along the all-ones path.
PredicatePtr all_ones_divergent_predicate();

/// Always Unknown.
PredicatePtr never_predicate();

/// Confirm iff |s| = 2. Not monotone; exists as a negative control.
PredicatePtr broken_predicate();

/// Refutes <0> but Confirms every prefix of length >= 2. Not monotone: the
/// engines read it at different lengths and disagree.
PredicatePtr fickle_predicate();

/// Induction encoding over a linear order X:
///   phi(n,x,Z)     = exists m (P(x,n,m) and every stage code c <= m below x is in Z)
///   not psi(n,x,Z) = every stage code c below x with no witness under c is in Z
/// Both quantifiers range over codes < |s|. When P has a witness bound B, the
/// prefix also Refutes once |s| >= B and no m < B is a witness.
PredicatePtr induction_predicate(WitnessPtr witness, Order order);

/// phi(n,x,Z) = exists m <= x with f(m) = n, or (x*<0>, n) in Z, or (x*<1>, n) in Z.
/// Children missing from the tree count as absent.
PredicatePtr tree_recursion_predicate(std::function<Natural(Natural)> f, Order tree, std::string f_name = "f");

struct RandomPredicateOptions {
    std::uint64_t seed = 1;
    Natural window = 8;        // decision length is drawn from [0, window]
    double partial = 0.0;      // probability that some (n,x) keeps one row Unknown forever
};

/// Seeded random monotone predicate. For each (n, x) it reads up to three
/// stage codes below x that are < its decision length d and decides by a
/// truth table once |s| >= d.
PredicatePtr random_predicate(const RandomPredicateOptions& options, Order order);

/// Plug-in predicate built from plain functions.
PredicatePtr function_predicate(std::string name, std::function<Decision(Natural, Code, BitView)> decide,
                                std::function<bool(Natural, Code, Code)> reads = {});

/// True iff index codes a stage (y, m) with y a member strictly below x.
bool is_stage_below(const Order& order, Code x, Code index);

}  // namespace etr
