#pragma once

#include <cstdint>
#include <map>
#include <set>

#include "etr/family.hpp"
#include "etr/order.hpp"
#include "etr/steps.hpp"

namespace etr::wetr {

/// Largest number of undecided prefix classes kept on one level of T(n,x).
inline constexpr std::size_t kMaxFrontier = std::size_t{1} << 20;

/// Least L such that every prefix of length L is decided. Level-by-level
/// search of the tree T(n,x) of undecided prefixes; bits the predicate does
/// not read are fixed to 0. Throws FuelExhausted when more than `fuel` levels
/// stay undecided (T(n,x) looks infinite).
Natural bound_t(const StepPredicate& p, Natural n, Code x, std::uint64_t fuel);

/// Memoized evaluator e(n, x) over a well-founded order.
///
/// e(n,x) computes L = bound_t(n,x), fills a prefix s of length L with
/// s_i = e(m,y) when i = stage_code(y,m) and y is a member below x (0
/// otherwise), and yields 1 iff the predicate confirms s. Recursion uses an
/// explicit work stack whose depth is bounded by the fuel.
class Session {
public:
    Session(PredicatePtr predicate, Order order, std::uint64_t fuel);

    /// Throws NotAMember, FuelExhausted, InconsistentPredicate, UnsupportedOrder
    /// (a cycle below x means the relation is not well-founded after all).
    bool eval(Natural n, Code x);

    const std::map<Stage, bool>& memo() const { return memo_; }
    void clear() { memo_.clear(); }

    const Order& order() const { return order_; }
    const StepPredicate& predicate() const { return *predicate_; }

private:
    PredicatePtr predicate_;
    Order order_;
    std::uint64_t fuel_;
    std::map<Stage, bool> memo_;
};

/// eval_e in a fresh session.
bool eval_e(const PredicatePtr& p, const Order& order, Natural n, Code x, std::uint64_t fuel);

/// Family over x in enumerate(order, x_budget), n < n_max.
Family materialize_family(const PredicatePtr& p, const Order& order, Natural n_max, std::size_t x_budget,
                          std::uint64_t fuel);

}  // namespace etr::wetr
