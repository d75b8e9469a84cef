#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "etr/codes.hpp"
#include "etr/order.hpp"

namespace etr {

/// Budget ran out: the evaluation may diverge on this instance.
class FuelExhausted : public Error {
public:
    using Error::Error;
};

/// A predicate broke its Kleene-normal-form contract during evaluation.
class InconsistentPredicate : public Error {
public:
    using Error::Error;
};

/// An engine refused the order (not well-founded, not linear, unsafe).
class UnsupportedOrder : public Error {
public:
    using Error::Error;
};

/// The pair (x, n) of a recursively defined family Y.
struct Stage {
    Code x = 0;
    Natural n = 0;
    auto operator<=>(const Stage&) const = default;
};

/// Finite fragment of Y over the domain {x in xs} x {n < n_max}.
struct Family {
    explicit Family(Order o) : order(std::move(o)) {}

    Order order;
    Natural n_max = 0;
    std::vector<Code> xs;
    std::set<Stage> members;
    /// Every stage the producing engine evaluated, with its value. Contains
    /// the domain and the lower stages the domain depended on.
    std::map<Stage, bool> closure;

    bool in_domain(const Stage& s) const;
    bool contains(const Stage& s) const { return members.count(s) != 0; }

    /// Sorted array of [x, n] pairs.
    nlohmann::json to_json() const;

    /// Reads the [x, n] array back. Pairs outside the domain are rejected.
    /// The closure is the domain itself.
    static Family from_json(const nlohmann::json& j, Order order, Natural n_max, std::vector<Code> xs);
};

}  // namespace etr
