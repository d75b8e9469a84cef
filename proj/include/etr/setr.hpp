#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "etr/family.hpp"
#include "etr/order.hpp"
#include "etr/steps.hpp"

namespace etr::setr {

/// One P(m, y, s) layer of a term. Its bits are the all-bit part of s; a
/// nested term, if any, is the next frame of the chain.
struct Frame {
    Natural m = 0;
    Code y = 0;
    BitPrefix bits;
    bool operator==(const Frame&) const = default;
};

/// A stage whose nested evaluation finished during a step.
struct Resolved {
    Stage stage;
    bool value;
};

class Term;
/// One small-step rewrite of `t` itself. Returns the stage that finished, if
/// any. Throws Error on 0 or 1.
std::optional<Resolved> step_in_place(Term& t, const StepPredicate& p, const Order& X);

/// Evaluation term: 0, 1, or P(m, y, s) where the last entry of s may itself
/// be a term. A proper term is stored as its chain of frames, outermost
/// first; only the last frame has no nested term.
class Term {
public:
    enum class Kind : std::uint8_t { Zero, One, Proper };

    static Term zero() { return Term(Kind::Zero, {}); }
    static Term one() { return Term(Kind::One, {}); }
    static Term proper(Natural m, Code y, BitPrefix bits = {});
    /// Throws Error on an empty chain.
    static Term chain(std::vector<Frame> frames);

    Kind kind() const { return kind_; }
    bool terminal() const { return kind_ != Kind::Proper; }
    const std::vector<Frame>& frames() const { return frames_; }
    std::size_t depth() const { return frames_.size(); }

    /// 0, 1, or {"m":..,"y":..,"s":[bits..., nested]}.
    nlohmann::json to_json() const;

    bool operator==(const Term&) const = default;

private:
    Term(Kind k, std::vector<Frame> frames) : kind_(k), frames_(std::move(frames)) {}
    friend std::optional<Resolved> step_in_place(Term& t, const StepPredicate& p, const Order& X);

    Kind kind_;
    std::vector<Frame> frames_;
};

/// One small-step rewrite. Throws Error on 0 or 1.
Term step_term(const Term& t, const StepPredicate& p, const Order& X);

// ---------------------------------------------------------------------------
// Ranks

/// Element of T': Bot0 < Bot1 < every Tuple(m, y, s, b).
struct TElem {
    enum class Kind : std::uint8_t { Bot0, Bot1, Tuple };
    Kind kind = Kind::Bot0;
    Natural m = 0;
    Code y = 0;
    BitPrefix s;
    std::uint8_t b = 0;

    static TElem bot0() { return {}; }
    static TElem bot1() { return {Kind::Bot1, 0, 0, {}, 0}; }
    static TElem tuple(Natural m, Code y, BitPrefix s, std::uint8_t b) { return {Kind::Tuple, m, y, std::move(s), b}; }
    bool operator==(const TElem&) const = default;
};

struct RankEntry {
    Code x = 0;
    TElem t;
    bool operator==(const RankEntry&) const = default;
};

/// Element of T^X: entries with strictly descending x.
struct Rank {
    std::vector<RankEntry> entries;
    bool operator==(const Rank&) const = default;
    nlohmann::json to_json() const;
};

/// beta(t). Needs the least element of X.
Rank rank_beta(const Term& t, const Order& X, const StepPredicate& p);

/// Tuples compare by m, then y in X, then s with a prefix above its proper
/// extensions, then b. Incomparable s under equal (m, y) gives Incomparable.
Ordering telem_compare(const TElem& a, const TElem& b, const Order& X);

/// Lexicographic over entries with longer sequences above their prefixes.
/// Ordering::Incomparable is the incomparability diagnostic.
Ordering rank_compare(const Rank& r1, const Rank& r2, const Order& X);

struct DescentReport {
    bool ok = true;
    std::uint64_t comparisons = 0;
    /// Step index i such that beta(f_{i+1}) fails to lie below beta(f_i).
    std::optional<std::uint64_t> violation_step;
    Ordering found = Ordering::Less;
    bool incomparable = false;

    std::string describe() const;
};

/// Checks beta strictly descends along consecutive terms as they arrive.
class DescentMonitor {
public:
    DescentMonitor(const Order& X, const StepPredicate& p) : X_(X), p_(p) {}

    /// Rank of `t`, after comparing it to the previous one.
    const Rank& observe(const Term& t);
    const DescentReport& report() const { return report_; }

private:
    const Order& X_;
    const StepPredicate& p_;
    std::optional<Rank> previous_;
    std::uint64_t index_ = 0;
    DescentReport report_;
};

DescentReport monitor_descent(const std::vector<Term>& trace, const Order& X, const StepPredicate& p);

// ---------------------------------------------------------------------------
// Evaluation

struct EvalOptions {
    bool trace = false;    // keep every term in the result
    bool monitor = true;   // check rank descent along the way
    /// Called with (step index, term) for every term including the first.
    std::function<void(std::uint64_t, const Term&)> on_step;
};

struct EvalResult {
    bool value = false;
    std::uint64_t steps = 0;
    std::vector<Term> trace;
    DescentReport descent;
    /// Values of every stage finished inside the run, the top stage included.
    std::map<Stage, bool> observed;
    /// First stage whose nested evaluations disagreed, if any.
    std::optional<Stage> inconsistent;
};

/// Throws UnsupportedOrder unless X is a linear well-order with a least
/// element; NotAMember; FuelExhausted after `fuel` steps.
void require_setr_order(const Order& X);

/// Rewrites P(n, x, <>) until it reaches 0 or 1.
EvalResult eval_term(const StepPredicate& p, const Order& X, Natural n, Code x, std::uint64_t fuel,
                     const EvalOptions& options = {});

struct MaterializeStats {
    std::uint64_t evaluations = 0;
    std::uint64_t total_steps = 0;
    std::uint64_t descent_violations = 0;
    std::uint64_t inconsistencies = 0;
    std::string first_problem;
};

/// Sees (n, x, step index, term) for every term of every evaluation.
using StepObserver = std::function<void(Natural, Code, std::uint64_t, const Term&)>;

/// Family over x in enumerate(X, x_budget), n < n_max. The closure holds the
/// values observed in nested evaluations. Rank descent is monitored when
/// `stats` is given.
Family materialize_family(const PredicatePtr& p, const Order& X, Natural n_max, std::size_t x_budget,
                          std::uint64_t fuel, MaterializeStats* stats = nullptr, const StepObserver& observer = {});

}  // namespace etr::setr
