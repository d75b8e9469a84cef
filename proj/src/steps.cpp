#include "etr/steps.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace etr {

std::string_view to_string(Decision d) {
    switch (d) {
        case Decision::Unknown: return "unknown";
        case Decision::Confirm: return "confirm";
        case Decision::Refute: return "refute";
    }
    return "?";
}

bool is_stage_below(const Order& order, Code x, Code index) {
    const StageRef st = stage_of(index);
    return order.contains(st.x) && order.less(st.x, x);
}

namespace {

std::string bits_to_string(const BitPrefix& bits) {
    std::string s = "<";
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (i) s += ",";
        s += bits[i] ? '1' : '0';
    }
    return s + ">";
}

}  // namespace

std::string MonotonicityReport::describe() const {
    if (ok) return "monotone on " + std::to_string(prefixes_checked) + " prefixes";
    std::ostringstream os;
    os << "decision " << to_string(before) << " at " << bits_to_string(prefix) << " became "
       << to_string(after) << " at " << bits_to_string(extension);
    return os.str();
}

MonotonicityReport check_monotone(const StepPredicate& p, Natural n, Code x, unsigned depth) {
    MonotonicityReport report;
    std::deque<BitPrefix> queue{BitPrefix{}};
    while (!queue.empty()) {
        BitPrefix s = std::move(queue.front());
        queue.pop_front();
        ++report.prefixes_checked;
        if (s.size() >= depth) continue;
        const Decision d = p.decide(n, x, s);
        for (std::uint8_t bit : {std::uint8_t{0}, std::uint8_t{1}}) {
            BitPrefix e = s;
            e.push_back(bit);
            const Decision de = p.decide(n, x, e);
            if (d != Decision::Unknown && de != d) {
                report.ok = false;
                report.prefix = s;
                report.extension = e;
                report.before = d;
                report.after = de;
                return report;
            }
            queue.push_back(std::move(e));
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Witness predicates

namespace {

class SumWitness final : public WitnessPredicate {
public:
    bool holds(Code x, Natural n, Natural m) const override { return m == pair(x, n); }
    std::optional<Natural> witness_bound(Code x, Natural n) const override { return pair(x, n) + 1; }
    std::string name() const override { return "sum-witness"; }
};

class HoleAt final : public WitnessPredicate {
public:
    explicit HoleAt(Code hole) : hole_(hole) {}
    bool holds(Code x, Natural n, Natural m) const override { return x != hole_ && m == pair(x, n); }
    std::optional<Natural> witness_bound(Code x, Natural n) const override { return pair(x, n) + 1; }
    std::string name() const override { return "hole-at(" + std::to_string(hole_) + ")"; }

private:
    Code hole_;
};

class Normalized final : public WitnessPredicate {
public:
    explicit Normalized(WitnessPtr inner) : inner_(std::move(inner)) {}
    bool holds(Code x, Natural n, Natural m) const override {
        if (!inner_->holds(x, n, m)) return false;
        for (Natural k = 0; k < m; ++k)
            if (inner_->holds(x, n, k)) return false;
        return true;
    }
    std::optional<Natural> witness_bound(Code x, Natural n) const override { return inner_->witness_bound(x, n); }
    std::string name() const override { return inner_->name(); }

private:
    WitnessPtr inner_;
};

}  // namespace

WitnessPtr sum_witness() { return std::make_shared<SumWitness>(); }
WitnessPtr hole_at(Code hole) { return std::make_shared<HoleAt>(hole); }
WitnessPtr normalized(WitnessPtr inner) { return std::make_shared<Normalized>(std::move(inner)); }

// ---------------------------------------------------------------------------
// Library predicates

namespace {

class Parity final : public StepPredicate {
public:
    Decision decide(Natural n, Code, BitView) const override {
        return n % 2 == 0 ? Decision::Confirm : Decision::Refute;
    }
    bool reads(Natural, Code, Code) const override { return false; }
    std::string name() const override { return "parity"; }
};

class LengthThree final : public StepPredicate {
public:
    Decision decide(Natural, Code, BitView s) const override {
        if (s.size() < 3) return Decision::Unknown;
        return s[0] ? Decision::Confirm : Decision::Refute;
    }
    bool reads(Natural, Code, Code index) const override { return index == 0; }
    std::string name() const override { return "length3"; }
};

class AllOnesDivergent final : public StepPredicate {
public:
    Decision decide(Natural, Code, BitView s) const override {
        return std::find(s.begin(), s.end(), std::uint8_t{0}) != s.end() ? Decision::Confirm
                                                                          : Decision::Unknown;
    }
    std::string name() const override { return "all-ones"; }
};

class Never final : public StepPredicate {
public:
    Decision decide(Natural, Code, BitView) const override { return Decision::Unknown; }
    bool reads(Natural, Code, Code) const override { return false; }
    std::string name() const override { return "never"; }
};

class Broken final : public StepPredicate {
public:
    Decision decide(Natural, Code, BitView s) const override {
        return s.size() == 2 ? Decision::Confirm : Decision::Unknown;
    }
    std::string name() const override { return "broken"; }
};

class Fickle final : public StepPredicate {
public:
    Decision decide(Natural, Code, BitView s) const override {
        if (s.size() >= 2) return Decision::Confirm;
        if (s.size() == 1 && s[0] == 0) return Decision::Refute;
        return Decision::Unknown;
    }
    std::string name() const override { return "fickle"; }
};

class Induction final : public StepPredicate {
public:
    Induction(WitnessPtr witness, Order order) : witness_(std::move(witness)), order_(std::move(order)) {}

    Decision decide(Natural n, Code x, BitView s) const override {
        const std::optional<Natural> bound = witness_->witness_bound(x, n);
        bool all_below_set = true;   // every stage code seen so far is 1
        bool witness_seen = false;   // some m < current code is a witness
        for (Code c = 0; c < s.size(); ++c) {
            if (is_stage_below(order_, x, c) && s[c] == 0) {
                if (!witness_seen) return Decision::Refute;
                all_below_set = false;
            }
            if (witness_->holds(x, n, c)) {
                if (all_below_set) return Decision::Confirm;
                witness_seen = true;
            }
        }
        if (bound && s.size() >= *bound && !witness_seen) return Decision::Refute;
        return Decision::Unknown;
    }

    bool reads(Natural, Code x, Code index) const override { return is_stage_below(order_, x, index); }

    std::string name() const override { return "induction/" + witness_->name(); }

private:
    WitnessPtr witness_;
    Order order_;
};

class TreeRecursion final : public StepPredicate {
public:
    TreeRecursion(std::function<Natural(Natural)> f, Order tree, std::string f_name)
        : f_(std::move(f)), tree_(std::move(tree)), f_name_(std::move(f_name)) {}

    Decision decide(Natural n, Code x, BitView s) const override {
        for (Natural m = 0; m <= x; ++m)
            if (f_(m) == n) return Decision::Confirm;
        bool all_absent = true;
        for (Code child : {2 * x + 1, 2 * x + 2}) {
            if (!tree_.contains(child)) continue;
            const Code i = stage_code(child, n);
            if (i >= s.size()) {
                all_absent = false;
                continue;
            }
            if (s[i]) return Decision::Confirm;
        }
        return all_absent ? Decision::Refute : Decision::Unknown;
    }

    bool reads(Natural n, Code x, Code index) const override {
        for (Code child : {2 * x + 1, 2 * x + 2})
            if (tree_.contains(child) && stage_code(child, n) == index) return true;
        return false;
    }

    std::string name() const override { return "tree-recursion/" + f_name_; }

private:
    std::function<Natural(Natural)> f_;
    Order tree_;
    std::string f_name_;
};

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class RandomMonotone final : public StepPredicate {
public:
    RandomMonotone(const RandomPredicateOptions& options, Order order)
        : options_(options), order_(std::move(order)) {
        std::uint64_t h = splitmix64(options_.seed ^ 0x51ed27a1ULL);
        const double roll = static_cast<double>(h >> 11) * 0x1.0p-53;
        if (roll < options_.partial) {
            const auto members = order_.enumerate(8);
            h = splitmix64(h);
            hole_n_ = h % 8;
            h = splitmix64(h);
            hole_x_ = members.empty() ? 0 : members[h % members.size()];
            has_hole_ = true;
        }
    }

    Decision decide(Natural n, Code x, BitView s) const override {
        const Rule r = rule(n, x);
        if (s.size() < r.length) return Decision::Unknown;
        unsigned row = 0;
        for (std::size_t k = 0; k < r.reads.size(); ++k)
            if (s[r.reads[k]]) row |= 1u << k;
        if (has_hole_ && n == hole_n_ && x == hole_x_ && row == r.hole_row) return Decision::Unknown;
        return (r.table >> row) & 1u ? Decision::Confirm : Decision::Refute;
    }

    bool reads(Natural n, Code x, Code index) const override {
        const Rule r = rule(n, x);
        return std::find(r.reads.begin(), r.reads.end(), index) != r.reads.end();
    }

    std::string name() const override { return "random(" + std::to_string(options_.seed) + ")"; }

private:
    struct Rule {
        Natural length = 0;
        std::vector<Code> reads;
        unsigned table = 0;
        unsigned hole_row = 0;
    };

    Rule rule(Natural n, Code x) const {
        std::uint64_t h = splitmix64(options_.seed ^ splitmix64(n * 0x100000001b3ULL ^ splitmix64(x)));
        Rule r;
        r.length = h % (options_.window + 1);
        std::vector<Code> candidates;
        for (Code c = 0; c < r.length; ++c)
            if (is_stage_below(order_, x, c)) candidates.push_back(c);
        h = splitmix64(h);
        const std::size_t want = std::min<std::size_t>(h % 4, candidates.size());
        for (std::size_t k = 0; k < want; ++k) {
            h = splitmix64(h);
            const std::size_t pick = h % candidates.size();
            r.reads.push_back(candidates[pick]);
            candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick));
        }
        h = splitmix64(h);
        r.table = static_cast<unsigned>(h & 0xffu);
        r.hole_row = static_cast<unsigned>((h >> 8) % (1u << r.reads.size()));
        return r;
    }

    RandomPredicateOptions options_;
    Order order_;
    bool has_hole_ = false;
    Natural hole_n_ = 0;
    Code hole_x_ = 0;
};

class FunctionPredicate final : public StepPredicate {
public:
    FunctionPredicate(std::string name, std::function<Decision(Natural, Code, BitView)> decide,
                      std::function<bool(Natural, Code, Code)> reads)
        : name_(std::move(name)), decide_(std::move(decide)), reads_(std::move(reads)) {}

    Decision decide(Natural n, Code x, BitView s) const override { return decide_(n, x, s); }
    bool reads(Natural n, Code x, Code index) const override { return reads_ ? reads_(n, x, index) : true; }
    std::string name() const override { return name_; }

private:
    std::string name_;
    std::function<Decision(Natural, Code, BitView)> decide_;
    std::function<bool(Natural, Code, Code)> reads_;
};

}  // namespace

PredicatePtr parity_predicate() { return std::make_shared<Parity>(); }
PredicatePtr length3_predicate() { return std::make_shared<LengthThree>(); }
PredicatePtr all_ones_divergent_predicate() { return std::make_shared<AllOnesDivergent>(); }
PredicatePtr never_predicate() { return std::make_shared<Never>(); }
PredicatePtr broken_predicate() { return std::make_shared<Broken>(); }
PredicatePtr fickle_predicate() { return std::make_shared<Fickle>(); }

PredicatePtr induction_predicate(WitnessPtr witness, Order order) {
    return std::make_shared<Induction>(std::move(witness), std::move(order));
}

PredicatePtr tree_recursion_predicate(std::function<Natural(Natural)> f, Order tree, std::string f_name) {
    if (tree.kind() != Order::Kind::Tree) throw OrderError("tree recursion needs a tree order, got " + tree.to_string());
    return std::make_shared<TreeRecursion>(std::move(f), std::move(tree), std::move(f_name));
}

PredicatePtr random_predicate(const RandomPredicateOptions& options, Order order) {
    return std::make_shared<RandomMonotone>(options, std::move(order));
}

PredicatePtr function_predicate(std::string name, std::function<Decision(Natural, Code, BitView)> decide,
                                std::function<bool(Natural, Code, Code)> reads) {
    return std::make_shared<FunctionPredicate>(std::move(name), std::move(decide), std::move(reads));
}

}  // namespace etr
