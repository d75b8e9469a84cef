#include "etr/wetr.hpp"

#include <string>
#include <vector>

namespace etr::wetr {

namespace {

std::string at(Natural n, Code x) { return "(n=" + std::to_string(n) + ", x=" + std::to_string(x) + ")"; }

}  // namespace

Natural bound_t(const StepPredicate& p, Natural n, Code x, std::uint64_t fuel) {
    std::vector<BitPrefix> frontier, next;
    if (p.decide(n, x, BitPrefix{}) != Decision::Unknown) return 0;
    frontier.emplace_back();
    for (Natural level = 0;; ++level) {
        if (level >= fuel) {
            throw FuelExhausted("bound_t" + at(n, x) + ": undecided prefixes survive " + std::to_string(fuel) +
                                " levels");
        }
        const bool branch = p.reads(n, x, level);
        next.clear();
        for (auto& s : frontier) {
            if (branch) {
                BitPrefix one = s;
                one.push_back(1);
                if (p.decide(n, x, one) == Decision::Unknown) next.push_back(std::move(one));
            }
            s.push_back(0);
            if (p.decide(n, x, s) == Decision::Unknown) next.push_back(std::move(s));
        }
        if (next.empty()) return level + 1;
        if (next.size() > kMaxFrontier) {
            throw FuelExhausted("bound_t" + at(n, x) + ": frontier of T(n,x) exceeds " +
                                std::to_string(kMaxFrontier) + " prefixes");
        }
        frontier.swap(next);
    }
}

Session::Session(PredicatePtr predicate, Order order, std::uint64_t fuel)
    : predicate_(std::move(predicate)), order_(std::move(order)), fuel_(fuel) {
    if (!order_.is_well_founded())
        throw UnsupportedOrder("wetr requires a well-founded order, got " + order_.to_string());
}

bool Session::eval(Natural n, Code x) {
    if (!order_.contains(x)) throw NotAMember(std::to_string(x) + " is not a member of " + order_.to_string());
    if (auto it = memo_.find({x, n}); it != memo_.end()) return it->second;

    struct Frame {
        Stage stage;
        Natural length;
        Code next = 0;
        BitPrefix bits;
    };
    std::vector<Frame> stack;
    std::set<Stage> active;

    auto open = [&](Stage st) {
        if (stack.size() >= fuel_) {
            throw FuelExhausted("eval_e" + at(n, x) + ": recursion deeper than " + std::to_string(fuel_));
        }
        Frame f{st, bound_t(*predicate_, st.n, st.x, fuel_), 0, {}};
        f.bits.reserve(f.length);
        stack.push_back(std::move(f));
        active.insert(st);
    };

    open({x, n});
    while (!stack.empty()) {
        bool descended = false;
        {
            Frame& f = stack.back();
            while (f.next < f.length) {
                const Code i = f.next;
                if (is_stage_below(order_, f.stage.x, i)) {
                    const Stage lower = {stage_of(i).x, stage_of(i).n};
                    auto it = memo_.find(lower);
                    if (it == memo_.end()) {
                        if (active.count(lower)) {
                            throw UnsupportedOrder("cycle through stage" + at(lower.n, lower.x) + " in " +
                                                   order_.to_string());
                        }
                        descended = true;
                        break;
                    }
                    f.bits.push_back(it->second ? 1 : 0);
                } else {
                    f.bits.push_back(0);
                }
                ++f.next;
            }
        }
        if (descended) {
            const StageRef lower = stage_of(stack.back().next);
            open({lower.x, lower.n});
            continue;
        }
        Frame& f = stack.back();
        const Decision d = predicate_->decide(f.stage.n, f.stage.x, f.bits);
        if (d == Decision::Unknown) {
            throw InconsistentPredicate(predicate_->name() + " undecided" + at(f.stage.n, f.stage.x) +
                                        " on a prefix of length bound_t = " + std::to_string(f.length));
        }
        memo_[f.stage] = d == Decision::Confirm;
        active.erase(f.stage);
        stack.pop_back();
    }
    return memo_.at({x, n});
}

bool eval_e(const PredicatePtr& p, const Order& order, Natural n, Code x, std::uint64_t fuel) {
    Session session(p, order, fuel);
    return session.eval(n, x);
}

Family materialize_family(const PredicatePtr& p, const Order& order, Natural n_max, std::size_t x_budget,
                          std::uint64_t fuel) {
    Session session(p, order, fuel);
    Family fam(order);
    fam.n_max = n_max;
    fam.xs = order.enumerate(x_budget);
    for (Code x : fam.xs) {
        for (Natural n = 0; n < n_max; ++n)
            if (session.eval(n, x)) fam.members.insert({x, n});
    }
    fam.closure = session.memo();
    return fam;
}

}  // namespace etr::wetr
