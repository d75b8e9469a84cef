#include "etr/setr.hpp"

#include <sstream>

namespace etr::setr {

using nlohmann::json;

Term Term::proper(Natural m, Code y, BitPrefix bits) {
    return Term(Kind::Proper, {Frame{m, y, std::move(bits)}});
}

Term Term::chain(std::vector<Frame> frames) {
    if (frames.empty()) throw Error("a proper term needs at least one frame");
    return Term(Kind::Proper, std::move(frames));
}

json Term::to_json() const {
    if (kind_ == Kind::Zero) return 0;
    if (kind_ == Kind::One) return 1;
    json inner;
    for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
        json s = json::array();
        for (auto bit : it->bits) s.push_back(bit);
        if (it != frames_.rbegin()) s.push_back(std::move(inner));
        inner = json{{"m", it->m}, {"y", it->y}, {"s", std::move(s)}};
    }
    return inner;
}

std::optional<Resolved> step_in_place(Term& t, const StepPredicate& p, const Order& X) {
    if (t.terminal()) throw Error("step_term: 0 and 1 are terminal");
    Frame& last = t.frames_.back();
    const Decision d = p.decide(last.m, last.y, last.bits);
    if (d != Decision::Unknown) {
        const Resolved done{{last.y, last.m}, d == Decision::Confirm};
        t.frames_.pop_back();
        if (t.frames_.empty())
            t.kind_ = done.value ? Term::Kind::One : Term::Kind::Zero;
        else
            t.frames_.back().bits.push_back(done.value ? 1 : 0);
        return done;
    }
    const Code i = last.bits.size();
    if (is_stage_below(X, last.y, i)) {
        const StageRef lower = stage_of(i);
        t.frames_.push_back(Frame{lower.n, lower.x, {}});
    } else {
        last.bits.push_back(0);
    }
    return std::nullopt;
}

Term step_term(const Term& t, const StepPredicate& p, const Order& X) {
    Term next = t;
    step_in_place(next, p, X);
    return next;
}

// ---------------------------------------------------------------------------

namespace {

json telem_json(const TElem& e) {
    switch (e.kind) {
        case TElem::Kind::Bot0: return "bot0";
        case TElem::Kind::Bot1: return "bot1";
        case TElem::Kind::Tuple: break;
    }
    json s = json::array();
    for (auto bit : e.s) s.push_back(bit);
    return json{{"m", e.m}, {"y", e.y}, {"s", std::move(s)}, {"b", e.b}};
}

template <class T>
Ordering cmp(const T& a, const T& b) {
    return a < b ? Ordering::Less : (b < a ? Ordering::Greater : Ordering::Equal);
}

// A prefix lies above each of its proper extensions.
Ordering reverse_extension(const BitPrefix& s, const BitPrefix& t) {
    const std::size_t common = std::min(s.size(), t.size());
    for (std::size_t i = 0; i < common; ++i)
        if (s[i] != t[i]) return Ordering::Incomparable;
    return cmp(t.size(), s.size());
}

}  // namespace

json Rank::to_json() const {
    json out = json::array();
    for (const auto& e : entries) out.push_back(json::array({e.x, telem_json(e.t)}));
    return out;
}

Rank rank_beta(const Term& t, const Order& X, const StepPredicate& p) {
    Rank r;
    if (t.terminal()) return r;
    const auto& frames = t.frames();
    r.entries.reserve(frames.size());
    for (std::size_t j = 0; j + 1 < frames.size(); ++j) {
        const Frame& f = frames[j];
        r.entries.push_back({f.y, TElem::tuple(f.m, f.y, f.bits, 0)});
    }
    const Frame& last = frames.back();
    if (p.decide(last.m, last.y, last.bits) != Decision::Unknown) {
        const auto bottom = X.least();
        if (!bottom) throw UnsupportedOrder("rank needs a least element of " + X.to_string());
        r.entries.push_back({*bottom, TElem::bot1()});
    } else {
        r.entries.push_back({last.y, TElem::tuple(last.m, last.y, last.bits, 1)});
    }
    return r;
}

Ordering telem_compare(const TElem& a, const TElem& b, const Order& X) {
    if (a.kind != b.kind) return cmp(a.kind, b.kind);
    if (a.kind != TElem::Kind::Tuple) return Ordering::Equal;
    if (a.m != b.m) return cmp(a.m, b.m);
    if (a.y != b.y) return X.compare(a.y, b.y);
    if (const Ordering o = reverse_extension(a.s, b.s); o != Ordering::Equal) return o;
    return cmp(a.b, b.b);
}

Ordering rank_compare(const Rank& r1, const Rank& r2, const Order& X) {
    return compare_extending<RankEntry>(r1.entries, r2.entries, [&](const RankEntry& a, const RankEntry& b) {
        if (a.x != b.x) return X.compare(a.x, b.x);
        return telem_compare(a.t, b.t, X);
    });
}

std::string DescentReport::describe() const {
    std::ostringstream os;
    if (ok) {
        os << "rank descends across " << comparisons << " steps";
    } else {
        os << "rank fails to descend at step " << *violation_step << ": next rank is " << to_string(found)
           << " the previous one";
        if (incomparable) os << " (incomparability diagnostic)";
    }
    return os.str();
}

const Rank& DescentMonitor::observe(const Term& t) {
    Rank next = rank_beta(t, X_, p_);
    if (previous_) {
        const Ordering o = rank_compare(next, *previous_, X_);
        ++report_.comparisons;
        if (o != Ordering::Less && report_.ok) {
            report_.ok = false;
            report_.violation_step = index_ - 1;
            report_.found = o;
            report_.incomparable = o == Ordering::Incomparable;
        }
    }
    ++index_;
    previous_ = std::move(next);
    return *previous_;
}

DescentReport monitor_descent(const std::vector<Term>& trace, const Order& X, const StepPredicate& p) {
    DescentMonitor monitor(X, p);
    for (const Term& t : trace) monitor.observe(t);
    return monitor.report();
}

// ---------------------------------------------------------------------------

void require_setr_order(const Order& X) {
    if (!X.is_linear()) throw UnsupportedOrder("setr requires a linear order, got " + X.to_string());
    if (!X.is_well_founded() || X.is_unsafe())
        throw UnsupportedOrder("setr requires a well-order, got " + X.to_string());
}

EvalResult eval_term(const StepPredicate& p, const Order& X, Natural n, Code x, std::uint64_t fuel,
                     const EvalOptions& options) {
    require_setr_order(X);
    if (!X.contains(x)) throw NotAMember(std::to_string(x) + " is not a member of " + X.to_string());

    EvalResult result;
    DescentMonitor monitor(X, p);
    Term t = Term::proper(n, x);
    auto emit = [&](const Term& term) {
        if (options.on_step) options.on_step(result.steps, term);
        if (options.monitor) monitor.observe(term);
        if (options.trace) result.trace.push_back(term);
    };

    emit(t);
    while (!t.terminal()) {
        if (result.steps >= fuel) {
            throw FuelExhausted("setr(n=" + std::to_string(n) + ", x=" + std::to_string(x) + "): no value after " +
                                std::to_string(fuel) + " steps");
        }
        const auto done = step_in_place(t, p, X);
        ++result.steps;
        if (done) {
            auto [it, fresh] = result.observed.emplace(done->stage, done->value);
            if (!fresh && it->second != done->value && !result.inconsistent) result.inconsistent = done->stage;
        }
        emit(t);
    }
    result.value = t.kind() == Term::Kind::One;
    result.descent = monitor.report();
    return result;
}

Family materialize_family(const PredicatePtr& p, const Order& X, Natural n_max, std::size_t x_budget,
                          std::uint64_t fuel, MaterializeStats* stats, const StepObserver& observer) {
    require_setr_order(X);
    Family fam(X);
    fam.n_max = n_max;
    fam.xs = X.enumerate(x_budget);
    EvalOptions options;
    options.monitor = stats != nullptr;
    auto problem = [&](const std::string& what) {
        if (stats && stats->first_problem.empty()) stats->first_problem = what;
    };
    for (Code x : fam.xs) {
        for (Natural n = 0; n < n_max; ++n) {
            if (observer) options.on_step = [&](std::uint64_t i, const Term& t) { observer(n, x, i, t); };
            const EvalResult r = eval_term(*p, X, n, x, fuel, options);
            if (r.value) fam.members.insert({x, n});
            const std::string where = "(n=" + std::to_string(n) + ", x=" + std::to_string(x) + ")";
            for (const auto& [stage, value] : r.observed) {
                auto [it, fresh] = fam.closure.emplace(stage, value);
                if (!fresh && it->second != value) {
                    if (stats) ++stats->inconsistencies;
                    problem("stage (" + std::to_string(stage.x) + ", " + std::to_string(stage.n) +
                            ") changed value across evaluations");
                }
            }
            if (!stats) continue;
            ++stats->evaluations;
            stats->total_steps += r.steps;
            if (r.inconsistent) {
                ++stats->inconsistencies;
                problem("nested evaluations disagree inside " + where);
            }
            if (!r.descent.ok) {
                ++stats->descent_violations;
                problem(where + ": " + r.descent.describe());
            }
        }
    }
    return fam;
}

}  // namespace etr::setr
