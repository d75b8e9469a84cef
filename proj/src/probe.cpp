#include "etr/probe.hpp"

#include <algorithm>
#include <functional>
#include <iterator>
#include <limits>

#include "etr/wetr.hpp"

namespace etr::probe {

using nlohmann::json;

std::string_view to_string(ChainStatus s) {
    switch (s) {
        case ChainStatus::Found: return "found";
        case ChainStatus::ConclusiveNone: return "conclusive-none";
        case ChainStatus::Inconclusive: return "inconclusive";
    }
    return "?";
}

json ChainResult::to_json() const {
    return json{{"status", std::string(probe::to_string(status))},
                {"witness", witness},
                {"length", witness.size()},
                {"expansions", expansions},
                {"pool", pool},
                {"longest", longest}};
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
constexpr std::size_t kMaxPool = std::size_t{1} << 22;

struct PoolSearch {
    const Order& order;
    const std::vector<Code>& pool;
    std::size_t target;
    std::uint64_t budget;
    std::uint64_t& expansions;

    std::vector<std::size_t> best = std::vector<std::size_t>(pool.size(), 0);
    std::vector<std::size_t> next = std::vector<std::size_t>(pool.size(), kNone);
    std::vector<std::uint8_t> state = std::vector<std::uint8_t>(pool.size(), 0);  // 0 new, 1 open, 2 done
    bool out_of_budget = false;

    // Longest chain found starting at pool[i] and descending; stops early
    // once it reaches the target.
    std::size_t descend(std::size_t i) {
        if (state[i] == 2) return best[i];
        if (state[i] == 1) throw OrderError("comparison cycle through " + std::to_string(pool[i]));
        state[i] = 1;
        std::size_t b = 1;
        for (std::size_t k = pool.size(); k-- > 0 && b < target;) {
            if (k == i) continue;
            if (expansions >= budget) {
                out_of_budget = true;
                break;
            }
            ++expansions;
            if (order.compare(pool[k], pool[i]) != Ordering::Less) continue;
            const std::size_t c = descend(k);
            if (c + 1 > b) {
                b = c + 1;
                next[i] = k;
            }
            if (out_of_budget) break;
        }
        best[i] = b;
        state[i] = 2;
        return b;
    }
};

}  // namespace

ChainResult find_descending_chain(const Order& o, std::size_t target_length, std::uint64_t budget) {
    ChainResult res;
    if (target_length == 0) {
        res.status = ChainStatus::Found;
        return res;
    }
    const auto size = o.size();
    for (std::size_t want = 8;; want *= 2) {
        const std::vector<Code> pool = o.enumerate(want);
        const bool exhaustive = size && pool.size() == *size;
        res.pool = pool.size();
        res.longest = 0;

        PoolSearch search{o, pool, target_length, budget, res.expansions};
        std::size_t start = kNone;
        for (std::size_t i = pool.size(); i-- > 0;) {
            const std::size_t len = search.descend(i);
            res.longest = std::max(res.longest, len);
            if (len >= target_length) {
                start = i;
                break;
            }
            if (search.out_of_budget) break;
        }

        if (start != kNone) {
            for (std::size_t i = start; res.witness.size() < target_length; i = search.next[i])
                res.witness.push_back(pool[i]);
            for (std::size_t k = 0; k + 1 < res.witness.size(); ++k) {
                if (o.compare(res.witness[k + 1], res.witness[k]) != Ordering::Less)
                    throw Error("descending chain failed re-verification at position " + std::to_string(k));
            }
            res.status = ChainStatus::Found;
            return res;
        }
        if (search.out_of_budget) {
            res.status = ChainStatus::Inconclusive;
            return res;
        }
        if (exhaustive) {
            res.status = ChainStatus::ConclusiveNone;
            return res;
        }
        if (want >= kMaxPool) {
            res.status = ChainStatus::Inconclusive;
            return res;
        }
    }
}

// ---------------------------------------------------------------------------

json FixpointReport::to_json() const {
    json v = json::array();
    for (const auto& f : violations) {
        v.push_back(json{{"x", f.stage.x},
                         {"n", f.stage.n},
                         {"member", f.member},
                         {"decision", std::string(etr::to_string(f.decision))}});
    }
    return json{{"ok", ok}, {"checked", checked}, {"resolved_outside", resolved_outside}, {"violations", v}};
}

FixpointReport check_fixpoint(const Family& fam, const StepPredicate& p, const Order& X, std::uint64_t fuel) {
    FixpointReport report;
    std::map<Stage, bool> resolved;

    std::function<Decision(const Stage&, std::uint64_t)> decide_stage;
    auto value_of = [&](const Stage& s, std::uint64_t depth) -> bool {
        if (fam.in_domain(s)) return fam.contains(s);
        if (auto it = fam.closure.find(s); it != fam.closure.end()) return it->second;
        if (auto it = resolved.find(s); it != resolved.end()) return it->second;
        const bool v = decide_stage(s, depth + 1) == Decision::Confirm;
        resolved.emplace(s, v);
        ++report.resolved_outside;
        return v;
    };
    decide_stage = [&](const Stage& s, std::uint64_t depth) -> Decision {
        if (depth > fuel) throw FuelExhausted("check_fixpoint: lower stages nested deeper than the fuel");
        BitPrefix bits;
        for (;;) {
            const Decision d = p.decide(s.n, s.x, bits);
            if (d != Decision::Unknown) return d;
            if (bits.size() >= fuel) {
                throw FuelExhausted("check_fixpoint: stage (" + std::to_string(s.x) + ", " + std::to_string(s.n) +
                                    ") undecided after " + std::to_string(fuel) + " bits");
            }
            const Code i = bits.size();
            bits.push_back(is_stage_below(X, s.x, i) && value_of({stage_of(i).x, stage_of(i).n}, depth) ? 1 : 0);
        }
    };

    for (Code x : fam.xs) {
        for (Natural n = 0; n < fam.n_max; ++n) {
            const Stage s{x, n};
            const Decision d = decide_stage(s, 0);
            const bool member = fam.contains(s);
            ++report.checked;
            if (member != (d == Decision::Confirm)) report.violations.push_back({s, member, d});
        }
    }
    report.ok = report.violations.empty();
    return report;
}

// ---------------------------------------------------------------------------

namespace {

json outcome_json(const EngineOutcome& e) {
    json j{{"terminated", e.family.has_value()}, {"fuel_exhausted", e.fuel_exhausted}};
    if (!e.error.empty()) j["error"] = e.error;
    if (e.family) j["family"] = e.family->to_json();
    return j;
}

json stages_json(const std::vector<Stage>& v) {
    json out = json::array();
    for (const auto& s : v) out.push_back({s.x, s.n});
    return out;
}

template <class Run>
EngineOutcome run_engine(Run&& run) {
    EngineOutcome out;
    try {
        out.family = run();
    } catch (const FuelExhausted& e) {
        out.fuel_exhausted = true;
        out.error = e.what();
    } catch (const Error& e) {
        out.error = e.what();
    }
    return out;
}

}  // namespace

json AgreementReport::to_json() const {
    return json{{"wetr", outcome_json(wetr)},
                {"setr", outcome_json(setr)},
                {"both_terminated", both_terminated},
                {"agree", agree},
                {"only_wetr", stages_json(only_wetr)},
                {"only_setr", stages_json(only_setr)}};
}

AgreementReport engines_agree(const PredicatePtr& p, const Order& X, Natural n_max, std::size_t x_budget,
                              std::uint64_t fuel, bool monitor_ranks) {
    AgreementReport r;
    r.wetr = run_engine([&] { return wetr::materialize_family(p, X, n_max, x_budget, fuel); });
    r.setr = run_engine([&] { return setr::materialize_family(p, X, n_max, x_budget, fuel,
                                                                monitor_ranks ? &r.setr_stats : nullptr); });
    r.both_terminated = r.wetr.family && r.setr.family;
    if (r.both_terminated) {
        const auto& a = r.wetr.family->members;
        const auto& b = r.setr.family->members;
        std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r.only_wetr));
        std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(r.only_setr));
        r.agree = r.only_wetr.empty() && r.only_setr.empty();
    }
    return r;
}

// ---------------------------------------------------------------------------

ExpElement erase_below(const Order& alpha, const Order& X, const ExpElement& f, Code x) {
    if (!exp_validate(alpha, X, f))
        throw InvalidElement("erase_below: invalid element of exp(" + alpha.to_string() + "," + X.to_string() + ")");
    if (!X.contains(x)) throw NotAMember(std::to_string(x) + " is not a member of " + X.to_string());
    ExpElement out;
    for (const auto& e : f.entries)
        if (!X.less(e.exponent, x)) out.entries.push_back(e);
    return out;
}

json ErasureReport::to_json() const {
    json j{{"ok", ok}, {"exhaustive", exhaustive}, {"checks", checks}, {"violations", violations}};
    if (first) {
        const auto& [f, g, x] = *first;
        j["first_violation"] = json{{"f", f}, {"g", g}, {"x", x}};
    }
    return j;
}

ErasureReport check_erasure_monotone(const Order& alpha, const Order& X, std::size_t sample) {
    ErasureReport report;
    const Order E = Order::exponential(alpha, X);
    const auto e_size = E.size();
    const auto x_size = X.size();
    report.exhaustive = e_size && *e_size <= 200 && x_size;
    const std::vector<Code> elements = E.enumerate(report.exhaustive ? *e_size : sample);
    const std::vector<Code> xs = X.enumerate(report.exhaustive ? *x_size : sample);

    std::vector<ExpElement> decoded;
    decoded.reserve(elements.size());
    for (Code c : elements) decoded.push_back(ExpElement::decode(c));

    for (std::size_t i = 0; i < elements.size(); ++i) {
        for (std::size_t j = 0; j < elements.size(); ++j) {
            if (!E.less(elements[i], elements[j])) continue;
            for (Code x : xs) {
                ++report.checks;
                const ExpElement ef = erase_below(alpha, X, decoded[i], x);
                const ExpElement eg = erase_below(alpha, X, decoded[j], x);
                if (exp_compare(alpha, X, ef, eg) == Ordering::Greater) {
                    ++report.violations;
                    if (!report.first) report.first = {elements[i], elements[j], x};
                }
            }
        }
    }
    report.ok = report.violations == 0;
    return report;
}

}  // namespace etr::probe
