#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "etr/setr.hpp"
#include "etr/wetr.hpp"
#include "oracles.hpp"

using namespace etr;
using namespace etr::setr;

namespace {

BitPrefix bits(std::initializer_list<int> v) {
    BitPrefix out;
    for (int b : v) out.push_back(static_cast<std::uint8_t>(b));
    return out;
}

Rank rank(std::vector<RankEntry> e) { return Rank{std::move(e)}; }

}  // namespace

TEST_CASE("a decided term rewrites to its value") {
    const Order f1 = Order::finite(1);
    const auto p = parity_predicate();
    CHECK(step_term(Term::proper(4, 0), *p, f1) == Term::one());
    CHECK(step_term(Term::proper(3, 0), *p, f1) == Term::zero());
    CHECK_THROWS_AS(step_term(Term::one(), *p, f1), Error);
    CHECK_THROWS_AS(step_term(Term::zero(), *p, f1), Error);
}

TEST_CASE("length3 over fin(1) appends three zeros and then decides") {
    const Order f1 = Order::finite(1);
    const auto p = length3_predicate();
    Term t = Term::proper(2, 0);
    t = step_term(t, *p, f1);
    CHECK(t == Term::proper(2, 0, bits({0})));
    t = step_term(t, *p, f1);
    CHECK(t == Term::proper(2, 0, bits({0, 0})));
    t = step_term(t, *p, f1);
    CHECK(t == Term::proper(2, 0, bits({0, 0, 0})));
    t = step_term(t, *p, f1);
    CHECK(t == Term::zero());
}

TEST_CASE("an index coding a lower stage opens a nested term") {
    const Order f2 = Order::finite(2);
    const auto p = never_predicate();
    // index 6 = pair(3, 0) addresses the stage (x=0, n=3), which lies below x = 1
    REQUIRE(stage_code(0, 3) == 6);
    const Term t = step_term(Term::proper(5, 1, BitPrefix(6, 0)), *p, f2);
    REQUIRE(t.depth() == 2);
    CHECK(t.frames()[0] == Frame{5, 1, BitPrefix(6, 0)});
    CHECK(t.frames()[1] == Frame{3, 0, {}});
    // at x = 0 the same index is not below anything: a plain 0 is appended
    CHECK(step_term(Term::proper(5, 0, BitPrefix(6, 0)), *p, f2) == Term::proper(5, 0, BitPrefix(7, 0)));
}

TEST_CASE("a finished nested term folds into its parent as a bit") {
    const Order f2 = Order::finite(2);
    const auto p = parity_predicate();
    Term t = Term::chain({Frame{1, 1, bits({1})}, Frame{4, 0, {}}});
    auto done = step_in_place(t, *p, f2);
    REQUIRE(done);
    CHECK(done->stage == Stage{0, 4});
    CHECK(done->value);
    CHECK(t == Term::proper(1, 1, bits({1, 1})));
}

TEST_CASE("term rendering") {
    CHECK(Term::zero().to_json() == 0);
    CHECK(Term::one().to_json() == 1);
    const Term t = Term::chain({Frame{5, 1, bits({0, 0})}, Frame{3, 0, bits({1})}});
    CHECK(t.to_json().dump() == R"({"m":5,"s":[0,0,{"m":3,"s":[1],"y":0}],"y":1})");
    CHECK_THROWS_AS(Term::chain({}), Error);
}

TEST_CASE("eval_term examples") {
    const Order f1 = Order::finite(1), f2 = Order::finite(2);
    const auto r = eval_term(*parity_predicate(), f1, 2, 0, 100);
    CHECK(r.value);
    CHECK(r.steps == 1);

    const auto ind = induction_predicate(sum_witness(), f2);
    for (Code x = 0; x < 2; ++x)
        for (Natural n = 0; n < 4; ++n) {
            const auto e = eval_term(*ind, f2, n, x, 100000);
            CHECK(e.value);
            CHECK(e.descent.ok);
        }

    CHECK_THROWS_AS(eval_term(*never_predicate(), f1, 0, 0, 1000), FuelExhausted);
    CHECK_THROWS_AS(eval_term(*parity_predicate(), f1, 0, 3, 100), NotAMember);
}

TEST_CASE("setr refuses orders that are not well-orders") {
    try {
        eval_term(*parity_predicate(), Order::tree(2), 0, 0, 100);
        FAIL("expected UnsupportedOrder");
    } catch (const UnsupportedOrder& e) {
        CHECK(std::string(e.what()).find("setr requires a linear order") != std::string::npos);
    }
    CHECK_THROWS_AS(eval_term(*parity_predicate(), parse_order("rev(omega)"), 0, 0, 100), UnsupportedOrder);
}

TEST_CASE("rank_beta cases") {
    const Order f3 = Order::finite(3);
    const auto never = never_predicate();
    CHECK(rank_beta(Term::one(), f3, *never).entries.empty());
    CHECK(rank_beta(Term::zero(), f3, *never).entries.empty());

    CHECK(rank_beta(Term::proper(7, 2, bits({0, 1})), f3, *never) ==
          rank({{2, TElem::tuple(7, 2, bits({0, 1}), 1)}}));

    const Term nested = Term::chain({Frame{7, 2, {}}, Frame{4, 1, {}}});
    CHECK(rank_beta(nested, f3, *never) ==
          rank({{2, TElem::tuple(7, 2, {}, 0)}, {1, TElem::tuple(4, 1, {}, 1)}}));

    // a decided innermost frame contributes (0_X, Bot1)
    CHECK(rank_beta(Term::proper(2, 2), f3, *parity_predicate()) == rank({{0, TElem::bot1()}}));
    CHECK(rank_beta(Term::chain({Frame{7, 2, {}}, Frame{4, 1, {}}}), f3, *parity_predicate()) ==
          rank({{2, TElem::tuple(7, 2, {}, 0)}, {0, TElem::bot1()}}));
}

TEST_CASE("rank_compare") {
    const Order f3 = Order::finite(3);
    CHECK(rank_compare(rank({}), rank({{1, TElem::bot1()}}), f3) == Ordering::Less);
    CHECK(rank_compare(rank({{1, TElem::bot1()}}), rank({{1, TElem::bot1()}}), f3) == Ordering::Equal);
    // prefix above its extension on the s component
    CHECK(telem_compare(TElem::tuple(1, 1, {}, 0), TElem::tuple(1, 1, bits({0}), 0), f3) == Ordering::Greater);
    CHECK(telem_compare(TElem::tuple(1, 1, bits({0}), 0), TElem::tuple(1, 1, bits({1}), 0), f3) ==
          Ordering::Incomparable);
    CHECK(telem_compare(TElem::bot0(), TElem::bot1(), f3) == Ordering::Less);
    CHECK(telem_compare(TElem::bot1(), TElem::tuple(0, 0, {}, 0), f3) == Ordering::Less);
    CHECK(telem_compare(TElem::tuple(0, 2, {}, 1), TElem::tuple(1, 0, {}, 0), f3) == Ordering::Less);
    CHECK(telem_compare(TElem::tuple(1, 0, {}, 1), TElem::tuple(1, 2, {}, 0), f3) == Ordering::Less);
    CHECK(telem_compare(TElem::tuple(1, 1, bits({0}), 0), TElem::tuple(1, 1, bits({0}), 1), f3) == Ordering::Less);
    // x components follow the order of X
    const Order r3 = parse_order("rev(fin(3))");
    CHECK(rank_compare(rank({{2, TElem::bot1()}}), rank({{0, TElem::bot1()}}), r3) == Ordering::Less);
    CHECK(rank_compare(rank({{0, TElem::tuple(1, 1, bits({0}), 0)}}), rank({{0, TElem::tuple(1, 1, bits({1}), 0)}}),
                       f3) == Ordering::Incomparable);
}

TEST_CASE("rank descent on the parity trace") {
    const Order f1 = Order::finite(1);
    const auto p = parity_predicate();
    EvalOptions options;
    options.trace = true;
    const auto r = eval_term(*p, f1, 2, 0, 100, options);
    REQUIRE(r.trace.size() == 2);
    CHECK(rank_beta(r.trace[0], f1, *p) == rank({{0, TElem::bot1()}}));
    CHECK(rank_beta(r.trace[1], f1, *p) == rank({}));
    CHECK(monitor_descent(r.trace, f1, *p).ok);
}

TEST_CASE("rank descent on induction traces and a permuted negative control") {
    const Order f2 = Order::finite(2);
    const auto p = induction_predicate(sum_witness(), f2);
    EvalOptions options;
    options.trace = true;
    for (Code x = 0; x < 2; ++x)
        for (Natural n = 0; n < 4; ++n) {
            const auto r = eval_term(*p, f2, n, x, 100000, options);
            CHECK(monitor_descent(r.trace, f2, *p).ok);
            CHECK(r.descent.ok);
            CHECK(r.descent.comparisons + 1 == r.trace.size());
        }
    auto trace = eval_term(*p, f2, 3, 1, 100000, options).trace;
    REQUIRE(trace.size() > 4);
    std::swap(trace[1], trace[3]);
    const auto bad = monitor_descent(trace, f2, *p);
    CHECK_FALSE(bad.ok);
    CHECK(bad.violation_step == 1u);
}

TEST_CASE("evaluation is deterministic") {
    const Order f4 = Order::finite(4);
    const auto p = random_predicate({3, 8, 0.0}, f4);
    EvalOptions options;
    options.trace = true;
    const auto a = eval_term(*p, f4, 2, 3, 100000, options);
    const auto b = eval_term(*p, f4, 2, 3, 100000, options);
    CHECK(a.trace == b.trace);
    CHECK(a.value == b.value);
}

TEST_CASE("nested evaluations agree with each other and with wetr") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Natural k = 1 + seed % 5;
        const Order X = Order::finite(k);
        const auto p = random_predicate({seed, 8, 0.0}, X);
        wetr::Session session(p, X, 100000);
        for (Code x = 0; x < k; ++x)
            for (Natural n = 0; n < 5; ++n) {
                const auto r = eval_term(*p, X, n, x, 100000);
                CHECK_FALSE(r.inconsistent);
                CHECK(r.value == session.eval(n, x));
                for (const auto& [stage, value] : r.observed) CHECK(session.eval(stage.n, stage.x) == value);
            }
    }
}

TEST_CASE("setr families match Kleene iteration") {
    for (const auto& p : {induction_predicate(sum_witness(), Order::finite(4)),
                          induction_predicate(hole_at(2), Order::finite(4))}) {
        MaterializeStats stats;
        const auto fam = setr::materialize_family(p, Order::finite(4), 5, 16, 1000000, &stats);
        std::set<oracle::StagePair> got;
        for (const auto& s : fam.members) got.insert({s.x, s.n});
        CHECK(got == oracle::kleene_fixpoint_fin(*p, 4, 5).members);
        CHECK(stats.descent_violations == 0);
        CHECK(stats.inconsistencies == 0);
        CHECK(stats.evaluations == 20);
    }
}

TEST_CASE("step observer sees every term") {
    const Order f2 = Order::finite(2);
    std::uint64_t seen = 0, first_steps = 0;
    const auto fam = setr::materialize_family(parity_predicate(), f2, 2, 16, 100, nullptr,
                                              [&](Natural, Code, std::uint64_t step, const Term&) {
                                                  ++seen;
                                                  if (step == 0) ++first_steps;
                                              });
    CHECK(first_steps == 4);
    CHECK(seen == 8);
    CHECK(fam.members.size() == 2);
}
