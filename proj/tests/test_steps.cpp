#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "etr/predicate_spec.hpp"
#include "etr/steps.hpp"
#include "oracles.hpp"

using namespace etr;

namespace {

BitPrefix bits(std::initializer_list<int> v) {
    BitPrefix out;
    for (int b : v) out.push_back(static_cast<std::uint8_t>(b));
    return out;
}

std::vector<PredicatePtr> library_predicates() {
    const Order f3 = Order::finite(3), w = Order::omega(), t3 = Order::tree(3);
    std::vector<PredicatePtr> ps{parity_predicate(),
                                 length3_predicate(),
                                 all_ones_divergent_predicate(),
                                 never_predicate(),
                                 induction_predicate(sum_witness(), f3),
                                 induction_predicate(hole_at(1), f3),
                                 induction_predicate(sum_witness(), w),
                                 induction_predicate(normalized(hole_at(2)), w),
                                 tree_recursion_predicate([](Natural m) { return m; }, t3, "identity"),
                                 tree_recursion_predicate([](Natural m) { return m * m; }, t3, "square")};
    for (std::uint64_t seed = 1; seed <= 6; ++seed) ps.push_back(random_predicate({seed, 8, 0.0}, Order::finite(5)));
    ps.push_back(random_predicate({7, 8, 1.0}, Order::finite(5)));
    return ps;
}

}  // namespace

TEST_CASE("parity and length3 decisions") {
    const auto parity = parity_predicate();
    CHECK(step_decide(*parity, 4, 0, {}) == Decision::Confirm);
    CHECK(step_decide(*parity, 3, 0, bits({1, 0})) == Decision::Refute);
    const auto l3 = length3_predicate();
    CHECK(step_decide(*l3, 0, 0, bits({1, 0})) == Decision::Unknown);
    CHECK(step_decide(*l3, 0, 0, bits({1, 0, 0})) == Decision::Confirm);
    CHECK(step_decide(*l3, 0, 0, bits({0, 1, 1})) == Decision::Refute);
}

TEST_CASE("check_monotone") {
    CHECK(check_monotone(*parity_predicate(), 0, 0, 4).ok);

    const auto broken = check_monotone(*broken_predicate(), 0, 0, 6);
    CHECK_FALSE(broken.ok);
    CHECK(broken.prefix.size() == 2);
    CHECK(broken.extension.size() == 3);
    CHECK(broken.before == Decision::Confirm);
    CHECK(broken.after == Decision::Unknown);

    CHECK_FALSE(check_monotone(*fickle_predicate(), 0, 0, 4).ok);

    const Order f3 = Order::finite(3);
    const auto ind = induction_predicate(sum_witness(), f3);
    for (Code x = 0; x < 3; ++x)
        for (Natural n = 0; n < 4; ++n) CHECK(check_monotone(*ind, n, x, 8).ok);
}

TEST_CASE("library predicates are monotone and consistent") {
    for (const auto& p : library_predicates()) {
        CAPTURE(p->name());
        for (Natural n = 0; n < 5; ++n)
            for (Code x = 0; x < 5; ++x) {
                REQUIRE(check_monotone(*p, n, x, 9).ok);
                REQUIRE_FALSE(oracle::monotonicity_violation(*p, n, x, 9));
            }
    }
    CHECK(oracle::monotonicity_violation(*broken_predicate(), 0, 0, 4));
}

TEST_CASE("induction predicate over fin(1) waits for its witness") {
    const Order f1 = Order::finite(1);
    const auto p = induction_predicate(sum_witness(), f1);
    for (Natural n = 0; n < 6; ++n) {
        const Natural m = oracle::cantor(0, n);  // the witness for (x=0, n)
        CHECK(p->decide(n, 0, BitPrefix(m, 0)) == Decision::Unknown);
        CHECK(p->decide(n, 0, BitPrefix(m + 1, 0)) == Decision::Confirm);
    }
}

TEST_CASE("induction predicate reads the stages below x") {
    const auto p = induction_predicate(sum_witness(), Order::finite(3));
    // x = 1, n = 0: codes 0 and 1 are the stages (0,0) and (0,1); the witness is m = 1.
    CHECK(p->decide(0, 1, bits({})) == Decision::Unknown);
    CHECK(p->decide(0, 1, bits({0})) == Decision::Refute);
    CHECK(p->decide(0, 1, bits({1})) == Decision::Unknown);
    CHECK(p->decide(0, 1, bits({1, 0})) == Decision::Refute);
    CHECK(p->decide(0, 1, bits({1, 1})) == Decision::Confirm);
    CHECK(p->reads(0, 1, 0));
    CHECK(p->reads(0, 1, 1));
    CHECK_FALSE(p->reads(0, 1, 2));  // stage (x=1, n=0) is not below x = 1
}

TEST_CASE("hole-at refutes at the hole once the witness range is exhausted") {
    const auto p = induction_predicate(hole_at(1), Order::finite(3));
    const Natural bound = oracle::cantor(1, 0) + 1;
    BitPrefix s(bound, 1);
    CHECK(p->decide(0, 1, BitPrefix(bound - 1, 1)) == Decision::Unknown);
    CHECK(p->decide(0, 1, s) == Decision::Refute);
    CHECK(p->decide(0, 0, BitPrefix(oracle::cantor(0, 0) + 1, 0)) == Decision::Confirm);
}

TEST_CASE("witness normalization keeps at most one witness") {
    class Many final : public WitnessPredicate {
    public:
        bool holds(Code, Natural, Natural m) const override { return m % 3 == 2; }
        std::string name() const override { return "many"; }
    };
    const auto w = normalized(std::make_shared<Many>());
    int count = 0;
    for (Natural m = 0; m < 50; ++m) count += w->holds(0, 0, m) ? 1 : 0;
    CHECK(count == 1);
    CHECK(w->holds(0, 0, 2));
}

TEST_CASE("tree recursion predicate") {
    const Order t1 = Order::tree(1);
    const auto p = tree_recursion_predicate([](Natural m) { return m; }, t1, "identity");
    CHECK(p->decide(1, 1, {}) == Decision::Confirm);  // m = 1 <= x = 1
    CHECK(p->decide(5, 1, {}) == Decision::Refute);   // a leaf with no witness
    CHECK(p->decide(0, 0, {}) == Decision::Confirm);
    // root, n = 2: decided by the children's bits at stage_code(1,2) and stage_code(2,2)
    const Code left = stage_code(1, 2), right = stage_code(2, 2);
    CHECK(p->decide(2, 0, BitPrefix(left, 0)) == Decision::Unknown);
    BitPrefix s(left + 1, 0);
    s[left] = 1;
    CHECK(p->decide(2, 0, s) == Decision::Confirm);
    CHECK(p->decide(2, 0, BitPrefix(right + 1, 0)) == Decision::Refute);
    CHECK(p->reads(2, 0, left));
    CHECK_FALSE(p->reads(2, 0, left + 1));
}

TEST_CASE("random predicates are deterministic and bounded by their window") {
    const Order f4 = Order::finite(4);
    const auto a = random_predicate({42, 6, 0.0}, f4), b = random_predicate({42, 6, 0.0}, f4);
    const auto c = random_predicate({43, 6, 0.0}, f4);
    bool differs = false;
    for (Natural n = 0; n < 8; ++n)
        for (Code x = 0; x < 4; ++x) {
            for (unsigned len = 0; len <= 7; ++len) {
                const BitPrefix s(len, static_cast<std::uint8_t>((n + x) & 1));
                REQUIRE(a->decide(n, x, s) == b->decide(n, x, s));
                differs |= a->decide(n, x, s) != c->decide(n, x, s);
            }
            const auto bound = oracle::brute_bound(*a, n, x, 10);
            REQUIRE(bound);
            CHECK(*bound <= 6);
        }
    CHECK(differs);
}

TEST_CASE("a partial random predicate leaves one stage undecided forever") {
    const Order f4 = Order::finite(4);
    const auto p = random_predicate({7, 6, 1.0}, f4);
    int undecided = 0;
    for (Natural n = 0; n < 8; ++n)
        for (Code x = 0; x < 4; ++x) undecided += oracle::brute_bound(*p, n, x, 12) ? 0 : 1;
    CHECK(undecided == 1);
}

TEST_CASE("predicates from JSON") {
    const Order f3 = Order::finite(3);
    CHECK(parse_predicate(R"({"kind":"parity"})", f3)->name() == "parity");
    CHECK(parse_predicate(R"({"kind":"induction","params":{"P":"hole-at","hole":2}})", f3)->name() ==
          "induction/hole-at(2)");
    CHECK(parse_predicate(R"({"kind":"induction"})", f3)->name() == "induction/sum-witness");
    CHECK(parse_predicate(R"({"kind":"random"})", f3, 9)->name() == "random(9)");
    CHECK(parse_predicate(R"({"kind":"random","params":{"seed":5}})", f3, 9)->name() == "random(5)");
    CHECK(parse_predicate(R"({"kind":"tree-recursion","params":{"f":"square"}})", Order::tree(2))->name() ==
          "tree-recursion/square");
    CHECK_THROWS_AS(parse_predicate(R"({"kind":"nope"})", f3), ParseError);
    CHECK_THROWS_AS(parse_predicate(R"({"kind":"tree-recursion"})", f3), ParseError);
    CHECK_THROWS_AS(parse_predicate(R"({"kind":"induction"})", Order::tree(2)), ParseError);
    CHECK_THROWS_AS(parse_predicate(R"({"kind":"induction","params":{"P":"other"}})", f3), ParseError);
    CHECK_THROWS_AS(parse_predicate(R"({"kind":"random","params":{"seed":"x"}})", f3), ParseError);
    CHECK_THROWS_AS(parse_predicate("{not json", f3), ParseError);
    CHECK_THROWS_AS(parse_predicate(R"([1,2])", f3), ParseError);
}

TEST_CASE("is_stage_below") {
    const Order f3 = Order::finite(3);
    CHECK(is_stage_below(f3, 2, stage_code(1, 7)));
    CHECK_FALSE(is_stage_below(f3, 1, stage_code(1, 7)));
    CHECK_FALSE(is_stage_below(f3, 2, stage_code(5, 0)));  // 5 is not a member
}
