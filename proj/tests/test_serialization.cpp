#include "belle/serialization.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace belle;
using belle::testing::rq;

TEST_CASE("rationals") {
  for (const auto& r : {rq(0), rq(1), rq(-3, 7), rq(22, 6)}) CHECK(rational_from_json(to_json(r)) == r);
  CHECK(rational_from_json(json("3/9")) == rq(1, 3));
  CHECK(rational_from_json(json(4)) == 4);
  CHECK(rational_from_json(json{{"num", 2}, {"den", 4}}) == rq(1, 2));
  CHECK(to_json(rq(2, 4)).dump() == R"({"den":"2","num":"1"})");
  CHECK_THROWS_AS(rational_from_json(json("1/0")), MalformedInput);
  CHECK_THROWS_AS(rational_from_json(json(1.5)), MalformedInput);
  CHECK_THROWS_AS(rational_from_json(json{{"num", "1"}}), MalformedInput);
}

TEST_CASE("sets, densities and random variables") {
  auto s = RationalSet::rectangle(rq(0), rq(1, 2), rq(1, 3), rq(1)).unite(RationalSet::vertical_strip({rq(3, 4), rq(1)}));
  CHECK(rational_set_from_json(to_json(s)) == s);
  auto p = PiecewiseConstant::from_steps({rq(1, 3), rq(1, 2)}, {rq(1), rq(0), rq(1, 7)});
  CHECK(piecewise_from_json(to_json(p)) == p);
  CHECK(piecewise_from_json(json("1/2")) == PiecewiseConstant::constant(rq(1, 2)));
  CHECK(piecewise_from_json(to_json(rq(2, 3))) == PiecewiseConstant::constant(rq(2, 3)));
  auto f = vertical_strip_map<Point>({rq(1, 3)}, {4, 9});
  CHECK(random_variable_from_json(to_json(f)) == f);
  CHECK(random_variable_from_json(json(3)) == StepMap<Point>::constant(3));

  json gap = R"({"cells":[{"rects":[[0,"1/2",0,1]],"value":1}]})"_json;
  CHECK_THROWS_AS(random_variable_from_json(gap), MalformedInput);
  json outside = R"({"cells":[{"rects":[[0,2,0,1]],"value":1}]})"_json;
  CHECK_THROWS_AS(random_variable_from_json(outside), MalformedInput);
}

TEST_CASE("endomorphism descriptors round trip") {
  std::vector<WindowInjection> endos{
      identity_endo(),
      identity_endo(Domain::fq(3)),
      successor_endo(),
      shift_endo(5),
      table_endo({{0, 3}, {3, 0}}),
      linear_endo_from_basis_images(3, {FqVector::from_coords(3, {1, 2}), FqVector::basis(3, 0)}),
      basis_shift_endo(2, 2),
      compose(table_endo({{1, 4}, {4, 1}}), shift_endo(3)),
      inverse(compose(table_endo({{1, 4}, {4, 1}}), swap_blocks())),
      approximate_by_automorphisms(successor_endo(), 7)[3],
      *factor_through(compose(table_endo({{1, 2}, {2, 1}}), successor_endo()), successor_endo(), 10),
      product_endo(successor_endo(), shift_endo(2)),
      product_component(compose(swap_blocks(), compose(product_endo(successor_endo(), identity_endo()), swap_blocks())),
                        true, Domain::natural()),
      wreath_endo(successor_endo(), {{0, shift_endo(2)}, {3, table_endo({{0, 1}, {1, 0}})}}, Domain::natural()),
      rotate_blocks()};
  for (const auto& e : endos) {
    auto back = endo_from_json(e.descriptor());
    CHECK(back == e);
    for (Point x = 0; x < 40; ++x) CHECK(back.apply(x) == e.apply(x));
  }
}

TEST_CASE("endomorphism shorthands") {
  CHECK(endo_from_text("successor") == successor_endo());
  CHECK(endo_from_text("shift:2") == shift_endo(2));
  CHECK(endo_from_text("identity") == identity_endo());
  CHECK(endo_from_text("identity", Domain::fq(2)) == identity_endo(Domain::fq(2)));
  CHECK(endo_from_text("basis-shift", Domain::fq(2)) == basis_shift_endo(2));
  CHECK(endo_from_text("table:[[0,1],[1,0]]") == table_endo({{0, 1}, {1, 0}}));
  CHECK(endo_from_text(R"({"kind":"shift","k":4})") == shift_endo(4));
  CHECK(endo_from_text("swap") == swap_blocks());
  for (const std::string bad : {"", "succ", "shift:x", "table:[[0]]", "basis-shift", "{", R"({"kind":"nope"})",
                                R"({"kind":"approx","tau":"successor","n":2,"i":2})"})
    CHECK_THROWS_AS(endo_from_text(bad), MalformedInput);
  try {
    endo_from_json(R"({"kind":"compose","outer":"successor","inner":{"kind":"shift"}})"_json);
    FAIL("expected a malformed input");
  } catch (const MalformedInput& e) {
    CHECK(std::string(e.what()).find("$.inner") != std::string::npos);
  }
}

TEST_CASE("random endomorphisms and pairs") {
  std::vector<StepMap<WindowInjection>::Cell> cells{{RationalSet::vertical_strip({rq(0), rq(1, 2)}), successor_endo()},
                                                    {RationalSet::vertical_strip({rq(1, 2), rq(1)}), shift_endo(2)}};
  RandomEndo h(StepMap<WindowInjection>::from_cells(cells));
  CHECK(random_endo_from_json(to_json(h)) == h);
  CHECK(random_endo_from_json(json("successor")) == RandomEndo::constant(successor_endo()));

  PairModel p{Domain::natural(), 30, 0, h};
  auto back = pair_from_json(to_json(p), 5);
  CHECK(back.window == 30);
  CHECK(back.image == h);

  auto pure = pair_from_text("pure:successor", 64);
  CHECK(pure.window == 64);
  CHECK(pure.image == RandomEndo::constant(successor_endo()));
  auto fq = pair_from_text("fq2x2:basis-shift", 64);
  CHECK(fq.window == 4);
  CHECK(fq.dim == 2);
  CHECK(fq.image == RandomEndo::constant(basis_shift_endo(2)));
  for (const std::string bad : {"pure", "fq2:identity", "fq6x2:identity", "nat:successor", "pure:basis-shift",
                                R"({"structure":"pure","image":{"kind":"identity","q":2}})"})
    CHECK_THROWS_AS(pair_from_text(bad, 8), MalformedInput);
}

TEST_CASE("realization specs and events") {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    auto spec = belle::testing::random_realization_spec(rng);
    auto back = realization_from_json(to_json(spec));
    REQUIRE(back.groups.size() == spec.groups.size());
    for (std::size_t c = 0; c < spec.groups.size(); ++c) {
      CHECK(back.groups[c].home == spec.groups[c].home);
      REQUIRE(back.groups[c].pieces.size() == spec.groups[c].pieces.size());
      for (std::size_t q = 0; q < spec.groups[c].pieces.size(); ++q) {
        CHECK(back.groups[c].pieces[q].value == spec.groups[c].pieces[q].value);
        CHECK(back.groups[c].pieces[q].density == spec.groups[c].pieces[q].density);
      }
    }
  }
  auto events = events_from_json(R"([{"strip":[0,"1/2"],"values":[1,3]},{"strip":["1/4",1],"label":"all"}])"_json);
  REQUIRE(events.size() == 2);
  CHECK(events[0].predicate(3));
  CHECK_FALSE(events[0].predicate(2));
  CHECK(events[1].predicate(17));
  CHECK(events[1].label == "all");
  CHECK_THROWS_AS(events_from_json(R"([{"strip":[1,0]}])"_json), MalformedInput);
}
