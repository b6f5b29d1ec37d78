#include <random>

#include "ctlcode/error.hpp"
#include "ctlcode/thread.hpp"
#include "doctest.h"

using namespace ctlcode;

namespace {

BasicAction act(std::string m, std::string f = "f") { return {std::move(f), std::move(m)}; }

// Replies T to `inc` until the counter reaches `limit`, then F; `boom` gets
// D; anything else F. The backing state is the counter.
class Counter final : public Service {
 public:
  Counter(int count, int limit) : count_(count), limit_(limit) {}
  std::pair<Reply, ServicePtr> consume(std::string_view m) const override {
    if (m == "boom") return {Reply::Divergent, undefined_service()};
    if (m == "inc" && count_ < limit_) {
      return {Reply::True, std::make_shared<Counter>(count_ + 1, limit_)};
    }
    return {Reply::False, std::make_shared<Counter>(count_, limit_)};
  }
  bool same_as(const Service& o) const override {
    auto* c = dynamic_cast<const Counter*>(&o);
    return c && c->count_ == count_ && c->limit_ == limit_;
  }
  std::string describe() const override { return std::to_string(count_); }
  int count() const { return count_; }

 private:
  int count_, limit_;
};

ServicePtr counter(int c, int limit = 100) { return std::make_shared<Counter>(c, limit); }

TermPtr random_finite(std::mt19937_64& rng, int depth) {
  const auto k = rng() % 5;
  if (depth == 0 || k == 0) return stop();
  if (k == 1) return dead();
  return postcond(random_finite(rng, depth - 1), act("m" + std::to_string(rng() % 3)),
                  random_finite(rng, depth - 1));
}

TermPtr random_body(std::mt19937_64& rng, int depth, int vars, bool guarded) {
  const auto k = rng() % 6;
  if (guarded && (depth == 0 || k < 3)) {
    if (k == 0) return stop();
    if (k == 1) return dead();
    return var("X" + std::to_string(rng() % vars));
  }
  if (!guarded && depth == 0) return stop();
  return postcond(random_body(rng, depth - 1, vars, true), act("m" + std::to_string(rng() % 3)),
                  random_body(rng, depth - 1, vars, true));
}

TermPtr random_regular(std::mt19937_64& rng) {
  const int vars = 1 + int(rng() % 3);
  std::map<std::string, TermPtr> eqs;
  for (int v = 0; v < vars; ++v) eqs["X" + std::to_string(v)] = random_body(rng, 3, vars, false);
  return rec("X0", make_spec(std::move(eqs)));
}

}  // namespace

TEST_SUITE("thread") {
  TEST_CASE("construction and rendering") {
    auto t = postcond(stop(), act("a"), dead());
    CHECK(render(t) == "S <| f.a |> D");
    CHECK(render(prefix(act("set:x:1", "ea"), stop())) == "ea.set:x:1 ; S");
    CHECK(depth(t) == 1);
    CHECK(recursion_free(t));
    CHECK(actions(t) == std::vector<BasicAction>{act("a")});
    CHECK_THROWS_AS(rec("Y", make_spec({{"X", stop()}})), Error);
    CHECK_THROWS_AS(make_spec({{"X", var("X")}}), Error);
    CHECK_THROWS_AS(make_spec({{"X", prefix(act("a"), var("Z"))}}), Error);
  }

  TEST_CASE("parsing") {
    CHECK(same_term(parse_thread("S"), stop()));
    CHECK(same_term(parse_thread(" ( D ) "), dead()));
    CHECK(same_term(parse_thread("S <| f.a |> D"), postcond(stop(), act("a"), dead())));
    CHECK(same_term(parse_thread("f.a ; f.b ; S"), prefix(act("a"), prefix(act("b"), stop()))));
    CHECK(same_term(parse_thread("ea.exe:fn2/fn3 ; S"), prefix(act("exe:fn2/fn3", "ea"), stop())));
    auto r = parse_thread("rec X { X = f.a ; Y; Y = S <| f.b |> X } in X");
    CHECK(r->kind == Term::Kind::RecConst);
    CHECK(actions(r).size() == 2);
    for (const char* bad : {"", "S S", "f.a", "X", "S <| f.a |>", "rec X { X = Y } in X",
                            "rec X { X = S } in Y", "(S", "f.a ; X"}) {
      CAPTURE(bad);
      CHECK_THROWS_AS(parse_thread(bad), ParseError);
    }
  }

  TEST_CASE("rendering round trips") {
    std::mt19937_64 rng(9);
    for (int k = 0; k < 200; ++k) {
      auto t = random_finite(rng, 5);
      CHECK(same_term(parse_thread(render(t)), t));
    }
    for (int k = 0; k < 50; ++k) {
      auto t = random_regular(rng);
      CHECK(thread_equal_upto(10, parse_thread(render(t)), t));
    }
  }

  TEST_CASE("unfolding") {
    auto s = rec("X", make_spec({{"X", stop()}}));
    CHECK(same_term(unfold(s), stop()));
    auto loop = rec("X", make_spec({{"X", prefix(act("a"), var("X"))}}));
    auto u = unfold(loop);
    REQUIRE(u->kind == Term::Kind::PostCond);
    CHECK(same_term(u->pos, loop));
    CHECK(same_term(u->neg, loop));
    auto two = make_spec({{"X", prefix(act("a"), var("Y"))}, {"Y", dead()}});
    auto v = unfold(rec("X", two));
    CHECK(same_term(v->pos, rec("Y", two)));
    CHECK_THROWS_AS(unfold(stop()), Error);
  }

  TEST_CASE("projections") {
    const auto a = act("a");
    CHECK(same_term(project(0, stop()), dead()));
    CHECK(same_term(project(0, prefix(a, stop())), dead()));
    CHECK(same_term(project(2, prefix(a, stop())), prefix(a, stop())));
    CHECK(same_term(project(1, prefix(a, stop())), prefix(a, dead())));
    auto loop = rec("X", make_spec({{"X", prefix(a, var("X"))}}));
    CHECK(same_term(project(3, loop), prefix(a, prefix(a, prefix(a, dead())))));
    CHECK(thread_equal_upto(5, loop, rec("Y", make_spec({{"Y", prefix(a, var("Y"))}}))));
    CHECK_FALSE(thread_equal_upto(1, prefix(a, stop()), prefix(act("b"), stop())));
    CHECK(thread_equal_upto(0, prefix(a, stop()), prefix(act("b"), stop())));
  }

  TEST_CASE("projection stabilises on finite threads") {
    std::mt19937_64 rng(17);
    for (int k = 0; k < 100; ++k) {
      auto t = random_finite(rng, 6);
      const auto d = depth(t);
      CHECK(same_term(project(d + 1, t), t));
      CHECK(same_term(project(d + 5, t), t));
      for (std::size_t n = 0; n <= d; ++n) {
        CHECK(depth(project(n, t)) <= n);
        CHECK(same_term(project(n, project(n + 1, t)), project(n, t)));
      }
    }
  }

  TEST_CASE("projection is consistent with unfolding on regular threads") {
    std::mt19937_64 rng(23);
    for (int k = 0; k < 20; ++k) {
      auto t = random_regular(rng);
      for (std::size_t n = 0; n <= 12; ++n) {
        auto p = project(n, t);
        CHECK(recursion_free(p));
        CHECK(depth(p) <= n);
        CHECK(same_term(p, project(n, unfold(t))));
        CHECK(same_term(project(n, project(12, t)), p));
      }
    }
  }

  TEST_CASE("apply axioms") {
    const auto h = counter(0);
    // Stop returns the service itself.
    auto s = apply(stop(), "f", h, 8);
    CHECK(s.outcome == ApplyResult::Outcome::Converged);
    CHECK(s.service->same_as(*h));
    // Dead is undefined.
    CHECK(apply(dead(), "f", h, 8).outcome == ApplyResult::Outcome::Undefined);
    CHECK(apply(dead(), "f", h, 8).service->is_undefined());
    // A foreign focus is undefined.
    CHECK(apply(prefix(act("inc", "g"), stop()), "f", h, 8).outcome ==
          ApplyResult::Outcome::Undefined);
    // True continues left with the derived service, False continues right.
    auto t4 = apply(postcond(stop(), act("inc"), dead()), "f", counter(0, 1), 8);
    CHECK(t4.outcome == ApplyResult::Outcome::Converged);
    CHECK(t4.service->same_as(*counter(1, 1)));
    auto t5 = apply(postcond(dead(), act("inc"), stop()), "f", counter(1, 1), 8);
    CHECK(t5.outcome == ApplyResult::Outcome::Converged);
    CHECK(t5.service->same_as(*counter(1, 1)));
    CHECK(t5.trace == std::vector<std::pair<std::string, Reply>>{{"inc", Reply::False}});
    // A divergent reply is undefined.
    CHECK(apply(postcond(stop(), act("boom"), stop()), "f", h, 8).outcome ==
          ApplyResult::Outcome::Undefined);
    // The undefined service absorbs.
    CHECK(apply(stop(), "f", undefined_service(), 8).outcome == ApplyResult::Outcome::Undefined);
  }

  TEST_CASE("apply on recursive threads") {
    // Increment until the counter refuses, then stop.
    auto loop = rec("X", make_spec({{"X", postcond(var("X"), act("inc"), stop())}}));
    auto r = apply(loop, "f", counter(0, 5), 100);
    CHECK(r.outcome == ApplyResult::Outcome::Converged);
    CHECK(r.actions == 6);
    CHECK(r.service->same_as(*counter(5, 5)));
    CHECK(apply(loop, "f", counter(0, 5), 3).outcome == ApplyResult::Outcome::FuelExhausted);
    // Never terminates: bounded by fuel, not by unfolding.
    auto forever = rec("X", make_spec({{"X", prefix(act("peek"), var("X"))}}));
    auto f = apply(forever, "f", counter(0), 50);
    CHECK(f.outcome == ApplyResult::Outcome::FuelExhausted);
    CHECK(f.actions == 50);
    // Applying a constant equals applying its unfolding.
    for (std::uint64_t fuel : {1, 4, 6, 7, 100}) {
      auto a = apply(loop, "f", counter(2, 5), fuel);
      auto b = apply(unfold(loop), "f", counter(2, 5), fuel);
      CHECK(a.outcome == b.outcome);
      CHECK(a.actions == b.actions);
    }
  }
}
