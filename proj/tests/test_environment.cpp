#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kgcwalk/environment.hpp"
#include "kgcwalk/rng.hpp"

#include <sstream>

using namespace kgcwalk;

namespace {

Graph tiny_graph() {
    std::istringstream in("A\tr\tB\nB\tr\tC\nA\ts\tC\n");
    return Graph::load(in);
}

} // namespace

TEST_CASE("episode config validation") {
    EpisodeConfig ok;
    ok.validate();
    EpisodeConfig bad_h;
    bad_h.horizon = 0;
    CHECK_THROWS_AS(bad_h.validate(), std::invalid_argument);
    EpisodeConfig bad_gamma;
    bad_gamma.discount = 0.99;
    CHECK_THROWS_AS(bad_gamma.validate(), std::invalid_argument);
}

TEST_CASE("reset starts at the central entity with the query carried over") {
    Graph g = tiny_graph();
    const Vector lq{0.5, -0.5};
    State s = env::reset(g, *g.find_entity("A"), lq);
    CHECK(s.node == *g.find_entity("A"));
    CHECK(s.step == 0);
    CHECK(s.query == lq);

    State s2 = env::reset(g, *g.find_entity("A"), lq);
    CHECK(s2.node == s.node);
    CHECK(s2.step == s.step);
    CHECK(s2.query == s.query);
}

TEST_CASE("reset rejects invalid entities") {
    Graph g = tiny_graph();
    CHECK_THROWS_AS(env::reset(g, 42, Vector{}), std::out_of_range);
}

TEST_CASE("valid_actions delegates to the graph adjacency") {
    Graph g = tiny_graph();
    State s = env::reset(g, *g.find_entity("A"), Vector{});
    auto actions = env::valid_actions(g, s);
    auto expected = g.outgoing(*g.find_entity("A"));
    REQUIRE(actions.size() == expected.size());
    for (std::size_t i = 0; i < actions.size(); ++i) CHECK(actions[i] == expected[i]);
    CHECK(!actions.empty());
}

TEST_CASE("step transitions along edges and self-loops") {
    Graph g = tiny_graph();
    const int horizon = 3;
    State s = env::reset(g, *g.find_entity("A"), Vector{1.0});
    auto actions = env::valid_actions(g, s);

    SUBCASE("self-loop stays in place") {
        State next = env::step(g, s, actions[0], horizon);
        CHECK(next.node == s.node);
        CHECK(next.step == 1);
        CHECK(next.query == s.query);
    }
    SUBCASE("edge moves to the tail") {
        State next = env::step(g, s, actions[1], horizon);
        CHECK(next.node == *g.find_entity("B"));
        CHECK(next.step == 1);
    }
    SUBCASE("illegal action is rejected") {
        EdgeAction bogus{1, 999, 2};
        CHECK_THROWS_WITH_AS(env::step(g, s, bogus, horizon), doctest::Contains("not valid"),
                             std::runtime_error);
    }
    SUBCASE("stepping past the horizon is rejected") {
        State at_end = s;
        at_end.step = horizon;
        CHECK_THROWS_WITH_AS(env::step(g, at_end, actions[0], horizon),
                             doctest::Contains("horizon"), std::runtime_error);
    }
}

TEST_CASE("terminal reward is the gold-membership indicator") {
    Graph g = tiny_graph();
    const int horizon = 2;
    State s = env::reset(g, *g.find_entity("C"), Vector{});
    s.step = horizon;

    const std::vector<EntityId> gold_hit = {*g.find_entity("C")};
    const std::vector<EntityId> gold_miss = {*g.find_entity("A")};
    const std::vector<EntityId> gold_multi = {*g.find_entity("A"), *g.find_entity("C")};
    CHECK(env::terminal_reward(s, gold_hit, horizon) == 1.0);
    CHECK(env::terminal_reward(s, gold_miss, horizon) == 0.0);
    CHECK(env::terminal_reward(s, gold_multi, horizon) == 1.0);
}

TEST_CASE("terminal reward before the horizon is an error") {
    Graph g = tiny_graph();
    State s = env::reset(g, 0, Vector{});
    const std::vector<EntityId> golds = {0};
    CHECK_THROWS_WITH_AS(env::terminal_reward(s, golds, 2), doctest::Contains("horizon"),
                         std::runtime_error);
}

TEST_CASE("transitions are a deterministic function (1000 random replays)") {
    std::istringstream in("A\tr\tB\nB\tr\tC\nC\tt\tD\nD\tr\tA\nA\ts\tC\nB\tt\tD\n");
    Graph g = Graph::load(in);
    Rng rng(2024);
    const int horizon = 10;
    for (int trial = 0; trial < 1000; ++trial) {
        State s = env::reset(g, static_cast<EntityId>(rng.uniform_index(g.entity_count())),
                             Vector{});
        s.step = static_cast<int>(rng.uniform_index(horizon));
        auto actions = env::valid_actions(g, s);
        const EdgeAction a = actions[rng.uniform_index(actions.size())];
        State n1 = env::step(g, s, a, horizon);
        State n2 = env::step(g, s, a, horizon);
        CHECK(n1.node == n2.node);
        CHECK(n1.step == n2.step);
        CHECK(n1.node == a.tail);
    }
}

TEST_CASE("totality: every reachable state below the horizon has actions") {
    std::istringstream in("A\tr\tB\nC\tr\tA\n");
    Graph g = Graph::load(in);
    for (EntityId v = 0; v < g.entity_count(); ++v) {
        State s = env::reset(g, v, Vector{});
        CHECK(!env::valid_actions(g, s).empty());
    }
}
