#include <doctest.h>

#include "support.hpp"

using namespace tnt;
using namespace tnt::sim;

namespace {

const char* kMinimal =
    "tnt-scenario 1\n"
    "vantage VP\n"
    "router VP\n  os host\n"
    "router R1\n  os cisco-15.2\n"
    "link VP 10.0.0.1 R1 10.0.0.2/30\n"
    "target 10.0.0.2\n";

void expect_error(const std::string& text, const std::string& fragment) {
    CAPTURE(text);
    try {
        load_topology(text);
        FAIL("no error for: " << fragment);
    } catch (const ScenarioError& e) {
        CHECK(std::string(e.what()).find(fragment) != std::string::npos);
    }
}

}  // namespace

TEST_SUITE("scenario") {
    TEST_CASE("minimal scenario loads") {
        auto t = load_topology(kMinimal);
        CHECK(t.routers.size() == 2);
        CHECK(t.links.size() == 1);
        CHECK(t.target == Ipv4(10, 0, 0, 2));
        CHECK(t.vantage_index() == t.find("VP"));
        CHECK(t.dialect == "tnt");
        CHECK(t.signalling == Signalling::Ldp);
    }

    TEST_CASE("grammar errors") {
        expect_error("", "empty scenario");
        expect_error("tnt-scenario 1\n", "empty scenario");
        expect_error("tnt-scenario 2\nrouter VP\n  os host\n", "unsupported scenario version");
        expect_error("scenario x\n", "tnt-scenario");
        expect_error(std::string(kMinimal) + "bogus 1\n", "unknown");
        expect_error(std::string(kMinimal) + "router R1\n  os windows\n", "unknown os");
        expect_error(std::string(kMinimal) + "router R1\n  popping sideways\n", "unknown popping");
        expect_error(std::string(kMinimal) + "engine warp 3\n", "unknown engine key");
        expect_error(std::string(kMinimal) + "dialect klingon\n", "unknown dialect");
        expect_error(std::string(kMinimal) + "router R1\n  label external 3\n", "label out of range");
        expect_error(std::string(kMinimal) + "link VP 10.0.1.1 R1 10.0.1.2\n", "prefix length");
        expect_error(std::string(kMinimal) + "link VP 10.0.1.1 R1 10.0.1.2/24\n", "30 or 31");
        expect_error(std::string(kMinimal) + "link VP 10.0.1.1 R1 10.0.2.2/30\n", "not in one prefix");
        expect_error(std::string(kMinimal) + "link VP 10.0.1.0 R1 10.0.1.1/30\n", "network/broadcast");
        expect_error(std::string(kMinimal) + "link VP 10.0.0.1 R1 10.0.0.2/30 igp\nlink VP 10.0.0.1 R1 10.0.0.5/30\n",
                     "not in one prefix");
        expect_error(std::string(kMinimal) + "router R2\n  os cisco-15.2\nlink R1 10.0.0.2 R2 10.0.0.1/30\n",
                     "duplicate address");
        expect_error(std::string(kMinimal) + "link R1 10.0.5.1 R1 10.0.5.2/30\n", "both ends");
        expect_error(std::string(kMinimal) + "router R2\n", "has no os");
        expect_error(std::string(kMinimal) + "vantage R1\n", "vantage must be a host");
        expect_error(std::string(kMinimal) + "vantage NOPE\n", "not declared");
        expect_error(std::string(kMinimal) + "router R1\n  rsvp-tunnel GHOST\n", "unknown router");
        expect_error(std::string(kMinimal) + "router VP\n  mpls on\n", "does not support mpls");
        expect_error(std::string(kMinimal) + "include /nonexistent/file.topo\n", "cannot open include");
    }

    TEST_CASE("a /31 link is accepted") {
        auto t = load_topology(std::string(kMinimal) + "router R2\n  os cisco-15.2\nlink R1 192.0.2.6 R2 192.0.2.7/31\n");
        CHECK(t.links.back().prefix_len == 31);
    }

    TEST_CASE("repeating a link amends its options") {
        auto t = load_topology(std::string(kMinimal) + "link VP 10.0.0.1 R1 10.0.0.2/30 igp\n");
        REQUIRE(t.links.size() == 1);
        CHECK(t.links[0].igp);
    }

    TEST_CASE("missing scenario file") {
        CHECK_THROWS_AS(load_scenario_file("/nonexistent.scn"), ScenarioError);
    }

    TEST_CASE("opaque scenario is a no-propagate core ending without next-hop-self") {
        auto t = testing::scenario("cisco-15.2-opaque");
        for (auto name : {"PE1", "P1", "P2", "P3", "PE2"}) {
            CAPTURE(name);
            int i = t.find(name);
            REQUIRE(i >= 0);
            CHECK(t.routers[i].mpls);
            CHECK_FALSE(t.routers[i].propagate);
        }
        CHECK_FALSE(t.routers[t.find("PE2")].next_hop_self);
        CHECK(t.expect_classes == std::vector<std::string>{"opaque"});
    }

    TEST_CASE("olive jump scenario mixes propagate flags") {
        auto t = testing::scenario("junos-olive-invisible-jump");
        bool on = false, off = false;
        for (auto& r : t.routers) {
            if (!r.mpls) continue;
            CHECK(r.os == Os::JunosOlive);
            (r.propagate ? on : off) = true;
        }
        CHECK(on);
        CHECK(off);
    }

    TEST_CASE("catalog loads and every scenario builds a network") {
        auto all = list_scenarios(testing::scenario_dir());
        CHECK(all.size() >= 20);
        for (auto& p : all) {
            CAPTURE(p);
            auto t = load_scenario_file(p);
            CHECK(t.target);
            CHECK_FALSE(t.expect_classes.empty());
            CHECK_NOTHROW(Network{t});
        }
        CHECK(find_scenario("cisco-15.2-opaque", testing::scenario_dir()));
        CHECK_FALSE(find_scenario("no-such-scenario", testing::scenario_dir()));
    }

    TEST_CASE("engine keys are range checked") {
        EngineConfig cfg;
        auto c = apply_engine_keys({{"starting_ttl", 1}, {"t_frpla", 2}}, cfg);
        CHECK(c.starting_ttl == 1);
        CHECK(c.thresholds.t_frpla == 2);
        CHECK_THROWS_AS(apply_engine_keys({{"starting_ttl", 0}}, cfg), ScenarioError);
        CHECK_THROWS_AS(apply_engine_keys({{"gap_limit", 0}}, cfg), ScenarioError);
    }

    TEST_CASE("chain generator") {
        ChainSpec spec;
        spec.lsrs = 4;
        auto t = make_chain(spec);
        CHECK(t.find("P4") >= 0);
        CHECK(t.find("P5") < 0);
        CHECK(t.target == kChainTarget);
        spec.lsrs = -1;
        CHECK_THROWS_AS(make_chain(spec), ScenarioError);
    }
}
