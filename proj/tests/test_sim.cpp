#include <doctest.h>

#include "support.hpp"

using namespace tnt;
using namespace tnt::sim;

namespace {

int iface_towards(const Network& net, int router, const std::string& peer) {
    const auto& ifs = net.ifaces(router);
    int p = net.topology().find(peer);
    for (std::size_t i = 0; i < ifs.size(); ++i)
        if (ifs[i].peer == p) return int(i);
    return -1;
}

}  // namespace

TEST_SUITE("sim") {
    TEST_CASE("penultimate pop takes the minimum on Cisco") {
        CHECK(php_pop_ttl(Os::Cisco152, true, 64, 252) == 64);
        CHECK(php_pop_ttl(Os::Cisco152, true, 255, 252) == 252);
        CHECK(php_pop_ttl(Os::Cisco124, false, 255, 252) == 252);
    }

    TEST_CASE("olive pop follows its own propagate setting") {
        CHECK(php_pop_ttl(Os::JunosOlive, true, 64, 252) == 252);
        CHECK(php_pop_ttl(Os::JunosOlive, false, 64, 252) == 64);
    }

    TEST_CASE("15.2 UHP egress forwards an IP-TTL 1 packet undecremented") {
        Network net(testing::scenario("cisco-15.2-invisible-uhp"));
        int pe2 = net.topology().find("PE2");
        int in = iface_towards(net, pe2, "P3");
        REQUIRE(in >= 0);
        SimPacket p;
        p.src = net.vantage_address();
        p.dst = Ipv4(192, 168, 7, 1);
        p.ip_ttl = 1;
        p.stack = {LabelStackEntry{kExplicitNullV4, 0, true, 250}};
        auto r = net.step(pe2, p, in, false);
        CHECK(r.kind == StepResult::Forward);
        CHECK(p.ip_ttl == 1);
        CHECK(p.stack.empty());
    }

    TEST_CASE("reply TTL pairs seen at the vantage point") {
        auto php = testing::run("cisco-15.2-explicit-php").trace;
        auto* p1 = testing::hop_with(php, "10.1.0.2");
        REQUIRE(p1);
        CHECK(p1->hop.ttl_te == 247);
        CHECK(p1->hop.ttl_er == 253);

        auto vmx = testing::run("junos-vmx-explicit-php-icmp-tunneling").trace;
        bool found = false;
        for (auto& h : vmx.hops)
            found = found || (h.hop.ttl_te == 246 && h.hop.ttl_er == 62);
        CHECK(found);
    }

    TEST_CASE("opaque quote at the abrupt end") {
        auto t = testing::run("cisco-15.2-opaque").trace;
        auto* pe2 = testing::hop_with(t, "10.4.0.2");
        REQUIRE(pe2);
        REQUIRE(pe2->hop.lse_stack.size() == 1);
        CHECK(pe2->hop.lse_stack[0].label == 16);
        CHECK(pe2->hop.lse_stack[0].lse_ttl == 252);
    }

    TEST_CASE("juniper VPRN egress shows the CE before the egress") {
        auto t = testing::run("junos-vprn-php-buddy").trace;
        std::vector<std::string> addrs;
        for (auto& h : t.hops)
            if (h.hop.address) addrs.push_back(h.hop.address->str());
        auto ce = std::find(addrs.begin(), addrs.end(), "192.168.2.2");
        auto pe = std::find(addrs.begin(), addrs.end(), "192.168.2.1");
        REQUIRE(ce != addrs.end());
        REQUIRE(pe != addrs.end());
        CHECK(ce < pe);
    }

    TEST_CASE("olive invisible jump") {
        auto t = testing::run("junos-olive-invisible-jump").trace;
        REQUIRE(t.hops.size() == 3);
        CHECK(t.hops.back().hop.qttl == 250);
        for (auto& h : t.hops) CHECK(h.annotation.revealed.empty());
    }

    TEST_CASE("cisco explicit jump skips the tunnel length after the tunnel") {
        auto t = testing::run("cisco-15.2-explicit-jump").trace;
        REQUIRE_FALSE(t.hops.empty());
        CHECK(t.hops.back().hop.qttl == 2);
    }

    TEST_CASE("TTL stays monotonic through homogeneous tunnels") {
        for (std::string os : {"cisco-15.2", "cisco-12.4", "junos-vmx", "junos-olive"})
            for (bool propagate : {true, false})
                for (bool uhp : {false, true}) {
                    ChainSpec spec;
                    spec.os = os;
                    spec.propagate = propagate;
                    spec.uhp = uhp;
                    spec.lsrs = 4;
                    CAPTURE(os);
                    CAPTURE(propagate);
                    CAPTURE(uhp);
                    Network net(make_chain(spec));
                    SimPacket p;
                    p.src = net.vantage_address();
                    p.dst = kChainTarget;
                    p.ip_ttl = 64;
                    auto a = net.walk(Emission{p, net.vantage(), -1});
                    REQUIRE(a.delivered);
                    CHECK(a.packet.ip_ttl <= 64);
                    CHECK(a.packet.stack.empty());
                }
    }

    TEST_CASE("unroutable destination is dropped") {
        Network net(make_chain({}));
        SimPacket p;
        p.src = net.vantage_address();
        p.dst = Ipv4(203, 0, 113, 9);
        auto a = net.walk(Emission{p, net.vantage(), -1});
        CHECK_FALSE(a.delivered);
    }

    TEST_CASE("simulator is deterministic") {
        for (auto& name : testing::golden_names()) {
            CAPTURE(name);
            CHECK(testing::run(name).trace == testing::run(name).trace);
        }
    }
}
