#include <doctest.h>

#include <set>

#include "support.hpp"
#include "tnt/classifier.hpp"

using namespace tnt;
using namespace tnt::sim;

namespace {

// Answers UDP probes only for the listed addresses.
class UdpOnlyProber : public Prober {
public:
    explicit UdpOnlyProber(std::set<Ipv4> live) : live_(std::move(live)) {}
    ProbeReply trace_probe(Ipv4, int, std::uint16_t) override { return count({}); }
    ProbeReply echo(Ipv4) override { return count({}); }
    ProbeReply udp(Ipv4 target) override {
        ProbeReply r;
        if (live_.count(target)) {
            r.address = target;
            r.kind = ReplyKind::DestUnreachable;
            r.ttl = 250;
        }
        return count(r);
    }
    long probes_emitted() const override { return emitted_; }

private:
    ProbeReply count(ProbeReply r) {
        ++emitted_;
        return r;
    }
    std::set<Ipv4> live_;
    long emitted_ = 0;
};

class FailingProber : public Prober {
public:
    explicit FailingProber(Prober& inner, long budget) : inner_(inner), budget_(budget) {}
    ProbeReply trace_probe(Ipv4 t, int ttl, std::uint16_t f) override { return check(), inner_.trace_probe(t, ttl, f); }
    ProbeReply echo(Ipv4 t) override { return check(), inner_.echo(t); }
    ProbeReply udp(Ipv4 t) override { return check(), inner_.udp(t); }
    long probes_emitted() const override { return inner_.probes_emitted(); }

private:
    void check() {
        if (inner_.probes_emitted() >= budget_) throw ProbeFailure("socket gone");
    }
    Prober& inner_;
    long budget_;
};

std::vector<std::string> revealed_addresses(const TraceHop& h) {
    std::vector<std::string> out;
    for (auto& r : h.annotation.revealed) out.push_back(r.hop.address ? r.hop.address->str() : "*");
    return out;
}

const TraceHop* first_revealing(const AnnotatedTrace& t) {
    for (auto& h : t.hops)
        if (!h.annotation.revealed.empty()) return &h;
    return nullptr;
}

}  // namespace

TEST_SUITE("revelation") {
    TEST_CASE("buddy on a /30 and on a /31") {
        UdpOnlyProber p({Ipv4(10, 4, 0, 1), Ipv4(10, 4, 0, 2), Ipv4(192, 0, 2, 7)});
        Session s(p, 1);
        CHECK(buddy(Ipv4(10, 4, 0, 2), s) == Ipv4(10, 4, 0, 1));
        CHECK(buddy(Ipv4(10, 4, 0, 1), s) == Ipv4(10, 4, 0, 2));
        CHECK(buddy(Ipv4(192, 0, 2, 6), s) == Ipv4(192, 0, 2, 7));
        CHECK_FALSE(buddy(Ipv4(172, 16, 0, 9), s));
        CHECK(s.counts().buddy == s.counts().total());
    }

    TEST_CASE("incoming interface probe") {
        Network net(testing::scenario("cisco-15.2-invisible-uhp"));
        SimProber p(net);
        Session s(p, 1);
        auto got = udp_incoming_interface_probe(Ipv4(10, 4, 0, 1), s);
        REQUIRE(got);
        CHECK(got->str() == "10.3.0.2");
        CHECK_FALSE(udp_incoming_interface_probe(Ipv4(203, 0, 113, 1), s));
    }

    TEST_CASE("cisco invisible PHP is revealed backward") {
        auto t = testing::run("cisco-15.2-invisible-php").trace;
        auto* h = testing::hop_with(t, "10.4.0.2");
        REQUIRE(h);
        CHECK(h->annotation.code == Code::FRPLA);
        CHECK(h->annotation.state == RevealState::Brpr);
        CHECK(revealed_addresses(*h) == std::vector<std::string>{"10.1.0.2", "10.2.0.2", "10.3.0.2"});
        std::vector<int> steps;
        for (auto& r : h->annotation.revealed) steps.push_back(r.step);
        CHECK(steps == std::vector<int>{2, 1, 0});
    }

    TEST_CASE("junos invisible PHP is revealed in one trace") {
        auto t = testing::run("junos-vmx-invisible-php").trace;
        auto* h = testing::hop_with(t, "192.168.1.14");
        REQUIRE(h);
        CHECK(h->annotation.code == Code::RTLA);
        CHECK(h->annotation.state == RevealState::Dpr);
        CHECK(revealed_addresses(*h) == std::vector<std::string>{"192.168.1.2", "192.168.1.6", "192.168.1.10"});
        for (auto& r : h->annotation.revealed) CHECK(r.step == 0);
    }

    TEST_CASE("UHP duplicate reveals the egress through buddies") {
        auto t = testing::run("cisco-15.2-invisible-uhp").trace;
        auto* h = first_revealing(t);
        REQUIRE(h);
        CHECK(h->annotation.code == Code::DUP_IP);
        CHECK(h->annotation.state == RevealState::Brpr);
        CHECK(revealed_addresses(*h) == std::vector<std::string>{"10.1.0.2", "10.2.0.2", "10.3.0.2", "10.4.0.2"});
        for (auto& r : h->annotation.revealed) CHECK(r.buddy_used);
    }

    TEST_CASE("VPRN opaque has nothing to reveal") {
        for (auto name : {"cisco-15.2-vprn-php", "cisco-15.2-vprn-uhp"}) {
            CAPTURE(name);
            auto t = testing::run(name).trace;
            bool saw = false;
            for (auto& h : t.hops)
                if (h.annotation.code == Code::LSE_TTL) {
                    saw = true;
                    CHECK(h.annotation.state == RevealState::NothingToReveal);
                    CHECK(h.annotation.revealed.empty());
                }
            CHECK(saw);
        }
    }

    TEST_CASE("revealed states are consistent with revealed lists") {
        for (auto& name : testing::golden_names()) {
            CAPTURE(name);
            for (bool brute : {false, true}) {
                EngineConfig base;
                base.brute_force = brute;
                auto t = run_scenario(testing::scenario(name), base).trace;
                for (auto& h : t.hops) {
                    auto s = h.annotation.state;
                    if (is_revealed_state(s)) CHECK_FALSE(h.annotation.revealed.empty());
                    if (s == RevealState::NothingToReveal) CHECK(h.annotation.revealed.empty());
                    if (s == RevealState::OneHopLsp) CHECK(h.annotation.revealed.size() == 1);
                    for (auto& r : h.annotation.revealed) {
                        if (!r.buddy_used) CHECK(r.hop.address != h.hop.address);
                        std::size_t i = &h - t.hops.data();
                        if (i > 0) CHECK(r.hop.address != t.hops[i - 1].hop.address);
                    }
                }
            }
        }
    }

    TEST_CASE("cisco chains reveal every LSR backward, juniper chains in one trace") {
        for (int lsrs = 3; lsrs <= 8; ++lsrs) {
            CAPTURE(lsrs);
            std::vector<std::string> want;
            for (int i = 0; i < lsrs; ++i) want.push_back(fmt::format("10.100.{}.2", i));

            ChainSpec cisco;
            cisco.lsrs = lsrs;
            cisco.propagate = false;
            auto ct = testing::chain_trace(cisco);
            auto* ch = first_revealing(ct);
            REQUIRE(ch);
            CHECK(ch->annotation.state == RevealState::Brpr);
            CHECK(revealed_addresses(*ch) == want);

            ChainSpec junos = cisco;
            junos.os = "junos-vmx";
            auto jt = testing::chain_trace(junos);
            auto* jh = first_revealing(jt);
            REQUIRE(jh);
            CHECK(jh->annotation.state == RevealState::Dpr);
            CHECK(revealed_addresses(*jh) == want);
        }
    }

    TEST_CASE("revelation is idempotent") {
        Network net(testing::scenario("cisco-15.2-invisible-php"));
        auto t = testing::run("cisco-15.2-invisible-php").trace;
        auto* h = testing::hop_with(t, "10.4.0.2");
        REQUIRE(h);
        std::size_t i = h - t.hops.data();
        SimProber p(net);
        Session s1(p, t.flow_id);
        Session s2(p, t.flow_id);
        auto a = reveal_tunnel(t.hops[i - 1].hop, h->hop, Code::FRPLA, s1);
        auto b = reveal_tunnel(t.hops[i - 1].hop, h->hop, Code::FRPLA, s2);
        CHECK(a.state == b.state);
        CHECK(a.revealed == b.revealed);
        CHECK(a.revealed == h->annotation.revealed);
    }
}

TEST_SUITE("engine") {
    TEST_CASE("explicit PHP example") {
        auto r = testing::run("cisco-15.2-explicit-php");
        auto& t = r.trace;
        CHECK(t.target.str() == "192.168.7.1");
        CHECK(t.hops.size() == 8);
        auto* p1 = testing::hop_at(t, 3);
        REQUIRE(p1);
        CHECK(p1->hop.address->str() == "10.1.0.2");
        CHECK(p1->annotation.code == Code::LSE);
        REQUIRE(p1->hop.lse_stack.size() == 1);
        CHECK(p1->hop.lse_stack[0].label == 19);
        CHECK(trace_metrics(t, r.dialect)[2].uturn == 6);
    }

    TEST_CASE("invisible PHP example with its shadow") {
        auto r = testing::run("cisco-15.2-invisible-php");
        auto& t = r.trace;
        auto* pe1 = testing::hop_with(t, "192.168.8.2");
        REQUIRE(pe1);
        std::size_t i = pe1 - t.hops.data();
        REQUIRE(i + 3 < t.hops.size());
        CHECK(t.hops[i + 1].annotation.code == Code::FRPLA);
        CHECK(t.hops[i + 1].annotation.revealed.size() == 3);
        auto m = trace_metrics(t, r.dialect);
        CHECK(m[i + 1].frpla == 3);
        CHECK(m[i + 2].frpla == 2);
        CHECK(m[i + 3].frpla == 1);
        CHECK(t.hops[i + 2].annotation.code == Code::None);
        CHECK(t.hops[i + 3].annotation.code == Code::None);
    }

    TEST_CASE("FRPLA shadow decays one per hop") {
        for (int ll = 1; ll <= 6; ++ll) {
            ChainSpec spec;
            spec.lsrs = ll;
            spec.propagate = false;
            auto t = testing::chain_trace(spec);
            const TraceHop* pe2 = testing::hop_with(t, fmt::format("10.{}.{}.2", 100 + ll / 250, ll % 250));
            REQUIRE(pe2);
            std::size_t e = pe2 - t.hops.data();
            for (std::size_t k = 0; e + k < t.hops.size(); ++k) {
                CAPTURE(ll);
                CAPTURE(k);
                CHECK(frpla_value(t.hops[e + k].hop) == std::max(ll - int(k), 0));
            }
        }
    }

    TEST_CASE("identical inputs give identical traces") {
        for (auto& name : testing::golden_names()) {
            CAPTURE(name);
            auto topo = testing::scenario(name);
            auto a = run_scenario(topo);
            auto b = run_scenario(topo);
            CHECK(dump_record(a.trace) == dump_record(b.trace));
        }
    }

    TEST_CASE("probe accounting identity") {
        for (auto& name : testing::golden_names()) {
            CAPTURE(name);
            for (bool brute : {false, true}) {
                auto topo = testing::scenario(name);
                EngineConfig cfg;
                cfg.brute_force = brute;
                cfg = apply_engine_keys(topo.engine, cfg);
                Network net(topo);
                SimProber p(net);
                auto t = trace_naughty_tunnel(*topo.target, cfg, p);
                CHECK(t.probe_counts.total() == p.probes_emitted());
                CHECK(t.probe_counts.outcome_total() == t.probe_counts.revelation);
                CHECK(t.probe_counts.original == long(t.hops.size()));
            }
        }
    }

    TEST_CASE("brute force reveals everything the triggers reveal") {
        for (auto& name : testing::golden_names()) {
            CAPTURE(name);
            auto topo = testing::scenario(name);
            auto trig = run_scenario(topo).trace;
            EngineConfig base;
            base.brute_force = true;
            auto brute = run_scenario(topo, base).trace;
            std::set<std::pair<std::string, std::string>> brute_pairs;
            for (std::size_t i = 1; i < brute.hops.size(); ++i)
                if (!brute.hops[i].annotation.revealed.empty() && brute.hops[i - 1].hop.address &&
                    brute.hops[i].hop.address)
                    brute_pairs.insert({brute.hops[i - 1].hop.address->str(), brute.hops[i].hop.address->str()});
            for (std::size_t i = 1; i < trig.hops.size(); ++i) {
                if (trig.hops[i].annotation.revealed.empty()) continue;
                auto c = trig.hops[i].annotation.code;
                if (c != Code::FRPLA && c != Code::RTLA) continue;
                CHECK(brute_pairs.count({trig.hops[i - 1].hop.address->str(), trig.hops[i].hop.address->str()}));
            }
        }
    }

    TEST_CASE("gap limit halts the trace") {
        ChainSpec spec;
        auto text = chain_scenario_text(spec) + "router CE2\n  icmp off\nrouter CE3\n  icmp off\n  echo off\n";
        auto topo = load_topology(text);
        for (int gap : {1, 3, 5}) {
            CAPTURE(gap);
            EngineConfig cfg;
            cfg.starting_ttl = 1;
            cfg.gap_limit = gap;
            auto t = run_trace(topo, kChainTarget, cfg);
            int trailing = 0;
            for (auto it = t.hops.rbegin(); it != t.hops.rend() && !it->hop.responded(); ++it) ++trailing;
            CHECK(trailing == gap);
            CHECK_FALSE(t.truncated);
        }
    }

    TEST_CASE("max ttl bounds the trace") {
        EngineConfig cfg;
        cfg.starting_ttl = 1;
        cfg.max_ttl = 3;
        auto t = run_trace(make_chain({}), kChainTarget, cfg);
        CHECK(t.hops.size() == 3);
    }

    TEST_CASE("silent path yields an empty trace with a diagnostic") {
        auto topo = make_chain({});
        EngineConfig cfg;
        cfg.starting_ttl = 1;
        auto t = run_trace(topo, Ipv4(203, 0, 113, 9), cfg);
        CHECK(t.hops.empty());
        CHECK_FALSE(t.diagnostic.empty());
    }

    TEST_CASE("prober failure mid-trace truncates") {
        auto topo = testing::scenario("cisco-15.2-invisible-php");
        Network net(topo);
        SimProber sim(net);
        FailingProber p(sim, 6);
        EngineConfig cfg;
        cfg.starting_ttl = 1;
        auto t = trace_naughty_tunnel(*topo.target, cfg, p);
        CHECK(t.truncated);
        CHECK(t.diagnostic == "socket gone");
        CHECK_FALSE(t.hops.empty());
    }

    TEST_CASE("junos RTLA with nothing to reveal falls back to UTURN") {
        ChainSpec spec;
        spec.os = "junos-vmx";
        spec.lsrs = 3;
        spec.icmp_tunneling = true;
        auto t = testing::chain_trace(spec);
        for (auto& h : t.hops) {
            CHECK(h.annotation.state != RevealState::NothingToReveal);
            if (h.annotation.code == Code::UTURN) CHECK(h.annotation.state == RevealState::NotAttempted);
        }
    }
}
