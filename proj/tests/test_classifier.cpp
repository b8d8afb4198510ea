#include <doctest.h>

#include "tnt/classifier.hpp"
#include "tnt/fingerprint.hpp"

using namespace tnt;

namespace {

HopRecord hop(const char* addr, int probe_ttl, int te, std::optional<int> er, int qttl = 1) {
    HopRecord h;
    h.probe_ttl = probe_ttl;
    h.address = Ipv4::parse(addr);
    h.kind = ReplyKind::TimeExceeded;
    h.ttl_te = te;
    h.ttl_er = er;
    h.qttl = qttl;
    return h;
}

}  // namespace

TEST_SUITE("classifier") {
    TEST_CASE("indicators") {
        Thresholds t;
        auto explicit_hop = hop("10.1.0.2", 3, 247, 253);
        explicit_hop.lse_stack = {LabelStackEntry{19, 0, true, 1}};
        CHECK(check_indicators(&explicit_hop, t).code == Code::LSE);

        auto opaque = hop("10.4.0.2", 3, 250, 250);
        opaque.lse_stack = {LabelStackEntry{16, 0, true, 252}};
        auto o = check_indicators(&opaque, t);
        CHECK(o.code == Code::LSE_TTL);
        CHECK(o.lse_ttl_quoted == 252);
        CHECK(o.length_estimate == 3);

        auto q = hop("10.2.0.2", 4, 248, 252, 2);
        CHECK(check_indicators(&q, t).code == Code::QTTL);

        auto u = hop("10.1.0.2", 3, 247, 253);
        auto uo = check_indicators(&u, t);
        CHECK(uo.code == Code::UTURN);
        CHECK(uo.uturn_value == 6);

        CHECK(check_indicators(nullptr, t).code == Code::None);
    }

    TEST_CASE("LSE_TTL band is open on both ends") {
        Thresholds t;
        for (int v : {236, 255, 1, 100}) {
            auto h = hop("10.4.0.2", 6, 250, 250);
            h.lse_stack = {LabelStackEntry{16, 0, true, std::uint8_t(v)}};
            CHECK(check_indicators(&h, t).code == Code::LSE);
        }
        for (int v : {237, 254}) {
            auto h = hop("10.4.0.2", 3, 250, 250);
            h.lse_stack = {LabelStackEntry{16, 0, true, std::uint8_t(v)}};
            CHECK(check_indicators(&h, t).code == Code::LSE_TTL);
        }
    }

    TEST_CASE("a 255 quote with a large FRPLA is read as opaque") {
        Thresholds t;
        auto h = hop("10.0.0.58", 3, 250, 250);
        h.lse_stack = {LabelStackEntry{16, 0, true, 255}};
        auto o = check_indicators(&h, t);
        CHECK(o.code == Code::LSE_TTL);
        CHECK(o.length_estimate == 3);
    }

    TEST_CASE("junos hops never give a UTURN indicator") {
        Thresholds t;
        auto j = hop("192.168.1.14", 3, 250, 62);
        CHECK(is_junos(j));
        CHECK(check_indicators(&j, t).code == Code::None);
    }

    TEST_CASE("unanswered ping disables UTURN and RTLA but keeps FRPLA") {
        Thresholds t;
        auto prev = hop("192.168.8.2", 2, 254, 254);
        auto cur = hop("10.4.0.2", 3, 250, std::nullopt);
        CHECK(check_indicators(&cur, t).code == Code::None);
        CHECK_FALSE(return_diff(cur));
        CHECK(frpla_value(cur) == 3);
        CHECK(check_triggers(&prev, &cur, nullptr, t) == Code::FRPLA);
    }

    TEST_CASE("uturn expectation") {
        CHECK(uturn_expected(3, 1) == 6);
        CHECK(uturn_expected(3, 3) == 2);
        CHECK(uturn_expected(1, 1) == 2);
    }

    TEST_CASE("triggers") {
        Thresholds t;
        auto prev = hop("192.168.8.2", 2, 254, 254);

        auto dup = hop("192.168.2.2", 3, 250, 250);
        auto dup_next = hop("192.168.2.2", 4, 250, 250);
        CHECK(check_triggers(&prev, &dup, &dup_next, t) == Code::DUP_IP);

        auto vmx = hop("192.168.1.14", 3, 250, 62);
        CHECK(check_triggers(&prev, &vmx, nullptr, t) == Code::RTLA);

        auto cisco = hop("10.4.0.2", 3, 250, 250);
        CHECK(check_triggers(&prev, &cisco, nullptr, t) == Code::FRPLA);

        auto shadow = hop("192.168.4.2", 5, 250, 250);
        CHECK(check_triggers(&prev, &shadow, nullptr, t) == Code::None);
    }

    TEST_CASE("negative FRPLA never triggers") {
        Thresholds t;
        t.t_frpla = 0;
        auto prev = hop("192.168.8.2", 2, 254, 254);
        auto cur = hop("10.9.0.1", 5, 253, 253);
        REQUIRE(frpla_value(cur) < 0);
        CHECK(check_triggers(&prev, &cur, nullptr, t) == Code::None);
    }

    TEST_CASE("DUP_IP outranks RTLA which outranks FRPLA") {
        Thresholds t;
        auto prev = hop("192.168.8.2", 2, 254, 254);
        auto j = hop("192.168.1.14", 3, 240, 62);
        REQUIRE(frpla_value(j) >= t.t_frpla);
        CHECK(check_triggers(&prev, &j, nullptr, t) == Code::RTLA);
        auto j_next = j;
        j_next.probe_ttl = 4;
        CHECK(check_triggers(&prev, &j, &j_next, t) == Code::DUP_IP);
    }

    TEST_CASE("triggers never fire without prev or when prev equals cur") {
        Thresholds t;
        t.t_frpla = 0;
        t.t_rtla = 0;
        for (int probe = 1; probe <= 10; ++probe)
            for (int te : {200, 230, 250, 255})
                for (int er : {50, 62, 250, 255}) {
                    auto cur = hop("10.4.0.2", probe, te, er);
                    auto next = cur;
                    next.probe_ttl = probe + 1;
                    CHECK(check_triggers(nullptr, &cur, &next, t) == Code::None);
                    auto same = cur;
                    same.probe_ttl = probe - 1;
                    CHECK(check_triggers(&same, &cur, &next, t) == Code::None);
                }
    }

    TEST_CASE("trigger length estimates") {
        Thresholds t;
        auto cisco = hop("10.4.0.2", 3, 250, 250);
        CHECK(trigger_length_estimate(Code::FRPLA, cisco, t) == 3);
        auto vmx = hop("192.168.1.14", 3, 250, 62);
        CHECK(trigger_length_estimate(Code::RTLA, vmx, t) == 3);
    }
}
