#include <doctest.h>

#include "tnt/fingerprint.hpp"
#include "tnt/ipv4.hpp"
#include "tnt/model.hpp"

using namespace tnt;

TEST_SUITE("model") {
    TEST_CASE("ipv4 parse and print") {
        auto a = Ipv4::parse("192.168.3.2");
        REQUIRE(a);
        CHECK(a->value == 0xC0A80302u);
        CHECK(a->str() == "192.168.3.2");
        CHECK_FALSE(Ipv4::parse("256.1.1.1"));
        CHECK_FALSE(Ipv4::parse("1.2.3"));
        CHECK_FALSE(Ipv4::parse("1.2.3.4.5"));
        CHECK_FALSE(Ipv4::parse(""));
        CHECK_FALSE(Ipv4::parse("a.b.c.d"));
    }

    TEST_CASE("prefix arithmetic") {
        auto p = Prefix::parse("10.4.0.0/30");
        REQUIRE(p);
        CHECK(p->contains(Ipv4(10, 4, 0, 2)));
        CHECK_FALSE(p->contains(Ipv4(10, 4, 0, 4)));
        CHECK(Prefix::of(Ipv4(10, 4, 0, 2), 30).network == Ipv4(10, 4, 0, 0));
        CHECK(Prefix::of(Ipv4(192, 0, 2, 7), 31).str() == "192.0.2.6/31");
        CHECK(prefix_mask(0) == 0u);
        CHECK(prefix_mask(32) == 0xffffffffu);
        CHECK_FALSE(Prefix::parse("10.0.0.0/33"));
    }

    TEST_CASE("reserved labels") {
        CHECK(reserved_label_meaning(0) == LabelMeaning::ExplicitNullV4);
        CHECK(reserved_label_meaning(1) == LabelMeaning::RouterAlert);
        CHECK(reserved_label_meaning(2) == LabelMeaning::ExplicitNullV6);
        CHECK(reserved_label_meaning(3) == LabelMeaning::ImplicitNull);
        CHECK(reserved_label_meaning(299824) == LabelMeaning::Ordinary);
    }

    TEST_CASE("code and state names round-trip") {
        for (int c = 0; c <= 7; ++c) {
            auto code = static_cast<Code>(c);
            CHECK(code_from_string(to_string(code)) == code);
        }
        for (auto s : {RevealState::NotAttempted, RevealState::TargetNotReached, RevealState::IngNotFound,
                       RevealState::Dpr, RevealState::Brpr, RevealState::NothingToReveal, RevealState::OneHopLsp,
                       RevealState::Mix})
            CHECK(state_from_string(to_string(s)) == s);
        CHECK_FALSE(code_from_string("BOGUS"));
    }

    TEST_CASE("code priority follows reliability order") {
        CHECK(Code::LSE < Code::QTTL);
        CHECK(Code::QTTL < Code::UTURN);
        CHECK(Code::UTURN < Code::LSE_TTL);
        CHECK(Code::LSE_TTL < Code::FRPLA);
        CHECK(Code::FRPLA < Code::RTLA);
        CHECK(Code::RTLA < Code::DUP_IP);
    }

    TEST_CASE("probe counts add up") {
        ProbeCounts a{1, 2, 3, 4, 1, 1, 0, 0};
        ProbeCounts b{10, 20, 30, 40, 5, 5, 5, 5};
        a += b;
        CHECK(a.total() == 110);
        CHECK(a.outcome_total() == 22);
    }
}

TEST_SUITE("fingerprint") {
    TEST_CASE("initial ttl ceilings") {
        CHECK(infer_initial_ttl(253) == 255);
        CHECK(infer_initial_ttl(62) == 64);
        CHECK(infer_initial_ttl(120) == 128);
        CHECK(infer_initial_ttl(64) == 64);
        CHECK(infer_initial_ttl(65) == 128);
        CHECK(infer_initial_ttl(129) == 255);
        CHECK(infer_initial_ttl(1) == 64);
    }

    TEST_CASE("path lengths") {
        CHECK(path_len(247) == 9);
        CHECK(path_len(253) == 3);
        CHECK(path_len(64) == 1);
        CHECK(path_len(255) == 1);
        CHECK(path_len(128) == 1);
    }

    TEST_CASE("path length is non-increasing within a band and 1 at the initial value") {
        for (int t = 2; t <= 255; ++t) {
            if (infer_initial_ttl(t) == infer_initial_ttl(t - 1)) CHECK(path_len(t) <= path_len(t - 1));
        }
        for (int init : {64, 128, 255}) CHECK(path_len(init) == 1);
    }

    TEST_CASE("signatures") {
        auto c = signature(250, 250);
        CHECK(c.te_initial_ttl == 255);
        CHECK(c.er_initial_ttl == 255);
        CHECK(c.brand == Brand::CiscoLike);
        auto j = signature(250, 62);
        CHECK(j.te_initial_ttl == 255);
        CHECK(j.er_initial_ttl == 64);
        CHECK(j.brand == Brand::JuniperJunOS);
        CHECK(signature(60, 60).brand == Brand::UnixLike);
    }

    TEST_CASE("signature depends only on the inferred initial values") {
        for (int a = 1; a <= 255; a += 7)
            for (int b = 1; b <= 255; b += 11) {
                int a2 = infer_initial_ttl(a);
                int b2 = infer_initial_ttl(b);
                CHECK(signature(a, b) == signature(a2, b2));
            }
    }
}
