#include "tnt/sim/scenario.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace tnt::sim {

bool is_cisco(Os os) { return os == Os::Cisco124 || os == Os::Cisco152; }
bool is_junos(Os os) { return os == Os::JunosOlive || os == Os::JunosVmx; }

namespace {

struct OsName {
    Os os;
    std::string_view name;
};

constexpr OsName kOsNames[] = {
    {Os::Cisco124, "cisco-12.4"}, {Os::Cisco152, "cisco-15.2"}, {Os::JunosOlive, "junos-olive"},
    {Os::JunosVmx, "junos-vmx"},  {Os::PlainIp, "ip"},          {Os::Host, "host"},
};

struct RouterDraft {
    RouterModel model;
    bool os_set = false;
    std::optional<int> te_initial;
    std::optional<int> er_initial;
    std::optional<LdpBinding> ldp;
    std::optional<std::uint32_t> label_base;
};

struct Parser {
    Topology topo;
    std::vector<RouterDraft> drafts;
    std::set<std::filesystem::path> include_stack;
    int current = -1;
    std::string where;

    [[noreturn]] void fail(const std::string& msg) const { throw ScenarioError(where + ": " + msg); }

    int router_index(const std::string& name, bool create) {
        for (std::size_t i = 0; i < drafts.size(); ++i)
            if (drafts[i].model.name == name) return int(i);
        if (!create) fail("unknown router '" + name + "'");
        RouterDraft d;
        d.model.name = name;
        drafts.push_back(d);
        return int(drafts.size() - 1);
    }

    Ipv4 addr(const std::string& s) const {
        auto a = Ipv4::parse(s);
        if (!a) fail("bad IPv4 address '" + s + "'");
        return *a;
    }

    Prefix prefix(const std::string& s) const {
        auto p = Prefix::parse(s);
        if (!p) fail("bad prefix '" + s + "'");
        return *p;
    }

    long number(const std::string& s) const {
        long v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size()) fail("bad number '" + s + "'");
        return v;
    }

    bool flag(const std::string& s) const {
        if (s == "on" || s == "yes") return true;
        if (s == "off" || s == "no") return false;
        fail("expected on/off, got '" + s + "'");
    }

    void need(const std::vector<std::string>& tok, std::size_t n) const {
        if (tok.size() < n) fail("'" + tok[0] + "' needs " + std::to_string(n - 1) + " argument(s)");
    }

    void parse(std::string_view text, const std::filesystem::path& base, const std::string& source) {
        std::istringstream in{std::string(text)};
        std::string line;
        int lineno = 0;
        bool header = false;
        while (std::getline(in, line)) {
            ++lineno;
            where = source + ":" + std::to_string(lineno);
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            std::istringstream ls(line);
            std::vector<std::string> tok;
            for (std::string t; ls >> t;) tok.push_back(t);
            if (tok.empty()) continue;
            if (!header) {
                if (tok[0] != "tnt-scenario" || tok.size() != 2) fail("expected 'tnt-scenario <version>' header");
                if (number(tok[1]) != kScenarioVersion) fail("unsupported scenario version " + tok[1]);
                header = true;
                continue;
            }
            if (top_level(tok, base)) continue;
            if (current < 0) fail("unknown directive '" + tok[0] + "'");
            router_directive(tok);
        }
        if (!header) {
            where = source;
            fail("empty scenario");
        }
    }

    bool top_level(const std::vector<std::string>& tok, const std::filesystem::path& base) {
        const std::string& k = tok[0];
        if (k == "scenario") {
            need(tok, 2);
            topo.name = tok[1];
        } else if (k == "include") {
            need(tok, 2);
            auto file = base / tok[1];
            auto canon = std::filesystem::weakly_canonical(file);
            if (include_stack.count(canon)) fail("include cycle at '" + tok[1] + "'");
            std::ifstream f(file);
            if (!f) fail("cannot open include '" + file.string() + "'");
            std::stringstream ss;
            ss << f.rdbuf();
            auto saved_where = where;
            include_stack.insert(canon);
            current = -1;
            parse(ss.str(), file.parent_path(), file.filename().string());
            include_stack.erase(canon);
            where = saved_where;
            current = -1;
        } else if (k == "target") {
            need(tok, 2);
            topo.target = addr(tok[1]);
        } else if (k == "vantage") {
            need(tok, 2);
            topo.vantage = tok[1];
        } else if (k == "dialect") {
            need(tok, 2);
            if (tok[1] != "tnt" && tok[1] != "tracetunnel") fail("unknown dialect '" + tok[1] + "'");
            topo.dialect = tok[1];
        } else if (k == "signalling") {
            need(tok, 2);
            if (tok[1] == "ldp")
                topo.signalling = Signalling::Ldp;
            else if (tok[1] == "rsvp-te")
                topo.signalling = Signalling::RsvpTe;
            else
                fail("unknown signalling '" + tok[1] + "'");
        } else if (k == "engine") {
            need(tok, 3);
            static const std::set<std::string> keys{"starting_ttl", "max_ttl", "gap_limit", "t_frpla",
                                                    "t_rtla",       "t_lse_ttl", "t_uturn", "brute_force"};
            if (!keys.count(tok[1])) fail("unknown engine key '" + tok[1] + "'");
            topo.engine[tok[1]] = int(number(tok[2]));
        } else if (k == "expect") {
            need(tok, 3);
            if (tok[1] != "class") fail("unknown expectation '" + tok[1] + "'");
            topo.expect_classes.assign(tok.begin() + 2, tok.end());
        } else if (k == "host") {
            need(tok, 3);
            topo.hostnames[addr(tok[1])] = tok[2];
        } else if (k == "link") {
            need(tok, 5);
            Link l;
            l.a = router_index(tok[1], true);
            l.addr_a = addr(tok[2]);
            l.b = router_index(tok[3], true);
            auto slash = tok[4].find('/');
            if (slash == std::string::npos) fail("link needs a prefix length on the second address");
            l.addr_b = addr(tok[4].substr(0, slash));
            l.prefix_len = int(number(tok[4].substr(slash + 1)));
            for (std::size_t i = 5; i < tok.size(); ++i) {
                if (tok[i] == "igp") {
                    l.igp = true;
                } else if (tok[i] == "vrf" && i + 1 < tok.size()) {
                    l.vrf = tok[++i];
                } else {
                    fail("unknown link option '" + tok[i] + "'");
                }
            }
            for (auto& prior : topo.links) {
                if (prior.a == l.a && prior.b == l.b && prior.addr_a == l.addr_a && prior.addr_b == l.addr_b &&
                    prior.prefix_len == l.prefix_len) {
                    prior.igp = prior.igp || l.igp;
                    if (!l.vrf.empty()) prior.vrf = l.vrf;
                    return true;
                }
            }
            topo.links.push_back(l);
        } else if (k == "router") {
            need(tok, 2);
            current = router_index(tok[1], true);
        } else {
            return false;
        }
        return true;
    }

    void router_directive(const std::vector<std::string>& tok) {
        RouterDraft& d = drafts[current];
        RouterModel& r = d.model;
        const std::string& k = tok[0];
        need(tok, 2);
        if (k == "os") {
            auto os = os_from_string(tok[1]);
            if (!os) fail("unknown os '" + tok[1] + "'");
            r.os = *os;
            d.os_set = true;
        } else if (k == "initial") {
            need(tok, 3);
            d.te_initial = int(number(tok[1]));
            d.er_initial = int(number(tok[2]));
        } else if (k == "loopback") {
            r.loopbacks.push_back(addr(tok[1]));
        } else if (k == "mpls") {
            r.mpls = flag(tok[1]);
        } else if (k == "propagate") {
            r.propagate = flag(tok[1]);
        } else if (k == "popping") {
            if (tok[1] == "php")
                r.popping = Popping::Php;
            else if (tok[1] == "uhp")
                r.popping = Popping::Uhp;
            else
                fail("unknown popping '" + tok[1] + "'");
        } else if (k == "ldp") {
            if (tok[1] == "all-prefixes")
                d.ldp = LdpBinding::AllPrefixes;
            else if (tok[1] == "loopback-only")
                d.ldp = LdpBinding::LoopbackOnly;
            else if (tok[1] == "host-routes")
                d.ldp = LdpBinding::HostRoutes;
            else if (tok[1] == "acl")
                d.ldp = LdpBinding::AclFiltered;
            else if (tok[1] == "none")
                d.ldp = LdpBinding::None;
            else
                fail("unknown ldp mode '" + tok[1] + "'");
        } else if (k == "explicit-null-for") {
            for (std::size_t i = 1; i < tok.size(); ++i) r.explicit_null_for.push_back(prefix(tok[i]));
        } else if (k == "icmp-tunneling") {
            r.icmp_tunneling = flag(tok[1]);
        } else if (k == "rfc4950") {
            r.rfc4950 = flag(tok[1]);
        } else if (k == "next-hop-self") {
            r.next_hop_self = flag(tok[1]);
        } else if (k == "rsvp-tunnel") {
            r.rsvp_tunnels.push_back(tok[1]);
        } else if (k == "label") {
            need(tok, 3);
            auto v = number(tok[2]);
            if (v < 16 || v > 0xfffff) fail("label out of range");
            r.labels[tok[1] == "external" ? kExternalFecKey : prefix(tok[1])] = std::uint32_t(v);
        } else if (k == "label-base") {
            auto v = number(tok[1]);
            if (v < 16 || v > 0xfffff) fail("label base out of range");
            d.label_base = std::uint32_t(v);
        } else if (k == "vpn-label") {
            auto v = number(tok[1]);
            if (v < 16 || v > 0xfffff) fail("vpn label out of range");
            r.vpn_label = std::uint32_t(v);
        } else if (k == "icmp") {
            r.icmp = flag(tok[1]);
        } else if (k == "echo") {
            r.echo = flag(tok[1]);
        } else if (k == "return-extra") {
            r.return_extra = int(number(tok[1]));
        } else {
            fail("unknown router directive '" + k + "'");
        }
    }

    Topology finish() {
        where = topo.name.empty() ? "scenario" : topo.name;
        if (drafts.empty()) fail("empty scenario");
        for (auto& d : drafts) {
            RouterModel& r = d.model;
            if (!d.os_set) fail("router '" + r.name + "' has no os");
            int te = 255, er = 255;
            std::uint32_t base = 16;
            LdpBinding ldp = LdpBinding::AllPrefixes;
            if (is_junos(r.os)) {
                er = 64;
                base = 299776;
                ldp = LdpBinding::LoopbackOnly;
            } else if (r.os == Os::Host) {
                te = er = 64;
            }
            r.te_initial = d.te_initial.value_or(te);
            r.er_initial = d.er_initial.value_or(er);
            r.label_base = d.label_base.value_or(base);
            r.ldp = d.ldp.value_or(ldp);
            for (int v : {r.te_initial, r.er_initial})
                if (v < 1 || v > 255) fail("router '" + r.name + "': initial TTL out of range");
            if (r.mpls && (r.os == Os::PlainIp || r.os == Os::Host))
                fail("router '" + r.name + "': os does not support mpls");
            topo.routers.push_back(r);
        }
        for (auto& r : topo.routers)
            for (auto& t : r.rsvp_tunnels)
                if (topo.find(t) < 0) fail("rsvp-tunnel to unknown router '" + t + "'");
        std::set<Ipv4> seen;
        auto claim = [&](Ipv4 a) {
            if (!seen.insert(a).second) fail("duplicate address " + a.str());
        };
        for (auto& r : topo.routers)
            for (auto a : r.loopbacks) claim(a);
        for (auto& l : topo.links) {
            std::string tag = "link " + topo.routers[l.a].name + "-" + topo.routers[l.b].name;
            if (l.a == l.b) fail(tag + ": both ends on one router");
            if (l.prefix_len != 30 && l.prefix_len != 31) fail(tag + ": prefix length must be 30 or 31");
            if (!l.prefix().contains(l.addr_b) || Prefix::of(l.addr_b, l.prefix_len) != l.prefix())
                fail(tag + ": addresses not in one prefix");
            if (l.prefix_len == 30)
                for (auto a : {l.addr_a, l.addr_b})
                    if ((a.value & 3) == 0 || (a.value & 3) == 3) fail(tag + ": network/broadcast address " + a.str());
            claim(l.addr_a);
            claim(l.addr_b);
        }
        int vp = topo.find(topo.vantage);
        if (vp < 0) fail("vantage router '" + topo.vantage + "' not declared");
        if (topo.routers[vp].os != Os::Host) fail("vantage must be a host");
        return std::move(topo);
    }
};

}  // namespace

int Topology::find(std::string_view router) const {
    for (std::size_t i = 0; i < routers.size(); ++i)
        if (routers[i].name == router) return int(i);
    return -1;
}

int Topology::vantage_index() const { return find(vantage); }

std::optional<Os> os_from_string(std::string_view s) {
    for (auto& o : kOsNames)
        if (o.name == s) return o.os;
    return std::nullopt;
}

std::string_view to_string(Os os) {
    for (auto& o : kOsNames)
        if (o.os == os) return o.name;
    return "?";
}

Topology load_topology(std::string_view text, const std::filesystem::path& base_dir) {
    Parser p;
    p.parse(text, base_dir, "<scenario>");
    return p.finish();
}

Topology load_scenario_file(const std::filesystem::path& file) {
    std::ifstream f(file);
    if (!f) throw ScenarioError("cannot open scenario '" + file.string() + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    Parser p;
    p.include_stack.insert(std::filesystem::weakly_canonical(file));
    p.parse(ss.str(), file.parent_path(), file.filename().string());
    return p.finish();
}

}  // namespace tnt::sim
