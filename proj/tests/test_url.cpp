#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "linknet/url.hpp"

#include "helpers.hpp"

using namespace linknet;

TEST_SUITE("parse_url") {
    TEST_CASE("lowercases scheme and host, keeps path case") {
        Url url = parse_url("HTTP://WLV.ac.uk/Page");
        CHECK(url.scheme == "http");
        CHECK(url.host == "wlv.ac.uk");
        CHECK(url.path == "/Page");
    }

    TEST_CASE("defaults the scheme to http") {
        Url url = parse_url("cybermetrics.wlv.ac.uk");
        CHECK(url.scheme == "http");
        CHECK(url.host == "cybermetrics.wlv.ac.uk");
    }

    TEST_CASE("rejects degenerate input") {
        CHECK_THROWS_AS(parse_url("not a url ::"), UrlParseError);
        CHECK_THROWS_AS(parse_url(""), UrlParseError);
        CHECK_THROWS_AS(parse_url("http://"), UrlParseError);
        CHECK_THROWS_AS(parse_url("://x"), UrlParseError);
    }

    TEST_CASE("strips fragment and userinfo, keeps query") {
        Url url = parse_url("https://user:pw@a.example:8080/p/q?x=1#frag");
        CHECK(url.scheme == "https");
        CHECK(url.host == "a.example");
        CHECK(url.port == 8080);
        CHECK(url.path == "/p/q");
        CHECK(url.query == "x=1");
        CHECK(url.normalized() == "https://a.example:8080/p/q?x=1");
    }

    TEST_CASE("parsing is idempotent on normalized output") {
        const char* inputs[] = {
            "HTTP://WLV.ac.uk/Page",  "cybermetrics.wlv.ac.uk",
            "a.example/x?q=1",        "https://B.example:99/Y#z",
            "http://x.example/a/b/c", "x.example",
        };
        for (const char* input : inputs) {
            std::string once = parse_url(input).normalized();
            CHECK(parse_url(once).normalized() == once);
        }
    }

    TEST_CASE("punycode-encodes internationalized labels") {
        CHECK(parse_url("http://bücher.example/").host == "xn--bcher-kva.example");
        CHECK(parse_url("http://münchen.example/").host == "xn--mnchen-3ya.example");
    }
}

TEST_SUITE("public_suffix_list") {
    TEST_CASE("parses comments and exceptions") {
        auto psl = PublicSuffixList::from_string(
            "// comment\nuk\nac.uk // trailing\n\n*.ck\n!www.ck\n");
        CHECK(psl.rule_count() == 4);
        CHECK(psl.public_suffix("wlv.ac.uk") == "ac.uk");
        CHECK(psl.public_suffix("foo.bar.ck") == "bar.ck");
        CHECK(psl.public_suffix("www.ck") == "ck");
        CHECK(psl.registrable_domain("www.ck") == "www.ck");
        CHECK(psl.registrable_domain("foo.bar.ck") == "foo.bar.ck");
    }

    TEST_CASE("unlisted TLD falls back to the last label") {
        auto psl = PublicSuffixList::from_string("uk\n");
        CHECK(psl.public_suffix("x.zz") == "zz");
        CHECK(psl.registrable_domain("a.b.zz") == "b.zz");
    }
}

TEST_SUITE("reduce_to_site_key") {
    TEST_CASE("subdomain hosts reduce to the registrable domain") {
        const auto& psl = testutil::bundled_psl();
        Url url = parse_url("cybermetrics.wlv.ac.uk");
        CHECK(reduce_to_site_key(url, Granularity::Domain, psl).value == "wlv.ac.uk");
        CHECK(reduce_to_site_key(url, Granularity::Subdomain, psl).value ==
              "cybermetrics.wlv.ac.uk");
    }

    TEST_CASE("already-minimal host is unchanged at subdomain granularity") {
        const auto& psl = testutil::bundled_psl();
        CHECK(reduce_host("wlv.ac.uk", Granularity::Subdomain, psl).value == "wlv.ac.uk");
        CHECK(reduce_host("wlv.ac.uk", Granularity::Domain, psl).value == "wlv.ac.uk");
    }

    TEST_CASE("public-suffix hosts cannot be reduced") {
        const auto& psl = testutil::bundled_psl();
        CHECK_THROWS_AS(reduce_host("ac.uk", Granularity::Domain, psl), ReductionError);
        CHECK_THROWS_AS(reduce_host("ac.uk", Granularity::Subdomain, psl), ReductionError);
        CHECK_THROWS_AS(reduce_host("uk", Granularity::Domain, psl), ReductionError);
    }

    TEST_CASE("IP-style hosts are rejected") {
        const auto& psl = testutil::bundled_psl();
        CHECK_THROWS_AS(reduce_host("192.168.0.1", Granularity::Domain, psl),
                        ReductionError);
    }

    TEST_CASE("www prefix is dropped at either granularity") {
        const auto& psl = testutil::bundled_psl();
        CHECK(reduce_host("www.wlv.ac.uk", Granularity::Domain, psl).value == "wlv.ac.uk");
        CHECK(reduce_host("www.wlv.ac.uk", Granularity::Subdomain, psl).value ==
              "wlv.ac.uk");
        CHECK(reduce_host("www.sub.wlv.ac.uk", Granularity::Subdomain, psl).value ==
              "sub.wlv.ac.uk");
    }

    TEST_CASE("domain reduction is idempotent and a suffix of the subdomain key") {
        const auto& psl = testutil::bundled_psl();
        const char* hosts[] = {
            "cybermetrics.wlv.ac.uk", "a.b.c.example", "deep.sub.domain.co.uk",
            "www.park.example",       "x.gov.example",
        };
        for (const char* host : hosts) {
            SiteKey domain = reduce_host(host, Granularity::Domain, psl);
            SiteKey again = reduce_host(domain.value, Granularity::Domain, psl);
            CHECK(again.value == domain.value);

            SiteKey sub = reduce_host(host, Granularity::Subdomain, psl);
            REQUIRE(sub.value.size() >= domain.value.size());
            CHECK(sub.value.substr(sub.value.size() - domain.value.size()) == domain.value);
        }
    }
}

TEST_SUITE("alias_rules") {
    TEST_CASE("canonicalize applies the rule or returns the key unchanged") {
        AliasResolver resolver({AliasRule{
            {"example.co.uk", "example.com"}, "example.com", {}}});
        CHECK(resolver.canonicalize(std::string("example.co.uk")) == "example.com");
        CHECK(resolver.canonicalize(std::string("example.com")) == "example.com");
        CHECK(resolver.canonicalize(std::string("other.com")) == "other.com");
    }

    TEST_CASE("canonicalize is idempotent over a consistent rule set") {
        AliasResolver resolver({AliasRule{{"a.com", "b.com"}, "b.com", {}},
                                AliasRule{{"c.com", "d.com", "e.com"}, "d.com", {}}});
        for (const char* key : {"a.com", "b.com", "c.com", "d.com", "e.com", "z.com"}) {
            std::string once = resolver.canonicalize(std::string(key));
            CHECK(resolver.canonicalize(once) == once);
        }
    }

    TEST_CASE("a key in two rules is a configuration error") {
        CHECK_THROWS_AS(AliasResolver({AliasRule{{"x.com", "a.com"}, "a.com", {}},
                                       AliasRule{{"x.com", "b.com"}, "b.com", {}}}),
                        ConfigError);
    }

    TEST_CASE("canonical must be one of its aliases") {
        CHECK_THROWS_AS(AliasResolver({AliasRule{{"a.com"}, "b.com", {}}}), ConfigError);
    }

    TEST_CASE("loads the bundled fixture rule file") {
        AliasResolver resolver =
            AliasResolver::from_file(testutil::fixture_dir() + "/alias_rules.json");
        CHECK(resolver.canonicalize(std::string("betalabs-group.example")) ==
              "beta-labs.example");
        CHECK(resolver.rules().size() == 1);
    }
}

TEST_SUITE("rank_alias_candidates") {
    TEST_CASE("more pages wins") {
        std::map<std::string, AliasEvidence> evidence;
        evidence["a.com"].pages = 100;
        evidence["b.com"].pages = 10;
        auto order = rank_alias_candidates({"b.com", "a.com"}, evidence);
        CHECK(order == std::vector<std::string>{"a.com", "b.com"});
    }

    TEST_CASE("inlinks break a page tie") {
        std::map<std::string, AliasEvidence> evidence;
        evidence["a.com"].pages = 10;
        evidence["a.com"].inlinks = 5;
        evidence["b.com"].pages = 10;
        evidence["b.com"].inlinks = 9;
        auto order = rank_alias_candidates({"a.com", "b.com"}, evidence);
        CHECK(order == std::vector<std::string>{"b.com", "a.com"});
    }

    TEST_CASE("earliest first-seen breaks a full tie") {
        std::map<std::string, AliasEvidence> evidence;
        evidence["a.com"].pages = 10;
        evidence["a.com"].first_seen = "2008-01-01";
        evidence["b.com"].pages = 10;
        evidence["b.com"].first_seen = "2001-06-15";
        auto order = rank_alias_candidates({"a.com", "b.com"}, evidence);
        CHECK(order == std::vector<std::string>{"b.com", "a.com"});
    }

    TEST_CASE("missing fields rank last within their tier") {
        std::map<std::string, AliasEvidence> evidence;
        evidence["a.com"].pages = 1;
        evidence["b.com"].inlinks = 1000;  // no page count at all
        auto order = rank_alias_candidates({"b.com", "a.com"}, evidence);
        CHECK(order.front() == "a.com");
    }

    TEST_CASE("no evidence at all is an error") {
        std::map<std::string, AliasEvidence> evidence;
        CHECK_THROWS_AS(rank_alias_candidates({"a.com", "b.com"}, evidence), ArgumentError);
    }

    TEST_CASE("output is a permutation of the input") {
        std::mt19937 rng(7);
        std::uniform_int_distribution<int> count(0, 50);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<std::string> aliases;
            std::map<std::string, AliasEvidence> evidence;
            int n = 1 + trial % 6;
            for (int i = 0; i < n; ++i) {
                std::string name = "alias" + std::to_string(i) + ".com";
                aliases.push_back(name);
                if (trial % 3 != 0 || i == 0) {
                    evidence[name].pages = count(rng);
                    if (trial % 2 == 0) evidence[name].inlinks = count(rng);
                }
            }
            auto order = rank_alias_candidates(aliases, evidence);
            auto sorted_in = aliases;
            auto sorted_out = order;
            std::sort(sorted_in.begin(), sorted_in.end());
            std::sort(sorted_out.begin(), sorted_out.end());
            CHECK(sorted_in == sorted_out);
        }
    }
}

TEST_CASE("percent_encode maps path bytes to uppercase hex") {
    CHECK(percent_encode("/") == "%2F");
    CHECK(percent_encode("/tenants") == "%2Ftenants");
    CHECK(percent_encode("/a b?c") == "%2Fa%20b%3Fc");
    CHECK(percent_encode("safe-_.~09AZ") == "safe-_.~09AZ");
}
