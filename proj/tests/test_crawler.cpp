#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "linknet/crawler.hpp"

#include "helpers.hpp"

using namespace linknet;
using testutil::page_with_links;
using testutil::TempDir;
using testutil::write_corpus_page;

namespace {

CrawlConfig fixture_config() {
    CrawlConfig cfg;
    cfg.max_depth = 2;
    cfg.per_host_delay_ms = 1000;
    cfg.granularity = Granularity::Domain;
    return cfg;
}

}  // namespace

TEST_SUITE("crawl_site") {
    TEST_CASE("internal page at depth 1 with an external anchor") {
        TempDir tmp("crawl-basic");
        write_corpus_page(tmp.path(), "seed.example", "/",
                          page_with_links({"/inner"}));
        write_corpus_page(tmp.path(), "seed.example", "/inner",
                          page_with_links({"http://other.example/p"}));
        CorpusFetcher fetcher(tmp.str());
        VirtualClock clock;
        CrawlResult result = crawl_site(parse_url("http://seed.example/"), fixture_config(),
                                        fetcher, clock, testutil::bundled_psl());

        CHECK(result.pages.size() == 2);
        REQUIRE(result.site_outlinks.size() == 1);
        CHECK(result.site_outlinks[0].source.value == "seed.example");
        CHECK(result.site_outlinks[0].target.value == "other.example");
        CHECK(result.page_count_per_site.at("seed.example") == 2);
    }

    TEST_CASE("max_depth 0 fetches only the seed page") {
        TempDir tmp("crawl-depth0");
        write_corpus_page(tmp.path(), "seed.example", "/",
                          page_with_links({"/inner", "http://other.example/"}));
        write_corpus_page(tmp.path(), "seed.example", "/inner", page_with_links({}));
        CorpusFetcher fetcher(tmp.str());
        VirtualClock clock;
        CrawlConfig cfg = fixture_config();
        cfg.max_depth = 0;
        CrawlResult result = crawl_site(parse_url("http://seed.example/"), cfg, fetcher,
                                        clock, testutil::bundled_psl());
        CHECK(result.pages.size() == 1);
        CHECK(result.pages[0].depth == 0);
        // External anchors on the seed page still count as outlinks.
        CHECK(result.site_outlinks.size() == 1);
    }

    TEST_CASE("a site linking only to itself yields no outlinks") {
        TempDir tmp("crawl-selflink");
        write_corpus_page(tmp.path(), "seed.example", "/",
                          page_with_links({"http://seed.example/", "/"}));
        CorpusFetcher fetcher(tmp.str());
        VirtualClock clock;
        CrawlResult result = crawl_site(parse_url("http://seed.example/"), fixture_config(),
                                        fetcher, clock, testutil::bundled_psl());
        CHECK(result.pages.size() == 1);
        CHECK(result.site_outlinks.empty());
    }

    TEST_CASE("unreachable seed raises a crawl error") {
        TempDir tmp("crawl-missing");
        CorpusFetcher fetcher(tmp.str());
        VirtualClock clock;
        CHECK_THROWS_AS(crawl_site(parse_url("http://gone.example/"), fixture_config(),
                                   fetcher, clock, testutil::bundled_psl()),
                        CrawlError);
    }

    TEST_CASE("individual page failures are recorded and the crawl continues") {
        TempDir tmp("crawl-404");
        write_corpus_page(tmp.path(), "seed.example", "/",
                          page_with_links({"/gone", "/alive"}));
        write_corpus_page(tmp.path(), "seed.example", "/alive", page_with_links({}));
        CorpusFetcher fetcher(tmp.str());
        VirtualClock clock;
        CrawlResult result = crawl_site(parse_url("http://seed.example/"), fixture_config(),
                                        fetcher, clock, testutil::bundled_psl());
        REQUIRE(result.pages.size() == 3);
        int failures = 0;
        for (const auto& page : result.pages)
            if (page.status == 404) ++failures;
        CHECK(failures == 1);
        CHECK(result.page_count_per_site.at("seed.example") == 2);
    }

    TEST_CASE("consecutive fetches to one host respect the politeness delay") {
        TempDir tmp("crawl-polite");
        write_corpus_page(tmp.path(), "seed.example", "/",
                          page_with_links({"/a", "/b", "/c"}));
        for (const char* path : {"/a", "/b", "/c"})
            write_corpus_page(tmp.path(), "seed.example", path, page_with_links({}));
        CorpusFetcher fetcher(tmp.str());
        VirtualClock clock;
        CrawlConfig cfg = fixture_config();
        cfg.per_host_delay_ms = 250;
        CrawlResult result = crawl_site(parse_url("http://seed.example/"), cfg, fetcher,
                                        clock, testutil::bundled_psl());
        REQUIRE(result.pages.size() == 4);
        std::vector<std::int64_t> stamps;
        for (const auto& page : result.pages) stamps.push_back(page.fetched_at_ms);
        std::sort(stamps.begin(), stamps.end());
        for (std::size_t i = 1; i < stamps.size(); ++i)
            CHECK(stamps[i] - stamps[i - 1] >= 250);
    }

    TEST_CASE("no page exceeds max_depth and none belongs to a foreign site") {
        std::string corpus = testutil::fixture_dir() + "/corpus";
        CorpusFetcher fetcher(corpus);
        VirtualClock clock;
        CrawlResult result = crawl_site(parse_url("http://park.example/"), fixture_config(),
                                        fetcher, clock, testutil::bundled_psl());
        for (const auto& page : result.pages) {
            CHECK(page.depth <= 2);
            CHECK(page.site.value == "park.example");
            CHECK(reduce_host(page.url.host, Granularity::Domain,
                              testutil::bundled_psl()).value == "park.example");
        }
        for (const auto& record : result.site_outlinks)
            CHECK(record.source.value != record.target.value);
    }

    TEST_CASE("crawling the bundled corpus twice is deterministic") {
        std::string corpus = testutil::fixture_dir() + "/corpus";
        auto run = [&]() {
            CorpusFetcher fetcher(corpus);
            VirtualClock clock;
            return crawl_site(parse_url("http://park.example/"), fixture_config(), fetcher,
                              clock, testutil::bundled_psl());
        };
        CrawlResult a = run();
        CrawlResult b = run();
        REQUIRE(a.pages.size() == b.pages.size());
        for (std::size_t i = 0; i < a.pages.size(); ++i) {
            CHECK(a.pages[i].url.normalized() == b.pages[i].url.normalized());
            CHECK(a.pages[i].depth == b.pages[i].depth);
            CHECK(a.pages[i].fetched_at_ms == b.pages[i].fetched_at_ms);
        }
        REQUIRE(a.site_outlinks.size() == b.site_outlinks.size());
        for (std::size_t i = 0; i < a.site_outlinks.size(); ++i) {
            CHECK(a.site_outlinks[i].target.value == b.site_outlinks[i].target.value);
            CHECK(a.site_outlinks[i].weight == b.site_outlinks[i].weight);
        }
    }

    TEST_CASE("the bundled park crawl matches the hand-traced fixture") {
        std::string corpus = testutil::fixture_dir() + "/corpus";
        CorpusFetcher fetcher(corpus);
        VirtualClock clock;
        CrawlResult result = crawl_site(parse_url("http://park.example/"), fixture_config(),
                                        fetcher, clock, testutil::bundled_psl());
        // 5 pages: /, /tenants, /news, /about, /contact; /private is
        // robots-disallowed.
        CHECK(result.pages.size() == 5);
        CHECK(result.robots_skipped == 1);
        // Distinct external registrable domains linked from the five pages.
        std::set<std::string> targets;
        for (const auto& record : result.site_outlinks) targets.insert(record.target.value);
        CHECK(targets == std::set<std::string>{
                             "alpha-uni.ac.example", "beta-labs.example",
                             "betalabs-group.example", "delta-devices.example",
                             "epsilon-institute.example", "eta-incubator.example",
                             "external-noise.example", "gamma-agency.gov.example",
                             "iota-consulting.example", "kappa-media.example",
                             "theta-fund.example", "zeta-council.gov.example"});
        // eta-incubator is linked from two pages.
        for (const auto& record : result.site_outlinks)
            if (record.target.value == "eta-incubator.example") CHECK(record.weight == 2);
    }

    TEST_CASE("a root-disallowed site is never fetched, not even once") {
        TempDir tmp("crawl-robots-root");
        write_corpus_page(tmp.path(), "seed.example", "/", page_with_links({"/a"}));
        testutil::write_file(tmp.path() / "seed.example" / "robots.txt",
                             "User-agent: *\nDisallow: /\n");
        CorpusFetcher fetcher(tmp.str());
        VirtualClock clock;
        CHECK_THROWS_AS(crawl_site(parse_url("http://seed.example/"), fixture_config(),
                                   fetcher, clock, testutil::bundled_psl()),
                        CrawlError);
    }

    TEST_CASE("robots can be ignored for fixture corpora") {
        TempDir tmp("crawl-robots");
        write_corpus_page(tmp.path(), "seed.example", "/", page_with_links({"/private"}));
        write_corpus_page(tmp.path(), "seed.example", "/private", page_with_links({}));
        testutil::write_file(tmp.path() / "seed.example" / "robots.txt",
                             "User-agent: *\nDisallow: /private\n");
        CorpusFetcher fetcher(tmp.str());

        VirtualClock clock;
        CrawlConfig cfg = fixture_config();
        CrawlResult honored = crawl_site(parse_url("http://seed.example/"), cfg, fetcher,
                                         clock, testutil::bundled_psl());
        CHECK(honored.pages.size() == 1);
        CHECK(honored.robots_skipped == 1);

        cfg.honor_robots = false;
        VirtualClock clock2;
        CrawlResult ignored = crawl_site(parse_url("http://seed.example/"), cfg, fetcher,
                                         clock2, testutil::bundled_psl());
        CHECK(ignored.pages.size() == 2);
        CHECK(ignored.robots_skipped == 0);
    }

    TEST_CASE("internal redirects are followed, external ones become outlinks") {
        TempDir tmp("crawl-redirect");
        write_corpus_page(tmp.path(), "seed.example", "/",
                          page_with_links({"/moved", "/away"}));
        testutil::write_file(tmp.path() / "seed.example" / "%2Fmoved.redirect",
                             "http://seed.example/final\n");
        write_corpus_page(tmp.path(), "seed.example", "/final", page_with_links({}));
        testutil::write_file(tmp.path() / "seed.example" / "%2Faway.redirect",
                             "http://elsewhere.example/\n");
        CorpusFetcher fetcher(tmp.str());
        VirtualClock clock;
        CrawlResult result = crawl_site(parse_url("http://seed.example/"), fixture_config(),
                                        fetcher, clock, testutil::bundled_psl());
        REQUIRE(result.pages.size() == 2);
        CHECK(result.pages[1].url.normalized() == "http://seed.example/final");
        REQUIRE(result.site_outlinks.size() == 1);
        CHECK(result.site_outlinks[0].target.value == "elsewhere.example");
    }

    TEST_CASE("redirect chains stop at the limit") {
        TempDir tmp("crawl-redirect-loop");
        write_corpus_page(tmp.path(), "seed.example", "/", page_with_links({"/r0"}));
        for (int i = 0; i < 8; ++i)
            testutil::write_file(
                tmp.path() / "seed.example" / ("%2Fr" + std::to_string(i) + ".redirect"),
                "http://seed.example/r" + std::to_string(i + 1) + "\n");
        CorpusFetcher fetcher(tmp.str());
        VirtualClock clock;
        CrawlResult result = crawl_site(parse_url("http://seed.example/"), fixture_config(),
                                        fetcher, clock, testutil::bundled_psl());
        REQUIRE(result.pages.size() == 2);
        CHECK(result.pages[1].status == 0);  // gave up after max_redirects
    }

    TEST_CASE("max_pages_per_site caps the crawl") {
        TempDir tmp("crawl-cap");
        std::vector<std::string> links;
        for (int i = 0; i < 10; ++i) links.push_back("/p" + std::to_string(i));
        write_corpus_page(tmp.path(), "seed.example", "/", page_with_links(links));
        for (int i = 0; i < 10; ++i)
            write_corpus_page(tmp.path(), "seed.example", "/p" + std::to_string(i),
                              page_with_links({}));
        CorpusFetcher fetcher(tmp.str());
        VirtualClock clock;
        CrawlConfig cfg = fixture_config();
        cfg.max_pages_per_site = 4;
        CrawlResult result = crawl_site(parse_url("http://seed.example/"), cfg, fetcher,
                                        clock, testutil::bundled_psl());
        CHECK(result.page_count_per_site.at("seed.example") == 4);
    }
}

TEST_SUITE("site_outlink_targets") {
    TEST_CASE("reduction collapses paths of one domain") {
        TempDir tmp("targets-collapse");
        write_corpus_page(tmp.path(), "seed.example", "/",
                          page_with_links({"http://a.com/x", "http://a.com/y"}));
        CorpusFetcher fetcher(tmp.str());
        VirtualClock clock;
        CrawlResult result = crawl_site(parse_url("http://seed.example/"), fixture_config(),
                                        fetcher, clock, testutil::bundled_psl());
        auto targets = site_outlink_targets(result, Granularity::Domain,
                                            testutil::bundled_psl(), AliasResolver{});
        REQUIRE(targets.size() == 1);
        CHECK(targets[0].value == "a.com");
    }

    TEST_CASE("empty crawl yields no targets") {
        TempDir tmp("targets-empty");
        write_corpus_page(tmp.path(), "seed.example", "/", page_with_links({}));
        CorpusFetcher fetcher(tmp.str());
        VirtualClock clock;
        CrawlResult result = crawl_site(parse_url("http://seed.example/"), fixture_config(),
                                        fetcher, clock, testutil::bundled_psl());
        CHECK(site_outlink_targets(result, Granularity::Domain, testutil::bundled_psl(),
                                   AliasResolver{})
                  .empty());
    }

    TEST_CASE("five external hosts across two registrable domains") {
        TempDir tmp("targets-hosts");
        write_corpus_page(tmp.path(), "seed.example", "/",
                          page_with_links({"http://a.first.com/", "http://b.first.com/",
                                           "http://first.com/", "http://www.second.com/",
                                           "http://second.com/p"}));
        CorpusFetcher fetcher(tmp.str());
        VirtualClock clock;
        CrawlResult result = crawl_site(parse_url("http://seed.example/"), fixture_config(),
                                        fetcher, clock, testutil::bundled_psl());
        auto targets = site_outlink_targets(result, Granularity::Domain,
                                            testutil::bundled_psl(), AliasResolver{});
        REQUIRE(targets.size() == 2);
        CHECK(targets[0].value == "first.com");
        CHECK(targets[1].value == "second.com");
    }

    TEST_CASE("alias canonicalization merges targets") {
        TempDir tmp("targets-alias");
        write_corpus_page(tmp.path(), "seed.example", "/",
                          page_with_links({"http://old.com/", "http://new.com/"}));
        CorpusFetcher fetcher(tmp.str());
        VirtualClock clock;
        CrawlResult result = crawl_site(parse_url("http://seed.example/"), fixture_config(),
                                        fetcher, clock, testutil::bundled_psl());
        AliasResolver aliases({AliasRule{{"old.com", "new.com"}, "new.com", {}}});
        auto targets = site_outlink_targets(result, Granularity::Domain,
                                            testutil::bundled_psl(), aliases);
        REQUIRE(targets.size() == 1);
        CHECK(targets[0].value == "new.com");
    }
}

TEST_SUITE("crawl persistence") {
    TEST_CASE("JSONL round trip preserves pages and outlinks") {
        std::string corpus = testutil::fixture_dir() + "/corpus";
        CorpusFetcher fetcher(corpus);
        VirtualClock clock;
        CrawlResult result = crawl_site(parse_url("http://park.example/"), fixture_config(),
                                        fetcher, clock, testutil::bundled_psl());
        TempDir tmp("crawl-jsonl");
        std::string path = (tmp.path() / "seed.jsonl").string();
        save_crawl_result(result, path);
        CrawlResult loaded = load_crawl_result(path);

        CHECK(loaded.site.value == result.site.value);
        REQUIRE(loaded.pages.size() == result.pages.size());
        for (std::size_t i = 0; i < result.pages.size(); ++i) {
            CHECK(loaded.pages[i].url.normalized() == result.pages[i].url.normalized());
            CHECK(loaded.pages[i].depth == result.pages[i].depth);
            CHECK(loaded.pages[i].out_anchors.size() == result.pages[i].out_anchors.size());
        }
        REQUIRE(loaded.site_outlinks.size() == result.site_outlinks.size());
        for (std::size_t i = 0; i < result.site_outlinks.size(); ++i) {
            CHECK(loaded.site_outlinks[i].target.value ==
                  result.site_outlinks[i].target.value);
            CHECK(loaded.site_outlinks[i].weight == result.site_outlinks[i].weight);
        }
        CHECK(loaded.page_count_per_site == result.page_count_per_site);
    }
}

TEST_CASE("robots policy parses groups and prefixes") {
    std::string robots =
        "User-agent: bigbot\nDisallow: /\n\n"
        "User-agent: *\nDisallow: /private\nDisallow: /tmp/\n# comment\nDisallow:\n";
    RobotsPolicy policy = RobotsPolicy::parse(robots, "linknet/0.1");
    CHECK(policy.allows("/"));
    CHECK(policy.allows("/public"));
    CHECK_FALSE(policy.allows("/private"));
    CHECK_FALSE(policy.allows("/private/x"));
    CHECK_FALSE(policy.allows("/tmp/y"));
    CHECK(policy.allows("/tmpfile"));

    RobotsPolicy big = RobotsPolicy::parse(robots, "bigbot/2.0");
    CHECK_FALSE(big.allows("/anything"));
}
