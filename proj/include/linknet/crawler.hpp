#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "linknet/fetch.hpp"
#include "linknet/link_index.hpp"
#include "linknet/url.hpp"

namespace linknet {

struct CrawlConfig {
    int max_depth = 2;                    // seed page is depth 0
    std::int64_t per_host_delay_ms = 1000;
    int max_pages_per_site = 10000;
    std::int64_t fetch_timeout_ms = 15000;
    std::string user_agent = "linknet/0.1";
    bool honor_robots = true;
    int max_redirects = 5;
    Granularity granularity = Granularity::Domain;
};

struct Page {
    Url url;
    SiteKey site;
    int depth = 0;
    int status = 0;  // HTTP status; 0 = transport failure
    std::vector<Url> out_anchors;
    std::int64_t fetched_at_ms = 0;
};

struct CrawlResult {
    SiteKey site;
    std::vector<Page> pages;                          // sorted by (depth, url)
    std::vector<LinkRecord> site_outlinks;            // provider "crawl", deduped by target key
    std::map<std::string, int> page_count_per_site;   // successfully fetched pages
    int robots_skipped = 0;

    // Raw URL-level outward link observations (sum of outlink weights).
    std::int64_t raw_outlink_observations() const;
};

// Breadth-first crawl of the pages sharing the seed's site key, to
// cfg.max_depth link hops from the seed. Anchors to other site keys are
// recorded as site outlinks and never fetched; consecutive fetches to one
// host are separated by cfg.per_host_delay_ms. Throws CrawlError when the
// seed page itself cannot be fetched.
CrawlResult crawl_site(const Url& seed, const CrawlConfig& cfg, Fetcher& fetcher,
                       Clock& clock, const PublicSuffixList& suffixes);

// Distinct external site keys of a crawl, reduced at `granularity`,
// canonicalized through `aliases`, sorted lexicographically.
std::vector<SiteKey> site_outlink_targets(const CrawlResult& result,
                                          Granularity granularity,
                                          const PublicSuffixList& suffixes,
                                          const AliasResolver& aliases);

// JSONL persistence: one Page object per line, then a summary object.
void save_crawl_result(const CrawlResult& result, const std::string& path);
CrawlResult load_crawl_result(const std::string& path);

// All page→anchor URL pairs of the given crawls, for local index builds.
std::vector<std::pair<std::string, std::string>> collect_url_pairs(
    const std::vector<CrawlResult>& results);

// robots.txt subset: User-agent groups with Disallow path prefixes.
class RobotsPolicy {
  public:
    RobotsPolicy() = default;
    static RobotsPolicy parse(const std::string& body, const std::string& user_agent);
    bool allows(const std::string& path) const;

  private:
    std::vector<std::string> disallowed_prefixes_;
};

}  // namespace linknet
