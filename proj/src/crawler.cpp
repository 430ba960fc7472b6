#include "linknet/crawler.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "linknet/errors.hpp"
#include "linknet/html.hpp"

namespace linknet {

namespace fs = std::filesystem;

namespace {

std::string ascii_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool is_html(const std::string& content_type) {
    // Missing content type is assumed to be HTML (fixture corpora).
    if (content_type.empty()) return true;
    return ascii_lower(content_type).find("text/html") != std::string::npos;
}

struct HostState {
    std::int64_t last_fetch_ms = -1;
    RobotsPolicy robots;
    bool robots_loaded = false;
};

}  // namespace

std::int64_t CrawlResult::raw_outlink_observations() const {
    std::int64_t total = 0;
    for (const auto& record : site_outlinks) total += record.weight;
    return total;
}

RobotsPolicy RobotsPolicy::parse(const std::string& body, const std::string& user_agent) {
    // First token of the configured agent, lowercased, e.g. "linknet/0.1" -> "linknet".
    std::string agent = ascii_lower(user_agent);
    auto slash = agent.find('/');
    if (slash != std::string::npos) agent = agent.substr(0, slash);

    RobotsPolicy generic, specific;
    bool in_generic = false, in_specific = false, has_specific = false;

    std::istringstream in(body);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto colon = line.find(':');
        if (colon == std::string::npos) continue;
        std::string field = ascii_lower(line.substr(0, colon));
        std::string value = line.substr(colon + 1);
        auto b = value.find_first_not_of(" \t\r");
        auto e = value.find_last_not_of(" \t\r");
        value = b == std::string::npos ? "" : value.substr(b, e - b + 1);
        b = field.find_first_not_of(" \t");
        field = b == std::string::npos ? "" : field.substr(b);

        if (field == "user-agent") {
            std::string token = ascii_lower(value);
            in_generic = token == "*";
            in_specific = !token.empty() && token != "*" &&
                          (agent.find(token) != std::string::npos || token == agent);
            if (in_specific) has_specific = true;
        } else if (field == "disallow") {
            if (value.empty()) continue;  // empty Disallow allows everything
            if (in_specific) specific.disallowed_prefixes_.push_back(value);
            if (in_generic) generic.disallowed_prefixes_.push_back(value);
        }
    }
    return has_specific ? specific : generic;
}

bool RobotsPolicy::allows(const std::string& path) const {
    for (const auto& prefix : disallowed_prefixes_)
        if (path.rfind(prefix, 0) == 0) return false;
    return true;
}

CrawlResult crawl_site(const Url& seed, const CrawlConfig& cfg, Fetcher& fetcher,
                       Clock& clock, const PublicSuffixList& suffixes) {
    SiteKey site = reduce_to_site_key(seed, cfg.granularity, suffixes);

    CrawlResult result;
    result.site = site;

    std::map<std::string, HostState> hosts;
    auto wait_for_host = [&](HostState& state) {
        if (state.last_fetch_ms >= 0) {
            std::int64_t wait = state.last_fetch_ms + cfg.per_host_delay_ms - clock.now_ms();
            if (wait > 0) clock.sleep_ms(wait);
        }
    };
    auto ensure_robots = [&](const Url& url) {
        HostState& state = hosts[url.host];
        if (!cfg.honor_robots || state.robots_loaded) return;
        state.robots_loaded = true;
        Url robots_url = url;
        robots_url.path = "/robots.txt";
        robots_url.query.clear();
        wait_for_host(state);
        FetchResponse robots = fetcher.fetch(robots_url);
        state.last_fetch_ms = clock.now_ms();
        if (robots.ok()) state.robots = RobotsPolicy::parse(robots.body, cfg.user_agent);
    };
    auto polite_fetch = [&](const Url& url) -> FetchResponse {
        HostState& state = hosts[url.host];
        wait_for_host(state);
        FetchResponse response = fetcher.fetch(url);
        state.last_fetch_ms = clock.now_ms();
        return response;
    };

    // The host's rules must be loaded before this answers authoritatively.
    auto robots_allow = [&](const Url& url) {
        if (!cfg.honor_robots) return true;
        auto it = hosts.find(url.host);
        if (it == hosts.end() || !it->second.robots_loaded) return true;
        return it->second.robots.allows(url.path.empty() ? "/" : url.path);
    };

    // Deduped site outlinks keyed by (source key, target key).
    std::map<std::pair<std::string, std::string>, LinkRecord> outlinks;
    auto note_outlink = [&](const SiteKey& target, const Url& page_url, const Url& anchor) {
        auto key = std::make_pair(site.value, target.value);
        auto it = outlinks.find(key);
        if (it == outlinks.end()) {
            LinkRecord record;
            record.source = site;
            record.target = target;
            record.provider = "crawl";
            record.source_url = page_url;
            record.target_url = anchor;
            outlinks.emplace(key, std::move(record));
        } else {
            it->second.weight += 1;
        }
    };

    std::set<std::string> visited;  // normalized page URLs
    std::vector<Url> frontier{parse_url(seed.normalized())};
    visited.insert(frontier.front().normalized());
    int fetched_pages = 0;
    bool seed_ok = false;

    for (int depth = 0; depth <= cfg.max_depth && !frontier.empty(); ++depth) {
        // Deterministic order within a level.
        std::sort(frontier.begin(), frontier.end(),
                  [](const Url& a, const Url& b) { return a.normalized() < b.normalized(); });
        std::vector<Url> next;

        for (const Url& page_url : frontier) {
            if (fetched_pages >= cfg.max_pages_per_site) break;

            if (!robots_allow(page_url)) {
                ++result.robots_skipped;
                continue;
            }

            // Follow redirects, re-checking site membership at each hop.
            Url current = page_url;
            FetchResponse response;
            bool external_redirect = false;
            int hops = 0;
            while (true) {
                ensure_robots(current);
                if (!robots_allow(current)) {
                    ++result.robots_skipped;
                    external_redirect = true;  // drop the page, nothing to record
                    break;
                }
                response = polite_fetch(current);
                if (!response.is_redirect()) break;
                if (++hops > cfg.max_redirects) {
                    response.status = 0;  // redirect limit exceeded
                    break;
                }
                std::string location = resolve_reference(*response.redirect_location, current);
                Url target = parse_url(location);
                SiteKey target_site = reduce_to_site_key(target, cfg.granularity, suffixes);
                if (target_site.value != site.value) {
                    // The link effectively points off-site.
                    note_outlink(target_site, page_url, target);
                    external_redirect = true;
                    break;
                }
                current = target;
                if (!visited.insert(current.normalized()).second) {
                    external_redirect = true;  // already crawled via another route
                    break;
                }
            }
            if (external_redirect) continue;

            Page page;
            page.url = current;
            page.site = site;
            page.depth = depth;
            page.status = response.status;
            page.fetched_at_ms = clock.now_ms();

            if (response.ok() && is_html(response.content_type)) {
                ++fetched_pages;
                if (depth == 0) seed_ok = true;
                for (const Url& anchor : extract_anchors(response.body, current)) {
                    SiteKey anchor_site;
                    try {
                        anchor_site = reduce_to_site_key(anchor, cfg.granularity, suffixes);
                    } catch (const ReductionError&) {
                        continue;
                    }
                    page.out_anchors.push_back(anchor);
                    if (anchor_site.value == site.value) {
                        if (depth < cfg.max_depth && visited.insert(anchor.normalized()).second)
                            next.push_back(anchor);
                    } else {
                        note_outlink(anchor_site, current, anchor);
                    }
                }
            } else if (response.ok()) {
                ++fetched_pages;  // non-HTML page: counted, not parsed
                if (depth == 0) seed_ok = true;
            }
            result.pages.push_back(std::move(page));
        }
        frontier = std::move(next);
    }

    if (!seed_ok) {
        int status = result.pages.empty() ? 0 : result.pages.front().status;
        throw CrawlError("seed unreachable: " + seed.normalized() + " (status " +
                         std::to_string(status) + ")");
    }

    std::sort(result.pages.begin(), result.pages.end(), [](const Page& a, const Page& b) {
        return std::make_pair(a.depth, a.url.normalized()) <
               std::make_pair(b.depth, b.url.normalized());
    });
    for (auto& [key, record] : outlinks) result.site_outlinks.push_back(std::move(record));
    result.page_count_per_site[site.value] = fetched_pages;
    return result;
}

std::vector<SiteKey> site_outlink_targets(const CrawlResult& result,
                                          Granularity granularity,
                                          const PublicSuffixList& suffixes,
                                          const AliasResolver& aliases) {
    std::set<std::string> keys;
    std::string own = aliases.canonicalize(
        reduce_host(result.site.value, granularity, suffixes).value);
    for (const auto& record : result.site_outlinks) {
        if (!record.target_url) continue;
        SiteKey key = reduce_to_site_key(*record.target_url, granularity, suffixes);
        std::string canonical = aliases.canonicalize(key.value);
        if (canonical != own) keys.insert(canonical);
    }
    std::vector<SiteKey> out;
    for (const auto& key : keys) out.push_back(SiteKey{key, granularity});
    return out;
}

void save_crawl_result(const CrawlResult& result, const std::string& path) {
    fs::create_directories(fs::path(path).parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write crawl result: " + path);
    for (const auto& page : result.pages) {
        nlohmann::ordered_json doc;
        doc["url"] = page.url.normalized();
        doc["site"] = page.site.value;
        doc["depth"] = page.depth;
        doc["status"] = page.status;
        doc["fetched_at_ms"] = page.fetched_at_ms;
        auto anchors = nlohmann::ordered_json::array();
        for (const auto& anchor : page.out_anchors) anchors.push_back(anchor.normalized());
        doc["out_anchors"] = std::move(anchors);
        out << doc.dump() << '\n';
    }
    nlohmann::ordered_json summary;
    summary["summary"] = true;
    summary["site"] = result.site.value;
    summary["granularity"] = to_string(result.site.granularity);
    summary["page_count_per_site"] = result.page_count_per_site;
    summary["site_outlink_count"] = result.site_outlinks.size();
    summary["raw_outlink_observations"] = result.raw_outlink_observations();
    summary["robots_skipped"] = result.robots_skipped;
    auto outlinks = nlohmann::ordered_json::array();
    for (const auto& record : result.site_outlinks) {
        nlohmann::ordered_json entry;
        entry["source"] = record.source.value;
        entry["target"] = record.target.value;
        entry["weight"] = record.weight;
        if (record.source_url) entry["source_url"] = record.source_url->normalized();
        if (record.target_url) entry["target_url"] = record.target_url->normalized();
        outlinks.push_back(std::move(entry));
    }
    summary["site_outlinks"] = std::move(outlinks);
    out << summary.dump() << '\n';
}

CrawlResult load_crawl_result(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read crawl result: " + path);
    CrawlResult result;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json doc = nlohmann::json::parse(line);
        if (doc.value("summary", false)) {
            Granularity gran = granularity_from_string(doc.value("granularity", "domain"));
            result.site = SiteKey{doc.at("site").get<std::string>(), gran};
            result.page_count_per_site =
                doc.at("page_count_per_site").get<std::map<std::string, int>>();
            result.robots_skipped = doc.value("robots_skipped", 0);
            for (const auto& entry : doc.value("site_outlinks", nlohmann::json::array())) {
                LinkRecord record;
                record.source = SiteKey{entry.at("source").get<std::string>(), gran};
                record.target = SiteKey{entry.at("target").get<std::string>(), gran};
                record.provider = "crawl";
                record.weight = entry.value("weight", 1);
                if (entry.contains("source_url"))
                    record.source_url = parse_url(entry["source_url"].get<std::string>());
                if (entry.contains("target_url"))
                    record.target_url = parse_url(entry["target_url"].get<std::string>());
                result.site_outlinks.push_back(std::move(record));
            }
            continue;
        }
        Page page;
        page.url = parse_url(doc.at("url").get<std::string>());
        page.site = SiteKey{doc.at("site").get<std::string>(), Granularity::Domain};
        page.depth = doc.at("depth").get<int>();
        page.status = doc.at("status").get<int>();
        page.fetched_at_ms = doc.value("fetched_at_ms", std::int64_t{0});
        for (const auto& anchor : doc.value("out_anchors", nlohmann::json::array()))
            page.out_anchors.push_back(parse_url(anchor.get<std::string>()));
        result.pages.push_back(std::move(page));
    }
    // Page site keys share the summary granularity.
    for (auto& page : result.pages) page.site.granularity = result.site.granularity;
    return result;
}

std::vector<std::pair<std::string, std::string>> collect_url_pairs(
    const std::vector<CrawlResult>& results) {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& result : results)
        for (const auto& page : result.pages)
            for (const auto& anchor : page.out_anchors)
                pairs.emplace_back(page.url.normalized(), anchor.normalized());
    return pairs;
}

}  // namespace linknet
