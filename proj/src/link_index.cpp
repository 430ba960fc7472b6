#include "linknet/link_index.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "linknet/errors.hpp"

namespace linknet {

namespace fs = std::filesystem;

const char* to_string(Direction d) {
    return d == Direction::Inlinks ? "inlinks" : "outlinks";
}

ProviderCapabilities provider_capabilities(const LinkProvider& provider) {
    return provider.capabilities();
}

void require_capability(const LinkProvider& provider, const SiteKey& key,
                        Direction direction) {
    auto caps = provider.capabilities();
    if (direction == Direction::Inlinks && !caps.inlinks)
        throw CapabilityError(provider.name() + " cannot answer inlink queries");
    if (direction == Direction::Outlinks && !caps.outlinks)
        throw CapabilityError(provider.name() + " cannot answer outlink queries");
    if (key.granularity == Granularity::Subdomain) {
        if (!caps.subdomain_keys)
            throw CapabilityError(provider.name() + " cannot answer subdomain keys");
        if (direction == Direction::Outlinks && caps.domain_only_outlinks)
            throw CapabilityError(provider.name() +
                                  " cannot retrieve outlinks of subdomains");
    }
}

LocalLinkIndex::LocalLinkIndex(std::vector<std::pair<std::string, std::string>> url_pairs,
                               const PublicSuffixList* suffixes, std::string name)
    : pairs_(std::move(url_pairs)), suffixes_(suffixes), name_(std::move(name)) {
    std::sort(pairs_.begin(), pairs_.end());
    pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
}

ProviderCapabilities LocalLinkIndex::capabilities() const {
    ProviderCapabilities caps;
    caps.inlinks = true;
    caps.outlinks = true;
    caps.subdomain_keys = true;
    caps.supports_exclusions = true;
    caps.max_exclusions = 0;
    return caps;
}

QueryResult LocalLinkIndex::query_links(const LinkQuery& query) {
    require_capability(*this, query.key, query.direction);
    if (query.max_results < 1) throw ArgumentError("max_results must be >= 1");

    const Granularity gran = query.key.granularity;
    std::set<std::string> excluded(query.exclusions.begin(), query.exclusions.end());

    // counterpart key -> (weight, representative raw pair)
    std::map<std::string, std::pair<std::int64_t, const std::pair<std::string, std::string>*>>
        groups;
    for (const auto& pair : pairs_) {
        SiteKey source_key, target_key;
        try {
            source_key = reduce_host(parse_url(pair.first).host, gran, *suffixes_);
            target_key = reduce_host(parse_url(pair.second).host, gran, *suffixes_);
        } catch (const Error&) {
            continue;  // unreduceable host (public suffix / IP); not a site-level link
        }
        if (source_key.value == target_key.value) continue;  // internal link

        const std::string& own =
            query.direction == Direction::Inlinks ? target_key.value : source_key.value;
        const std::string& counterpart =
            query.direction == Direction::Inlinks ? source_key.value : target_key.value;
        if (own != query.key.value) continue;
        if (excluded.count(counterpart)) continue;

        auto [it, inserted] = groups.emplace(counterpart, std::make_pair(0, &pair));
        it->second.first += 1;
    }

    QueryResult result;
    for (const auto& [counterpart, info] : groups) {
        if (static_cast<int>(result.records.size()) >= query.max_results) {
            result.truncated = true;
            break;
        }
        LinkRecord record;
        if (query.direction == Direction::Inlinks) {
            record.source = SiteKey{counterpart, gran};
            record.target = query.key;
        } else {
            record.source = query.key;
            record.target = SiteKey{counterpart, gran};
        }
        record.provider = name_;
        record.source_url = parse_url(info.second->first);
        record.target_url = parse_url(info.second->second);
        record.weight = info.first;
        result.records.push_back(std::move(record));
    }
    return result;
}

void LocalLinkIndex::save(const std::string& dir) const {
    fs::create_directories(dir);
    {
        std::ofstream out(fs::path(dir) / "forward.tsv", std::ios::binary);
        for (const auto& [source, target] : pairs_) out << source << '\t' << target << '\n';
    }
    // Same columns as forward.tsv, ordered by target for inlink scans.
    auto reversed = pairs_;
    std::sort(reversed.begin(), reversed.end(), [](const auto& a, const auto& b) {
        return std::tie(a.second, a.first) < std::tie(b.second, b.first);
    });
    std::ofstream out(fs::path(dir) / "reverse.tsv", std::ios::binary);
    for (const auto& [source, target] : reversed) out << source << '\t' << target << '\n';
}

LocalLinkIndex LocalLinkIndex::load(const std::string& dir, const PublicSuffixList* suffixes) {
    std::ifstream in(fs::path(dir) / "forward.tsv", std::ios::binary);
    if (!in) throw ConfigError("cannot open link index at " + dir);
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ConfigError("malformed forward.tsv line: " + line);
        pairs.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
    return LocalLinkIndex(std::move(pairs), suffixes);
}

HarvestOutcome query_all_links(LinkProvider& provider, const SiteKey& key,
                               Direction direction, int max_results_per_query,
                               int max_rounds) {
    require_capability(provider, key, direction);
    auto caps = provider.capabilities();

    HarvestOutcome outcome;
    std::set<std::pair<std::string, std::string>> seen;
    std::vector<std::string> exclusions;

    for (int round = 0; round < max_rounds; ++round) {
        LinkQuery query{key, direction, exclusions, max_results_per_query};
        QueryResult result = provider.query_links(query);
        ++outcome.rounds;

        std::size_t new_counterparts = 0;
        for (auto& record : result.records) {
            auto arc = std::make_pair(record.source.value, record.target.value);
            if (!seen.insert(arc).second) continue;
            const std::string& counterpart = direction == Direction::Inlinks
                                                 ? record.source.value
                                                 : record.target.value;
            exclusions.push_back(counterpart);
            ++new_counterparts;
            outcome.records.push_back(std::move(record));
        }

        if (!result.truncated) return outcome;
        if (!caps.supports_exclusions || new_counterparts == 0) break;
        if (caps.max_exclusions > 0 &&
            static_cast<int>(exclusions.size()) >= caps.max_exclusions)
            break;  // exclusion capacity exhausted while still truncated
    }
    outcome.complete = false;
    return outcome;
}

ExternalProviderConfig ExternalProviderConfig::from_json_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid provider config JSON: ") + e.what());
    }
    ExternalProviderConfig config;
    config.name = doc.at("name").get<std::string>();
    config.endpoint = doc.at("endpoint").get<std::string>();
    config.api_key_env = doc.value("api_key_env", std::string{});
    config.max_results = doc.value("max_results", 1000);
    config.rate_per_minute = doc.value("rate_per_minute", 60);
    if (config.max_results < 1) throw ConfigError("provider max_results must be >= 1");
    if (config.rate_per_minute < 1) throw ConfigError("provider rate_per_minute must be >= 1");

    auto caps = doc.value("capabilities", nlohmann::json::object());
    config.capabilities.inlinks = caps.value("inlinks", false);
    std::string outlinks = caps.value("outlinks", std::string("none"));
    if (outlinks == "full") {
        config.capabilities.outlinks = true;
    } else if (outlinks == "domain-only") {
        config.capabilities.outlinks = true;
        config.capabilities.domain_only_outlinks = true;
    } else if (outlinks == "none") {
        config.capabilities.outlinks = false;
    } else {
        throw ConfigError("provider outlinks capability must be full|domain-only|none");
    }
    config.capabilities.subdomain_keys = caps.value("subdomain_keys", true);
    config.capabilities.supports_exclusions = caps.value("supports_exclusions", true);
    config.capabilities.max_exclusions = caps.value("max_exclusions", 0);
    return config;
}

ExternalProviderConfig ExternalProviderConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open provider config: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

ExternalHttpProvider::ExternalHttpProvider(ExternalProviderConfig config, Clock* clock,
                                           Granularity granularity)
    : config_(std::move(config)), clock_(clock), granularity_(granularity) {}

QueryResult ExternalHttpProvider::query_links(const LinkQuery& query) {
    require_capability(*this, query.key, query.direction);
    if (config_.capabilities.max_exclusions > 0 &&
        static_cast<int>(query.exclusions.size()) > config_.capabilities.max_exclusions)
        throw CapabilityError(config_.name + " exclusion capacity exceeded");

    // Serialize requests under the configured rate limit.
    const std::int64_t min_interval = 60000 / config_.rate_per_minute;
    if (last_request_ms_ >= 0) {
        std::int64_t elapsed = clock_->now_ms() - last_request_ms_;
        if (elapsed < min_interval) clock_->sleep_ms(min_interval - elapsed);
    }
    last_request_ms_ = clock_->now_ms();

    Url endpoint = parse_url(config_.endpoint);
    std::string host_port = endpoint.host;
    if (endpoint.port) host_port += ":" + std::to_string(*endpoint.port);
    httplib::Client client("http://" + host_port);
    client.set_connection_timeout(std::chrono::seconds(10));
    client.set_read_timeout(std::chrono::seconds(30));

    std::string target = endpoint.path.empty() ? "/" : endpoint.path;
    target += "?key=" + percent_encode(query.key.value);
    target += "&direction=";
    target += query.direction == Direction::Inlinks ? "in" : "out";
    target += "&limit=" + std::to_string(std::min(query.max_results, config_.max_results));
    if (!query.exclusions.empty()) {
        std::string joined;
        for (const auto& e : query.exclusions) {
            if (!joined.empty()) joined += ",";
            joined += e;
        }
        target += "&exclude=" + percent_encode(joined);
    }

    httplib::Headers headers;
    if (!config_.api_key_env.empty()) {
        const char* key = std::getenv(config_.api_key_env.c_str());
        if (key != nullptr) headers.emplace("X-Api-Key", key);
    }

    auto res = client.Get(target, headers);
    if (!res)
        throw TransientProviderError(config_.name + " unavailable: no response from " +
                                     config_.endpoint);
    if (res->status >= 500 || res->status == 429)
        throw TransientProviderError(config_.name + " unavailable: HTTP " +
                                     std::to_string(res->status));
    if (res->status != 200)
        throw Error(config_.name + " query failed: HTTP " + std::to_string(res->status));

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
        throw Error(config_.name + " returned invalid JSON: " + std::string(e.what()));
    }

    QueryResult result;
    result.truncated = doc.value("truncated", false);
    for (const auto& link : doc.value("links", nlohmann::json::array())) {
        LinkRecord record;
        record.source = SiteKey{link.at("source").get<std::string>(), granularity_};
        record.target = SiteKey{link.at("target").get<std::string>(), granularity_};
        record.provider = config_.name;
        record.weight = link.value("weight", 1);
        result.records.push_back(std::move(record));
    }
    return result;
}

}  // namespace linknet
