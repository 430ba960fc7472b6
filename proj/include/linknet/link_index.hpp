#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "linknet/fetch.hpp"
#include "linknet/url.hpp"

namespace linknet {

enum class Direction { Inlinks, Outlinks };

const char* to_string(Direction d);

struct ProviderTag {
    std::string name;
    std::int64_t retrieved_at_ms = 0;
};

// One directed source→target link observation at site-key level.
// `weight` counts the raw URL-level pairs collapsed into this record, so
// pre-reduction totals stay reportable; the URLs keep one representative
// raw pair for auditing.
struct LinkRecord {
    SiteKey source;
    SiteKey target;
    std::string provider;
    std::optional<Url> source_url;
    std::optional<Url> target_url;
    std::int64_t weight = 1;
};

struct LinkQuery {
    SiteKey key;                          // the queried site
    Direction direction = Direction::Inlinks;
    std::vector<std::string> exclusions;  // counterpart keys to omit
    int max_results = 1000;
};

struct QueryResult {
    std::vector<LinkRecord> records;
    bool truncated = false;
};

// Supported directions and granularities; `domain_only_outlinks` models
// indexes that cannot answer outlink queries for subdomain keys.
struct ProviderCapabilities {
    bool inlinks = false;
    bool outlinks = false;
    bool subdomain_keys = true;
    bool domain_only_outlinks = false;
    bool supports_exclusions = true;
    int max_exclusions = 0;  // 0 = unbounded
};

class LinkProvider {
  public:
    virtual ~LinkProvider() = default;
    virtual std::string name() const = 0;
    virtual ProviderCapabilities capabilities() const = 0;
    // Throws CapabilityError for unsupported queries and
    // TransientProviderError when the backend is unavailable.
    virtual QueryResult query_links(const LinkQuery& query) = 0;
    // Provenance stamp for harvested records; clock-backed providers
    // report their last request time.
    virtual ProviderTag tag() const { return ProviderTag{name(), 0}; }
};

ProviderCapabilities provider_capabilities(const LinkProvider& provider);

// Raises CapabilityError unless `provider` can answer `direction` for `key`.
void require_capability(const LinkProvider& provider, const SiteKey& key,
                        Direction direction);

// Immutable local inverted index over raw page→anchor URL pairs, the
// offline stand-in for a search-engine link index. Queries reduce both
// sides to the requested key granularity on the fly, so one index answers
// either granularity; pairs that reduce to the same key on both sides are
// treated as internal and skipped.
class LocalLinkIndex final : public LinkProvider {
  public:
    LocalLinkIndex(std::vector<std::pair<std::string, std::string>> url_pairs,
                   const PublicSuffixList* suffixes, std::string name = "local-index");

    std::string name() const override { return name_; }
    ProviderCapabilities capabilities() const override;
    QueryResult query_links(const LinkQuery& query) override;

    const std::vector<std::pair<std::string, std::string>>& url_pairs() const {
        return pairs_;
    }

    // Directory persistence: forward.tsv sorted by (source,target),
    // reverse.tsv sorted by (target,source); UTF-8, LF, TAB-separated.
    void save(const std::string& dir) const;
    static LocalLinkIndex load(const std::string& dir, const PublicSuffixList* suffixes);

  private:
    std::vector<std::pair<std::string, std::string>> pairs_;  // (source_url, target_url)
    const PublicSuffixList* suffixes_;
    std::string name_;
};

// Exhaustive harvest of one key/direction via iterative exclusion
// splitting.
struct HarvestOutcome {
    std::vector<LinkRecord> records;
    bool complete = true;
    int rounds = 0;
};

// Re-queries with already-seen counterpart keys appended to the exclusion
// list until the provider reports no truncation. Rounds are capped, and a
// provider exclusion capacity may end the harvest early; both cases return
// the partial result with complete=false.
HarvestOutcome query_all_links(LinkProvider& provider, const SiteKey& key,
                               Direction direction, int max_results_per_query = 1000,
                               int max_rounds = 50);

// Configuration for an external backlink-index adapter. The endpoint is
// expected to answer GET <endpoint>?key=...&direction=in|out&limit=N
// [&exclude=a,b,c] with JSON
//   {"links": [{"source": "...", "target": "..."}], "truncated": bool}.
struct ExternalProviderConfig {
    std::string name;
    std::string endpoint;
    std::string api_key_env;
    int max_results = 1000;
    int rate_per_minute = 60;
    ProviderCapabilities capabilities;

    static ExternalProviderConfig from_json_file(const std::string& path);
    static ExternalProviderConfig from_json_text(const std::string& text);
};

class ExternalHttpProvider final : public LinkProvider {
  public:
    ExternalHttpProvider(ExternalProviderConfig config, Clock* clock,
                         Granularity granularity);

    std::string name() const override { return config_.name; }
    ProviderCapabilities capabilities() const override { return config_.capabilities; }
    QueryResult query_links(const LinkQuery& query) override;
    ProviderTag tag() const override {
        return ProviderTag{config_.name, last_request_ms_ < 0 ? 0 : last_request_ms_};
    }

  private:
    ExternalProviderConfig config_;
    Clock* clock_;
    Granularity granularity_;
    std::int64_t last_request_ms_ = -1;
};

}  // namespace linknet
