#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "linknet/crawler.hpp"
#include "linknet/link_index.hpp"
#include "linknet/url.hpp"

namespace linknet {

enum class Sector { Industry, Academia, Government };
enum class Relationship { Tenant, Information, Support, Partnership, Membership, Incubator, Other };

const char* to_string(Sector s);
const char* to_string(Relationship r);
Sector sector_from_string(const std::string& s);
Relationship relationship_from_string(const std::string& s);

struct Organization {
    SiteKey key;
    std::string name;
    Sector sector = Sector::Industry;
    Relationship relationship = Relationship::Other;
    std::string category;
};

// The declared organization sample: the science park plus its classified
// link targets. Members are sorted by key and include the seed.
struct Sample {
    std::string seed_key;
    Granularity granularity = Granularity::Domain;
    std::vector<Organization> members;

    const Organization* find(const std::string& key) const;
    std::vector<std::string> keys() const;
};

// Registry CSV with header exactly `key,name,sector,relationship,category`.
// Keys are reduced at `granularity` and canonicalized through `aliases`;
// duplicate keys and unknown enum tokens are load errors naming the row.
std::vector<Organization> load_registry(const std::string& path,
                                        const PublicSuffixList& suffixes,
                                        const AliasResolver& aliases,
                                        Granularity granularity);

struct SampleBuildReport {
    std::vector<std::string> unclassified;  // admitted with relationship Other
};

// Seed plus classified external crawl targets. In strict mode any target
// missing from the registry raises ConfigError listing the keys; otherwise
// the target is admitted as Other/Industry and reported.
Sample sample_from_seed_crawl(const CrawlResult& crawl,
                              const std::vector<Organization>& registry,
                              Granularity granularity, const PublicSuffixList& suffixes,
                              const AliasResolver& aliases, bool strict,
                              SampleBuildReport* report = nullptr);

// A deduplicated, site-key-level arc with merged provider provenance.
struct DatasetArc {
    std::string source;
    std::string target;
    std::vector<std::string> providers;  // sorted, unique
    std::int64_t weight = 1;             // raw URL-level observations

    bool operator==(const DatasetArc&) const = default;
};

struct LinkDataset {
    Direction direction = Direction::Inlinks;
    Granularity granularity = Granularity::Domain;
    std::vector<DatasetArc> records;  // sorted by (source, target)
    std::int64_t raw_count = 0;       // observations before dedup/self-link removal
    std::int64_t deduped_count = 0;   // == records.size()
    std::vector<std::string> provider_names;
    std::vector<ProviderTag> provider_tags;  // name + retrieval timestamp
    std::vector<std::string> warnings;

    std::vector<std::pair<std::string, std::string>> arcs() const;
};

// For every sample member, harvest `direction` links from every capable
// provider; canonicalize, drop self-links, dedupe by (source, target).
// Capability gaps are warnings naming the skipped member/provider pairs.
// A member key tagged Subdomain that is itself a registrable domain is
// still queryable through domain-only providers; only proper subdomains
// are skipped there.
LinkDataset build_dataset(Direction direction,
                          const std::vector<LinkProvider*>& providers,
                          const Sample& sample, const AliasResolver& aliases,
                          const PublicSuffixList& suffixes,
                          int max_results_per_query = 1000);

struct OverlapStats {
    std::size_t size_a = 0;
    std::size_t size_b = 0;
    std::size_t intersection = 0;
    double jaccard = 0.0;         // |a∩b| / |a∪b|
    double overlap_of_union = 0.0;  // same as jaccard, as a percentage
};

OverlapStats overlap_stats(const std::vector<std::pair<std::string, std::string>>& a,
                           const std::vector<std::pair<std::string, std::string>>& b);

// TSV persistence `source<TAB>target<TAB>providers` plus a JSON sidecar of
// counters; `path` names the TSV, sidecar is `path + ".json"`.
void save_dataset(const LinkDataset& dataset, const std::string& path);
LinkDataset load_dataset(const std::string& path);

}  // namespace linknet
