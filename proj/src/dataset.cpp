#include "linknet/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "linknet/errors.hpp"

namespace linknet {

const char* to_string(Sector s) {
    switch (s) {
        case Sector::Industry: return "Industry";
        case Sector::Academia: return "Academia";
        case Sector::Government: return "Government";
    }
    return "?";
}

const char* to_string(Relationship r) {
    switch (r) {
        case Relationship::Tenant: return "Tenant";
        case Relationship::Information: return "Information";
        case Relationship::Support: return "Support";
        case Relationship::Partnership: return "Partnership";
        case Relationship::Membership: return "Membership";
        case Relationship::Incubator: return "Incubator";
        case Relationship::Other: return "Other";
    }
    return "?";
}

Sector sector_from_string(const std::string& s) {
    if (s == "Industry") return Sector::Industry;
    if (s == "Academia") return Sector::Academia;
    if (s == "Government") return Sector::Government;
    throw ConfigError("unknown sector: " + s);
}

Relationship relationship_from_string(const std::string& s) {
    if (s == "Tenant") return Relationship::Tenant;
    if (s == "Information") return Relationship::Information;
    if (s == "Support") return Relationship::Support;
    if (s == "Partnership") return Relationship::Partnership;
    if (s == "Membership") return Relationship::Membership;
    if (s == "Incubator") return Relationship::Incubator;
    if (s == "Other") return Relationship::Other;
    throw ConfigError("unknown relationship: " + s);
}

const Organization* Sample::find(const std::string& key) const {
    auto it = std::lower_bound(members.begin(), members.end(), key,
                               [](const Organization& org, const std::string& k) {
                                   return org.key.value < k;
                               });
    if (it == members.end() || it->key.value != key) return nullptr;
    return &*it;
}

std::vector<std::string> Sample::keys() const {
    std::vector<std::string> out;
    out.reserve(members.size());
    for (const auto& member : members) out.push_back(member.key.value);
    return out;
}

namespace {

// One CSV record; quoted fields may contain commas and doubled quotes.
std::vector<std::string> parse_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

}  // namespace

std::vector<Organization> load_registry(const std::string& path,
                                        const PublicSuffixList& suffixes,
                                        const AliasResolver& aliases,
                                        Granularity granularity) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open registry: " + path);

    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty registry: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "key,name,sector,relationship,category")
        throw ConfigError("registry header must be key,name,sector,relationship,category");

    std::vector<Organization> orgs;
    std::set<std::string> seen;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        auto fields = parse_csv_row(line);
        if (fields.size() != 5)
            throw ConfigError("registry row " + std::to_string(row) + ": expected 5 fields, got " +
                              std::to_string(fields.size()));
        Organization org;
        try {
            org.key = aliases.canonicalize(reduce_host(fields[0], granularity, suffixes));
            org.sector = sector_from_string(fields[2]);
            org.relationship = relationship_from_string(fields[3]);
        } catch (const Error& e) {
            throw ConfigError("registry row " + std::to_string(row) + ": " + e.what());
        }
        org.name = fields[1];
        org.category = fields[4];
        if (!seen.insert(org.key.value).second)
            throw ConfigError("registry row " + std::to_string(row) + ": duplicate key " +
                              org.key.value);
        orgs.push_back(std::move(org));
    }
    return orgs;
}

Sample sample_from_seed_crawl(const CrawlResult& crawl,
                              const std::vector<Organization>& registry,
                              Granularity granularity, const PublicSuffixList& suffixes,
                              const AliasResolver& aliases, bool strict,
                              SampleBuildReport* report) {
    std::map<std::string, const Organization*> by_key;
    for (const auto& org : registry) by_key[org.key.value] = &org;

    std::string seed_key =
        aliases.canonicalize(reduce_host(crawl.site.value, granularity, suffixes).value);
    auto seed_it = by_key.find(seed_key);
    if (seed_it == by_key.end())
        throw ConfigError("registry does not classify the seed organization: " + seed_key);

    Sample sample;
    sample.seed_key = seed_key;
    sample.granularity = granularity;

    std::map<std::string, Organization> members;
    members.emplace(seed_key, *seed_it->second);

    std::vector<std::string> missing;
    for (const auto& target : site_outlink_targets(crawl, granularity, suffixes, aliases)) {
        if (members.count(target.value)) continue;
        auto it = by_key.find(target.value);
        if (it != by_key.end()) {
            members.emplace(target.value, *it->second);
            continue;
        }
        if (strict) {
            missing.push_back(target.value);
            continue;
        }
        Organization org;
        org.key = target;
        org.name = target.value;
        org.sector = Sector::Industry;  // explicit non-strict default, reported below
        org.relationship = Relationship::Other;
        org.category = "unclassified";
        members.emplace(target.value, std::move(org));
        if (report) report->unclassified.push_back(target.value);
    }

    if (!missing.empty()) {
        std::string joined;
        for (const auto& key : missing) {
            if (!joined.empty()) joined += ", ";
            joined += key;
        }
        throw ConfigError("registry does not classify: " + joined);
    }

    for (auto& [key, org] : members) sample.members.push_back(std::move(org));
    return sample;
}

std::vector<std::pair<std::string, std::string>> LinkDataset::arcs() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(records.size());
    for (const auto& record : records) out.emplace_back(record.source, record.target);
    return out;
}

LinkDataset build_dataset(Direction direction,
                          const std::vector<LinkProvider*>& providers,
                          const Sample& sample, const AliasResolver& aliases,
                          const PublicSuffixList& suffixes,
                          int max_results_per_query) {
    LinkDataset dataset;
    dataset.direction = direction;
    dataset.granularity = sample.granularity;

    std::map<std::pair<std::string, std::string>, DatasetArc> merged;
    std::set<std::string> used_providers;

    for (LinkProvider* provider : providers) {
        std::vector<std::string> skipped;
        for (const auto& member : sample.members) {
            // A subdomain-tagged key that is itself registrable may be
            // queried at domain granularity through domain-only indexes.
            SiteKey query_key = member.key;
            if (query_key.granularity == Granularity::Subdomain &&
                direction == Direction::Outlinks &&
                provider->capabilities().domain_only_outlinks) {
                try {
                    if (suffixes.registrable_domain(query_key.value) == query_key.value)
                        query_key.granularity = Granularity::Domain;
                } catch (const ReductionError&) {
                    // leave the key as-is; the capability check will skip it
                }
            }
            try {
                require_capability(*provider, query_key, direction);
            } catch (const CapabilityError&) {
                skipped.push_back(member.key.value);
                continue;
            }
            HarvestOutcome outcome =
                query_all_links(*provider, query_key, direction, max_results_per_query);
            if (!outcome.complete)
                dataset.warnings.push_back("partial results for " + member.key.value +
                                           " from " + provider->name());
            used_providers.insert(provider->name());
            for (const auto& record : outcome.records) {
                dataset.raw_count += record.weight;
                std::string source = aliases.canonicalize(record.source.value);
                std::string target = aliases.canonicalize(record.target.value);
                if (source == target) continue;  // self-link after canonicalization
                auto key = std::make_pair(source, target);
                auto it = merged.find(key);
                if (it == merged.end()) {
                    DatasetArc arc;
                    arc.source = source;
                    arc.target = target;
                    arc.providers.push_back(record.provider);
                    arc.weight = record.weight;
                    merged.emplace(key, std::move(arc));
                } else {
                    it->second.weight += record.weight;
                    auto& names = it->second.providers;
                    if (std::find(names.begin(), names.end(), record.provider) == names.end())
                        names.push_back(record.provider);
                }
            }
        }
        if (!skipped.empty()) {
            std::string joined;
            for (const auto& key : skipped) {
                if (!joined.empty()) joined += ", ";
                joined += key;
            }
            dataset.warnings.push_back(provider->name() + " skipped (" +
                                       std::string(to_string(direction)) + "): " + joined);
        }
    }

    for (auto& [key, arc] : merged) {
        std::sort(arc.providers.begin(), arc.providers.end());
        dataset.records.push_back(std::move(arc));
    }
    dataset.deduped_count = static_cast<std::int64_t>(dataset.records.size());
    dataset.provider_names.assign(used_providers.begin(), used_providers.end());
    for (LinkProvider* provider : providers)
        if (used_providers.count(provider->name()))
            dataset.provider_tags.push_back(provider->tag());
    std::sort(dataset.provider_tags.begin(), dataset.provider_tags.end(),
              [](const ProviderTag& a, const ProviderTag& b) { return a.name < b.name; });
    return dataset;
}

OverlapStats overlap_stats(const std::vector<std::pair<std::string, std::string>>& a,
                           const std::vector<std::pair<std::string, std::string>>& b) {
    std::set<std::pair<std::string, std::string>> set_a(a.begin(), a.end());
    std::set<std::pair<std::string, std::string>> set_b(b.begin(), b.end());
    OverlapStats stats;
    stats.size_a = set_a.size();
    stats.size_b = set_b.size();
    for (const auto& arc : set_a)
        if (set_b.count(arc)) ++stats.intersection;
    std::size_t union_size = stats.size_a + stats.size_b - stats.intersection;
    if (union_size > 0) {
        stats.jaccard = static_cast<double>(stats.intersection) / union_size;
        stats.overlap_of_union = 100.0 * stats.jaccard;
    }
    return stats;
}

void save_dataset(const LinkDataset& dataset, const std::string& path) {
    std::filesystem::create_directories(std::filesystem::path(path).parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write dataset: " + path);
    for (const auto& record : dataset.records) {
        std::string providers;
        for (const auto& name : record.providers) {
            if (!providers.empty()) providers += ",";
            providers += name;
        }
        out << record.source << '\t' << record.target << '\t' << providers << '\n';
    }

    nlohmann::ordered_json sidecar;
    sidecar["direction"] = dataset.direction == Direction::Inlinks ? "in" : "out";
    sidecar["granularity"] = to_string(dataset.granularity);
    sidecar["raw_count"] = dataset.raw_count;
    sidecar["deduped_count"] = dataset.deduped_count;
    sidecar["provider_names"] = dataset.provider_names;
    auto tags = nlohmann::ordered_json::array();
    for (const auto& tag : dataset.provider_tags)
        tags.push_back({{"name", tag.name}, {"retrieved_at_ms", tag.retrieved_at_ms}});
    sidecar["provider_tags"] = std::move(tags);
    sidecar["warnings"] = dataset.warnings;
    std::ofstream side(path + ".json", std::ios::binary);
    side << sidecar.dump(2) << '\n';
}

LinkDataset load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read dataset: " + path);
    LinkDataset dataset;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto tab1 = line.find('\t');
        auto tab2 = line.find('\t', tab1 + 1);
        if (tab1 == std::string::npos || tab2 == std::string::npos)
            throw Error("malformed dataset line: " + line);
        DatasetArc arc;
        arc.source = line.substr(0, tab1);
        arc.target = line.substr(tab1 + 1, tab2 - tab1 - 1);
        std::string providers = line.substr(tab2 + 1);
        std::string name;
        for (char c : providers) {
            if (c == ',') {
                if (!name.empty()) arc.providers.push_back(std::move(name));
                name.clear();
            } else {
                name += c;
            }
        }
        if (!name.empty()) arc.providers.push_back(std::move(name));
        dataset.records.push_back(std::move(arc));
    }

    std::ifstream side(path + ".json", std::ios::binary);
    if (side) {
        nlohmann::json doc = nlohmann::json::parse(side);
        dataset.direction =
            doc.value("direction", "in") == std::string("in") ? Direction::Inlinks
                                                              : Direction::Outlinks;
        dataset.granularity = granularity_from_string(doc.value("granularity", "domain"));
        dataset.raw_count = doc.value("raw_count", std::int64_t{0});
        dataset.deduped_count = doc.value("deduped_count", std::int64_t{0});
        dataset.provider_names = doc.value("provider_names", std::vector<std::string>{});
        for (const auto& tag : doc.value("provider_tags", nlohmann::json::array()))
            dataset.provider_tags.push_back(ProviderTag{
                tag.at("name").get<std::string>(),
                tag.value("retrieved_at_ms", std::int64_t{0})});
        dataset.warnings = doc.value("warnings", std::vector<std::string>{});
    } else {
        dataset.deduped_count = static_cast<std::int64_t>(dataset.records.size());
    }
    return dataset;
}

}  // namespace linknet
