#include "linknet/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "linknet/crawler.hpp"
#include "linknet/digest.hpp"
#include "linknet/errors.hpp"
#include "linknet/manifest.hpp"
#include "linknet/network.hpp"
#include "linknet/report.hpp"

namespace linknet {

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write: " + path.string());
    out << content;
}

// Outlink provider backed by the member crawls themselves.
class CrawlOutlinkProvider final : public LinkProvider {
  public:
    explicit CrawlOutlinkProvider(const std::map<std::string, CrawlResult>* crawls)
        : crawls_(crawls) {}

    std::string name() const override { return "crawl"; }

    ProviderCapabilities capabilities() const override {
        ProviderCapabilities caps;
        caps.inlinks = false;
        caps.outlinks = true;
        caps.subdomain_keys = true;
        caps.supports_exclusions = true;
        return caps;
    }

    QueryResult query_links(const LinkQuery& query) override {
        require_capability(*this, query.key, query.direction);
        std::set<std::string> excluded(query.exclusions.begin(), query.exclusions.end());
        QueryResult result;
        auto it = crawls_->find(query.key.value);
        if (it == crawls_->end()) return result;  // nothing crawled for this site
        for (const auto& record : it->second.site_outlinks) {
            if (excluded.count(record.target.value)) continue;
            if (static_cast<int>(result.records.size()) >= query.max_results) {
                result.truncated = true;
                break;
            }
            result.records.push_back(record);
        }
        return result;
    }

  private:
    const std::map<std::string, CrawlResult>* crawls_;
};

}  // namespace

std::string PipelineConfig::resolve(const std::string& relative) const {
    if (relative.empty()) return relative;
    fs::path p(relative);
    if (p.is_absolute()) return relative;
    return (fs::path(base_dir) / p).string();
}

PipelineConfig PipelineConfig::load(const std::string& path) {
    PipelineConfig config;
    config.config_path = path;
    config.base_dir = fs::path(path).parent_path().string();
    if (config.base_dir.empty()) config.base_dir = ".";
    config.raw_text = read_file(path);

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(config.raw_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid config JSON: ") + e.what());
    }

    config.seeds = doc.at("seeds").get<std::vector<std::string>>();
    config.granularity = granularity_from_string(doc.value("granularity", "domain"));
    config.registry_path = doc.at("registry").get<std::string>();
    config.suffix_list_path = doc.at("public_suffix_list").get<std::string>();
    config.alias_rules_path = doc.value("alias_rules", std::string{});
    config.output_dir = config.resolve(doc.value("output_dir", std::string("out")));
    config.max_results_per_query = doc.value("max_results_per_query", 1000);
    config.webpage_counts_path = doc.value("webpage_counts", std::string{});

    if (doc.contains("crawl")) {
        const auto& c = doc["crawl"];
        config.crawl.max_depth = c.value("max_depth", 2);
        config.crawl.per_host_delay_ms = c.value("per_host_delay_ms", std::int64_t{1000});
        config.crawl.max_pages_per_site = c.value("max_pages_per_site", 10000);
        config.crawl.fetch_timeout_ms = c.value("fetch_timeout_ms", std::int64_t{15000});
        config.crawl.user_agent = c.value("user_agent", std::string("linknet/0.1"));
        config.crawl.honor_robots = c.value("honor_robots", true);
        config.crawl.corpus_dir = c.value("corpus_dir", std::string{});
    }

    if (doc.contains("providers")) {
        const auto& p = doc["providers"];
        if (p.contains("inlinks"))
            config.inlink_providers = p["inlinks"].get<std::vector<std::string>>();
        if (p.contains("outlinks"))
            config.outlink_providers = p["outlinks"].get<std::vector<std::string>>();
        for (const auto& entry : p.value("external", nlohmann::json::array())) {
            if (entry.is_string()) {
                config.external_providers.push_back(ExternalProviderConfig::from_json_file(
                    config.resolve(entry.get<std::string>())));
            } else {
                config.external_providers.push_back(
                    ExternalProviderConfig::from_json_text(entry.dump()));
            }
        }
    }

    if (doc.contains("flags")) {
        const auto& f = doc["flags"];
        config.flags.strict_classification = f.value("strict_classification", true);
        config.flags.exclude_seed_outlinks = f.value("exclude_seed_outlinks", true);
        config.flags.prune_seed_outlinks = f.value("prune_seed_outlinks", false);
        std::string reciprocity = f.value("reciprocity_method", std::string("arc"));
        if (reciprocity == "arc") {
            config.flags.reciprocity_method = ReciprocityMethod::Arc;
        } else if (reciprocity == "dyad") {
            config.flags.reciprocity_method = ReciprocityMethod::Dyad;
        } else {
            throw ConfigError("reciprocity_method must be arc|dyad");
        }
        std::string gini_variant = f.value("gini_variant", std::string("standard"));
        if (gini_variant == "standard") {
            config.flags.gini_variant = GiniVariant::Standard;
        } else if (gini_variant == "corrected") {
            config.flags.gini_variant = GiniVariant::SmallSampleCorrected;
        } else {
            throw ConfigError("gini_variant must be standard|corrected");
        }
        config.flags.persist_weighted_matrices = f.value("persist_weighted_matrices", false);
    }

    if (doc.contains("export_formats")) {
        config.export_formats.clear();
        for (const auto& format : doc["export_formats"])
            config.export_formats.push_back(
                graph_format_from_string(format.get<std::string>()));
    }
    return config;
}

bool Diagnostics::has_errors() const {
    return std::any_of(findings.begin(), findings.end(), [](const Finding& f) {
        return f.level == Finding::Level::Error;
    });
}

std::size_t Diagnostics::warning_count() const {
    return static_cast<std::size_t>(
        std::count_if(findings.begin(), findings.end(), [](const Finding& f) {
            return f.level == Finding::Level::Warning;
        }));
}

Diagnostics validate_config(const PipelineConfig& config) {
    Diagnostics diagnostics;
    auto error = [&](const std::string& message) {
        diagnostics.findings.push_back({Finding::Level::Error, message});
    };
    auto warning = [&](const std::string& message) {
        diagnostics.findings.push_back({Finding::Level::Warning, message});
    };

    if (config.seeds.empty()) error("config names no seeds");
    for (const auto& seed : config.seeds) {
        try {
            parse_url(seed);
        } catch (const UrlParseError& e) {
            error(std::string("bad seed URL: ") + e.what());
        }
    }

    PublicSuffixList suffixes;
    std::string psl_path = config.resolve(config.suffix_list_path);
    if (!fs::exists(psl_path)) {
        error("public-suffix table missing: " + psl_path);
    } else {
        suffixes = PublicSuffixList::from_file(psl_path);
        if (suffixes.empty()) error("public-suffix table has no rules: " + psl_path);
    }

    AliasResolver aliases;
    if (!config.alias_rules_path.empty()) {
        std::string alias_path = config.resolve(config.alias_rules_path);
        if (!fs::exists(alias_path)) {
            error("alias-rule file missing: " + alias_path);
        } else {
            try {
                aliases = AliasResolver::from_file(alias_path);
            } catch (const ConfigError& e) {
                error(e.what());
            }
        }
    }

    std::string registry_path = config.resolve(config.registry_path);
    if (!fs::exists(registry_path)) {
        error("registry missing: " + registry_path);
    } else if (!suffixes.empty()) {
        try {
            auto registry = load_registry(registry_path, suffixes, aliases,
                                          config.granularity);
            std::set<std::string> keys;
            for (const auto& org : registry) keys.insert(org.key.value);
            for (const auto& seed : config.seeds) {
                try {
                    Url url = parse_url(seed);
                    std::string key = aliases.canonicalize(
                        reduce_to_site_key(url, config.granularity, suffixes).value);
                    if (!keys.count(key))
                        warning("registry does not classify seed " + key +
                                (config.flags.strict_classification
                                     ? " (strict mode will fail)"
                                     : ""));
                } catch (const Error&) {
                    // seed URL problems already reported
                }
            }
        } catch (const ConfigError& e) {
            error(e.what());
        }
    }

    if (!config.crawl.corpus_dir.empty() &&
        !fs::exists(config.resolve(config.crawl.corpus_dir)))
        error("fixture corpus missing: " + config.resolve(config.crawl.corpus_dir));

    if (!config.webpage_counts_path.empty() &&
        !fs::exists(config.resolve(config.webpage_counts_path)))
        error("webpage-count file missing: " + config.resolve(config.webpage_counts_path));

    // Provider capability routing.
    std::map<std::string, ProviderCapabilities> known;
    {
        ProviderCapabilities crawl_caps;
        crawl_caps.outlinks = true;
        known["crawl"] = crawl_caps;
        ProviderCapabilities index_caps;
        index_caps.inlinks = true;
        index_caps.outlinks = true;
        known["local-index"] = index_caps;
        for (const auto& external : config.external_providers)
            known[external.name] = external.capabilities;
    }
    auto check_direction = [&](const std::vector<std::string>& names, Direction direction) {
        bool any = false;
        for (const auto& name : names) {
            auto it = known.find(name);
            if (it == known.end()) {
                error("unknown provider: " + name);
                continue;
            }
            bool capable = direction == Direction::Inlinks ? it->second.inlinks
                                                           : it->second.outlinks;
            if (!capable) {
                warning(name + " cannot answer " + to_string(direction) +
                        "; remaining providers will be used");
                continue;
            }
            if (direction == Direction::Outlinks && it->second.domain_only_outlinks &&
                config.granularity == Granularity::Subdomain)
                warning(name + " cannot retrieve outlinks of subdomains; those members fall "
                               "back to other providers");
            any = true;
        }
        if (!any)
            error(std::string("no provider can answer ") + to_string(direction));
    };
    check_direction(config.inlink_providers, Direction::Inlinks);
    check_direction(config.outlink_providers, Direction::Outlinks);

    if (config.max_results_per_query < 1) error("max_results_per_query must be >= 1");
    return diagnostics;
}

namespace {

// Everything one seed's analysis needs, shared across stages.
struct SeedContext {
    std::string seed_url;
    std::string seed_key;
    fs::path out_dir;  // <output_dir>/<seed_key>
    CrawlResult seed_crawl;
    std::map<std::string, CrawlResult> member_crawls;  // key -> result
    Sample sample;
    std::vector<std::string> warnings;
};

struct PipelineState {
    PublicSuffixList suffixes;
    AliasResolver aliases;
    std::vector<Organization> registry;
    std::unique_ptr<Clock> clock;
    std::unique_ptr<Fetcher> fetcher;
    bool deterministic = false;
};

PipelineState open_state(const PipelineConfig& config) {
    PipelineState state;
    state.suffixes = PublicSuffixList::from_file(config.resolve(config.suffix_list_path));
    if (!config.alias_rules_path.empty())
        state.aliases = AliasResolver::from_file(config.resolve(config.alias_rules_path));
    state.registry = load_registry(config.resolve(config.registry_path), state.suffixes,
                                   state.aliases, config.granularity);
    if (!config.crawl.corpus_dir.empty()) {
        state.fetcher =
            std::make_unique<CorpusFetcher>(config.resolve(config.crawl.corpus_dir));
        state.clock = std::make_unique<VirtualClock>();
        state.deterministic = true;
    } else {
        state.fetcher = std::make_unique<HttpFetcher>(config.crawl.user_agent,
                                                      config.crawl.fetch_timeout_ms);
        state.clock = std::make_unique<SystemClock>();
    }
    return state;
}

CrawlConfig crawl_config_of(const PipelineConfig& config) {
    CrawlConfig crawl;
    crawl.max_depth = config.crawl.max_depth;
    crawl.per_host_delay_ms = config.crawl.per_host_delay_ms;
    crawl.max_pages_per_site = config.crawl.max_pages_per_site;
    crawl.fetch_timeout_ms = config.crawl.fetch_timeout_ms;
    crawl.user_agent = config.crawl.user_agent;
    crawl.honor_robots = config.crawl.honor_robots;
    crawl.granularity = config.granularity;
    return crawl;
}

// Content digest of everything the crawl stage depends on.
std::string crawl_stage_digest(const PipelineConfig& config) {
    std::string material = std::string(kToolkitVersion) + "|";
    material += std::to_string(config.crawl.max_depth) + "|";
    material += std::to_string(config.crawl.per_host_delay_ms) + "|";
    material += std::to_string(config.crawl.max_pages_per_site) + "|";
    material += config.crawl.user_agent + "|";
    material += std::string(config.crawl.honor_robots ? "robots" : "norobots") + "|";
    material += std::string(to_string(config.granularity)) + "|";
    for (const auto& seed : config.seeds) material += seed + "|";
    material += digest_file(config.resolve(config.registry_path)) + "|";
    material += digest_file(config.resolve(config.suffix_list_path)) + "|";
    if (!config.alias_rules_path.empty())
        material += digest_file(config.resolve(config.alias_rules_path)) + "|";
    if (!config.crawl.corpus_dir.empty()) {
        std::vector<std::string> entries;
        fs::path corpus = config.resolve(config.crawl.corpus_dir);
        for (const auto& entry : fs::recursive_directory_iterator(corpus)) {
            if (!entry.is_regular_file()) continue;
            entries.push_back(fs::relative(entry.path(), corpus).generic_string() + ":" +
                              digest_file(entry.path().string()));
        }
        std::sort(entries.begin(), entries.end());
        for (const auto& e : entries) material += e + "|";
    }
    return digest_hex(material);
}

std::string seed_key_of(const PipelineConfig& config, const PipelineState& state,
                        const std::string& seed_url) {
    Url url = parse_url(seed_url);
    return state.aliases.canonicalize(
        reduce_to_site_key(url, config.granularity, state.suffixes).value);
}

void persist_sample(const Sample& sample, const fs::path& path) {
    std::string out = "key,name,sector,relationship,category\n";
    for (const auto& org : sample.members) {
        auto quote = [](const std::string& cell) {
            if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
            std::string quoted = "\"";
            for (char c : cell) {
                if (c == '"') quoted += "\"\"";
                else quoted += c;
            }
            return quoted + "\"";
        };
        out += org.key.value + "," + quote(org.name) + "," + to_string(org.sector) + "," +
               to_string(org.relationship) + "," + quote(org.category) + "\n";
    }
    write_file(path, out);
}

// Crawl the seed site, derive the sample, crawl every member site and
// build the local index; reuses persisted outputs when the stage digest
// matches.
SeedContext crawl_stage(const PipelineConfig& config, PipelineState& state,
                        const std::string& seed_url, const std::string& stage_digest,
                        RunSummary& summary) {
    SeedContext ctx;
    ctx.seed_url = seed_url;
    ctx.seed_key = seed_key_of(config, state, seed_url);
    ctx.out_dir = fs::path(config.output_dir) / ctx.seed_key;

    fs::path crawl_dir = ctx.out_dir / "crawl";
    fs::path stage_file = crawl_dir / "stage_digest.txt";
    CrawlConfig crawl_cfg = crawl_config_of(config);

    bool reuse = false;
    if (fs::exists(stage_file) && fs::exists(crawl_dir / "seed.jsonl")) {
        std::ifstream in(stage_file);
        std::string cached;
        std::getline(in, cached);
        reuse = cached == stage_digest;
    }

    if (reuse) {
        ctx.seed_crawl = load_crawl_result((crawl_dir / "seed.jsonl").string());
        SampleBuildReport report;
        ctx.sample =
            sample_from_seed_crawl(ctx.seed_crawl, state.registry, config.granularity,
                                   state.suffixes, state.aliases,
                                   config.flags.strict_classification, &report);
        for (const auto& key : report.unclassified)
            ctx.warnings.push_back("unclassified member admitted as Other/Industry: " + key);
        ctx.member_crawls[ctx.seed_key] = ctx.seed_crawl;
        for (const auto& member : ctx.sample.members) {
            if (member.key.value == ctx.seed_key) continue;
            fs::path file = crawl_dir / "members" / (member.key.value + ".jsonl");
            if (fs::exists(file))
                ctx.member_crawls[member.key.value] =
                    load_crawl_result(file.string());
        }
    } else {
        Url seed = parse_url(seed_url);
        ctx.seed_crawl = crawl_site(seed, crawl_cfg, *state.fetcher, *state.clock,
                                    state.suffixes);
        SampleBuildReport report;
        ctx.sample =
            sample_from_seed_crawl(ctx.seed_crawl, state.registry, config.granularity,
                                   state.suffixes, state.aliases,
                                   config.flags.strict_classification, &report);
        for (const auto& key : report.unclassified)
            ctx.warnings.push_back("unclassified member admitted as Other/Industry: " + key);

        save_crawl_result(ctx.seed_crawl, (crawl_dir / "seed.jsonl").string());
        for (const auto& member : ctx.sample.members) {
            if (member.key.value == ctx.seed_key) {
                ctx.member_crawls[ctx.seed_key] = ctx.seed_crawl;
                continue;
            }
            Url member_url = parse_url("http://" + member.key.value + "/");
            try {
                CrawlResult result = crawl_site(member_url, crawl_cfg, *state.fetcher,
                                                *state.clock, state.suffixes);
                ctx.member_crawls[member.key.value] = std::move(result);
            } catch (const CrawlError& e) {
                ctx.warnings.push_back(std::string("member crawl failed: ") + e.what());
            }
        }
        for (const auto& [key, result] : ctx.member_crawls) {
            if (key == ctx.seed_key) continue;
            save_crawl_result(result, (crawl_dir / "members" / (key + ".jsonl")).string());
        }
        // Seed crawl doubles as its member crawl on disk (seed.jsonl).
        std::vector<CrawlResult> all;
        for (const auto& [key, result] : ctx.member_crawls) all.push_back(result);
        LocalLinkIndex index(collect_url_pairs(all), &state.suffixes);
        index.save((ctx.out_dir / "index").string());
        write_file(stage_file, stage_digest + "\n");
    }

    persist_sample(ctx.sample, ctx.out_dir / "sample.csv");

    const std::string prefix = ctx.seed_key + ".";
    summary.counts[prefix + "crawl_pages"] =
        static_cast<std::int64_t>(ctx.seed_crawl.pages.size());
    summary.counts[prefix + "seed_site_outlinks"] =
        static_cast<std::int64_t>(ctx.seed_crawl.site_outlinks.size());
    summary.counts[prefix + "seed_raw_outlink_observations"] =
        ctx.seed_crawl.raw_outlink_observations();
    summary.counts[prefix + "sample_size"] =
        static_cast<std::int64_t>(ctx.sample.members.size());
    return ctx;
}

struct HarvestOutputs {
    LinkDataset in_data;
    LinkDataset out_data;
};

HarvestOutputs harvest_stage(const PipelineConfig& config, PipelineState& state,
                             SeedContext& ctx, RunSummary& summary) {
    LocalLinkIndex index =
        LocalLinkIndex::load((ctx.out_dir / "index").string(), &state.suffixes);
    CrawlOutlinkProvider crawl_provider(&ctx.member_crawls);

    std::map<std::string, LinkProvider*> by_name;
    by_name["local-index"] = &index;
    by_name["crawl"] = &crawl_provider;
    std::vector<std::unique_ptr<ExternalHttpProvider>> externals;
    for (const auto& external : config.external_providers) {
        externals.push_back(std::make_unique<ExternalHttpProvider>(
            external, state.clock.get(), config.granularity));
        by_name[external.name] = externals.back().get();
    }

    auto providers_for = [&](const std::vector<std::string>& names) {
        std::vector<LinkProvider*> out;
        for (const auto& name : names) {
            auto it = by_name.find(name);
            if (it == by_name.end()) throw ConfigError("unknown provider: " + name);
            out.push_back(it->second);
        }
        return out;
    };

    HarvestOutputs outputs;
    outputs.in_data =
        build_dataset(Direction::Inlinks, providers_for(config.inlink_providers),
                      ctx.sample, state.aliases, state.suffixes,
                      config.max_results_per_query);
    outputs.out_data =
        build_dataset(Direction::Outlinks, providers_for(config.outlink_providers),
                      ctx.sample, state.aliases, state.suffixes,
                      config.max_results_per_query);

    save_dataset(outputs.in_data, (ctx.out_dir / "datasets" / "in.tsv").string());
    save_dataset(outputs.out_data, (ctx.out_dir / "datasets" / "out.tsv").string());

    for (const auto& warning : outputs.in_data.warnings)
        ctx.warnings.push_back("in-data: " + warning);
    for (const auto& warning : outputs.out_data.warnings)
        ctx.warnings.push_back("out-data: " + warning);

    const std::string prefix = ctx.seed_key + ".";
    summary.counts[prefix + "raw_inlinks"] = outputs.in_data.raw_count;
    summary.counts[prefix + "deduped_inlinks"] = outputs.in_data.deduped_count;
    summary.counts[prefix + "raw_outlinks"] = outputs.out_data.raw_count;
    summary.counts[prefix + "deduped_outlinks"] = outputs.out_data.deduped_count;
    return outputs;
}

std::map<std::string, double> webpage_counts(const PipelineConfig& config,
                                             const SeedContext& ctx) {
    std::map<std::string, double> counts;
    if (!config.webpage_counts_path.empty()) {
        std::ifstream in(config.resolve(config.webpage_counts_path));
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            auto tab = line.find('\t');
            if (tab == std::string::npos) continue;
            counts[line.substr(0, tab)] = std::stod(line.substr(tab + 1));
        }
        return counts;
    }
    for (const auto& member : ctx.sample.members) {
        auto it = ctx.member_crawls.find(member.key.value);
        double pages = 0.0;
        if (it != ctx.member_crawls.end()) {
            for (const auto& [site, count] : it->second.page_count_per_site)
                pages += count;
        }
        counts[member.key.value] = pages;
    }
    return counts;
}

void analyze_stage(const PipelineConfig& config, SeedContext& ctx,
                   const HarvestOutputs& datasets, RunSummary& summary) {
    const std::string prefix = ctx.seed_key + ".";

    InterlinkNetwork net_in = interlink(datasets.in_data, ctx.sample);
    InterlinkNetwork net_out = interlink(datasets.out_data, ctx.sample);
    InterlinkNetwork net_both = combine(net_in, net_out);

    save_matrix(net_in, (ctx.out_dir / "networks" / "in.tsv").string());
    save_matrix(net_out, (ctx.out_dir / "networks" / "out.tsv").string());
    save_matrix(net_both, (ctx.out_dir / "networks" / "both.tsv").string());

    summary.counts[prefix + "in_arcs"] = static_cast<std::int64_t>(net_in.tie_count());
    summary.counts[prefix + "out_arcs"] = static_cast<std::int64_t>(net_out.tie_count());
    summary.counts[prefix + "combined_arcs"] =
        static_cast<std::int64_t>(net_both.tie_count());

    if (config.flags.persist_weighted_matrices) {
        auto weighted = [&](const LinkDataset& dataset, const fs::path& path) {
            std::string out = "source\ttarget\tweight\n";
            for (const auto& record : dataset.records) {
                if (!net_both.contains(record.source) || !net_both.contains(record.target))
                    continue;
                out += record.source + "\t" + record.target + "\t" +
                       std::to_string(record.weight) + "\n";
            }
            write_file(path, out);
        };
        weighted(datasets.in_data, ctx.out_dir / "networks" / "in.weighted.tsv");
        weighted(datasets.out_data, ctx.out_dir / "networks" / "out.weighted.tsv");
    }

    // Cohesion rows, each single-direction network gauged against the
    // combined tie count.
    std::vector<std::pair<std::string, CohesionReport>> cohesion_rows;
    cohesion_rows.emplace_back(
        "in", cohesion(net_in, net_both.tie_count(), config.flags.reciprocity_method));
    cohesion_rows.emplace_back(
        "out", cohesion(net_out, net_both.tie_count(), config.flags.reciprocity_method));
    cohesion_rows.emplace_back(
        "both", cohesion(net_both, std::nullopt, config.flags.reciprocity_method));

    DegreeCorrelations correlations = degree_correlations(net_in, net_out);

    // Spearman of combined-network degrees against webpage counts.
    DegreeTable degrees_both = degree(net_both);
    std::map<std::string, double> pages = webpage_counts(config, ctx);
    double spearman_in_pages = 0.0, spearman_out_pages = 0.0;
    bool spearman_ok = true;
    {
        std::vector<double> in_vec, out_vec, page_vec;
        for (std::size_t i = 0; i < degrees_both.nodes.size(); ++i) {
            auto it = pages.find(degrees_both.nodes[i]);
            if (it == pages.end()) continue;
            in_vec.push_back(degrees_both.in_degree[i]);
            out_vec.push_back(degrees_both.out_degree[i]);
            page_vec.push_back(it->second);
        }
        try {
            spearman_in_pages = spearman(in_vec, page_vec);
            spearman_out_pages = spearman(out_vec, page_vec);
        } catch (const Error& e) {
            spearman_ok = false;
            ctx.warnings.push_back(std::string("spearman degree/webpages unavailable: ") +
                                   e.what());
        }
    }

    // Gini: network degree vectors plus raw harvested per-member counts.
    std::vector<std::pair<std::string, GiniReport>> gini_degree_rows;
    gini_degree_rows.emplace_back("in-data", degree_gini(net_in, config.flags.gini_variant));
    gini_degree_rows.emplace_back("out-data",
                                  degree_gini(net_out, config.flags.gini_variant));
    std::vector<std::pair<std::string, double>> gini_raw_rows;
    {
        std::map<std::string, double> raw_in, raw_out;
        for (const auto& member : ctx.sample.members) {
            raw_in[member.key.value] = 0.0;
            raw_out[member.key.value] = 0.0;
        }
        for (const auto& record : datasets.in_data.records) {
            auto it = raw_in.find(record.target);
            if (it != raw_in.end()) it->second += static_cast<double>(record.weight);
        }
        for (const auto& record : datasets.out_data.records) {
            auto it = raw_out.find(record.source);
            if (it != raw_out.end()) it->second += static_cast<double>(record.weight);
        }
        std::vector<double> in_vec, out_vec;
        for (const auto& [key, value] : raw_in) in_vec.push_back(value);
        for (const auto& [key, value] : raw_out) out_vec.push_back(value);
        gini_raw_rows.emplace_back("raw harvested inlinks per member",
                                   gini(in_vec, config.flags.gini_variant));
        gini_raw_rows.emplace_back("raw harvested outlinks per member",
                                   gini(out_vec, config.flags.gini_variant));
    }

    SectorMatrix sectors =
        sector_matrix(net_both, ctx.sample, config.flags.exclude_seed_outlinks);
    std::vector<double> centrality = betweenness(net_both);

    // Tables I-VI analogues, CSV and aligned text.
    auto emit_table = [&](const std::string& stem, const TableData& table) {
        write_file(ctx.out_dir / "tables" / (stem + ".csv"), table.to_csv());
        write_file(ctx.out_dir / "tables" / (stem + ".txt"), table.to_text());
        summary.output_files.push_back(ctx.seed_key + "/tables/" + stem + ".csv");
        summary.output_files.push_back(ctx.seed_key + "/tables/" + stem + ".txt");
    };
    emit_table("table1_relationships", relationship_table(ctx.sample));
    emit_table("table2_cohesion", cohesion_table(cohesion_rows));
    emit_table("table3_correlations",
               correlation_table(correlations, spearman_in_pages, spearman_out_pages,
                                 spearman_ok));
    emit_table("table4_gini", gini_table(gini_degree_rows, gini_raw_rows));
    emit_table("table5_sectors", sector_table(sectors));
    emit_table("table6_centrality", centrality_table(degrees_both, centrality));

    // Overlap between the out-direction providers (crawl vs index), to
    // gauge how much the sources agree.
    {
        nlohmann::ordered_json overlap_doc;
        auto arcs_from = [&](const LinkDataset& dataset, const std::string& provider) {
            std::vector<std::pair<std::string, std::string>> arcs;
            for (const auto& record : dataset.records)
                if (std::find(record.providers.begin(), record.providers.end(), provider) !=
                    record.providers.end())
                    arcs.emplace_back(record.source, record.target);
            return arcs;
        };
        const auto& names = datasets.out_data.provider_names;
        for (std::size_t a = 0; a < names.size(); ++a) {
            for (std::size_t b = a + 1; b < names.size(); ++b) {
                OverlapStats stats = overlap_stats(arcs_from(datasets.out_data, names[a]),
                                                   arcs_from(datasets.out_data, names[b]));
                nlohmann::ordered_json entry;
                entry["providers"] = {names[a], names[b]};
                entry["size_a"] = stats.size_a;
                entry["size_b"] = stats.size_b;
                entry["intersection"] = stats.intersection;
                entry["jaccard"] = format_fixed(stats.jaccard, 4);
                overlap_doc["out_data"].push_back(entry);
            }
        }
        write_file(ctx.out_dir / "reports" / "overlap.json", overlap_doc.dump(2) + "\n");
    }

    // Graph exports with centrality and mutuality attributes.
    auto export_network = [&](const InterlinkNetwork& net, const std::string& stem) {
        DegreeTable net_degrees = degree(net);
        std::vector<double> net_betweenness = betweenness(net);
        for (GraphFormat format : config.export_formats) {
            const char* extension = format == GraphFormat::Gexf
                                        ? ".gexf"
                                        : (format == GraphFormat::Dot ? ".dot"
                                                                      : ".edgelist.tsv");
            fs::path path = ctx.out_dir / "exports" / (stem + extension);
            export_graph_file(net, ctx.sample, net_degrees, net_betweenness, format,
                              path.string());
            summary.output_files.push_back(ctx.seed_key + "/exports/" + stem + extension);
        }
    };
    export_network(net_both, "both");
    export_network(net_in, "in");
    export_network(net_out, "out");

    if (config.flags.prune_seed_outlinks) {
        InterlinkNetwork pruned = prune_seed_outlinks(net_both, ctx.seed_key);
        save_matrix(pruned, (ctx.out_dir / "networks" / "pruned.tsv").string());
        export_network(pruned, "pruned");
        summary.counts[prefix + "pruned_nodes"] =
            static_cast<std::int64_t>(pruned.size());
        summary.counts[prefix + "pruned_arcs"] =
            static_cast<std::int64_t>(pruned.tie_count());
        std::vector<std::pair<std::string, CohesionReport>> pruned_rows;
        pruned_rows.emplace_back(
            "pruned", cohesion(pruned, std::nullopt, config.flags.reciprocity_method));
        emit_table("table2_cohesion_pruned", cohesion_table(pruned_rows));
    }
}

RunManifest build_manifest(const PipelineConfig& config, const PipelineState& state,
                           const RunSummary& summary) {
    RunManifest manifest;
    manifest.toolkit_version = kToolkitVersion;
    manifest.config_digest = digest_hex(config.raw_text);
    manifest.input_digests[config.registry_path] =
        digest_file(config.resolve(config.registry_path));
    manifest.input_digests[config.suffix_list_path] =
        digest_file(config.resolve(config.suffix_list_path));
    if (!config.alias_rules_path.empty())
        manifest.input_digests[config.alias_rules_path] =
            digest_file(config.resolve(config.alias_rules_path));
    if (!config.crawl.corpus_dir.empty()) {
        std::vector<std::string> entries;
        fs::path corpus = config.resolve(config.crawl.corpus_dir);
        for (const auto& entry : fs::recursive_directory_iterator(corpus)) {
            if (!entry.is_regular_file()) continue;
            entries.push_back(fs::relative(entry.path(), corpus).generic_string() + ":" +
                              digest_file(entry.path().string()));
        }
        std::sort(entries.begin(), entries.end());
        std::string joined;
        for (const auto& e : entries) joined += e + "\n";
        manifest.input_digests[config.crawl.corpus_dir] = digest_hex(joined);
    }
    // Corpus runs use the virtual clock; pinning the timestamp keeps the
    // whole output tree byte-stable across (cached) re-runs.
    manifest.generated_at_ms =
        state.deterministic ? 0 : const_cast<PipelineState&>(state).clock->now_ms();
    manifest.counts = summary.counts;
    return manifest;
}

}  // namespace

RunSummary run_crawl(const PipelineConfig& config) {
    PipelineState state = open_state(config);
    RunSummary summary;
    std::string stage_digest = crawl_stage_digest(config);
    for (const auto& seed : config.seeds) {
        SeedContext ctx = crawl_stage(config, state, seed, stage_digest, summary);
        for (auto& warning : ctx.warnings)
            summary.warnings.push_back(ctx.seed_key + ": " + warning);
    }
    return summary;
}

RunSummary run_harvest(const PipelineConfig& config) {
    PipelineState state = open_state(config);
    RunSummary summary;
    std::string stage_digest = crawl_stage_digest(config);
    for (const auto& seed : config.seeds) {
        SeedContext ctx = crawl_stage(config, state, seed, stage_digest, summary);
        harvest_stage(config, state, ctx, summary);
        for (auto& warning : ctx.warnings)
            summary.warnings.push_back(ctx.seed_key + ": " + warning);
    }
    return summary;
}

RunSummary run_analyze(const PipelineConfig& config) {
    PipelineState state = open_state(config);
    RunSummary summary;
    std::string stage_digest = crawl_stage_digest(config);
    for (const auto& seed : config.seeds) {
        SeedContext ctx = crawl_stage(config, state, seed, stage_digest, summary);
        HarvestOutputs datasets = harvest_stage(config, state, ctx, summary);
        analyze_stage(config, ctx, datasets, summary);
        for (auto& warning : ctx.warnings)
            summary.warnings.push_back(ctx.seed_key + ": " + warning);
    }
    RunManifest manifest = build_manifest(config, state, summary);
    save_manifest(manifest, (fs::path(config.output_dir) / "manifest.json").string());
    return summary;
}

RunSummary run_export(const PipelineConfig& config) {
    PipelineState state = open_state(config);
    RunSummary summary;
    std::string stage_digest = crawl_stage_digest(config);
    for (const auto& seed : config.seeds) {
        SeedContext ctx = crawl_stage(config, state, seed, stage_digest, summary);
        HarvestOutputs datasets = harvest_stage(config, state, ctx, summary);

        InterlinkNetwork net_in = interlink(datasets.in_data, ctx.sample);
        InterlinkNetwork net_out = interlink(datasets.out_data, ctx.sample);
        InterlinkNetwork net_both = combine(net_in, net_out);
        auto export_network = [&](const InterlinkNetwork& net, const std::string& stem) {
            DegreeTable net_degrees = degree(net);
            std::vector<double> net_betweenness = betweenness(net);
            for (GraphFormat format : config.export_formats) {
                const char* extension = format == GraphFormat::Gexf
                                            ? ".gexf"
                                            : (format == GraphFormat::Dot ? ".dot"
                                                                          : ".edgelist.tsv");
                fs::path path = ctx.out_dir / "exports" / (stem + extension);
                export_graph_file(net, ctx.sample, net_degrees, net_betweenness, format,
                                  path.string());
                summary.output_files.push_back(ctx.seed_key + "/exports/" + stem +
                                               extension);
            }
        };
        export_network(net_both, "both");
        export_network(net_in, "in");
        export_network(net_out, "out");
        if (config.flags.prune_seed_outlinks)
            export_network(prune_seed_outlinks(net_both, ctx.seed_key), "pruned");
        for (auto& warning : ctx.warnings)
            summary.warnings.push_back(ctx.seed_key + ": " + warning);
    }
    return summary;
}

}  // namespace linknet
