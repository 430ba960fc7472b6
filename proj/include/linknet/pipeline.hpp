#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "linknet/dataset.hpp"
#include "linknet/graph_export.hpp"
#include "linknet/link_index.hpp"
#include "linknet/metrics.hpp"

namespace linknet {

struct CrawlSettings {
    int max_depth = 2;
    std::int64_t per_host_delay_ms = 1000;
    int max_pages_per_site = 10000;
    std::int64_t fetch_timeout_ms = 15000;
    std::string user_agent = "linknet/0.1";
    bool honor_robots = true;
    std::string corpus_dir;  // empty = live HTTP fetching
};

struct PipelineFlags {
    bool strict_classification = true;
    bool exclude_seed_outlinks = true;  // Table V-style sector counting
    bool prune_seed_outlinks = false;   // additional seed-pruned network outputs
    ReciprocityMethod reciprocity_method = ReciprocityMethod::Arc;
    GiniVariant gini_variant = GiniVariant::Standard;
    bool persist_weighted_matrices = false;
};

// Single-file pipeline configuration; all relative paths resolve against
// the config file's directory.
struct PipelineConfig {
    std::string config_path;
    std::string base_dir;
    std::string raw_text;

    std::vector<std::string> seeds;
    Granularity granularity = Granularity::Domain;
    std::string registry_path;
    std::string suffix_list_path;
    std::string alias_rules_path;  // optional
    std::string output_dir = "out";
    CrawlSettings crawl;
    std::vector<std::string> inlink_providers{"local-index"};
    std::vector<std::string> outlink_providers{"crawl", "local-index"};
    std::vector<ExternalProviderConfig> external_providers;
    PipelineFlags flags;
    int max_results_per_query = 1000;
    std::string webpage_counts_path;  // optional spearman size override
    std::vector<GraphFormat> export_formats{GraphFormat::Gexf, GraphFormat::Dot,
                                            GraphFormat::Edgelist};

    static PipelineConfig load(const std::string& path);

    std::string resolve(const std::string& relative) const;
};

struct Finding {
    enum class Level { Warning, Error };
    Level level = Level::Warning;
    std::string message;
};

struct Diagnostics {
    std::vector<Finding> findings;

    bool has_errors() const;
    std::size_t warning_count() const;
};

// Side-effect-free configuration, registry, alias and capability checks.
Diagnostics validate_config(const PipelineConfig& config);

struct RunSummary {
    std::vector<std::string> warnings;
    std::map<std::string, std::int64_t> counts;  // "<seed-key>.<stage>" -> value
    std::vector<std::string> output_files;       // relative to output_dir
};

// Stages. `analyze` is crawl + harvest + networks + metrics + reports +
// exports + manifest; earlier stage outputs are reused when their content
// digest matches. Every command writes only under config.output_dir.
RunSummary run_crawl(const PipelineConfig& config);
RunSummary run_harvest(const PipelineConfig& config);
RunSummary run_analyze(const PipelineConfig& config);
RunSummary run_export(const PipelineConfig& config);

}  // namespace linknet
