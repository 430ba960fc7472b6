#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "linknet/errors.hpp"
#include "linknet/manifest.hpp"
#include "linknet/pipeline.hpp"

namespace {

// Exit codes: 0 ok, 1 validation, 2 runtime, 3 warnings escalated by --strict.
constexpr int kOk = 0;
constexpr int kValidationFailure = 1;
constexpr int kRuntimeFailure = 2;
constexpr int kEscalatedWarnings = 3;

void print_summary(const linknet::RunSummary& summary) {
    for (const auto& [key, value] : summary.counts)
        std::printf("%s = %lld\n", key.c_str(), static_cast<long long>(value));
    for (const auto& warning : summary.warnings)
        std::printf("warning: %s\n", warning.c_str());
}

struct CrawlOverrides {
    std::vector<std::string> seeds;
    int depth = -1;
    std::string corpus_dir;
    std::int64_t delay_ms = -1;
};

int run_command(const std::string& command, const std::string& config_path,
                const std::string& out_override, bool strict,
                const CrawlOverrides& overrides) {
    linknet::PipelineConfig config;
    try {
        config = linknet::PipelineConfig::load(config_path);
    } catch (const linknet::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kValidationFailure;
    }
    if (!out_override.empty()) config.output_dir = out_override;
    if (!overrides.seeds.empty()) config.seeds = overrides.seeds;
    if (overrides.depth >= 0) config.crawl.max_depth = overrides.depth;
    if (!overrides.corpus_dir.empty()) config.crawl.corpus_dir = overrides.corpus_dir;
    if (overrides.delay_ms >= 0) config.crawl.per_host_delay_ms = overrides.delay_ms;

    linknet::Diagnostics diagnostics = linknet::validate_config(config);
    for (const auto& finding : diagnostics.findings)
        std::fprintf(stderr, "%s: %s\n",
                     finding.level == linknet::Finding::Level::Error ? "error" : "warning",
                     finding.message.c_str());
    if (command == "validate") {
        std::printf("%zu finding(s), %zu warning(s)\n", diagnostics.findings.size(),
                    diagnostics.warning_count());
        if (diagnostics.has_errors()) return kValidationFailure;
        if (strict && diagnostics.warning_count() > 0) return kEscalatedWarnings;
        return kOk;
    }
    if (diagnostics.has_errors()) return kValidationFailure;

    try {
        linknet::RunSummary summary;
        if (command == "crawl") {
            summary = linknet::run_crawl(config);
        } else if (command == "harvest") {
            summary = linknet::run_harvest(config);
        } else if (command == "analyze") {
            summary = linknet::run_analyze(config);
        } else if (command == "export") {
            summary = linknet::run_export(config);
        }
        print_summary(summary);
        bool warned = !summary.warnings.empty() || diagnostics.warning_count() > 0;
        if (strict && warned) return kEscalatedWarnings;
        return kOk;
    } catch (const linknet::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kValidationFailure;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kRuntimeFailure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"linknet — webometric interlinking network toolkit"};
    app.set_version_flag("--version", linknet::kToolkitVersion);

    std::string config_path;
    std::string out_override;
    bool strict = false;
    app.add_option("--config", config_path, "Pipeline configuration JSON")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--out", out_override, "Override the configured output directory");
    app.add_flag("--strict", strict, "Escalate warnings to exit code 3");

    app.add_subcommand("validate", "Check config, registry, aliases and capabilities");
    auto* crawl = app.add_subcommand(
        "crawl", "Crawl seeds and member sites, build the local index");
    app.add_subcommand("harvest", "Build the in- and out-link datasets");
    app.add_subcommand("analyze", "Full pipeline: networks, metrics, tables, exports");
    app.add_subcommand("export", "Regenerate graph exports");
    app.require_subcommand(1);

    CrawlOverrides overrides;
    crawl->add_option("--seed", overrides.seeds, "Seed URL(s), overriding the config");
    crawl->add_option("--depth", overrides.depth, "Crawl depth override");
    crawl->add_option("--corpus", overrides.corpus_dir, "Fixture corpus directory override");
    crawl->add_option("--delay", overrides.delay_ms, "Per-host delay override (ms)");

    CLI11_PARSE(app, argc, argv);

    return run_command(app.get_subcommands().front()->get_name(), config_path, out_override,
                       strict, overrides);
}
