#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "linknet/errors.hpp"

namespace linknet {

// A parsed absolute URL. Host is always lowercase; non-ASCII host labels
// are stored punycode-encoded so equality is byte equality.
struct Url {
    std::string scheme;                // lowercase; defaults to "http"
    std::string host;                  // lowercase, non-empty
    std::optional<std::uint16_t> port;
    std::string path;                  // begins with '/', case preserved
    std::string query;                 // without '?', may be empty
    std::string raw;                   // original input text

    // Canonical textual form: scheme://host[:port]/path[?query].
    std::string normalized() const;

    bool operator==(const Url& other) const {
        return scheme == other.scheme && host == other.host && port == other.port &&
               path == other.path && query == other.query;
    }
};

// Parse and normalize a URL. The scheme defaults to "http" when absent,
// the fragment is dropped, userinfo is stripped, and the host is
// lowercased and punycode-encoded. Throws UrlParseError when no
// recognizable host is present.
Url parse_url(const std::string& raw);

enum class Granularity { Domain, Subdomain };

const char* to_string(Granularity g);
Granularity granularity_from_string(const std::string& s);

// Canonical (sub)domain identity of an organization's web presence.
// `value` carries no scheme, path, port or userinfo.
struct SiteKey {
    std::string value;
    Granularity granularity = Granularity::Domain;

    auto operator<=>(const SiteKey&) const = default;
};

// Public-suffix table: plain text, one suffix per line, "!"-prefixed
// exceptions and "*." wildcards honored, "//" comments ignored.
class PublicSuffixList {
  public:
    PublicSuffixList() = default;

    static PublicSuffixList from_file(const std::string& path);
    static PublicSuffixList from_string(const std::string& text);

    // Longest matching public suffix for `host`, or the last label when
    // no rule matches (the implicit "*" rule).
    std::string public_suffix(const std::string& host) const;

    // The public suffix plus one label. Throws ReductionError when the
    // host is itself a public suffix or has no label to spare.
    std::string registrable_domain(const std::string& host) const;

    bool empty() const { return rules_.empty(); }
    std::size_t rule_count() const { return rules_.size(); }

  private:
    struct Rule {
        std::vector<std::string> labels;  // stored reversed (TLD first)
        bool exception = false;
    };
    std::vector<Rule> rules_;
};

// Reduce a URL to its site key. Domain granularity yields the registrable
// domain; Subdomain granularity yields the full host (with a leading
// "www." label stripped in both cases). Deterministic; throws
// ReductionError for public-suffix hosts and IP-literal hosts.
SiteKey reduce_to_site_key(const Url& url, Granularity granularity,
                           const PublicSuffixList& suffixes);
SiteKey reduce_host(const std::string& host, Granularity granularity,
                    const PublicSuffixList& suffixes);

// Optional per-alias evidence backing an alias choice.
struct AliasEvidence {
    std::optional<std::int64_t> pages;
    std::optional<std::int64_t> inlinks;
    std::optional<std::int64_t> outlinks;
    std::optional<std::string> first_seen;  // ISO date, earliest wins

    bool has_any() const {
        return pages || inlinks || outlinks || first_seen;
    }
};

// One organization with several domain names, resolved to a canonical key.
struct AliasRule {
    std::vector<std::string> aliases;
    std::string canonical;  // must be a member of aliases
    std::map<std::string, AliasEvidence> evidence;
};

// Rank aliases by (pages desc, inlinks desc, outlinks desc, earliest
// first-seen); a missing field ranks last within its tier and names break
// the final tie. The first element is the suggested canonical. Throws
// ArgumentError when no alias carries any evidence.
std::vector<std::string> rank_alias_candidates(
    const std::vector<std::string>& aliases,
    const std::map<std::string, AliasEvidence>& evidence);

// Validated alias rule set; total and idempotent over site keys.
class AliasResolver {
  public:
    AliasResolver() = default;
    // Throws ConfigError when a key appears in two rules or a canonical
    // key is not among its own aliases.
    explicit AliasResolver(std::vector<AliasRule> rules);

    static AliasResolver from_file(const std::string& path);

    const std::string& canonicalize(const std::string& key) const;
    SiteKey canonicalize(const SiteKey& key) const;

    const std::vector<AliasRule>& rules() const { return rules_; }

  private:
    std::vector<AliasRule> rules_;
    std::map<std::string, std::string> canonical_by_alias_;
};

// Percent-encode every byte outside [A-Za-z0-9._~-] as %XX (uppercase hex).
std::string percent_encode(const std::string& text);

}  // namespace linknet
