#include "linknet/url.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace linknet {

namespace {

std::string ascii_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool is_scheme_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.';
}

// Minimal UTF-8 decoder; invalid sequences raise UrlParseError.
std::vector<std::uint32_t> utf8_decode(const std::string& s) {
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < s.size();) {
        unsigned char c = s[i];
        std::uint32_t cp = 0;
        int extra = 0;
        if (c < 0x80) {
            cp = c;
        } else if ((c & 0xE0) == 0xC0) {
            cp = c & 0x1F;
            extra = 1;
        } else if ((c & 0xF0) == 0xE0) {
            cp = c & 0x0F;
            extra = 2;
        } else if ((c & 0xF8) == 0xF0) {
            cp = c & 0x07;
            extra = 3;
        } else {
            throw UrlParseError("invalid UTF-8 in host: " + s);
        }
        if (i + extra >= s.size()) throw UrlParseError("truncated UTF-8 in host: " + s);
        for (int k = 1; k <= extra; ++k) {
            unsigned char cc = s[i + k];
            if ((cc & 0xC0) != 0x80) throw UrlParseError("invalid UTF-8 in host: " + s);
            cp = (cp << 6) | (cc & 0x3F);
        }
        out.push_back(cp);
        i += 1 + extra;
    }
    return out;
}

// RFC 3492 punycode encoding of one label (already lowercased ASCII-wise).
std::string punycode_encode(const std::vector<std::uint32_t>& input) {
    constexpr std::uint32_t base = 36, tmin = 1, tmax = 26, skew = 38, damp = 700;
    constexpr std::uint32_t initial_bias = 72, initial_n = 128;
    auto adapt = [&](std::uint32_t delta, std::uint32_t numpoints, bool firsttime) {
        delta = firsttime ? delta / damp : delta / 2;
        delta += delta / numpoints;
        std::uint32_t k = 0;
        while (delta > ((base - tmin) * tmax) / 2) {
            delta /= base - tmin;
            k += base;
        }
        return k + (((base - tmin + 1) * delta) / (delta + skew));
    };
    auto digit_char = [](std::uint32_t d) -> char {
        return d < 26 ? static_cast<char>('a' + d) : static_cast<char>('0' + d - 26);
    };

    std::string out;
    std::uint32_t n = initial_n, delta = 0, bias = initial_bias;
    std::uint32_t basic = 0;
    for (auto cp : input) {
        if (cp < 0x80) {
            out += static_cast<char>(cp);
            ++basic;
        }
    }
    std::uint32_t handled = basic;
    if (basic > 0) out += '-';
    while (handled < input.size()) {
        std::uint32_t m = UINT32_MAX;
        for (auto cp : input)
            if (cp >= n && cp < m) m = cp;
        delta += (m - n) * (handled + 1);
        n = m;
        for (auto cp : input) {
            if (cp < n && ++delta == 0)
                throw UrlParseError("punycode overflow");
            if (cp == n) {
                std::uint32_t q = delta;
                for (std::uint32_t k = base;; k += base) {
                    std::uint32_t t = k <= bias ? tmin : (k >= bias + tmax ? tmax : k - bias);
                    if (q < t) break;
                    out += digit_char(t + (q - t) % (base - t));
                    q = (q - t) / (base - t);
                }
                out += digit_char(q);
                bias = adapt(delta, handled + 1, handled == basic);
                delta = 0;
                ++handled;
            }
        }
        ++delta;
        ++n;
    }
    return out;
}

bool valid_host_label(const std::string& label) {
    if (label.empty()) return false;
    for (char c : label) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_'))
            return false;
    }
    return true;
}

// Lowercase the host and punycode-encode any label with non-ASCII bytes.
std::string normalize_host(const std::string& raw_host, const std::string& context) {
    std::string host;
    std::string label;
    auto flush = [&]() {
        bool ascii = std::all_of(label.begin(), label.end(),
                                 [](unsigned char c) { return c < 0x80; });
        std::string encoded;
        if (ascii) {
            encoded = ascii_lower(label);
        } else {
            encoded = "xn--" + punycode_encode(utf8_decode(ascii_lower(label)));
        }
        if (!valid_host_label(encoded))
            throw UrlParseError("no recognizable host in: " + context);
        if (!host.empty()) host += '.';
        host += encoded;
        label.clear();
    };
    for (char c : raw_host) {
        if (c == '.')
            flush();
        else
            label += c;
    }
    flush();
    return host;
}

std::vector<std::string> split_labels(const std::string& host) {
    std::vector<std::string> labels;
    std::string cur;
    for (char c : host) {
        if (c == '.') {
            labels.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    labels.push_back(cur);
    return labels;
}

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isdigit(c);
    });
}

}  // namespace

std::string Url::normalized() const {
    std::string out = scheme + "://" + host;
    if (port) out += ":" + std::to_string(*port);
    out += path.empty() ? "/" : path;
    if (!query.empty()) out += "?" + query;
    return out;
}

Url parse_url(const std::string& raw) {
    if (raw.empty()) throw UrlParseError("empty URL");
    std::string s = raw;
    // Trim surrounding whitespace.
    auto b = s.find_first_not_of(" \t\r\n");
    auto e = s.find_last_not_of(" \t\r\n");
    if (b == std::string::npos) throw UrlParseError("empty URL");
    s = s.substr(b, e - b + 1);

    Url url;
    url.raw = raw;
    url.scheme = "http";

    auto scheme_end = s.find("://");
    if (scheme_end != std::string::npos) {
        std::string scheme = s.substr(0, scheme_end);
        if (scheme.empty() || !std::isalpha(static_cast<unsigned char>(scheme[0])) ||
            !std::all_of(scheme.begin(), scheme.end(), is_scheme_char))
            throw UrlParseError("no recognizable host in: " + raw);
        url.scheme = ascii_lower(scheme);
        s = s.substr(scheme_end + 3);
    }

    // Authority runs to the first '/', '?' or '#'.
    auto authority_end = s.find_first_of("/?#");
    std::string authority = s.substr(0, authority_end);
    std::string rest = authority_end == std::string::npos ? "" : s.substr(authority_end);

    // Strip userinfo.
    auto at = authority.rfind('@');
    if (at != std::string::npos) authority = authority.substr(at + 1);

    // Strip a port, rejecting multi-colon authorities (IPv6 is out of scope).
    auto colon = authority.find(':');
    if (colon != std::string::npos) {
        if (authority.find(':', colon + 1) != std::string::npos)
            throw UrlParseError("no recognizable host in: " + raw);
        std::string port_text = authority.substr(colon + 1);
        authority = authority.substr(0, colon);
        if (!all_digits(port_text))
            throw UrlParseError("no recognizable host in: " + raw);
        unsigned long port = std::stoul(port_text);
        if (port == 0 || port > 65535)
            throw UrlParseError("invalid port in: " + raw);
        url.port = static_cast<std::uint16_t>(port);
    }

    if (authority.empty()) throw UrlParseError("no recognizable host in: " + raw);
    url.host = normalize_host(authority, raw);

    // Split path / query; drop the fragment.
    auto hash = rest.find('#');
    if (hash != std::string::npos) rest = rest.substr(0, hash);
    auto qmark = rest.find('?');
    if (qmark != std::string::npos) {
        url.query = rest.substr(qmark + 1);
        rest = rest.substr(0, qmark);
    }
    url.path = rest.empty() ? "/" : rest;
    return url;
}

const char* to_string(Granularity g) {
    return g == Granularity::Domain ? "domain" : "subdomain";
}

Granularity granularity_from_string(const std::string& s) {
    if (s == "domain") return Granularity::Domain;
    if (s == "subdomain") return Granularity::Subdomain;
    throw ConfigError("unknown granularity: " + s);
}

PublicSuffixList PublicSuffixList::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open public-suffix table: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str());
}

PublicSuffixList PublicSuffixList::from_string(const std::string& text) {
    PublicSuffixList psl;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto comment = line.find("//");
        if (comment != std::string::npos) line = line.substr(0, comment);
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        auto e = line.find_last_not_of(" \t\r");
        line = ascii_lower(line.substr(b, e - b + 1));

        Rule rule;
        if (line[0] == '!') {
            rule.exception = true;
            line = line.substr(1);
        }
        rule.labels = split_labels(line);
        std::reverse(rule.labels.begin(), rule.labels.end());
        if (!rule.labels.empty() && !rule.labels.back().empty())
            psl.rules_.push_back(std::move(rule));
    }
    return psl;
}

std::string PublicSuffixList::public_suffix(const std::string& host) const {
    auto labels = split_labels(host);
    std::reverse(labels.begin(), labels.end());  // TLD first

    std::size_t best_len = 0;
    bool best_exception = false;
    bool matched = false;
    for (const auto& rule : rules_) {
        if (rule.labels.size() > labels.size()) continue;
        bool ok = true;
        for (std::size_t i = 0; i < rule.labels.size(); ++i) {
            if (rule.labels[i] != "*" && rule.labels[i] != labels[i]) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        // Exception rules prevail over anything else; otherwise longest wins.
        if (rule.exception) {
            if (!best_exception || rule.labels.size() > best_len) {
                best_len = rule.labels.size();
                best_exception = true;
            }
        } else if (!best_exception && rule.labels.size() > best_len) {
            best_len = rule.labels.size();
        }
        matched = true;
    }

    std::size_t suffix_len;
    if (!matched) {
        suffix_len = 1;  // implicit "*" rule
    } else if (best_exception) {
        suffix_len = best_len - 1;  // exception: drop the leftmost label
    } else {
        suffix_len = best_len;
    }

    std::string out;
    for (std::size_t i = suffix_len; i-- > 0;) {
        if (!out.empty()) out += '.';
        out += labels[i];
    }
    return out;
}

std::string PublicSuffixList::registrable_domain(const std::string& host) const {
    std::string suffix = public_suffix(host);
    if (suffix == host)
        throw ReductionError("host is a public suffix: " + host);
    if (suffix.empty() || host.size() <= suffix.size() ||
        host.compare(host.size() - suffix.size(), suffix.size(), suffix) != 0 ||
        host[host.size() - suffix.size() - 1] != '.')
        throw ReductionError("host does not sit under a public suffix: " + host);
    std::string head = host.substr(0, host.size() - suffix.size() - 1);
    auto dot = head.rfind('.');
    std::string label = dot == std::string::npos ? head : head.substr(dot + 1);
    return label + "." + suffix;
}

SiteKey reduce_host(const std::string& host, Granularity granularity,
                    const PublicSuffixList& suffixes) {
    if (host.empty()) throw ReductionError("empty host");
    auto labels = split_labels(host);
    if (all_digits(labels.back()))
        throw ReductionError("IP-address host has no registrable domain: " + host);

    // "www." is presentation noise, not identity.
    std::string h = host;
    if (labels.size() > 1 && labels.front() == "www")
        h = host.substr(4);

    std::string registrable = suffixes.registrable_domain(h);
    if (granularity == Granularity::Domain) return SiteKey{registrable, granularity};
    return SiteKey{h, granularity};
}

SiteKey reduce_to_site_key(const Url& url, Granularity granularity,
                           const PublicSuffixList& suffixes) {
    return reduce_host(url.host, granularity, suffixes);
}

std::vector<std::string> rank_alias_candidates(
    const std::vector<std::string>& aliases,
    const std::map<std::string, AliasEvidence>& evidence) {
    bool any = false;
    for (const auto& a : aliases) {
        auto it = evidence.find(a);
        if (it != evidence.end() && it->second.has_any()) any = true;
    }
    if (!any)
        throw ArgumentError("no evidence for any alias; choose the canonical manually");

    // Higher is better for counts; missing ranks after any present value.
    auto count_rank = [](const std::optional<std::int64_t>& v) {
        return v ? std::make_pair(0, -*v) : std::make_pair(1, std::int64_t{0});
    };
    // Earlier is better for first-seen dates (ISO strings compare correctly).
    auto date_rank = [](const std::optional<std::string>& v) {
        return v ? std::make_pair(0, *v) : std::make_pair(1, std::string{});
    };

    std::vector<std::string> order = aliases;
    std::stable_sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
        static const AliasEvidence none{};
        auto ea_it = evidence.find(a);
        auto eb_it = evidence.find(b);
        const AliasEvidence& ea = ea_it == evidence.end() ? none : ea_it->second;
        const AliasEvidence& eb = eb_it == evidence.end() ? none : eb_it->second;
        auto ka = std::make_tuple(count_rank(ea.pages), count_rank(ea.inlinks),
                                  count_rank(ea.outlinks), date_rank(ea.first_seen), a);
        auto kb = std::make_tuple(count_rank(eb.pages), count_rank(eb.inlinks),
                                  count_rank(eb.outlinks), date_rank(eb.first_seen), b);
        return ka < kb;
    });
    return order;
}

AliasResolver::AliasResolver(std::vector<AliasRule> rules) : rules_(std::move(rules)) {
    for (const auto& rule : rules_) {
        if (std::find(rule.aliases.begin(), rule.aliases.end(), rule.canonical) ==
            rule.aliases.end())
            throw ConfigError("alias rule canonical '" + rule.canonical +
                              "' is not among its aliases");
        for (const auto& alias : rule.aliases) {
            auto [it, inserted] = canonical_by_alias_.emplace(alias, rule.canonical);
            if (!inserted)
                throw ConfigError("alias '" + alias + "' appears in two rules");
        }
    }
}

AliasResolver AliasResolver::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open alias-rule file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("invalid alias-rule JSON in " + path + ": " + e.what());
    }
    if (!doc.is_array()) throw ConfigError("alias-rule file must be a JSON array: " + path);

    std::vector<AliasRule> rules;
    for (const auto& entry : doc) {
        AliasRule rule;
        for (const auto& a : entry.at("aliases"))
            rule.aliases.push_back(a.get<std::string>());
        rule.canonical = entry.at("canonical").get<std::string>();
        if (entry.contains("evidence")) {
            for (auto it = entry["evidence"].begin(); it != entry["evidence"].end(); ++it) {
                AliasEvidence ev;
                const auto& v = it.value();
                if (v.contains("pages")) ev.pages = v["pages"].get<std::int64_t>();
                if (v.contains("inlinks")) ev.inlinks = v["inlinks"].get<std::int64_t>();
                if (v.contains("outlinks")) ev.outlinks = v["outlinks"].get<std::int64_t>();
                if (v.contains("first_seen")) ev.first_seen = v["first_seen"].get<std::string>();
                if (ev.pages && *ev.pages < 0)
                    throw ConfigError("negative page count in alias evidence");
                if (ev.inlinks && *ev.inlinks < 0)
                    throw ConfigError("negative inlink count in alias evidence");
                if (ev.outlinks && *ev.outlinks < 0)
                    throw ConfigError("negative outlink count in alias evidence");
                rule.evidence[it.key()] = ev;
            }
        }
        rules.push_back(std::move(rule));
    }
    return AliasResolver(std::move(rules));
}

const std::string& AliasResolver::canonicalize(const std::string& key) const {
    auto it = canonical_by_alias_.find(key);
    return it == canonical_by_alias_.end() ? key : it->second;
}

SiteKey AliasResolver::canonicalize(const SiteKey& key) const {
    return SiteKey{canonicalize(key.value), key.granularity};
}

std::string percent_encode(const std::string& text) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : text) {
        if (std::isalnum(c) || c == '.' || c == '_' || c == '~' || c == '-') {
            out += static_cast<char>(c);
        } else {
            out += '%';
            out += hex[c >> 4];
            out += hex[c & 0xF];
        }
    }
    return out;
}

}  // namespace linknet
