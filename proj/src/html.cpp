#include "linknet/html.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace linknet {

namespace {

char lower(char c) {
    return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(),
                      [](char x, char y) { return lower(x) == lower(y); });
}

// Decode the handful of entities that show up inside href values.
std::string decode_entities(std::string_view s) {
    std::string out;
    for (std::size_t i = 0; i < s.size();) {
        if (s[i] != '&') {
            out += s[i++];
            continue;
        }
        auto semi = s.find(';', i);
        if (semi == std::string_view::npos || semi - i > 8) {
            out += s[i++];
            continue;
        }
        std::string_view name = s.substr(i + 1, semi - i - 1);
        if (iequals(name, "amp"))
            out += '&';
        else if (iequals(name, "lt"))
            out += '<';
        else if (iequals(name, "gt"))
            out += '>';
        else if (iequals(name, "quot"))
            out += '"';
        else if (iequals(name, "#39") || iequals(name, "apos"))
            out += '\'';
        else if (!name.empty() && name[0] == '#') {
            long code = 0;
            bool ok = true;
            if (name.size() > 1 && (name[1] == 'x' || name[1] == 'X')) {
                for (char c : name.substr(2)) {
                    if (!std::isxdigit(static_cast<unsigned char>(c))) { ok = false; break; }
                    code = code * 16 + (std::isdigit(static_cast<unsigned char>(c))
                                            ? c - '0'
                                            : lower(c) - 'a' + 10);
                }
            } else {
                for (char c : name.substr(1)) {
                    if (!std::isdigit(static_cast<unsigned char>(c))) { ok = false; break; }
                    code = code * 10 + (c - '0');
                }
            }
            if (ok && code > 0 && code < 128) {
                out += static_cast<char>(code);
            } else {
                out += s.substr(i, semi - i + 1);
            }
        } else {
            out += s.substr(i, semi - i + 1);
        }
        i = semi + 1;
    }
    return out;
}

// Remove "./" and "../" segments per RFC 3986 §5.2.4.
std::string remove_dot_segments(const std::string& path) {
    std::string input = path;
    std::string output;
    while (!input.empty()) {
        if (input.rfind("../", 0) == 0) {
            input = input.substr(3);
        } else if (input.rfind("./", 0) == 0) {
            input = input.substr(2);
        } else if (input.rfind("/./", 0) == 0) {
            input = "/" + input.substr(3);
        } else if (input == "/.") {
            input = "/";
        } else if (input.rfind("/../", 0) == 0 || input == "/..") {
            input = input == "/.." ? "/" : "/" + input.substr(4);
            auto slash = output.rfind('/');
            output = slash == std::string::npos ? "" : output.substr(0, slash);
        } else if (input == "." || input == "..") {
            input.clear();
        } else {
            std::size_t from = input[0] == '/' ? 1 : 0;
            auto slash = input.find('/', from);
            output += input.substr(0, slash == std::string::npos ? input.size() : slash);
            input = slash == std::string::npos ? "" : input.substr(slash);
        }
    }
    return output;
}

std::string find_attr(std::string_view tag, std::string_view name) {
    for (std::size_t i = 0; i + name.size() < tag.size(); ++i) {
        if (!iequals(tag.substr(i, name.size()), name)) continue;
        // Must be at an attribute boundary.
        if (i > 0 && (std::isalnum(static_cast<unsigned char>(tag[i - 1])) || tag[i - 1] == '-'))
            continue;
        std::size_t j = i + name.size();
        while (j < tag.size() && std::isspace(static_cast<unsigned char>(tag[j]))) ++j;
        if (j >= tag.size() || tag[j] != '=') continue;
        ++j;
        while (j < tag.size() && std::isspace(static_cast<unsigned char>(tag[j]))) ++j;
        if (j >= tag.size()) return {};
        if (tag[j] == '"' || tag[j] == '\'') {
            char quote = tag[j++];
            auto end = tag.find(quote, j);
            if (end == std::string_view::npos) return {};
            return std::string(tag.substr(j, end - j));
        }
        auto end = j;
        while (end < tag.size() && !std::isspace(static_cast<unsigned char>(tag[end])) &&
               tag[end] != '>')
            ++end;
        return std::string(tag.substr(j, end - j));
    }
    return {};
}

}  // namespace

std::string resolve_reference(const std::string& reference, const Url& base) {
    std::string ref = reference;
    // Trim whitespace and embedded newlines.
    std::string cleaned;
    for (char c : ref)
        if (c != '\n' && c != '\r' && c != '\t') cleaned += c;
    ref = cleaned;
    auto b = ref.find_first_not_of(' ');
    auto e = ref.find_last_not_of(' ');
    ref = b == std::string::npos ? "" : ref.substr(b, e - b + 1);

    if (ref.empty()) return base.normalized();

    auto colon = ref.find(':');
    auto slash = ref.find('/');
    bool has_scheme = colon != std::string::npos && (slash == std::string::npos || colon < slash);
    if (has_scheme) return ref;

    std::string origin = base.scheme + "://" + base.host;
    if (base.port) origin += ":" + std::to_string(*base.port);

    if (ref.rfind("//", 0) == 0) return base.scheme + ":" + ref;
    if (ref[0] == '/') return origin + remove_dot_segments(ref);
    if (ref[0] == '?') {
        std::string path = base.path.empty() ? "/" : base.path;
        return origin + path + ref;
    }
    if (ref[0] == '#') return base.normalized();

    std::string dir = base.path.empty() ? "/" : base.path;
    auto last_slash = dir.rfind('/');
    dir = last_slash == std::string::npos ? "/" : dir.substr(0, last_slash + 1);
    return origin + remove_dot_segments(dir + ref);
}

std::vector<Url> extract_anchors(std::string_view html, const Url& base) {
    std::vector<Url> out;
    std::set<std::string> seen;

    for (std::size_t i = 0; i < html.size();) {
        if (html[i] != '<') {
            ++i;
            continue;
        }
        // Skip comments wholesale.
        if (html.substr(i, 4) == "<!--") {
            auto end = html.find("-->", i + 4);
            i = end == std::string_view::npos ? html.size() : end + 3;
            continue;
        }
        // Anchor open tag: "<a" followed by whitespace or '>'.
        if (i + 2 < html.size() && lower(html[i + 1]) == 'a' &&
            (std::isspace(static_cast<unsigned char>(html[i + 2])) || html[i + 2] == '>')) {
            auto close = html.find('>', i);
            if (close == std::string_view::npos) break;
            std::string_view tag = html.substr(i, close - i + 1);
            std::string href = decode_entities(find_attr(tag, "href"));
            i = close + 1;
            if (href.empty()) continue;
            // Filter schemes on the raw reference: "mailto:" and friends
            // must not survive into relative resolution.
            auto colon = href.find(':');
            auto slash = href.find('/');
            if (colon != std::string_view::npos &&
                (slash == std::string_view::npos || colon < slash)) {
                std::string scheme;
                for (char c : href.substr(0, colon)) scheme += lower(c);
                if (scheme != "http" && scheme != "https") continue;
            }
            try {
                std::string absolute = resolve_reference(href, base);
                Url url = parse_url(absolute);
                if (url.scheme != "http" && url.scheme != "https") continue;
                if (seen.insert(url.normalized()).second) out.push_back(std::move(url));
            } catch (const UrlParseError&) {
                // Unparseable fragment; skip.
            }
            continue;
        }
        auto close = html.find('>', i);
        i = close == std::string_view::npos ? html.size() : close + 1;
    }
    return out;
}

}  // namespace linknet
