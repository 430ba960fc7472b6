#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "linknet/url.hpp"

namespace linknet {

// href targets of anchor elements, resolved against `base`, deduplicated
// preserving first-occurrence order. Non-http(s) schemes are dropped and
// unparseable fragments are skipped; malformed HTML is tolerated.
std::vector<Url> extract_anchors(std::string_view html, const Url& base);

// RFC 3986-style reference resolution (dot segments removed). Returns the
// absolute URL text; throws UrlParseError for unusable references.
std::string resolve_reference(const std::string& reference, const Url& base);

}  // namespace linknet
