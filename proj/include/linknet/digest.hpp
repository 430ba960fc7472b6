#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace linknet {

// FNV-1a 64-bit content digest, rendered as 16 lowercase hex digits.
// Stable across platforms; used for run manifests and stage caching,
// not for security.
std::uint64_t fnv1a64(std::string_view bytes);
std::string digest_hex(std::string_view bytes);
std::string digest_file(const std::string& path);

}  // namespace linknet
