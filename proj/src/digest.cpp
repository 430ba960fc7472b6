#include "linknet/digest.hpp"

#include <fstream>
#include <sstream>

#include "linknet/errors.hpp"

namespace linknet {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string digest_hex(std::string_view bytes) {
    static const char* hex = "0123456789abcdef";
    std::uint64_t value = fnv1a64(bytes);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = hex[value & 0xF];
        value >>= 4;
    }
    return out;
}

std::string digest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot digest missing file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return digest_hex(buf.str());
}

}  // namespace linknet
