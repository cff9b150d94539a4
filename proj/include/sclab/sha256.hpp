#pragma once

#include <cstdint>
#include <string>

namespace sclab {

/// SHA-256 digest of a byte string, as a lowercase hex string.
std::string sha256_hex(const std::string& bytes);

/// SHA-256 digest of a file's contents.
std::string sha256_file(const std::string& path);

}  // namespace sclab
