#pragma once

#include <string>

namespace accsev {

// SHA-256 hex digest of a byte string / file contents.
std::string sha256_hex(const std::string& data);
std::string sha256_file_hex(const std::string& path);

}  // namespace accsev
