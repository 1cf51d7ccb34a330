#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace flatfront {

// SHA-256 digest of a byte string, lowercase hex.
std::string sha256_hex(const std::string& data);
std::string sha256_file_hex(const std::filesystem::path& path);

}  // namespace flatfront
