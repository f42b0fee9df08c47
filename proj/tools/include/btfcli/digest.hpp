#pragma once

#include <filesystem>
#include <string>

namespace btfcli {

/// Lowercase hex SHA-256 of a file's bytes. Throws btf::SchemaError when the
/// file cannot be read.
std::string sha256_file(const std::filesystem::path& path);

} // namespace btfcli
