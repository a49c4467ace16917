#pragma once

#include <string>
#include <string_view>

namespace apet {

// Lower-case hex SHA-256 of the given bytes.
std::string sha256_hex(std::string_view bytes);

// SHA-256 of a whole file; throws apet::Error if it cannot be read.
std::string file_sha256(const std::string& path);

}  // namespace apet
