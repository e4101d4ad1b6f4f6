#pragma once

#include <cstdint>
#include <string>

namespace filament::io {

// FIPS 180-4 SHA-256, hex digest. Used for run-manifest and file digests.
std::string sha256_hex(const std::string& data);

}  // namespace filament::io
