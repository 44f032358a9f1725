#pragma once

#include <filesystem>
#include <string>

namespace anisopt {

/// Shortest representation with 17 significant digits (round-trip exact).
std::string fmt17(double v);

/// Write `content` atomically: temp file in the same directory, then rename.
void atomic_write(const std::filesystem::path& path, const std::string& content);

/// FNV-1a 64-bit over a string, hex-encoded; used as the input content hash.
std::string content_hash(const std::string& text);

}  // namespace anisopt
