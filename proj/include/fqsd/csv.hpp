#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fqsd {

/// 17 significant digits: enough for exact double round-trips and
/// byte-identical reruns.
std::string format_value(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Serialize with comma separators and a trailing newline.
std::string to_csv(const CsvTable& table);

/// Write text to path, creating parent directories; returns the FNV-1a 64
/// hash of the bytes written (hex string, for the run manifest).
std::string write_text_file(const std::filesystem::path& path,
                            std::string_view text);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace fqsd
