#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace tailwave {

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t x);

/// "# tailwave <version> config_hash=<hex>"
std::string csv_header_line(const std::string& config_hash);

/// Shortest round-trip decimal ("nan"/"inf"/"-inf" for non-finite values).
std::string fmt_double(double x);

/// Quotes a cell when it contains a comma, quote or newline.
std::string csv_cell(std::string_view s);

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells);

}  // namespace tailwave
