#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace carlab {

/// Shortest round-trip decimal form ('.' separator, no grouping), capped at
/// 17 significant digits so repeated runs serialize bit-identically.
std::string format_double(double v);
std::string format_long(long v);

/// Column-named string table; cells are pre-formatted so that writing is a
/// pure byte-copy and therefore deterministic.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  Table() = default;
  explicit Table(std::vector<std::string> cols) : columns(std::move(cols)) {}
  void add_row(std::vector<std::string> cells);
};

/// Writes header + rows with '\n' endings; creates parent directories.
void write_csv(const std::filesystem::path& path, const Table& table);

/// Writes raw bytes (used for gnuplot scripts and JSON artifacts).
void write_text(const std::filesystem::path& path, const std::string& text);

std::string read_text(const std::filesystem::path& path);

/// FNV-1a 64-bit digest, hex-encoded; used for artifact fingerprints.
std::uint64_t fnv1a64(const std::string& bytes);
std::string fnv1a64_hex(const std::string& bytes);
std::string file_digest(const std::filesystem::path& path);

} // namespace carlab
