#include "edgeoffload/artifact_io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace edgeoffload {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc())
    throw std::runtime_error("failed to format a floating-point value");
  return std::string(buf, end);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string to_hex(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

std::string ArtifactMeta::header_lines() const {
  std::string out;
  out += "# tool: " + tool + " " + version + "\n";
  out += "# config_hash: " + config_hash + "\n";
  out += "# seed: " + std::to_string(seed) + "\n";
  return out;
}

CsvBuilder::CsvBuilder(const ArtifactMeta& meta, std::vector<std::string> columns)
    : columns_(columns.size()) {
  content_ = meta.header_lines();
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) content_ += ',';
    content_ += columns[i];
  }
  content_ += '\n';
}

void CsvBuilder::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_)
    throw std::logic_error("csv row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) content_ += ',';
    content_ += cells[i];
  }
  content_ += '\n';
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace edgeoffload
