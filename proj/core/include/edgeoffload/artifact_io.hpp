#ifndef EDGEOFFLOAD_ARTIFACT_IO_HPP_
#define EDGEOFFLOAD_ARTIFACT_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace edgeoffload {

// Shortest round-trip decimal form, locale-free; integers print bare.
std::string format_double(double v);

std::uint64_t fnv1a64(std::string_view bytes);
std::string to_hex(std::uint64_t v);

// Leading comment block stamped on every artifact. Deterministic for a fixed
// config: the hash covers the canonicalized config text, never wall time.
struct ArtifactMeta {
  std::string tool;
  std::string version;
  std::string config_hash;
  std::uint64_t seed = 0;

  std::string header_lines() const;
};

// Accumulates comma-separated rows with LF endings; content is written in one
// shot so failed runs never leave a half-written artifact behind.
class CsvBuilder {
 public:
  CsvBuilder(const ArtifactMeta& meta, std::vector<std::string> columns);

  void add_row(std::vector<std::string> cells);
  const std::string& content() const { return content_; }

 private:
  std::string content_;
  std::size_t columns_;
};

void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace edgeoffload

#endif  // EDGEOFFLOAD_ARTIFACT_IO_HPP_
