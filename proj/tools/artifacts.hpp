#ifndef STOCHSUP_TOOLS_ARTIFACTS_HPP
#define STOCHSUP_TOOLS_ARTIFACTS_HPP

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace stochsup::cli {

using nlohmann::json;
namespace fs = std::filesystem;

// Bumped whenever a CSV column is added, removed or reordered.
inline constexpr int kCsvSchemaVersion = 1;

std::string read_file(const fs::path& path);
void write_file(const fs::path& path, const std::string& content);

// Hex SHA-1 of the bytes.
std::string sha1_hex(const std::string& bytes);
// Git blob id: sha1("blob <size>\0" + content).
std::string git_blob_hash(const std::string& content);

// Shortest round-trip decimal; "inf", "-inf" and "nan" otherwise.
std::string number(double value);

/// Fixed-column CSV. Every row starts with the schema version.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);
  void add_row(std::vector<std::string> cells);
  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// Collects what a command read and wrote. Result files are written through
/// it so their hashes end up in manifest.json; the manifest itself carries
/// timings and is not part of replay comparison.
class RunRecord {
 public:
  RunRecord(std::string command, json config, fs::path out_dir);

  void add_input(const std::string& role, const fs::path& path);
  void write_json(const std::string& name, const json& doc);
  void write_text(const std::string& name, const std::string& content);

  json& extra() { return extra_; }
  void set_status(std::string status) { status_ = std::move(status); }
  const fs::path& out_dir() const { return out_dir_; }

  // Writes manifest.json.
  void finish(double seconds);

 private:
  std::string command_;
  json config_;
  fs::path out_dir_;
  json inputs_ = json::array();
  json outputs_ = json::object();
  json extra_ = json::object();
  std::string status_ = "ok";
};

}  // namespace stochsup::cli

#endif
