#include "artifacts.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "stochsup/errors.hpp"
#include "stochsup/io.hpp"

namespace stochsup::cli {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << content;
}

std::string sha1_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha1(), nullptr)) {
    throw std::runtime_error("SHA-1 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < length; ++k) {
    out += hex[digest[k] >> 4];
    out += hex[digest[k] & 0xf];
  }
  return out;
}

std::string git_blob_hash(const std::string& content) {
  std::string blob = "blob " + std::to_string(content.size());
  blob += '\0';
  blob += content;
  return sha1_hex(blob);
}

std::string number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  columns_.insert(columns_.begin(), "schema_version");
}

void CsvTable::add_row(std::vector<std::string> cells) {
  cells.insert(cells.begin(), std::to_string(kCsvSchemaVersion));
  if (cells.size() != columns_.size()) throw std::logic_error("CSV row has the wrong number of cells");
  rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  // Cells are ids and numbers; quote anything that could break the format.
  auto cell = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out += ',';
      out += cell(cells[k]);
    }
    out += '\n';
  };
  line(columns_);
  for (const auto& r : rows_) line(r);
  return out;
}

RunRecord::RunRecord(std::string command, json config, fs::path out_dir)
    : command_(std::move(command)), config_(std::move(config)), out_dir_(std::move(out_dir)) {
  fs::create_directories(out_dir_);
}

void RunRecord::add_input(const std::string& role, const fs::path& path) {
  inputs_.push_back({{"role", role}, {"path", fs::absolute(path).string()}, {"hash", git_blob_hash(read_file(path))}});
}

void RunRecord::write_json(const std::string& name, const json& doc) {
  write_text(name, doc.dump(2) + "\n");
}

void RunRecord::write_text(const std::string& name, const std::string& content) {
  write_file(out_dir_ / name, content);
  outputs_[name] = git_blob_hash(content);
}

void RunRecord::finish(double seconds) {
  json manifest{{"schema_version", io::kSchemaVersion},
                {"command", command_},
                {"config", config_},
                {"status", status_},
                {"inputs", inputs_},
                {"outputs", outputs_},
                {"timings", {{"total_seconds", seconds}}}};
  for (const auto& [k, v] : extra_.items()) manifest[k] = v;
  write_file(out_dir_ / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace stochsup::cli
