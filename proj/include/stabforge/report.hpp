#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stabforge {

enum class Status { Pass, Fail, Skipped };

std::string to_string(Status s);

struct Measurement {
  std::string name;
  double value = 0.0;
  std::optional<double> tolerance;
};

struct ReportRecord {
  std::string id;
  Status status = Status::Pass;
  std::string witness;
  std::string detail;  // optional free-form outcome, e.g. an end classification
  std::vector<Measurement> values;
  std::string module;
  std::string operation;
  std::map<std::string, std::string> params;
};

/// 64-bit FNV-1a of the sorted "key=value\n" lines.
std::uint64_t params_hash(const std::map<std::string, std::string>& params);

/// One JSON object per line. Throws std::logic_error for a failing record
/// without a witness.
std::string to_json_line(const ReportRecord& rec);

/// Sorts by id and joins the JSON lines.
std::string render_report(std::vector<ReportRecord> records);

/// 0 when every non-skipped record passes, 1 otherwise.
int exit_code(const std::vector<ReportRecord>& records);

/// Flat `key = value` text. `[section]` lines prefix the keys that follow
/// with `section.`; `#` starts a comment.
class Config {
 public:
  static Config parse(std::string_view text);
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::map<std::string, std::string>& entries() const { return entries_; }
  void set(const std::string& key, const std::string& value) { entries_[key] = value; }

  std::string get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace stabforge
