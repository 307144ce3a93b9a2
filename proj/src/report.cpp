#include "stabforge/report.hpp"
#include "stabforge/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stabforge {

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Skipped: return "skipped";
  }
  return "unknown";
}

std::uint64_t params_hash(const std::map<std::string, std::string>& params) {
  std::uint64_t h = 1469598103934665603ull;
  auto feed = [&](std::string_view s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 1099511628211ull;
    }
  };
  for (const auto& [k, v] : params) {
    feed(k);
    feed("=");
    feed(v);
    feed("\n");
  }
  return h;
}

std::string to_json_line(const ReportRecord& rec) {
  if (rec.status == Status::Fail && rec.witness.empty())
    throw std::logic_error("failing record " + rec.id + " has no witness");
  nlohmann::ordered_json j;
  j["id"] = rec.id;
  j["status"] = to_string(rec.status);
  j["witness"] = rec.witness.empty() ? nlohmann::ordered_json() : nlohmann::ordered_json(rec.witness);
  if (!rec.detail.empty()) j["detail"] = rec.detail;
  nlohmann::ordered_json values = nlohmann::ordered_json::object();
  nlohmann::ordered_json tols = nlohmann::ordered_json::object();
  for (const auto& m : rec.values) {
    values[m.name] = m.value;
    if (m.tolerance) tols[m.name] = *m.tolerance;
  }
  j["values"] = values;
  j["tolerances"] = tols;
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(params_hash(rec.params)));
  nlohmann::ordered_json prov;
  prov["module"] = rec.module;
  prov["operation"] = rec.operation;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : rec.params) params[k] = v;
  prov["params"] = params;
  prov["params_hash"] = hash;
  j["provenance"] = prov;
  return j.dump();
}

std::string render_report(std::vector<ReportRecord> records) {
  std::stable_sort(records.begin(), records.end(), [](const ReportRecord& a, const ReportRecord& b) { return a.id < b.id; });
  std::string out;
  for (const auto& r : records) out += to_json_line(r) + "\n";
  return out;
}

int exit_code(const std::vector<ReportRecord>& records) {
  for (const auto& r : records)
    if (r.status == Status::Fail) return 1;
  return 0;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool valid_key(const std::string& k) {
  if (k.empty() || k.front() == '.' || k.back() == '.') return false;
  return std::all_of(k.begin(), k.end(), [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.' || ch == '-';
  });
}

}  // namespace

Config Config::parse(std::string_view text) {
  Config cfg;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::size_t hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorCode::ConfigInvalid, "unterminated section header", where);
      section = trim(line.substr(1, line.size() - 2));
      if (!section.empty() && !valid_key(section)) throw Error(ErrorCode::ConfigInvalid, "bad section name", where);
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::ConfigInvalid, "expected key = value", where);
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!section.empty()) key = section + "." + key;
    if (!valid_key(key)) throw Error(ErrorCode::ConfigInvalid, "bad key '" + key + "'", where);
    if (cfg.entries_.count(key)) throw Error(ErrorCode::ConfigInvalid, "duplicate key '" + key + "'", where);
    cfg.entries_[key] = value;
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IOFailure, "cannot open config", path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse(buf.str());
}

std::string Config::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw Error(ErrorCode::ConfigInvalid, "missing key '" + key + "'", key);
  return it->second;
}

std::string Config::get_or(const std::string& key, const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

}  // namespace stabforge
