#include "gmt/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace gmt {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError(what + ": empty value");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE) throw ConfigError(what + ": not a number: '" + t + "'");
  return v;
}

}  // namespace

const std::string* ConfigSection::find(const std::string& key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

void ConfigSection::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries.emplace_back(key, value);
}

std::string ConfigSection::text(const std::string& key) const {
  const std::string* v = find(key);
  if (!v) throw ConfigError("[" + name + "]: missing key '" + key + "'");
  return *v;
}

std::string ConfigSection::text(const std::string& key, const std::string& fallback) const {
  const std::string* v = find(key);
  return v ? *v : fallback;
}

double ConfigSection::number(const std::string& key) const { return parse_double(text(key), "[" + name + "] " + key); }

double ConfigSection::number(const std::string& key, double fallback) const {
  return find(key) ? number(key) : fallback;
}

long long ConfigSection::integer(const std::string& key) const {
  const std::string t = trim(text(key));
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
    throw ConfigError("[" + name + "] " + key + ": not an integer: '" + t + "'");
  }
  return v;
}

long long ConfigSection::integer(const std::string& key, long long fallback) const {
  return find(key) ? integer(key) : fallback;
}

bool ConfigSection::flag(const std::string& key, bool fallback) const {
  const std::string* v = find(key);
  if (!v) return fallback;
  const std::string t = trim(*v);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("[" + name + "] " + key + ": not a boolean: '" + t + "'");
}

std::vector<double> ConfigSection::numbers(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(text(key));
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(parse_double(cell, "[" + name + "] " + key));
  if (out.empty()) throw ConfigError("[" + name + "] " + key + ": empty list");
  return out;
}

std::vector<double> ConfigSection::numbers(const std::string& key, const std::vector<double>& fallback) const {
  return find(key) ? numbers(key) : fallback;
}

Vector ConfigSection::vector(const std::string& key) const {
  const auto v = numbers(key);
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Config Config::parse(std::istream& in, const std::string& source) {
  Config config;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    const std::string where = source + ":" + std::to_string(lineno);
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(where + ": malformed section header");
      config.add(trim(t.substr(1, t.size() - 2)));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (config.sections_.empty()) config.add("");
    ConfigSection& sec = config.sections_.back();
    if (sec.find(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    sec.entries.emplace_back(key, trim(t.substr(eq + 1)));
  }
  return config;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  return parse(in, path);
}

const ConfigSection* Config::find(const std::string& name) const {
  for (const auto& s : sections_) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const ConfigSection& Config::section(const std::string& name) const {
  const ConfigSection* s = find(name);
  if (!s) throw ConfigError("missing section [" + name + "]");
  return *s;
}

std::vector<const ConfigSection*> Config::all(const std::string& name) const {
  std::vector<const ConfigSection*> out;
  for (const auto& s : sections_) {
    if (s.name == name) out.push_back(&s);
  }
  return out;
}

ConfigSection& Config::add(const std::string& name) {
  sections_.push_back(ConfigSection{name, {}});
  return sections_.back();
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  for (auto& s : sections_) {
    if (s.name == section) {
      s.set(key, value);
      return;
    }
  }
  // The unnamed section always comes first.
  if (section.empty()) {
    sections_.insert(sections_.begin(), ConfigSection{"", {{key, value}}});
    return;
  }
  add(section).set(key, value);
}

std::string Config::serialize(const std::vector<std::string>& skip_keys) const {
  std::ostringstream out;
  for (const auto& s : sections_) {
    if (!s.name.empty()) out << '[' << s.name << "]\n";
    for (const auto& [k, v] : s.entries) {
      if (std::find(skip_keys.begin(), skip_keys.end(), k) != skip_keys.end()) continue;
      out << k << '=' << v << '\n';
    }
  }
  return out.str();
}

void Config::write(std::ostream& out) const { out << serialize(); }

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace gmt
