#pragma once

// Line-oriented `key = value` files with `[section]` headers. Used for run
// configs and corpus manifests. Lines starting with '#' or ';' are comments.
// Keys before the first header belong to the unnamed section "".

#include "gmt/errors.hpp"
#include "gmt/measure.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gmt {

struct ConfigSection {
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;

  const std::string* find(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  std::string text(const std::string& key) const;  // ConfigError when missing
  std::string text(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  long long integer(const std::string& key) const;
  long long integer(const std::string& key, long long fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  // Comma-separated reals.
  std::vector<double> numbers(const std::string& key) const;
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;
  Vector vector(const std::string& key) const;
};

class Config {
 public:
  static Config parse(std::istream& in, const std::string& source = "<config>");
  static Config load(const std::string& path);

  const std::vector<ConfigSection>& sections() const { return sections_; }
  // First section with this name; nullptr when absent.
  const ConfigSection* find(const std::string& name) const;
  // First section with this name; ConfigError when absent.
  const ConfigSection& section(const std::string& name) const;
  // Every section with this name, in file order.
  std::vector<const ConfigSection*> all(const std::string& name) const;

  ConfigSection& add(const std::string& name);
  // Sets key in the first section named `section`, creating it if needed.
  void set(const std::string& section, const std::string& key, const std::string& value);

  // Canonical text: sections in order, entries in order, `key=value`.
  std::string serialize(const std::vector<std::string>& skip_keys = {}) const;
  void write(std::ostream& out) const;

 private:
  std::vector<ConfigSection> sections_;
};

// FNV-1a 64-bit.
std::uint64_t fnv1a64(const std::string& text);
std::string hex64(std::uint64_t value);

}  // namespace gmt
