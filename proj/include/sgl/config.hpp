#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sgl/exp_analysis.hpp"
#include "sgl/spectra.hpp"

namespace sgl {

// Malformed config text or a bad value; `line()` is 0 when no line applies.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Flat `key = value` lines; `#` starts a comment.
class Config {
 public:
  static Config parse(std::string_view text);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  // ConfigError naming the first key outside `allowed`.
  void restrict_to(const std::set<std::string>& allowed) const;

  std::string text(const std::string& key) const;
  double real(const std::string& key) const;
  double real(const std::string& key, double fallback) const;
  std::int64_t integer(const std::string& key) const;
  std::int64_t integer(const std::string& key, std::int64_t fallback) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<std::complex<double>> complexes(const std::string& key) const;
  SpectrumSet spectrum(const std::string& key) const;
  bool flag(const std::string& key, bool fallback) const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  const Entry& entry(const std::string& key) const;

  std::map<std::string, Entry> entries_;
};

}  // namespace sgl
