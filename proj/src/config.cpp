#include "sgl/config.hpp"

#include <charconv>

#include "sgl/error.hpp"
#include "sgl/format.hpp"

namespace sgl {

Config Config::parse(std::string_view text) {
  Config cfg;
  int line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key = value", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("empty key", line_no);
    if (cfg.entries_.count(key)) throw ConfigError("duplicate key '" + key + "'", line_no);
    cfg.entries_[key] = {value, line_no};
  }
  return cfg;
}

void Config::restrict_to(const std::set<std::string>& allowed) const {
  const Entry* first = nullptr;
  std::string first_key;
  for (const auto& [key, e] : entries_) {
    if (allowed.count(key)) continue;
    if (!first || e.line < first->line) {
      first = &e;
      first_key = key;
    }
  }
  if (first) throw ConfigError("unknown key '" + first_key + "'", first->line);
}

const Config::Entry& Config::entry(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing key '" + key + "'", 0);
  return it->second;
}

namespace {

template <class Fn>
auto converting(const std::string& key, int line, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw ConfigError("bad value for '" + key + "': " + e.what(), line);
  }
}

}  // namespace

std::string Config::text(const std::string& key) const { return entry(key).value; }

double Config::real(const std::string& key) const {
  const auto& e = entry(key);
  return converting(key, e.line, [&] { return parse_real(e.value); });
}

double Config::real(const std::string& key, double fallback) const {
  return has(key) ? real(key) : fallback;
}

std::int64_t Config::integer(const std::string& key) const {
  const auto& e = entry(key);
  std::int64_t out = 0;
  const auto* first = e.value.data();
  const auto* last = first + e.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError("bad integer for '" + key + "': " + e.value, e.line);
  }
  return out;
}

std::int64_t Config::integer(const std::string& key, std::int64_t fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::vector<double> Config::reals(const std::string& key) const {
  const auto& e = entry(key);
  return converting(key, e.line, [&] { return parse_real_list(e.value); });
}

std::vector<std::complex<double>> Config::complexes(const std::string& key) const {
  const auto& e = entry(key);
  return converting(key, e.line, [&] {
    std::vector<std::complex<double>> out;
    std::string_view rest = e.value;
    while (true) {
      const auto comma = rest.find(',');
      out.push_back(parse_complex(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return out;
  });
}

SpectrumSet Config::spectrum(const std::string& key) const {
  const auto& e = entry(key);
  return converting(key, e.line, [&] { return parse_spectrum_literal(e.value); });
}

bool Config::flag(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const auto& e = entry(key);
  if (e.value == "true" || e.value == "1") return true;
  if (e.value == "false" || e.value == "0") return false;
  throw ConfigError("expected true or false for '" + key + "'", e.line);
}

}  // namespace sgl
