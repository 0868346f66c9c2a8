#pragma once

// On-disk cache of Buchstab levels. One JSON file per (b, level, tolerance,
// schema version); files are written to a temporary name and renamed, and a
// file whose schema or checksum does not match is ignored and rewritten.

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "wg/buchstab_level.hpp"

namespace wg::buchstab_cache {

inline constexpr int kSchemaVersion = 1;

namespace detail {
struct Config {
  std::mutex mutex;
  std::optional<std::string> directory;
  bool enabled = true;
};
inline Config& config() {
  static Config c;
  return c;
}
}  // namespace detail

/// Overrides WG_CACHE_DIR and the per-user default.
inline void set_directory(const std::string& dir) {
  std::lock_guard lock(detail::config().mutex);
  detail::config().directory = dir;
}

inline void set_enabled(bool on) {
  std::lock_guard lock(detail::config().mutex);
  detail::config().enabled = on;
}

/// Explicit setting, then WG_CACHE_DIR, then $HOME/.cache/wg.
inline std::optional<std::filesystem::path> directory() {
  std::lock_guard lock(detail::config().mutex);
  if (!detail::config().enabled) return std::nullopt;
  if (detail::config().directory) return std::filesystem::path(*detail::config().directory);
  if (const char* env = std::getenv("WG_CACHE_DIR"); env != nullptr && *env != '\0') {
    return std::filesystem::path(env);
  }
  if (const char* home = std::getenv("HOME"); home != nullptr && *home != '\0') {
    return std::filesystem::path(home) / ".cache" / "wg";
  }
  return std::nullopt;
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string tol_tag(double tol) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", tol);
  return buf;
}

inline std::filesystem::path file_for(const std::filesystem::path& dir, unsigned b, unsigned level,
                                      double tol) {
  return dir / ("buchstab_v" + std::to_string(kSchemaVersion) + "_b" + std::to_string(b) + "_j" +
                std::to_string(level) + "_tol" + tol_tag(tol) + ".json");
}

inline nlohmann::json to_json(const BuchstabLevel& lv, unsigned b, double tol) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["b"] = b;
  j["level"] = lv.level;
  j["tol"] = tol;
  j["upper"] = lv.upper;
  j["panel_breakpoints"] = lv.breaks;
  j["coefficients"] = lv.coeffs;
  j["rel_error"] = lv.rel_error;
  j["abs_error"] = lv.abs_error;
  j["sup_error"] = lv.rel_error * lv(lv.upper) + lv.abs_error;
  j["checksum"] = std::to_string(fnv1a(j.dump()));
  return j;
}

inline std::optional<BuchstabLevel> from_json(const nlohmann::json& j, unsigned b, unsigned level,
                                              double tol, double upper) {
  try {
    if (j.at("schema_version").get<int>() != kSchemaVersion) return std::nullopt;
    if (j.at("b").get<unsigned>() != b || j.at("level").get<unsigned>() != level) return std::nullopt;
    if (tol_tag(j.at("tol").get<double>()) != tol_tag(tol)) return std::nullopt;
    nlohmann::json body = j;
    const std::string sum = body.at("checksum").get<std::string>();
    body.erase("checksum");
    if (std::to_string(fnv1a(body.dump())) != sum) return std::nullopt;
    BuchstabLevel lv;
    lv.level = level;
    lv.upper = j.at("upper").get<double>();
    if (lv.upper != upper) return std::nullopt;
    lv.breaks = j.at("panel_breakpoints").get<std::vector<double>>();
    lv.coeffs = j.at("coefficients").get<std::vector<std::vector<double>>>();
    lv.rel_error = j.at("rel_error").get<double>();
    lv.abs_error = j.at("abs_error").get<double>();
    if (lv.breaks.size() != lv.coeffs.size() + 1 || lv.coeffs.empty()) return std::nullopt;
    return lv;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

inline std::optional<BuchstabLevel> load(unsigned b, unsigned level, double tol, double upper) {
  const auto dir = directory();
  if (!dir) return std::nullopt;
  std::ifstream in(file_for(*dir, b, level, tol));
  if (!in) return std::nullopt;
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) return std::nullopt;
  return from_json(j, b, level, tol, upper);
}

/// Best effort: an unwritable cache directory only costs recomputation.
inline void store(const BuchstabLevel& lv, unsigned b, double tol) {
  const auto dir = directory();
  if (!dir) return;
  std::error_code ec;
  std::filesystem::create_directories(*dir, ec);
  if (ec) return;
  const auto target = file_for(*dir, b, lv.level, tol);
  std::random_device rd;
  const auto tmp = target.string() + ".tmp" + std::to_string(rd());
  {
    std::ofstream out(tmp);
    if (!out) return;
    out << to_json(lv, b, tol).dump();
    if (!out) {
      std::filesystem::remove(tmp, ec);
      return;
    }
  }
  std::filesystem::rename(tmp, target, ec);
  if (ec) std::filesystem::remove(tmp, ec);
}

}  // namespace wg::buchstab_cache
