#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ttestab/dynamics.hpp"
#include "ttestab/errors.hpp"

namespace cli {

// Default output directory: --out flag if given, else the TTESTAB_OUT_DIR
// environment variable, else the working directory.
inline std::filesystem::path resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("TTESTAB_OUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return ".";
}

inline void write_file(const std::filesystem::path& dir, const std::string& name,
                       const std::string& content) {
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream out(path);
  if (!out) throw ttestab::validation_error("cannot write " + path.string());
  out << content;
  if (!out.good()) throw ttestab::validation_error("write failed for " + path.string());
}

// Order lists accept comma-separated entries, ".."-ranges, and the word
// "original" for the untruncated system: "2,5..7,original".
inline std::vector<int> parse_orders(const std::string& text) {
  std::vector<int> orders;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    pos = comma + 1;
    if (item.empty()) continue;
    if (item == "original") {
      orders.push_back(ttestab::kOriginalOrder);
      continue;
    }
    const std::size_t dots = item.find("..");
    try {
      if (dots == std::string::npos) {
        orders.push_back(std::stoi(item));
      } else {
        const int lo = std::stoi(item.substr(0, dots));
        const int hi = std::stoi(item.substr(dots + 2));
        if (hi < lo) throw ttestab::validation_error("empty order range: " + item);
        for (int o = lo; o <= hi; ++o) orders.push_back(o);
      }
    } catch (const std::invalid_argument&) {
      throw ttestab::validation_error("bad order token: " + item);
    } catch (const std::out_of_range&) {
      throw ttestab::validation_error("bad order token: " + item);
    }
  }
  if (orders.empty()) throw ttestab::validation_error("order list is empty");
  return orders;
}

void register_smib(CLI::App& app);
void register_mm(CLI::App& app);

}  // namespace cli
