#pragma once

#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hidmap/dataset.hpp"

namespace testing {

// Raw rows kept beside the parsed dataset so counts can be checked by a
// plain scan that shares no code with the library.
struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
    out += '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + r[i];
      out += '\n';
    }
    return out;
  }

  // Rows whose named columns equal the given values.
  std::size_t scan(const std::vector<std::pair<std::string, std::string>>& fixed) const {
    std::vector<std::pair<std::size_t, std::string>> cols;
    for (const auto& [name, value] : fixed) {
      for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == name) cols.emplace_back(c, value);
      }
    }
    std::size_t n = 0;
    for (const auto& r : rows) {
      bool ok = true;
      for (const auto& [c, v] : cols) ok = ok && r[c] == v;
      n += ok;
    }
    return n;
  }

  // Distinct full tuples with their multiplicities.
  std::map<std::vector<std::string>, std::size_t> tally() const {
    std::map<std::vector<std::string>, std::size_t> t;
    for (const auto& r : rows) ++t[r];
    return t;
  }
};

// n dimensions with cardinalities drawn from [p_lo, p_hi], m rows with a
// skewed value distribution so some intersections come out empty.
inline RawTable random_table(std::mt19937_64& rng, std::size_t n, std::size_t p_lo, std::size_t p_hi,
                             std::size_t m) {
  RawTable t;
  std::vector<std::vector<double>> weights(n);
  std::vector<std::size_t> card(n);
  for (std::size_t d = 0; d < n; ++d) {
    t.header.push_back("d" + std::to_string(d));
    card[d] = std::uniform_int_distribution<std::size_t>(p_lo, p_hi)(rng);
    for (std::size_t v = 0; v < card[d]; ++v) {
      weights[d].push_back(std::uniform_real_distribution<double>(0.05, 1.0)(rng));
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::string> row;
    for (std::size_t d = 0; d < n; ++d) {
      std::discrete_distribution<std::size_t> pick(weights[d].begin(), weights[d].end());
      row.push_back("v" + std::to_string(pick(rng)));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string demo_csv_path() { return std::string(HIDMAP_TEST_DATA) + "/demo.csv"; }

}  // namespace testing
