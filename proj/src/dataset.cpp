#include "hidmap/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace hidmap {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::RaggedRow: return "RaggedRow";
    case ErrorCode::DuplicateDimensionName: return "DuplicateDimensionName";
    case ErrorCode::DimensionAlreadyFixed: return "DimensionAlreadyFixed";
    case ErrorCode::InvalidPath: return "InvalidPath";
    case ErrorCode::TooFewSides: return "TooFewSides";
    case ErrorCode::BadFractions: return "BadFractions";
    case ErrorCode::InvalidPolygon: return "InvalidPolygon";
    case ErrorCode::DegenerateSlab: return "DegenerateSlab";
    case ErrorCode::NoVisibleDimensions: return "NoVisibleDimensions";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::InvalidOrder: return "InvalidOrder";
    case ErrorCode::PolygonTooSmall: return "PolygonTooSmall";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::InvalidPosition: return "InvalidPosition";
    case ErrorCode::InvalidDimension: return "InvalidDimension";
    case ErrorCode::LastVisibleDimension: return "LastVisibleDimension";
    case ErrorCode::EmptyStack: return "EmptyStack";
    case ErrorCode::BadRequest: return "BadRequest";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::PortInUse: return "PortInUse";
  }
  return "Unknown";
}

ValueIndex Dimension::value_index(std::string_view value) const {
  auto it = std::lower_bound(values.begin(), values.end(), value);
  if (it == values.end() || *it != value) {
    throw Error(ErrorCode::InvalidPath,
                "dimension '" + name + "' has no value '" + std::string(value) + "'");
  }
  return static_cast<ValueIndex>(it - values.begin());
}

CategoryPath::CategoryPath(std::vector<Entry> entries) {
  for (const auto& e : entries) push(e.dimension, e.value);
}

bool CategoryPath::fixes(DimIndex dim) const noexcept {
  return std::any_of(entries_.begin(), entries_.end(),
                     [dim](const Entry& e) { return e.dimension == dim; });
}

void CategoryPath::push(DimIndex dim, ValueIndex value) {
  if (fixes(dim)) {
    throw Error(ErrorCode::InvalidPath,
                "dimension " + std::to_string(dim) + " appears twice in path");
  }
  entries_.push_back({dim, value});
}

CategoryPath CategoryPath::concat(const CategoryPath& tail) const {
  CategoryPath out = *this;
  for (const auto& e : tail.entries_) out.push(e.dimension, e.value);
  return out;
}

namespace {

bool tuple_less(const Dataset::Cell& a, const Dataset::Cell& b) { return a.tuple < b.tuple; }

struct TupleHash {
  std::size_t operator()(const std::vector<ValueIndex>& t) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (ValueIndex v : t) {
      h ^= v;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

Dataset::Dataset(std::vector<Dimension> dimensions, std::vector<Cell> cells)
    : dimensions_(std::move(dimensions)) {
  std::unordered_set<std::string> names;
  for (std::size_t d = 0; d < dimensions_.size(); ++d) {
    auto& dim = dimensions_[d];
    dim.index = d;
    if (!names.insert(dim.name).second) {
      throw Error(ErrorCode::DuplicateDimensionName, "duplicate dimension name '" + dim.name + "'");
    }
    if (!std::is_sorted(dim.values.begin(), dim.values.end()) ||
        std::adjacent_find(dim.values.begin(), dim.values.end()) != dim.values.end()) {
      throw Error(ErrorCode::InvalidPath,
                  "values of dimension '" + dim.name + "' must be unique and sorted");
    }
  }
  for (auto& c : cells) {
    if (c.tuple.size() != dimensions_.size()) {
      throw Error(ErrorCode::InvalidPath, "cell tuple has wrong arity");
    }
    for (std::size_t d = 0; d < c.tuple.size(); ++d) {
      if (c.tuple[d] >= dimensions_[d].values.size()) {
        throw Error(ErrorCode::InvalidPath, "cell value index out of range");
      }
    }
  }
  std::sort(cells.begin(), cells.end(), tuple_less);
  for (auto& c : cells) {
    if (c.count == 0) continue;
    if (!cells_.empty() && cells_.back().tuple == c.tuple) {
      cells_.back().count += c.count;
    } else {
      cells_.push_back(std::move(c));
    }
  }
  for (const auto& c : cells_) row_count_ += c.count;
}

Count Dataset::count_of(std::span<const ValueIndex> tuple) const {
  auto it = std::lower_bound(cells_.begin(), cells_.end(), tuple,
                             [](const Cell& c, std::span<const ValueIndex> t) {
                               return std::lexicographical_compare(c.tuple.begin(), c.tuple.end(),
                                                                   t.begin(), t.end());
                             });
  if (it != cells_.end() && std::equal(it->tuple.begin(), it->tuple.end(), tuple.begin(), tuple.end())) {
    return it->count;
  }
  return 0;
}

DimIndex Dataset::dimension_index(std::string_view name) const {
  for (const auto& d : dimensions_) {
    if (d.name == name) return d.index;
  }
  throw Error(ErrorCode::InvalidDimension, "unknown dimension '" + std::string(name) + "'");
}

void Dataset::validate(const CategoryPath& path) const {
  for (const auto& e : path.entries()) {
    if (e.dimension >= dimensions_.size()) {
      throw Error(ErrorCode::InvalidPath, "path dimension out of range");
    }
    if (e.value >= dimensions_[e.dimension].values.size()) {
      throw Error(ErrorCode::InvalidPath, "path value out of range");
    }
  }
}

bool matches(const Dataset::Cell& cell, const CategoryPath& path) noexcept {
  for (const auto& e : path.entries()) {
    if (cell.tuple[e.dimension] != e.value) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

// Splits one record. Quoted fields keep their inner text verbatim, with "" as an escaped quote.
std::vector<std::string> split_record(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::size_t i = 0;
  while (true) {
    // skip leading whitespace to detect a quoted field
    std::size_t j = i;
    while (j < line.size() && (line[j] == ' ' || line[j] == '\t')) ++j;
    if (j < line.size() && line[j] == '"') {
      std::string value;
      std::size_t k = j + 1;
      bool closed = false;
      while (k < line.size()) {
        if (line[k] == '"') {
          if (k + 1 < line.size() && line[k + 1] == '"') {
            value.push_back('"');
            k += 2;
            continue;
          }
          closed = true;
          ++k;
          break;
        }
        value.push_back(line[k++]);
      }
      if (!closed) {
        throw Error(ErrorCode::RaggedRow,
                    "unterminated quoted field on row " + std::to_string(line_no));
      }
      auto comma = line.find(',', k);
      auto rest = trim(line.substr(k, comma == std::string_view::npos ? line.size() - k : comma - k));
      if (!rest.empty()) {
        throw Error(ErrorCode::RaggedRow,
                    "text after closing quote on row " + std::to_string(line_no));
      }
      fields.push_back(std::move(value));
      if (comma == std::string_view::npos) break;
      i = comma + 1;
    } else {
      auto comma = line.find(',', i);
      if (comma == std::string_view::npos) {
        fields.emplace_back(trim(line.substr(i)));
        break;
      }
      fields.emplace_back(trim(line.substr(i, comma - i)));
      i = comma + 1;
    }
  }
  return fields;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    auto line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = nl + 1;
  }
  if (!lines.empty() && !lines.back().empty() && lines.back().back() == '\r') {
    lines.back().remove_suffix(1);
  }
  return lines;
}

bool needs_quotes(const std::string& v) {
  if (v.empty()) return false;
  if (v.find_first_of(",\"") != std::string::npos) return true;
  return v.front() == ' ' || v.front() == '\t' || v.back() == ' ' || v.back() == '\t' ||
         v.back() == '\r';
}

void write_field(std::string& out, const std::string& v) {
  if (!needs_quotes(v)) {
    out += v;
    return;
  }
  out.push_back('"');
  for (char c : v) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

}  // namespace

Dataset parse_csv(std::string_view text) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  auto lines = split_lines(text);
  if (lines.empty() || trim(lines.front()).empty()) {
    throw Error(ErrorCode::EmptyInput, "input has no header row");
  }

  auto header = split_record(lines.front(), 1);
  const std::size_t n = header.size();
  std::vector<Dimension> dims(n);
  {
    std::unordered_set<std::string> seen;
    for (std::size_t d = 0; d < n; ++d) {
      if (!seen.insert(header[d]).second) {
        throw Error(ErrorCode::DuplicateDimensionName,
                    "duplicate dimension name '" + header[d] + "' in header");
      }
      dims[d].name = header[d];
      dims[d].index = d;
    }
  }

  // First pass: intern values in first-seen order and tally tuples.
  std::vector<std::unordered_map<std::string, ValueIndex>> interned(n);
  std::vector<std::vector<std::string>> first_seen(n);
  std::unordered_map<std::vector<ValueIndex>, Count, TupleHash> tally;
  std::vector<ValueIndex> tuple(n);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    auto fields = split_record(lines[li], li + 1);
    if (fields.size() != n) {
      throw Error(ErrorCode::RaggedRow, "row " + std::to_string(li + 1) + " has " +
                                            std::to_string(fields.size()) + " fields, expected " +
                                            std::to_string(n));
    }
    for (std::size_t d = 0; d < n; ++d) {
      auto [it, inserted] =
          interned[d].try_emplace(fields[d], static_cast<ValueIndex>(first_seen[d].size()));
      if (inserted) first_seen[d].push_back(fields[d]);
      tuple[d] = it->second;
    }
    ++tally[tuple];
  }

  // Remap first-seen indices onto byte-wise sorted order.
  std::vector<std::vector<ValueIndex>> remap(n);
  for (std::size_t d = 0; d < n; ++d) {
    dims[d].values = first_seen[d];
    std::sort(dims[d].values.begin(), dims[d].values.end());
    remap[d].resize(first_seen[d].size());
    for (std::size_t k = 0; k < first_seen[d].size(); ++k) {
      auto it = std::lower_bound(dims[d].values.begin(), dims[d].values.end(), first_seen[d][k]);
      remap[d][k] = static_cast<ValueIndex>(it - dims[d].values.begin());
    }
  }
  std::vector<Dataset::Cell> cells;
  cells.reserve(tally.size());
  for (auto& [t, c] : tally) {
    Dataset::Cell cell{t, c};
    for (std::size_t d = 0; d < n; ++d) cell.tuple[d] = remap[d][t[d]];
    cells.push_back(std::move(cell));
  }
  return Dataset(std::move(dims), std::move(cells));
}

Dataset load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open input file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

std::string serialize_csv(const Dataset& ds) {
  std::string out;
  const auto& dims = ds.dimensions();
  for (std::size_t d = 0; d < dims.size(); ++d) {
    if (d) out.push_back(',');
    write_field(out, dims[d].name);
  }
  out.push_back('\n');
  for (const auto& cell : ds.cells()) {
    std::string row;
    for (std::size_t d = 0; d < dims.size(); ++d) {
      if (d) row.push_back(',');
      write_field(row, dims[d].values[cell.tuple[d]]);
    }
    row.push_back('\n');
    for (Count k = 0; k < cell.count; ++k) out += row;
  }
  return out;
}

std::vector<ValueCount> partition_counts(const Dataset& ds, const CategoryPath& fixed, DimIndex dim) {
  ds.validate(fixed);
  if (dim >= ds.dimension_count()) {
    throw Error(ErrorCode::InvalidDimension, "dimension index out of range");
  }
  if (fixed.fixes(dim)) {
    throw Error(ErrorCode::DimensionAlreadyFixed,
                "dimension '" + ds.dimension(dim).name + "' is already fixed");
  }
  std::vector<ValueCount> out(ds.dimension(dim).value_count());
  for (std::size_t v = 0; v < out.size(); ++v) out[v].value = static_cast<ValueIndex>(v);
  for (const auto& cell : ds.cells()) {
    if (matches(cell, fixed)) out[cell.tuple[dim]].count += cell.count;
  }
  return out;
}

Count filter_count(const Dataset& ds, const CategoryPath& fixed) {
  ds.validate(fixed);
  if (fixed.empty()) return ds.row_count();
  Count total = 0;
  for (const auto& cell : ds.cells()) {
    if (matches(cell, fixed)) total += cell.count;
  }
  return total;
}

CategoryPath parse_path(const Dataset& ds, std::span<const std::string> assignments) {
  CategoryPath path;
  for (const auto& a : assignments) {
    auto eq = a.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidPath, "expected name=value, got '" + a + "'");
    }
    auto name = trim(std::string_view(a).substr(0, eq));
    auto value = trim(std::string_view(a).substr(eq + 1));
    DimIndex d = ds.dimension_index(name);
    path.push(d, ds.dimension(d).value_index(value));
  }
  return path;
}

}  // namespace hidmap
