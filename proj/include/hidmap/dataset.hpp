#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hidmap/error.hpp"

namespace hidmap {

using DimIndex = std::size_t;
using ValueIndex = std::uint32_t;
using Count = std::uint64_t;

struct Dimension {
  std::string name;
  // Unique, ascending by byte-wise comparison.
  std::vector<std::string> values;
  DimIndex index = 0;

  std::size_t value_count() const noexcept { return values.size(); }
  // Throws InvalidPath when the value is absent.
  ValueIndex value_index(std::string_view value) const;
};

// One (dimension, value) constraint per entry; a dimension appears at most once.
class CategoryPath {
 public:
  struct Entry {
    DimIndex dimension = 0;
    ValueIndex value = 0;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  CategoryPath() = default;
  explicit CategoryPath(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t size() const noexcept { return entries_.size(); }
  bool fixes(DimIndex dim) const noexcept;

  // Throws InvalidPath if `dim` is already fixed.
  void push(DimIndex dim, ValueIndex value);
  CategoryPath concat(const CategoryPath& tail) const;

  friend bool operator==(const CategoryPath&, const CategoryPath&) = default;

 private:
  std::vector<Entry> entries_;
};

// A frequency table over the full cross product of dimension values.
// Immutable after construction.
class Dataset {
 public:
  struct Cell {
    std::vector<ValueIndex> tuple;
    Count count = 0;
  };

  Dataset() = default;
  // Cells with equal tuples are merged; zero counts are dropped.
  Dataset(std::vector<Dimension> dimensions, std::vector<Cell> cells);

  const std::vector<Dimension>& dimensions() const noexcept { return dimensions_; }
  const Dimension& dimension(DimIndex d) const { return dimensions_.at(d); }
  std::size_t dimension_count() const noexcept { return dimensions_.size(); }
  Count row_count() const noexcept { return row_count_; }
  // Sorted by tuple, unique, all counts > 0.
  std::span<const Cell> cells() const noexcept { return cells_; }

  // Zero when the tuple never occurs.
  Count count_of(std::span<const ValueIndex> tuple) const;
  // Throws InvalidDimension.
  DimIndex dimension_index(std::string_view name) const;
  // Throws InvalidPath when a dimension or value index is out of range.
  void validate(const CategoryPath& path) const;

 private:
  std::vector<Dimension> dimensions_;
  std::vector<Cell> cells_;
  Count row_count_ = 0;
};

bool matches(const Dataset::Cell& cell, const CategoryPath& path) noexcept;

Dataset parse_csv(std::string_view text);
Dataset load_csv(const std::string& path);
// One line per data item, header first; parse_csv(serialize_csv(ds)) has the same counts.
std::string serialize_csv(const Dataset& ds);

struct ValueCount {
  ValueIndex value = 0;
  Count count = 0;
  friend bool operator==(const ValueCount&, const ValueCount&) = default;
};

// One entry per value of `dim`, in value order; zero counts included.
std::vector<ValueCount> partition_counts(const Dataset& ds, const CategoryPath& fixed, DimIndex dim);
Count filter_count(const Dataset& ds, const CategoryPath& fixed);

// Parses "name=value" pairs against the dataset.
CategoryPath parse_path(const Dataset& ds, std::span<const std::string> assignments);

}  // namespace hidmap
