/**
 * CSV and JSON writers.  Numbers are written as the shortest decimal that
 * reads back to the same double, so files are byte-stable across runs.
 */
#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "lrs/config.hpp"
#include "lrs/sweeps.hpp"

namespace lrs::io {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest round-trip decimal; "inf", "-inf", "nan" for non-finite values.
std::string format_double(double x);

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  std::string to_csv() const;
};

/// One row per sweep point, one column per SweepResult column.
Table sweep_table(const sweeps::SweepResult& result);

/// Creates parent directories; throws IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);
void write_csv(const std::filesystem::path& path, const Table& table);
void write_json(const std::filesystem::path& path, const ordered_json& j);

/// Summary entries of a sweep as a JSON object, in order.
ordered_json summary_json(const sweeps::SweepResult& result);

}  // namespace lrs::io
