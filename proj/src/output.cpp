#include "lrs/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

namespace lrs::io {
namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string Table::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + quote(header[i]);
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (const double* d = std::get_if<double>(&row[i])) out += format_double(*d);
      else out += quote(std::get<std::string>(row[i]));
    }
    out += '\n';
  }
  return out;
}

Table sweep_table(const sweeps::SweepResult& result) {
  Table t;
  for (const auto& c : result.columns) t.header.push_back(c.name);
  const std::size_t n = result.points();
  t.rows.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& c : result.columns) t.rows[i].emplace_back(c.values[i]);
  return t;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void write_csv(const std::filesystem::path& path, const Table& table) { write_text(path, table.to_csv()); }

void write_json(const std::filesystem::path& path, const ordered_json& j) { write_text(path, j.dump(2) + "\n"); }

ordered_json summary_json(const sweeps::SweepResult& result) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : result.summary) j[k] = v;
  return j;
}

}  // namespace lrs::io
