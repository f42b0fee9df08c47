#include "btf/csv.hpp"

#include "btf/error.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

namespace btf {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

} // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.emplace_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  return fields;
}

CountSeries read_count_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line).empty()) {
    throw SchemaError("CSV: missing header row");
  }
  std::vector<std::string> names = split_csv_line(line);
  for (const auto& name : names) {
    if (name.empty()) {
      throw SchemaError("CSV: empty series name in header");
    }
  }
  std::vector<std::vector<Count>> columns(names.size());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != names.size()) {
      throw SchemaError("CSV line " + std::to_string(line_no) + ": expected " +
                        std::to_string(names.size()) + " fields, got " +
                        std::to_string(fields.size()));
    }
    for (std::size_t m = 0; m < fields.size(); ++m) {
      Count value = 0;
      const auto& f = fields[m];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
      if (ec != std::errc{} || ptr != f.data() + f.size() || f.empty()) {
        throw SchemaError("CSV line " + std::to_string(line_no) + ": '" + f +
                          "' is not an integer count");
      }
      if (value < 0) {
        throw SchemaError("CSV line " + std::to_string(line_no) + ": negative count " + f);
      }
      columns[m].push_back(value);
    }
  }
  if (columns.front().empty()) {
    throw SchemaError("CSV: no data rows");
  }
  return CountSeries(std::move(columns), std::move(names));
}

CountSeries read_count_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw SchemaError("cannot open " + path.string());
  }
  return read_count_csv(in);
}

void write_count_csv(std::ostream& out, const CountSeries& series) {
  const auto& names = series.names();
  for (std::size_t m = 0; m < names.size(); ++m) {
    out << (m ? "," : "") << names[m];
  }
  out << '\n';
  for (std::size_t t = 0; t < series.length(); ++t) {
    for (std::size_t m = 0; m < series.num_series(); ++m) {
      out << (m ? "," : "") << series.at(m, t);
    }
    out << '\n';
  }
}

void write_count_csv(const std::filesystem::path& path, const CountSeries& series) {
  std::ofstream out(path);
  if (!out) {
    throw SchemaError("cannot write " + path.string());
  }
  write_count_csv(out, series);
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw SchemaError("'" + std::string(text) + "' is not a number");
  }
  return value;
}

} // namespace btf
