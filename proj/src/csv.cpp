#include "csv.hpp"

#include <charconv>
#include <fstream>

#include "bess/error.hpp"

namespace bess::detail {

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::vector<CsvRow> read_csv(const std::filesystem::path& file,
                             const std::vector<std::string>& header) {
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::MalformedFile, "cannot open " + file.string());
  }
  std::string line;
  auto strip_cr = [](std::string& s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
  };
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::MalformedFile, file.string() + ": empty file");
  }
  strip_cr(line);
  if (split(line) != header) {
    std::string expected;
    for (std::size_t i = 0; i < header.size(); ++i) expected += (i ? "," : "") + header[i];
    throw Error(ErrorCode::MalformedFile,
                file.string() + ": header '" + line + "', expected '" + expected + "'");
  }
  std::vector<CsvRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    auto fields = split(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::MalformedFile, file.string() + ": line " + std::to_string(lineno) +
                                                " has " + std::to_string(fields.size()) +
                                                " fields, expected " +
                                                std::to_string(header.size()));
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

std::optional<double> try_parse_number(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

double parse_number(std::string_view text, const std::filesystem::path& file, std::size_t line) {
  if (auto v = try_parse_number(text)) return *v;
  throw Error(ErrorCode::MalformedFile, file.string() + ": line " + std::to_string(line) + ": '" +
                                            std::string(text) + "' is not a number");
}

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

}  // namespace bess::detail
