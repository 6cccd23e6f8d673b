#include "geoimpute/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <string_view>

#include "geoimpute/error.hpp"

namespace geoimpute {
namespace {

enum class Delimiter { Comma, Tab, Blank };

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_blank(std::string_view s) { return trim(s).empty(); }

Delimiter detect_delimiter(std::string_view line) {
  if (line.find(',') != std::string_view::npos) return Delimiter::Comma;
  if (line.find('\t') != std::string_view::npos) return Delimiter::Tab;
  return Delimiter::Blank;
}

std::vector<std::string_view> split_fields(std::string_view line, Delimiter delim) {
  std::vector<std::string_view> fields;
  if (delim == Delimiter::Blank) {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i == line.size()) break;
      const std::size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      fields.push_back(line.substr(start, i - start));
    }
    return fields;
  }
  const char sep = delim == Delimiter::Comma ? ',' : '\t';
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    fields.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

/// Strict finite decimal; no trailing garbage.
bool parse_number(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(out);
}

struct Row {
  std::size_t line;
  double x, y, value;
};

/// Generic reader for delimited rows with at least `columns` numeric fields.
template <class Emit>
void read_delimited(std::istream& in, std::size_t columns, Emit&& emit) {
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  Delimiter delim = Delimiter::Blank;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) continue;
    if (first) delim = detect_delimiter(line);
    const auto fields = split_fields(line, delim);
    double v[3] = {0.0, 0.0, 0.0};
    if (first) {
      first = false;
      if (fields.empty() || !parse_number(fields[0], v[0])) continue;  // header
    }
    if (fields.size() < columns) {
      throw ParseError(line_no, fields.size() + 1,
                       "expected " + std::to_string(columns) + " columns, found " +
                           std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < columns; ++c) {
      if (!parse_number(fields[c], v[c])) {
        throw ParseError(line_no, c + 1, "not a finite number: '" + std::string(fields[c]) + "'");
      }
    }
    emit(Row{line_no, v[0], v[1], v[2]});
  }
  if (in.bad()) throw Error(ErrorCode::IoError, "read failure");
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

SampleSet parse_xyz(std::istream& in, DedupePolicy policy) {
  std::vector<SamplePoint> points;
  std::vector<std::size_t> lines;
  read_delimited(in, 3, [&](const Row& r) {
    points.push_back({r.x, r.y, r.value});
    lines.push_back(r.line);
  });
  if (points.empty()) throw Error(ErrorCode::EmptyInput, "no data rows");

  const double tol = kCoincidenceTolerance * compute_bbox(points).max_extent();
  const auto dups = find_coincident(points, tol);
  if (dups.empty()) return SampleSet(std::move(points));

  if (policy == DedupePolicy::Reject) {
    throw Error(ErrorCode::DuplicatePoint, "duplicate coordinates at lines " +
                                               std::to_string(lines[dups.front().first]) +
                                               " and " + std::to_string(lines[dups.front().second]));
  }
  // Mean policy: each cluster collapses onto its earliest row.
  std::vector<double> sum(points.size());
  std::vector<std::size_t> count(points.size(), 1);
  std::vector<bool> drop(points.size(), false);
  for (std::size_t i = 0; i < points.size(); ++i) sum[i] = points[i].value;
  for (const auto& [keep, dup] : dups) {
    sum[keep] += points[dup].value;
    ++count[keep];
    drop[dup] = true;
  }
  std::vector<SamplePoint> merged;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (drop[i]) continue;
    merged.push_back({points[i].x, points[i].y, sum[i] / static_cast<double>(count[i])});
  }
  return SampleSet(std::move(merged));
}

std::vector<QueryPoint> parse_targets(std::istream& in) {
  std::vector<QueryPoint> out;
  read_delimited(in, 2, [&](const Row& r) { out.push_back({r.x, r.y}); });
  return out;
}

void write_xyz(std::ostream& out, std::span<const SamplePoint> points) {
  out << "x,y,value\n";
  for (const auto& p : points) {
    out << format_double(p.x) << ',' << format_double(p.y) << ',' << format_double(p.value) << '\n';
  }
}

bool looks_like_ascii_grid(std::istream& in) {
  const auto pos = in.tellg();
  std::string token;
  in >> token;
  in.clear();
  in.seekg(pos);
  return lower(token) == "ncols";
}

GridData parse_ascii_grid(std::istream& in) {
  std::map<std::string, double> header;
  std::string line;
  std::size_t line_no = 0;
  std::string pending_line;  // first data line, read while scanning the header

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) continue;
    const auto fields = split_fields(line, Delimiter::Blank);
    double probe = 0.0;
    if (parse_number(fields[0], probe)) {
      pending_line = line;
      break;
    }
    if (fields.size() != 2) throw ParseError(line_no, 1, "malformed header line");
    double v = 0.0;
    if (!parse_number(fields[1], v)) throw ParseError(line_no, 2, "header value is not a number");
    header[lower(fields[0])] = v;
  }

  auto require = [&](std::initializer_list<const char*> keys) -> std::pair<std::string, double> {
    for (const char* k : keys) {
      if (auto it = header.find(k); it != header.end()) return *it;
    }
    throw Error(ErrorCode::HeaderMissingField, std::string("grid header lacks '") + *keys.begin() + "'");
  };
  GridHeader h;
  const double ncols = require({"ncols"}).second;
  const double nrows = require({"nrows"}).second;
  if (!(ncols >= 1) || !(nrows >= 1) || ncols != std::floor(ncols) || nrows != std::floor(nrows)) {
    throw Error(ErrorCode::ParseError, "ncols and nrows must be positive integers");
  }
  h.ncols = static_cast<std::size_t>(ncols);
  h.nrows = static_cast<std::size_t>(nrows);
  h.cellsize = require({"cellsize"}).second;
  if (!(h.cellsize > 0.0)) throw Error(ErrorCode::ParseError, "cellsize must be positive");
  const auto [xkey, xll] = require({"xllcorner", "xllcenter"});
  const auto [ykey, yll] = require({"yllcorner", "yllcenter"});
  h.xll_corner = xkey == "xllcenter" ? xll - 0.5 * h.cellsize : xll;
  h.yll_corner = ykey == "yllcenter" ? yll - 0.5 * h.cellsize : yll;
  if (auto it = header.find("nodata_value"); it != header.end()) h.nodata = it->second;

  const std::size_t expected = h.ncols * h.nrows;
  std::vector<SamplePoint> known;
  std::vector<QueryPoint> missing;
  std::size_t cell = 0;
  auto consume = [&](std::string_view text, std::size_t at_line) {
    const auto fields = split_fields(text, Delimiter::Blank);
    for (std::size_t f = 0; f < fields.size(); ++f) {
      double v = 0.0;
      if (!parse_number(fields[f], v)) {
        throw ParseError(at_line, f + 1, "not a finite number: '" + std::string(fields[f]) + "'");
      }
      if (cell < expected) {
        const std::size_t row = cell / h.ncols;
        const std::size_t col = cell % h.ncols;
        const double x = h.xll_corner + (static_cast<double>(col) + 0.5) * h.cellsize;
        const double y =
            h.yll_corner + (static_cast<double>(h.nrows - 1 - row) + 0.5) * h.cellsize;
        if (h.nodata && v == *h.nodata) {
          missing.push_back({x, y});
        } else {
          known.push_back({x, y, v});
        }
      }
      ++cell;
    }
  };
  if (!pending_line.empty()) consume(pending_line, line_no);
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    consume(line, line_no);
  }
  if (in.bad()) throw Error(ErrorCode::IoError, "read failure");
  if (cell != expected) {
    throw Error(ErrorCode::CountMismatch, "grid declares " + std::to_string(expected) +
                                              " cells but holds " + std::to_string(cell));
  }
  if (known.empty()) throw Error(ErrorCode::EmptyInput, "grid has no known cells");
  return GridData{SampleSet(std::move(known)), std::move(missing), h};
}

LoadedData load_dataset(const std::filesystem::path& path, DedupePolicy policy) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  if (looks_like_ascii_grid(in)) {
    GridData grid = parse_ascii_grid(in);
    return LoadedData{std::move(grid.known), std::move(grid.missing)};
  }
  return LoadedData{parse_xyz(in, policy), {}};
}

std::vector<QueryPoint> load_targets(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  return parse_targets(in);
}

OutputFile::OutputFile(std::filesystem::path path)
    : path_(std::move(path)), temp_(path_.string() + ".partial") {
  out_.open(temp_, std::ios::binary | std::ios::trunc);
  if (!out_) throw Error(ErrorCode::IoError, "cannot write '" + path_.string() + "'");
}

OutputFile::~OutputFile() {
  if (committed_) return;
  out_.close();
  std::error_code ec;
  std::filesystem::remove(temp_, ec);
}

void OutputFile::commit() {
  out_.flush();
  if (!out_) throw Error(ErrorCode::IoError, "write to '" + path_.string() + "' failed");
  out_.close();
  std::error_code ec;
  std::filesystem::rename(temp_, path_, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot finalize '" + path_.string() + "': " + ec.message());
  committed_ = true;
}

}  // namespace geoimpute
