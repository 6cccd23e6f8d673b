#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geoimpute/core_model.hpp"

namespace geoimpute {

enum class DedupePolicy { Reject, Mean };

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/// Delimited x,y,value text. The delimiter (comma, tab or blanks) is taken
/// from the first row; a first row whose leading field is not numeric is a
/// header. Columns past the third are ignored.
SampleSet parse_xyz(std::istream& in, DedupePolicy policy = DedupePolicy::Reject);

/// Delimited x,y[,...] rows of query locations; extra columns are ignored.
std::vector<QueryPoint> parse_targets(std::istream& in);

void write_xyz(std::ostream& out, std::span<const SamplePoint> points);

struct GridHeader {
  std::size_t ncols = 0;
  std::size_t nrows = 0;
  double xll_corner = 0.0;  // lower-left corner of the lower-left cell
  double yll_corner = 0.0;
  double cellsize = 0.0;
  std::optional<double> nodata;
};

/// Known samples plus the locations that lack a value.
struct GridData {
  SampleSet known;
  std::vector<QueryPoint> missing;
  GridHeader header;
};

/// ESRI ASCII grid. Header keys are case-insensitive; xllcenter/yllcenter are
/// converted to corners by subtracting half a cell. Rows run north to south;
/// each cell becomes a sample at its center, NODATA cells become queries.
GridData parse_ascii_grid(std::istream& in);

/// True when the stream starts with an ESRI grid header. Does not consume.
bool looks_like_ascii_grid(std::istream& in);

struct LoadedData {
  SampleSet known;
  std::vector<QueryPoint> missing;  // grid NODATA cells; empty for XYZ input
};

/// Reads XYZ or ESRI grid input, chosen by content. Throws IoError.
LoadedData load_dataset(const std::filesystem::path& path, DedupePolicy policy);
std::vector<QueryPoint> load_targets(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path` on commit().
/// Destroying an uncommitted file removes the temporary.
class OutputFile {
 public:
  explicit OutputFile(std::filesystem::path path);
  ~OutputFile();
  OutputFile(const OutputFile&) = delete;
  OutputFile& operator=(const OutputFile&) = delete;

  std::ostream& stream() noexcept { return out_; }
  void commit();

 private:
  std::filesystem::path path_;
  std::filesystem::path temp_;
  std::ofstream out_;
  bool committed_ = false;
};

}  // namespace geoimpute
