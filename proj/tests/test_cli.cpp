#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "geoimpute/cli.hpp"
#include "geoimpute/io.hpp"

using namespace geoimpute;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "geoimpute");
  std::ostringstream out, err;
  const int code = cli_dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t lines(const fs::path& p) {
  const auto s = slurp(p);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("geoimpute_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
  std::size_t entries() const {
    return static_cast<std::size_t>(std::distance(fs::directory_iterator(path), fs::directory_iterator{}));
  }
};

}  // namespace

TEST_CASE("synth writes n samples") {
  TempDir d;
  const auto r = run({"synth", "--kind", "hills", "--n", "250", "--seed", "3", "--out", d / "h.xyz"});
  CHECK(r.code == 0);
  CHECK(lines(d / "h.xyz") == 251);
  run({"synth", "--kind", "hills", "--n", "250", "--seed", "3", "--out", d / "h2.xyz"});
  CHECK(slurp(d / "h.xyz") == slurp(d / "h2.xyz"));
}

TEST_CASE("split is reproducible and complete") {
  TempDir d;
  run({"synth", "--n", "1000", "--seed", "1", "--out", d / "all.xyz"});
  for (int i = 0; i < 2; ++i) {
    const auto r = run({"split", "--input", d / "all.xyz", "--fraction", "0.1", "--seed", "5",
                        "--out-known", d / ("k" + std::to_string(i)), "--out-missing",
                        d / ("m" + std::to_string(i))});
    CHECK(r.code == 0);
  }
  CHECK(slurp(d / "k0") == slurp(d / "k1"));
  CHECK(slurp(d / "m0") == slurp(d / "m1"));
  CHECK(lines(d / "k0") == 901);
  CHECK(lines(d / "m0") == 101);
}

TEST_CASE("impute at a known location returns the stored value") {
  TempDir d;
  {
    std::ofstream(d / "known.xyz") << "x,y,value\n0,0,1\n10,0,2\n0,10,3\n10,10,4\n5,5,9\n";
    std::ofstream(d / "t.csv") << "x,y\n5,5\n";
  }
  auto r = run({"impute", "--known", d / "known.xyz", "--targets", d / "t.csv", "--out", d / "o.csv"});
  CHECK(r.code == 0);
  CHECK(slurp(d / "o.csv") == "x,y,value,mu,parameter,snapped\n5,5,9,nan,nan,1\n");
  // aidw snaps too but still reports its exponent; knn is a plain mean
  r = run({"impute", "--known", d / "known.xyz", "--targets", d / "t.csv", "--method", "aidw", "--out",
           d / "o.csv"});
  CHECK(slurp(d / "o.csv").find("5,5,9,") != std::string::npos);
  CHECK(slurp(d / "o.csv").find(",1\n") != std::string::npos);
  r = run({"impute", "--known", d / "known.xyz", "--targets", d / "t.csv", "--method", "knn",
           "--no-diagnostics", "--out", d / "o.csv"});
  CHECK(slurp(d / "o.csv") == "x,y,value\n5,5,3.8\n");
  run({"impute", "--known", d / "known.xyz", "--targets", d / "t.csv", "--no-diagnostics", "--out",
       d / "o.csv"});
  CHECK(slurp(d / "o.csv") == "x,y,value\n5,5,9\n");
}

TEST_CASE("impute fills grid NODATA cells by default") {
  TempDir d;
  std::ofstream(d / "g.asc") << "ncols 3\nnrows 3\nxllcorner 0\nyllcorner 0\ncellsize 1\n"
                                "nodata_value -9999\n1 1 1\n1 -9999 1\n1 1 1\n";
  const auto r = run({"impute", "--known", d / "g.asc", "--method", "knn", "--out", d / "o.csv"});
  CHECK(r.code == 0);
  CHECK(slurp(d / "o.csv") == "x,y,value,mu,parameter,snapped\n1.5,1.5,1,0.49999999999999994,8,0\n");
}

TEST_CASE("benchmark on a constant surface") {
  TempDir d;
  run({"synth", "--kind", "constant:5", "--n", "2000", "--seed", "2", "--out", d / "c.xyz"});
  const auto r = run({"benchmark", "--input", d / "c.xyz", "--seed", "1", "--report", d / "r.json"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("hold-out: 200 of 2000") != std::string::npos);
  const auto j = nlohmann::json::parse(slurp(d / "r.json"));
  CHECK(j["dataset"]["missing"] == 200);
  CHECK(j["config"]["shape_levels"] == "auto");
  REQUIRE(j["results"].size() == 3);
  for (const auto& row : j["results"]) {
    CAPTURE(row.dump());
    CHECK(row["points"].get<int>() + row["failures"].get<int>() == 200);
    if (row["method"] == "rbf") {
      // no constant term in the basis: reproduces 5 only approximately
      CHECK(row["rmse"].get<double>() < 5e-2);
    } else {
      CHECK(row["rmse"].get<double>() == 0.0);
    }
  }
}

TEST_CASE("benchmark outputs do not depend on the worker count") {
  TempDir d;
  run({"synth", "--n", "3000", "--seed", "4", "--out", d / "h.xyz"});
  for (const char* w : {"1", "3"}) {
    const auto r = run({"benchmark", "--input", d / "h.xyz", "--fraction", "0.2", "--workers", w,
                        "--report", d / (std::string("r") + w), "--estimates", d / (std::string("e") + w),
                        "--table", d / (std::string("t") + w)});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
  }
  CHECK(slurp(d / "e1") == slurp(d / "e3"));
  CHECK(lines(d / "e1") == 601);
  auto strip = [](nlohmann::json j) {
    j.erase("index_build_seconds");
    j["config"].erase("workers");
    for (auto& row : j["results"]) row.erase("seconds");
    return j;
  };
  CHECK(strip(nlohmann::json::parse(slurp(d / "r1"))) == strip(nlohmann::json::parse(slurp(d / "r3"))));
}

TEST_CASE("usage errors exit 2") {
  TempDir d;
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"synth", "--kind", "dunes", "--out", d / "x"}).code == kExitUsage);
  CHECK(run({"synth", "--n", "0", "--out", d / "x"}).code == kExitUsage);
  run({"synth", "--n", "50", "--out", d / "s.xyz"});
  CHECK(run({"split", "--input", d / "s.xyz", "--fraction", "1.5", "--out-known", d / "k", "--out-missing",
             d / "m"}).code == kExitUsage);
  CHECK(run({"impute", "--known", d / "s.xyz", "--out", d / "o"}).code == kExitUsage);
  CHECK(run({"impute", "--known", d / "s.xyz", "--targets", d / "s.xyz", "--levels", "1,2,3", "--out",
             d / "o"}).code == kExitUsage);
  CHECK(run({"--simd", "neon", "synth", "--out", d / "x"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
  CHECK(d.entries() == 1);
}

TEST_CASE("data errors exit 3") {
  TempDir d;
  std::ofstream(d / "bad.xyz") << "0,0,abc\n";
  std::ofstream(d / "dup.xyz") << "0,0,1\n0,0,2\n1,1,3\n";
  std::ofstream(d / "t.csv") << "0.5,0.5\n";
  auto r = run({"impute", "--known", d / "bad.xyz", "--targets", d / "t.csv", "--out", d / "o"});
  CHECK(r.code == kExitData);
  CHECK(r.err.find("line 1, column 3") != std::string::npos);
  CHECK(run({"impute", "--known", d / "dup.xyz", "--targets", d / "t.csv", "--out", d / "o"}).code ==
        kExitData);
  CHECK(run({"impute", "--known", d / "dup.xyz", "--targets", d / "t.csv", "--dedupe", "mean", "--out",
             d / "o"}).code == kExitOk);
  CHECK(run({"impute", "--known", d / "nope.xyz", "--targets", d / "t.csv", "--out", d / "o2"}).code ==
        kExitData);
  CHECK_FALSE(fs::exists(d / "o2"));
}

TEST_CASE("numerical failure exits 4 and leaves no output") {
  TempDir d;
  run({"synth", "--n", "200", "--seed", "9", "--out", d / "s.xyz"});
  std::ofstream(d / "t.csv") << "500.5,500.5\n100.25,900.75\n";
  const std::vector<std::string> base{"impute", "--known", d / "s.xyz", "--targets", d / "t.csv",
                                      "--levels", "1e9,1e9,1e9,1e9,1e9", "--out", d / "o.csv"};
  const auto r = run(base);
  CHECK(r.code == kExitNumerical);
  CHECK(r.err.find("targets failed") != std::string::npos);
  CHECK_FALSE(fs::exists(d / "o.csv"));
  CHECK(d.entries() == 2);

  auto keep = base;
  keep.push_back("--keep-going");
  const auto k = run(keep);
  CHECK(k.code == kExitOk);
  CHECK(k.err.find("warning") != std::string::npos);
  CHECK(lines(d / "o.csv") == 3);
  CHECK(slurp(d / "o.csv").find(",nan,") != std::string::npos);
}
