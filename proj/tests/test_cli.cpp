#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#ifndef QCAP_BIN
#error "QCAP_BIN must point at the CLI binary"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args, const std::string& env_prefix = "") {
  std::string cmd;
  if (!env_prefix.empty()) cmd += env_prefix + " ";
  cmd += std::string(QCAP_BIN) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult res;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) res.output.append(buf, n);
  const int status = pclose(pipe);
  if (WIFEXITED(status)) res.exit_code = WEXITSTATUS(status);
  return res;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    char tmpl[] = "/tmp/qcap-cli-XXXXXX";
    REQUIRE(mkdtemp(tmpl) != nullptr);
    path = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

const std::string kSmallGrid = " --grid 16x24x24 --restarts 8";

}  // namespace

TEST_CASE("bound command") {
  SUBCASE("ensemble bound on amplitude damping as JSON") {
    const RunResult res = run("bound --channel amplitude-damping:0.25 --meas fig2-x3 "
                              "--format json --grid 20x32x32 --restarts 8");
    REQUIRE(res.exit_code == 0);
    const nlohmann::json doc = nlohmann::json::parse(res.output);
    CHECK(doc["channel"] == "amplitude-damping");
    CHECK(doc["d_in"] == 2);
    CHECK(doc["d_env"] == 2);
    CHECK(doc["bound_kind"] == "ensemble");
    CHECK(doc["terms"] == 1);
    CHECK(doc["certified"] == true);
    CHECK(doc["kind"] == "certified-upper-bound");
    const double value = doc["value"].get<double>();
    CHECK(value < 1.0 - 1e-3);
    CHECK(value > 0.85);
    CHECK(doc["s_max_term"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(value - (doc["s_max_term"].get<double>() -
                            doc["correlation_term"].get<double>())) < 1e-9);
    CHECK(!doc["grid_resolution"].get<std::string>().empty());
    CHECK(!doc["notes"].empty());
  }

  SUBCASE("simple bound with the trivial measurement returns s_max") {
    const RunResult res = run("bound --channel amplitude-damping:0.5 --meas trivial "
                              "--kind simple --format json" + kSmallGrid);
    REQUIRE(res.exit_code == 0);
    const nlohmann::json doc = nlohmann::json::parse(res.output);
    CHECK(doc["bound_kind"] == "simple");
    CHECK(doc["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(doc["certified"] == true);
  }

  SUBCASE("identity channel carries one bit") {
    const RunResult res =
        run("bound --channel identity:2 --meas trivial --format json" + kSmallGrid);
    REQUIRE(res.exit_code == 0);
    const nlohmann::json doc = nlohmann::json::parse(res.output);
    CHECK(doc["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
  }

  SUBCASE("text format prints the report fields") {
    const RunResult res = run("bound --channel amplitude-damping:0.1 --meas fig2-x3" + kSmallGrid);
    REQUIRE(res.exit_code == 0);
    CHECK(res.output.find("value:") != std::string::npos);
    CHECK(res.output.find("s_max term:") != std::string::npos);
    CHECK(res.output.find("certified") != std::string::npos);
  }

  SUBCASE("channel documents round-trip through the bound") {
    TempDir dir;
    nlohmann::json doc;
    doc["name"] = "ad-doc";
    doc["d_in"] = 2;
    doc["d_out"] = 2;
    const double s = std::sqrt(0.75);
    doc["kraus"] = {
        {{{0.0, 0.0}, {0.5, 0.0}}, {{0.0, 0.0}, {0.0, 0.0}}},
        {{{1.0, 0.0}, {0.0, 0.0}}, {{0.0, 0.0}, {s, 0.0}}},
    };
    {
      std::ofstream out(dir.file("ad.json"));
      out << doc.dump(1);
    }
    const std::string tail = " --meas fig2-x3 --format json" + kSmallGrid;
    const RunResult from_doc = run("bound --channel " + dir.file("ad.json") + tail);
    const RunResult from_zoo = run("bound --channel amplitude-damping:0.25" + tail);
    REQUIRE(from_doc.exit_code == 0);
    REQUIRE(from_zoo.exit_code == 0);
    const double v_doc = nlohmann::json::parse(from_doc.output)["value"].get<double>();
    const double v_zoo = nlohmann::json::parse(from_zoo.output)["value"].get<double>();
    CHECK(v_doc == doctest::Approx(v_zoo).epsilon(1e-12));
  }

  SUBCASE("incomplete Kraus document fails validation with exit 2") {
    TempDir dir;
    nlohmann::json doc;
    doc["name"] = "broken";
    doc["d_in"] = 2;
    doc["d_out"] = 2;
    doc["kraus"] = {
        {{{0.5, 0.0}, {0.0, 0.0}}, {{0.0, 0.0}, {0.5, 0.0}}},
    };
    {
      std::ofstream out(dir.file("broken.json"));
      out << doc.dump(1);
    }
    const RunResult res = run("bound --channel " + dir.file("broken.json") + kSmallGrid);
    CHECK(res.exit_code == 2);
    CHECK(res.output.find("residual") != std::string::npos);
  }

  SUBCASE("ragged matrix rows fail parsing with exit 1") {
    TempDir dir;
    {
      std::ofstream out(dir.file("ragged.json"));
      out << R"({"name":"ragged","d_in":2,"d_out":2,
                 "kraus":[[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0]]]]})";
    }
    const RunResult res = run("bound --channel " + dir.file("ragged.json") + kSmallGrid);
    CHECK(res.exit_code == 1);
  }

  SUBCASE("missing channel document fails with exit 1") {
    const RunResult res = run("bound --channel /nonexistent/channel.json" + kSmallGrid);
    CHECK(res.exit_code == 1);
  }

  SUBCASE("out-of-range zoo parameter fails validation with exit 2") {
    const RunResult res = run("bound --channel amplitude-damping:2.0" + kSmallGrid);
    CHECK(res.exit_code == 2);
  }

  SUBCASE("malformed --grid fails with exit 1") {
    const RunResult res = run("bound --channel amplitude-damping:0.25 --grid 10x10");
    CHECK(res.exit_code == 1);
    CHECK(res.output.find("RADIALxPOLARxAZIMUTHAL") != std::string::npos);
  }

  SUBCASE("missing required --channel fails with exit 1") {
    const RunResult res = run("bound");
    CHECK(res.exit_code == 1);
  }
}

TEST_CASE("sweep command") {
  const std::string common =
      " --p-from 0 --p-to 0.5 --steps 3 --grid 12x16x16 --restarts 6 --seed 7";

  SUBCASE("CSV output: header, rows, invariants, determinism") {
    TempDir dir;
    const std::string out1 = dir.file("sweep1.csv");
    const RunResult res = run("sweep --channel amplitude-damping --out " + out1 + common);
    REQUIRE(res.exit_code == 0);
    CHECK(res.output.find("wrote 3 rows") != std::string::npos);

    const std::string text = slurp(out1);
    const std::vector<std::string> lines = lines_of(text);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "p,s_max,c_arrow_min,c_bound,chi_lower,q1_lower,cea,certified");

    const std::vector<std::string> expected_p = {"0", "0.25", "0.5"};
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const std::vector<std::string> f = split_csv(lines[i]);
      REQUIRE(f.size() == 8);
      CHECK(f[0] == expected_p[i - 1]);
      const double s_max = std::stod(f[1]);
      const double c_arrow_min = std::stod(f[2]);
      const double c_bound = std::stod(f[3]);
      const double chi = std::stod(f[4]);
      const double q1 = std::stod(f[5]);
      const double cea = std::stod(f[6]);
      CHECK(s_max == doctest::Approx(1.0).epsilon(1e-6));
      CHECK(std::abs(c_bound - (s_max - c_arrow_min)) < 1e-7);
      CHECK(chi <= c_bound + 1e-6);
      CHECK(q1 <= chi + 1e-6);
      CHECK(cea >= chi - 1e-6);
      CHECK(f[7] == "1");
    }
    // p = 0 is lossless: the bound sits at one bit.
    CHECK(std::stod(split_csv(lines[1])[3]) == doctest::Approx(1.0).epsilon(1e-6));

    // Same seed, same bytes — also under a different thread budget.
    const std::string out2 = dir.file("sweep2.csv");
    REQUIRE(run("sweep --channel amplitude-damping --out " + out2 + common).exit_code == 0);
    CHECK(slurp(out2) == text);
    const std::string out3 = dir.file("sweep3.csv");
    REQUIRE(run("sweep --channel amplitude-damping --out " + out3 + common,
                "OMP_NUM_THREADS=1").exit_code == 0);
    CHECK(slurp(out3) == text);
  }

  SUBCASE("JSON mirror carries the config echo and identical values") {
    TempDir dir;
    const std::string out_csv = dir.file("sweep.csv");
    const std::string out_json = dir.file("sweep.json");
    REQUIRE(run("sweep --channel amplitude-damping --out " + out_csv + common).exit_code == 0);
    REQUIRE(run("sweep --channel amplitude-damping --format json --out " + out_json + common)
                .exit_code == 0);
    const nlohmann::json doc = nlohmann::json::parse(slurp(out_json));
    CHECK(doc["config"]["channel_family"] == "amplitude-damping");
    CHECK(doc["config"]["measurement"] == "fig2-x3");
    CHECK(doc["config"]["steps"] == 3);
    CHECK(doc["config"]["seed"] == 7);
    REQUIRE(doc["rows"].size() == 3);
    const std::vector<std::string> lines = lines_of(slurp(out_csv));
    for (std::size_t i = 0; i < 3; ++i) {
      const std::vector<std::string> f = split_csv(lines[i + 1]);
      CHECK(doc["rows"][i]["p"].get<double>() == std::stod(f[0]));
      CHECK(doc["rows"][i]["c_bound"].get<double>() == std::stod(f[3]));
      CHECK(doc["rows"][i]["certified"].get<bool>() == (f[7] == "1"));
    }
  }

  SUBCASE("unwritable output path fails with exit 1") {
    const RunResult res =
        run("sweep --channel amplitude-damping --out /nonexistent/dir/s.csv" + common);
    CHECK(res.exit_code == 1);
  }
}

TEST_CASE("certify command") {
  SUBCASE("identity keeps maximum capacity possible (exit 0)") {
    const RunResult res = run("certify classical --channel identity:2" + kSmallGrid);
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("MaximumCapacityPossible") != std::string::npos);
  }

  SUBCASE("amplitude damping certifies a classical gap (exit 3)") {
    const RunResult res = run("certify classical --channel amplitude-damping:0.25" + kSmallGrid);
    CHECK(res.exit_code == 3);
    CHECK(res.output.find("GapCertified") != std::string::npos);
    CHECK(res.output.find("ppt witness") != std::string::npos);
  }

  SUBCASE("amplitude damping certifies a quantum gap (exit 3)") {
    const RunResult res = run("certify quantum --channel amplitude-damping:0.25" + kSmallGrid);
    CHECK(res.exit_code == 3);
    CHECK(res.output.find("GapCertified") != std::string::npos);
  }

  SUBCASE("unknown certificate kind fails with exit 1") {
    const RunResult res = run("certify bogus --channel identity:2");
    CHECK(res.exit_code == 1);
  }
}

TEST_CASE("selftest command") {
  SUBCASE("small run passes every battery") {
    const RunResult res = run("selftest --trials 2");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("[PASS]") != std::string::npos);
    CHECK(res.output.find("[FAIL]") == std::string::npos);
    CHECK(res.output.find("selftest: all batteries passed") != std::string::npos);
  }

  SUBCASE("absurd tolerance override is a working negative control") {
    const RunResult res = run("selftest --trials 1 --tolerance 1e-15");
    CHECK(res.exit_code == 1);
    CHECK(res.output.find("[FAIL]") != std::string::npos);
    CHECK(res.output.find("selftest: FAILURES detected") != std::string::npos);
  }
}

TEST_CASE("top-level CLI") {
  SUBCASE("unknown subcommand fails with exit 1") {
    CHECK(run("frobnicate").exit_code == 1);
  }

  SUBCASE("help exits cleanly") {
    const RunResult res = run("--help");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("bound") != std::string::npos);
    CHECK(res.output.find("sweep") != std::string::npos);
  }
}
