#include <Eigen/Eigenvalues>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "geophase/sweep.hpp"
#include "test_util.hpp"

using namespace geophase;
using std::numbers::pi;
using testing::error_code_of;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

int count_of(const std::string& text, const std::string& needle) {
  int n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

// Minimal XML check: every open tag is closed in order; comments and the
// prolog are skipped; self-closing tags need no partner.
bool tags_balanced(const std::string& xml) {
  std::vector<std::string> stack;
  const std::regex tag(R"(<(/?)([A-Za-z][A-Za-z0-9_:-]*)[^>]*?(/?)>)");
  for (auto it = std::sregex_iterator(xml.begin(), xml.end(), tag); it != std::sregex_iterator();
       ++it) {
    const auto& m = *it;
    if (m[3].length() > 0) continue;
    if (m[1].length() == 0) {
      stack.push_back(m[2]);
    } else {
      if (stack.empty() || stack.back() != m[2]) return false;
      stack.pop_back();
    }
  }
  return stack.empty();
}

SweepConfig small_config() {
  SweepConfig c;
  c.g_min = 0.0;
  c.g_max = 1.0;
  c.g_steps = 5;
  c.n_time = 512;
  return c;
}

}  // namespace

TEST_CASE("config defaults, grid and validation") {
  SweepConfig c;
  CHECK(c.theta == doctest::Approx(pi / 4));
  CHECK(c.coupling_form == CouplingForm::xy);
  CHECK(c.g_steps == 51);
  CHECK(c.g_at(0) == 0.0);
  CHECK(c.g_at(50) == 1.0);
  CHECK(c.g_at(25) == doctest::Approx(0.5));
  CHECK(c.model_at(10).g == doctest::Approx(0.2));
  c.validate();
  c.g_steps = 0;
  CHECK(error_code_of([&] { c.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("config JSON round trip and unknown keys") {
  SweepConfig c = small_config();
  c.theta = 1.0;
  c.coupling_form = CouplingForm::ising_zz;
  c.csv = "out.csv";
  SweepConfig back;
  apply_config_json(config_to_json(c), back);
  CHECK(config_to_json(back) == config_to_json(c));
  CHECK(back.coupling_form == CouplingForm::ising_zz);

  SweepConfig partial;
  apply_config_json(nlohmann::json{{"theta", 0.5}}, partial);
  CHECK(partial.theta == 0.5);
  CHECK(partial.g_steps == 51);
  CHECK(error_code_of([&] { apply_config_json(nlohmann::json{{"thetaa", 0.5}}, partial); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("CSV layout for a single point") {
  SweepConfig c = small_config();
  c.g_steps = 1;
  c.g_max = c.g_min;
  const auto lines = lines_of(format_csv(run_sweep(c)));
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] ==
        "g,m,gamma_composite,gamma_I,gamma_II,gamma_sum,additivity_gap,p1,resultant_I,"
        "resultant_II,status");
  for (int m = 1; m <= 4; ++m) {
    CHECK(lines[m].rfind("0," + std::to_string(m) + ",", 0) == 0);
    CHECK(lines[m].substr(lines[m].size() - 3) == ",ok");
    CHECK(count_of(lines[m], ",") == 10);
  }
}

TEST_CASE("sweep examples") {
  const PhaseTable table = run_sweep(small_config());
  REQUIRE(table.size() == 5);
  // g = 0: products, so subsystem phases add up.
  for (const LevelEntry& e : table[0].levels) {
    CHECK(e.status == "ok");
    CHECK(e.additivity_gap <= 1e-8);
    CHECK(e.p1 == doctest::Approx(1.0));
  }
  // g = 0.5: entangled, additivity fails.
  double widest = 0.0;
  for (const LevelEntry& e : table[2].levels) {
    CHECK(e.status == "ok");
    CHECK(e.p1 < 1 - 1e-6);
    widest = std::max(widest, e.additivity_gap);
  }
  CHECK(widest > 1e-3);
  // Levels pair up as gamma and -gamma.
  for (const PhaseRow& row : table) {
    const auto& l = row.levels;
    CHECK(circle_distance(l[0].gamma_composite, -l[3].gamma_composite) <= 1e-9);
    CHECK(circle_distance(l[1].gamma_composite, -l[2].gamma_composite) <= 1e-9);
  }
}

TEST_CASE("a near-crossing lands in the status column") {
  double crossing_g = -1.0;
  for (int j = 1; j <= 60 && crossing_g < 0; ++j) {
    const double g = std::ldexp(1.0, -j);
    Eigen::SelfAdjointEigenSolver<Operator4> es(hamiltonian({pi / 4, g, CouplingForm::xy, 64}, 0.0));
    const auto e = es.eigenvalues();
    if (std::min({e(1) - e(0), e(2) - e(1), e(3) - e(2)}) < 1e-6) crossing_g = g;
  }
  REQUIRE(crossing_g > 0);
  const PhaseRow row = evaluate_point({pi / 4, crossing_g, CouplingForm::xy, 256});
  for (const LevelEntry& e : row.levels) {
    CHECK(e.status == "GapCollapse");
    CHECK(std::isnan(e.gamma_composite));
  }
  SweepConfig c = small_config();
  c.g_steps = 1;
  c.g_min = c.g_max = crossing_g;
  CHECK(format_csv(run_sweep(c)).find(",nan,") != std::string::npos);
}

TEST_CASE("JSON table carries metadata and every cell") {
  const SweepConfig c = small_config();
  const nlohmann::json j = table_to_json(run_sweep(c), c);
  CHECK(j["metadata"]["tool"] == "geophase");
  CHECK(j["metadata"]["version"] == kToolVersion);
  CHECK(j["metadata"]["config"]["g_steps"] == 5);
  REQUIRE(j["rows"].size() == 20);
  CHECK(j["rows"][0]["m"] == 1);
  CHECK(j["rows"][7]["status"] == "ok");
  const auto reparsed = nlohmann::json::parse(j.dump(2));
  CHECK(reparsed == j);
}

TEST_CASE("SVG is well formed with sixteen curves and a legend") {
  const SweepConfig c = small_config();
  const std::string svg = format_svg(run_sweep(c), c);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(tags_balanced(svg));
  CHECK(count_of(svg, "<polyline") == 16);
  for (const char* label : {"composite system", "subsystem I", "subsystem II", "sum of subsystems"}) {
    CHECK(svg.find(label) != std::string::npos);
  }
}

TEST_CASE("writers produce files and report bad paths") {
  const SweepConfig c = small_config();
  const PhaseTable table = run_sweep(c);
  const auto dir = std::filesystem::temp_directory_path() / "geophase_sweep_test";
  std::filesystem::create_directories(dir);
  emit_csv(table, dir / "t.csv");
  emit_json(table, c, dir / "t.json");
  emit_svg(table, c, dir / "t.svg");
  std::ifstream in(dir / "t.csv", std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == format_csv(table));
  CHECK(std::filesystem::file_size(dir / "t.json") > 0);
  CHECK(std::filesystem::file_size(dir / "t.svg") > 0);
  std::filesystem::remove_all(dir);
  try {
    emit_csv(table, "/nonexistent-dir/t.csv");
    FAIL("expected an I/O error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("/nonexistent-dir/t.csv") != std::string::npos);
  }
}

TEST_CASE("sweep output is reproducible") {
  const SweepConfig c = small_config();
  CHECK(format_csv(run_sweep(c)) == format_csv(run_sweep(c)));
  CHECK(table_to_json(run_sweep(c), c).dump() == table_to_json(run_sweep(c), c).dump());
}
