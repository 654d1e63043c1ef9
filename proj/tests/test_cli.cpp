#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptolemy/textio.hpp"

using json = nlohmann::json;

namespace {

std::string temp_path(const std::string& name) {
  return "/tmp/ptolemy_cli_" + std::to_string(getpid()) + "_" + name;
}

int run_cli(const std::string& args, const std::string& stdout_path = "") {
  std::string cmd = std::string(PTOLEMY_CLI_PATH) + " " + args;
  if (!stdout_path.empty()) cmd += " > " + stdout_path;
  cmd += " 2> /dev/null";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.push_back("");
  return out;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    if (line.empty() || line[0] == '#') continue;
    rows.push_back(split(line, ','));
  }
  return rows;
}

constexpr const char* kSweepHeader =
    "curve,eps,estimate,closed_form,lower_bound,upper_bound,abs_error,status,"
    "t1,t2,t3,t4,grid_best,seconds,note";

}  // namespace

TEST_CASE("estimate emits a complete JSON record for the ellipse") {
  const std::string out = temp_path("est.json");
  CHECK(run_cli("estimate --curve ellipse:0.8", out) == 0);
  const json j = json::parse(slurp(out));
  CHECK(j["curve"] == "ellipse:0.8");
  CHECK(std::fabs(j["value"].get<double>() - 17.0 / 15.0) <= 1e-6);
  CHECK(std::fabs(j["closed_form"].get<double>() - 17.0 / 15.0) <= 1e-6);
  CHECK(std::fabs(j["lower_bound"].get<double>() -
                  j["closed_form"].get<double>()) <= 1e-9);
  CHECK(std::fabs(j["upper_bound"].get<double>() - 1.2360679774997896) <= 1e-6);
  CHECK(j["status"] == "InteriorMaximum");
  CHECK(j["argmax"].size() == 4);
  CHECK(j["refinements_run"].get<int>() >= 1);
  CHECK(j["grid_best"].get<double>() <= j["value"].get<double>() + 1e-12);
  std::remove(out.c_str());
}

TEST_CASE("estimate on the circle returns 1") {
  const std::string out = temp_path("circle.json");
  CHECK(run_cli("estimate --curve ellipse:0", out) == 0);
  const json j = json::parse(slurp(out));
  CHECK(std::fabs(j["value"].get<double>() - 1.0) <= 1e-9);
  std::remove(out.c_str());
}

TEST_CASE("estimate on an open case omits the closed form") {
  const std::string out = temp_path("open_est.json");
  CHECK(run_cli("estimate --curve reuleaux", out) == 0);
  const json j = json::parse(slurp(out));
  CHECK_FALSE(j.contains("closed_form"));
  CHECK(j.contains("status"));
  CHECK(j["value"].get<double>() >= 1.0);
  std::remove(out.c_str());
}

TEST_CASE("estimate output is deterministic") {
  const std::string a = temp_path("det_a.json");
  const std::string b = temp_path("det_b.json");
  CHECK(run_cli("estimate --curve polygon:6 --seed 3", a) == 0);
  CHECK(run_cli("estimate --curve polygon:6 --seed 3", b) == 0);
  CHECK(slurp(a) == slurp(b));
  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST_CASE("malformed arguments exit with code 2") {
  CHECK(run_cli("estimate --curve nonsense") == 2);
  CHECK(run_cli("estimate --curve ellipse:1.5") == 2);
  CHECK(run_cli("estimate --curve ellipse:0..3") == 2);
  CHECK(run_cli("estimate --curve polygon:2") == 2);
  CHECK(run_cli("estimate") == 2);              // missing --curve
  CHECK(run_cli("estimate --curve ellipse:0.5 --format yaml") == 2);
  CHECK(run_cli("villain") == 2);               // unknown subcommand
  CHECK(run_cli("") == 2);                      // no subcommand
  CHECK(run_cli("sweep --curve polygon:6 --eps-min 0 --eps-max 0.5 --steps 2") ==
        2);
  CHECK(run_cli("sweep --curve ellipse --eps-min 0.5 --eps-max 0.2 --steps 2") ==
        2);
  CHECK(run_cli("estimate --curve ellipse:0.5 --out /nonexistent/dir/x.json") ==
        2);
  CHECK(run_cli("limit --eps 0 --factor 1.5") == 2);
  CHECK(run_cli("limit --eps 0.95") == 2);  // outside the flat branch
  CHECK(run_cli("hessian --eps 1.0") == 2);
}

TEST_CASE("sweep writes the documented CSV schema") {
  const std::string out = temp_path("sweep.csv");
  const std::string log = temp_path("sweep.log");
  CHECK(run_cli("sweep --curve ellipse --eps-min 0 --eps-max 0.9 --steps 10 "
                "--out " + out, log) == 0);
  const std::string text = slurp(out);
  std::istringstream stream(text);
  std::string header;
  std::getline(stream, header);
  CHECK(header == kSweepHeader);

  const auto rows = parse_csv(text);
  REQUIRE(rows.size() == 11);  // header + 10 rows
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].size() == 15);
  }
  // eps spacing inclusive of both endpoints
  CHECK(std::stod(rows[1][1]) == 0.0);
  CHECK(std::fabs(std::stod(rows[10][1]) - 0.9) <= 1e-12);
  // the eps = 0.8 row carries the known closed form
  CHECK(std::fabs(std::stod(rows[9][3]) - 17.0 / 15.0) <= 1e-9);
  CHECK(std::fabs(std::stod(rows[9][2]) - 17.0 / 15.0) <= 1e-6);
  // summary line reports the worst row
  CHECK(slurp(log).rfind("max_abs_error:", 0) == 0);

  // numeric fields round-trip at 10 significant digits
  for (std::size_t i = 1; i < rows.size(); ++i) {
    for (int col : {1, 2, 3, 4, 5, 6, 8, 9, 10, 11, 12}) {
      const std::string& field = rows[i][static_cast<std::size_t>(col)];
      REQUIRE_FALSE(field.empty());
      CHECK(ptolemy::format_sig10(std::stod(field)) == field);
    }
  }
  std::remove(out.c_str());
  std::remove(log.c_str());
}

TEST_CASE("sweep estimates track the closed forms across eccentricities") {
  const std::string out = temp_path("correct.csv");
  CHECK(run_cli("sweep --curve ellipse --eps-min 0 --eps-max 0.95 --steps 20 "
                "--out " + out, "/dev/null") == 0);
  double worst_ellipse = 0.0;
  for (auto rows = parse_csv(slurp(out)); const auto& row : rows) {
    if (row[0] == "curve") continue;
    worst_ellipse = std::max(worst_ellipse, std::stod(row[6]));
  }
  CHECK(worst_ellipse <= 1e-6);

  CHECK(run_cli("sweep --curve rectangle --eps-min 0 --eps-max 0.95 --steps 20 "
                "--out " + out, "/dev/null") == 0);
  double worst_rect = 0.0;
  bool saw_degenerate = false;
  for (auto rows = parse_csv(slurp(out)); const auto& row : rows) {
    if (row[0] == "curve") continue;
    worst_rect = std::max(worst_rect, std::stod(row[6]));
    saw_degenerate = saw_degenerate || row[7] == "DegenerateLimit";
  }
  CHECK(worst_rect <= 1e-5);
  CHECK(saw_degenerate);  // the flat branch is a boundary supremum
  std::remove(out.c_str());
}

TEST_CASE("sweep rows straddling the rectangle transition show the branch switch") {
  const std::string out = temp_path("rect.csv");
  CHECK(run_cli("sweep --curve rectangle --eps-min 0.8 --eps-max 0.95 "
                "--steps 4 --out " + out, "/dev/null") == 0);
  const auto rows = parse_csv(slurp(out));
  REQUIRE(rows.size() == 5);
  // eps = 0.8, 0.85 sit on the flat branch; 0.9, 0.95 on the steep branch
  CHECK(std::fabs(std::stod(rows[1][3]) - std::numbers::sqrt2) <= 1e-9);
  CHECK(std::fabs(std::stod(rows[2][3]) - std::numbers::sqrt2) <= 1e-9);
  CHECK(std::stod(rows[3][3]) > std::numbers::sqrt2 + 1e-3);
  CHECK(std::stod(rows[4][3]) > std::stod(rows[3][3]));
  std::remove(out.c_str());
}

TEST_CASE("sweep rows at the transition carry both branch values in the note") {
  const std::string out = temp_path("note.csv");
  CHECK(run_cli("sweep --curve rectangle --eps-min 0.8660254 --eps-max "
                "0.8660254 --steps 1 --out " + out, "/dev/null") == 0);
  const auto rows = parse_csv(slurp(out));
  REQUIRE(rows.size() == 2);
  const std::string& note = rows[1][14];
  CHECK(note.find("branch_flat=") != std::string::npos);
  CHECK(note.find("branch_steep=") != std::string::npos);
  std::remove(out.c_str());
}

TEST_CASE("repeated sweeps are identical except the seconds column") {
  const std::string a = temp_path("rep_a.csv");
  const std::string b = temp_path("rep_b.csv");
  const std::string args =
      "sweep --curve ellipse --eps-min 0.1 --eps-max 0.7 --steps 4 --out ";
  CHECK(run_cli(args + a, "/dev/null") == 0);
  CHECK(run_cli(args + b, "/dev/null") == 0);
  const auto rows_a = parse_csv(slurp(a));
  const auto rows_b = parse_csv(slurp(b));
  REQUIRE(rows_a.size() == rows_b.size());
  for (std::size_t i = 0; i < rows_a.size(); ++i) {
    REQUIRE(rows_a[i].size() == rows_b[i].size());
    for (std::size_t col = 0; col < rows_a[i].size(); ++col) {
      if (col == 13) continue;  // seconds
      CHECK(rows_a[i][col] == rows_b[i][col]);
    }
  }
  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST_CASE("hessian report at eps = 0.6") {
  const std::string out = temp_path("hess.json");
  CHECK(run_cli("hessian --eps 0.6", out) == 0);
  const json j = json::parse(slurp(out));
  CHECK(j["max_diff"].get<double>() <= 1e-4);
  CHECK(j["gradient_norm"].get<double>() <= 1e-6);
  CHECK(j["closed_form_classification"] == "Maximum");
  CHECK(j["finite_difference_classification"] == "Maximum");
  CHECK(j["closed_form"].size() == 4);
  CHECK(j["finite_difference"][0].size() == 4);
  std::remove(out.c_str());
}

TEST_CASE("hessian report on the circle") {
  const std::string out = temp_path("hess0.json");
  CHECK(run_cli("hessian --eps 0", out) == 0);
  const json j = json::parse(slurp(out));
  CHECK(j["closed_form_classification"] == "Inconclusive");
  double max_entry = 0.0;
  for (const auto& row : j["finite_difference"]) {
    for (const auto& v : row) {
      max_entry = std::max(max_entry, std::fabs(v.get<double>()));
    }
  }
  CHECK(max_entry <= 1e-8);
  std::remove(out.c_str());
}

TEST_CASE("hessian gradient norm at high eccentricity") {
  const std::string out = temp_path("hess9.json");
  CHECK(run_cli("hessian --eps 0.9 --step 1e-3", out) == 0);
  const json j = json::parse(slurp(out));
  CHECK(j["gradient_norm"].get<double>() <= 1e-6);
  std::remove(out.c_str());
}

TEST_CASE("limit table converges to sqrt(2) at first order") {
  const std::string out = temp_path("limit.json");
  CHECK(run_cli("limit --eps 0 --delta-start 0.1 --factor 0.5 --count 10 "
                "--format json --out " + out, "/dev/null") == 0);
  const json j = json::parse(slurp(out));
  REQUIRE(j["rows"].size() == 10);
  CHECK(j["monotone_decrease"].get<bool>());
  CHECK(std::fabs(j["fitted_order"].get<double>() - 1.0) <= 0.2);
  CHECK(j["rows"].back()["abs_gap"].get<double>() <= 1e-3);
  std::remove(out.c_str());
}

TEST_CASE("limit CSV rows carry delta, ratio and the gap to sqrt(2)") {
  const std::string out = temp_path("limit.csv");
  CHECK(run_cli("limit --eps 0.5 --count 3 --out " + out, "/dev/null") == 0);
  const auto rows = parse_csv(slurp(out));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"delta", "ratio", "abs_gap"});
  CHECK(std::fabs(std::stod(rows[1][0]) - 0.1) <= 1e-12);
  const double gap = std::stod(rows[1][2]);
  CHECK(std::fabs(std::stod(rows[1][1]) + gap - std::numbers::sqrt2) <= 1e-9);
  std::remove(out.c_str());
}

TEST_CASE("limit with a single row") {
  const std::string out = temp_path("limit1.csv");
  CHECK(run_cli("limit --eps 0 --count 1 --out " + out, "/dev/null") == 0);
  CHECK(parse_csv(slurp(out)).size() == 2);
  std::remove(out.c_str());
}

TEST_CASE("open control case reproduces the known ellipse constant") {
  const std::string out = temp_path("openctl.json");
  CHECK(run_cli("open --curve ellipse:0.5 --seeds 3", out) == 0);
  const json j = json::parse(slurp(out));
  REQUIRE(j["values"].size() == 3);
  for (const auto& v : j["values"]) {
    CHECK(std::fabs(v.get<double>() - 1.0103629710818451) <= 1e-6);
  }
  CHECK(j["spread"].get<double>() <= 1e-8);
  CHECK_FALSE(j["unstable"].get<bool>());
  std::remove(out.c_str());
}

TEST_CASE("open reports stability for the hexagon") {
  const std::string out = temp_path("openhex.json");
  CHECK(run_cli("open --curve polygon:6 --seeds 5", out) == 0);
  const json j = json::parse(slurp(out));
  REQUIRE(j["values"].size() == 5);
  REQUIRE(j["statuses"].size() == 5);
  CHECK(j["rng_seeds"] == json::array({1, 2, 3, 4, 5}));
  CHECK(j["spread"].get<double>() <= 1e-5);
  CHECK_FALSE(j["unstable"].get<bool>());
  CHECK(j["best_value"].get<double>() >= 1.0);
  std::remove(out.c_str());
}
