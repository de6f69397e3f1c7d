#include <sys/wait.h>

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(MCRSIM_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("sweep csv and json carry identical numbers") {
  const std::string common =
      "sweep --vary lambda_e_per_km2 --values 6,8,10,12 --targets d_bh_mcr,rho_deli,e_sys";
  const Run c = run(common);
  const Run j = run("--format json " + common);
  REQUIRE(c.code == 0);
  REQUIRE(j.code == 0);
  const auto rows = csv(c.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == std::vector<std::string>{"index", "lambda_e_per_km2", "d_bh_mcr", "rho_deli",
                                            "e_sys", "status", "scenario_hash",
                                            "assumed_defaults"});
  const auto doc = nlohmann::json::parse(j.out);
  REQUIRE(doc["rows"].size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& r = doc["rows"][i];
    CHECK(std::stod(rows[i + 1][2]) == r["d_bh_mcr"].get<double>());
    CHECK(std::stod(rows[i + 1][3]) == r["rho_deli"].get<double>());
    CHECK(std::stod(rows[i + 1][4]) == r["e_sys"].get<double>());
    CHECK(rows[i + 1][5] == "ok");
    CHECK(rows[i + 1][6].size() == 16);
    CHECK(rows[i + 1][6] == r["scenario_hash"].get<std::string>());
    CHECK(rows[i + 1][7].find("alpha1") != std::string::npos);
  }
  // Sweeping the EDC density lowers the backhaul delay.
  for (std::size_t i = 2; i < rows.size(); ++i)
    CHECK(std::stod(rows[i][2]) < std::stod(rows[i - 1][2]));
}

TEST_CASE("sweep rows are independent of the worker count") {
  const std::string args = "sweep --vary d_max_ms --range 15:30:4 --targets lambda_e_crit_mcr";
  const Run a = run(args);
  const Run b = run("--jobs 4 " + args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("failed rows keep their place") {
  const Run r = run("sweep --vary lambda_e_per_km2 --values 10,80 --targets d_bh_mcr");
  CHECK(r.code == 0);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1][3] == "ok");
  CHECK(rows[2][2].empty());
  CHECK(rows[2][3].rfind("error:", 0) == 0);
}

TEST_CASE("exit codes") {
  CHECK(run("optimize").code == 0);
  CHECK(run("--param d_max_ms=3 optimize").code == 2);
  CHECK(run("--param lambda_e_per_km2=abc optimize").code == 1);
  CHECK(run("--param lambda_e_per_km2=80 optimize").code == 1);
  CHECK(run("--config /nonexistent.cfg optimize").code == 1);
  CHECK(run("sweep --vary lambda_e_per_km2").code == 1);
  CHECK(run("sweep --vary lambda_e_per_km2 --values 1 --targets nope").code == 1);
  CHECK(run("no-such-command").code == 1);
  CHECK(run("--trials 2000 validate").code == 0);
}

TEST_CASE("optimize output") {
  const Run r = run("--format json optimize");
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.contains("best"));
  const Run c = run("optimize --paths 1");
  REQUIRE(c.code == 0);
  const auto rows = csv(c.out);
  CHECK(rows.size() == 501);
  int best = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) best += rows[i][7] == "1";
  CHECK(best == 1);
}
