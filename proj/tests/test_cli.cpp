#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "cli_util.hpp"

using cli_util::run;
using cli_util::slurp;

namespace {

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("list prints 23 functions") {
  const auto r = run("list");
  CHECK(r.code == 0);
  CHECK(count_lines(r.out) == 24);  // header + 23 rows
  CHECK(r.out.find("9,rastrigin,") != std::string::npos);
  const auto j = run("list --json");
  CHECK(j.code == 0);
  CHECK(nlohmann::json::parse(j.out).size() == 23);
}

TEST_CASE("usage errors exit with 1 and explain themselves") {
  auto r = run("run --function 24");
  CHECK(r.code == 1);
  CHECK(r.err.find("1..23") != std::string::npos);
  r = run("run --function 16 --dim 30");
  CHECK(r.code == 1);
  CHECK(r.err.find("dimension") != std::string::npos);
  r = run("run --algorithm pso --function 1");
  CHECK(r.code == 1);
  r = run("frobnicate");
  CHECK(r.code == 1);
  r = run("");
  CHECK(r.code == 1);
  r = run("run --function 1 --dim 2 --iters 2 --out /nonexistent-dir/x.json");
  CHECK(r.code == 1);
  CHECK(r.err.find("cannot open") != std::string::npos);
  CHECK(run("--help").code == 0);
}

TEST_CASE("run writes a RunRecord JSON") {
  const auto dir = cli_util::scratch_dir();
  const auto path = dir / "run.json";
  const auto r = run("run --algorithm hfasson --function 1 --dim 30 --seed 7 --iters 50 --out " + path.string());
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(path));
  CHECK(j.at("algorithm") == "HFASSON");
  CHECK(j.at("function_id") == 1);
  CHECK(j.at("dimension") == 30);
  CHECK(j.at("seed") == 7);
  CHECK(j.at("trace").size() == 51);
  CHECK(j.at("final_fitness").get<double>() <= 1e-16);
  CHECK(j.contains("wall_ms"));
  CHECK(j.at("command").get<std::string>().find("--seed 7") != std::string::npos);
}

TEST_CASE("config file feeds the optimizer") {
  const auto dir = cli_util::scratch_dir();
  const auto cfg = dir / "opt.cfg";
  std::ofstream(cfg) << "# small run\npopulation = 6\niter_max: 5\n";
  auto r = run("run --function 5 --dim 4 --config " + cfg.string());
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("config").at("population") == 6);
  CHECK(j.at("trace").size() == 6);
  std::ofstream(cfg) << "channels = 3\n";
  CHECK(run("run --function 5 --dim 4 --config " + cfg.string()).code == 1);
}

TEST_CASE("plan and stats") {
  const auto dir = cli_util::scratch_dir();
  const auto csv = dir / "plan.csv";
  const auto js = dir / "plan.json";
  const auto r = run("plan --algorithm hfasso,hfasson --function 1,9-10 --dim 5 --trials 2 --pop 8 --iters 20 --out " +
                     csv.string() + " --json " + js.string());
  REQUIRE(r.code == 0);
  const std::string text = slurp(csv);
  CHECK(text.rfind("# nrswarm plan", 0) == 0);
  CHECK(text.find("algorithm,function,dimension,best,mean,trials\n") != std::string::npos);
  CHECK(count_lines(text) == 1 + 1 + 6);
  CHECK(nlohmann::json::parse(slurp(js)).at("cells").size() == 6);

  const auto ranks = dir / "ranks.csv";
  const auto s = run("stats --input " + csv.string() + " --out " + ranks.string());
  REQUIRE(s.code == 0);
  CHECK(s.err.find("rank-sum check") != std::string::npos);
  CHECK(s.err.find("ok") != std::string::npos);
  const std::string rk = slurp(ranks);
  CHECK(rk.find("algorithm,avg_rank,first_places,chi2,df,problems\n") != std::string::npos);
  CHECK(rk.find("HFASSON,") != std::string::npos);
  CHECK(run("stats --input /nonexistent.csv").code == 1);
  CHECK(run("stats --input " + csv.string() + " --basis median").code == 1);
}

TEST_CASE("roc and vanet produce CSV") {
  const auto r = run("roc --snr -10,0 --thresholds 900,1000,1100 --trials 200 --seed 3");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("snr_db,threshold,pfa,pd\n") != std::string::npos);
  CHECK(count_lines(r.out) == 2 + 1 + 6);

  const auto dir = cli_util::scratch_dir();
  const auto cfg = dir / "scenario.cfg";
  std::ofstream(cfg) << "slot_count = 100\nmc_trials = 100\niter_max = 10\npopulation = 6\n";
  const auto v = run("vanet --vehicles 20,40 --trials 2 --seed 1 --config " + cfg.string());
  REQUIRE(v.code == 0);
  CHECK(v.out.find("vehicles,seed,utilization_pct,baseline_pct") != std::string::npos);
  std::ofstream(cfg) << "warp_drive = 1\n";
  CHECK(run("vanet --config " + cfg.string()).code == 1);
}

TEST_CASE("repeated commands give byte-identical output") {
  const std::string cmds[] = {
      "list",
      "plan --algorithm hfasson --function 1,16 --dim 5 --trials 2 --pop 6 --iters 10 --seed 4",
      "roc --snr -10 --thresholds 950,1050 --trials 300 --seed 2",
  };
  for (const std::string& c : cmds) {
    const auto a = run(c);
    const auto b = run(c);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
  const auto a = run("run --function 10 --dim 6 --iters 15 --seed 9");
  const auto b = run("run --function 10 --dim 6 --iters 15 --seed 9 --workers 1");
  const auto c = run("run --function 10 --dim 6 --iters 15 --seed 9");
  CHECK(cli_util::without_wall_time(a.out) == cli_util::without_wall_time(c.out));
  // the command echo differs, the results do not
  auto ja = nlohmann::json::parse(a.out), jb = nlohmann::json::parse(b.out);
  CHECK(ja.at("trace") == jb.at("trace"));
  CHECK(ja.at("final_position") == jb.at("final_position"));
}
