#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "monokin/app.hpp"
#include "monokin/io.hpp"

using namespace monokin;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / ("monokin_cli_" + name + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

fs::path write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kVlasov =
    "scenario = vlasov\nnx = 32\nnxi = 32\nxi_max = 2.53\nt_final = 0.2\nu0 = sym\n";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("run: outputs and summary line") {
  TempDir tmp("run");
  const fs::path cfg = write_file(tmp.path / "p.cfg",
                                  "scenario = profile\nnx = 32\nnxi = 32\nxi_max = 2.53\nt_final = 1\n");
  std::ostringstream out, err;
  Overrides o;
  o.out_dir = (tmp.path / "out").string();
  REQUIRE(cmd_run(cfg.string(), o, out, err) == kExitOk);
  CHECK(out.str().rfind("run profile:", 0) == 0);
  // four equally spaced sample times by default
  int snapshots = 0;
  for (const auto& e : fs::directory_iterator(tmp.path / "out")) {
    const std::string n = e.path().filename().string();
    if (n.rfind("g_t", 0) == 0 && e.path().extension() == ".csv") ++snapshots;
  }
  CHECK(snapshots == 4);
  CHECK(fs::exists(tmp.path / "out" / "diagnostics.csv"));
  CHECK(fs::exists(tmp.path / "out" / "run.json"));
}

TEST_CASE("run: exit codes") {
  TempDir tmp("codes");
  std::ostringstream out, err;
  const fs::path bogus = write_file(tmp.path / "b.cfg", "scenario = bogus\nnx = 32\n");
  CHECK(cmd_run(bogus.string(), {}, out, err) == kExitValidation);
  CHECK(err.str().find("scenario") != std::string::npos);
  err.str("");
  CHECK(cmd_run((tmp.path / "missing.cfg").string(), {}, out, err) == kExitValidation);
  Overrides o;
  o.out_dir = (tmp.path / "blow").string();
  const fs::path blow = write_file(tmp.path / "blow.cfg",
                                   "scenario = eas\nnx = 512\nnxi = 8\nxi_max = 1\nt_final = 0.5\ndt = 0.0002\n"
                                   "u0 = -5*sin(2*pi*x)\n");
  CHECK(cmd_run(blow.string(), o, out, err) == kExitGuard);
}

TEST_CASE("report: empty directory, missing files, two runs, idempotence") {
  TempDir tmp("report");
  std::ostringstream out, err;
  CHECK(cmd_report(tmp.path.string(), out, err) == kExitValidation);
  CHECK(cmd_report((tmp.path / "nope").string(), out, err) == kExitValidation);

  const fs::path cfg = write_file(tmp.path / "v.cfg", kVlasov);
  for (const char* eps : {"0.2", "0.1"}) {
    const fs::path c = write_file(tmp.path / (std::string("v") + eps + ".cfg"),
                                  std::string(kVlasov) + "epsilon = " + eps + "\n");
    Overrides o;
    o.out_dir = (tmp.path / "runs" / eps).string();
    REQUIRE(cmd_run(c.string(), o, out, err) == kExitOk);
  }
  const fs::path runs = tmp.path / "runs";
  REQUIRE(cmd_report(runs.string(), out, err) == kExitOk);
  const CsvTable t = read_csv(runs / "summary.csv");
  CHECK(t.header.front() == "scenario");
  std::set<std::tuple<std::string, std::string, std::string, std::string>> groups;
  for (const auto& r : t.rows) groups.emplace(r[0], r[1], r[2], r[3]);
  CHECK(groups.size() == 2);

  const std::string first = slurp(runs / "summary.csv");
  REQUIRE(cmd_report(runs.string(), out, err) == kExitOk);
  CHECK(slurp(runs / "summary.csv") == first);

  fs::remove(runs / "0.1" / "diagnostics.csv");
  err.str("");
  CHECK(cmd_report(runs.string(), out, err) == kExitValidation);
  CHECK(err.str().find("diagnostics.csv") != std::string::npos);
}

TEST_CASE("sweep: single point leaves slope fields empty") {
  TempDir tmp("sweep1");
  const fs::path plan = write_file(tmp.path / "plan.cfg",
                                   std::string(kVlasov) + "sweep_param = epsilon\nsweep_values = 0.1\n");
  Overrides o;
  o.out_dir = (tmp.path / "out").string();
  std::ostringstream out, err;
  REQUIRE(cmd_sweep(plan.string(), o, out, err) == kExitOk);
  const std::string text = slurp(tmp.path / "out" / "rates.csv");
  CHECK(text.rfind("eps,t,w1_rho,w1_mom_u,w1_mom_m,w1_g\n", 0) == 0);
  const std::size_t footer = text.find("# metric,t,slope,ci_lo,ci_hi,r_squared");
  REQUIRE(footer != std::string::npos);
  std::istringstream lines(text.substr(footer));
  std::string line;
  std::getline(lines, line);
  int fits = 0;
  while (std::getline(lines, line)) {
    ++fits;
    CHECK(line.find(",,,,") != std::string::npos);
  }
  CHECK(fits > 0);
}

TEST_CASE("sweep: rows ordered by decreasing eps and slopes present") {
  TempDir tmp("sweep2");
  const fs::path plan = write_file(tmp.path / "plan.cfg",
                                   std::string(kVlasov) + "sweep_param = epsilon\nsweep_values = 0.4, 0.2, 0.1\n");
  Overrides o;
  o.out_dir = (tmp.path / "out").string();
  std::ostringstream out, err;
  REQUIRE(cmd_sweep(plan.string(), o, out, err) == kExitOk);
  const CsvTable t = read_csv(tmp.path / "out" / "rates.csv");
  REQUIRE(!t.rows.empty());
  double prev_eps = INFINITY, prev_t = -1.0;
  for (const auto& r : t.rows) {
    const double eps = std::stod(r[0]), tt = std::stod(r[1]);
    CHECK((eps < prev_eps || (eps == prev_eps && tt > prev_t)));
    prev_eps = eps;
    prev_t = tt;
  }
  const std::string text = slurp(tmp.path / "out" / "rates.csv");
  CHECK(text.find("# w1_rho,") != std::string::npos);
  CHECK(fs::exists(tmp.path / "out" / "epsilon_0.1" / "run.json"));
}

TEST_CASE("sweep: failing member gives exit 4 naming the point") {
  TempDir tmp("sweepfail");
  // a wide profile does not fit the xi-box, so every member fails at start
  const fs::path plan = write_file(tmp.path / "plan.cfg",
                                   std::string(kVlasov) + "sigma_g0 = 2\nsweep_param = epsilon\nsweep_values = 0.2, 0.1\n");
  Overrides o;
  o.out_dir = (tmp.path / "out").string();
  std::ostringstream out, err;
  CHECK(cmd_sweep(plan.string(), o, out, err) == kExitSweepMember);
  CHECK(err.str().find("epsilon = 0.2") != std::string::npos);
  err.str("");
  const fs::path bad = write_file(tmp.path / "bad.cfg", std::string(kVlasov) + "sweep_param = epsilon\nsweep_values = 0.1, 0.2\n");
  CHECK(cmd_sweep(bad.string(), o, out, err) == kExitValidation);
}

}  // TEST_SUITE
