#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "manitomo/cli.hpp"
#include "manitomo/io.hpp"

using namespace manitomo;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "manitomo-cli");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("manitomo-cli-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path only_run_dir(const fs::path& out) {
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(out)) dirs.push_back(e.path());
  REQUIRE(dirs.size() == 1);
  return dirs.front();
}

std::string value_of(const std::string& summary, const std::string& key) {
  const auto at = summary.find(key + "=");
  REQUIRE(at != std::string::npos);
  const auto start = at + key.size() + 1;
  return summary.substr(start, summary.find_first_of(" \n", start) - start);
}

const std::vector<std::string> kSmall = {"--size", "16", "--angles", "24", "--max-iters", "30"};

std::vector<std::string> with(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

TEST_CASE("config keys, canonical form and hashing") {
  cli::RunConfig cfg;
  cfg.set("noise_var", "0.25");
  cfg.set("max-iters", "12");
  CHECK(cfg.noise_var == 0.25);
  CHECK(cfg.get("noise-var") == "0.25");
  CHECK(cfg.get("alpha") == "0.1");
  CHECK_THROWS_AS(cfg.set("bogus", "1"), cli::ConfigError);
  CHECK_THROWS_AS(cfg.set("size", "twelve"), cli::ConfigError);

  const std::string canon = cfg.canonical();
  CHECK(canon.find("max-iters = 12\n") != std::string::npos);
  std::istringstream in(canon);
  const cli::RunConfig back = cli::load_config(in);
  CHECK(back.canonical() == canon);
  CHECK(back.hash("reconstruct") == cfg.hash("reconstruct"));
  CHECK(cfg.hash("reconstruct") != cfg.hash("compare"));
  CHECK(cfg.run_directory("phantom").filename().string().size() == std::string("run-").size() + 16);

  std::istringstream commented("# header\nalpha = 2 # trailing\n\nsize=64\n");
  const cli::RunConfig c2 = cli::load_config(commented);
  CHECK(c2.alpha == 2.0);
  CHECK(c2.size == 64);
  std::istringstream broken("alpha 2\n");
  CHECK_THROWS_AS(cli::load_config(broken), cli::ConfigError);
}

TEST_CASE("auto resolution and validation") {
  cli::RunConfig cfg;
  CHECK(cfg.resolved_metric() == "product");
  CHECK(cfg.resolved_param() == "polar");
  cfg.method = "lifted";
  CHECK(cfg.resolved_metric() == "sphere");
  CHECK(cfg.resolved_param() == "angle");
  cfg.op = "ray";
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = cli::RunConfig{};
  cfg.metric = "sphere";
  cfg.param = "polar";
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = cli::RunConfig{};
  cfg.nrho = 4;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = cli::RunConfig{};
  cfg.kind = "spiral";
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK_NOTHROW(cli::RunConfig{}.validate());
}

TEST_CASE("phantom subcommand") {
  const fs::path out = scratch("phantom");
  const Result r = call({"phantom", "--kind", "curl", "--size", "32", "--out", out.string()});
  REQUIRE(r.code == 0);
  const fs::path dir = only_run_dir(out);
  const VectorField f = read_field(dir / "phantom.field");
  CHECK(f.grid().height() == 32);
  CHECK(f.channels() == 2);
  CHECK(fs::exists(dir / "run_config"));
  const std::string first = slurp(dir / "phantom.field");
  REQUIRE(call({"phantom", "--kind", "curl", "--size", "32", "--out", out.string()}).code == 0);
  CHECK(slurp(dir / "phantom.field") == first);

  REQUIRE(call({"phantom", "--kind", "two-region", "--size", "16", "--out", out.string()}).code == 0);
  bool found = false;
  for (const auto& e : fs::directory_iterator(out))
    if (fs::exists(e.path() / "phantom.field") && read_field(e.path() / "phantom.field").channels() == 1) found = true;
  CHECK(found);

  const Result bad = call({"phantom", "--kind", "spiral", "--out", out.string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("error") != std::string::npos);
}

TEST_CASE("forward subcommand") {
  SUBCASE("noise-free data is identical") {
    const fs::path out = scratch("forward-clean");
    REQUIRE(call(with({"forward", "--out", out.string()}, kSmall)).code == 0);
    const fs::path dir = only_run_dir(out);
    CHECK(slurp(dir / "sino_clean") == slurp(dir / "sino_noisy"));
    const Sinogram s = read_sinogram(dir / "sino_clean");
    CHECK(s.channels() == 2);
    CHECK(s.angles_count() == 24);
    CHECK(s.offsets_count() == Geometry::default_offsets(make_grid(16)));
  }
  SUBCASE("ray transform has one channel") {
    const fs::path out = scratch("forward-ray");
    REQUIRE(call(with({"forward", "--operator", "ray", "--out", out.string()}, kSmall)).code == 0);
    CHECK(read_sinogram(only_run_dir(out) / "sino_noisy").channels() == 1);
  }
  SUBCASE("noise is reproducible and reported") {
    const fs::path out = scratch("forward-noise");
    const auto args = with({"forward", "--noise-var", "0.01", "--seed", "5", "--out", out.string()}, kSmall);
    const Result a = call(args);
    REQUIRE(a.code == 0);
    CHECK(a.out.rfind("noise sample variance ", 0) == 0);
    const double var = std::stod(a.out.substr(std::string("noise sample variance ").size()));
    CHECK(var == doctest::Approx(0.01).epsilon(0.1));
    const fs::path dir = only_run_dir(out);
    const std::string first = slurp(dir / "sino_noisy");
    REQUIRE(call(args).code == 0);
    CHECK(slurp(dir / "sino_noisy") == first);
  }
}

TEST_CASE("reconstruct subcommand") {
  SUBCASE("huge alpha gives a near-constant field") {
    const fs::path out = scratch("recon-alpha");
    const Result r = call(with({"reconstruct", "--kind", "direction-jump", "--param", "cartesian", "--metric",
                                "euclidean", "--alpha", "1e6", "--out", out.string()},
                               kSmall));
    REQUIRE(r.code == 0);
    const VectorField f = read_field(only_run_dir(out) / "reconstruction.field");
    const Eigen::RowVectorXd mean = f.data().colwise().mean();
    double spread = 0.0;
    for (int k = 0; k < f.grid().pixels(); ++k) spread = std::max(spread, (f.data().row(k) - mean).norm());
    CHECK(spread <= 1e-3);
  }
  SUBCASE("alpha = 0 decreases the fidelity") {
    const fs::path out = scratch("recon-fid");
    const Result r = call(with({"reconstruct", "--alpha", "0", "--out", out.string()}, kSmall));
    REQUIRE(r.code == 0);
    const fs::path dir = only_run_dir(out);
    const std::string trace = slurp(dir / "trace.csv");
    CHECK(trace.rfind("iter,objective,grad_norm,step\n", 0) == 0);
    std::istringstream lines(trace);
    std::string line, first, last;
    std::getline(lines, line);
    while (std::getline(lines, line)) {
      if (first.empty()) first = line;
      last = line;
    }
    auto objective = [](const std::string& l) { return std::stod(l.substr(l.find(',') + 1)); };
    CHECK(objective(last) < objective(first));
    CHECK(slurp(dir / "summary.txt") == r.out);
  }
  SUBCASE("lifted reconstruction of a noisy angle image") {
    const fs::path out = scratch("recon-lifted");
    const auto args = with({"reconstruct", "--method", "lifted", "--kind", "two-region", "--noise-var", "0.01",
                            "--alpha", "0.05", "--out", out.string()},
                           kSmall);
    const Result r = call(args);
    REQUIRE(r.code == 0);
    CHECK(std::isfinite(std::stod(value_of(r.out, "snr"))));
    CHECK(value_of(r.out, "method") == "lifted");
    const fs::path dir = only_run_dir(out);
    CHECK(read_field(dir / "reconstruction.field").channels() == 1);

    // re-running from the echoed config reproduces the result
    const std::string before = slurp(dir / "reconstruction.field");
    const Result again = call({"reconstruct", "--config", (dir / "run_config").string()});
    REQUIRE(again.code == 0);
    CHECK(again.out == r.out);
    CHECK(slurp(dir / "reconstruction.field") == before);
  }
}

TEST_CASE("compare subcommand") {
  const fs::path out = scratch("compare");
  const auto args = with({"compare", "--kind", "length-jump", "--noise-var", "1e-4", "--out", out.string()}, kSmall);
  const Result r = call(args);
  REQUIRE(r.code == 0);
  const fs::path dir = only_run_dir(out);
  const std::string table = slurp(dir / "compare.csv");
  CHECK(table == r.out);
  CHECK(table.rfind("method,param,snr,final_objective,iters\nmetric,", 0) == 0);
  CHECK(table.find("\nsobolev,") != std::string::npos);
  for (const char* f : {"metric.field", "sobolev.field", "metric_trace.csv", "sobolev_trace.csv"})
    CHECK(fs::exists(dir / f));
  CHECK(call(args).out == r.out);

  const fs::path field = out / "given.field";
  write_field(field, cli::make_phantom_field(cli::RunConfig{}));
  const Result sino_only = call({"forward", "--out", (out / "f").string(), "--size", "32", "--angles", "12"});
  REQUIRE(sino_only.code == 0);
  const fs::path sino = only_run_dir(out / "f") / "sino_noisy";
  CHECK(call({"compare", "--sino", sino.string(), "--size", "32", "--out", out.string()}).code == 2);
  CHECK(call({"compare", "--sino", sino.string(), "--truth", field.string(), "--size", "32", "--max-iters", "2",
              "--out", (out / "g").string()})
            .code == 0);
}

TEST_CASE("exit codes of the executable") {
  const fs::path out = scratch("exe");
  const std::string exe = MANITOMO_CLI_PATH;
  auto sh = [&](const std::string& args) {
    const int status = std::system((exe + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  CHECK(sh("phantom --size 16 --out " + out.string()) == 0);
  CHECK(sh("") == 2);
  CHECK(sh("phantom --no-such-flag 1") == 2);
  CHECK(sh("phantom --size 4") == 2);
  CHECK(sh("phantom --config " + (out / "missing.cfg").string()) == 2);
  CHECK(sh("reconstruct --input " + (out / "missing.field").string() + " --out " + out.string()) == 3);
  CHECK(sh("--help") == 0);
}
