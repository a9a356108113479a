// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "erasurelab/erasurelab.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace erasurelab;
using report::Json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, double time_limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > time_limit_s) {
    o.pass = false;
    o.detail += "; runtime over limit";
  }
  if (!o.pass) ++failures;
  std::printf("%s criterion %d: %s (%.2f s, limit %.0f s)\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str(), secs,
              time_limit_s);
  std::fflush(stdout);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// --- CLI helpers ------------------------------------------------------------

const fs::path& scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("erasurelab-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ERASURELAB_CLI) + " " + args + " > /dev/null 2> " +
                          (scratch() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- criteria ---------------------------------------------------------------

Outcome special_functions() {
  const double lo = -std::exp(-1.0);
  double worst_w = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double z = lo + (10.0 - lo) * i / 999.0;
    const double w = specfun::lambert_w0(z);
    worst_w = std::max(worst_w, std::abs(w * std::exp(w) - z) / std::max(1.0, std::abs(z)));
  }
  std::mt19937_64 gen(20240601);
  std::uniform_real_distribution<double> s_dist(0.05, 50.0), z_dist(0.0, 80.0);
  double worst_g = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double s = s_dist(gen), z = z_dist(gen);
    worst_g = std::max(worst_g, std::abs(specfun::reg_lower_gamma(s, z) - oracle::series_lower_gamma(s, z)));
  }
  return {worst_w <= 1e-12 && worst_g <= 1e-9,
          "max Lambert residual " + fmt(worst_w) + ", max gamma deviation " + fmt(worst_g)};
}

Outcome t_pm1_value() {
  const double t = pm1::t_pm1();
  const double residual = std::abs((1 - t) * std::log(1 - t) + t * std::log(t) + (1 - t) / 6.0);
  return {std::abs(t - 0.0376) <= 5e-4 && residual <= 1e-9, "t = " + fmt(t) + ", residual " + fmt(residual)};
}

Outcome q_identity() {
  double worst = 0.0;
  for (double alpha : {0.1, 0.5, 1.0, 2.0, 5.0})
    for (int j = 1; j <= 9; ++j) {
      const double lam = j / 10.0;
      const double u = gauss::q_small(alpha, lam) * (1.0 - lam);
      worst = std::max(worst, std::abs(std::log(u) - u + 1.2 + 2.0 * alpha * (1.0 - lam)));
    }
  return {worst <= 1e-9, "max residual " + fmt(worst) + " over 45 grid points"};
}

Outcome khinchine() {
  const double p0 = pm1::p0_khinchine();
  const double residual = std::abs(std::tgamma(0.5 * (p0 + 1.0)) - std::sqrt(std::numbers::pi) / 2.0);
  bool ok = p0 >= 1.846 && p0 <= 1.849 && residual <= 1e-10;
  std::string detail = "p0 = " + fmt(p0) + ", residual " + fmt(residual);
  for (double p : {1.0, 3.0, 4.0}) {
    const auto k = mc::verify_khinchine(p, 8, 1'000'000, 77 + static_cast<std::uint64_t>(p));
    ok = ok && k.within;
    detail += "; p=" + fmt(p) + " root " + fmt(k.moment_root) + " in [" + fmt(k.a * (1 - k.delta)) + ", " +
              fmt(k.b * (1 + k.delta)) + "]";
  }
  return {ok, detail};
}

Outcome bound_validity() {
  mc::SuiteOptions opt;
  opt.trials = 10000;
  opt.seed = 1;
  opt.only = {"khb", "concentration", "smax", "chi2", "square_smin", "order_stats"};
  const auto checks = mc::run_verification_suite(opt);
  bool ok = checks.size() >= opt.only.size();
  std::string detail;
  for (const auto& c : checks) {
    const bool holds = c.upper_confidence <= c.theoretical_bound;
    ok = ok && holds;
    if (!holds) detail += c.name + " upper " + fmt(c.upper_confidence) + " > " + fmt(c.theoretical_bound) + "; ";
  }
  // The chi-square bound must also dominate the exact lower-tail probability.
  const double q = gauss::q_small(0.05, 0.5);
  const double exact = specfun::chi2_lower_cdf(20, q * 10);
  ok = ok && exact <= std::exp(-0.5);
  detail += std::to_string(checks.size()) + " checks at 1e4 trials, exact chi2 cdf " + fmt(exact) + " <= " +
            fmt(std::exp(-0.5));
  return {ok, detail};
}

Outcome nerf_reproduction() {
  struct Case {
    std::size_t rows, cols;
    double beta, reference;
  };
  const Case cases[] = {{800, 400, 0.25, 11.011}, {1200, 240, 0.08, 2.863}, {1200, 240, 0.72, 12.024}};
  bool ok = true;
  std::string detail;
  std::uint64_t i = 0;
  for (const auto& c : cases) {
    mc::SimConfig cfg;
    cfg.rows = c.rows;
    cfg.cols = c.cols;
    cfg.beta = c.beta;
    cfg.trials = 1000;
    cfg.master_seed = rng::stream_seed(2024, i++);
    cfg.quantiles = {0.9};
    const auto s = mc::run_nerf_sim(cfg);
    const double q90 = s.quantiles.front().value;
    const double ref_gap = std::abs(q90 - c.reference) / c.reference;
    const double mp_gap = std::abs(q90 - s.marchenko_pastur_cond) / s.marchenko_pastur_cond;
    ok = ok && ref_gap <= 0.20 && mp_gap <= 0.25;
    detail += std::to_string(c.rows) + "x" + std::to_string(c.cols) + " beta " + fmt(c.beta) + ": q90 " + fmt(q90) +
              " vs " + fmt(c.reference) + " (" + fmt(100 * ref_gap) + "%), MP " + fmt(s.marchenko_pastur_cond) + " (" +
              fmt(100 * mp_gap) + "%); ";
  }
  return {ok, detail};
}

Outcome srip_brute_force() {
  // (a) exhaustive T equals sampled T for every tested (A, u).
  bool equal = true;
  rng::Xoshiro256 engine(99);
  for (std::uint64_t m = 0; m < 20; ++m) {
    const auto a = generate(Distribution::rademacher, 12, 8, rng::stream_seed(5, m));
    for (int rep = 0; rep < 5; ++rep) {
      const Vector y = a.entries * sample_sparse_unit_vector(8, 2, engine);
      double exhaustive = std::numeric_limits<double>::infinity();
      for (const auto& t : enumerate_erasures(12, 1)) exhaustive = std::min(exhaustive, mc::kept_norm2(y, t));
      double sampled = std::numeric_limits<double>::infinity();
      for (int s = 0; s < 10000; ++s) sampled = std::min(sampled, mc::kept_norm2(y, random_erasure(12, 1, engine)));
      equal = equal && sampled == exhaustive;
    }
  }
  // (b) certificate check over 200 fresh matrices, all supports and erasures.
  const auto cert = pm1::srip_constants(pm1::ErasureLevel(0.03, 0.02), 2, 8, 12, 0.5);
  mc::SimConfig cfg;
  cfg.distribution = Distribution::rademacher;
  cfg.rows = 12;
  cfg.cols = 8;
  cfg.beta = 1.0 / 12.0;
  cfg.erasure_mode = mc::ErasureMode::exhaustive;
  cfg.trials = 200;
  cfg.master_seed = 12;
  const auto v = mc::verify_srip(cfg, cert, 0);
  const bool within = v.check.lower_confidence <= cert.failure_prob_bound;
  return {equal && within && cfg.erase_count() == 1,
          std::string("exhaustive == sampled: ") + (equal ? "yes" : "no") + "; violations " +
              std::to_string(v.violations) + "/200, lower confidence " + fmt(v.check.lower_confidence) +
              " vs failure bound " + fmt(cert.failure_prob_bound)};
}

Outcome comparison_tables() {
  const fs::path out = scratch() / "compare";
  const int code = run_cli("--out " + out.string() + " --format csv compare-tables --tables 1,2,3");
  if (code != 0) return {false, "compare-tables exited " + std::to_string(code)};
  std::ifstream in(out / "compare-tables.csv");
  const auto t = report::read_csv(in);
  const std::regex lambda_re("lambda=([0-9.eE+-]+)");
  std::map<int, std::vector<std::pair<double, double>>> c_by_table;
  std::size_t with_reference = 0;
  for (const auto& r : t.rows) {
    if (!r[4].empty()) ++with_reference;
    std::smatch m;
    if (r[3] == "C" && std::regex_search(r[2], m, lambda_re))
      c_by_table[std::stoi(r[0])].push_back({std::stod(m[1]), report::parse_number(r[5])});
  }
  bool monotone = c_by_table.size() == 3;
  std::string detail;
  for (auto& [table, pts] : c_by_table) {
    std::sort(pts.begin(), pts.end());
    monotone = monotone && pts.size() == 5;
    for (std::size_t i = 1; i < pts.size(); ++i) monotone = monotone && pts[i].second <= pts[i - 1].second;
    detail += "table " + std::to_string(table) + " C " + fmt(pts.front().second) + " .. " + fmt(pts.back().second) + "; ";
  }
  return {with_reference == 45 && monotone, std::to_string(t.rows.size()) + " rows (" + std::to_string(with_reference) +
                                            " with reference values); " + detail};
}

Outcome determinism() {
  const std::vector<std::pair<std::string, std::string>> commands{
      {"simulate-nerf", "simulate nerf --rows 60 --cols 20 --beta 0.2 --trials 40"},
      {"simulate-square", "simulate square --rows 40 --cols 20 --trials 40"},
      {"simulate-srip", "simulate srip --beta 0.01 --alpha 0.02 --s 2 --m 64 --n 4096 --eps 0.25 --trials 4 "
                        "--x-samples 8"},
      {"simulate-jl", "simulate jl --beta 0.01 --alpha 0.02 --points 5 --n 2000 --trials 5"},
      {"verify", "verify --trials 300 --certificate-trials 5"}};
  bool ok = true;
  std::string detail;
  for (const auto& [name, args] : commands) {
    std::vector<std::string> docs;
    for (const std::string threads : {"1", "1", "4"}) {
      const fs::path out = scratch() / ("det-" + name + "-" + std::to_string(docs.size()));
      const int code = run_cli("--out " + out.string() + " --seed 17 --threads " + threads + " " + args);
      if (code != 0) {
        ok = false;
        detail += name + " exited " + std::to_string(code) + "; ";
        break;
      }
      docs.push_back(report::strip_run_info(Json::parse(slurp(out / (name + ".json")))).dump());
    }
    const bool same = docs.size() == 3 && docs[0] == docs[1] && docs[0] == docs[2];
    ok = ok && same;
    detail += name + (same ? " identical; " : " differs; ");
  }
  return {ok, detail};
}

}  // namespace

int main() {
  criterion(1, 1, special_functions);
  criterion(2, 1, t_pm1_value);
  criterion(3, 1, q_identity);
  criterion(4, 30, khinchine);
  criterion(5, 600, bound_validity);
  criterion(6, 900, nerf_reproduction);
  criterion(7, 120, srip_brute_force);
  criterion(8, 10, comparison_tables);
  criterion(9, 120, determinism);
  std::error_code ec;
  fs::remove_all(scratch(), ec);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
