// erasurelab: certificates, simulations, bound verification and the
// reference-table comparison from the command line.
//
//   erasurelab <bounds|simulate|verify|compare-tables> [subcommand] [flags]
//
// Exit codes: 0 success, 1 usage error, 2 precondition violation,
// 3 a verified bound was violated, 4 internal error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "erasurelab/erasurelab.hpp"

namespace fs = std::filesystem;
using erasurelab::report::Json;
using erasurelab::report::num;

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kPrecondition = 2, kViolated = 3, kInternal = 4 };

struct Globals {
  std::string out = "erasurelab-out";
  std::uint64_t seed = 0;
  std::string format = "json";
  std::size_t threads = 0;  // 0: ERASURELAB_THREADS or hardware
};

struct Output {
  Output(std::string stem, Json cfg) : name(std::move(stem)), config(std::move(cfg)) {}

  std::string name;  // file stem, e.g. "bounds-srip"
  Json config;
  Json result;
  std::optional<erasurelab::report::CsvTable> csv;  // primary table for --format csv
  std::vector<std::pair<std::string, std::string>> extra_files;  // (file name, contents)
  int exit_code = kOk;
};

std::optional<std::size_t> workers(const Globals& g) {
  return g.threads > 0 ? std::optional<std::size_t>(g.threads) : std::nullopt;
}

std::string csv_string(const erasurelab::report::CsvTable& t) {
  std::ostringstream os;
  erasurelab::report::write_csv(os, t);
  return os.str();
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw erasurelab::Error("cannot write " + path.string());
  f << contents;
}

std::set<int> parse_int_set(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.insert(std::stoi(item));
  return out;
}

std::set<std::string> parse_string_set(const std::string& s) {
  std::set<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.insert(item);
  return out;
}

// ---------------------------------------------------------------------------
// --config FILE.json: keys mirror the flag names in snake_case. Keys whose
// flag is already on the command line are skipped, so flags win.

std::vector<std::string> config_arguments(const std::string& path, const std::vector<std::string>& argv) {
  std::ifstream in(path);
  if (!in) throw CLI::FileError("cannot open config file " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw CLI::ConversionError("config file " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw CLI::ConversionError("config file " + path + " must hold a JSON object");
  std::vector<std::string> extra;
  for (const auto& [key, value] : doc.items()) {
    std::string flag = "--" + key;
    for (auto& ch : flag)
      if (ch == '_') ch = '-';
    bool given = false;
    for (const auto& a : argv) given = given || a == flag || a.rfind(flag + "=", 0) == 0;
    if (given || flag == "--config") continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) extra.push_back(flag);
      continue;
    }
    std::string text;
    if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_array()) {
      for (std::size_t i = 0; i < value.size(); ++i)
        text += (i ? "," : "") + (value[i].is_string() ? value[i].get<std::string>() : value[i].dump());
    } else {
      text = value.dump();
    }
    extra.push_back(flag);
    extra.push_back(text);
  }
  return extra;
}

// ---------------------------------------------------------------------------
// Commands

struct SripParams {
  double beta = 0, alpha = 0, eps = 0, b = 1.0;
  std::uint64_t s = 0, m = 0, n = 0;
};

Json srip_config(const SripParams& p) {
  return {{"beta", num(p.beta)}, {"alpha", num(p.alpha)}, {"s", p.s}, {"m", p.m},
          {"n", p.n},           {"eps", num(p.eps)},     {"b", num(p.b)}};
}

Output run_bounds_srip(const SripParams& p) {
  const erasurelab::pm1::ErasureLevel level(p.beta, p.alpha);
  const auto cert = erasurelab::pm1::srip_certificate(level, p.s, p.m, p.n, p.eps, p.b);
  const auto est = erasurelab::pm1::theta_estimates(level, p.n, p.b);
  Output o("bounds-srip", srip_config(p));
  o.result = {{"certificate", erasurelab::report::to_json(cert)},
              {"estimates", erasurelab::report::to_json(est)},
              {"t_pm1", num(erasurelab::pm1::t_pm1())},
              {"alpha_cap", num(erasurelab::pm1::alpha_cap(p.beta))}};
  o.csv = erasurelab::report::key_value_table(o.result["certificate"]);
  return o;
}

struct JlParams {
  double beta = 0, alpha = 0, b = 1.0;
  std::uint64_t points = 0, n = 0;
};

Output run_bounds_jl(const JlParams& p) {
  const erasurelab::pm1::ErasureLevel level(p.beta, p.alpha);
  const auto cert = erasurelab::pm1::jl_certificate(level, p.points, p.n, p.b);
  Output o("bounds-jl",
           {{"beta", num(p.beta)}, {"alpha", num(p.alpha)}, {"points", p.points}, {"n", p.n}, {"b", num(p.b)}});
  o.result = {{"certificate", erasurelab::report::to_json(cert)}};
  o.csv = erasurelab::report::key_value_table(o.result["certificate"]);
  return o;
}

struct NerfParams {
  double nu = 0.1, lambda = 0, beta = 0, ratio = 0;
  std::optional<std::uint64_t> m;
  bool sweep = false;
  std::size_t curve_points = 41;
};

Output run_bounds_nerf(const NerfParams& p) {
  namespace g = erasurelab::gauss;
  namespace r = erasurelab::report;
  if (!p.sweep) {
    if (p.lambda <= 0.0 || p.beta <= 0.0)
      throw CLI::RequiredError("bounds nerf needs --lambda and --beta (or --sweep --ratio)");
    const auto cert = g::nerf_certificate(p.nu, p.lambda, p.beta, p.m);
    Output o("bounds-nerf", {{"nu", num(p.nu)}, {"lambda", num(p.lambda)}, {"beta", num(p.beta)}});
    o.config["m"] = p.m ? Json(*p.m) : Json(nullptr);
    o.result = {{"certificate", r::to_json(cert)}};
    // Matching reference cells, if any.
    Json comparison = Json::array();
    for (const auto& cell : r::load_paper_tables()) {
      if (cell.table > 3 || std::abs(cell.lambda - p.lambda) > 1e-9 || std::abs(cell.beta - p.beta) > 1e-9) continue;
      const double computed = cell.quantity == "R" ? cert.R : cell.quantity == "P" ? cert.P : cert.C;
      comparison.push_back({{"table", cell.table},
                            {"quantity", cell.quantity},
                            {"paper_value", num(cell.paper_value)},
                            {"computed_value", num(computed)},
                            {"relative_gap", num((computed - cell.paper_value) / std::abs(cell.paper_value))}});
    }
    o.result["comparison"] = comparison;
    o.csv = r::key_value_table(o.result["certificate"]);
    return o;
  }
  if (!(p.ratio > 0.0 && p.ratio < 1.0)) throw erasurelab::PreconditionError("nerf sweep: --ratio must lie in (0, 1)");
  Output o("bounds-nerf-sweep", {{"nu", num(p.nu)}, {"ratio", num(p.ratio)}, {"curve_points", p.curve_points}});
  r::CsvTable table{{"lambda", "beta", "lambda_beta", "alpha", "R", "P", "C"}, {}};
  Json rows = Json::array();
  for (const double lam : {1.0 / 5, 1.0 / 3, 1.0 / 2, 2.0 / 3, 4.0 / 5}) {
    const auto c = g::nerf_certificate(p.nu, lam, p.ratio * lam);
    table.rows.push_back({r::format_number(lam), r::format_number(c.beta), r::format_number(c.lambda_beta),
                          r::format_number(c.alpha), r::format_number(c.R), r::format_number(c.P),
                          r::format_number(c.C)});
    rows.push_back(r::to_json(c));
  }
  r::Series curve;
  if (p.curve_points < 2) throw erasurelab::PreconditionError("nerf sweep: --curve-points must be >= 2");
  for (std::size_t i = 0; i < p.curve_points; ++i) {
    const double lam = 0.1 + 0.8 * static_cast<double>(i) / static_cast<double>(p.curve_points - 1);
    curve.x.push_back(lam);
    curve.y.push_back(g::nerf_certificate(p.nu, lam, p.ratio * lam).C);
  }
  o.result = {{"grid", rows}};
  o.csv = table;
  std::ostringstream title;
  title << "C(nu, lambda, beta), nu = " << p.nu << ", beta/lambda = " << p.ratio;
  o.extra_files.emplace_back("bounds-nerf-sweep.svg", r::svg_polyline(curve, title.str(), "lambda", "C", true));
  o.extra_files.emplace_back("bounds-nerf-sweep.csv", csv_string(table));
  return o;
}

struct SquareParams {
  double alpha = 0, c = 0, lambda = 0;
  std::uint64_t m = 0;
};

Output run_bounds_square(const SquareParams& p) {
  const auto cert = erasurelab::gauss::square_nerf_certificate(p.alpha, p.c, p.lambda, p.m);
  Output o("bounds-square",
           {{"alpha", num(p.alpha)}, {"c", num(p.c)}, {"lambda", num(p.lambda)}, {"m", p.m}});
  o.result = {{"certificate", erasurelab::report::to_json(cert)},
              {"alpha_threshold", num(erasurelab::gauss::square_alpha_threshold(p.lambda))}};
  o.csv = erasurelab::report::key_value_table(o.result["certificate"]);
  return o;
}

struct SimParams {
  std::string distribution = "gaussian";
  std::size_t rows = 0, cols = 0, trials = 1000;
  double beta = 0.0;
  std::string mode = "random_subset";
  std::vector<double> quantiles{0.5, 0.9, 0.99};
  std::uint64_t enumeration_cap = erasurelab::kDefaultEnumerationCap;
  bool trials_csv = false;
};

erasurelab::mc::SimConfig sim_config(const SimParams& p, const Globals& g) {
  erasurelab::mc::SimConfig c;
  c.distribution = erasurelab::parse_distribution(p.distribution);
  c.rows = p.rows;
  c.cols = p.cols;
  c.beta = p.beta;
  c.erasure_mode = erasurelab::mc::parse_erasure_mode(p.mode);
  c.trials = p.trials;
  c.master_seed = g.seed;
  c.quantiles = p.quantiles;
  c.workers = workers(g);
  c.enumeration_cap = p.enumeration_cap;
  return c;
}

Output run_simulate_condition(const SimParams& p, const Globals& g, bool square) {
  auto cfg = sim_config(p, g);
  const auto s = square ? erasurelab::mc::run_square_sim(cfg) : erasurelab::mc::run_nerf_sim(cfg);
  Output o(square ? "simulate-square" : "simulate-nerf", erasurelab::report::to_json(cfg));
  o.result = erasurelab::report::to_json(s);
  const auto trials = erasurelab::report::trials_table(s);
  o.csv = trials;
  if (p.trials_csv) o.extra_files.emplace_back(o.name + "-trials.csv", csv_string(trials));
  return o;
}

struct SripSimParams {
  SripParams cert;
  double erase_beta = -1.0;  // default: certificate beta
  std::string mode = "adversarial";
  std::size_t trials = 200, x_samples = 64, t_samples = 64;
};

Output run_simulate_srip(const SripSimParams& p, const Globals& g) {
  const erasurelab::pm1::ErasureLevel level(p.cert.beta, p.cert.alpha);
  const auto cert = erasurelab::pm1::srip_constants(level, p.cert.s, p.cert.m, p.cert.n, p.cert.eps, p.cert.b);
  erasurelab::mc::SimConfig cfg;
  cfg.distribution = erasurelab::Distribution::rademacher;
  cfg.rows = p.cert.n;
  cfg.cols = p.cert.m;
  cfg.beta = p.erase_beta >= 0.0 ? p.erase_beta : p.cert.beta;
  cfg.erasure_mode = erasurelab::mc::parse_erasure_mode(p.mode);
  cfg.trials = p.trials;
  cfg.master_seed = g.seed;
  cfg.workers = workers(g);
  const auto v = erasurelab::mc::verify_srip(cfg, cert, p.x_samples, p.t_samples);
  Output o("simulate-srip", srip_config(p.cert));
  o.config["erase_beta"] = num(cfg.beta);
  o.config["mode"] = p.mode;
  o.config["trials"] = p.trials;
  o.config["x_samples"] = p.x_samples;
  o.config["t_samples"] = p.t_samples;
  o.config["seed"] = g.seed;
  o.result = {{"certificate", erasurelab::report::to_json(cert)},
              {"erase_count", cfg.erase_count()},
              {"verification", erasurelab::report::to_json(v)}};
  const std::vector<erasurelab::mc::BoundCheck> checks{v.check};
  o.csv = erasurelab::report::checks_table(checks);
  return o;
}

struct JlSimParams {
  JlParams cert;
  std::size_t dim = 32, trials = 200, t_samples = 64;
  double erase_beta = -1.0;
  std::string mode = "adversarial";
};

Output run_simulate_jl(const JlSimParams& p, const Globals& g) {
  const erasurelab::pm1::ErasureLevel level(p.cert.beta, p.cert.alpha);
  const auto cert = erasurelab::pm1::jl_certificate(level, p.cert.points, p.cert.n, p.cert.b);
  std::vector<erasurelab::Vector> points;
  erasurelab::rng::Xoshiro256 engine(erasurelab::rng::stream_seed(g.seed, ~0ULL));
  for (std::size_t i = 0; i < p.cert.points; ++i) {
    erasurelab::Vector v(static_cast<Eigen::Index>(p.dim));
    for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = engine.normal();
    points.push_back(v);
  }
  erasurelab::mc::SimConfig cfg;
  cfg.distribution = erasurelab::Distribution::rademacher;
  cfg.rows = p.cert.n;
  cfg.cols = p.dim;
  cfg.beta = p.erase_beta >= 0.0 ? p.erase_beta : p.cert.beta;
  cfg.erasure_mode = erasurelab::mc::parse_erasure_mode(p.mode);
  cfg.trials = p.trials;
  cfg.master_seed = g.seed;
  cfg.workers = workers(g);
  const auto v = erasurelab::mc::verify_jl(points, cfg, cert, p.t_samples);
  Output o("simulate-jl",
           {{"beta", num(p.cert.beta)},
            {"alpha", num(p.cert.alpha)},
            {"points", p.cert.points},
            {"n", p.cert.n},
            {"dim", p.dim},
            {"erase_beta", num(cfg.beta)},
            {"mode", p.mode},
            {"trials", p.trials},
            {"t_samples", p.t_samples},
            {"seed", g.seed}});
  o.result = {{"certificate", erasurelab::report::to_json(cert)},
              {"erase_count", cfg.erase_count()},
              {"verification", erasurelab::report::to_json(v)}};
  const std::vector<erasurelab::mc::BoundCheck> checks{v.check};
  o.csv = erasurelab::report::checks_table(checks);
  return o;
}

struct VerifyParams {
  std::string only;
  std::size_t trials = 10000, certificate_trials = 200;
  std::optional<double> force_bound;
};

Output run_verify(const VerifyParams& p, const Globals& g) {
  erasurelab::mc::SuiteOptions opt;
  opt.trials = p.trials;
  opt.certificate_trials = p.certificate_trials;
  opt.seed = g.seed;
  opt.workers = workers(g);
  opt.only = parse_string_set(p.only);
  opt.forced_bound = p.force_bound;
  const auto checks = erasurelab::mc::run_verification_suite(opt);
  Output o("verify",
           {{"only", p.only}, {"trials", p.trials}, {"certificate_trials", p.certificate_trials}, {"seed", g.seed}});
  o.config["force_bound"] = p.force_bound ? num(*p.force_bound) : Json(nullptr);
  Json arr = Json::array();
  std::size_t violated = 0;
  for (const auto& c : checks) {
    arr.push_back(erasurelab::report::to_json(c));
    if (c.verdict == erasurelab::mc::Verdict::violated) ++violated;
  }
  o.result = {{"checks", arr}, {"violated", violated}};
  o.csv = erasurelab::report::checks_table(checks);
  o.extra_files.emplace_back("verify.csv", csv_string(*o.csv));
  o.exit_code = violated > 0 ? kViolated : kOk;
  return o;
}

struct CompareParams {
  std::string tables = "1,2,3,4,5,6,8,9,10";
  std::size_t trials = 1000, max_rows = 1200;
};

Output run_compare(const CompareParams& p, const Globals& g) {
  namespace r = erasurelab::report;
  r::CompareOptions opt;
  opt.tables = parse_int_set(p.tables);
  opt.trials = p.trials;
  opt.max_rows = p.max_rows;
  opt.seed = g.seed;
  opt.workers = workers(g);
  const auto rows = r::compare_tables(r::load_paper_tables(), opt);
  Output o("compare-tables",
           {{"tables", p.tables}, {"trials", p.trials}, {"max_rows", p.max_rows}, {"seed", g.seed}});
  Json arr = Json::array();
  for (const auto& row : rows) {
    arr.push_back({{"table", row.table},
                   {"label", row.label},
                   {"parameters", row.parameters},
                   {"quantity", row.quantity},
                   {"paper_value", row.paper_value ? num(*row.paper_value) : Json(nullptr)},
                   {"computed_value", num(row.computed_value)},
                   {"relative_gap", row.relative_gap ? num(*row.relative_gap) : Json(nullptr)},
                   {"note", row.note}});
  }
  o.result = {{"rows", arr}};
  o.csv = r::comparison_table(rows);
  o.extra_files.emplace_back("comparison.csv", csv_string(*o.csv));
  return o;
}

int emit(const Output& o, const Globals& g, double elapsed) {
  const fs::path dir(g.out);
  fs::create_directories(dir);
  auto doc = erasurelab::report::envelope(o.name, o.config, o.result, elapsed);
  doc["run_info"]["threads"] = erasurelab::worker_count(workers(g));
  doc["run_info"]["out"] = g.out;
  Json resolved = o.config;
  resolved["format"] = g.format;
  write_file(dir / "config.json", resolved.dump(2) + "\n");
  write_file(dir / (o.name + ".json"), doc.dump(2) + "\n");
  for (const auto& [name, contents] : o.extra_files) write_file(dir / name, contents);
  if (g.format == "csv" && o.csv) {
    const auto text = csv_string(*o.csv);
    write_file(dir / (o.name + ".csv"), text);
    std::cout << text;
  } else {
    std::cout << doc.dump(2) << "\n";
  }
  return o.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Erasure-robustness certificates for random matrices, with Monte Carlo verification"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  std::string config_path;
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
  app.add_option("--config", config_path, "JSON file with snake_case keys mirroring the flags");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (default: ERASURELAB_THREADS or hardware)");

  std::function<Output()> action;

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Theoretical certificates");
  bounds->require_subcommand(1);
  SripParams srip;
  auto* b_srip = bounds->add_subcommand("srip", "SRIP certificate for +-1 matrices");
  b_srip->add_option("--beta", srip.beta, "Erasure ratio")->required();
  b_srip->add_option("--alpha", srip.alpha, "Failure rate")->required();
  b_srip->add_option("--s", srip.s, "Sparsity")->required();
  b_srip->add_option("--m", srip.m, "Columns")->required();
  b_srip->add_option("--n", srip.n, "Rows")->required();
  b_srip->add_option("--eps", srip.eps, "Net radius")->required();
  b_srip->add_option("--b", srip.b, "Sub-gaussian parameter")->capture_default_str();
  b_srip->callback([&] { action = [&] { return run_bounds_srip(srip); }; });

  JlParams jl;
  auto* b_jl = bounds->add_subcommand("jl", "Robust Johnson-Lindenstrauss certificate");
  b_jl->add_option("--beta", jl.beta, "Erasure ratio")->required();
  b_jl->add_option("--alpha", jl.alpha, "Failure rate")->required();
  b_jl->add_option("--points", jl.points, "Number of points N")->required();
  b_jl->add_option("--n", jl.n, "Rows")->required();
  b_jl->add_option("--b", jl.b, "Sub-gaussian parameter")->capture_default_str();
  b_jl->callback([&] { action = [&] { return run_bounds_jl(jl); }; });

  NerfParams nerf;
  std::uint64_t nerf_m = 0;
  auto* b_nerf = bounds->add_subcommand("nerf", "Gaussian NERF condition-number certificate");
  b_nerf->add_option("--nu", nerf.nu, "Rate nu")->capture_default_str();
  b_nerf->add_option("--lambda", nerf.lambda, "Redundancy rate 1 - m/n");
  b_nerf->add_option("--beta", nerf.beta, "Erasure ratio");
  auto* nerf_m_opt = b_nerf->add_option("--m", nerf_m, "Columns (for the success probability)");
  b_nerf->add_flag("--sweep", nerf.sweep, "Sweep lambda at fixed beta/lambda");
  b_nerf->add_option("--ratio", nerf.ratio, "beta/lambda for --sweep");
  b_nerf->add_option("--curve-points", nerf.curve_points, "Points of the SVG curve")->capture_default_str();
  b_nerf->callback([&] {
    if (nerf_m_opt->count() > 0) nerf.m = nerf_m;
    action = [&] { return run_bounds_nerf(nerf); };
  });

  SquareParams sq;
  auto* b_sq = bounds->add_subcommand("square", "Square-case NERF certificate (beta = lambda)");
  b_sq->add_option("--alpha", sq.alpha, "Failure rate")->required();
  b_sq->add_option("--c", sq.c, "Small-singular-value scale c")->required();
  b_sq->add_option("--lambda", sq.lambda, "Redundancy rate")->required();
  b_sq->add_option("--m", sq.m, "Columns")->required();
  b_sq->callback([&] { action = [&] { return run_bounds_square(sq); }; });

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo simulations");
  simulate->require_subcommand(1);
  auto add_sim = [&](CLI::App* sub, SimParams& p, bool square) {
    sub->add_option("--rows", p.rows, "Rows")->required()->check(CLI::PositiveNumber);
    sub->add_option("--cols", p.cols, "Columns")->required()->check(CLI::PositiveNumber);
    if (!square) sub->add_option("--beta", p.beta, "Erasure ratio")->capture_default_str();
    sub->add_option("--trials", p.trials, "Trials")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--distribution", p.distribution, "Entry distribution")
        ->check(CLI::IsMember({"gaussian", "rademacher"}))
        ->capture_default_str();
    if (!square)
      sub->add_option("--mode", p.mode, "Erasure mode")
          ->check(CLI::IsMember({"none", "random_subset", "exhaustive", "adversarial"}))
          ->capture_default_str();
    sub->add_option("--quantiles", p.quantiles, "Quantile levels")->delimiter(',')->check(CLI::Range(0.0, 1.0));
    sub->add_option("--enumeration-cap", p.enumeration_cap, "Cap for exhaustive enumeration")->capture_default_str();
    sub->add_flag("--trials-csv", p.trials_csv, "Write per-trial CSV");
  };
  SimParams sim_nerf, sim_sq;
  auto* s_nerf = simulate->add_subcommand("nerf", "Condition numbers after erasing beta*rows rows");
  add_sim(s_nerf, sim_nerf, false);
  s_nerf->callback([&] { action = [&] { return run_simulate_condition(sim_nerf, g, false); }; });
  auto* s_sq = simulate->add_subcommand("square", "Condition numbers after erasing rows - cols rows");
  add_sim(s_sq, sim_sq, true);
  s_sq->callback([&] { action = [&] { return run_simulate_condition(sim_sq, g, true); }; });

  SripSimParams sim_srip;
  auto* s_srip = simulate->add_subcommand("srip", "Empirical SRIP failure frequency for +-1 matrices");
  s_srip->add_option("--beta", sim_srip.cert.beta, "Certificate erasure ratio")->required();
  s_srip->add_option("--alpha", sim_srip.cert.alpha, "Failure rate")->required();
  s_srip->add_option("--s", sim_srip.cert.s, "Sparsity")->required();
  s_srip->add_option("--m", sim_srip.cert.m, "Columns")->required();
  s_srip->add_option("--n", sim_srip.cert.n, "Rows")->required();
  s_srip->add_option("--eps", sim_srip.cert.eps, "Net radius")->required();
  s_srip->add_option("--erase-beta", sim_srip.erase_beta, "Simulated erasure ratio (default: --beta)");
  s_srip->add_option("--mode", sim_srip.mode, "Erasure mode")
      ->check(CLI::IsMember({"none", "random_subset", "exhaustive", "adversarial"}))
      ->capture_default_str();
  s_srip->add_option("--trials", sim_srip.trials, "Fresh matrices")->check(CLI::PositiveNumber)->capture_default_str();
  s_srip->add_option("--x-samples", sim_srip.x_samples, "Sparse vectors per matrix")->capture_default_str();
  s_srip->add_option("--t-samples", sim_srip.t_samples, "Erasures per vector (random_subset)")->capture_default_str();
  s_srip->callback([&] { action = [&] { return run_simulate_srip(sim_srip, g); }; });

  JlSimParams sim_jl;
  auto* s_jl = simulate->add_subcommand("jl", "Empirical robust JL failure frequency");
  s_jl->add_option("--beta", sim_jl.cert.beta, "Certificate erasure ratio")->required();
  s_jl->add_option("--alpha", sim_jl.cert.alpha, "Failure rate")->required();
  s_jl->add_option("--points", sim_jl.cert.points, "Number of points N")->required();
  s_jl->add_option("--n", sim_jl.cert.n, "Rows")->required();
  s_jl->add_option("--dim", sim_jl.dim, "Point dimension")->check(CLI::PositiveNumber)->capture_default_str();
  s_jl->add_option("--erase-beta", sim_jl.erase_beta, "Simulated erasure ratio (default: --beta)");
  s_jl->add_option("--mode", sim_jl.mode, "Erasure mode")
      ->check(CLI::IsMember({"none", "random_subset", "exhaustive", "adversarial"}))
      ->capture_default_str();
  s_jl->add_option("--trials", sim_jl.trials, "Fresh matrices")->check(CLI::PositiveNumber)->capture_default_str();
  s_jl->add_option("--t-samples", sim_jl.t_samples, "Erasures per pair (random_subset)")->capture_default_str();
  s_jl->callback([&] { action = [&] { return run_simulate_jl(sim_jl, g); }; });

  // verify
  VerifyParams ver;
  double forced = 0.0;
  auto* verify = app.add_subcommand("verify", "Bound-validity suite");
  std::string groups;
  for (const auto& s : erasurelab::mc::suite_groups()) groups += (groups.empty() ? "" : ",") + s;
  verify->add_option("--only", ver.only, "Comma-separated groups: " + groups);
  verify->add_option("--trials", ver.trials, "Trials per check")->check(CLI::PositiveNumber)->capture_default_str();
  verify->add_option("--certificate-trials", ver.certificate_trials, "Fresh matrices for srip/jl")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  auto* force_opt = verify->add_option("--force-bound", forced, "Test hook: replace every theoretical bound");
  verify->callback([&] {
    if (force_opt->count() > 0) ver.force_bound = forced;
    action = [&] { return run_verify(ver, g); };
  });

  // compare-tables
  CompareParams cmp;
  auto* compare = app.add_subcommand("compare-tables", "Side-by-side comparison with the reference tables");
  compare->add_option("--tables", cmp.tables, "Comma-separated table numbers (empty: none)")->capture_default_str();
  compare->add_option("--trials", cmp.trials, "Trials per simulated cell")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  compare->add_option("--max-rows", cmp.max_rows, "Skip simulated cells with more rows")->capture_default_str();
  compare->callback([&] { action = [&] { return run_compare(cmp, g); }; });

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::string path;
      if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
      if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
      if (!path.empty()) {
        const auto extra = config_arguments(path, args);
        args.insert(args.end(), extra.begin(), extra.end());
        break;
      }
    }
    std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  } catch (const erasurelab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPrecondition;
  }

  try {
    const auto start = std::chrono::steady_clock::now();
    Output o = action();
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return emit(o, g, elapsed);
  } catch (const CLI::RequiredError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const erasurelab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
