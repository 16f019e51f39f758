#include "manitomo/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "manitomo/io.hpp"
#include "manitomo/objective.hpp"
#include "manitomo/regularizers.hpp"

namespace manitomo::cli {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string shortest(double value) {
  char buffer[64];
  const auto res = std::to_chars(buffer, buffer + sizeof buffer, value);
  return {buffer, res.ptr};
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc{} || res.ptr != end) throw ConfigError("invalid value '" + text + "' for " + key);
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) throw ConfigError("non-finite value for " + key);
  }
  return value;
}

struct Entry {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename T>
Entry entry(T RunConfig::*member) {
  Entry e;
  e.get = [member](const RunConfig& c) {
    if constexpr (std::is_same_v<T, std::string>) {
      return c.*member;
    } else if constexpr (std::is_floating_point_v<T>) {
      return shortest(c.*member);
    } else {
      return std::to_string(c.*member);
    }
  };
  e.set = [member](RunConfig& c, const std::string& v) {
    if constexpr (std::is_same_v<T, std::string>) {
      c.*member = v;
    } else {
      c.*member = parse_number<T>("", v);
    }
  };
  return e;
}

const std::map<std::string, Entry>& table() {
  static const std::map<std::string, Entry> t = {
      {"out", entry(&RunConfig::out)},
      {"size", entry(&RunConfig::size)},
      {"extent", entry(&RunConfig::extent)},
      {"kind", entry(&RunConfig::kind)},
      {"operator", entry(&RunConfig::op)},
      {"method", entry(&RunConfig::method)},
      {"metric", entry(&RunConfig::metric)},
      {"param", entry(&RunConfig::param)},
      {"alpha", entry(&RunConfig::alpha)},
      {"gamma", entry(&RunConfig::gamma)},
      {"beta", entry(&RunConfig::beta)},
      {"s", entry(&RunConfig::s)},
      {"p", entry(&RunConfig::p)},
      {"fid-p", entry(&RunConfig::fid_p)},
      {"nrho", entry(&RunConfig::nrho)},
      {"sigma-rho", entry(&RunConfig::sigma_rho)},
      {"epsilon", entry(&RunConfig::epsilon)},
      {"r-max", entry(&RunConfig::r_max)},
      {"noise-var", entry(&RunConfig::noise_var)},
      {"seed", entry(&RunConfig::seed)},
      {"offsets", entry(&RunConfig::offsets)},
      {"angles", entry(&RunConfig::angles)},
      {"step", entry(&RunConfig::step)},
      {"max-iters", entry(&RunConfig::max_iters)},
      {"step0", entry(&RunConfig::step0)},
      {"shrink", entry(&RunConfig::shrink)},
      {"armijo-c", entry(&RunConfig::armijo_c)},
      {"grad-tol", entry(&RunConfig::grad_tol)},
      {"init", entry(&RunConfig::init)},
      {"init-var", entry(&RunConfig::init_var)},
      {"project", entry(&RunConfig::project)},
      {"input", entry(&RunConfig::input)},
      {"sino", entry(&RunConfig::sino)},
      {"truth", entry(&RunConfig::truth)},
  };
  return t;
}

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool is_angle_kind(const std::string& kind) { return kind == "two-region" || kind == "four-region"; }

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

OperatorKind operator_kind(const RunConfig& cfg) {
  return cfg.op == "ray" ? OperatorKind::ray : OperatorKind::radon;
}

RegConfig reg_config(const RunConfig& cfg, const Grid& grid, double r_max) {
  RegConfig reg;
  reg.s = cfg.s;
  reg.p = cfg.p;
  reg.alpha = cfg.alpha;
  reg.mollifier = make_mollifier(cfg.nrho, grid.spacing(), cfg.sigma_rho);
  const std::string metric = cfg.resolved_metric();
  reg.metric.kind = metric == "euclidean" ? MetricKind::euclidean
                    : metric == "sphere"  ? MetricKind::sphere
                                          : MetricKind::product;
  reg.metric.gamma = cfg.gamma;
  reg.metric.p = cfg.p;
  reg.metric.epsilon = cfg.epsilon;
  reg.metric.r_max = r_max;
  return reg;
}

/// argmin over constant fields c of |F[c] - v|^2, by normal equations over the m unit fields.
Eigen::Vector2d best_constant(const Problem& problem) {
  const auto& grid = problem.projector->geometry().grid();
  std::array<FieldMatrix<double>, 2> basis;
  for (int c = 0; c < 2; ++c) {
    VectorField unit(grid, 2);
    unit.data().col(c).setOnes();
    basis[c] = problem.projector->forward(problem.op, unit).data();
  }
  Eigen::Matrix2d normal;
  Eigen::Vector2d rhs;
  for (int a = 0; a < 2; ++a) {
    rhs(a) = basis[a].cwiseProduct(problem.noisy.data()).sum();
    for (int b = 0; b < 2; ++b) normal(a, b) = basis[a].cwiseProduct(basis[b]).sum();
  }
  return normal.completeOrthogonalDecomposition().solve(rhs);
}

BasicParamProjection<double> projection_for(const std::string& method, const std::string& param,
                                            const RegConfig& reg) {
  const double eps = reg.metric.epsilon;
  const double r_max = reg.metric.r_max;
  if (method == "lifted") {
    return [](FieldMatrix<double>& u) {
      for (Eigen::Index k = 0; k < u.rows(); ++k) u(k, 0) = kTwoPi * project_angle(u(k, 0) / kTwoPi);
    };
  }
  if (method == "sobolev") return {};
  if (param == "polar") {
    return [eps, r_max](FieldMatrix<double>& x) {
      for (Eigen::Index k = 0; k < x.rows(); ++k) {
        x(k, 0) = project_angle(x(k, 0));
        x(k, 1) = std::clamp(x(k, 1), eps, r_max);
      }
    };
  }
  if (reg.metric.kind == MetricKind::euclidean) return {};
  return [eps, r_max](FieldMatrix<double>& x) {
    for (Eigen::Index k = 0; k < x.rows(); ++k) {
      const Vector2<double> y = project_annulus<double>(x.row(k).transpose(), eps, r_max);
      x.row(k) = y.transpose();
    }
  };
}

FieldMatrix<double> initial_params(const RunConfig& cfg, const Problem& problem, const std::string& method,
                                   const std::string& param) {
  const auto& grid = problem.projector->geometry().grid();
  FieldMatrix<double> vectors(grid.pixels(), 2);
  if (cfg.init == "zero") {
    vectors.setZero();
  } else if (cfg.init == "constant") {
    const Eigen::Vector2d c = best_constant(problem);
    vectors.col(0).setConstant(c(0));
    vectors.col(1).setConstant(c(1));
  } else {
    if (!problem.truth) throw ConfigError("init truth-perturbed needs a ground truth");
    vectors = problem.truth->data();
  }
  const bool perturbed = cfg.init == "truth-perturbed";
  const NoiseSpec noise{cfg.init_var, cfg.seed + 1};

  if (method == "lifted") {
    FieldMatrix<double> u(grid.pixels(), 1);
    for (Eigen::Index k = 0; k < u.rows(); ++k) u(k, 0) = project_angle(std::atan2(vectors(k, 1), vectors(k, 0)) / kTwoPi);
    if (perturbed) perturb(u, noise);
    return u * kTwoPi;
  }
  FieldMatrix<double> params =
      param == "polar" ? polar_from_field(VectorField(grid, vectors)) : vectors;
  if (perturbed) perturb(params, noise);
  return params;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::filesystem::path prepare_directory(const RunConfig& cfg, const std::string& command) {
  const auto dir = cfg.run_directory(command);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  write_text(dir / "run_config", cfg.canonical());
  return dir;
}

std::string summary_line(const RunConfig& cfg, const Outcome& o) {
  std::ostringstream s;
  s << "method=" << o.method << " alpha=" << shortest(cfg.alpha) << " gamma=" << shortest(cfg.gamma)
    << " beta=" << shortest(cfg.beta) << " snr=" << (o.snr ? format_decimal(*o.snr) : std::string("n/a"))
    << " iters=" << o.result.iterations() << " status=" << to_string(o.result.status)
    << " final_objective=" << format_decimal(o.result.final_objective());
  return s.str();
}

void write_outcome(const std::filesystem::path& dir, const std::string& prefix, const Outcome& o) {
  write_field(dir / (prefix + ".field"), o.output);
  std::ofstream trace(dir / (prefix + "_trace.csv"), std::ios::binary);
  if (!trace) throw std::runtime_error("cannot write trace");
  write_trace_csv(trace, o.result.trace);
}

int cmd_phantom(const RunConfig& cfg, std::ostream& out) {
  const auto field = make_phantom_field(cfg);
  const auto dir = prepare_directory(cfg, "phantom");
  const auto path = dir / "phantom.field";
  write_field(path, field);
  out << path.string() << "\n";
  return 0;
}

int cmd_forward(const RunConfig& cfg, std::ostream& out) {
  const Problem problem = prepare_problem(cfg);
  const auto dir = prepare_directory(cfg, "forward");
  write_sinogram(dir / "sino_clean", problem.clean);
  write_sinogram(dir / "sino_noisy", problem.noisy);
  const double variance = (problem.noisy.data() - problem.clean.data()).squaredNorm() /
                          static_cast<double>(problem.noisy.data().size());
  out << "noise sample variance " << format_decimal(variance) << "\n";
  out << (dir / "sino_noisy").string() << "\n";
  return 0;
}

int cmd_reconstruct(const RunConfig& cfg, std::ostream& out) {
  const Problem problem = prepare_problem(cfg);
  const auto dir = prepare_directory(cfg, "reconstruct");
  const Outcome o = reconstruct(cfg, problem, cfg.method);
  write_field(dir / "reconstruction.field", o.output);
  std::ofstream trace(dir / "trace.csv", std::ios::binary);
  write_trace_csv(trace, o.result.trace);
  const std::string line = summary_line(cfg, o);
  write_text(dir / "summary.txt", line + "\n");
  out << line << "\n";
  return 0;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out) {
  const Problem problem = prepare_problem(cfg);
  if (!problem.truth) throw ConfigError("compare needs a ground truth (phantom or --truth)");
  const auto dir = prepare_directory(cfg, "compare");
  const std::string first = cfg.method == "lifted" ? "lifted" : "metric";
  std::ostringstream table;
  table << "method,param,snr,final_objective,iters\n";
  for (const std::string& method : {first, std::string("sobolev")}) {
    const Outcome o = reconstruct(cfg, problem, method);
    write_outcome(dir, method, o);
    table << o.method << "," << shortest(o.param) << "," << format_decimal(*o.snr) << ","
          << format_decimal(o.result.final_objective()) << "," << o.result.iterations() << "\n";
  }
  write_text(dir / "compare.csv", table.str());
  out << table.str();
  return 0;
}

}  // namespace

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> k = [] {
    std::vector<std::string> v;
    for (const auto& [name, _] : table()) v.push_back(name);
    return v;
  }();
  return k;
}

void RunConfig::set(std::string key, const std::string& value) {
  key = normalize_key(key);
  const auto it = table().find(key);
  if (it == table().end()) throw ConfigError("unknown config key '" + key + "'");
  try {
    it->second.set(*this, value);
  } catch (const ConfigError&) {
    throw ConfigError("invalid value '" + value + "' for " + key);
  }
}

std::string RunConfig::get(const std::string& key) const {
  const auto it = table().find(normalize_key(key));
  if (it == table().end()) throw ConfigError("unknown config key '" + key + "'");
  return it->second.get(*this);
}

std::string RunConfig::canonical() const {
  std::string text;
  for (const auto& [name, e] : table()) text += name + " = " + e.get(*this) + "\n";
  return text;
}

std::uint64_t RunConfig::hash(const std::string& command) const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char ch : command + "\n" + canonical()) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::filesystem::path RunConfig::run_directory(const std::string& command) const {
  char name[32];
  std::snprintf(name, sizeof name, "run-%016llx", static_cast<unsigned long long>(hash(command)));
  return std::filesystem::path(out) / name;
}

std::string RunConfig::resolved_metric() const {
  if (metric != "auto") return metric;
  return method == "lifted" ? "sphere" : "product";
}

std::string RunConfig::resolved_param() const {
  if (method == "lifted") return "angle";
  if (method == "sobolev") return "cartesian";
  if (param != "auto") return param;
  return resolved_metric() == "product" ? "polar" : "cartesian";
}

void RunConfig::validate() const {
  require(size >= 8, "size must be at least 8");
  require(extent > 0, "extent must be positive");
  if (sino.empty() && input.empty()) {
    if (is_angle_kind(kind)) {
      (void)parse_angle_phantom(kind);
    } else {
      try {
        (void)parse_vector_phantom(kind);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
  }
  require(op == "radon" || op == "ray", "operator must be radon or ray");
  require(method == "metric" || method == "sobolev" || method == "lifted", "method must be metric, sobolev or lifted");
  require(metric == "auto" || metric == "euclidean" || metric == "sphere" || metric == "product",
          "metric must be auto, euclidean, sphere or product");
  require(param == "auto" || param == "cartesian" || param == "polar", "param must be auto, cartesian or polar");
  if (method == "lifted") {
    require(op == "radon", "the lifted method needs the radon operator");
    require(resolved_metric() == "sphere", "the lifted method needs the sphere metric");
  }
  if (method == "metric" && resolved_param() == "polar") {
    require(resolved_metric() == "product", "polar parameters need the product metric");
  }
  require(alpha >= 0, "alpha must be >= 0");
  require(gamma >= 0, "gamma must be >= 0");
  require(beta >= 0, "beta must be >= 0");
  require(s > 0 && s < 1, "s must lie in (0, 1)");
  require(p > 1, "p must be > 1");
  require(fid_p > 1, "fid-p must be > 1");
  require(nrho >= 1 && nrho <= 3, "nrho must be 1, 2 or 3");
  require(epsilon > 0, "epsilon must be positive");
  require(r_max <= 0 || r_max > epsilon, "r-max must exceed epsilon");
  require(noise_var >= 0, "noise-var must be >= 0");
  require(offsets == 0 || offsets >= 2, "offsets must be 0 (default) or >= 2");
  require(angles >= 1, "angles must be >= 1");
  require(step >= 0 && step <= 2 * extent / size, "step must lie in [0, h]");
  require(max_iters >= 1, "max-iters must be >= 1");
  require(step0 > 0 && armijo_c > 0 && grad_tol > 0, "step0, armijo-c and grad-tol must be positive");
  require(shrink > 0 && shrink < 1, "shrink must lie in (0, 1)");
  require(init == "constant" || init == "zero" || init == "truth-perturbed",
          "init must be truth-perturbed, constant or zero");
  require(init_var >= 0, "init-var must be >= 0");
  require(project == "final" || project == "per-iter", "project must be per-iter or final");
}

RunConfig load_config(std::istream& in, RunConfig base) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
    try {
      base.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(number) + ": " + e.what());
    }
  }
  return base;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  return load_config(in, std::move(base));
}

std::shared_ptr<const Projector> make_projector(const RunConfig& cfg, const Grid& grid) {
  const int n_offsets = cfg.offsets > 0 ? cfg.offsets : Geometry::default_offsets(grid);
  const double step = cfg.step > 0 ? cfg.step : grid.spacing() / 2;
  return std::make_shared<const Projector>(Geometry(grid, n_offsets, cfg.angles, step));
}

VectorField make_phantom_field(const RunConfig& cfg, double* r_max) {
  const Grid grid = make_grid(cfg.size, cfg.extent);
  if (is_angle_kind(cfg.kind)) {
    if (r_max) *r_max = 1.0;
    return as_field(angle_phantom(parse_angle_phantom(cfg.kind), grid));
  }
  auto ph = vector_phantom(parse_vector_phantom(cfg.kind), grid);
  if (r_max) *r_max = ph.r_max;
  return std::move(ph.field);
}

VectorField as_vectors(const VectorField& field) {
  if (field.channels() == 2) return field;
  if (field.channels() == 1) return as_angles(field, true).to_vectors();
  throw std::invalid_argument("fields must have 1 (angle) or 2 (vector) channels");
}

Problem prepare_problem(const RunConfig& cfg) {
  const Grid grid = make_grid(cfg.size, cfg.extent);
  Problem problem;
  problem.op = operator_kind(cfg);
  double phantom_r_max = 1.0;

  auto load_truth = [&](const std::string& path) {
    const VectorField f = read_field(std::filesystem::path(path), cfg.extent);
    if (f.grid().height() != cfg.size) throw std::runtime_error("field " + path + " does not match --size");
    problem.angle_data = f.channels() == 1;
    problem.truth = as_vectors(f);
  };

  if (!cfg.sino.empty()) {
    problem.noisy = read_sinogram(std::filesystem::path(cfg.sino));
    if (problem.noisy.extent() != cfg.extent) throw std::runtime_error("sinogram extent does not match --extent");
    RunConfig geom_cfg = cfg;
    geom_cfg.offsets = problem.noisy.offsets_count();
    geom_cfg.angles = problem.noisy.angles_count();
    problem.projector = make_projector(geom_cfg, grid);
    const int expected = problem.op == OperatorKind::radon ? 2 : 1;
    if (problem.noisy.channels() != expected) throw std::runtime_error("sinogram channel count does not match operator");
    problem.clean = problem.noisy;
    if (!cfg.truth.empty()) load_truth(cfg.truth);
  } else {
    problem.projector = make_projector(cfg, grid);
    if (!cfg.input.empty()) {
      load_truth(cfg.input);
    } else {
      const VectorField f = make_phantom_field(cfg, &phantom_r_max);
      problem.angle_data = f.channels() == 1;
      problem.truth = as_vectors(f);
    }
    if (!cfg.truth.empty()) {
      const VectorField data_source = *problem.truth;
      load_truth(cfg.truth);
      problem.clean = problem.projector->forward(problem.op, data_source);
    } else {
      problem.clean = problem.projector->forward(problem.op, *problem.truth);
    }
    problem.noisy = add_noise(problem.clean, NoiseSpec{cfg.noise_var, cfg.seed});
  }
  problem.r_max = cfg.r_max > 0 ? cfg.r_max : phantom_r_max;
  if (!(problem.r_max > cfg.epsilon)) throw ConfigError("r-max must exceed epsilon");
  return problem;
}

Outcome reconstruct(const RunConfig& cfg, const Problem& problem, const std::string& method) {
  const Grid& grid = problem.projector->geometry().grid();
  RunConfig local = cfg;
  local.method = method;
  if (method != "lifted" && cfg.method == "lifted" && cfg.metric == "auto") local.metric = "sphere";
  local.validate();
  const std::string param = local.resolved_param();
  const RegConfig reg = reg_config(local, grid, problem.r_max);

  Objective objective;
  if (method == "sobolev") {
    objective = sobolev_objective(problem.projector, problem.noisy, problem.op, cfg.beta, cfg.p, cfg.fid_p);
  } else {
    const Parameterization kind = method == "lifted" ? Parameterization::angle
                                  : param == "polar" ? Parameterization::polar
                                                     : Parameterization::cartesian;
    objective = full_objective(problem.projector, problem.noisy, problem.op, reg, kind, cfg.fid_p);
  }

  const auto projection = projection_for(method, param, reg);
  FieldMatrix<double> init = initial_params(cfg, problem, method, param);
  if (projection) projection(init);

  GDParams gd;
  gd.max_iters = cfg.max_iters;
  gd.step0 = cfg.step0;
  gd.shrink = cfg.shrink;
  gd.armijo_c = cfg.armijo_c;
  gd.grad_tol = cfg.grad_tol;

  Outcome o;
  o.method = method;
  o.param = method == "sobolev" ? cfg.beta : cfg.alpha;
  o.result = minimize(objective, init, gd, cfg.project == "per-iter" ? projection : BasicParamProjection<double>{});
  if (projection) projection(o.result.params);

  if (method == "lifted") {
    o.vectors = field_from_params(o.result.params, grid, Parameterization::angle);
    AngleField angles(grid, o.result.params.col(0) / kTwoPi, true);
    for (Eigen::Index k = 0; k < angles.data().size(); ++k) angles.data()(k) = project_angle(angles.data()(k));
    o.output = as_field(angles);
  } else {
    o.vectors = field_from_params(o.result.params, grid,
                                  param == "polar" ? Parameterization::polar : Parameterization::cartesian);
    o.output = o.vectors;
  }
  if (problem.truth) o.snr = snr(*problem.truth, o.vectors);
  return o;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tomographic reconstruction of vector and circle-valued images with metric double integral regularization"};
  app.require_subcommand(1);
  struct Flags {
    std::string config;
    std::map<std::string, std::string> values;
  };
  std::map<std::string, Flags> flags;
  const std::map<std::string, std::string> help = {
      {"phantom", "write a synthetic ground-truth field"},
      {"forward", "simulate clean and noisy sinograms"},
      {"reconstruct", "reconstruct a field from a noisy sinogram"},
      {"compare", "run the metric and Sobolev methods on the same data"},
  };
  for (const auto& [name, description] : help) {
    auto* sub = app.add_subcommand(name, description);
    auto& f = flags[name];
    sub->add_option("--config", f.config, "key = value config file; flags override it");
    for (const auto& key : RunConfig::keys()) sub->add_option("--" + key, f.values[key]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  auto* sub = app.get_subcommand(command);
  RunConfig cfg;
  try {
    const auto& f = flags[command];
    if (!f.config.empty()) cfg = load_config(std::filesystem::path(f.config));
    for (const auto& key : RunConfig::keys()) {
      if (sub->get_option("--" + key)->count() > 0) cfg.set(key, f.values.at(key));
    }
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (command == "phantom") return cmd_phantom(cfg, out);
    if (command == "forward") return cmd_forward(cfg, out);
    if (command == "reconstruct") return cmd_reconstruct(cfg, out);
    return cmd_compare(cfg, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace manitomo::cli
