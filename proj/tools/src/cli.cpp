#include "kvstring_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "kvstring/error.hpp"
#include "kvstring/iss.hpp"

namespace kvstring::cli {

namespace {

namespace fs = std::filesystem;
using boost::property_tree::ptree;
using ordered_json = nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

double to_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != t.size() || !std::isfinite(v)) {
    throw ConfigError(fmt::format("{}: '{}' is not a finite number", what, text));
  }
  return v;
}

long long to_integer(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != t.size()) {
    throw ConfigError(fmt::format("{}: '{}' is not an integer", what, text));
  }
  return v;
}

// Key access that remembers which keys were read so leftovers can be rejected.
class Section {
 public:
  Section(const ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

  bool has(const std::string& key) const { return tree_ && tree_->find(key) != tree_->not_found(); }

  std::string str(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    if (!has(key)) return fallback;
    return trim(tree_->get<std::string>(key));
  }
  double num(const std::string& key, double fallback) {
    return has(key) ? to_double(str(key, ""), where(key)) : (used_.insert(key), fallback);
  }
  long long integer(const std::string& key, long long fallback) {
    return has(key) ? to_integer(str(key, ""), where(key)) : (used_.insert(key), fallback);
  }
  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) {
      used_.insert(key);
      return fallback;
    }
    std::string v = str(key, "");
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
    if (v == "false" || v == "no" || v == "0" || v == "off") return false;
    throw ConfigError(fmt::format("{}: '{}' is not a boolean", where(key), v));
  }

  void finish() const {
    if (!tree_) return;
    for (const auto& [key, child] : *tree_) {
      if (!used_.count(key)) throw ConfigError(fmt::format("unknown key '{}'", where(key)));
    }
  }

  std::string where(const std::string& key) const { return name_ + "." + key; }

 private:
  const ptree* tree_;
  std::string name_;
  std::set<std::string> used_;
};

std::size_t positive_count(long long v, const std::string& what) {
  if (v <= 0) throw ConfigError(fmt::format("{} must be positive", what));
  return static_cast<std::size_t>(v);
}

std::vector<std::vector<double>> read_numeric_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open '{}'", path.string()));
  std::vector<std::vector<double>> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(to_double(cell, path.string()));
    rows.push_back(std::move(row));
  }
  return rows;
}

BoundarySignal parse_signal(Section& s, const std::string& prefix, const fs::path& base_dir) {
  const std::string kind = s.str(prefix + "kind", "zero");
  if (kind == "zero") return BoundarySignal::zero();
  if (kind == "sine") {
    return {signal::Sine{s.num(prefix + "amplitude", 1.0), s.num(prefix + "frequency", 1.0),
                         s.num(prefix + "phase", 0.0)},
            kind};
  }
  if (kind == "decaying_exp") {
    return {signal::DecayingExp{s.num(prefix + "amplitude", 1.0), s.num(prefix + "rate", 1.0)},
            kind};
  }
  if (kind == "poly_pulse") {
    return {signal::PolyPulse{s.num(prefix + "t0", 0.0), s.num(prefix + "t1", 1.0),
                              s.num(prefix + "amplitude", 1.0)},
            kind};
  }
  if (kind == "sampled") {
    const std::string file = s.str(prefix + "file", "");
    if (file.empty()) throw ConfigError(s.where(prefix + "file") + " is required for sampled signals");
    signal::Sampled sm;
    for (const auto& row : read_numeric_csv(base_dir / file)) {
      if (row.size() != 4) throw ConfigError(file + ": expected columns t,value,first,second");
      sm.times.push_back(row[0]);
      sm.values.push_back(row[1]);
      sm.first.push_back(row[2]);
      sm.second.push_back(row[3]);
    }
    return {std::move(sm), file};
  }
  throw ConfigError(fmt::format("{}: unknown signal kind '{}'", s.where(prefix + "kind"), kind));
}

cplx profile_value(const std::string& name, int k, double x) {
  if (name == "constant") return 1.0;
  if (name == "sine_mode") return std::sin((k + 0.5) * kPi * x);
  if (name == "quarter_sine") return std::sin(0.5 * kPi * x);
  if (name == "poly_exp") return x * (1.0 - 0.5 * x) * std::exp(x);
  throw ConfigError(fmt::format("unknown distributed profile '{}'", name));
}

DistributedSignal parse_distributed(Section& s, const fs::path& base_dir) {
  const std::string kind = s.str("kind", "zero");
  if (kind == "zero") return DistributedSignal::zero();
  if (kind == "separable") {
    const std::string name = s.str("profile", "sine_mode");
    const int k = static_cast<int>(s.integer("profile_k", 0));
    const double scale = s.num("profile_scale", 1.0);
    const UniformGrid grid(positive_count(s.integer("grid", 256), s.where("grid")));
    std::vector<cplx> profile;
    for (double x : grid.points()) profile.push_back(scale * profile_value(name, k, x));
    return DistributedSignal(signal::Separable{grid, std::move(profile), parse_signal(s, "time_", base_dir)},
                             "separable " + name);
  }
  if (kind == "table") {
    const std::string file = s.str("file", "");
    if (file.empty()) throw ConfigError(s.where("file") + " is required for table signals");
    const auto rows = read_numeric_csv(base_dir / file);
    if (rows.empty() || rows.front().size() < 4) {
      throw ConfigError(file + ": expected rows t,u_0,...,u_n with n >= 2");
    }
    signal::Table tab{{}, UniformGrid(rows.front().size() - 2), {}};
    for (const auto& row : rows) {
      if (row.size() != rows.front().size()) throw ConfigError(file + ": ragged table");
      tab.times.push_back(row[0]);
      tab.rows.emplace_back(row.begin() + 1, row.end());
    }
    return DistributedSignal(std::move(tab), file);
  }
  throw ConfigError(fmt::format("{}: unknown distributed kind '{}'", s.where("kind"), kind));
}

std::vector<ModeTerm> parse_modes(const std::string& text, const std::string& what) {
  std::vector<ModeTerm> out;
  std::stringstream all(text);
  std::string item;
  while (std::getline(all, item, ';')) {
    if (trim(item).empty()) continue;
    std::stringstream one(item);
    std::vector<std::string> parts;
    for (std::string p; one >> p;) parts.push_back(p);
    if (parts.size() != 3 && parts.size() != 4) {
      throw ConfigError(fmt::format("{}: entry '{}' must be 'k eps re [im]'", what, trim(item)));
    }
    const long long k = to_integer(parts[0], what);
    const long long eps = to_integer(parts[1], what);
    if (k < 0 || (eps != 1 && eps != -1)) {
      throw ConfigError(fmt::format("{}: bad mode label in '{}'", what, trim(item)));
    }
    const double im = parts.size() == 4 ? to_double(parts[3], what) : 0.0;
    out.push_back({ModeIndex(static_cast<int>(k), static_cast<int>(eps)), {to_double(parts[2], what), im}});
  }
  return out;
}

// Kernel profiles: zero at x = 0 and zero slope at x = 1, so they add no boundary trace.
cplx kernel_derivative(const std::string& name, double x) {
  if (name == "quarter_sine") return 0.5 * kPi * std::cos(0.5 * kPi * x);
  if (name == "parabola") return 1.0 - x;
  return 0.0;
}
cplx kernel_value(const std::string& name, double x) {
  if (name == "quarter_sine") return std::sin(0.5 * kPi * x);
  if (name == "parabola") return x * (1.0 - 0.5 * x);
  return 0.0;
}
void check_kernel_name(const std::string& name, const std::string& what) {
  if (name != "none" && name != "quarter_sine" && name != "parabola") {
    throw ConfigError(fmt::format("{}: unknown profile '{}'", what, name));
  }
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::AssumptionViolated:
    case ErrorKind::RieszConstantDegenerate:
      return kExitAssumption;
    case ErrorKind::CompatibilityViolated:
      return kExitIncompatible;
    default:
      return kExitConfig;
  }
}

fs::path prepare_out(const ExperimentConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  return cfg.out_dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
  f << content;
}

template <class Writer>
void write_with(const fs::path& path, Writer writer) {
  std::ostringstream os;
  writer(os);
  write_file(path, os.str());
}

struct Options {
  std::string config;
  std::string out;
  std::string solver = "spectral";
  int k_max = 20;
  std::optional<std::uint64_t> seed;
  double c1_scale = 1.0;
};

ExperimentConfig resolve(const Options& opt) {
  ExperimentConfig cfg = load_config(opt.config);
  if (!opt.out.empty()) cfg.out_dir = opt.out;
  if (opt.seed) cfg.seed = *opt.seed;
  return cfg;
}

int cmd_spectrum(const Options& opt, std::ostream& out) {
  const ExperimentConfig cfg = resolve(opt);
  const StringParams params = validate_params(cfg.alpha, cfg.beta, cfg.assumption_tol);
  const fs::path path = prepare_out(cfg) / "spectrum.csv";
  write_with(path, [&](std::ostream& os) { write_spectrum_csv(os, params, opt.k_max); });
  out << fmt::format("k0 = {}\nwrote {}\n", params.k0(), path.string());
  return kExitOk;
}

int cmd_certificate(const Options& opt, std::ostream& out) {
  const ExperimentConfig cfg = resolve(opt);
  const StringParams params = validate_params(cfg.alpha, cfg.beta, cfg.assumption_tol);
  const IssCertificate cert = certificate(params);
  const fs::path path = prepare_out(cfg) / "certificate.json";
  write_file(path, certificate_to_json(cert) + "\n");
  out << fmt::format("kappa0 = {:.17g}\nC = {:.17g}\ngamma = {:.17g}\ngamma' = {:.17g}\nwrote {}\n",
                     cert.kappa0, cert.riesz_c, cert.gamma, cert.gamma_prime, path.string());
  return kExitOk;
}

void write_trajectory_outputs(const ExperimentConfig& cfg, const fs::path& dir, const Trajectory& traj) {
  write_with(dir / fmt::format("trajectory_{}.csv", traj.solver),
             [&](std::ostream& os) { write_trajectory_csv(os, traj, cfg.write_coefficients); });
  if (cfg.write_final_state && !traj.states.empty()) {
    write_with(dir / fmt::format("final_state_{}.csv", traj.solver),
               [&](std::ostream& os) { write_state_csv(os, traj.states.back()); });
  }
}

int cmd_simulate(const Options& opt, std::ostream& out) {
  const ExperimentConfig cfg = resolve(opt);
  SimulationConfig sim = build_simulation(cfg);
  sim.store_states = cfg.write_final_state;
  const fs::path dir = prepare_out(cfg);
  std::optional<Trajectory> spectral, fd;
  if (opt.solver == "spectral" || opt.solver == "both") {
    spectral = simulate_spectral(sim);
    write_trajectory_outputs(cfg, dir, *spectral);
    out << fmt::format("spectral: final norm {:.17g}\n", spectral->h_norms.back());
  }
  if (opt.solver == "fd" || opt.solver == "both") {
    FdConfig fdc = cfg.fd;
    fdc.store_states = cfg.write_final_state;
    fd = simulate_fd(sim, fdc);
    write_trajectory_outputs(cfg, dir, *fd);
    out << fmt::format("fd: final norm {:.17g}\n", fd->h_norms.back());
  }
  if (spectral && fd) {
    write_with(dir / "discrepancy.csv", [&](std::ostream& os) { write_discrepancy_csv(os, *spectral, *fd); });
    double worst = 0.0;
    for (std::size_t i = 0; i < spectral->times.size(); ++i) {
      const double scale = std::max(fd->h_norms[i], 1e-300);
      worst = std::max(worst, std::abs(spectral->h_norms[i] - fd->h_norms[i]) / scale);
    }
    out << fmt::format("max rel_diff {:.6g}\n", worst);
  }
  return kExitOk;
}

int cmd_verify(const Options& opt, std::ostream& out) {
  const ExperimentConfig cfg = resolve(opt);
  const SimulationConfig sim = build_simulation(cfg);
  IssCertificate cert = certificate(sim.params);
  cert.c1 *= opt.c1_scale;
  const Trajectory traj = simulate_spectral(sim);
  const VerificationReport report = verify_trajectory(traj, cert, "config", cfg.guard_band);

  ordered_json doc;
  doc["report"] = ordered_json::parse(report_to_json(report, false));
  ordered_json asym;
  try {
    const AsymptoticResult a = asymptotic_check(traj, cfg.window_fraction, cert.kappa0);
    asym = {{"window_fraction", cfg.window_fraction},
            {"peak_norm", a.peak_norm},
            {"late_norm", a.late_norm},
            {"ratio", a.ratio}};
    out << fmt::format("asymptotic ratio {:.6g}\n", a.ratio);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::HorizonTooShort) throw;
    asym = {{"skipped", e.what()}};
  }
  doc["asymptotic"] = asym;

  std::size_t violations = report.violations.size();
  bool suite_failed = false;
  if (cfg.random_count > 0) {
    const SuiteResult suite = run_random_suite(cfg.seed, cfg.random_count, cfg.threads, opt.c1_scale);
    ordered_json rows = ordered_json::array();
    for (const auto& r : suite.reports) {
      rows.push_back({{"scenario", r.scenario},
                      {"worst_uniform_ratio", r.worst_uniform_ratio},
                      {"worst_l2_ratio", r.worst_l2_ratio},
                      {"violations", r.violations.size()}});
    }
    doc["suite"] = {{"seed", cfg.seed},
                    {"count", cfg.random_count},
                    {"violations", suite.violations},
                    {"failures", suite.failures},
                    {"errors", suite.errors},
                    {"scenarios", rows}};
    violations += suite.violations;
    suite_failed = suite.failures > 0;
    out << fmt::format("random suite: {} scenarios, {} violations, {} failures\n", cfg.random_count,
                       suite.violations, suite.failures);
  }
  const fs::path path = prepare_out(cfg) / "verification.json";
  write_file(path, doc.dump(2) + "\n");
  out << fmt::format("violations {}\nwrote {}\n", violations, path.string());
  if (violations > 0) return kExitViolation;
  return suite_failed ? kExitConfig : kExitOk;
}

}  // namespace

ExperimentConfig parse_config(std::istream& is, const fs::path& base_dir) {
  ptree tree;
  try {
    boost::property_tree::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  static const std::set<std::string> kSections = {"params",      "simulation", "initial", "boundary",
                                                  "distributed", "verify",     "output"};
  for (const auto& [name, child] : tree) {
    if (!kSections.count(name) || child.empty()) {
      throw ConfigError(fmt::format("unknown section or top-level key '{}'", name));
    }
  }
  auto section = [&](const std::string& name) {
    const auto it = tree.find(name);
    return Section(it == tree.not_found() ? nullptr : &it->second, name);
  };

  ExperimentConfig cfg;
  Section params = section("params");
  cfg.alpha = params.num("alpha", cfg.alpha);
  cfg.beta = params.num("beta", cfg.beta);
  cfg.assumption_tol = params.num("assumption_tol", cfg.assumption_tol);
  params.finish();

  Section sim = section("simulation");
  cfg.t_end = sim.num("t_end", cfg.t_end);
  cfg.dt = sim.num("dt", cfg.dt);
  cfg.truncation = static_cast<int>(sim.integer("truncation", cfg.truncation));
  cfg.substeps = static_cast<int>(sim.integer("substeps", cfg.substeps));
  cfg.grid = positive_count(sim.integer("grid", static_cast<long long>(cfg.grid)), sim.where("grid"));
  cfg.compat_tol = sim.num("compat_tol", cfg.compat_tol);
  cfg.truncation_rel_tol = sim.num("truncation_rel_tol", cfg.truncation_rel_tol);
  cfg.fd.nx = positive_count(sim.integer("nx_fd", static_cast<long long>(cfg.fd.nx)), sim.where("nx_fd"));
  cfg.fd.dt = sim.num("dt_fd", cfg.fd.dt);
  sim.finish();

  Section init = section("initial");
  cfg.initial.lift = init.flag("lift", cfg.initial.lift);
  cfg.initial.modes = parse_modes(init.str("modes", ""), init.where("modes"));
  cfg.initial.x1_profile = init.str("x1_profile", "none");
  cfg.initial.x1_scale = init.num("x1_scale", 1.0);
  cfg.initial.x2_profile = init.str("x2_profile", "none");
  cfg.initial.x2_scale = init.num("x2_scale", 1.0);
  check_kernel_name(cfg.initial.x1_profile, init.where("x1_profile"));
  check_kernel_name(cfg.initial.x2_profile, init.where("x2_profile"));
  init.finish();

  Section bnd = section("boundary");
  cfg.d = parse_signal(bnd, "", base_dir);
  bnd.finish();

  Section dist = section("distributed");
  cfg.u = parse_distributed(dist, base_dir);
  dist.finish();

  Section ver = section("verify");
  const long long seed = ver.integer("seed", static_cast<long long>(cfg.seed));
  if (seed < 0) throw ConfigError("verify.seed must be >= 0");
  cfg.seed = static_cast<std::uint64_t>(seed);
  const long long count = ver.integer("random_count", 0);
  if (count < 0) throw ConfigError("verify.random_count must be >= 0");
  cfg.random_count = static_cast<std::size_t>(count);
  const long long threads = ver.integer("threads", 0);
  if (threads < 0) throw ConfigError("verify.threads must be >= 0");
  cfg.threads = static_cast<unsigned>(threads);
  cfg.window_fraction = ver.num("window_fraction", cfg.window_fraction);
  cfg.guard_band = ver.num("guard_band", cfg.guard_band);
  ver.finish();

  Section outs = section("output");
  cfg.out_dir = outs.str("directory", cfg.out_dir.string());
  cfg.write_coefficients = outs.flag("coefficients", false);
  cfg.write_final_state = outs.flag("final_state", false);
  outs.finish();
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
  return parse_config(in, path.parent_path());
}

SimulationConfig build_simulation(const ExperimentConfig& cfg) {
  const StringParams params = validate_params(cfg.alpha, cfg.beta, cfg.assumption_tol);
  const UniformGrid grid(cfg.grid);
  StateVector x0 = StateVector::zero(grid);
  if (cfg.initial.lift) x0 += lift_boundary(cfg.d.value(0.0), params, grid);
  for (const ModeTerm& m : cfg.initial.modes) x0 += m.coeff * eigenstate(params, m.index, grid);
  const InitialSpec& in = cfg.initial;
  if (in.x1_profile != "none" || in.x2_profile != "none") {
    x0 += StateVector::from_functions(
        grid, [&](double x) { return in.x1_scale * kernel_derivative(in.x1_profile, x); },
        [&](double x) { return in.x2_scale * kernel_value(in.x2_profile, x); });
  }
  SimulationConfig sim(params, std::move(x0));
  sim.d = cfg.d;
  sim.u = cfg.u;
  sim.t_end = cfg.t_end;
  sim.dt = cfg.dt;
  sim.truncation = cfg.truncation;
  sim.substeps = cfg.substeps;
  sim.compat_tol = cfg.compat_tol;
  sim.truncation_rel_tol = cfg.truncation_rel_tol;
  return sim;
}

void write_spectrum_csv(std::ostream& os, const StringParams& params, int k_max) {
  os << "k,eps,re_lambda,im_lambda,phi_norm,abs_pairing,gamma,complex_branch\n";
  for (int k = 0; k <= k_max; ++k) {
    for (int eps : {-1, 1}) {
      const ModeData m = mode_data(params, ModeIndex(k, eps));
      os << fmt::format("{},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", k, eps, m.lambda.real(),
                        m.lambda.imag(), m.phi_norm, std::abs(m.pairing), m.gamma,
                        k < params.k0() ? 1 : 0);
    }
  }
}

void write_discrepancy_csv(std::ostream& os, const Trajectory& spectral, const Trajectory& fd) {
  if (spectral.times.size() != fd.times.size()) {
    throw Error(ErrorKind::InvalidArgument, "trajectories have different output times");
  }
  os << "t,norm_spectral,norm_fd,rel_diff\n";
  for (std::size_t i = 0; i < spectral.times.size(); ++i) {
    const double a = spectral.h_norms[i];
    const double b = fd.h_norms[i];
    const double rel = b > 0.0 ? std::abs(a - b) / b : std::abs(a - b);
    os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", spectral.times[i], a, b, rel);
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kelvin-Voigt string: spectrum, ISS certificate, simulation and verification"};
  app.require_subcommand(1);
  Options opt;

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalue table as CSV");
  auto* cert = app.add_subcommand("certificate", "ISS certificate as JSON");
  auto* simulate = app.add_subcommand("simulate", "trajectory CSVs");
  auto* verify = app.add_subcommand("verify", "check both ISS estimates along trajectories");
  for (auto* sub : {spectrum, cert, simulate, verify}) {
    sub->add_option("--config", opt.config, "experiment configuration (INI)")->required();
    sub->add_option("--out", opt.out, "output directory, overrides output.directory");
  }
  spectrum->add_option("--k-max", opt.k_max, "largest mode index")->check(CLI::NonNegativeNumber);
  simulate->add_option("--solver", opt.solver, "spectral, fd or both")
      ->check(CLI::IsMember({"spectral", "fd", "both"}));
  verify->add_option("--seed", opt.seed, "random-suite seed, overrides verify.seed");
  verify->add_option("--c1-scale", opt.c1_scale, "debug: scale C1 before checking")->group("Debug");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*spectrum) return cmd_spectrum(opt, out);
    if (*cert) return cmd_certificate(opt, out);
    if (*simulate) return cmd_simulate(opt, out);
    return cmd_verify(opt, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace kvstring::cli
