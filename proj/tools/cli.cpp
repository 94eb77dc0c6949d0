#include "cli.hpp"

#include "dlpad/asymptotics.hpp"
#include "dlpad/combinatorics.hpp"
#include "dlpad/mc.hpp"
#include "dlpad/oracles.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>

namespace dlpad::cli {
namespace {

using json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Raised for bad argument combinations detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::optional<double> nu;
  std::optional<double> w;
  std::optional<double> mu;
  std::string format;
  std::string out_path;
  std::optional<double> tol;
};

struct Rates {
  ModelParams params;
  double nu;
  bool normalized;
};

Rates resolve_rates(const Common& c, double default_nu) {
  if (c.w || c.mu) {
    if (!c.w || !c.mu) throw UsageError("--w and --mu must be given together");
    const ModelParams p = ModelParams::from_rates(*c.w, *c.mu);
    return {p, p.nu(), false};
  }
  const double nu = c.nu.value_or(default_nu);
  return {ModelParams::normalized(nu), nu, true};
}

void require_critical_nu(double nu) {
  if (!(nu > 0.0 && nu < 1.0)) throw UsageError("critical quantities need nu = 1 - mu/w in (0, 1)");
}

const CLI::Validator kEvenSize(
    [](std::string& text) -> std::string {
      long v = 0;
      try {
        std::size_t used = 0;
        v = std::stol(text, &used);
        if (used != text.size()) return "system size must be an integer, got '" + text + "'";
      } catch (const std::exception&) {
        return "system size must be an integer, got '" + text + "'";
      }
      if (v < 2 || v % 2 != 0) return "system size L must be even and >= 2, got " + text;
      return {};
    },
    "EVEN>=2");

void add_rate_options(CLI::App* cmd, Common& c) {
  auto* nu = cmd->add_option("--nu", c.nu, "complementary deposition rate 1 - mu/w (sets w = 1/2)");
  auto* w = cmd->add_option("--w", c.w, "jump rate (with --mu, instead of --nu)");
  auto* mu = cmd->add_option("--mu", c.mu, "deposition rate (with --w, instead of --nu)");
  nu->excludes(w)->excludes(mu);
  w->needs(mu);
  mu->needs(w);
}

void add_output_options(CLI::App* cmd, Common& c, const std::string& default_format) {
  c.format = default_format;
  cmd->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", c.out_path, "write output to PATH instead of stdout");
}

json cell_to_json(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return std::isfinite(*d) ? json(*d) : json(nullptr);
  if (const auto* i = std::get_if<long long>(&cell)) return json(*i);
  return json(std::get<std::string>(cell));
}

std::string cell_to_csv(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  const std::string& s = std::get<std::string>(cell);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

json meta_base(const Table& t, const std::string& command, json config) {
  json meta;
  meta["schema"] = t.schema;
  meta["version"] = kVersion;
  meta["command"] = command;
  meta["config"] = std::move(config);
  return meta;
}

void emit(const Table& t, const json& meta, const Common& c, std::ostream& out) {
  std::ofstream file;
  std::ostream* dest = &out;
  if (!c.out_path.empty()) {
    file.open(c.out_path);
    if (!file) throw UsageError("cannot open output file '" + c.out_path + "'");
    dest = &file;
  }
  if (c.format == "json") {
    json doc;
    doc["meta"] = meta;
    json rows = json::array();
    for (const auto& row : t.rows) {
      json obj = json::object();
      for (std::size_t i = 0; i < t.columns.size(); ++i) obj[t.columns[i]] = cell_to_json(row[i]);
      rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    *dest << doc.dump(2) << '\n';
  } else {
    write_csv(t, *dest);
  }
  dest->flush();
}

json normalization_meta(const Rates& r) {
  json n;
  n["w"] = r.params.w();
  n["mu"] = r.params.mu();
  n["nu"] = r.nu;
  n["rate_scale"] = 2.0 * r.params.w();
  n["kappa_star_factor"] = kCumulantNormalization;
  return n;
}

std::vector<double> u_grid(double u_min, double u_max, int steps) {
  if (steps < 1) throw UsageError("--u-steps must be >= 1");
  if (!(u_min <= u_max)) throw UsageError("--u-min must not exceed --u-max");
  if (steps == 1) return {u_min};
  std::vector<double> us;
  const double k = steps - 1;
  // weighted form keeps the midpoint of a symmetric grid exactly at 0
  for (int i = 0; i < steps; ++i) us.push_back((u_min * (k - i) + u_max * i) / k);
  return us;
}

// ---- cumulants ------------------------------------------------------------

struct CumulantsArgs {
  Common common;
  std::vector<int> sizes{256, 512, 1024, 2048, 4096};
  std::vector<int> orders{1, 2, 3, 4};
};

int cmd_cumulants(const CumulantsArgs& a, std::ostream& out) {
  const Rates rates = resolve_rates(a.common, 0.9);
  require_critical_nu(rates.nu);
  int max_order = 0;
  for (int n : a.orders) {
    if (n < 1 || n > kMaxCumulantOrder)
      throw UsageError("--orders entries must be in [1, " + std::to_string(kMaxCumulantOrder) + "]");
    max_order = std::max(max_order, n);
  }
  const double scale = 2.0 * rates.params.w();

  Table t{"cumulants.v1", {"L", "n", "kappa_c", "kappa_star", "ratio"}, {}};
  for (int L : a.sizes) {
    const std::vector<double> kappa = critical_cumulants(rates.nu, L, max_order);
    for (int n : a.orders) {
      const double kc = scale * kappa[n - 1];
      const double ks = scale * kappa_star(n, rates.nu);
      double ratio = kc;
      if (n == 2 || n == 3)
        ratio = kc / std::log(static_cast<double>(L));
      else if (n >= 4)
        ratio = kc / std::pow(static_cast<double>(L), n - 2);
      t.rows.push_back({static_cast<long long>(L), static_cast<long long>(n), kc, ks, ratio});
    }
  }
  json config;
  config["L"] = a.sizes;
  config["orders"] = a.orders;
  json meta = meta_base(t, "cumulants", config);
  meta["normalization"] = normalization_meta(rates);
  meta["ratio"] = "n=1: kappa_c; n=2,3: kappa_c/ln L; n>=4: kappa_c/L^(n-2)";
  emit(t, meta, a.common, out);
  return kSuccess;
}

// ---- collapse -------------------------------------------------------------

struct CollapseArgs {
  Common common;
  std::vector<int> sizes{64, 128, 256};
  double u_min = -3.0;
  double u_max = 3.0;
  int u_steps = 13;
};

int cmd_collapse(const CollapseArgs& a, std::ostream& out) {
  const Rates rates = resolve_rates(a.common, 0.9);
  require_critical_nu(rates.nu);
  const std::vector<double> us = u_grid(a.u_min, a.u_max, a.u_steps);
  const double theta = scaling_argument(rates.nu);
  const double tol = a.common.tol.value_or(1e-12);

  std::vector<double> limit;
  for (double u : us) limit.push_back(h_scaling(theta * u, tol));

  Table t{"collapse.v1", {"L", "u", "k0_tilde", "h_limit"}, {}};
  for (int L : a.sizes)
    for (std::size_t i = 0; i < us.size(); ++i)
      t.rows.push_back({static_cast<long long>(L), us[i], k0_tilde(rates.nu, L, us[i]), limit[i]});

  json config;
  config["L"] = a.sizes;
  config["u_min"] = a.u_min;
  config["u_max"] = a.u_max;
  config["u_steps"] = a.u_steps;
  config["tol"] = tol;
  json meta = meta_base(t, "collapse", config);
  json norm;
  norm["nu"] = rates.nu;
  norm["xi"] = sound_velocity(rates.nu);
  norm["theta"] = theta;
  norm["w"] = 0.5;
  norm["kappa_star_factor"] = kCumulantNormalization;
  meta["normalization"] = norm;
  emit(t, meta, a.common, out);
  return kSuccess;
}

// ---- oracle-check ---------------------------------------------------------

struct OracleArgs {
  Common common;
  std::vector<int> sizes{4, 6, 8, 10};
  std::vector<double> tilts;
  std::string sector = "both";
  double perturb = 0.0;
};

int cmd_oracle_check(const OracleArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<Rates> grid;
  if (a.common.nu || a.common.w || a.common.mu) {
    grid.push_back(resolve_rates(a.common, 0.5));
  } else {
    for (double nu : {0.3, 0.5, 0.9}) grid.push_back({ModelParams::normalized(nu), nu, true});
  }
  for (int L : a.sizes)
    if (L > kMaxSectorEdSize)
      throw UsageError("oracle-check: exact diagonalization needs L <= " + std::to_string(kMaxSectorEdSize));
  std::vector<Sector> sectors;
  if (a.sector == "both")
    sectors = {Sector::even, Sector::odd};
  else
    sectors = {parse_sector(a.sector)};
  const double tol = a.common.tol.value_or(1e-10);
  HamiltonianOptions opts;
  opts.perturbation = a.perturb;

  Table t{"oracle_check.v1",
          {"nu", "w", "mu", "L", "s", "sector", "cgf_formula", "cgf_ed", "residual_ed", "activity_formula",
           "activity_fd", "residual_fd", "status"},
          {}};
  int failures = 0;
  for (const Rates& r : grid) {
    std::vector<double> tilts = a.tilts;
    if (tilts.empty()) {
      tilts.push_back(0.0);
      if (r.nu > 0.0) {
        const double sc = critical_point(r.params);
        tilts.insert(tilts.end(), {sc, sc - 0.2, sc + 0.2});
      }
    }
    for (int L : a.sizes)
      for (double s : tilts)
        for (Sector sec : sectors) {
          const double formula = cgf(r.params, s, L, sec);
          const double activity = mean_activity(r.params, s, L, sec);
          double ed = kNaN;
          double fd = kNaN;
          std::string status = "ok";
          try {
            ed = cgf_from_ed(r.params, s, L, sec, opts);
            fd = fd_cumulant(r.params, L, s, 1, sec).value;
          } catch (const std::runtime_error& e) {
            status = std::string("error: ") + e.what();
          }
          const double res_ed = std::abs(formula - ed);
          const double res_fd = std::abs(activity - fd);
          if (status == "ok" && !(res_ed < tol && res_fd < tol)) status = "fail";
          if (status != "ok") ++failures;
          t.rows.push_back({r.nu, r.params.w(), r.params.mu(), static_cast<long long>(L), s, to_string(sec),
                            formula, ed, res_ed, activity, fd, res_fd, status});
        }
  }
  json config;
  config["L"] = a.sizes;
  config["s"] = a.tilts;
  config["sector"] = a.sector;
  config["tol"] = tol;
  json meta = meta_base(t, "oracle-check", config);
  meta["failures"] = failures;
  if (a.perturb != 0.0) meta["perturbation"] = a.perturb;
  emit(t, meta, a.common, out);
  if (failures > 0) {
    err << "oracle-check: " << failures << " of " << t.rows.size() << " rows exceed tolerance " << tol << '\n';
    return kValidationFailure;
  }
  return kSuccess;
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
  Common common;
  int L = 64;
  double t_max = 1e4;
  int replicas = 16;
  std::uint64_t seed = 1;
  double burn_in = 0.1;
  double z_max = 3.0;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  const Rates rates = resolve_rates(a.common, 0.5);
  if (!(a.t_max > 0.0)) throw UsageError("--t-max must be > 0");
  if (a.replicas < 2) throw UsageError("--replicas must be >= 2 (standard errors need two)");
  if (!(a.burn_in >= 0.0 && a.burn_in < 1.0)) throw UsageError("--burn-in must be in [0, 1)");

  const SimulationResult res = simulate(rates.params, a.L, a.t_max, a.seed, a.replicas, a.burn_in);
  const double rho = stationary_density(rates.params);
  const double activity = mean_activity(rates.params, 0.0, a.L, Sector::even);

  Table t{"simulate.v1", {"quantity", "estimate", "std_error", "theory", "z_score"}, {}};
  auto add = [&](const char* name, const Estimate& e, double theory) {
    t.rows.push_back({std::string(name), e.mean, e.std_error, theory, (e.mean - theory) / e.std_error});
  };
  add("density", res.density, rho);
  add("activity_rate", res.activity_rate, activity);

  bool parity_ok = true;
  std::uint64_t steps = 0, jumps = 0, silent = 0;
  for (const TrajectoryStats& st : res.replicas) {
    parity_ok = parity_ok && st.initial_parity == st.final_parity;
    steps += st.steps;
    jumps += st.activity_total;
    silent += st.silent;
  }
  json config;
  config["L"] = a.L;
  config["t_max"] = a.t_max;
  config["replicas"] = a.replicas;
  config["seed"] = a.seed;
  config["burn_in_fraction"] = a.burn_in;
  config["z_max"] = a.z_max;
  json meta = meta_base(t, "simulate", config);
  meta["normalization"] = normalization_meta(rates);
  meta["rng"] = "mt19937_64, replica i seeded with splitmix64(seed + (i+1) * 0x9E3779B97F4A7C15)";
  meta["events"] = {{"total", steps}, {"jumps", jumps}, {"silent", silent}};
  meta["parity_conserved"] = parity_ok;
  emit(t, meta, a.common, out);

  int code = kSuccess;
  for (const auto& row : t.rows) {
    const double z = std::get<double>(row[4]);
    if (!(std::abs(z) <= a.z_max)) {
      err << "simulate: " << std::get<std::string>(row[0]) << " z-score " << z << " exceeds " << a.z_max << '\n';
      code = kValidationFailure;
    }
  }
  if (!parity_ok) {
    err << "simulate: particle-number parity changed along a trajectory\n";
    code = kValidationFailure;
  }
  return code;
}

// ---- phi-table ------------------------------------------------------------

struct PhiArgs {
  Common common;
  std::vector<int> ms{0, 1, 2, 3};
  std::vector<long> ns{1, 2, 4, 8, 16, 32, 64};
};

int cmd_phi_table(const PhiArgs& a, std::ostream& out) {
  Table t{"phi_table.v1", {"m", "N", "exact", "asymptotic", "diff_N4"}, {}};
  for (int m : a.ms)
    for (long n : a.ns) {
      const double exact = phi_exact(m, n);
      const double asym = phi_asymptotic(m, n);
      const double n4 = std::pow(static_cast<double>(n), 4);
      t.rows.push_back({static_cast<long long>(m), static_cast<long long>(n), exact, asym, (exact - asym) * n4});
    }
  json config;
  config["m"] = a.ms;
  config["N"] = a.ns;
  emit(t, meta_base(t, "phi-table", config), a.common, out);
  return kSuccess;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const Table& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_to_csv(row[i]);
    out << '\n';
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Activity cumulants of pair annihilation and deposition on a ring", "dlpad"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CumulantsArgs cum;
  auto* c_cum = app.add_subcommand("cumulants", "critical cumulants kappa^c_n(L) and their asymptotic coefficients");
  add_rate_options(c_cum, cum.common);
  add_output_options(c_cum, cum.common, "csv");
  c_cum->add_option("--L", cum.sizes, "system sizes (comma list)")->delimiter(',')->check(kEvenSize)->capture_default_str();
  c_cum->add_option("--orders", cum.orders, "cumulant orders (comma list)")->delimiter(',')->capture_default_str();

  CollapseArgs col;
  auto* c_col = app.add_subcommand("collapse", "scaled near-critical generating function vs its limit curve");
  add_rate_options(c_col, col.common);
  add_output_options(c_col, col.common, "csv");
  c_col->add_option("--L", col.sizes, "system sizes (comma list)")->delimiter(',')->check(kEvenSize)->capture_default_str();
  c_col->add_option("--u-min", col.u_min, "lowest scaling variable")->capture_default_str();
  c_col->add_option("--u-max", col.u_max, "highest scaling variable")->capture_default_str();
  c_col->add_option("--u-steps", col.u_steps, "number of grid points")->capture_default_str();
  c_col->add_option("--tol", col.common.tol, "accuracy of the limit curve h (default 1e-12)");

  OracleArgs orc;
  auto* c_orc = app.add_subcommand("oracle-check", "mode sums vs exact diagonalization and finite differences");
  add_rate_options(c_orc, orc.common);
  add_output_options(c_orc, orc.common, "csv");
  c_orc->add_option("--L", orc.sizes, "system sizes (comma list, <= 14)")->delimiter(',')->check(kEvenSize)->capture_default_str();
  c_orc->add_option("--s", orc.tilts, "tilts (comma list; default 0, s_c, s_c -/+ 0.2)")->delimiter(',');
  c_orc->add_option("--sector", orc.sector, "parity sector")
      ->check(CLI::IsMember({"even", "odd", "both"}))
      ->capture_default_str();
  c_orc->add_option("--tol", orc.common.tol, "largest accepted residual (default 1e-10)");
  c_orc->add_option("--perturb", orc.perturb, "shift one diagonal matrix element (negative control)")->group("");

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "kinetic Monte Carlo of the untilted process");
  add_rate_options(c_sim, sim.common);
  add_output_options(c_sim, sim.common, "json");
  c_sim->add_option("--L", sim.L, "system size")->check(kEvenSize)->capture_default_str();
  c_sim->add_option("--t-max", sim.t_max, "trajectory length")->capture_default_str();
  c_sim->add_option("--replicas", sim.replicas, "independent replicas")->capture_default_str();
  c_sim->add_option("--seed", sim.seed, "base seed")->capture_default_str();
  c_sim->add_option("--burn-in", sim.burn_in, "discarded fraction of each trajectory")->capture_default_str();
  c_sim->add_option("--z-max", sim.z_max, "largest accepted |z-score|")->capture_default_str();

  PhiArgs phi;
  auto* c_phi = app.add_subcommand("phi-table", "trigonometric sums Phi_m(N), exact and asymptotic");
  add_output_options(c_phi, phi.common, "csv");
  c_phi->add_option("--m", phi.ms, "orders m (comma list)")->delimiter(',')->check(CLI::Range(0, 30))->capture_default_str();
  c_phi->add_option("--N", phi.ns, "sizes N (comma list)")->delimiter(',')->check(CLI::Range(1L, 1000000L))->capture_default_str();

  std::vector<std::string> argv_store{"dlpad"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*c_cum) return cmd_cumulants(cum, out);
    if (*c_col) return cmd_collapse(col, out);
    if (*c_orc) return cmd_oracle_check(orc, out, err);
    if (*c_sim) return cmd_simulate(sim, out, err);
    if (*c_phi) return cmd_phi_table(phi, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  }
  return kUsageError;
}

}  // namespace dlpad::cli
