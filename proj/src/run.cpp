#include "nle/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "nle/error.hpp"
#include "nle/report.hpp"
#include "nle/solver.hpp"
#include "nle/verification.hpp"

namespace nle {

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"solve", "verify", "korn", "poincare", "eringen", "symbol", "info"};
  return names;
}

namespace {

Rect omega_of(const RunConfig& cfg) {
  Rect r = cfg.omega;
  r.n = cfg.n;
  return r;
}

FractionalParams params_at(const RunConfig& cfg, double s, double delta) {
  FractionalParams p = cfg.params();
  p.s = s;
  p.delta = delta;
  return calibrate_a0(p);
}

std::string point_params(const FractionalParams& p, double h, Variant v) {
  return param_string({{"n", std::to_string(p.n)},
                       {"s", format_double(p.s)},
                       {"delta", format_double(p.delta)},
                       {"b0", format_double(p.b0)},
                       {"h", format_double(h)},
                       {"variant", to_string(v)}});
}

// Half the smaller side of Omega_{-delta}.
double inner_half_width(const Discretization& disc) {
  double half = 0.5 * (disc.omega.side(0) - 2.0 * disc.delta);
  if (disc.grid.n == 2) half = std::min(half, 0.5 * (disc.omega.side(1) - 2.0 * disc.delta));
  return half;
}

int run_solve(const RunConfig& cfg, std::ostream& log) {
  const FractionalParams p = params_at(cfg, cfg.s, cfg.delta);
  const Discretization disc = make_grid(omega_of(cfg), cfg.h, p, cfg.padding);
  const ElasticityTensor C = ElasticityTensor::isotropic(cfg.n, {cfg.mu, cfg.lambda});
  SolverOptions opt;
  opt.tolerance = cfg.tol;
  opt.max_iterations = cfg.max_iter;
  opt.preconditioner = cfg.preconditioner;
  const DirichletProblem pb =
      DirichletProblem::make(disc, p, cfg.variant, C, make_force(cfg.force, disc), opt);

  SolveResult result;
  std::string failure;
  try {
    result = solve(pb);
  } catch (const SolveError& e) {
    result = e.partial();
    failure = e.what();
  }
  const SolveReport& r = result.report;
  const std::string params = point_params(p, cfg.h, cfg.variant) + ";force=" + cfg.force;
  Report rep;
  rep.flag("cg_converged", params, r.final_residual, cfg.tol, r.converged && failure.empty());
  rep.flag("cg_spd", params, r.spd_flag ? 1.0 : 0.0, 0.0, !r.spd_flag);
  rep.flag("cg_iterations", params, static_cast<double>(r.iterations), static_cast<double>(cfg.max_iter),
           r.converged);
  rep.flag("energy", params, r.energy, 0.0, std::isfinite(r.energy) && r.energy <= 0.0);
  write_field(cfg.out / "solution.nlf", result.solution);
  write_atomic(cfg.out / "report.csv", rep.csv());
  write_atomic(cfg.out / "timing.txt", "wall_time_seconds = " + format_double(r.wall_time) + "\n");
  if (!failure.empty()) log << failure << "\n";
  log << "solve: " << r.iterations << " iterations, residual " << format_double(r.final_residual) << "\n";
  return rep.pass() ? 0 : 1;
}

int run_verify(const RunConfig& cfg, std::ostream& log) {
  Report rep;
  SuiteOptions opt;
  opt.fields = cfg.fields;
  opt.seed = cfg.seed;
  for (double s : cfg.sweep_s())
    for (double d : cfg.sweep_delta())
      for (double h : cfg.sweep_h()) rep.append(identity_suite(omega_of(cfg), h, params_at(cfg, s, d), cfg.variant, opt));
  write_atomic(cfg.out / "verify.csv", rep.csv());
  log << "verify: " << rep.rows.size() << " checks, " << rep.failures() << " failed\n";
  return rep.pass() ? 0 : 1;
}

int run_constant(const RunConfig& cfg, bool korn, std::ostream& log) {
  Report rep;
  for (double s : cfg.sweep_s())
    for (double d : cfg.sweep_delta())
      for (double h : cfg.sweep_h()) {
        const FractionalParams p = params_at(cfg, s, d);
        const Discretization disc = make_grid(omega_of(cfg), h, p, cfg.padding);
        const ConstantEstimate ce =
            korn ? korn_constant(disc, p, cfg.variant) : poincare_constant(disc, p, cfg.variant);
        const std::string params = point_params(p, h, cfg.variant) + ";method=" + ce.method +
                                   ";dim=" + std::to_string(ce.dim) + ";steps=" + std::to_string(ce.steps);
        if (korn) {
          rep.flag("korn_c2", params, ce.value, 1.0, ce.value > 0.0 && ce.value <= 1.0 + 1e-12);
        } else {
          rep.flag("poincare_lambda_min", params, ce.lambda_min, 0.0, ce.lambda_min > 0.0);
          rep.flag("poincare_constant", params, ce.value, 0.0, std::isfinite(ce.value));
        }
        rep.at_most(korn ? "korn_pencil_residual" : "poincare_pencil_residual", params, ce.pencil_residual, 1e-8);
        log << (korn ? "korn: c^2 = " : "poincare: C = ") << format_double(ce.value) << " (" << params << ")\n";
      }
  write_atomic(cfg.out / (korn ? "korn.csv" : "poincare.csv"), rep.csv());
  return rep.pass() ? 0 : 1;
}

int run_eringen(const RunConfig& cfg, std::ostream& log) {
  const Rect omega = omega_of(cfg);
  EringenOptions opt;
  opt.pairs = cfg.fields;
  opt.seed = cfg.seed;
  opt.mercer_trials = cfg.trials;
  opt.moduli = {cfg.mu, cfg.lambda};
  opt.realspace_omega = omega;
  opt.realspace_h = omega.min_side() / 24.0;
  opt.realspace_delta = std::max(cfg.delta, 3.0 * opt.realspace_h * (1.0 + 1e-9));
  if (!(opt.realspace_delta < 0.5 * omega.min_side())) opt.realspace_h = 0.0;
  Report rep;
  for (double s : cfg.sweep_s())
    for (double d : cfg.sweep_delta())
      for (double h : cfg.sweep_h()) rep.append(eringen_suite(omega, h, params_at(cfg, s, d), opt));
  write_atomic(cfg.out / "eringen.csv", rep.csv());
  log << "eringen: " << rep.rows.size() << " checks, " << rep.failures() << " failed\n";
  return rep.pass() ? 0 : 1;
}

int run_symbol(const RunConfig& cfg, std::ostream& log) {
  const FractionalParams p = params_at(cfg, cfg.s, cfg.delta);
  const RadialSymbol t = tabulate_symbol(p, cfg.rho_max, cfg.samples);
  std::string out = "rho,g,qhat\n";
  bool finite = true;
  for (std::size_t i = 0; i < t.rho_samples.size(); ++i) {
    out += format_double(t.rho_samples[i]) + "," + format_double(t.g_values[i]) + "," +
           format_double(t.qhat_values[i]) + "\n";
    finite = finite && std::isfinite(t.g_values[i]) && std::isfinite(t.qhat_values[i]);
  }
  write_atomic(cfg.out / "symbol.csv", out);
  log << "symbol: " << t.rho_samples.size() << " samples up to rho = " << format_double(cfg.rho_max) << "\n";
  return finite ? 0 : 1;
}

int run_info(const RunConfig& cfg, std::ostream& log) {
  std::string out = "n,s,delta,b0,gamma_s,gamma_1ms,c_ns,sphere_area,a0,rho_l1,rho_l1_expected,defect,pass\n";
  bool all = true;
  for (double s : cfg.sweep_s())
    for (double d : cfg.sweep_delta()) {
      const FractionalParams p = params_at(cfg, s, d);
      const KernelConstants k = kernel_constants(p);
      const double l1 = rho_l1_norm(p);
      const double expected = p.n / (p.n - 1.0 + p.s);
      const double defect = std::abs(l1 - expected);
      const bool pass = defect <= 1e-9;
      all = all && pass;
      out += std::to_string(p.n) + "," + format_double(p.s) + "," + format_double(p.delta) + "," +
             format_double(p.b0) + "," + format_double(k.gamma_s) + "," + format_double(k.gamma_1ms) + "," +
             format_double(k.c_ns) + "," + format_double(k.sphere_area) + "," + format_double(p.a0) + "," +
             format_double(l1) + "," + format_double(expected) + "," + format_double(defect) + "," +
             (pass ? "true" : "false") + "\n";
    }
  write_atomic(cfg.out / "info.csv", out);
  log << "info: " << (all ? "all normalizations within 1e-9" : "normalization defect above 1e-9") << "\n";
  return all ? 0 : 1;
}

}  // namespace

Field make_force(const std::string& spec, const Discretization& disc) {
  const Grid& g = disc.grid;
  const int n = g.n;
  Field f(g, n);
  if (spec == "zero") return f;
  std::array<double, 2> mid{};
  for (int a = 0; a < n; ++a) mid[a] = 0.5 * (disc.omega.lo[a] + disc.omega.hi[a]);
  const double half = inner_half_width(disc);
  if (spec == "bump") {
    const Field b = make_admissible_bump(std::span<const double>(mid.data(), n), 0.5 * half, disc);
    for (std::size_t x = 0; x < g.size(); ++x)
      for (int c = 0; c < n; ++c) f.at(x, c) = (c == 0 ? 1.0 : 0.5) * b.at(x, 0);
    return f;
  }
  if (spec == "two-bump") {
    for (int sign : {-1, 1}) {
      std::array<double, 2> c = mid;
      c[0] += 0.5 * sign * half;
      const Field b = make_admissible_bump(std::span<const double>(c.data(), n), 0.45 * half, disc);
      for (std::size_t x = 0; x < g.size(); ++x)
        for (int k = 0; k < n; ++k) f.at(x, k) += sign * b.at(x, 0);
    }
    return f;
  }
  Field file = read_field(spec);
  if (!(file.grid() == g) || file.components() != n)
    throw Error(Errc::shape_mismatch, "force file " + spec + " does not match the run grid");
  return file;
}

int run(const RunConfig& cfg, std::ostream& log) {
  std::filesystem::create_directories(cfg.out);
  write_atomic(cfg.out / "resolved.cfg", resolved_config(cfg));
  const std::string& c = cfg.command;
  try {
    if (c == "solve") return run_solve(cfg, log);
    if (c == "verify") return run_verify(cfg, log);
    if (c == "korn") return run_constant(cfg, true, log);
    if (c == "poincare") return run_constant(cfg, false, log);
    if (c == "eringen") return run_eringen(cfg, log);
    if (c == "symbol") return run_symbol(cfg, log);
    if (c == "info") return run_info(cfg, log);
  } catch (const Error& e) {
    log << c << " failed: " << e.what() << "\n";
    write_atomic(cfg.out / "error.txt", std::string(e.what()) + "\n");
    return 1;
  }
  throw Error(Errc::config_validation, "unknown subcommand '" + c + "'");
}

}  // namespace nle
