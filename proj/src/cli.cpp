#include "ffkg/cli.hpp"

#include <fmt/core.h>

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ffkg/analysis.hpp"
#include "ffkg/params.hpp"
#include "ffkg/reference.hpp"
#include "ffkg/scheme.hpp"

namespace ffkg::cli {

namespace {

[[noreturn]] void config_error(const std::string& msg) {
  throw Error(ErrorCode::InvalidArgument, msg);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view key, std::string_view v) {
  v = trim(v);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(x)) {
    config_error(fmt::format("{}: '{}' is not a finite number", key, v));
  }
  return x;
}

long long to_integer(std::string_view key, std::string_view v) {
  v = trim(v);
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    config_error(fmt::format("{}: '{}' is not an integer", key, v));
  }
  return x;
}

bool to_bool(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  config_error(fmt::format("{}: '{}' is not a boolean", key, v));
}

std::vector<double> to_list(std::string_view key, std::string_view v) {
  std::vector<double> out;
  v = trim(v);
  while (!v.empty()) {
    const auto comma = v.find(',');
    out.push_back(to_double(key, v.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    v = v.substr(comma + 1);
  }
  return out;
}

std::string num(double x) { return fmt::format("{:.17g}", x); }

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

InitialProfiles profiles_for(const RunConfig& cfg, const PhysicalSetup& setup) {
  if (cfg.profile == "gaussian") return InitialProfiles::gaussian();
  if (cfg.profile == "zero") return InitialProfiles::zero();
  return InitialProfiles::right_moving(setup.omega);
}

struct Problem {
  PhysicalSetup setup;
  FilterParams params;  // plus branch, or zero branch in mu-zero mode
  PeriodicGrid grid;
  std::int64_t steps = 0;
};

Problem make_problem(const RunConfig& cfg) {
  Problem p;
  p.setup = PhysicalSetup::make(cfg.epsilon, cfg.kappa, cfg.lambda, cfg.t_final);
  const double length = cfg.x_max - cfg.x_min;
  if (cfg.mode == Mode::two_branch) {
    double tau_target = cfg.tau_target;
    if (tau_target <= 0.0) {
      const BetaSolution b = solve_beta(cfg.epsilon, cfg.rho, cfg.kappa, cfg.h_target);
      tau_target = cfg.tau_factor * b.h * b.h;
    }
    p.params = solve_params(p.setup, cfg.rho, cfg.r, cfg.h_target, tau_target);
    p.grid = PeriodicGrid::fitted(cfg.x_min, length, p.params.h);
    p.steps = std::max<std::int64_t>(1, std::llround(cfg.t_final / p.params.tau));
  } else {
    const auto m = static_cast<std::size_t>(std::max(1.0, std::round(length / cfg.h_target)));
    p.grid = PeriodicGrid::from_length(cfg.x_min, length, m);
    const double h = p.grid.h();
    const double tau_target = cfg.tau_target > 0.0 ? cfg.tau_target : cfg.tau_factor * h * h;
    p.steps = std::max<std::int64_t>(1, std::llround(cfg.t_final / tau_target));
    const double tau = cfg.t_final / static_cast<double>(p.steps);
    p.params = direct_params(p.setup, tau, h, cfg.r, Branch::zero);
  }
  return p;
}

const char* regime(const RunConfig& cfg, const PhysicalSetup& setup) {
  if (cfg.mode == Mode::mu_zero) return "leapfrog-limit";
  const double eps2 = cfg.epsilon * cfg.epsilon;
  const double tol = 1e-12 * std::abs(cfg.rho);
  const bool alpha_zero = std::abs(cfg.rho - eps2 / (setup.omega * setup.omega)) <= tol;
  const bool beta_zero = std::abs(cfg.rho - eps2) <= tol;
  return (alpha_zero || beta_zero) ? "leapfrog-limit" : "filtered";
}

std::vector<double> sweep(const std::optional<std::vector<double>>& list, double single) {
  return list ? *list : std::vector<double>{single};
}

}  // namespace

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "epsilon") cfg.epsilon = to_double(key, value);
  else if (key == "kappa") cfg.kappa = to_double(key, value);
  else if (key == "lambda") cfg.lambda = to_double(key, value);
  else if (key == "rho") cfg.rho = to_double(key, value);
  else if (key == "r") cfg.r = to_double(key, value);
  else if (key == "T_final" || key == "t_final") cfg.t_final = to_double(key, value);
  else if (key == "x_min") cfg.x_min = to_double(key, value);
  else if (key == "x_max") cfg.x_max = to_double(key, value);
  else if (key == "h_target") cfg.h_target = to_double(key, value);
  else if (key == "tau_target") cfg.tau_target = to_double(key, value);
  else if (key == "tau_factor") cfg.tau_factor = to_double(key, value);
  else if (key == "mode") {
    if (value == "two-branch") cfg.mode = Mode::two_branch;
    else if (value == "mu-zero") cfg.mode = Mode::mu_zero;
    else config_error(fmt::format("mode: expected two-branch or mu-zero, got '{}'", value));
  } else if (key == "profile") {
    if (value != "gaussian" && value != "zero" && value != "right-moving") {
      config_error(fmt::format("profile: unknown profile '{}'", value));
    }
    cfg.profile = std::string(value);
  } else if (key == "reference_modes") {
    const long long m = to_integer(key, value);
    if (m < 8) config_error("reference_modes must be at least 8");
    cfg.reference_modes = static_cast<std::size_t>(m);
  } else if (key == "reference_dt") cfg.reference_dt = to_double(key, value);
  else if (key == "kg_dt") cfg.kg_dt = to_double(key, value);
  else if (key == "strict") cfg.strict = to_bool(key, value);
  else if (key == "output") cfg.output = std::string(value);
  else if (key == "epsilons") cfg.epsilons = to_list(key, value);
  else if (key == "h_targets") cfg.h_targets = to_list(key, value);
  else if (key == "k_min") cfg.k_min = to_integer(key, value);
  else if (key == "k_max") cfg.k_max = to_integer(key, value);
  else if (key == "defect_stride") cfg.defect_stride = to_integer(key, value);
  else config_error(fmt::format("unknown key '{}'", key));
}

void apply_override(RunConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    config_error(fmt::format("expected key=value, got '{}'", assignment));
  }
  apply_setting(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

void parse_config_text(RunConfig& cfg, std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      apply_override(cfg, line);
    } catch (const Error& e) {
      config_error(fmt::format("line {}: {}", line_no, e.what()));
    }
  }
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error(fmt::format("cannot read config file '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  parse_config_text(cfg, ss.str());
}

void validate(const RunConfig& cfg) {
  if (!(cfg.epsilon > 0.0 && cfg.epsilon <= 1.0)) config_error("epsilon must lie in (0, 1]");
  if (cfg.kappa == 0.0) config_error("kappa must be nonzero");
  if (cfg.rho == 0.0) config_error("rho must be nonzero");
  if (!(cfg.r < 1.0)) config_error("r must be below 1");
  if (!(cfg.t_final > 0.0)) config_error("T_final must be positive");
  if (!(cfg.x_max > cfg.x_min)) config_error("x_max must exceed x_min");
  if (!(cfg.h_target > 0.0)) config_error("h_target must be positive");
  if (cfg.tau_target < 0.0) config_error("tau_target must be positive (or 0 for tau_factor h^2)");
  if (!(cfg.tau_factor > 0.0)) config_error("tau_factor must be positive");
  if (!(cfg.reference_dt > 0.0) || !(cfg.kg_dt > 0.0)) config_error("reference steps must be positive");
  if (cfg.defect_stride < 1) config_error("defect_stride must be at least 1");
  for (const auto* list : {&cfg.epsilons, &cfg.h_targets}) {
    if (!*list) continue;
    for (double x : **list) {
      if (!(x > 0.0)) config_error("sweep values must be positive");
    }
  }
}

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::ZeroWaveVector:
    case ErrorCode::GridMismatch:
      return 2;
    case ErrorCode::NoBracket:
    case ErrorCode::PoleProximity:
    case ErrorCode::SingularMode:
      return 3;
    case ErrorCode::NonFinite:
    case ErrorCode::UnstableParameters:
      return 4;
  }
  return 1;
}

void cmd_params(const RunConfig& cfg, std::ostream& out) {
  const Problem p = make_problem(cfg);
  const ConsistencyResiduals res = check_consistency(p.setup, p.params);
  const StabilityReport stab = check_stability(p.setup, p.params);
  out << "mode,epsilon,kappa,lambda,rho,r,h_target,tau_target,h,tau,alpha,beta,res1,res2,"
         "stab_lhs,stable,nodes,steps,regime\n";
  out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                     cfg.mode == Mode::two_branch ? "two-branch" : "mu-zero", num(cfg.epsilon),
                     num(cfg.kappa), num(cfg.lambda), num(p.params.rho), num(cfg.r),
                     num(cfg.h_target), num(cfg.tau_target), num(p.params.h), num(p.params.tau),
                     num(p.params.alpha.value()), num(p.params.beta.value()), num(res.res1),
                     num(res.res2), num(stab.lhs), stab.satisfied ? "true" : "false",
                     p.grid.size(), p.steps, regime(cfg, p.setup));
}

namespace {

void solve_two_branch(const RunConfig& cfg, const Problem& p, std::ostream& out,
                      std::ostream& log) {
  const PhysicalSetup& setup = p.setup;
  const InitialProfiles profiles = profiles_for(cfg, setup);
  const FilterParams pp = p.params.for_branch(Branch::plus, setup);
  const FilterParams pm = p.params.for_branch(Branch::minus, setup);
  const CoefficientOptions copts{cfg.strict};
  const SchemeCoefficients cp = build_coefficients(setup, pp, p.grid, copts);
  const SchemeCoefficients cm = build_coefficients(setup, pm, p.grid, copts);
  if (!cp.stable) log << "warning: stability bound violated, the run may blow up\n";

  const PeriodicGrid env_grid =
      PeriodicGrid::from_length(p.grid.x_min(), p.grid.length(), cfg.reference_modes);
  const auto env0 = nls_initial_envelopes(profiles, env_grid, setup.omega);
  const auto grid0 = nls_initial_envelopes(profiles, p.grid, setup.omega);
  TrajectoryOptions topts;
  topts.internal_dt = cfg.reference_dt;

  EnvelopeTrajectory ref_p, ref_m;
  BranchTrajectory run_p, run_m;
  std::exception_ptr failure;
#pragma omp parallel sections
  {
#pragma omp section
    {
      try {
        ref_p = envelope_trajectory(Branch::plus, setup, env0.first, pp.tau, p.steps, topts);
        auto [w0, w1] = startup(Branch::plus, grid0.first, setup, pp);
        run_p = run_branch(cp, std::move(w0), std::move(w1), p.steps);
      } catch (...) {
#pragma omp critical(ffkg_solve_failure)
        if (!failure) failure = std::current_exception();
      }
    }
#pragma omp section
    {
      try {
        ref_m = envelope_trajectory(Branch::minus, setup, env0.second, pm.tau, p.steps, topts);
        auto [w0, w1] = startup(Branch::minus, grid0.second, setup, pm);
        run_m = run_branch(cm, std::move(w0), std::move(w1), p.steps);
      } catch (...) {
#pragma omp critical(ffkg_solve_failure)
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);

  out << "step,t,norm_plus,norm_minus,err_linf_plus,err_wiener_plus,err_velocity_plus,"
         "err_linf_minus,err_wiener_minus,err_velocity_minus\n";
  for (std::int64_t n = 0; n <= p.steps; ++n) {
    const auto i = static_cast<std::size_t>(n);
    const ErrorReport ep = error_report(run_p.w[i], run_p.v[i], ref_p, n, setup, pp);
    const ErrorReport em = error_report(run_m.w[i], run_m.v[i], ref_m, n, setup, pm);
    out << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", n, num(static_cast<double>(n) * pp.tau),
                       num(max_norm(run_p.w[i])), num(max_norm(run_m.w[i])), num(ep.err_linf),
                       num(ep.err_wiener), num(ep.err_velocity), num(em.err_linf),
                       num(em.err_wiener), num(em.err_velocity));
  }
}

void solve_mu_zero(const RunConfig& cfg, const Problem& p, std::ostream& out, std::ostream& log) {
  const PhysicalSetup& setup = p.setup;
  const InitialProfiles profiles = profiles_for(cfg, setup);
  const SchemeCoefficients c = build_coefficients(setup, p.params, p.grid, {cfg.strict});
  if (!c.stable) log << "warning: stability bound not met; relying on the per-mode analysis\n";
  auto [w0, w1] = startup_zero(profiles, p.grid, setup, p.params, cfg.kg_dt);
  const BranchTrajectory run = run_branch(c, std::move(w0), std::move(w1), p.steps);

  const PeriodicGrid ref_grid =
      PeriodicGrid::from_length(p.grid.x_min(), p.grid.length(), cfg.reference_modes);
  KgState ref = kg_initial_state(profiles, ref_grid, setup);
  KgStepper stepper(ref_grid, setup);

  out << "step,t,norm,err_linf,err_wiener,err_velocity\n";
  for (std::int64_t n = 0; n <= p.steps; ++n) {
    const auto i = static_cast<std::size_t>(n);
    if (n > 0) stepper.advance(ref, p.params.tau, cfg.kg_dt);
    const ErrorReport e = kg_error_report(run.w[i], run.v[i], ref, setup);
    out << fmt::format("{},{},{},{},{},{}\n", n, num(static_cast<double>(n) * p.params.tau),
                       num(max_norm(run.w[i])), num(e.err_linf), num(e.err_wiener),
                       num(e.err_velocity));
  }
}

}  // namespace

void cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const Problem p = make_problem(cfg);
  if (cfg.mode == Mode::two_branch) {
    solve_two_branch(cfg, p, out, log);
  } else {
    solve_mu_zero(cfg, p, out, log);
  }
}

void cmd_converge(const RunConfig& cfg, std::ostream& out) {
  out << "epsilon,h_target,h,tau,alpha,beta,nodes,steps,stab_lhs,err_linf,err_wiener,"
         "err_velocity,slope,slope_velocity,status,reason\n";
  const std::vector<double> epsilons = sweep(cfg.epsilons, cfg.epsilon);
  const std::vector<double> h_targets = sweep(cfg.h_targets, cfg.h_target);
  if (epsilons.empty() || h_targets.empty()) return;

  if (cfg.mode == Mode::two_branch) {
    StudyConfig sc;
    sc.kappa = cfg.kappa;
    sc.lambda = cfg.lambda;
    sc.t_final = cfg.t_final;
    sc.rho = cfg.rho;
    sc.r = cfg.r;
    sc.x_min = cfg.x_min;
    sc.x_max = cfg.x_max;
    sc.epsilons = epsilons;
    sc.h_targets = h_targets;
    sc.tau_factor = cfg.tau_factor;
    sc.reference_modes = cfg.reference_modes;
    sc.trajectory.internal_dt = cfg.reference_dt;
    if (cfg.profile != "gaussian") {
      sc.profiles = profiles_for(cfg, PhysicalSetup::make(1.0, cfg.kappa, cfg.lambda, 1.0));
    }
    for (const StudyRow& r : convergence_study(sc)) {
      out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", num(r.epsilon),
                         num(r.h_target), num(r.params.h), num(r.params.tau),
                         num(r.params.alpha.value()), num(r.params.beta.value()), r.nodes,
                         r.steps, num(r.stab_lhs), num(r.error.err_linf),
                         num(r.error.err_wiener), num(r.error.err_velocity), num(r.slope_linf),
                         num(r.slope_velocity), r.skipped ? "skipped" : "ok", quoted(r.reason));
    }
    return;
  }

  for (double eps : epsilons) {
    LeapfrogConfig lc;
    lc.epsilon = eps;
    lc.kappa = cfg.kappa;
    lc.lambda = cfg.lambda;
    lc.t_final = cfg.t_final;
    lc.r = cfg.r;
    lc.x_min = cfg.x_min;
    lc.x_max = cfg.x_max;
    lc.tau_factor = cfg.tau_factor;
    lc.reference_modes = cfg.reference_modes;
    lc.reference_dt = cfg.kg_dt;
    lc.profiles = profiles_for(cfg, PhysicalSetup::make(eps, cfg.kappa, cfg.lambda, 1.0));
    const double length = cfg.x_max - cfg.x_min;
    for (double h : h_targets) {
      lc.node_counts.push_back(static_cast<std::size_t>(std::max(1.0, std::round(length / h))));
    }
    const PhysicalSetup setup = PhysicalSetup::make(eps, cfg.kappa, cfg.lambda, cfg.t_final);
    const std::vector<LeapfrogRow> rows = leapfrog_study(lc);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const LeapfrogRow& r = rows[i];
      const double alpha = setup.phase_rate() * r.tau / (eps * eps);
      const double beta = cfg.kappa * r.h / eps;
      out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},ok,\n", num(eps),
                         num(h_targets[i]), num(r.h), num(r.tau), num(alpha), num(beta), r.nodes,
                         r.steps, num(r.stab_lhs), num(r.error.err_linf),
                         num(r.error.err_wiener), num(r.error.err_velocity), num(r.slope_linf),
                         num(r.slope_velocity));
    }
  }
}

void cmd_stabmap(const RunConfig& cfg, std::ostream& out) {
  const Problem p = make_problem(cfg);
  const auto m = static_cast<long long>(p.grid.size());
  const long long k_lo = cfg.k_min.value_or(-(m / 2));
  const long long k_hi = cfg.k_max.value_or((m - 1) / 2);
  out << "k,theta,c1,c2,abs_lambda_plus,abs_lambda_minus,cond_P\n";
  for (long long k = k_lo; k <= k_hi; ++k) {
    const double theta = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(m);
    const ModeAnalysis a = amplification(theta, p.setup, p.params);
    out << fmt::format("{},{},{},{},{},{},{}\n", k, num(theta), num(a.c1), num(a.c2),
                       num(std::abs(a.lambda_plus)), num(std::abs(a.lambda_minus)),
                       num(a.cond_P));
  }
}

void cmd_defect(const RunConfig& cfg, std::ostream& out) {
  if (cfg.mode != Mode::two_branch) config_error("defect needs mode = two-branch");
  const Problem p = make_problem(cfg);
  const InitialProfiles profiles = profiles_for(cfg, p.setup);
  const PeriodicGrid env_grid =
      PeriodicGrid::from_length(p.grid.x_min(), p.grid.length(), cfg.reference_modes);
  const auto env0 = nls_initial_envelopes(profiles, env_grid, p.setup.omega);
  TrajectoryOptions topts;
  topts.internal_dt = cfg.reference_dt;
  const EnvelopeTrajectory traj =
      envelope_trajectory(Branch::plus, p.setup, env0.first, p.params.tau, p.steps + 1, topts);

  out << "step,t,defect_max,defect_wiener\n";
  for (std::int64_t n = 0; n <= p.steps; n += cfg.defect_stride) {
    const WaveField d = defect(traj, n, p.setup, p.params, p.grid);
    out << fmt::format("{},{},{},{}\n", n, num(static_cast<double>(n) * p.params.tau),
                       num(max_norm(d)), num(wiener_norm(d)));
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Filtered finite difference solver for the nonlinear Klein-Gordon equation in "
               "the nonrelativistic limit",
               "ffkg"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  std::vector<std::string> positional;
  std::string output;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"params", "solve the step-size relations and report the parameters"},
      {"solve", "run the scheme and report norms and errors per step"},
      {"converge", "error table over epsilon and h sweeps"},
      {"stabmap", "per-mode amplification analysis"},
      {"defect", "defect of the dominant term over the time grid"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", config_path, "key = value config file");
    sub->add_option("-s,--set", sets, "override, key=value (repeatable)");
    sub->add_option("-o,--output", output, "CSV output path (default: stdout)");
    sub->add_option("overrides", positional, "further key=value overrides");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    RunConfig cfg;
    if (!config_path.empty()) load_config_file(cfg, config_path);
    for (const auto& s : sets) apply_override(cfg, s);
    for (const auto& s : positional) apply_override(cfg, s);
    if (!output.empty()) cfg.output = output;
    validate(cfg);

    std::ofstream file;
    std::ostream* sink = &out;
    if (!cfg.output.empty()) {
      file.open(cfg.output);
      if (!file) config_error(fmt::format("cannot write '{}'", cfg.output));
      sink = &file;
    }
    if (command == "params") cmd_params(cfg, *sink);
    else if (command == "solve") cmd_solve(cfg, *sink, err);
    else if (command == "converge") cmd_converge(cfg, *sink);
    else if (command == "stabmap") cmd_stabmap(cfg, *sink);
    else cmd_defect(cfg, *sink);
    sink->flush();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace ffkg::cli
