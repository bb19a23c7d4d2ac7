#include "blowup/cli/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "blowup/affine.hpp"
#include "blowup/criteria_io.hpp"
#include "blowup/error.hpp"
#include "blowup/residual.hpp"
#include "blowup/solver.hpp"
#include "blowup/vortex.hpp"

namespace blowup::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

fs::path prepare_dir(const std::string& dir) {
  if (dir.empty()) throw Error(ErrorKind::InvalidArgument, "no output directory given");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir + ": " + ec.message());
  return fs::path(dir);
}

Scenario with_options(Scenario s, const RunOptions& opt) {
  if (opt.grid) {
    if (*opt.grid < Grid::kMinCells) throw Error(ErrorKind::InvalidArgument, "--grid is below the minimum cell count");
    s.cells = *opt.grid;
  }
  return s;
}

double coriolis_l(const Scenario& s) {
  if (s.criteria.l) return *s.criteria.l;
  if (const auto* c = s.model.force.coriolis()) return c->l;
  return 0.0;
}

double friction_mu0(const Scenario& s) {
  if (s.criteria.mu0 > 0.0) return s.criteria.mu0;
  if (const auto* f = s.model.force.friction()) return f->mu0;
  return 0.0;
}

void write_criteria(const fs::path& dir, const std::vector<criteria::CriterionReport>& reports,
                    const std::string& text) {
  auto txt = open_out(dir / "criteria.txt");
  for (const auto& r : reports) criteria::write_report(txt, r);
  txt << text;
  auto csv = open_out(dir / "criteria.csv");
  csv << criteria::criteria_csv_header() << '\n';
  for (const auto& r : reports) csv << criteria::criteria_csv_row(r) << '\n';
}

void write_events(const fs::path& dir, const std::optional<BlowupEvent>& ev) {
  auto out = open_out(dir / "events.txt");
  if (ev) out << ev->describe() << '\n';
}

MomentSet initial_moments(const Scenario& s, const FluidState& state) {
  return compute_moments(state, s.model, s.quadrature);
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::Io:
    case ErrorKind::InvalidArgument:
    case ErrorKind::NonconformingArrays:
    case ErrorKind::InvalidState:
    case ErrorKind::GridTooSmall:
    case ErrorKind::PsiStarOutOfRange:
      return kExitConfig;
    default:
      return kExitNumeric;
  }
}

std::vector<criteria::CriterionReport> evaluate_criteria(const Scenario& s, const FluidState& state0,
                                                         const MomentSet& ms0, std::ostream* text) {
  using namespace criteria;
  std::vector<CriterionReport> out;
  if (s.criteria.tags.empty()) return out;
  const double gamma = s.model.gamma;
  const int n = s.model.dim;
  const CheminConstant cc = chemin_constant(state0, ms0, gamma);

  for (const auto& tag : s.criteria.tags) {
    if (tag == "T2.1") {
      out.push_back(theorem21_check(ms0, cc, gamma, n));
    } else if (tag == "diagnostics") {
      const auto d = necessary_diagnostics(ms0, cc, gamma, n);
      if (text) write_diagnostics(*text, d);
    } else if (tag == "T3.1") {
      const auto* c = std::get_if<CompactPerturbationInit>(&s.initial);
      if (!c) throw Error(ErrorKind::InvalidArgument, "T3.1 needs compact-perturbation initial data");
      const double sigma = std::sqrt(gamma * std::exp(c->S_bar) * std::pow(c->rho_bar, gamma - 1.0));
      const double C_prop = s.criteria.C_prop.value_or(std::max(c->radius, sigma));
      const double eta0 = perturbation_eta(state0, gamma, c->rho_bar, c->S_bar);
      const auto setup = SiderisSetup::make(n, s.criteria.alpha, C_prop, c->radius, state0.max_density(), eta0,
                                            ms0.M_norm(), ms0.F);
      for (auto& r : sideris_check(setup, n)) out.push_back(std::move(r));
    } else if (tag == "T4.1") {
      out.push_back(damped_check(ms0, cc, gamma, n, friction_mu0(s), s.criteria.psi_star));
    } else if (tag == "T5.1") {
      auto rr = rotation_check(ms0, cc, gamma, coriolis_l(s));
      if (text) write_rotation_bounds(*text, rr.bounds);
      out.push_back(std::move(rr.cond53));
      out.push_back(std::move(rr.cond54));
    } else if (tag == "R5.1") {
      if (n != 2) throw Error(ErrorKind::InvalidArgument, "R5.1 needs model.dim = 2");
      out.push_back(pressureless_rotation_pointwise(state0.grid, state0.vel, coriolis_l(s)).report);
    }
  }
  return out;
}

void write_series_csv(const std::string& path, const std::vector<MomentSet>& series, double l) {
  auto out = open_out(path);
  out << "t,G,F,E,script_M\n";
  for (const auto& ms : series) {
    out << ms.t << ',' << ms.G << ',' << ms.F << ',' << ms.E << ',';
    if (ms.F_perp) out << l * ms.G + *ms.F_perp;
    out << '\n';
  }
}

void cmd_moments(const Scenario& s0, const RunOptions& opt) {
  const Scenario s = with_options(s0, opt);
  const fs::path dir = prepare_dir(opt.out_dir);
  const FluidState state = build_initial_state(s, opt.seed);
  write_moments_csv((dir / "moments.csv").string(), {initial_moments(s, state)});
}

void cmd_criteria(const Scenario& s0, const RunOptions& opt) {
  const Scenario s = with_options(s0, opt);
  const fs::path dir = prepare_dir(opt.out_dir);
  const FluidState state = build_initial_state(s, opt.seed);
  const MomentSet ms0 = initial_moments(s, state);
  std::ostringstream text;
  text << std::setprecision(17);
  const auto reports = evaluate_criteria(s, state, ms0, &text);
  write_moments_csv((dir / "moments.csv").string(), {ms0});
  write_criteria(dir, reports, text.str());
}

void cmd_affine(const Scenario& s0, const RunOptions& opt) {
  const Scenario s = with_options(s0, opt);
  const auto* init = std::get_if<GaussianAffineInit>(&s.initial);
  if (!init) throw Error(ErrorKind::InvalidArgument, "the affine command needs gaussian-affine initial data");
  const fs::path dir = prepare_dir(opt.out_dir);
  AffineParams p;
  p.gamma = s.model.gamma;
  p.n = s.model.dim;
  p.G0 = init->G0;
  p.Ep0 = init->Ep0;
  p.alpha0 = init->alpha0;
  p.a = init->a;
  p.validate();

  auto txt = open_out(dir / "affine.txt");
  if (s.affine.epsilon) {
    const auto r = theorem22_search(p, *s.affine.epsilon);
    p.alpha0 = r.alpha0;
    txt << "[threshold-search]\nalpha0 = " << r.alpha0 << "\nF0 = " << r.F0 << "\nrhs_blowup = " << r.rhs_blowup
        << "\ngap_blowup = " << r.gap_blowup << "\nrhs_relaxed = " << r.rhs_relaxed << "\nmargin_relaxed = " << r.margin_relaxed
        << "\nblowup_condition_fails = " << (r.blowup_condition_fails ? "true" : "false") << "\nz = " << r.z
        << "\nlambda = " << r.lambda << "\nC = " << r.chemin.C << "\nepsilon = " << *s.affine.epsilon << "\n";
  }
  const auto traj = affine_integrate(p, s.affine.t_end, s.affine.dt, s.affine.stride);
  write_trajectory_csv((dir / "trajectory.csv").string(), traj, p);

  const Grid grid = Grid::cube(p.n, s.cells, s.half_width);
  const double compat = compatibility_check(affine_initial_fields(p, grid), p.G1_0(), p.Ep0, p.gamma);
  double alpha_max = 0.0, G1_min = traj.G1.empty() ? 0.0 : traj.G1.front();
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    alpha_max = std::max(alpha_max, std::abs(traj.alpha[i]));
    G1_min = std::min(G1_min, traj.G1[i]);
  }
  txt << "[trajectory]\nalpha0 = " << p.alpha0 << "\nK = " << traj.K << "\nt_end = " << traj.t_end()
      << "\nerror_estimate = " << traj.error_estimate << "\nmax_abs_alpha = " << alpha_max
      << "\nmin_G1 = " << G1_min << "\ncompatibility_residual = " << compat << "\n";

  auto series = open_out(dir / "series.csv");
  series << "t,G,F,E,script_M\n";
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    const AffinePoint pt{traj.t[i], traj.alpha[i], traj.G1[i]};
    series << pt.t << ',' << pt.G() << ',' << pt.F() << ',' << pt.Ek() + affine_Ep(p, pt) << ",\n";
  }
}

void cmd_vortex(const Scenario& s0, const RunOptions& opt) {
  const Scenario s = with_options(s0, opt);
  const auto* init = std::get_if<VortexInit>(&s.initial);
  if (!init) throw Error(ErrorKind::InvalidArgument, "the vortex command needs vortex initial data");
  const fs::path dir = prepare_dir(opt.out_dir);
  VortexParams vp = init->params;
  vp.gamma = s.model.gamma;
  const FluidState state0 = build_initial_state(s, opt.seed);
  const auto res = steady_residual(state0, s.model);

  auto txt = open_out(dir / "vortex.txt");
  txt << "[vortex]\nl = " << vp.l << "\nnu = " << vp.nu << "\nA = " << vp.A_state << "\ngamma = " << vp.gamma
      << "\nC_offset = " << vp.C_offset << "\ncells = " << s.cells << "\nresidual.continuity = " << res.continuity
      << "\nresidual.momentum = " << res.momentum << "\nresidual.pressure = " << res.pressure
      << "\nresidual.max = " << res.max() << "\n";

  std::optional<BlowupEvent> event;
  if (s.solver) {
    const RunResult rr = run(state0, s.model, *s.solver);
    double m0 = 0.0;
    for (double r : state0.rho) m0 += r;
    double drift = 0.0;
    for (const auto& snap : rr.snapshots) {
      double d = 0.0;
      for (std::size_t c = 0; c < snap.size(); ++c) d += std::abs(snap.rho[c] - state0.rho[c]);
      drift = std::max(drift, d / m0);
    }
    txt << "density_drift_l1 = " << drift << "\nsteps = " << rr.steps
        << "\nmax_gradient_ratio = " << rr.max_gradient_ratio << "\n";
    write_run_result((dir / "run").string(), rr, s.model.gamma);
    write_series_csv((dir / "series.csv").string(), rr.moments, vp.l);
    event = rr.event;
  }
  write_events(dir, event);
}

void run_scenario(const Scenario& s0, const RunOptions& opt) {
  const Scenario s = with_options(s0, opt);
  const fs::path dir = prepare_dir(opt.out_dir);
  const FluidState state0 = build_initial_state(s, opt.seed);
  const MomentSet ms0 = initial_moments(s, state0);
  std::ostringstream text;
  text << std::setprecision(17);
  const auto reports = evaluate_criteria(s, state0, ms0, &text);
  write_criteria(dir, reports, text.str());

  std::vector<MomentSet> series{ms0};
  std::optional<BlowupEvent> event;
  if (s.solver) {
    const RunResult rr = run(state0, s.model, *s.solver);
    write_run_result((dir / "run").string(), rr, s.model.gamma);
    series = rr.moments;
    event = rr.event;
  }
  write_moments_csv((dir / "moments.csv").string(), series);
  write_series_csv((dir / "series.csv").string(), series, coriolis_l(s));
  write_events(dir, event);
}

void cmd_sweep(const IniDocument& doc, const std::string& source_path, const RunOptions& opt) {
  const Scenario base = with_options(scenario_from_ini(doc, source_path), opt);
  if (!base.sweep) throw Error(ErrorKind::InvalidArgument, "the sweep command needs a [sweep] section");
  const SweepSpec sw = *base.sweep;
  const fs::path dir = prepare_dir(opt.out_dir);

  struct Item {
    std::string value;
    std::vector<criteria::CriterionReport> reports;
  };
  std::vector<std::future<Item>> jobs;
  for (std::size_t i = 0; i < sw.values.size(); ++i) {
    jobs.push_back(std::async(std::launch::async, [&, i] {
      IniDocument d = doc;
      d.set(sw.section, sw.key, sw.values[i]);
      const Scenario s = with_options(scenario_from_ini(d, source_path), opt);
      RunOptions sub = opt;
      std::ostringstream name;
      name << std::setw(3) << std::setfill('0') << i << '_' << sw.key << '=' << sw.values[i];
      sub.out_dir = (dir / name.str()).string();
      run_scenario(s, sub);
      const FluidState state0 = build_initial_state(s, opt.seed);
      return Item{sw.values[i], evaluate_criteria(s, state0, compute_moments(state0, s.model, s.quadrature))};
    }));
  }
  auto csv = open_out(dir / "criteria.csv");
  csv << criteria::criteria_csv_header({sw.section + "." + sw.key}) << '\n';
  for (auto& j : jobs) {
    const Item item = j.get();
    const double v = std::stod(item.value);
    for (const auto& r : item.reports) csv << criteria::criteria_csv_row(r, {v}) << '\n';
  }
}

int run_command(Command cmd, const std::string& scenario_path, const RunOptions& opt, std::ostream& err) {
  std::string context = scenario_path;
  try {
    const IniDocument doc = IniDocument::parse_file(scenario_path);
    if (cmd == Command::Sweep) {
      cmd_sweep(doc, scenario_path, opt);
      return kExitOk;
    }
    const Scenario s = scenario_from_ini(doc, scenario_path);
    context = s.name + " (" + scenario_path + ")";
    switch (cmd) {
      case Command::Moments: cmd_moments(s, opt); break;
      case Command::Criteria: cmd_criteria(s, opt); break;
      case Command::Affine: cmd_affine(s, opt); break;
      case Command::Vortex: cmd_vortex(s, opt); break;
      case Command::Simulate: run_scenario(s, opt); break;
      case Command::Sweep: break;
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "blowup-watch: scenario " << context << ": " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "blowup-watch: scenario " << context << ": " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace blowup::cli
