#include "blowup/cli/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "blowup/error.hpp"
#include "blowup/snapshot_io.hpp"

namespace blowup::cli {

namespace {

[[noreturn]] void fail_at(const IniDocument& doc, const std::string& sec, const std::string& key,
                          const std::string& what) {
  const auto* e = doc.find(sec, key);
  const std::string where = e ? "line " + std::to_string(e->line) + ": " : "";
  throw Error(ErrorKind::Parse, where + sec + "." + key + ": " + what);
}

template <class T>
void read(const IniDocument& doc, const std::string& sec, const std::string& key, T& out) {
  if constexpr (std::is_same_v<T, double>) {
    if (auto v = doc.get_double(sec, key)) out = *v;
  } else if constexpr (std::is_same_v<T, int>) {
    if (auto v = doc.get_int(sec, key)) out = *v;
  } else if constexpr (std::is_same_v<T, long>) {
    if (auto v = doc.get_int(sec, key)) out = *v;
  } else if constexpr (std::is_same_v<T, bool>) {
    if (auto v = doc.get_bool(sec, key)) out = *v;
  } else {
    if (auto v = doc.get_string(sec, key)) out = *v;
  }
}

GasModel parse_model(const IniDocument& doc) {
  GasModel m;
  read(doc, "model", "gamma", m.gamma);
  read(doc, "model", "dim", m.dim);
  if (auto mu = doc.get_double("model", "friction")) m.force.terms.push_back(Friction{*mu, {}});
  if (auto l = doc.get_double("model", "coriolis")) m.force.terms.push_back(Coriolis{*l});
  const auto vmu = doc.get_double("model", "viscosity_mu");
  const auto vla = doc.get_double("model", "viscosity_lambda");
  if (vmu || vla) m.force.terms.push_back(Viscosity{vmu.value_or(0.0), vla.value_or(0.0)});
  try {
    m.validate();
  } catch (const Error& e) {
    fail_at(doc, "model", "gamma", e.what());
  }
  return m;
}

InitialSpec parse_initial(const IniDocument& doc, const std::string& base_dir, int dim) {
  const std::string sec = "initial";
  const auto type = doc.get_string(sec, "type");
  if (!type) throw Error(ErrorKind::Parse, "missing initial.type");
  if (*type == "gaussian-affine") {
    GaussianAffineInit g;
    read(doc, sec, "alpha0", g.alpha0);
    read(doc, sec, "a", g.a);
    read(doc, sec, "Ep0", g.Ep0);
    read(doc, sec, "G0", g.G0);
    return g;
  }
  if (*type == "vortex") {
    VortexInit v;
    read(doc, sec, "l", v.params.l);
    read(doc, sec, "nu", v.params.nu);
    read(doc, sec, "A", v.params.A_state);
    read(doc, sec, "C_offset", v.params.C_offset);
    if (dim != 2) fail_at(doc, sec, "type", "vortex data needs model.dim = 2");
    return v;
  }
  if (*type == "gaussian") {
    GaussianInit g;
    read(doc, sec, "amplitude", g.amplitude);
    read(doc, sec, "width", g.width);
    read(doc, sec, "kappa", g.kappa);
    read(doc, sec, "background", g.background);
    read(doc, sec, "velocity", g.velocity);
    read(doc, sec, "alpha", g.alpha);
    read(doc, sec, "swirl", g.swirl);
    read(doc, sec, "taper_width", g.taper_width);
    const auto c = doc.get_list(sec, "center");
    for (std::size_t i = 0; i < c.size() && i < 3; ++i) {
      try {
        g.center[i] = std::stod(c[i]);
      } catch (const std::exception&) {
        fail_at(doc, sec, "center", "not a number list");
      }
    }
    if (g.velocity != "radial" && g.velocity != "rotation" && g.velocity != "spiral" && g.velocity != "none") {
      fail_at(doc, sec, "velocity", "expected radial, rotation, spiral or none");
    }
    if (!(g.width > 0.0) || g.amplitude < 0.0 || g.background < 0.0 || g.kappa < 0.0) {
      fail_at(doc, sec, "width", "need width > 0 and non-negative amplitude, background, kappa");
    }
    return g;
  }
  if (*type == "file") {
    FileInit f;
    const auto path = doc.get_string(sec, "path");
    if (!path) throw Error(ErrorKind::Parse, "initial.path is required for file data");
    std::filesystem::path p(*path);
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    if (!std::filesystem::exists(p)) fail_at(doc, sec, "path", "file not found: " + p.string());
    f.path = p.string();
    return f;
  }
  if (*type == "compact-perturbation") {
    CompactPerturbationInit c;
    read(doc, sec, "rho_bar", c.rho_bar);
    read(doc, sec, "S_bar", c.S_bar);
    read(doc, sec, "amplitude", c.amplitude);
    read(doc, sec, "radius", c.radius);
    read(doc, sec, "velocity", c.velocity);
    read(doc, sec, "swirl", c.swirl);
    if (!(c.rho_bar > 0.0) || !(c.radius > 0.0) || c.amplitude <= -1.0) {
      fail_at(doc, sec, "rho_bar", "need rho_bar > 0, radius > 0, amplitude > -1");
    }
    return c;
  }
  fail_at(doc, sec, "type", "unknown initial data type '" + *type + "'");
}

}  // namespace

Scenario scenario_from_ini(const IniDocument& doc, const std::string& source_path) {
  Scenario s;
  s.source_path = source_path;
  const std::string base_dir =
      source_path.empty() ? std::string() : std::filesystem::path(source_path).parent_path().string();
  s.name = doc.get_string("scenario", "name").value_or(
      source_path.empty() ? "scenario" : std::filesystem::path(source_path).stem().string());
  s.model = parse_model(doc);
  read(doc, "grid", "cells", s.cells);
  read(doc, "grid", "half_width", s.half_width);
  if (s.cells < Grid::kMinCells) fail_at(doc, "grid", "cells", "too few cells");
  if (!(s.half_width > 0.0)) fail_at(doc, "grid", "half_width", "must be positive");
  s.initial = parse_initial(doc, base_dir, s.model.dim);
  read(doc, "initial", "noise", s.noise);

  read(doc, "quadrature", "enforce_tail", s.quadrature.enforce_tail);
  read(doc, "quadrature", "tail_tolerance", s.quadrature.tail_tolerance);

  s.criteria.tags = doc.get_list("criteria", "tags");
  static const std::vector<std::string> known{"T2.1", "diagnostics", "T3.1", "T4.1", "T5.1", "R5.1"};
  for (const auto& t : s.criteria.tags) {
    if (std::find(known.begin(), known.end(), t) == known.end()) {
      fail_at(doc, "criteria", "tags", "unknown criterion tag '" + t + "'");
    }
  }
  read(doc, "criteria", "alpha", s.criteria.alpha);
  if (auto c = doc.get_double("criteria", "C_prop")) s.criteria.C_prop = *c;
  read(doc, "criteria", "mu0", s.criteria.mu0);
  read(doc, "criteria", "psi_star", s.criteria.psi_star);
  if (auto l = doc.get_double("criteria", "l")) s.criteria.l = *l;
  if (!(s.criteria.psi_star > 0.0 && s.criteria.psi_star < 1.0)) {
    fail_at(doc, "criteria", "psi_star", "must lie in (0, 1)");
  }

  if (doc.has_section("solver") && doc.get_bool("solver", "enabled").value_or(true)) {
    SolverConfig cfg;
    std::string scheme = "muscl", boundary = "outflow";
    read(doc, "solver", "scheme", scheme);
    read(doc, "solver", "boundary", boundary);
    if (scheme == "muscl") cfg.scheme = Scheme::MUSCL2;
    else if (scheme == "llf") cfg.scheme = Scheme::LLF1;
    else fail_at(doc, "solver", "scheme", "expected muscl or llf");
    if (boundary == "outflow") cfg.boundary = Boundary::Outflow;
    else if (boundary == "periodic") cfg.boundary = Boundary::Periodic;
    else fail_at(doc, "solver", "boundary", "expected outflow or periodic");
    read(doc, "solver", "cfl", cfg.cfl);
    read(doc, "solver", "t_end", cfg.t_end);
    read(doc, "solver", "snapshot_interval", cfg.snapshot_interval);
    read(doc, "solver", "grad_factor", cfg.detector.grad_factor);
    read(doc, "solver", "density_fraction", cfg.detector.density_fraction);
    read(doc, "solver", "dt_floor", cfg.detector.dt_floor);
    read(doc, "solver", "max_steps", cfg.max_steps);
    read(doc, "solver", "keep_snapshots", cfg.keep_snapshots);
    cfg.quadrature = s.quadrature;
    cfg.quadrature.enforce_tail = false;
    try {
      cfg.validate();
    } catch (const Error& e) {
      fail_at(doc, "solver", "cfl", e.what());
    }
    s.solver = cfg;
  }

  read(doc, "affine", "t_end", s.affine.t_end);
  read(doc, "affine", "dt", s.affine.dt);
  read(doc, "affine", "stride", s.affine.stride);
  if (auto e = doc.get_double("affine", "epsilon")) s.affine.epsilon = *e;

  if (auto key = doc.get_string("sweep", "key")) {
    SweepSpec sw;
    const auto dot = key->find('.');
    if (dot == std::string::npos) fail_at(doc, "sweep", "key", "expected section.key");
    sw.section = key->substr(0, dot);
    sw.key = key->substr(dot + 1);
    sw.values = doc.get_list("sweep", "values");
    if (sw.values.empty()) fail_at(doc, "sweep", "values", "no sweep values");
    for (const auto& v : sw.values) {
      try {
        std::size_t used = 0;
        (void)std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
      } catch (const std::exception&) {
        fail_at(doc, "sweep", "values", "sweep values must be numbers");
      }
    }
    s.sweep = sw;
  }

  doc.reject_unused();
  return s;
}

Scenario load_scenario(const std::string& path) {
  const IniDocument doc = IniDocument::parse_file(path);
  return scenario_from_ini(doc, path);
}

std::optional<std::pair<double, double>> background_state(const Scenario& s) {
  if (const auto* c = std::get_if<CompactPerturbationInit>(&s.initial)) return std::make_pair(c->rho_bar, c->S_bar);
  return std::nullopt;
}

FluidState build_initial_state(const Scenario& s, std::uint64_t seed) {
  const int n = s.model.dim;
  const double gamma = s.model.gamma;
  FluidState state = std::visit(
      [&](const auto& init) -> FluidState {
        using T = std::decay_t<decltype(init)>;
        if constexpr (std::is_same_v<T, FileInit>) {
          const std::string ext = std::filesystem::path(init.path).extension().string();
          FluidState f = ext == ".csv" ? read_state_csv_file(init.path) : read_snapshot_file(init.path).state;
          if (f.dim() != n) throw Error(ErrorKind::NonconformingArrays, "file dimension differs from model.dim");
          return f;
        } else {
          const Grid grid = Grid::cube(n, s.cells, s.half_width);
          if constexpr (std::is_same_v<T, GaussianAffineInit>) {
            AffineParams p;
            p.gamma = gamma;
            p.n = n;
            p.G0 = init.G0;
            p.Ep0 = init.Ep0;
            p.alpha0 = init.alpha0;
            p.a = init.a;
            return affine_initial_fields(p, grid);
          } else if constexpr (std::is_same_v<T, VortexInit>) {
            VortexParams vp = init.params;
            vp.gamma = gamma;
            return vortex_build(vp, grid);
          } else if constexpr (std::is_same_v<T, GaussianInit>) {
            return sample_state(
                grid, 0.0,
                [&](const Point& x) {
                  double r2 = 0.0;
                  for (int a = 0; a < n; ++a) r2 += (x[a] - init.center[a]) * (x[a] - init.center[a]);
                  return init.amplitude * std::exp(-r2 / (init.width * init.width)) + init.background;
                },
                [&](const Point& x) {
                  double r2 = 0.0;
                  for (int a = 0; a < n; ++a) r2 += (x[a] - init.center[a]) * (x[a] - init.center[a]);
                  const double taper =
                      init.taper_width > 0.0 ? std::exp(-r2 / (2.0 * init.taper_width * init.taper_width)) : 1.0;
                  Point v{0.0, 0.0, 0.0};
                  const bool radial = init.velocity == "radial" || init.velocity == "spiral";
                  const bool rot = init.velocity == "rotation" || init.velocity == "spiral";
                  const double a_rad = radial ? init.alpha : 0.0;
                  const double a_rot = init.velocity == "rotation" ? init.alpha : (rot ? init.swirl : 0.0);
                  for (int a = 0; a < n; ++a) v[a] = a_rad * taper * x[a];
                  if (n == 2) {
                    v[0] += a_rot * taper * x[1];
                    v[1] -= a_rot * taper * x[0];
                  }
                  return v;
                },
                [&](const Point& x) {
                  double r2 = 0.0;
                  for (int a = 0; a < n; ++a) r2 += (x[a] - init.center[a]) * (x[a] - init.center[a]);
                  const double rho = init.amplitude * std::exp(-r2 / (init.width * init.width)) + init.background;
                  return init.kappa * std::pow(rho, gamma);
                });
          } else {
            static_assert(std::is_same_v<T, CompactPerturbationInit>);
            const double R = init.radius;
            return sample_state(
                grid, 0.0,
                [&](const Point& x) {
                  double r2 = 0.0;
                  for (int a = 0; a < n; ++a) r2 += x[a] * x[a];
                  const double b = r2 < R * R ? std::pow(1.0 - r2 / (R * R), 4) : 0.0;
                  return init.rho_bar * (1.0 + init.amplitude * b);
                },
                [&](const Point& x) {
                  double r2 = 0.0;
                  for (int a = 0; a < n; ++a) r2 += x[a] * x[a];
                  const double b = r2 < R * R ? std::pow(1.0 - r2 / (R * R), 4) : 0.0;
                  Point v{0.0, 0.0, 0.0};
                  for (int a = 0; a < n; ++a) v[a] = init.velocity * b * x[a] / R;
                  if (n == 2) {
                    v[0] += init.swirl * b * x[1] / R;
                    v[1] -= init.swirl * b * x[0] / R;
                  }
                  return v;
                },
                [&](const Point& x) {
                  double r2 = 0.0;
                  for (int a = 0; a < n; ++a) r2 += x[a] * x[a];
                  const double b = r2 < R * R ? std::pow(1.0 - r2 / (R * R), 4) : 0.0;
                  const double rho = init.rho_bar * (1.0 + init.amplitude * b);
                  return std::exp(init.S_bar) * std::pow(rho, gamma);
                });
          }
        }
      },
      s.initial);

  if (s.noise > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    double vmax = 0.0;
    for (const auto& v : state.vel) {
      for (double x : v) vmax = std::max(vmax, std::abs(x));
    }
    const double scale = s.noise * (vmax > 0.0 ? vmax : 1.0);
    for (auto& v : state.vel) {
      for (std::size_t c = 0; c < v.size(); ++c) {
        if (state.rho[c] > 0.0) v[c] += scale * normal(rng);
      }
    }
  }
  state.validate();
  return state;
}

}  // namespace blowup::cli
