#include "blowup/moments.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "blowup/error.hpp"

namespace blowup {

namespace {

// (i, j) index pairs with i > j in the order used for M and sigma.
constexpr int kPairs[3][2] = {{1, 0}, {2, 0}, {2, 1}};

int pair_count(int dim) { return dim * (dim - 1) / 2; }

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

double MomentSet::M_norm() const {
  double s = 0.0;
  for (double mk : M) s += mk * mk;
  return std::sqrt(s);
}

MomentSet compute_moments(const FluidState& state, const GasModel& model,
                          const QuadratureOptions& opts) {
  state.validate();
  const Grid& grid = state.grid;
  const int n = grid.dim();
  if (model.dim != n) throw Error(ErrorKind::NonconformingArrays, "model and state dimension differ");
  model.validate();

  const int npairs = pair_count(n);
  double m = 0, g2 = 0, f = 0, fperp = 0, ek2 = 0, p_int = 0, i1 = 0, i2 = 0, tail = 0;
  double mk[3] = {0, 0, 0};

  for (std::size_t c = 0; c < grid.size(); ++c) {
    const Index idx = grid.unflatten(c);
    const Point x = grid.center(idx);
    const double rho = state.rho[c];
    double r2 = 0, vx = 0, v2 = 0;
    double v[3] = {0, 0, 0};
    for (int a = 0; a < n; ++a) {
      v[a] = state.vel[a][c];
      r2 += x[a] * x[a];
      vx += v[a] * x[a];
      v2 += v[a] * v[a];
    }
    double sigma2 = 0;
    for (int k = 0; k < npairs; ++k) {
      const int i = kPairs[k][0], j = kPairs[k][1];
      const double s = v[j] * x[i] - v[i] * x[j];
      mk[k] += s * rho;
      sigma2 += s * s;
    }
    m += rho;
    g2 += rho * r2;
    f += rho * vx;
    ek2 += rho * v2;
    p_int += state.pres[c];
    if (r2 > 0) {
      i1 += rho * vx * vx / r2;
      i2 += rho * sigma2 / r2;
    } else {
      i1 += rho * v2;
    }
    if (n == 2) fperp += rho * (v[1] * x[0] - v[0] * x[1]);
    if (grid.shell(idx) < 2) tail += rho * r2;
  }

  const double vol = grid.cell_volume();
  MomentSet ms;
  ms.t = state.t;
  ms.dim = n;
  ms.m = m * vol;
  ms.G = 0.5 * g2 * vol;
  ms.F = f * vol;
  if (n == 2) ms.F_perp = fperp * vol;
  ms.M.assign(mk, mk + npairs);
  for (double& v : ms.M) v *= vol;
  ms.Ek = 0.5 * ek2 * vol;
  ms.Ep = p_int * vol / (model.gamma - 1.0);
  ms.E = ms.Ek + ms.Ep;
  ms.I1 = i1 * vol;
  ms.I2 = i2 * vol;
  ms.I3_direct = n * p_int * vol;
  ms.I3 = n * (model.gamma - 1.0) * ms.Ep;
  ms.tail = tail * vol;

  if (opts.enforce_tail && ms.tail > opts.tail_tolerance * ms.G) {
    std::ostringstream os;
    os << "boundary-shell moment " << ms.tail << " exceeds " << opts.tail_tolerance << " * G = "
       << opts.tail_tolerance * ms.G << "; enlarge the domain";
    throw Error(ErrorKind::TailTooLarge, os.str());
  }
  return ms;
}

std::vector<HolderCheck> holder_check(const MomentSet& ms, double rel_slack, double abs_slack) {
  const double m2 = ms.M_norm() * ms.M_norm();
  const double f2 = ms.F * ms.F;
  std::vector<HolderCheck> out = {
      {"F^2 <= 4 G Ek", f2, 4.0 * ms.G * ms.Ek, true},
      {"F^2 <= 2 G I1", f2, 2.0 * ms.G * ms.I1, true},
      {"|M|^2 <= 4 G Ek", m2, 4.0 * ms.G * ms.Ek, true},
      {"|M|^2 <= 2 G I2", m2, 2.0 * ms.G * ms.I2, true},
  };
  if (ms.G <= 0.0) return out;
  for (auto& c : out) c.satisfied = c.lhs <= c.rhs * (1.0 + rel_slack) + abs_slack;
  return out;
}

RadialWeight RadialWeight::half_square() {
  return {[](double r) { return 0.5 * r * r; }, [](double r) { return r; },
          [](double) { return 1.0; }};
}

WeightedMoments compute_weighted_moments(const FluidState& state, const RadialWeight& w) {
  state.validate();
  const Grid& grid = state.grid;
  const int n = grid.dim();
  const int npairs = pair_count(n);
  WeightedMoments out;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const Point x = grid.center(c);
    const double rho = state.rho[c];
    double r2 = 0, vx = 0, v2 = 0, sigma2 = 0;
    double v[3] = {0, 0, 0};
    for (int a = 0; a < n; ++a) {
      v[a] = state.vel[a][c];
      r2 += x[a] * x[a];
      vx += v[a] * x[a];
      v2 += v[a] * v[a];
    }
    for (int k = 0; k < npairs; ++k) {
      const int i = kPairs[k][0], j = kPairs[k][1];
      const double s = v[i] * x[j] - v[j] * x[i];
      sigma2 += s * s;
    }
    const double r = std::sqrt(r2);
    const double d2 = w.d2phi(r);
    // phi'(r) / r -> phi''(0) at the origin for smooth radial weights
    const double d1_over_r = r > 0 ? w.dphi(r) / r : d2;
    out.G += rho * w.phi(r);
    out.dG += d1_over_r * vx * rho;
    if (r > 0) {
      out.I1 += d2 / r2 * vx * vx * rho;
      out.I2 += d1_over_r / r2 * sigma2 * rho;
    } else {
      out.I1 += d2 * v2 * rho;
    }
    out.I3 += (d2 + (n - 1) * d1_over_r) * state.pres[c];
  }
  const double vol = grid.cell_volume();
  out.G *= vol;
  out.dG *= vol;
  out.I1 *= vol;
  out.I2 *= vol;
  out.I3 *= vol;
  return out;
}

std::string moments_csv_header(int dim) {
  std::ostringstream os;
  os << "t,m,G,F,F_perp";
  for (int k = 0; k < pair_count(dim); ++k) os << ",M" << (k + 1);
  os << ",Ek,Ep,E,I1,I2,I3,I3_direct,tail";
  return os.str();
}

std::string moments_csv_row(const MomentSet& ms) {
  std::ostringstream os;
  os << fmt(ms.t) << ',' << fmt(ms.m) << ',' << fmt(ms.G) << ',' << fmt(ms.F) << ','
     << (ms.F_perp ? fmt(*ms.F_perp) : std::string("nan"));
  for (double v : ms.M) os << ',' << fmt(v);
  os << ',' << fmt(ms.Ek) << ',' << fmt(ms.Ep) << ',' << fmt(ms.E) << ',' << fmt(ms.I1) << ','
     << fmt(ms.I2) << ',' << fmt(ms.I3) << ',' << fmt(ms.I3_direct) << ',' << fmt(ms.tail);
  return os.str();
}

void write_moments_csv(const std::string& path, const std::vector<MomentSet>& series) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path);
  const int dim = series.empty() ? 2 : series.front().dim;
  out << moments_csv_header(dim) << '\n';
  for (const auto& ms : series) out << moments_csv_row(ms) << '\n';
}

}  // namespace blowup
