#include "blowup/snapshot_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <vector>

#include "blowup/error.hpp"

namespace blowup {

namespace {

constexpr const char* kMagic = "BLOWUP-SNAPSHOT";
constexpr int kVersion = 1;

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
  }
}

void write_array(std::ostream& out, const std::vector<double>& a) {
  for (double d : a) {
    const std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(d));
    char buf[8];
    std::memcpy(buf, &bits, 8);
    out.write(buf, 8);
  }
}

void read_array(std::istream& in, std::vector<double>& a) {
  for (double& d : a) {
    char buf[8];
    if (!in.read(buf, 8)) throw Error(ErrorKind::Io, "snapshot payload truncated");
    std::uint64_t bits;
    std::memcpy(&bits, buf, 8);
    d = std::bit_cast<double>(to_little(bits));
  }
}

std::vector<std::string> array_names(int dim) {
  std::vector<std::string> names{"rho"};
  for (int a = 0; a < dim; ++a) names.push_back("v" + std::to_string(a + 1));
  names.push_back("p");
  return names;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double parse_double(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() && s.find_first_not_of(" \t\r", used) != std::string::npos) throw 0;
    return v;
  } catch (...) {
    throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": bad number '" + s + "'");
  }
}

}  // namespace

void write_snapshot(std::ostream& out, const Snapshot& snap) {
  const FluidState& s = snap.state;
  s.validate();
  const Grid& g = s.grid;
  out << kMagic << ' ' << kVersion << '\n';
  out << "dimension " << g.dim() << '\n';
  out << "cells";
  for (int a = 0; a < g.dim(); ++a) out << ' ' << g.cells(a);
  out << "\nextents";
  out << std::setprecision(17);
  for (int a = 0; a < g.dim(); ++a) out << ' ' << g.half_width(a);
  out << "\ngamma " << snap.gamma << '\n';
  out << "time " << s.t << '\n';
  out << "encoding float64-le\n";
  out << "arrays";
  for (const auto& n : array_names(g.dim())) out << ' ' << n;
  out << "\nend_header\n";
  write_array(out, s.rho);
  for (const auto& v : s.vel) write_array(out, v);
  write_array(out, s.pres);
  if (!out) throw Error(ErrorKind::Io, "snapshot write failed");
}

Snapshot read_snapshot(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Io, "empty snapshot");
  {
    std::istringstream ls(line);
    std::string magic;
    int version = 0;
    ls >> magic >> version;
    if (magic != kMagic) throw Error(ErrorKind::Parse, "not a snapshot file");
    if (version != kVersion) throw Error(ErrorKind::Parse, "unsupported snapshot version");
  }
  int dim = 0;
  std::vector<int> cells;
  std::vector<double> extents;
  double gamma = 0, t = 0;
  std::vector<std::string> arrays;
  bool done = false;
  int lineno = 1;
  while (!done && std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "dimension") {
      ls >> dim;
    } else if (key == "cells") {
      int c;
      while (ls >> c) cells.push_back(c);
    } else if (key == "extents") {
      double e;
      while (ls >> e) extents.push_back(e);
    } else if (key == "gamma") {
      ls >> gamma;
    } else if (key == "time") {
      ls >> t;
    } else if (key == "encoding") {
      std::string enc;
      ls >> enc;
      if (enc != "float64-le") throw Error(ErrorKind::Parse, "unsupported encoding " + enc);
    } else if (key == "arrays") {
      std::string a;
      while (ls >> a) arrays.push_back(a);
    } else if (key == "end_header") {
      done = true;
    } else if (!key.empty()) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(lineno) + ": unknown key " + key);
    }
  }
  if (!done) throw Error(ErrorKind::Parse, "missing end_header");
  if (dim < 1 || dim > 3 || static_cast<int>(cells.size()) != dim ||
      static_cast<int>(extents.size()) != dim) {
    throw Error(ErrorKind::Parse, "inconsistent grid description in header");
  }
  if (arrays != array_names(dim)) throw Error(ErrorKind::Parse, "unexpected array list");

  Snapshot snap{FluidState(Grid(cells, extents), t), gamma};
  read_array(in, snap.state.rho);
  for (auto& v : snap.state.vel) read_array(in, v);
  read_array(in, snap.state.pres);
  snap.state.validate();
  return snap;
}

void write_snapshot_file(const std::string& path, const Snapshot& snap) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path);
  write_snapshot(out, snap);
}

Snapshot read_snapshot_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return read_snapshot(in);
}

void write_state_csv(std::ostream& out, const FluidState& state) {
  const Grid& g = state.grid;
  const int n = g.dim();
  for (int a = 0; a < n; ++a) out << 'x' << (a + 1) << ',';
  out << "rho";
  for (int a = 0; a < n; ++a) out << ",v" << (a + 1);
  out << ",p\n" << std::setprecision(17);
  for (std::size_t c = 0; c < g.size(); ++c) {
    const Point x = g.center(c);
    for (int a = 0; a < n; ++a) out << x[a] << ',';
    out << state.rho[c];
    for (int a = 0; a < n; ++a) out << ',' << state.vel[a][c];
    out << ',' << state.pres[c] << '\n';
  }
}

FluidState read_state_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Parse, "empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv(line);
  const int ncols = static_cast<int>(header.size());
  if ((ncols - 2) % 2 != 0 || ncols < 4) throw Error(ErrorKind::Parse, "line 1: bad header");
  const int n = (ncols - 2) / 2;
  std::vector<std::string> expect;
  for (int a = 0; a < n; ++a) expect.push_back("x" + std::to_string(a + 1));
  expect.push_back("rho");
  for (int a = 0; a < n; ++a) expect.push_back("v" + std::to_string(a + 1));
  expect.push_back("p");
  if (header != expect) throw Error(ErrorKind::Parse, "line 1: expected x1..xn,rho,v1..vn,p");

  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (static_cast<int>(cells.size()) != ncols) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(lineno) + ": wrong column count");
    }
    std::vector<double> row(ncols);
    for (int k = 0; k < ncols; ++k) row[k] = parse_double(cells[k], lineno);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::Parse, "CSV has no data rows");

  std::vector<int> counts(n);
  std::vector<double> half(n), lo(n), h(n);
  for (int a = 0; a < n; ++a) {
    std::vector<double> xs;
    xs.reserve(rows.size());
    for (const auto& r : rows) xs.push_back(r[a]);
    std::sort(xs.begin(), xs.end());
    const double span = xs.back() - xs.front();
    const double tol = 1e-9 * std::max(1.0, span);
    xs.erase(std::unique(xs.begin(), xs.end(), [&](double p, double q) { return q - p < tol; }),
             xs.end());
    counts[a] = static_cast<int>(xs.size());
    if (counts[a] < Grid::kMinCells) throw Error(ErrorKind::Parse, "too few distinct coordinates");
    h[a] = span / (counts[a] - 1);
    lo[a] = xs.front();
    half[a] = xs.back() + 0.5 * h[a];
    if (std::abs(xs.front() + xs.back()) > 1e-6 * half[a]) {
      throw Error(ErrorKind::Parse, "grid is not symmetric about the origin");
    }
  }
  Grid grid(counts, half);
  if (rows.size() != grid.size()) throw Error(ErrorKind::Parse, "row count does not match grid");
  FluidState s(grid, 0.0);
  std::vector<char> seen(grid.size(), 0);
  for (const auto& r : rows) {
    Index idx{0, 0, 0};
    for (int a = 0; a < n; ++a) idx[a] = static_cast<int>(std::lround((r[a] - lo[a]) / h[a]));
    const std::size_t c = grid.flatten(idx);
    if (seen[c]) throw Error(ErrorKind::Parse, "duplicate cell in CSV");
    seen[c] = 1;
    s.rho[c] = r[n];
    for (int a = 0; a < n; ++a) s.vel[a][c] = r[n + 1 + a];
    s.pres[c] = r[2 * n + 1];
  }
  s.validate();
  return s;
}

void write_state_csv_file(const std::string& path, const FluidState& state) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path);
  write_state_csv(out, state);
}

FluidState read_state_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return read_state_csv(in);
}

}  // namespace blowup
