#include "blowup/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "blowup/error.hpp"

namespace blowup {

Grid::Grid(std::vector<int> cells, std::vector<double> half_widths) {
  if (cells.empty() || cells.size() > static_cast<std::size_t>(kMaxDim)) {
    throw Error(ErrorKind::InvalidArgument, "grid dimension must be 1, 2 or 3");
  }
  if (cells.size() != half_widths.size()) {
    throw Error(ErrorKind::InvalidArgument, "grid cell counts and extents differ in length");
  }
  dim_ = static_cast<int>(cells.size());
  for (int a = 0; a < dim_; ++a) {
    if (cells[a] < kMinCells) {
      std::ostringstream os;
      os << "axis " << a << " has " << cells[a] << " cells, need at least " << kMinCells;
      throw Error(ErrorKind::InvalidArgument, os.str());
    }
    if (!(half_widths[a] > 0.0) || !std::isfinite(half_widths[a])) {
      throw Error(ErrorKind::InvalidArgument, "grid half-width must be positive and finite");
    }
    cells_[a] = cells[a];
    half_width_[a] = half_widths[a];
    spacing_[a] = 2.0 * half_widths[a] / cells[a];
  }
  stride_[dim_ - 1] = 1;
  for (int a = dim_ - 2; a >= 0; --a) {
    stride_[a] = stride_[a + 1] * static_cast<std::size_t>(cells_[a + 1]);
  }
  size_ = stride_[0] * static_cast<std::size_t>(cells_[0]);
  cell_volume_ = 1.0;
  for (int a = 0; a < dim_; ++a) cell_volume_ *= spacing_[a];
}

Grid Grid::cube(int dim, int cells, double half_width) {
  if (dim < 1 || dim > kMaxDim) {
    throw Error(ErrorKind::InvalidArgument, "grid dimension must be 1, 2 or 3");
  }
  return Grid(std::vector<int>(dim, cells), std::vector<double>(dim, half_width));
}

Index Grid::unflatten(std::size_t flat) const {
  Index idx{0, 0, 0};
  for (int a = 0; a < dim_; ++a) {
    idx[a] = static_cast<int>(flat / stride_[a]);
    flat %= stride_[a];
  }
  return idx;
}

std::size_t Grid::flatten(const Index& idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim_; ++a) flat += static_cast<std::size_t>(idx[a]) * stride_[a];
  return flat;
}

Point Grid::center(const Index& idx) const {
  Point x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) x[a] = coordinate(a, idx[a]);
  return x;
}

Point Grid::center(std::size_t flat) const { return center(unflatten(flat)); }

int Grid::shell(const Index& idx) const {
  int s = cells_[0];
  for (int a = 0; a < dim_; ++a) {
    s = std::min({s, idx[a], cells_[a] - 1 - idx[a]});
  }
  return s;
}

bool Grid::operator==(const Grid& other) const {
  if (dim_ != other.dim_) return false;
  for (int a = 0; a < dim_; ++a) {
    if (cells_[a] != other.cells_[a] || half_width_[a] != other.half_width_[a]) return false;
  }
  return true;
}

}  // namespace blowup
