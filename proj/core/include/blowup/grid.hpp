#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace blowup {

using Point = std::array<double, 3>;
using Index = std::array<int, 3>;

/// Uniform cell-centred grid on the box [-R_1,R_1] x ... x [-R_n,R_n].
///
/// Cells are stored row-major with axis 0 slowest. Unused trailing axes of
/// Point/Index are zero. The box is symmetric about the origin because every
/// functional in this library is weighted by |x|^2.
class Grid {
 public:
  static constexpr int kMaxDim = 3;
  static constexpr int kMinCells = 4;

  Grid(std::vector<int> cells, std::vector<double> half_widths);

  /// Same cell count and half-width on every axis.
  static Grid cube(int dim, int cells, double half_width);

  int dim() const { return dim_; }
  int cells(int axis) const { return cells_[axis]; }
  double half_width(int axis) const { return half_width_[axis]; }
  double spacing(int axis) const { return spacing_[axis]; }
  std::size_t size() const { return size_; }
  std::size_t stride(int axis) const { return stride_[axis]; }
  double cell_volume() const { return cell_volume_; }

  double coordinate(int axis, int i) const {
    return -half_width_[axis] + (static_cast<double>(i) + 0.5) * spacing_[axis];
  }

  Index unflatten(std::size_t flat) const;
  std::size_t flatten(const Index& idx) const;
  Point center(std::size_t flat) const;
  Point center(const Index& idx) const;

  /// Distance (in cells) from the nearest boundary face; 0 for the outermost shell.
  int shell(const Index& idx) const;

  bool operator==(const Grid& other) const;

 private:
  int dim_ = 0;
  std::array<int, kMaxDim> cells_{1, 1, 1};
  std::array<double, kMaxDim> half_width_{0.0, 0.0, 0.0};
  std::array<double, kMaxDim> spacing_{0.0, 0.0, 0.0};
  std::array<std::size_t, kMaxDim> stride_{1, 1, 1};
  std::size_t size_ = 0;
  double cell_volume_ = 0.0;
};

}  // namespace blowup
