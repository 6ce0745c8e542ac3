#pragma once

#include <cstddef>
#include <vector>

namespace manp {

/// Uniform periodic rectangular grid. Nodes sit at (x0 + i*dx, y0 + j*dy)
/// for i = 0..nx-1, j = 0..ny-1; the node at x0 + lx coincides with the
/// node at x0.
struct GridSpec {
  int nx = 0;
  int ny = 0;
  double lx = 0.0;
  double ly = 0.0;
  double x0 = 0.0;
  double y0 = 0.0;
  double dx = 0.0;
  double dy = 0.0;
  double cell_area = 0.0;

  GridSpec() = default;
  GridSpec(int nx_, int ny_, double lx_, double ly_, double x0_ = 0.0,
           double y0_ = 0.0);

  double node_x(int i) const { return x0 + lx * (static_cast<double>(i) / nx); }
  double node_y(int j) const { return y0 + ly * (static_cast<double>(j) / ny); }

  bool operator==(const GridSpec&) const = default;
};

/// Periodic index map in the paper's 1-based convention:
/// wrap(N+1, N) = 1, wrap(0, N) = N, wrap(i, N) = i for 1 <= i <= N.
int wrap(int i, int n);

/// 0-based periodic reduction into [0, n). Used by the field containers.
inline int pidx(int i, int n) { return (i % n + n) % n; }

/// Scalar samples at grid nodes, periodic in both directions.
class NodeField {
 public:
  NodeField() = default;
  explicit NodeField(const GridSpec& g, double fill = 0.0)
      : g_(g), v_(static_cast<std::size_t>(g.nx) * g.ny, fill) {}

  const GridSpec& grid() const { return g_; }
  bool empty() const { return v_.empty(); }
  std::size_t size() const { return v_.size(); }

  double operator()(int i, int j) const { return v_[idx(i, j)]; }
  double& operator()(int i, int j) { return v_[idx(i, j)]; }

  double operator[](std::size_t k) const { return v_[k]; }
  double& operator[](std::size_t k) { return v_[k]; }

  const std::vector<double>& values() const { return v_; }
  std::vector<double>& values() { return v_; }

  double min() const;
  double max() const;
  double max_abs() const;
  double sum() const;
  bool all_finite() const;

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(pidx(i, g_.nx)) +
           static_cast<std::size_t>(g_.nx) * pidx(j, g_.ny);
  }

  GridSpec g_;
  std::vector<double> v_;
};

/// Staggered vector field: x(i,j) lives at ((i+1/2)dx, j dy) and
/// y(i,j) at (i dx, (j+1/2) dy), periodic in both directions.
class EdgeField {
 public:
  EdgeField() = default;
  explicit EdgeField(const GridSpec& g, double fill = 0.0)
      : g_(g),
        x_(static_cast<std::size_t>(g.nx) * g.ny, fill),
        y_(static_cast<std::size_t>(g.nx) * g.ny, fill) {}

  const GridSpec& grid() const { return g_; }
  bool empty() const { return x_.empty(); }
  std::size_t size() const { return x_.size(); }

  double x(int i, int j) const { return x_[idx(i, j)]; }
  double& x(int i, int j) { return x_[idx(i, j)]; }
  double y(int i, int j) const { return y_[idx(i, j)]; }
  double& y(int i, int j) { return y_[idx(i, j)]; }

  const std::vector<double>& x_values() const { return x_; }
  std::vector<double>& x_values() { return x_; }
  const std::vector<double>& y_values() const { return y_; }
  std::vector<double>& y_values() { return y_; }

  double half_x(int i) const { return g_.x0 + g_.lx * ((i + 0.5) / g_.nx); }
  double half_y(int j) const { return g_.y0 + g_.ly * ((j + 0.5) / g_.ny); }

  double max_abs() const;
  bool all_finite() const;

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(pidx(i, g_.nx)) +
           static_cast<std::size_t>(g_.nx) * pidx(j, g_.ny);
  }

  GridSpec g_;
  std::vector<double> x_, y_;
};

/// (F^x_{i+1/2,j} - F^x_{i-1/2,j})/dx + (F^y_{i,j+1/2} - F^y_{i,j-1/2})/dy.
NodeField node_divergence(const EdgeField& f);

/// Forward-difference gradient: g^x(i,j) = (phi(i+1,j) - phi(i,j))/dx,
/// g^y(i,j) = (phi(i,j+1) - phi(i,j))/dy. The discrete circulation of this
/// field vanishes identically on every cell.
EdgeField node_gradient(const NodeField& phi);

/// Per-cell circulation for the cell with lower-left node (i,j):
///   (F^x_{i+1/2,j} - F^x_{i+1/2,j+1})*dx + (F^y_{i+1,j+1/2} - F^y_{i,j+1/2})*dy.
/// Entry k = i + nx*j of the result.
std::vector<double> cell_circulation(const EdgeField& f);

}  // namespace manp
