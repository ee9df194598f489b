#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pecfdtd {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Axis-aligned computational domain [x0, x1] x [y0, y1].
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 10.0;
  double y1 = 10.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid construction parameters (grid sizes, shapes, configs).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Geometry that the grid cannot represent (under-resolved or too thin).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Least-squares stencil whose design matrix is (numerically) rank deficient.
class DegenerateStencilError : public Error {
 public:
  DegenerateStencilError(std::size_t node, const std::string& what)
      : Error(what), node_(node) {}
  std::size_t node() const { return node_; }

 private:
  std::size_t node_;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// NaN/Inf detected while time stepping.
class StabilityError : public Error {
 public:
  StabilityError(long step, const std::string& what) : Error(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

/// Number of worker threads used by the parallel sweeps (OpenMP).
void set_thread_count(int n);
int thread_count();

}  // namespace pecfdtd
