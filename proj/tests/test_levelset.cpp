#include <doctest.h>

#include <cmath>

#include "pecfdtd/levelset.hpp"
#include "pecfdtd/maxwell.hpp"

using namespace pecfdtd;

namespace {

const Rect kBox{0.0, 0.0, 10.0, 10.0};

struct Shifted {
  GridTopology grid;
  FitTable fits;
  std::vector<double> exact;
};

Shifted shifted_circle(int cells) {
  const Shape s = Shape::circle({5, 5}, 2);
  const GridTopology lattice = build_uniform_grid(kBox, cells + 1, cells + 1);
  Shifted out;
  out.grid = apply_point_shift(lattice, find_boundary_intersections(s, lattice)).grid;
  out.fits = FitTable(out.grid);
  out.exact = initialize_phi(s, out.grid);
  return out;
}

}  // namespace

TEST_CASE("analytic seed") {
  const GridTopology g = build_uniform_grid(kBox, 101, 101);
  const auto circle = initialize_phi(Shape::circle({5, 5}, 2), g);
  CHECK(circle[g.index(50, 50)] == doctest::Approx(2.0));
  CHECK(circle[g.index(50, 80)] == doctest::Approx(-1.0));
  const auto moon = initialize_phi(Shape::half_moon({5, 5}, 2, {6.2, 5}, 2), g);
  CHECK(moon[g.index(62, 50)] == doctest::Approx(-2.0));
  CHECK(moon[g.index(40, 50)] == doctest::Approx(0.2));  // min(2 - 1, -(2 - 2.2))
  CHECK_THROWS_AS(initialize_phi(Shape::none(), g), InvalidArgument);
}

TEST_CASE("smoothed sign") {
  const double dx = 0.1;
  CHECK(smoothed_sign(0.0, dx) == 0.0);
  CHECK(smoothed_sign(dx, dx) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(smoothed_sign(-10 * dx, dx) == doctest::Approx(-10.0 / std::sqrt(101.0)));
  CHECK(smoothed_sign(-0.3, dx) == doctest::Approx(-smoothed_sign(0.3, dx)));
}

TEST_CASE("exact distance is nearly a fixed point") {
  const Shifted s = shifted_circle(200);
  RedistanceOptions opts;
  opts.band = 5;
  RedistanceReport rep;
  const auto phi = redistance(s.exact, s.grid, s.fits, opts, &rep);
  CHECK(rep.converged);
  const double h = s.grid.h();
  double change = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    if (s.grid.shifted(k)) CHECK(phi[k] == 0.0);
    if (s.fits.has(k) && std::abs(s.exact[k]) <= 5 * h) change = std::max(change, std::abs(phi[k] - s.exact[k]));
  }
  CHECK(change <= 2 * h * h);
}

TEST_CASE("a squashed seed recovers the distance") {
  const Shifted s = shifted_circle(200);
  std::vector<double> half = s.exact;
  for (double& v : half) v *= 0.5;
  RedistanceReport rep;
  const auto phi = redistance(half, s.grid, s.fits, {}, &rep);
  CHECK(rep.converged);
  CHECK(phi[s.grid.index(100, 160)] == doctest::Approx(-1.0).epsilon(0.02));

  const auto grad = gradient_magnitude(s.grid, s.fits, phi);
  for (std::size_t k = 0; k < phi.size(); ++k) {
    if (!s.fits.has(k) || std::abs(phi[k]) > 5 * s.grid.h()) continue;
    CHECK(grad[k] >= 0.95);
    CHECK(grad[k] <= 1.05);
  }
}

TEST_CASE("redistancing gives up loudly") {
  const Shifted s = shifted_circle(100);
  std::vector<double> scaled = s.exact;
  for (double& v : scaled) v *= 3.0;
  RedistanceOptions opts;
  opts.max_iter = 2;
  CHECK_THROWS_AS(redistance(scaled, s.grid, s.fits, opts), ConvergenceError);
}

TEST_CASE("normals point into the PEC") {
  Shifted s = shifted_circle(100);
  LevelSetData ls;
  ls.phi = s.exact;
  const auto cls = classify_nodes(s.grid, ls.phi);
  compute_normals_tangents(s.grid, s.fits, cls, ls);

  const std::size_t south = s.grid.index(50, 30);
  REQUIRE(s.grid.shifted(south));
  CHECK(ls.normal[south].x == doctest::Approx(0.0));
  CHECK(ls.normal[south].y == doctest::Approx(1.0));
  CHECK(ls.tangent[south].x == doctest::Approx(1.0));
  CHECK(ls.tangent[south].y == doctest::Approx(0.0));

  const std::size_t diag = s.grid.index(65, 65);
  CHECK(std::abs(ls.normal[diag].x + 1.0 / std::sqrt(2.0)) < 1e-6);
  CHECK(std::abs(ls.normal[diag].y + 1.0 / std::sqrt(2.0)) < 1e-6);

  for (std::size_t k = 0; k < ls.normal.size(); ++k) {
    CHECK(norm(ls.normal[k]) == doctest::Approx(1.0));
    CHECK(ls.tangent[k].x == ls.normal[k].y);
    CHECK(ls.tangent[k].y == -ls.normal[k].x);
  }
}
