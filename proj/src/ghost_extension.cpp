#include "pecfdtd/ghost_extension.hpp"

#include <algorithm>
#include <array>

#include "pecfdtd/parallel.hpp"

namespace pecfdtd {

Decomposition decompose(std::span<const double> hx, std::span<const double> hy, std::span<const Vec2> normal,
                        std::span<const Vec2> tangent) {
  Decomposition d;
  d.h_perp.resize(hx.size());
  d.h_par.resize(hx.size());
  for (std::size_t k = 0; k < hx.size(); ++k) {
    d.h_perp[k] = hx[k] * normal[k].x + hy[k] * normal[k].y;
    d.h_par[k] = hx[k] * tangent[k].x + hy[k] * tangent[k].y;
  }
  return d;
}

GhostExtension::GhostExtension(const GridTopology& grid, const FitTable& fits, const LevelSetData& ls,
                               std::span<const NodeClass> classes, ExtensionOptions opts)
    : grid_(grid), fits_(fits), ls_(ls), classes_(classes), opts_(opts) {
  const std::size_t n = grid.size();
  in_pos_.assign(n, 0);
  in_nonneg_.assign(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    switch (classes[k]) {
      case NodeClass::ghost:
        ghosts_.push_back(k);
        [[fallthrough]];
      case NodeClass::deep_interior:
        if (fits.has(k)) {
          in_pos_[k] = 1;
          in_nonneg_[k] = 1;
        }
        break;
      case NodeClass::boundary:
        boundary_.push_back(k);
        if (fits.has(k)) in_nonneg_[k] = 1;
        break;
      case NodeClass::exterior:
        if (fits.has(k)) exterior_.push_back(k);
        break;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (in_pos_[k]) region_pos_.push_back(k);
    if (in_nonneg_[k]) region_nonneg_.push_back(k);
  }
  auto by_phi = [&](std::size_t a, std::size_t b) {
    return ls.phi[a] < ls.phi[b] || (ls.phi[a] == ls.phi[b] && a < b);
  };
  std::sort(region_pos_.begin(), region_pos_.end(), by_phi);
  std::sort(region_nonneg_.begin(), region_nonneg_.end(), by_phi);

  // Exterior derivatives use only stencil members outside the PEC, falling
  // back to the full stencil if what is left is rank deficient.
  exterior_ops_.resize(exterior_.size());
  parallel_for(exterior_.size(), [&](std::size_t e) {
    const std::size_t k = exterior_[e];
    const auto& st = fits.stencil(k);
    std::array<bool, 5> active{true, true, true, true, true};
    bool reduced = false;
    for (int s = 1; s < 5; ++s) {
      const NodeClass c = classes[st[s]];
      if (c == NodeClass::ghost || c == NodeClass::deep_interior) {
        active[s] = false;
        reduced = true;
      }
    }
    exterior_ops_[e] = fits.op(k);
    if (!reduced) return;
    const std::array<Vec2, 4> pts{grid.coord(st[1]), grid.coord(st[2]), grid.coord(st[3]), grid.coord(st[4])};
    try {
      exterior_ops_[e] = build_fit_operator(grid.coord(k), pts, k, active);
    } catch (const DegenerateStencilError&) {
    }
  });
}

void GhostExtension::normal_derivative_into(std::span<const double> field, std::span<double> out) const {
  parallel_for(exterior_.size(), [&](std::size_t e) {
    const std::size_t k = exterior_[e];
    const Gradient g = fitted_gradient(exterior_ops_[e], fits_.gather(k, field));
    out[k] = g.dx * ls_.normal[k].x + g.dy * ls_.normal[k].y;
  });
}

std::vector<double> GhostExtension::normal_derivative(std::span<const double> field) const {
  std::vector<double> out(grid_.size(), 0.0);
  normal_derivative_into(field, out);
  return out;
}

void GhostExtension::seed(std::span<double> field, const std::vector<std::size_t>& order,
                          const std::vector<std::uint8_t>& in_region) const {
  std::vector<std::uint8_t> done(grid_.size(), 0);
  for (const std::size_t k : order) {
    double sum = 0.0;
    int count = 0;
    for (const auto nb : grid_.neighbors(k)) {
      if (nb == kNoNeighbor) continue;
      const auto m = static_cast<std::size_t>(nb);
      if (!in_region[m] || done[m]) {
        sum += field[m];
        ++count;
      }
    }
    if (count > 0) field[k] = sum / count;
    done[k] = 1;
  }
}

void GhostExtension::constant_extend(std::span<const std::span<double>> fields, UpdateRegion region) const {
  const auto& order = region == UpdateRegion::phi_pos ? region_pos_ : region_nonneg_;
  const auto& in_region = region == UpdateRegion::phi_pos ? in_pos_ : in_nonneg_;
  const double dtau = opts_.pseudo_cfl * grid_.h();

  for (const auto f : fields) seed(f, order, in_region);
  if (opts_.steps <= 0 || order.empty()) return;

  // Double buffer: the scratch copies agree with the fields on frozen nodes,
  // so only region nodes are ever written.
  std::vector<std::vector<double>> scratch;
  scratch.reserve(fields.size());
  for (const auto f : fields) scratch.emplace_back(f.begin(), f.end());

  for (int step = 0; step < opts_.steps; ++step) {
    for (std::size_t fi = 0; fi < fields.size(); ++fi) {
      const bool even = step % 2 == 0;
      const std::span<const double> src = even ? std::span<const double>(fields[fi]) : scratch[fi];
      const std::span<double> dst = even ? std::span<double>(scratch[fi]) : fields[fi];
      parallel_for(order.size(), [&](std::size_t a) {
        const std::size_t k = order[a];
        const Stencil5 v = fits_.gather(k, src);
        const FitOperator& op = fits_.op(k);
        const Gradient g = fitted_gradient(op, v);
        dst[k] = fitted_value(op, v) - dtau * (ls_.normal[k].x * g.dx + ls_.normal[k].y * g.dy);
      });
    }
  }
  if (opts_.steps % 2 == 1) {
    for (std::size_t fi = 0; fi < fields.size(); ++fi)
      for (const std::size_t k : order) fields[fi][k] = scratch[fi][k];
  }
}

void GhostExtension::constant_extend(std::span<double> field, UpdateRegion region) const {
  const std::array<std::span<double>, 1> fs{field};
  constant_extend(fs, region);
}

void GhostExtension::extend_all(std::span<double> hx, std::span<double> hy, std::span<double> ez) const {
  const std::size_t n = grid_.size();
  const bool do_h = !hx.empty();
  const bool do_e = !ez.empty();

  Decomposition d;
  if (do_h) {
    d = decompose(hx, hy, ls_.normal, ls_.tangent);
    for (const std::size_t k : boundary_) d.h_perp[k] = 0.0;
  }
  std::vector<double> dn_perp, dn_par, dn_e;
  std::vector<std::span<double>> derivs;
  if (do_h) {
    dn_perp.assign(n, 0.0);
    dn_par.assign(n, 0.0);
    normal_derivative_into(d.h_perp, dn_perp);
    normal_derivative_into(d.h_par, dn_par);
    derivs.emplace_back(dn_perp);
    derivs.emplace_back(dn_par);
  }
  if (do_e) {
    std::vector<double> e(ez.begin(), ez.end());
    for (const std::size_t k : boundary_) e[k] = 0.0;
    dn_e.assign(n, 0.0);
    normal_derivative_into(e, dn_e);
    derivs.emplace_back(dn_e);
  }

  if (do_h) constant_extend(std::span<double>(d.h_par), UpdateRegion::phi_pos);
  constant_extend(derivs, UpdateRegion::phi_nonneg);

  for (const std::size_t k : ghosts_) {
    const double phi = ls_.phi[k];
    if (do_h) {
      const double perp = odd_ghost_value(dn_perp[k], phi);
      const double par = even_ghost_value(d.h_par[k], dn_par[k], phi);
      hx[k] = perp * ls_.normal[k].x + par * ls_.tangent[k].x;
      hy[k] = perp * ls_.normal[k].y + par * ls_.tangent[k].y;
    }
    if (do_e) ez[k] = odd_ghost_value(dn_e[k], phi);
  }
}

void GhostExtension::extend_H(std::span<double> hx, std::span<double> hy) const { extend_all(hx, hy, {}); }

void GhostExtension::extend_E(std::span<double> ez) const { extend_all({}, {}, ez); }

}  // namespace pecfdtd
