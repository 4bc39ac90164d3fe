#include "dlw/residual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <thread>

namespace dlw {

StencilPoleError::StencilPoleError(const Point& centre, const Point& sample, const std::string& what)
    : std::runtime_error(what), centre_(centre), sample_(sample) {}

double stencil_radius(const StencilConfig& cfg) { return std::sqrt(3.0) * cfg.step; }

namespace {

// Lazily sampled values on the offsets {-R..R} x {-1..1} x {-1..1} around a centre.
template <int R>
class StencilSamples {
 public:
  StencilSamples(const FieldSampler& s, const Point& centre, double step)
      : sampler_(s), centre_(centre), step_(step) {}

  const FieldPair& at(int i, int j, int k) {
    auto& slot = cache_[index(i, j, k)];
    if (!slot) {
      const Point p{centre_.x + i * step_, centre_.y + j * step_, centre_.t + k * step_};
      try {
        slot = sampler_(p);
      } catch (const PoleError& e) {
        throw StencilPoleError(centre_, p, e.what());
      }
    }
    return *slot;
  }
  double u(int i, int j, int k) { return at(i, j, k).u; }
  double h(int i, int j, int k) { return at(i, j, k).h; }

 private:
  static constexpr int kWidth = 2 * R + 1;
  static int index(int i, int j, int k) { return ((i + R) * 3 + (j + 1)) * 3 + (k + 1); }

  const FieldSampler& sampler_;
  Point centre_;
  double step_;
  std::array<std::optional<FieldPair>, kWidth * 9> cache_{};
};

}  // namespace

ResidualPair fd_residual_dlw(const FieldSampler& s, const Point& p, const StencilConfig& cfg) {
  const double h = cfg.step;
  StencilSamples<1> st(s, p, h);
  auto w = [&](int i, int j) { const double u = st.u(i, j, 0); return u * u; };
  auto q = [&](int i) {
    const FieldPair& f = st.at(i, 0, 0);
    return f.u * f.h + f.u;
  };
  auto dy_u = [&](int i) { return (st.u(i, 1, 0) - st.u(i, -1, 0)) / (2.0 * h); };

  const double u_yt = (st.u(0, 1, 1) - st.u(0, 1, -1) - st.u(0, -1, 1) + st.u(0, -1, -1)) / (4.0 * h * h);
  const double h_xx = (st.h(1, 0, 0) - 2.0 * st.h(0, 0, 0) + st.h(-1, 0, 0)) / (h * h);
  const double w_xy = (w(1, 1) - w(1, -1) - w(-1, 1) + w(-1, -1)) / (4.0 * h * h);

  const double h_t = (st.h(0, 0, 1) - st.h(0, 0, -1)) / (2.0 * h);
  const double q_x = (q(1) - q(-1)) / (2.0 * h);
  const double u_xxy = (dy_u(1) - 2.0 * dy_u(0) + dy_u(-1)) / (h * h);

  return ResidualPair{u_yt + h_xx + 0.5 * w_xy, h_t + q_x + u_xxy};
}

ResidualPair fd_residual_1d(const ReducedSampler& s, double z, double t, const StencilConfig& cfg) {
  const double h = cfg.step;
  // The reduced sampler sees (z, t) through the x and t slots.
  const FieldSampler lifted = [&s](const Point& p) { return s(p.x, p.t); };
  StencilSamples<2> st(lifted, Point{z, 0.0, t}, h);
  auto w = [&](int i) { const double u = st.u(i, 0, 0); return u * u; };
  auto q = [&](int i) {
    const FieldPair& f = st.at(i, 0, 0);
    return f.u * f.h + f.u;
  };

  const double u_t = (st.u(0, 0, 1) - st.u(0, 0, -1)) / (2.0 * h);
  const double h_z = (st.h(1, 0, 0) - st.h(-1, 0, 0)) / (2.0 * h);
  const double w_z = (w(1) - w(-1)) / (2.0 * h);

  const double h_t = (st.h(0, 0, 1) - st.h(0, 0, -1)) / (2.0 * h);
  const double q_z = (q(1) - q(-1)) / (2.0 * h);
  const double u_zzz = (st.u(2, 0, 0) - 2.0 * st.u(1, 0, 0) + 2.0 * st.u(-1, 0, 0) - st.u(-2, 0, 0)) /
                       (2.0 * h * h * h);

  return ResidualPair{u_t + h_z + 0.5 * w_z, h_t + q_z + u_zzz};
}

ConvergenceReport convergence_order(const FieldSampler& s, const Point& p, double coarse_step,
                                    double fine_step) {
  if (!(coarse_step > fine_step && fine_step > 0.0)) {
    throw std::invalid_argument("convergence_order needs coarse_step > fine_step > 0");
  }
  const ResidualPair rc = fd_residual_dlw(s, p, StencilConfig{coarse_step});
  const ResidualPair rf = fd_residual_dlw(s, p, StencilConfig{fine_step});
  ConvergenceReport out;
  const double c[2] = {std::abs(rc.r1), std::abs(rc.r2)};
  const double f[2] = {std::abs(rf.r1), std::abs(rf.r2)};
  for (int e = 0; e < 2; ++e) {
    OrderEstimate& est = out.equations[e];
    est.coarse = c[e];
    est.fine = f[e];
    if (c[e] < kRoundoffFloor && f[e] < kRoundoffFloor) {
      est.status = OrderEstimate::Status::ExactToRoundoff;
      est.order = std::numeric_limits<double>::quiet_NaN();
    } else if (f[e] == 0.0) {
      est.order = std::numeric_limits<double>::infinity();
    } else {
      est.order = std::log(c[e] / f[e]) / std::log(coarse_step / fine_step);
    }
  }
  return out;
}

Point GridSpec::point(std::size_t n) const {
  const auto nx = static_cast<std::size_t>(x.count);
  const auto ny = static_cast<std::size_t>(y.count);
  const int ix = static_cast<int>(n % nx);
  const int iy = static_cast<int>((n / nx) % ny);
  const int it = static_cast<int>(n / (nx * ny));
  return Point{x.at(ix), y.at(iy), t.at(it)};
}

void validate(const GridSpec& grid) {
  for (const Axis* a : {&grid.x, &grid.y, &grid.t}) {
    if (a->count < 1) throw std::invalid_argument("grid counts must be at least 1");
    if (!(a->lo <= a->hi)) throw std::invalid_argument("grid ranges must satisfy lo <= hi");
  }
}

std::vector<PointResidual> grid_evaluate(const FieldSampler& s, const GridSpec& grid,
                                         const StencilConfig& cfg, unsigned threads) {
  validate(grid);
  if (!(cfg.step > 0.0)) throw std::invalid_argument("stencil step must be positive");
  std::vector<PointResidual> out(grid.size());

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t n = begin; n < end; ++n) {
      PointResidual& r = out[n];
      r.point = grid.point(n);
      try {
        r.fields = s(r.point);
        r.residual = fd_residual_dlw(s, r.point, cfg);
      } catch (const PoleError&) {
        r.skipped = true;
      } catch (const StencilPoleError&) {
        r.skipped = true;
      }
    }
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(out.size())));
  if (threads == 1) {
    work(0, out.size());
    return out;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (out.size() + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(out.size(), begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(work, begin, end);
  }
  for (auto& th : pool) th.join();
  return out;
}

ResidualReport summarize(const std::vector<PointResidual>& points, const GridSpec& grid,
                         const StencilConfig& cfg) {
  ResidualReport rep;
  rep.grid = grid;
  rep.stencil = cfg;
  std::array<double, 2> sums{0.0, 0.0};
  for (const auto& pr : points) {
    if (pr.skipped) {
      ++rep.skipped;
      continue;
    }
    ++rep.evaluated;
    const double mags[2] = {std::abs(pr.residual.r1), std::abs(pr.residual.r2)};
    for (int e = 0; e < 2; ++e) {
      sums[e] += mags[e];
      // NaN residuals must surface as failures, never vanish from the max.
      if (mags[e] > rep.equations[e].maxAbs || std::isnan(mags[e])) {
        rep.equations[e].maxAbs = std::isnan(mags[e]) ? std::numeric_limits<double>::infinity() : mags[e];
        rep.equations[e].worst = pr.point;
      }
    }
  }
  if (rep.evaluated > 0) {
    for (int e = 0; e < 2; ++e) rep.equations[e].meanAbs = sums[e] / static_cast<double>(rep.evaluated);
  }
  return rep;
}

ResidualReport grid_report(const FieldSampler& s, const GridSpec& grid, const StencilConfig& cfg,
                           unsigned threads) {
  return summarize(grid_evaluate(s, grid, cfg, threads), grid, cfg);
}

}  // namespace dlw
