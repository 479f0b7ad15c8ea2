#include "kpp/frontsim.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <memory>
#include <mutex>
#include <numbers>
#include <unordered_map>

namespace kpp {

namespace {

constexpr double pi = std::numbers::pi;

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

// DST-I workspace (Dirichlet eigenbasis of the interval), cached per shape.
struct DstWorkspace {
  int dim;
  int m;  // interior points per axis
  double* buf = nullptr;
  fftw_plan plan = nullptr;

  DstWorkspace(int dim_, int m_) : dim(dim_), m(m_) {
    const std::size_t total =
        dim == 1 ? m : static_cast<std::size_t>(m) * m;
    buf = fftw_alloc_real(total);
    std::lock_guard<std::mutex> lock(plan_mutex());
    if (dim == 1) {
      plan = fftw_plan_r2r_1d(m, buf, buf, FFTW_RODFT00, FFTW_ESTIMATE);
    } else {
      plan = fftw_plan_r2r_2d(m, m, buf, buf, FFTW_RODFT00, FFTW_RODFT00,
                              FFTW_ESTIMATE);
    }
  }
  ~DstWorkspace() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    if (plan) fftw_destroy_plan(plan);
    fftw_free(buf);
  }
  DstWorkspace(const DstWorkspace&) = delete;
  DstWorkspace& operator=(const DstWorkspace&) = delete;
};

DstWorkspace& dst_workspace(int dim, int m) {
  thread_local std::unordered_map<long, std::unique_ptr<DstWorkspace>> cache;
  const long key = static_cast<long>(dim) * 100000000L + m;
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_unique<DstWorkspace>(dim, m)).first;
  }
  return *it->second;
}

double wrap_unit(double x) { return x - std::floor(x); }

double init_value(const InitSpec& init, const Vec& x, int dim) {
  const double dx = x[0] - init.center[0];
  const double dy = dim == 2 ? x[1] - init.center[1] : 0.0;
  const double r = std::hypot(dx, dy);
  if (init.profile == InitSpec::Profile::Indicator) {
    return r <= init.radius ? init.amplitude : 0.0;
  }
  const double s = r / init.radius;
  if (s >= 1.0) return 0.0;
  return init.amplitude * std::exp(1.0 - 1.0 / (1.0 - s * s));
}

// Exact flow of u' = mu u (1-u) over tau, pointwise.
inline double logistic_flow(double u, double ea) {
  return u * ea / (1.0 + u * (ea - 1.0));
}

struct Stepper {
  int dim;
  int m;        // interior points per axis
  double h;
  double hw;    // half width
  double dt;
  std::vector<double> u;
  std::vector<double> exp_half;   // exp(mu dt/2) per node (period table)
  std::vector<double> diff_mult;  // diffusion symbol, includes DST scaling
  int ppc;

  Stepper(const SimConfig& cfg) {
    dim = cfg.dim;
    ppc = cfg.points_per_cell;
    h = 1.0 / ppc;
    hw = cfg.domain_half_width;
    dt = cfg.dt;
    m = static_cast<int>(std::lround(2.0 * hw * ppc)) - 1;
    const std::size_t total =
        dim == 1 ? m : static_cast<std::size_t>(m) * m;
    u.assign(total, 0.0);

    // mu is 1-periodic and nodes advance by h = 1/ppc, so exp(mu dt/2)
    // repeats with period ppc along each axis.
    // Node i sits at -hw + i h with hw integer, so its position mod 1 only
    // depends on i mod ppc.
    exp_half.resize(dim == 1 ? ppc : static_cast<std::size_t>(ppc) * ppc);
    for (int a = 0; a < ppc; ++a) {
      const double xv = wrap_unit(a * h);
      if (dim == 1) {
        exp_half[a] = std::exp(cfg.mu({xv, 0.0}) * dt / 2.0);
      } else {
        for (int b = 0; b < ppc; ++b) {
          const double yv = wrap_unit(b * h);
          exp_half[static_cast<std::size_t>(a) * ppc + b] =
              std::exp(cfg.mu({xv, yv}) * dt / 2.0);
        }
      }
    }

    const double len = 2.0 * hw;
    const double dst_scale =
        dim == 1 ? 1.0 / (2.0 * (m + 1))
                 : 1.0 / (4.0 * static_cast<double>(m + 1) * (m + 1));
    diff_mult.resize(m);
    for (int k = 1; k <= m; ++k) {
      const double ev = -std::pow(k * pi / len, 2);
      diff_mult[k - 1] = std::exp(dt * ev);
    }
    for (double& v : diff_mult) v *= dim == 1 ? dst_scale : std::sqrt(dst_scale);
  }

  double node(int i) const { return -hw + i * h; }  // i in [1, m]

  void init_data(const InitSpec& init) {
    if (dim == 1) {
      for (int i = 1; i <= m; ++i) {
        u[i - 1] = init_value(init, {node(i), 0.0}, 1);
      }
    } else {
      for (int i = 1; i <= m; ++i) {
        for (int j = 1; j <= m; ++j) {
          u[static_cast<std::size_t>(i - 1) * m + (j - 1)] =
              init_value(init, {node(i), node(j)}, 2);
        }
      }
    }
  }

  void reaction_half() {
    if (dim == 1) {
      for (int i = 1; i <= m; ++i) {
        u[i - 1] = logistic_flow(u[i - 1], exp_half[(i) % ppc]);
      }
    } else {
      for (int i = 1; i <= m; ++i) {
        const int ia = i % ppc;
        double* row = &u[static_cast<std::size_t>(i - 1) * m];
        for (int j = 1; j <= m; ++j) {
          row[j - 1] = logistic_flow(
              row[j - 1], exp_half[static_cast<std::size_t>(ia) * ppc + j % ppc]);
        }
      }
    }
  }

  void diffusion_full() {
    DstWorkspace& ws = dst_workspace(dim, m);
    std::memcpy(ws.buf, u.data(), u.size() * sizeof(double));
    fftw_execute(ws.plan);
    if (dim == 1) {
      for (int k = 0; k < m; ++k) ws.buf[k] *= diff_mult[k];
    } else {
      for (int k0 = 0; k0 < m; ++k0) {
        double* row = ws.buf + static_cast<std::size_t>(k0) * m;
        const double a = diff_mult[k0];
        for (int k1 = 0; k1 < m; ++k1) row[k1] *= a * diff_mult[k1];
      }
    }
    fftw_execute(ws.plan);
    std::memcpy(u.data(), ws.buf, u.size() * sizeof(double));
  }

  void step() {
    reaction_half();
    diffusion_full();
    reaction_half();
  }

  void check_health(double t) const {
    double lo = 0.0, hi = 0.0;
    for (double v : u) {
      if (!std::isfinite(v)) {
        throw StabilityViolation("non-finite value at t=" + std::to_string(t));
      }
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (lo < -1e-8 || hi > 1.0 + 1e-8) {
      throw StabilityViolation("u left [0,1] at t=" + std::to_string(t) +
                               " range [" + std::to_string(lo) + ", " +
                               std::to_string(hi) + "]");
    }
  }

  double edge_max() const {
    double mx = 0.0;
    if (dim == 1) {
      mx = std::max(std::abs(u.front()), std::abs(u.back()));
    } else {
      for (int j = 0; j < m; ++j) {
        mx = std::max({mx, std::abs(u[j]),
                       std::abs(u[static_cast<std::size_t>(m - 1) * m + j]),
                       std::abs(u[static_cast<std::size_t>(j) * m]),
                       std::abs(u[static_cast<std::size_t>(j) * m + m - 1])});
      }
    }
    return mx;
  }
};

}  // namespace

std::optional<double> extract_front(const Snapshot& snap, const SimResult& geom,
                                    double theta, double m) {
  if (!(m > 0.0 && m < 1.0)) throw DomainError("level m must be in (0,1)");
  const int n = geom.interior_points;
  const double h = geom.h;
  const double hw = geom.half_width;

  const auto value_at_radius = [&](double r) -> double {
    if (geom.dim == 1) {
      // Ray along +x for theta=0, -x for theta=pi.
      const double x = std::cos(theta) >= 0 ? r : -r;
      const double fi = (x + hw) / h;  // node index space, 0 = left boundary
      const int i = static_cast<int>(std::floor(fi));
      const double w = fi - i;
      const auto node_val = [&](int idx) -> double {
        if (idx <= 0 || idx >= n + 1) return 0.0;
        return snap.u[idx - 1];
      };
      return (1.0 - w) * node_val(i) + w * node_val(i + 1);
    }
    const double x = r * std::cos(theta);
    const double y = r * std::sin(theta);
    const double fi = (x + hw) / h;
    const double fj = (y + hw) / h;
    const int i = static_cast<int>(std::floor(fi));
    const int j = static_cast<int>(std::floor(fj));
    const double wx = fi - i;
    const double wy = fj - j;
    const auto node_val = [&](int ii, int jj) -> double {
      if (ii <= 0 || ii >= n + 1 || jj <= 0 || jj >= n + 1) return 0.0;
      return snap.u[static_cast<std::size_t>(ii - 1) * n + (jj - 1)];
    };
    return (1.0 - wx) * ((1.0 - wy) * node_val(i, j) + wy * node_val(i, j + 1)) +
           wx * ((1.0 - wy) * node_val(i + 1, j) + wy * node_val(i + 1, j + 1));
  };

  const double r_max = hw - 2.0 * h;
  const int steps = static_cast<int>(std::floor(r_max / h));
  double prev = value_at_radius(steps * h);
  for (int k = steps; k >= 1; --k) {
    const double cur = value_at_radius((k - 1) * h);
    if (cur >= m) {
      // crossing between radii (k-1)h and kh; prev < m <= cur
      const double denom = cur - prev;
      const double frac = denom > 0 ? (cur - m) / denom : 0.0;
      return (k - 1) * h + frac * h;
    }
    prev = cur;
  }
  return std::nullopt;
}

SimResult run_simulation(const SimConfig& config) {
  if (config.dim != 1 && config.dim != 2) {
    throw DomainError("simulation dimension must be 1 or 2");
  }
  if (!(config.dt > 0.0) || !(config.t_final > 0.0)) {
    throw DomainError("dt and t_final must be positive");
  }
  if (config.points_per_cell < 8) {
    throw DomainError("need at least 8 points per unit cell");
  }
  if (config.domain_half_width < 2.0 ||
      std::abs(config.domain_half_width -
               std::lround(config.domain_half_width)) > 1e-12) {
    throw DomainError("domain_half_width must be an integer >= 2");
  }
  if (config.init.amplitude < 0.0 || config.init.amplitude > 1.0) {
    throw DomainError("initial amplitude must lie in [0,1]");
  }
  if (!(config.level > 0.0 && config.level < 1.0)) {
    throw DomainError("level must be in (0,1)");
  }
  // Positivity of the medium, probed on one period.
  const int probe = 64;
  for (int i = 0; i < probe; ++i) {
    for (int j = 0; j < (config.dim == 2 ? probe : 1); ++j) {
      if (config.mu({i / static_cast<double>(probe),
                     j / static_cast<double>(probe)}) <= 0.0) {
        throw NonPositiveMedium("mu must be uniformly positive");
      }
    }
  }

  Stepper st(config);
  st.init_data(config.init);

  SimResult result;
  result.dim = config.dim;
  result.h = st.h;
  result.interior_points = st.m;
  result.half_width = st.hw;

  for (double theta : config.ray_angles) {
    FrontTrace tr;
    tr.theta = theta;
    tr.e = unit(theta);
    tr.level = config.level;
    result.traces.push_back(std::move(tr));
  }

  std::vector<double> record_times = config.record_times;
  std::sort(record_times.begin(), record_times.end());

  const long n_steps = std::lround(config.t_final / config.dt);
  const long trace_every =
      std::max(1L, std::lround(config.trace_dt / config.dt));
  std::size_t next_record = 0;

  const auto record_snapshot = [&](double t) {
    Snapshot s;
    s.t = t;
    s.u = st.u;
    result.snapshots.push_back(std::move(s));
  };
  // t = 0 snapshot if requested
  while (next_record < record_times.size() && record_times[next_record] <= 0.0) {
    record_snapshot(0.0);
    ++next_record;
  }

  Snapshot scratch;
  for (long n = 1; n <= n_steps; ++n) {
    st.step();
    const double t = n * config.dt;
    const bool trace_now = (n % trace_every == 0) || n == n_steps;
    if (trace_now) {
      st.check_health(t);
      scratch.t = t;
      scratch.u = st.u;
      for (auto& tr : result.traces) {
        const auto r = extract_front(scratch, result, tr.theta, tr.level);
        if (r) tr.samples.emplace_back(t, *r);
      }
    }
    while (next_record < record_times.size() &&
           t + 0.5 * config.dt >= record_times[next_record]) {
      record_snapshot(t);
      ++next_record;
    }
  }

  result.final_edge_max = st.edge_max();
  if (result.final_edge_max > config.boundary_tol) {
    throw BoundaryContamination(
        "solution reached the outer boundary: edge max " +
        std::to_string(result.final_edge_max));
  }
  return result;
}

}  // namespace kpp
