#include "mmnn/operators.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "mmnn/errors.hpp"
#include "mmnn/maxmin.hpp"

namespace mmnn {

namespace {

std::int64_t ceil_index(double v) {
  return static_cast<std::int64_t>(std::ceil(v - 1e-9));
}
std::int64_t floor_index(double v) {
  return static_cast<std::int64_t>(std::floor(v + 1e-9));
}

// Splits [0, count) across workers; rethrows the first worker exception.
template <typename Fn>
void parallel_for(std::int64_t count, int threads, Fn&& fn) {
  threads = std::max(1, threads);
  if (threads == 1 || count < 256) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const auto workers = static_cast<std::int64_t>(
      std::min<std::int64_t>(threads, count));
  std::mutex mu;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const std::int64_t chunk = (count + workers - 1) / workers;
  for (std::int64_t w = 0; w < workers; ++w) {
    const std::int64_t lo = w * chunk;
    const std::int64_t hi = std::min(count, lo + chunk);
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::int64_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct CellRange {
  std::int64_t k_lo;
  std::int64_t k_hi;
};

CellRange cell_range(Family family, std::int64_t n, double a, double b) {
  const double dn = static_cast<double>(n);
  switch (family) {
    case Family::maxmin_sampling:
    case Family::linear_sampling:
      return {ceil_index(dn * a), floor_index(dn * b)};
    case Family::maxmin_kantorovich:
      return {ceil_index(dn * a), floor_index(dn * b) - 1};
    case Family::maxmin_durrmeyer:
    case Family::linear_durrmeyer: {
      const double ra = std::nearbyint(a);
      const double rb = std::nearbyint(b);
      if (std::abs(a - ra) > 1e-9 || std::abs(b - rb) > 1e-9)
        throw DomainError("Durrmeyer families need integer domain endpoints");
      const auto ia = static_cast<std::int64_t>(ra);
      const auto ib = static_cast<std::int64_t>(rb);
      return {n * ia, n * ib - 1};
    }
  }
  throw DomainError("unknown operator family");
}

double maxmin_at(const BellKernel& bell, const CoefficientVector& c,
                 std::int64_t n, double x) {
  const double nx = static_cast<double>(n) * x;
  const std::int64_t k0 = std::clamp(
      static_cast<std::int64_t>(std::llround(nx)), c.k_lo, c.k_hi);
  const double den = bell(nx - static_cast<double>(k0));
  if (!(den > 0.0))
    throw ZeroDenominator("bell weights vanish at the evaluation point");

  // Nearest cell carries normalized weight exactly 1.
  double best = c.values[static_cast<std::size_t>(k0 - c.k_lo)];
  std::int64_t left = k0 - 1;
  std::int64_t right = k0 + 1;
  bool l_alive = left >= c.k_lo;
  bool r_alive = right <= c.k_hi;
  // Weights fall off monotonically on each side, so a side is finished as soon
  // as its weight cannot beat the running join; the whole scan is finished
  // once the join reaches the coefficient maximum.
  while ((l_alive || r_alive) && best < c.max_value) {
    if (l_alive) {
      const double w = bell(nx - static_cast<double>(left)) / den;
      if (w <= best) {
        l_alive = false;
      } else {
        best = vee(best, wedge(c.values[static_cast<std::size_t>(left - c.k_lo)], w));
        --left;
        l_alive = left >= c.k_lo;
      }
    }
    if (r_alive) {
      const double w = bell(nx - static_cast<double>(right)) / den;
      if (w <= best) {
        r_alive = false;
      } else {
        best = vee(best, wedge(c.values[static_cast<std::size_t>(right - c.k_lo)], w));
        ++right;
        r_alive = right <= c.k_hi;
      }
    }
  }
  return best;
}

double linear_at(const BellKernel& bell, const CoefficientVector& c,
                 std::int64_t n, double x, bool durrmeyer) {
  const double nx = static_cast<double>(n) * x;
  const double dn = static_cast<double>(n);
  double num = 0.0;
  double den = 0.0;
  for (std::int64_t k = c.k_lo; k <= c.k_hi; ++k) {
    const double w = bell(nx - static_cast<double>(k));
    if (w <= 0.0) continue;
    const auto i = static_cast<std::size_t>(k - c.k_lo);
    const double m = durrmeyer ? dn * c.masses[i] * w : w;
    den += m;
    num += c.values[i] * m;
  }
  if (!(den > 0.0))
    throw ZeroDenominator("weight sum vanishes at the evaluation point");
  return num / den;
}

}  // namespace

bool family_is_maxmin(Family f) {
  return f == Family::maxmin_sampling || f == Family::maxmin_kantorovich ||
         f == Family::maxmin_durrmeyer;
}

bool family_is_durrmeyer(Family f) {
  return f == Family::maxmin_durrmeyer || f == Family::linear_durrmeyer;
}

Family family_from_code(const std::string& code) {
  if (code == "D") return Family::maxmin_durrmeyer;
  if (code == "K") return Family::maxmin_kantorovich;
  if (code == "F") return Family::maxmin_sampling;
  if (code == "LF") return Family::linear_sampling;
  if (code == "LD") return Family::linear_durrmeyer;
  throw ParseError("unknown family code: " + code);
}

std::string family_code(Family f) {
  switch (f) {
    case Family::maxmin_durrmeyer: return "D";
    case Family::maxmin_kantorovich: return "K";
    case Family::maxmin_sampling: return "F";
    case Family::linear_sampling: return "LF";
    case Family::linear_durrmeyer: return "LD";
  }
  return "?";
}

CoefficientVector coefficients(const OperatorConfig& cfg, const Signal& f,
                               int threads) {
  if (cfg.n < 1) throw DomainError("operator degree n must be positive");
  if (family_is_durrmeyer(cfg.family) && !cfg.chi)
    throw DomainError("Durrmeyer families need an averaging kernel");

  const auto [k_lo, k_hi] = cell_range(cfg.family, cfg.n, f.a(), f.b());
  if (k_hi < k_lo) throw DomainError("degenerate cell range: raise n");

  CoefficientVector c;
  c.k_lo = k_lo;
  c.k_hi = k_hi;
  c.values.assign(static_cast<std::size_t>(c.count()), 0.0);
  if (family_is_durrmeyer(cfg.family))
    c.masses.assign(static_cast<std::size_t>(c.count()), 0.0);

  const double dn = static_cast<double>(cfg.n);
  switch (cfg.family) {
    case Family::maxmin_sampling:
    case Family::linear_sampling:
      parallel_for(c.count(), threads, [&](std::int64_t i) {
        c.values[static_cast<std::size_t>(i)] =
            f(static_cast<double>(k_lo + i) / dn);
      });
      break;
    case Family::maxmin_kantorovich:
      parallel_for(c.count(), threads, [&](std::int64_t i) {
        c.values[static_cast<std::size_t>(i)] =
            kantorovich_mean(f, cfg.n, k_lo + i, cfg.quad);
      });
      break;
    case Family::maxmin_durrmeyer:
    case Family::linear_durrmeyer: {
      const auto ia = static_cast<std::int64_t>(std::nearbyint(f.a()));
      const auto ib = static_cast<std::int64_t>(std::nearbyint(f.b()));
      parallel_for(c.count(), threads, [&](std::int64_t i) {
        c.values[static_cast<std::size_t>(i)] =
            chi_weighted_mean(*cfg.chi, f, cfg.n, k_lo + i, cfg.quad);
        c.masses[static_cast<std::size_t>(i)] =
            chi_cell_mass(*cfg.chi, cfg.n, k_lo + i, ia, ib, cfg.quad);
      });
      break;
    }
  }

  for (double& v : c.values) v = std::clamp(v, 0.0, 1.0);
  c.max_value = c.values.empty() ? 0.0 : vee(std::span<const double>(c.values));
  return c;
}

std::vector<double> evaluate_with(const OperatorConfig& cfg,
                                  const CoefficientVector& coeffs, double a,
                                  double b, std::span<const double> xs,
                                  int threads) {
  if (coeffs.k_hi < coeffs.k_lo) throw DomainError("empty coefficient vector");
  if (coeffs.count() != static_cast<std::int64_t>(coeffs.values.size()))
    throw LengthMismatch("coefficient vector length disagrees with its range");
  if (cfg.family == Family::linear_durrmeyer &&
      coeffs.masses.size() != coeffs.values.size())
    throw LengthMismatch("linear Durrmeyer needs one mass per cell");

  const double slack = 1e-9 * (b - a);
  std::vector<double> out(xs.size());
  const bool maxmin = family_is_maxmin(cfg.family);
  const bool durrmeyer = cfg.family == Family::linear_durrmeyer;
  parallel_for(static_cast<std::int64_t>(xs.size()), threads, [&](std::int64_t i) {
    double x = xs[static_cast<std::size_t>(i)];
    if (x < a - slack || x > b + slack)
      throw DomainError("evaluation point outside the signal domain");
    x = std::clamp(x, a, b);
    out[static_cast<std::size_t>(i)] =
        maxmin ? maxmin_at(cfg.bell, coeffs, cfg.n, x)
               : linear_at(cfg.bell, coeffs, cfg.n, x, durrmeyer);
  });
  return out;
}

std::vector<double> evaluate(const OperatorConfig& cfg, const Signal& f,
                             std::span<const double> xs, int threads) {
  const CoefficientVector c = coefficients(cfg, f, threads);
  return evaluate_with(cfg, c, f.a(), f.b(), xs, threads);
}

std::vector<double> denoise(const OperatorConfig& cfg,
                            std::span<const double> noisy, double a, double b,
                            int threads) {
  if (noisy.size() < 2) throw DomainError("denoise needs at least 2 samples");
  std::vector<double> clamped(noisy.begin(), noisy.end());
  for (double& v : clamped) v = std::clamp(v, 0.0, 1.0);
  const Signal s = Signal::sampled(a, b, std::move(clamped), Interp::step);
  const std::vector<double> grid = sample_grid(a, b, noisy.size());
  return evaluate(cfg, s, grid, threads);
}

std::vector<double> complement_double_pass(const OperatorConfig& cfg,
                                           std::span<const double> noisy,
                                           double a, double b, int threads) {
  std::vector<double> pass = denoise(cfg, noisy, a, b, threads);
  for (double& v : pass) v = std::clamp(1.0 - v, 0.0, 1.0);
  pass = denoise(cfg, pass, a, b, threads);
  for (double& v : pass) v = std::clamp(1.0 - v, 0.0, 1.0);
  return pass;
}

}  // namespace mmnn
