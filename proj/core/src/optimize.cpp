#include "oup/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "oup/errors.hpp"

namespace oup {

namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

class Simplex {
 public:
  Simplex(const std::function<double(std::span<const double>)>& f, int budget)
      : f_(f), budget_(budget) {}

  double eval(const std::vector<double>& x) {
    ++evaluations_;
    const double v = f_(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  }

  [[nodiscard]] bool exhausted() const { return evaluations_ >= budget_; }
  [[nodiscard]] int evaluations() const { return evaluations_; }

 private:
  const std::function<double(std::span<const double>)>& f_;
  int budget_;
  int evaluations_ = 0;
};

double diameter(const std::vector<Vertex>& v) {
  double d = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    for (std::size_t k = 0; k < v[0].x.size(); ++k) d = std::max(d, std::abs(v[i].x[k] - v[0].x[k]));
  }
  double scale = 1.0;
  for (double c : v[0].x) scale = std::max(scale, std::abs(c));
  return d / scale;
}

// One simplex run from x0. Returns true on convergence.
bool run(Simplex& s, Vertex& best, const NelderMeadOptions& o) {
  const std::size_t n = best.x.size();
  std::vector<Vertex> v;
  v.push_back(best);
  for (std::size_t i = 0; i < n; ++i) {
    Vertex p = best;
    p.x[i] += o.step * std::max(std::abs(best.x[i]), o.min_step);
    p.f = s.eval(p.x);
    v.push_back(std::move(p));
  }

  auto order = [&] { std::ranges::stable_sort(v, {}, &Vertex::f); };
  order();
  bool converged = false;
  while (!s.exhausted()) {
    if (diameter(v) <= o.tolerance) {
      converged = true;
      break;
    }
    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) centroid[k] += v[i].x[k] / static_cast<double>(n);
    }
    auto along = [&](double t) {
      std::vector<double> x(n);
      for (std::size_t k = 0; k < n; ++k) x[k] = centroid[k] + t * (v[n].x[k] - centroid[k]);
      return x;
    };

    Vertex r{along(-1.0), 0.0};
    r.f = s.eval(r.x);
    if (r.f < v[0].f) {
      Vertex e{along(-2.0), 0.0};
      e.f = s.eval(e.x);
      v[n] = (e.f < r.f) ? std::move(e) : std::move(r);
    } else if (r.f < v[n - 1].f) {
      v[n] = std::move(r);
    } else {
      const bool outside = r.f < v[n].f;
      Vertex c{along(outside ? -0.5 : 0.5), 0.0};
      c.f = s.eval(c.x);
      if (c.f < (outside ? r.f : v[n].f)) {
        v[n] = std::move(c);
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t k = 0; k < n; ++k) v[i].x[k] = v[0].x[k] + 0.5 * (v[i].x[k] - v[0].x[k]);
          v[i].f = s.eval(v[i].x);
        }
      }
    }
    order();
  }
  best = v[0];
  return converged;
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, const NelderMeadOptions& options) {
  if (x0.empty()) throw InvalidArgument("Nelder-Mead needs at least one coordinate");
  Simplex s(f, options.max_evaluations);
  Vertex best{std::move(x0), 0.0};
  best.f = s.eval(best.x);

  bool converged = run(s, best, options);
  for (int r = 0; r < options.restarts && converged && !s.exhausted(); ++r) {
    const double before = best.f;
    converged = run(s, best, options);
    if (!(best.f < before - 1e-12 * (1.0 + std::abs(before)))) break;
  }
  return {best.x, best.f, s.evaluations(), converged};
}

}  // namespace oup
