#include "anisopt/ocp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "anisopt/norms.hpp"

namespace anisopt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

CostEvaluation evaluate_cost(const OcpInstance& instance, const std::vector<double>& theta) {
  CostEvaluation eval;
  const ControlField a = parameterize(theta, instance.scheme, instance.mesh, instance.bounds);
  eval.tv = discrete_tv(a, instance.mesh, instance.bounds);

  RegParams state_reg;
  if (instance.reg) {
    state_reg = *instance.reg;
  } else if (instance.params.p == 2.0) {
    state_reg = RegParams(1.0, 1.0);  // inert for p = 2
  } else {
    throw std::invalid_argument(
        "evaluate_cost: the unregularized state problem is only available for p = 2");
  }

  auto [y, yreport] = solve_state(a, state_reg, instance.params, instance.mesh, instance.state_tol,
                                  instance.state_max_iter);
  if (!yreport.converged) {
    eval.cost = kInf;
    return eval;
  }
  auto [z, zreport] = solve_hammerstein(y, instance.kernel, instance.params.p, instance.reg,
                                        instance.mesh, instance.ham_tol, instance.ham_max_iter);
  if (!zreport.converged) {
    eval.cost = kInf;
    return eval;
  }

  double tracking = 0.0;
  for (int c = 0; c < instance.mesh.n_cells(); ++c) {
    const double d = z.z[c] - instance.z_d[c];
    tracking += instance.mesh.cell_volume * d * d;
  }
  const double excess = std::max(0.0, eval.tv.tv_value - instance.bounds.gamma);
  eval.cost = tracking + instance.tv_penalty_weight * excess * excess;
  eval.valid = true;
  eval.state = std::move(y);
  eval.zstate = std::move(z);
  return eval;
}

OptMethod parse_method(const std::string& name) {
  if (name == "nelder-mead") return OptMethod::NelderMead;
  if (name == "fd-projected-gradient") return OptMethod::FdProjectedGradient;
  throw std::invalid_argument("unknown optimization method: " + name);
}

std::string method_name(OptMethod method) {
  return method == OptMethod::NelderMead ? "nelder-mead" : "fd-projected-gradient";
}

namespace {

bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// (cost, theta) ordering with the documented lexicographic tie-break
bool better(double cost_a, const std::vector<double>& theta_a, double cost_b,
            const std::vector<double>& theta_b) {
  if (cost_a != cost_b) return cost_a < cost_b;
  return lex_less(theta_a, theta_b);
}

struct Box {
  std::vector<double> lo, hi;
  std::vector<bool> bounded;
};

// componentwise bounds actually enforced by parameterize()
Box scheme_box(ControlScheme scheme, const ControlBounds& bounds) {
  const int arity = scheme_arity(scheme);
  const double lo = bounds.xi1 * bounds.xi1;
  const double hi = bounds.xi2 * bounds.xi2;
  Box box{std::vector<double>(arity, lo), std::vector<double>(arity, hi),
          std::vector<bool>(arity, true)};
  if (scheme == ControlScheme::ConstantRotated) {
    box.lo[2] = -3.15;
    box.hi[2] = 3.15;
    box.bounded[2] = false;  // the angle is periodic, not clipped
  }
  return box;
}

std::vector<double> clip_to_box(std::vector<double> theta, const Box& box) {
  for (std::size_t i = 0; i < theta.size(); ++i)
    if (box.bounded[i]) theta[i] = std::clamp(theta[i], box.lo[i], box.hi[i]);
  return theta;
}

class Evaluator {
 public:
  Evaluator(const OcpInstance& instance, int budget) : instance_(instance), budget_(budget) {}

  double operator()(const std::vector<double>& theta) {
    if (count_ >= budget_) return kInf;  // budget exhausted: poison further probes
    CostEvaluation eval = evaluate_cost(instance_, theta);
    ++count_;
    trace_.push_back({count_, theta, eval.cost, eval.tv.tv_value, eval.valid});
    const bool feasible = eval.valid && eval.tv.within_budget;
    if (feasible && (!has_best_ || better(eval.cost, theta, best_cost_, best_theta_))) {
      has_best_ = true;
      best_cost_ = eval.cost;
      best_theta_ = theta;
    }
    best_costs_.push_back(has_best_ ? best_cost_ : kInf);
    return eval.cost;
  }

  bool exhausted() const { return count_ >= budget_; }
  int count() const { return count_; }
  bool has_best() const { return has_best_; }
  const std::vector<double>& best_theta() const { return best_theta_; }
  std::vector<TraceEntry> take_trace() { return std::move(trace_); }
  std::vector<double> take_best_costs() { return std::move(best_costs_); }

 private:
  const OcpInstance& instance_;
  int budget_;
  int count_ = 0;
  bool has_best_ = false;
  double best_cost_ = kInf;
  std::vector<double> best_theta_;
  std::vector<TraceEntry> trace_;
  std::vector<double> best_costs_;
};

void nelder_mead(Evaluator& eval, const std::vector<double>& theta0, const Box& box) {
  const int n = static_cast<int>(theta0.size());
  std::vector<std::vector<double>> x(n + 1, clip_to_box(theta0, box));
  std::vector<double> fx(n + 1);

  // initial simplex: step each coordinate toward the interior of its box
  for (int i = 0; i < n; ++i) {
    double step = box.bounded[i] ? 0.2 * (box.hi[i] - box.lo[i]) : 0.3;
    if (box.bounded[i] && x[i + 1][i] + step > box.hi[i]) step = -step;
    x[i + 1][i] += step;
    x[i + 1] = clip_to_box(x[i + 1], box);
  }
  for (int i = 0; i <= n; ++i) fx[i] = eval(x[i]);

  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
  while (!eval.exhausted()) {
    std::vector<int> order(n + 1);
    for (int i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return better(fx[a], x[a], fx[b], x[b]); });
    {
      std::vector<std::vector<double>> xs(n + 1);
      std::vector<double> fs(n + 1);
      for (int i = 0; i <= n; ++i) {
        xs[i] = x[order[i]];
        fs[i] = fx[order[i]];
      }
      x = std::move(xs);
      fx = std::move(fs);
    }
    if (std::isfinite(fx[0]) && std::isfinite(fx[n]) && fx[n] - fx[0] <= 1e-15 * (1.0 + std::abs(fx[0])))
      break;  // simplex collapsed

    std::vector<double> centroid(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) centroid[j] += x[i][j] / n;

    auto affine = [&](double t) {
      std::vector<double> p(n);
      for (int j = 0; j < n; ++j) p[j] = centroid[j] + t * (centroid[j] - x[n][j]);
      return clip_to_box(std::move(p), box);
    };

    const auto xr = affine(alpha);
    const double fr = eval(xr);
    if (eval.exhausted()) break;

    if (better(fr, xr, fx[0], x[0])) {
      const auto xe = affine(alpha * gamma);
      const double fe = eval(xe);
      if (better(fe, xe, fr, xr)) {
        x[n] = xe;
        fx[n] = fe;
      } else {
        x[n] = xr;
        fx[n] = fr;
      }
    } else if (better(fr, xr, fx[n - 1], x[n - 1])) {
      x[n] = xr;
      fx[n] = fr;
    } else {
      const bool outside = better(fr, xr, fx[n], x[n]);
      const auto xc = affine(outside ? rho : -rho);
      const double fc = eval(xc);
      if (better(fc, xc, outside ? fr : fx[n], outside ? xr : x[n])) {
        x[n] = xc;
        fx[n] = fc;
      } else {
        for (int i = 1; i <= n && !eval.exhausted(); ++i) {
          for (int j = 0; j < n; ++j) x[i][j] = x[0][j] + sigma * (x[i][j] - x[0][j]);
          x[i] = clip_to_box(x[i], box);
          fx[i] = eval(x[i]);
        }
      }
    }
  }
}

void fd_projected_gradient(Evaluator& eval, const std::vector<double>& theta0, const Box& box) {
  const int n = static_cast<int>(theta0.size());
  std::vector<double> x = clip_to_box(theta0, box);
  double fx = eval(x);

  while (!eval.exhausted()) {
    // central differences, relative step 1e-4
    std::vector<double> grad(n, 0.0);
    for (int i = 0; i < n && !eval.exhausted(); ++i) {
      const double h = 1e-4 * std::max(1.0, std::abs(x[i]));
      auto xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      grad[i] = (eval(xp) - eval(xm)) / (2.0 * h);
    }
    if (eval.exhausted()) break;
    double gnorm = 0.0;
    for (double g : grad) gnorm += g * g;
    gnorm = std::sqrt(gnorm);
    if (!std::isfinite(gnorm) || gnorm < 1e-14) break;

    double t = 1.0 / std::max(1.0, gnorm);
    bool improved = false;
    while (t >= 1e-10 && !eval.exhausted()) {
      std::vector<double> xn(n);
      for (int i = 0; i < n; ++i) xn[i] = x[i] - t * grad[i];
      xn = clip_to_box(std::move(xn), box);
      const double fn = eval(xn);
      if (fn < fx) {
        x = std::move(xn);
        fx = fn;
        improved = true;
        break;
      }
      t *= 0.5;
    }
    if (!improved) break;  // projected stationary point
  }
}

}  // namespace

OcpResult minimize(const OcpInstance& instance, const std::vector<double>& theta0, OptMethod method,
                   int budget) {
  if (budget < 10) throw std::invalid_argument("minimize: budget must be at least 10");
  if (static_cast<int>(theta0.size()) != scheme_arity(instance.scheme))
    throw std::invalid_argument("minimize: theta0 length does not match the control scheme");

  const Box box = scheme_box(instance.scheme, instance.bounds);
  Evaluator eval(instance, budget);
  if (method == OptMethod::NelderMead)
    nelder_mead(eval, theta0, box);
  else
    fd_projected_gradient(eval, theta0, box);

  if (!eval.has_best())
    throw std::runtime_error("minimize: every evaluation was invalid or infeasible");

  OcpResult result;
  result.theta_opt = eval.best_theta();
  result.evaluations = eval.count();
  result.trace = eval.take_trace();
  result.best_costs = eval.take_best_costs();

  CostEvaluation best = evaluate_cost(instance, result.theta_opt);  // deterministic recompute
  result.cost_opt = best.cost;
  result.state = std::move(best.state);
  result.zstate = std::move(best.zstate);
  result.tv_report = best.tv;
  return result;
}

}  // namespace anisopt
