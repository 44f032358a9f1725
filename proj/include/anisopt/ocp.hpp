#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anisopt/control.hpp"
#include "anisopt/hammerstein.hpp"
#include "anisopt/mesh.hpp"
#include "anisopt/plap.hpp"

namespace anisopt {

/// Tracking-cost problem over one parameterized control family.
struct OcpInstance {
  Mesh mesh;
  ProblemParams params;
  ControlBounds bounds;
  Kernel kernel;
  std::vector<double> z_d;  // per-cell target
  std::optional<RegParams> reg;
  ControlScheme scheme = ControlScheme::ConstantDiagonal;
  double tv_penalty_weight = 1e3;
  double state_tol = 1e-10;
  int state_max_iter = 500;
  double ham_tol = 1e-10;
  int ham_max_iter = 100;
};

struct CostEvaluation {
  double cost = 0.0;  // +inf sentinel when invalid
  bool valid = false;
  StateField state;
  HammersteinState zstate;
  TvReport tv;
};

/// Solves the coupled system at parameterize(theta) and returns the tracking
/// cost plus the exterior TV penalty. Inner non-convergence yields an
/// invalid evaluation with +inf cost. An unregularized instance (reg absent)
/// is only solvable for p = 2, where the regularization is inert.
CostEvaluation evaluate_cost(const OcpInstance& instance, const std::vector<double>& theta);

struct TraceEntry {
  int evaluation_id = 0;
  std::vector<double> theta;
  double cost = 0.0;
  double tv = 0.0;
  bool valid = false;
};

enum class OptMethod { NelderMead, FdProjectedGradient };

OptMethod parse_method(const std::string& name);
std::string method_name(OptMethod method);

struct OcpResult {
  std::vector<double> theta_opt;
  double cost_opt = 0.0;
  StateField state;
  HammersteinState zstate;
  int evaluations = 0;
  TvReport tv_report;
  std::vector<TraceEntry> trace;
  std::vector<double> best_costs;  // best-so-far, one entry per evaluation
};

/// Derivative-free minimization over the scheme parameters within the given
/// evaluation budget; ties on equal cost break toward the lexicographically
/// smaller theta. Throws when every evaluation is invalid.
OcpResult minimize(const OcpInstance& instance, const std::vector<double>& theta0, OptMethod method,
                   int budget);

}  // namespace anisopt
