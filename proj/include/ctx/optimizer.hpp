#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ctx/contextuality.hpp"

namespace ctx {

struct SearchConfig {
  int dim = 4;
  SchemeSpec scheme = SchemeSpec::dp();
  int restarts = 32;
  int max_iters = 400;   // simplex iterations per observable sweep
  std::uint64_t seed = 1;
  double step_tolerance = 1e-9;
  double value_tolerance = 1e-6;
  double penalty_lambda = 100.0;  // weight of the squared commutator penalty
  int sweeps = 5;                 // coordinate sweeps over the four observables
  int threads = 0;                // 0 = hardware concurrency
};

struct RestartRecord {
  int restart;
  int iterations;
  double value;
};

struct SearchResult {
  double best_value = 0;          // re-verified channel value
  double penalized_score = 0;
  double constraint_residual = 0; // sum of squared commutator norms
  bool converged = false;
  int best_restart = -1;
  std::vector<RestartRecord> history;
  std::array<Matrix, 4> observables;
  Matrix state;
};

/// U D U^dagger with D = diag(+1 x d/2, -1 x d/2) and U composed of
/// two-level rotations, one (angle, phase) pair per index pair:
/// d(d-1) parameters in total.
DichotomicObservable parameterize_observable(const std::vector<double>& params, int dim);
int observable_parameter_count(int dim);

/// Derivative-free search for the maximal functional value. Candidate
/// observables are scored by the penalized objective; the state step is
/// exact (top eigenvector of the symmetrized functional operator), and for
/// full-DB schemes the refinement step is the exact aligned partition.
/// The reported best_value is re-verified by channel simulation.
SearchResult search_optimal_delta(const SearchConfig& config);

struct AuxSearchResult {
  bool found = false;
  double best_value = 0;
  double target = 0;
  // per observable: the six-operator closure set (M1, N1, M2, N2, M3, N3)
  std::array<std::vector<Matrix>, 4> aux;
};

/// Searches for commuting involutions refining each eigenspace of the
/// scenario's observables to rank 1 so that the DB value reaches
/// db_optimal_formula(n) within value_tolerance. Returns the operators if
/// the target is met; otherwise found = false with the best value reached.
AuxSearchResult search_aux_observables(const Scenario& s, const SearchConfig& config);

}  // namespace ctx
