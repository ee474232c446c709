#pragma once

#include <vector>

#include "ctx/algebra.hpp"
#include "ctx/types.hpp"

namespace ctx {

/// Hermitian involution together with its +-1 eigenprojectors.
struct DichotomicObservable {
  Matrix op;
  Matrix p_plus;
  Matrix p_minus;
  int rank_plus = 0;
  int rank_minus = 0;
};

/// p_plus = (I+op)/2, p_minus = (I-op)/2. Rejects operators with a
/// one-sided spectrum (both eigenvalues must occur).
DichotomicObservable eigen_partition(const Matrix& op, const Tolerances& tol = {});

struct ProjectorBlock {
  int sign;  // +1 or -1
  Matrix projector;
  int rank;
};

/// Mutually orthogonal projectors summing to the identity whose signed sum
/// equals the measured observable.
class ProjectorPartition {
 public:
  /// Validates orthogonality, completeness and the signed-sum identity
  /// against `observable`.
  ProjectorPartition(std::vector<ProjectorBlock> blocks, const Matrix& observable,
                     const Tolerances& tol = {});

  const std::vector<ProjectorBlock>& blocks() const { return blocks_; }
  int dim() const { return static_cast<int>(blocks_.front().projector.rows()); }
  int k() const { return static_cast<int>(blocks_.size()); }
  bool rank_one() const;

 private:
  std::vector<ProjectorBlock> blocks_;
};

/// The two coarse eigenprojectors (k = 2).
ProjectorPartition coarse_partition(const DichotomicObservable& obs);

/// Joint-eigenprojector refinement of obs by a set of auxiliary commuting
/// involutions. The aux sequence is ordered (M1, N1, M2, N2, ...): partners
/// first, refiners second, with the closure A*N = M enforced. For one pair
/// this yields four rank-1 projectors at d=4; for three pairs, eight at d=8
/// (where additionally N3 = N1*N2 must close the set).
ProjectorPartition refine_partition(const DichotomicObservable& obs,
                                    const std::vector<Matrix>& aux,
                                    const Tolerances& tol = {});

/// Equal-rank split of each eigenspace into k/2 blocks along a
/// deterministic orthonormal basis; rejects when d/2 is not divisible
/// by k/2.
ProjectorPartition equal_rank_partition(const DichotomicObservable& obs, int k,
                                        const Tolerances& tol = {});

/// Rank-1 partition of `first` maximizing favored_sign * <first then second>
/// for the pure state psi. Closed-form construction: within each eigenspace,
/// k = m/2+1 carrying vectors solve the overlap-alignment equations
/// w_j z_j = s/k; the rest pad the disfavored subspace.
ProjectorPartition aligned_partition(const Vector& psi,
                                     const DichotomicObservable& first,
                                     const Matrix& second, int favored_sign,
                                     const Tolerances& tol = {});

struct MeasurementScheme {
  enum class Kind { DP, DB };
  Kind kind;
  ProjectorPartition partition;

  static MeasurementScheme dp(const DichotomicObservable& obs);
  static MeasurementScheme db(ProjectorPartition partition);
};

/// Lueders update: p+ rho p+ + p- rho p-.
DensityMatrix dp_channel(const DensityMatrix& state, const DichotomicObservable& obs);

/// von Neumann update: sum over blocks of P rho P.
DensityMatrix db_channel(const DensityMatrix& state, const ProjectorPartition& partition);

/// P(a, b) for the sequential pair: first measurement per `first`,
/// coarse second measurement of B with outcome b.
double joint_probability(const DensityMatrix& state, const MeasurementScheme& first,
                         int a, const DichotomicObservable& second, int b,
                         const Tolerances& tol = {});

/// sum_{a,b} a b P(ab).
double sequential_correlation(const DensityMatrix& state, const MeasurementScheme& first,
                              const DichotomicObservable& second,
                              const Tolerances& tol = {});

/// The literal cross-term double sum: Tr[(sum_{x!=x'} P+_x rho P+_x'
/// - sum_{x!=x'} P-_x rho P-_x') B]. Requires balanced degeneracy and a
/// fully rank-1 partition. Satisfies <AB>_db = <AB>_dp - cross_term.
double db_dp_cross_term(const DensityMatrix& state, const ProjectorPartition& partition,
                        const DichotomicObservable& second,
                        const Tolerances& tol = {});

}  // namespace ctx
