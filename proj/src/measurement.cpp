#include "ctx/measurement.hpp"

#include <cmath>
#include <string>

namespace ctx {
namespace {

int rank_of(const Matrix& projector) {
  return static_cast<int>(std::lround(projector.trace().real()));
}

}  // namespace

DichotomicObservable eigen_partition(const Matrix& op, const Tolerances& tol) {
  if (op.rows() != op.cols()) throw DimensionError("observable must be square");
  if (!is_hermitian(op, tol.hermitian))
    throw PreconditionError("observable is not Hermitian");
  if (!is_involutory(op, tol.hermitian))
    throw PreconditionError("observable is not involutory");
  const Eigen::Index d = op.rows();
  DichotomicObservable obs;
  obs.op = op;
  obs.p_plus = (Matrix::Identity(d, d) + op) / 2.0;
  obs.p_minus = (Matrix::Identity(d, d) - op) / 2.0;
  obs.rank_plus = rank_of(obs.p_plus);
  obs.rank_minus = rank_of(obs.p_minus);
  if (obs.rank_plus == 0 || obs.rank_minus == 0)
    throw PreconditionError("observable is not dichotomic: an eigenvalue is absent");
  return obs;
}

ProjectorPartition::ProjectorPartition(std::vector<ProjectorBlock> blocks,
                                       const Matrix& observable, const Tolerances& tol)
    : blocks_(std::move(blocks)) {
  if (blocks_.size() < 2) throw PreconditionError("partition needs at least 2 blocks");
  const Eigen::Index d = blocks_.front().projector.rows();
  if (static_cast<Eigen::Index>(blocks_.size()) > d)
    throw PreconditionError("partition has more blocks than the dimension");
  Matrix sum = Matrix::Zero(d, d);
  Matrix signed_sum = Matrix::Zero(d, d);
  for (auto& b : blocks_) {
    if (b.sign != 1 && b.sign != -1) throw PreconditionError("block sign must be +-1");
    if (b.projector.rows() != d || b.projector.cols() != d)
      throw DimensionError("partition blocks have mixed dimensions");
    if (!is_projector(b.projector, tol.hermitian))
      throw PreconditionError("partition block is not a projector");
    b.rank = rank_of(b.projector);
    sum += b.projector;
    signed_sum += double(b.sign) * b.projector;
  }
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    for (std::size_t j = i + 1; j < blocks_.size(); ++j)
      if (max_abs(blocks_[i].projector * blocks_[j].projector) > tol.hermitian)
        throw PreconditionError("partition blocks are not mutually orthogonal");
  if (max_abs(sum - Matrix::Identity(d, d)) > tol.hermitian)
    throw PreconditionError("partition blocks do not sum to the identity");
  if (max_abs(signed_sum - observable) > tol.hermitian)
    throw PreconditionError("signed block sum does not reproduce the observable");
}

bool ProjectorPartition::rank_one() const {
  for (const auto& b : blocks_)
    if (b.rank != 1) return false;
  return true;
}

ProjectorPartition coarse_partition(const DichotomicObservable& obs) {
  std::vector<ProjectorBlock> blocks;
  blocks.push_back({+1, obs.p_plus, obs.rank_plus});
  blocks.push_back({-1, obs.p_minus, obs.rank_minus});
  return ProjectorPartition(std::move(blocks), obs.op);
}

ProjectorPartition refine_partition(const DichotomicObservable& obs,
                                    const std::vector<Matrix>& aux,
                                    const Tolerances& tol) {
  if (aux.size() % 2 != 0 || aux.empty())
    throw PreconditionError("aux set must contain (partner, refiner) pairs");
  const Eigen::Index d = obs.op.rows();
  const std::size_t pairs = aux.size() / 2;

  for (std::size_t i = 0; i < aux.size(); ++i) {
    if (aux[i].rows() != d || aux[i].cols() != d)
      throw DimensionError("aux operator dimension mismatch");
    if (!is_hermitian(aux[i], tol.hermitian))
      throw PreconditionError("aux operator " + std::to_string(i + 1) + " is not Hermitian");
    if (!is_involutory(aux[i], tol.hermitian))
      throw PreconditionError("aux operator " + std::to_string(i + 1) + " is not involutory");
    if (max_abs(commutator(aux[i], obs.op)) > tol.hermitian)
      throw PreconditionError("aux operator " + std::to_string(i + 1) +
                              " does not commute with the observable");
    for (std::size_t j = i + 1; j < aux.size(); ++j)
      if (max_abs(commutator(aux[i], aux[j])) > tol.hermitian)
        throw PreconditionError("aux operators " + std::to_string(i + 1) + " and " +
                                std::to_string(j + 1) + " do not commute");
  }
  // closure: each partner is the observable times its refiner
  std::vector<Matrix> refiners;
  for (std::size_t p = 0; p < pairs; ++p) {
    const Matrix& partner = aux[2 * p];
    const Matrix& refiner = aux[2 * p + 1];
    if (max_abs(obs.op * refiner - partner) > tol.hermitian)
      throw PreconditionError("closure relation A*N" + std::to_string(p + 1) +
                              " = M" + std::to_string(p + 1) + " fails");
    refiners.push_back(refiner);
  }

  // joint eigenprojectors over all refiner sign patterns; patterns that are
  // inconsistent with the multiplicative structure come out as zero blocks
  std::vector<ProjectorBlock> blocks;
  const Matrix id = Matrix::Identity(d, d);
  for (int a : {+1, -1}) {
    const Matrix base = (a > 0) ? obs.p_plus : obs.p_minus;
    std::vector<Matrix> current{base};
    for (const auto& refiner : refiners) {
      std::vector<Matrix> next;
      for (const auto& blk : current) {
        Matrix up = blk * (id + refiner) / 2.0;
        Matrix down = blk * (id - refiner) / 2.0;
        if (up.trace().real() > 0.5) next.push_back(std::move(up));
        if (down.trace().real() > 0.5) next.push_back(std::move(down));
      }
      current = std::move(next);
    }
    for (auto& p : current) blocks.push_back({a, std::move(p), 0});
  }
  ProjectorPartition partition(std::move(blocks), obs.op, tol);
  if (!partition.rank_one())
    throw PreconditionError(
        "aux set does not refine to rank-1 blocks (refiners are not independent)");
  return partition;
}

namespace {

/// Deterministic orthonormal basis of a projector's range:
/// Gram-Schmidt over the projected standard basis vectors.
std::vector<Vector> range_basis(const Matrix& projector, int rank, double tol = 1e-9) {
  std::vector<Vector> basis;
  const Eigen::Index d = projector.rows();
  for (Eigen::Index k = 0; k < d && static_cast<int>(basis.size()) < rank; ++k) {
    Vector v = projector.col(k);
    for (const auto& u : basis) v -= u * u.dot(v);
    double n = v.norm();
    if (n > tol) basis.push_back(v / n);
  }
  if (static_cast<int>(basis.size()) != rank)
    throw Error("range basis extraction failed");
  return basis;
}

}  // namespace

ProjectorPartition equal_rank_partition(const DichotomicObservable& obs, int k,
                                        const Tolerances& tol) {
  const int d = static_cast<int>(obs.op.rows());
  if (k < 2 || k > d) throw PreconditionError("block count must satisfy 2 <= k <= d");
  if (k == 2) return coarse_partition(obs);
  if (k % 2 != 0)
    throw PreconditionError("block count must split evenly between the eigenspaces");
  const int per_side = k / 2;
  std::vector<ProjectorBlock> blocks;
  for (int a : {+1, -1}) {
    const Matrix& base = (a > 0) ? obs.p_plus : obs.p_minus;
    const int rank = (a > 0) ? obs.rank_plus : obs.rank_minus;
    if (rank % per_side != 0)
      throw PreconditionError("eigenspace rank is not divisible by the block count");
    const int block_rank = rank / per_side;
    auto basis = range_basis(base, rank);
    for (int b = 0; b < per_side; ++b) {
      Matrix p = Matrix::Zero(d, d);
      for (int j = 0; j < block_rank; ++j) {
        const Vector& v = basis[b * block_rank + j];
        p += v * v.adjoint();
      }
      blocks.push_back({a, std::move(p), block_rank});
    }
  }
  return ProjectorPartition(std::move(blocks), obs.op, tol);
}

namespace {

/// Carrying-vector alignment for one eigenspace: k = m/2+1 vectors with
/// overlap products w_j z_j = s/k, embedded so the remaining m/2-1
/// directions pad the disfavored subspace.
std::vector<Vector> aligned_block_basis(const Vector& psi, const Matrix& p_block, int m,
                                        const Matrix& second, int good_sign) {
  const Eigen::Index d = p_block.rows();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix p_good = p_block * (id + double(good_sign) * second) / 2.0;
  const Matrix p_bad = p_block * (id - double(good_sign) * second) / 2.0;

  Vector psi_block = p_block * psi;
  const double weight = psi_block.norm();
  if (weight < 1e-10) {
    // stateless block: any orthonormal refinement is optimal
    return range_basis(p_block, m);
  }
  psi_block /= weight;

  Vector ug = p_good * psi_block;
  Vector ub = p_bad * psi_block;
  const double c = ug.norm();
  const double s = ub.norm();
  const int half = m / 2;

  if (s < 1e-9 || c < 1e-9) {
    // the state component already sits in one eigenspace of the second
    // observable: keep it as a basis vector and fill the rest
    std::vector<Vector> basis{psi_block};
    for (Eigen::Index col = 0; col < d && static_cast<int>(basis.size()) < m; ++col) {
      Vector v = p_block * Matrix::Identity(d, d).col(col);
      for (const auto& u : basis) v -= u * u.dot(v);
      double n = v.norm();
      if (n > 1e-9) basis.push_back(v / n);
    }
    return basis;
  }
  ug /= c;
  ub /= s;
  // the two directions are orthogonal up to the pair's commutator residual;
  // make the frame exactly orthonormal so the final basis always validates
  ub -= ug * ug.dot(ub);
  ub.normalize();

  // orthonormal fill of the good subspace beyond ug
  std::vector<Vector> good_fill;
  for (Eigen::Index col = 0; col < d && static_cast<int>(good_fill.size()) < half - 1; ++col) {
    Vector v = p_good * id.col(col);
    v -= ug * ug.dot(v);
    for (const auto& u : good_fill) v -= u * u.dot(v);
    double n = v.norm();
    if (n > 1e-9) good_fill.push_back(v / n);
  }
  std::vector<Vector> bad_fill;
  for (Eigen::Index col = 0; col < d && static_cast<int>(bad_fill.size()) < half - 1; ++col) {
    Vector v = p_bad * id.col(col);
    v -= ug * ug.dot(v);
    v -= ub * ub.dot(v);
    for (const auto& u : good_fill) v -= u * u.dot(v);
    for (const auto& u : bad_fill) v -= u * u.dot(v);
    double n = v.norm();
    if (n > 1e-9) bad_fill.push_back(v / n);
  }
  if (static_cast<int>(good_fill.size()) != half - 1 ||
      static_cast<int>(bad_fill.size()) != half - 1)
    throw Error("aligned partition: eigenspace fill failed");

  // reduced coordinates e_1 = ug, e_2..e_{k-1} = good_fill, e_k = ub
  const int k = half + 1;
  // overlap targets: w_j z_j = s/k with z two-valued; the quadratic in A
  //   K A^2 - A (1 - t + t K^2) + t K = 0,  t = (s/k)^2, K = k-1
  const double t = (s / k) * (s / k);
  const double K = k - 1;
  const double disc = std::pow(1.0 - t + t * K * K, 2) - 4.0 * K * (t * K);
  const double A = ((1.0 - t + t * K * K) - std::sqrt(disc)) / (2.0 * K);
  std::vector<double> z(k), w(k);
  for (int j = 0; j < k - 1; ++j) z[j] = std::sqrt(A);
  z[k - 1] = std::sqrt(1.0 - K * A);
  for (int j = 0; j < k; ++j) w[j] = (s / k) / z[j];
  // x row from w and z; rows (x, fill..., z) form an orthogonal k x k matrix
  std::vector<double> x(k);
  for (int j = 0; j < k; ++j) x[j] = (w[j] - s * z[j]) / c;

  // complete (x, ..., z) to an orthogonal k x k row set with k-2 fill rows
  std::vector<std::vector<double>> rows{x};
  std::vector<std::vector<double>> taken{x, z};
  for (int seed = 0; seed < k && static_cast<int>(taken.size()) < k; ++seed) {
    std::vector<double> v(k, 0.0);
    v[seed] = 1.0;
    for (const auto& u : taken) {
      double dot = 0;
      for (int j = 0; j < k; ++j) dot += u[j] * v[j];
      for (int j = 0; j < k; ++j) v[j] -= dot * u[j];
    }
    double n = 0;
    for (double e : v) n += e * e;
    n = std::sqrt(n);
    if (n > 1e-9) {
      for (double& e : v) e /= n;
      taken.push_back(v);
      rows.push_back(v);
    }
  }
  if (static_cast<int>(rows.size()) != k - 1)
    throw Error("aligned partition: row completion failed");
  rows.push_back(z);

  // embed: basis vector j = sum_i rows[i][j] * e_i
  std::vector<Vector> reduced_frame{ug};
  for (const auto& g : good_fill) reduced_frame.push_back(g);
  reduced_frame.push_back(ub);

  std::vector<Vector> basis;
  for (int j = 0; j < k; ++j) {
    Vector v = Vector::Zero(d);
    for (int i = 0; i < k; ++i) v += rows[i][j] * reduced_frame[i];
    basis.push_back(v);
  }
  for (const auto& b : bad_fill) basis.push_back(b);
  return basis;
}

}  // namespace

ProjectorPartition aligned_partition(const Vector& psi, const DichotomicObservable& first,
                                     const Matrix& second, int favored_sign,
                                     const Tolerances& tol) {
  if (favored_sign != 1 && favored_sign != -1)
    throw PreconditionError("favored sign must be +-1");
  if (max_abs(commutator(first.op, second)) > tol.hermitian)
    throw PreconditionError("sequential pair must commute for the aligned partition");
  if (first.rank_plus != first.rank_minus)
    throw PreconditionError("aligned partition requires balanced degeneracy");
  std::vector<ProjectorBlock> blocks;
  for (int a : {+1, -1}) {
    const Matrix& base = (a > 0) ? first.p_plus : first.p_minus;
    const int m = (a > 0) ? first.rank_plus : first.rank_minus;
    // within the a-eigenspace the profitable second outcome is a*favored
    auto basis = aligned_block_basis(psi, base, m, second, a * favored_sign);
    for (const auto& v : basis) {
      Matrix p = v * v.adjoint();
      blocks.push_back({a, std::move(p), 1});
    }
  }
  return ProjectorPartition(std::move(blocks), first.op, tol);
}

MeasurementScheme MeasurementScheme::dp(const DichotomicObservable& obs) {
  return {Kind::DP, coarse_partition(obs)};
}

MeasurementScheme MeasurementScheme::db(ProjectorPartition partition) {
  return {Kind::DB, std::move(partition)};
}

DensityMatrix dp_channel(const DensityMatrix& state, const DichotomicObservable& obs) {
  if (state.dim() != obs.op.rows()) throw DimensionError("state/observable dimension mismatch");
  const Matrix& r = state.matrix();
  return DensityMatrix::trusted(obs.p_plus * r * obs.p_plus + obs.p_minus * r * obs.p_minus);
}

DensityMatrix db_channel(const DensityMatrix& state, const ProjectorPartition& partition) {
  if (state.dim() != partition.dim()) throw DimensionError("state/partition dimension mismatch");
  const Matrix& r = state.matrix();
  Matrix out = Matrix::Zero(r.rows(), r.cols());
  for (const auto& b : partition.blocks()) out += b.projector * r * b.projector;
  return DensityMatrix::trusted(out);
}

double joint_probability(const DensityMatrix& state, const MeasurementScheme& first, int a,
                         const DichotomicObservable& second, int b, const Tolerances& tol) {
  if (a != 1 && a != -1) throw PreconditionError("first outcome must be +-1");
  if (b != 1 && b != -1) throw PreconditionError("second outcome must be +-1");
  if (state.dim() != second.op.rows() || state.dim() != first.partition.dim())
    throw DimensionError("joint probability dimension mismatch");
  const Eigen::Index d = state.dim();
  const Matrix bb = (Matrix::Identity(d, d) + double(b) * second.op) / 2.0;
  Matrix post = Matrix::Zero(d, d);
  for (const auto& blk : first.partition.blocks()) {
    if (blk.sign != a) continue;
    post += blk.projector * state.matrix() * blk.projector;
  }
  const Complex t = (post * bb).trace();
  const double p = t.real();
  if (p < -tol.psd || p > 1.0 + tol.psd)
    throw Error("joint probability outside [0, 1]: " + std::to_string(p));
  return p;
}

double sequential_correlation(const DensityMatrix& state, const MeasurementScheme& first,
                              const DichotomicObservable& second, const Tolerances& tol) {
  double acc = 0;
  for (int a : {+1, -1})
    for (int b : {+1, -1}) acc += a * b * joint_probability(state, first, a, second, b, tol);
  if (acc < -1.0 - tol.psd || acc > 1.0 + tol.psd)
    throw Error("sequential correlation outside [-1, 1]");
  return acc;
}

double db_dp_cross_term(const DensityMatrix& state, const ProjectorPartition& partition,
                        const DichotomicObservable& second, const Tolerances& tol) {
  if (!partition.rank_one())
    throw PreconditionError("cross term requires a fully rank-1 partition");
  int plus = 0, minus = 0;
  for (const auto& b : partition.blocks()) (b.sign > 0 ? plus : minus)++;
  if (plus != minus)
    throw PreconditionError("cross term requires balanced degeneracy d/2");
  const Eigen::Index d = state.dim();
  Matrix acc = Matrix::Zero(d, d);
  const auto& blocks = partition.blocks();
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      if (i == j || blocks[i].sign != blocks[j].sign) continue;
      acc += double(blocks[i].sign) *
             (blocks[i].projector * state.matrix() * blocks[j].projector);
    }
  const Complex t = (acc * second.op).trace();
  if (std::abs(t.imag()) > tol.imaginary)
    throw Error("cross term has imaginary residue");
  return t.real();
}

}  // namespace ctx
