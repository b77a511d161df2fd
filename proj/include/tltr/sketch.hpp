#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "tltr/objective.hpp"

namespace tltr {

using Matrix = Eigen::MatrixXd;
using Rng = std::mt19937_64;

/// Independent generator for (root seed, stream, index). Runs derive every
/// random draw from one root seed through these substreams, so a draw does
/// not depend on how many numbers earlier draws consumed.
Rng substream(std::uint64_t root_seed, std::uint64_t stream, std::uint64_t index);

enum class SketchKind {
  Gaussian,    // dense, entries N(0, 1/ell)
  SHashing,    // s entries of +-1/sqrt(s) per column, distinct rows
  Coordinate,  // ell distinct unit rows e_i, sorted; ell == n gives the identity
  Explicit,    // user supplied matrix
};

std::string to_string(SketchKind kind);
SketchKind sketch_kind_from_string(const std::string& name);

/// Random restriction operator S in R^{ell x n}. Dense kinds are stored
/// row-major, the sparse kinds column-major so that S v costs O(nnz).
class SketchOperator {
 public:
  static SketchOperator from_dense(const Matrix& s, SketchKind kind = SketchKind::Explicit);
  static SketchOperator from_sparse(Eigen::SparseMatrix<double> s,
                                    SketchKind kind = SketchKind::Explicit);

  SketchKind kind() const { return kind_; }
  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  bool is_sparse() const { return sparse_storage_; }

  Vector apply(const Vector& v) const;
  Vector apply_transpose(const Vector& u) const;
  /// S^T e_j, the j-th subspace direction expressed in full space.
  Vector row(Eigen::Index j) const;

  Matrix to_dense() const;
  /// Exact text form of the stored entries; equal operators serialize equally.
  std::string serialize() const;

  const Eigen::SparseMatrix<double>& sparse() const { return sparse_; }

 private:
  SketchOperator() = default;

  SketchKind kind_ = SketchKind::Explicit;
  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
  bool sparse_storage_ = false;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> dense_;
  Eigen::SparseMatrix<double> sparse_;
};

SketchOperator gaussian_sketch(Eigen::Index ell, Eigen::Index n, Rng& rng);
SketchOperator shash_sketch(Eigen::Index ell, Eigen::Index n, Eigen::Index s, Rng& rng);
SketchOperator coordinate_sketch(Eigen::Index ell, Eigen::Index n, Rng& rng);
/// Fixed coordinate selection: row r of S is e_{indices[r]}.
SketchOperator coordinate_sketch(const std::vector<Eigen::Index>& indices, Eigen::Index n);

/// Nonzeros per column used when none is configured: max(1, ceil(ell / 10)).
Eigen::Index default_hash_nonzeros(Eigen::Index ell);

/// S g.
Vector sketch_gradient(const SketchOperator& s, const Vector& g);

/// S H(x) S^T assembled column by column with exactly ell Hessian-vector
/// products, before symmetrization.
Matrix sketch_hessian_raw(const SketchOperator& s, const Objective& obj, const Vector& x);
/// (M + M^T) / 2 of sketch_hessian_raw.
Matrix sketch_hessian(const SketchOperator& s, const Objective& obj, const Vector& x);

/// Produces the sketch for iteration k. Solvers only see this interface.
using SketchSource = std::function<SketchOperator(std::uint64_t iteration)>;

struct SketchSpec {
  SketchKind kind = SketchKind::Gaussian;
  Eigen::Index ell = 1;
  Eigen::Index s = 0;  // 0 selects default_hash_nonzeros(ell)
};

/// Draws sketch k from substream(seed, sketch stream, k).
SketchSource make_sketch_source(const SketchSpec& spec, Eigen::Index n, std::uint64_t seed);

}  // namespace tltr
