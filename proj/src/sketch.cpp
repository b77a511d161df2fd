#include "tltr/sketch.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace tltr {

namespace {
constexpr std::uint64_t kSketchStream = 0x736b657463680001ULL;
}

Rng substream(std::uint64_t root_seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(root_seed), static_cast<std::uint32_t>(root_seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

std::string to_string(SketchKind kind) {
  switch (kind) {
    case SketchKind::Gaussian: return "gaussian";
    case SketchKind::SHashing: return "shash";
    case SketchKind::Coordinate: return "coordinate";
    case SketchKind::Explicit: return "explicit";
  }
  return "unknown";
}

SketchKind sketch_kind_from_string(const std::string& name) {
  if (name == "gaussian") return SketchKind::Gaussian;
  if (name == "shash") return SketchKind::SHashing;
  if (name == "coordinate") return SketchKind::Coordinate;
  throw std::invalid_argument("unknown sketch kind '" + name + "'");
}

SketchOperator SketchOperator::from_dense(const Matrix& s, SketchKind kind) {
  if (s.rows() < 1 || s.cols() < 1) throw std::invalid_argument("sketch: empty matrix");
  SketchOperator op;
  op.kind_ = kind;
  op.rows_ = s.rows();
  op.cols_ = s.cols();
  op.dense_ = s;
  return op;
}

SketchOperator SketchOperator::from_sparse(Eigen::SparseMatrix<double> s, SketchKind kind) {
  if (s.rows() < 1 || s.cols() < 1) throw std::invalid_argument("sketch: empty matrix");
  SketchOperator op;
  op.kind_ = kind;
  op.rows_ = s.rows();
  op.cols_ = s.cols();
  op.sparse_storage_ = true;
  s.makeCompressed();
  op.sparse_ = std::move(s);
  return op;
}

Vector SketchOperator::apply(const Vector& v) const {
  if (v.size() != cols_) throw std::invalid_argument("sketch apply: dimension mismatch");
  if (sparse_storage_) return sparse_ * v;
  return dense_ * v;
}

Vector SketchOperator::apply_transpose(const Vector& u) const {
  if (u.size() != rows_) throw std::invalid_argument("sketch apply_transpose: dimension mismatch");
  if (sparse_storage_) return sparse_.transpose() * u;
  return dense_.transpose() * u;
}

Vector SketchOperator::row(Eigen::Index j) const {
  if (j < 0 || j >= rows_) throw std::out_of_range("sketch row index");
  if (!sparse_storage_) return dense_.row(j).transpose();
  return sparse_.row(j).transpose();
}

Matrix SketchOperator::to_dense() const {
  if (sparse_storage_) return Matrix(sparse_);
  return dense_;
}

std::string SketchOperator::serialize() const {
  std::string out = to_string(kind_) + ' ' + std::to_string(rows_) + 'x' + std::to_string(cols_);
  char buf[64];
  auto put = [&](Eigen::Index r, Eigen::Index c, double v) {
    out += ' ';
    out += std::to_string(r);
    out += ',';
    out += std::to_string(c);
    out += '=';
    out.append(buf, std::to_chars(buf, buf + sizeof(buf), v).ptr);
  };
  if (sparse_storage_) {
    for (Eigen::Index c = 0; c < sparse_.outerSize(); ++c) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(sparse_, c); it; ++it) put(it.row(), c, it.value());
    }
  } else {
    for (Eigen::Index r = 0; r < rows_; ++r) {
      for (Eigen::Index c = 0; c < cols_; ++c) put(r, c, dense_(r, c));
    }
  }
  return out;
}

namespace {

void check_shape(Eigen::Index ell, Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("sketch: n must be >= 1");
  if (ell < 1 || ell > n) {
    throw std::invalid_argument("sketch: need 1 <= ell <= n (ell=" + std::to_string(ell) +
                                ", n=" + std::to_string(n) + ")");
  }
}

// Floyd's algorithm: `count` distinct values from [0, range), returned sorted.
std::vector<Eigen::Index> sample_distinct(Eigen::Index count, Eigen::Index range, Rng& rng) {
  std::vector<Eigen::Index> chosen;
  chosen.reserve(static_cast<std::size_t>(count));
  for (Eigen::Index j = range - count; j < range; ++j) {
    std::uniform_int_distribution<Eigen::Index> pick(0, j);
    const Eigen::Index t = pick(rng);
    if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) {
      chosen.push_back(t);
    } else {
      chosen.push_back(j);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace

SketchOperator gaussian_sketch(Eigen::Index ell, Eigen::Index n, Rng& rng) {
  check_shape(ell, n);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(ell)));
  Matrix s(ell, n);
  for (Eigen::Index r = 0; r < ell; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) s(r, c) = normal(rng);
  }
  return SketchOperator::from_dense(s, SketchKind::Gaussian);
}

// ell > n is allowed here; the solvers reject it via make_sketch_source.
SketchOperator shash_sketch(Eigen::Index ell, Eigen::Index n, Eigen::Index s, Rng& rng) {
  if (n < 1 || ell < 1) throw std::invalid_argument("sketch: ell and n must be >= 1");
  if (s < 1 || s > ell) {
    throw std::invalid_argument("s-hashing: need 1 <= s <= ell (s=" + std::to_string(s) +
                                ", ell=" + std::to_string(ell) + ")");
  }
  const double magnitude = 1.0 / std::sqrt(static_cast<double>(s));
  std::bernoulli_distribution coin(0.5);
  Eigen::SparseMatrix<double> m(ell, n);
  m.reserve(Eigen::VectorXi::Constant(n, static_cast<int>(s)));
  for (Eigen::Index c = 0; c < n; ++c) {
    for (const Eigen::Index r : sample_distinct(s, ell, rng)) {
      m.insert(r, c) = coin(rng) ? magnitude : -magnitude;
    }
  }
  return SketchOperator::from_sparse(std::move(m), SketchKind::SHashing);
}

SketchOperator coordinate_sketch(Eigen::Index ell, Eigen::Index n, Rng& rng) {
  check_shape(ell, n);
  return coordinate_sketch(sample_distinct(ell, n, rng), n);
}

SketchOperator coordinate_sketch(const std::vector<Eigen::Index>& indices, Eigen::Index n) {
  check_shape(static_cast<Eigen::Index>(indices.size()), n);
  Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(indices.size()), n);
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] < 0 || indices[r] >= n) throw std::out_of_range("coordinate sketch index");
    t.emplace_back(static_cast<Eigen::Index>(r), indices[r], 1.0);
  }
  m.setFromTriplets(t.begin(), t.end());
  return SketchOperator::from_sparse(std::move(m), SketchKind::Coordinate);
}

Eigen::Index default_hash_nonzeros(Eigen::Index ell) {
  return std::max<Eigen::Index>(1, (ell + 9) / 10);
}

Vector sketch_gradient(const SketchOperator& s, const Vector& g) { return s.apply(g); }

Matrix sketch_hessian_raw(const SketchOperator& s, const Objective& obj, const Vector& x) {
  if (s.cols() != obj.dimension() || x.size() != obj.dimension()) {
    throw std::invalid_argument("sketch_hessian: dimension mismatch");
  }
  Matrix m(s.rows(), s.rows());
  for (Eigen::Index j = 0; j < s.rows(); ++j) {
    m.col(j) = s.apply(obj.hess_vec(x, s.row(j)));
  }
  return m;
}

Matrix sketch_hessian(const SketchOperator& s, const Objective& obj, const Vector& x) {
  const Matrix m = sketch_hessian_raw(s, obj, x);
  return 0.5 * (m + m.transpose());
}

SketchSource make_sketch_source(const SketchSpec& spec, Eigen::Index n, std::uint64_t seed) {
  check_shape(spec.ell, n);
  const Eigen::Index nonzeros = spec.s > 0 ? spec.s : default_hash_nonzeros(spec.ell);
  if (spec.kind == SketchKind::SHashing && nonzeros > spec.ell) {
    throw std::invalid_argument("s-hashing: s=" + std::to_string(nonzeros) +
                                " exceeds ell=" + std::to_string(spec.ell));
  }
  if (spec.kind == SketchKind::Explicit) {
    throw std::invalid_argument("sketch source: explicit sketches need a custom SketchSource");
  }
  return [spec, n, seed, nonzeros](std::uint64_t k) {
    Rng rng = substream(seed, kSketchStream, k);
    switch (spec.kind) {
      case SketchKind::Gaussian: return gaussian_sketch(spec.ell, n, rng);
      case SketchKind::SHashing: return shash_sketch(spec.ell, n, nonzeros, rng);
      case SketchKind::Coordinate: return coordinate_sketch(spec.ell, n, rng);
      case SketchKind::Explicit: break;
    }
    throw std::logic_error("unreachable sketch kind");
  };
}

}  // namespace tltr
