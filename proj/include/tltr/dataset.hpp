#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace tltr {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Raised by the LIBSVM reader; carries the 1-based line number of the
/// offending record.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Binary classification data: sample i is row i of `features` with label
/// `labels[i]`. Rows hold 0-based feature indices in strictly increasing
/// order. Immutable once built.
class Dataset {
 public:
  Dataset() = default;
  Dataset(SparseRowMatrix features, Vector labels);

  Eigen::Index n_samples() const { return features_.rows(); }
  Eigen::Index n_features() const { return features_.cols(); }
  Eigen::Index nnz() const { return features_.nonZeros(); }

  const SparseRowMatrix& features() const { return features_; }
  const Vector& labels() const { return labels_; }

  Dataset with_labels(Vector labels) const;

  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  SparseRowMatrix features_;
  Vector labels_;
};

enum class LabelConvention { PlusMinusOne, ZeroOne };

/// Reads `label idx:val idx:val ...` records with 1-based, strictly
/// increasing indices. Blank lines are skipped. When `n_features` is given
/// it must be at least the largest index seen.
Dataset parse_libsvm(std::istream& in,
                     std::optional<Eigen::Index> n_features = std::nullopt);
Dataset parse_libsvm(std::string_view text,
                     std::optional<Eigen::Index> n_features = std::nullopt);
Dataset load_libsvm(const std::string& path,
                    std::optional<Eigen::Index> n_features = std::nullopt);

/// Shortest round-trip text for every value, so parse(to_libsvm(d)) == d
/// whenever the last feature column carries at least one entry.
std::string to_libsvm(const Dataset& d);

/// Order-preserving relabelling of a two-class dataset: the smaller raw label
/// goes to -1 (or 0), the larger to +1 (or 1).
Dataset map_labels(const Dataset& d, LabelConvention convention);

struct DatasetStats {
  Eigen::Index n_samples = 0;
  Eigen::Index n_features = 0;
  Eigen::Index nnz = 0;
  std::map<double, std::size_t> label_counts;
};

DatasetStats dataset_stats(const Dataset& d);

}  // namespace tltr
