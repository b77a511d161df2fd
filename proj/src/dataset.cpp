#include "tltr/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace tltr {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

Dataset::Dataset(SparseRowMatrix features, Vector labels)
    : features_(std::move(features)), labels_(std::move(labels)) {
  if (features_.rows() != labels_.size()) {
    throw std::invalid_argument("dataset: label count does not match sample count");
  }
  features_.makeCompressed();
}

Dataset Dataset::with_labels(Vector labels) const { return Dataset(features_, std::move(labels)); }

bool operator==(const Dataset& a, const Dataset& b) {
  if (a.n_samples() != b.n_samples() || a.n_features() != b.n_features() || a.nnz() != b.nnz()) {
    return false;
  }
  if (a.labels_ != b.labels_) return false;
  for (Eigen::Index i = 0; i < a.n_samples(); ++i) {
    SparseRowMatrix::InnerIterator ia(a.features_, i);
    SparseRowMatrix::InnerIterator ib(b.features_, i);
    for (; ia && ib; ++ia, ++ib) {
      if (ia.col() != ib.col() || ia.value() != ib.value()) return false;
    }
    if (ia || ib) return false;
  }
  return true;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view tok, double& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  if (tok.empty()) return false;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

bool parse_index(std::string_view tok, long long& out) {
  if (tok.empty()) return false;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

}  // namespace

Dataset parse_libsvm(std::istream& in, std::optional<Eigen::Index> n_features) {
  std::vector<Eigen::Triplet<double>> entries;
  std::vector<double> labels;
  long long max_index = 0;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) continue;

    const auto row = static_cast<Eigen::Index>(labels.size());
    std::size_t pos = 0;
    bool first = true;
    long long prev_index = 0;
    while (pos < line.size()) {
      const auto end = std::min(line.find_first_of(" \t", pos), line.size());
      const std::string_view tok = line.substr(pos, end - pos);
      pos = line.find_first_not_of(" \t", end);
      if (pos == std::string_view::npos) pos = line.size();

      if (first) {
        double label = 0.0;
        if (!parse_double(tok, label)) {
          throw ParseError(line_no, "malformed label '" + std::string(tok) + "'");
        }
        labels.push_back(label);
        first = false;
        continue;
      }

      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(line_no, "expected idx:val, got '" + std::string(tok) + "'");
      }
      long long index = 0;
      double value = 0.0;
      if (!parse_index(tok.substr(0, colon), index) || index < 1) {
        throw ParseError(line_no, "malformed feature index in '" + std::string(tok) + "'");
      }
      if (!parse_double(tok.substr(colon + 1), value)) {
        throw ParseError(line_no, "malformed feature value in '" + std::string(tok) + "'");
      }
      if (index <= prev_index) {
        throw ParseError(line_no, "feature indices must be strictly increasing (" +
                                      std::to_string(index) + " after " +
                                      std::to_string(prev_index) + ")");
      }
      prev_index = index;
      max_index = std::max(max_index, index);
      entries.emplace_back(row, static_cast<Eigen::Index>(index - 1), value);
    }
  }

  Eigen::Index cols = static_cast<Eigen::Index>(max_index);
  if (n_features) {
    if (*n_features < max_index) {
      throw std::invalid_argument("dataset: feature index " + std::to_string(max_index) +
                                  " exceeds requested feature count " +
                                  std::to_string(*n_features));
    }
    cols = *n_features;
  }

  SparseRowMatrix features(static_cast<Eigen::Index>(labels.size()), cols);
  features.setFromTriplets(entries.begin(), entries.end());
  return Dataset(std::move(features), Eigen::Map<Vector>(labels.data(), labels.size()));
}

Dataset parse_libsvm(std::string_view text, std::optional<Eigen::Index> n_features) {
  std::istringstream in{std::string(text)};
  return parse_libsvm(in, n_features);
}

Dataset load_libsvm(const std::string& path, std::optional<Eigen::Index> n_features) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset '" + path + "'");
  return parse_libsvm(in, n_features);
}

namespace {

void append_number(std::string& out, double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

}  // namespace

std::string to_libsvm(const Dataset& d) {
  std::string out;
  const auto& z = d.features();
  for (Eigen::Index i = 0; i < d.n_samples(); ++i) {
    append_number(out, d.labels()[i]);
    for (SparseRowMatrix::InnerIterator it(z, i); it; ++it) {
      out += ' ';
      out += std::to_string(it.col() + 1);
      out += ':';
      append_number(out, it.value());
    }
    out += '\n';
  }
  return out;
}

Dataset map_labels(const Dataset& d, LabelConvention convention) {
  const Vector& raw = d.labels();
  std::set<double> distinct(raw.data(), raw.data() + raw.size());
  if (distinct.size() != 2) {
    throw std::invalid_argument("map_labels: expected exactly two distinct labels, found " +
                                std::to_string(distinct.size()));
  }
  const double low = *distinct.begin();
  const double low_target = convention == LabelConvention::PlusMinusOne ? -1.0 : 0.0;
  Vector mapped = raw.unaryExpr([&](double y) { return y == low ? low_target : 1.0; });
  return d.with_labels(std::move(mapped));
}

DatasetStats dataset_stats(const Dataset& d) {
  DatasetStats s;
  s.n_samples = d.n_samples();
  s.n_features = d.n_features();
  s.nnz = d.nnz();
  for (Eigen::Index i = 0; i < d.labels().size(); ++i) ++s.label_counts[d.labels()[i]];
  return s;
}

}  // namespace tltr
