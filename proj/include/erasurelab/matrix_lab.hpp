#pragma once

// Random matrices, row erasure and extreme singular values.
//
// Rows are always the erasure-bearing dimension: a sample has `rows` rows
// (frame vectors / measurements) and `cols` columns (signal dimension).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <iterator>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "erasurelab/error.hpp"
#include "erasurelab/rng.hpp"
#include "erasurelab/specfun.hpp"

namespace erasurelab {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

enum class Distribution { gaussian, rademacher };

inline std::string_view to_string(Distribution d) noexcept {
  return d == Distribution::gaussian ? "gaussian" : "rademacher";
}

inline Distribution parse_distribution(std::string_view name) {
  if (name == "gaussian" || name == "normal") return Distribution::gaussian;
  if (name == "rademacher" || name == "pm1" || name == "bernoulli") return Distribution::rademacher;
  throw DomainError("unknown distribution '" + std::string(name) + "'");
}

/// A generated matrix together with what produced it. Identical
/// (distribution, rows, cols, seed) always yields identical entries.
struct MatrixSample {
  std::size_t rows = 0;
  std::size_t cols = 0;
  Distribution distribution = Distribution::gaussian;
  std::uint64_t seed = 0;
  Matrix entries;
};

/// Fills a rows x cols matrix in row-major order from `engine`.
inline Matrix fill_matrix(Distribution dist, std::size_t rows, std::size_t cols, rng::Xoshiro256& engine) {
  Matrix a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  double* data = a.data();
  const std::size_t size = rows * cols;
  if (dist == Distribution::gaussian) {
    for (std::size_t i = 0; i < size; ++i) data[i] = engine.normal();
  } else {
    for (std::size_t i = 0; i < size; ++i) data[i] = engine.rademacher();
  }
  return a;
}

inline MatrixSample generate(Distribution dist, std::size_t rows, std::size_t cols, std::uint64_t seed) {
  if (rows == 0 || cols == 0) throw DomainError("generate: rows and cols must be >= 1");
  constexpr auto max_index = static_cast<std::size_t>(std::numeric_limits<Eigen::Index>::max());
  if (rows > max_index / cols) throw DomainError("generate: rows * cols overflows");
  rng::Xoshiro256 engine(seed);
  return {rows, cols, dist, seed, fill_matrix(dist, rows, cols, engine)};
}

/// Rows kept after an erasure, as a strictly increasing index list.
class ErasureSet {
 public:
  ErasureSet() = default;

  static ErasureSet keep_all(std::size_t rows) {
    ErasureSet e;
    e.rows_ = rows;
    e.kept_.resize(rows);
    std::iota(e.kept_.begin(), e.kept_.end(), std::size_t{0});
    return e;
  }

  /// Builds the kept list from erased indices (any order, no duplicates).
  static ErasureSet from_erased(std::size_t rows, std::span<const std::size_t> erased) {
    std::vector<char> gone(rows, 0);
    for (const auto idx : erased) {
      if (idx >= rows) {
        std::ostringstream msg;
        msg << "erasure index " << idx << " out of range for " << rows << " rows";
        throw DomainError(msg.str());
      }
      if (gone[idx]) throw DomainError("duplicate erasure index " + std::to_string(idx));
      gone[idx] = 1;
    }
    ErasureSet e;
    e.rows_ = rows;
    e.kept_.reserve(rows - erased.size());
    for (std::size_t i = 0; i < rows; ++i)
      if (!gone[i]) e.kept_.push_back(i);
    return e;
  }

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] const std::vector<std::size_t>& kept() const noexcept { return kept_; }
  [[nodiscard]] std::size_t erased_count() const noexcept { return rows_ - kept_.size(); }

  [[nodiscard]] std::vector<std::size_t> erased() const {
    std::vector<std::size_t> out;
    out.reserve(erased_count());
    std::size_t next = 0;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (next < kept_.size() && kept_[next] == i) {
        ++next;
      } else {
        out.push_back(i);
      }
    }
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::vector<std::size_t> kept_;
};

/// Copies the kept rows of `a`, preserving their relative order.
template <class Derived>
Matrix keep_rows(const Eigen::MatrixBase<Derived>& a, const ErasureSet& set) {
  Matrix out(static_cast<Eigen::Index>(set.kept().size()), a.cols());
  for (std::size_t i = 0; i < set.kept().size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = a.row(static_cast<Eigen::Index>(set.kept()[i]));
  return out;
}

/// The sample with the rows in `erased` removed (a copy of the kept rows).
inline MatrixSample erase_rows(const MatrixSample& sample, std::span<const std::size_t> erased) {
  const auto set = ErasureSet::from_erased(sample.rows, erased);
  return {set.kept().size(), sample.cols, sample.distribution, sample.seed, keep_rows(sample.entries, set)};
}

struct SingularExtremes {
  double s_min = 0.0;
  double s_max = 0.0;
  double cond = 0.0;  // s_max / s_min, +inf when s_min == 0
};

/// Largest and cols-th singular values of a rows x cols matrix (rows >= cols),
/// from a full bidiagonal divide-and-conquer SVD (values only).
template <class Derived>
SingularExtremes extreme_singular_values(const Eigen::MatrixBase<Derived>& a) {
  if (a.cols() < 1 || a.rows() < a.cols()) {
    std::ostringstream msg;
    msg << "extreme_singular_values: need rows >= cols >= 1, got " << a.rows() << " x " << a.cols();
    throw DomainError(msg.str());
  }
  const Eigen::MatrixXd dense = a;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(dense);
  if (svd.info() != Eigen::Success) throw ConvergenceError("extreme_singular_values: SVD did not converge");
  const auto& sv = svd.singularValues();
  SingularExtremes e;
  e.s_max = sv(0);
  e.s_min = sv(sv.size() - 1);
  e.cond = e.s_min > 0.0 ? e.s_max / e.s_min : std::numeric_limits<double>::infinity();
  return e;
}

inline SingularExtremes extreme_singular_values(const MatrixSample& sample) {
  return extreme_singular_values(sample.entries);
}

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

/// All erase_count-subsets of {0..rows-1} in lexicographic order of the
/// erased indices, each as an ErasureSet.
class ErasureEnumeration {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = ErasureSet;
    using difference_type = std::ptrdiff_t;
    using pointer = const ErasureSet*;
    using reference = const ErasureSet&;

    iterator() = default;
    iterator(std::size_t rows, std::size_t k) : rows_(rows), combo_(k), done_(false) {
      std::iota(combo_.begin(), combo_.end(), std::size_t{0});
      current_ = ErasureSet::from_erased(rows_, combo_);
    }

    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }

    iterator& operator++() {
      const std::size_t k = combo_.size();
      std::size_t i = k;
      while (i > 0 && combo_[i - 1] == rows_ - k + (i - 1)) --i;
      if (i == 0) {
        done_ = true;
        return *this;
      }
      ++combo_[i - 1];
      for (std::size_t j = i; j < k; ++j) combo_[j] = combo_[j - 1] + 1;
      current_ = ErasureSet::from_erased(rows_, combo_);
      return *this;
    }
    void operator++(int) { ++*this; }

    friend bool operator==(const iterator& a, const iterator& b) { return a.done_ == b.done_; }

   private:
    std::size_t rows_ = 0;
    std::vector<std::size_t> combo_;
    ErasureSet current_;
    bool done_ = true;
  };

  ErasureEnumeration(std::size_t rows, std::size_t erase_count) : rows_(rows), k_(erase_count) {}

  [[nodiscard]] iterator begin() const { return iterator(rows_, k_); }
  [[nodiscard]] iterator end() const { return {}; }

 private:
  std::size_t rows_;
  std::size_t k_;
};

/// Lazily enumerates every way to erase `erase_count` of `rows` rows.
/// Throws CapExceededError when C(rows, erase_count) > cap.
inline ErasureEnumeration enumerate_erasures(std::size_t rows, std::size_t erase_count,
                                             std::uint64_t cap = kDefaultEnumerationCap) {
  if (erase_count > rows) throw DomainError("enumerate_erasures: erase_count exceeds rows");
  const double log_count = specfun::log_binomial(rows, erase_count);
  if (log_count > std::log(static_cast<double>(cap)) + 1e-9) {
    std::ostringstream msg;
    msg << "enumerate_erasures: C(" << rows << ", " << erase_count << ") ~ e^" << log_count << " exceeds the cap "
        << cap;
    throw CapExceededError(msg.str());
  }
  return {rows, erase_count};
}

/// Uniformly random erasure of `erase_count` rows (partial Fisher-Yates).
inline ErasureSet random_erasure(std::size_t rows, std::size_t erase_count, rng::Xoshiro256& engine) {
  if (erase_count > rows) throw DomainError("random_erasure: erase_count exceeds rows");
  std::vector<std::size_t> idx(rows);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < erase_count; ++i) {
    const std::size_t j = i + engine.below(rows - i);
    std::swap(idx[i], idx[j]);
  }
  return ErasureSet::from_erased(rows, std::span<const std::size_t>(idx.data(), erase_count));
}

/// Unit vector with exactly `sparsity` nonzeros: support uniform among
/// subsets, values uniform on the unit sphere of that support.
inline Vector sample_sparse_unit_vector(std::size_t dim, std::size_t sparsity, rng::Xoshiro256& engine) {
  if (sparsity == 0 || sparsity > dim) throw DomainError("sample_sparse_unit_vector: need 1 <= sparsity <= dim");
  std::vector<std::size_t> idx(dim);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < sparsity; ++i) std::swap(idx[i], idx[i + engine.below(dim - i)]);
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (std::size_t i = 0; i < sparsity; ++i) {
      const double g = engine.normal();
      v(static_cast<Eigen::Index>(idx[i])) = g;
      norm2 += g * g;
    }
  } while (norm2 == 0.0);
  return v / std::sqrt(norm2);
}

inline Vector sample_sparse_unit_vector(std::size_t dim, std::size_t sparsity, std::uint64_t seed) {
  rng::Xoshiro256 engine(seed);
  return sample_sparse_unit_vector(dim, sparsity, engine);
}

/// Text form: header `rows cols distribution seed`, then one line per row of
/// whitespace-separated decimals (17 significant digits, row-major).
inline void write_matrix_text(std::ostream& os, const MatrixSample& sample) {
  os << sample.rows << ' ' << sample.cols << ' ' << to_string(sample.distribution) << ' ' << sample.seed << '\n';
  os << std::setprecision(17);
  for (Eigen::Index i = 0; i < sample.entries.rows(); ++i) {
    for (Eigen::Index j = 0; j < sample.entries.cols(); ++j) {
      if (j) os << ' ';
      os << sample.entries(i, j);
    }
    os << '\n';
  }
}

inline MatrixSample read_matrix_text(std::istream& is) {
  MatrixSample s;
  std::string dist;
  if (!(is >> s.rows >> s.cols >> dist >> s.seed)) throw DomainError("read_matrix_text: malformed header");
  s.distribution = parse_distribution(dist);
  s.entries.resize(static_cast<Eigen::Index>(s.rows), static_cast<Eigen::Index>(s.cols));
  for (Eigen::Index i = 0; i < s.entries.size(); ++i) {
    if (!(is >> s.entries.data()[i])) throw DomainError("read_matrix_text: truncated entries");
  }
  return s;
}

}  // namespace erasurelab
