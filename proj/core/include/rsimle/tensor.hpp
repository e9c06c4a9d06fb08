#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace rsimle {

// Dense row-major matrix of doubles.  This is the one value type that flows
// between the network, the samplers and the metrics, so it stays deliberately
// small: storage, element access, row views and a finiteness check.
class Tensor2 {
 public:
  Tensor2() = default;
  Tensor2(std::size_t rows, std::size_t cols, double fill = 0.0);

  static Tensor2 from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r);
  std::span<const double> row(std::size_t r) const;

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }

  bool all_finite() const noexcept;
  // Throws std::runtime_error naming `where` if any entry is NaN or infinite.
  void ensure_finite(const char* where) const;

  bool operator==(const Tensor2& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// New tensor holding the listed rows of `src`, in order (duplicates allowed).
Tensor2 gather_rows(const Tensor2& src, std::span<const std::size_t> indices);

// Squared Euclidean distance between two equal-length vectors.
double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace rsimle
