#include "rsimle/tensor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rsimle {

Tensor2::Tensor2(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if ((rows == 0) != (cols == 0)) {
    throw std::invalid_argument("Tensor2: rows and cols must be zero together or both positive");
  }
}

Tensor2 Tensor2::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  Tensor2 out;
  out.rows_ = rows.size();
  out.cols_ = rows.size() == 0 ? 0 : rows.begin()->size();
  out.data_.reserve(out.rows_ * out.cols_);
  for (const auto& r : rows) {
    if (r.size() != out.cols_) {
      throw std::invalid_argument("Tensor2::from_rows: ragged initializer");
    }
    out.data_.insert(out.data_.end(), r.begin(), r.end());
  }
  return out;
}

std::span<double> Tensor2::row(std::size_t r) {
  if (r >= rows_) throw std::out_of_range("Tensor2::row: index " + std::to_string(r));
  return {data_.data() + r * cols_, cols_};
}

std::span<const double> Tensor2::row(std::size_t r) const {
  if (r >= rows_) throw std::out_of_range("Tensor2::row: index " + std::to_string(r));
  return {data_.data() + r * cols_, cols_};
}

bool Tensor2::all_finite() const noexcept {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void Tensor2::ensure_finite(const char* where) const {
  if (!all_finite()) {
    throw std::runtime_error(std::string(where) + ": tensor contains NaN or infinite entries");
  }
}

Tensor2 gather_rows(const Tensor2& src, std::span<const std::size_t> indices) {
  Tensor2 out(indices.size(), indices.empty() ? 0 : src.cols());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= src.rows()) {
      throw std::out_of_range("gather_rows: index " + std::to_string(indices[k]));
    }
    auto dst = out.row(k);
    auto s = src.row(indices[k]);
    for (std::size_t c = 0; c < s.size(); ++c) dst[c] = s[c];
  }
  return out;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("squared_distance: dimension mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

}  // namespace rsimle
