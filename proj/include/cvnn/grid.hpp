#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cvnn {

/// Dense row-major matrix. Index arithmetic lives here so that call sites can
/// stay free of raw multiplications.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] std::size_t size() const { return data_.size(); }

  [[nodiscard]] T& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  [[nodiscard]] const T& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  [[nodiscard]] std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  [[nodiscard]] std::span<const T> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  [[nodiscard]] std::vector<T>& data() { return data_; }
  [[nodiscard]] const std::vector<T>& data() const { return data_; }

  bool operator==(const Grid&) const = default;

 private:
  std::size_t rows_{0};
  std::size_t cols_{0};
  std::vector<T> data_{};
};

}  // namespace cvnn
