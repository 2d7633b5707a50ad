#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtc {

using Shape = std::vector<std::size_t>;

/// Number of elements for a shape; throws on empty shapes, zero extents or
/// 64-bit overflow of the product.
std::size_t shape_product(const Shape& shape);

std::string shape_to_string(const Shape& shape);

/// Dense multiway array of doubles. Element (i_0,...,i_{L-1}) lives at flat
/// offset i_0 + i_1*n_0 + i_2*n_0*n_1 + ... (first index fastest). This
/// linearization is fixed for the whole library, including the file format.
class DenseTensor {
public:
    DenseTensor() = default;
    explicit DenseTensor(Shape shape);
    DenseTensor(Shape shape, std::vector<double> data);

    const Shape& shape() const { return shape_; }
    std::size_t order() const { return shape_.size(); }
    std::size_t size() const { return data_.size(); }
    std::size_t extent(std::size_t mode) const { return shape_[mode]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

    double operator[](std::size_t flat) const { return data_[flat]; }
    double& operator[](std::size_t flat) { return data_[flat]; }

    /// Flat offset of a multi-index (bounds unchecked).
    std::size_t offset(const std::vector<std::size_t>& index) const;

    bool same_shape(const DenseTensor& other) const { return shape_ == other.shape_; }

private:
    Shape shape_;
    std::vector<double> data_;
};

/// Observation indicator with the same shape and linearization as the tensor
/// it indexes. 1 = observed, 0 = missing.
class Mask {
public:
    Mask() = default;
    explicit Mask(Shape shape, std::uint8_t fill = 1);
    Mask(Shape shape, std::vector<std::uint8_t> bits);

    const Shape& shape() const { return shape_; }
    std::size_t size() const { return bits_.size(); }

    std::uint8_t operator[](std::size_t flat) const { return bits_[flat]; }
    std::uint8_t& operator[](std::size_t flat) { return bits_[flat]; }

    std::vector<std::uint8_t>& bits() { return bits_; }
    const std::vector<std::uint8_t>& bits() const { return bits_; }

    std::size_t count_observed() const;
    std::size_t count_missing() const { return bits_.size() - count_observed(); }

private:
    Shape shape_;
    std::vector<std::uint8_t> bits_;
};

/// Row-major dense matrix. Also the representation of mode unfoldings:
/// rows index the unfolding mode, columns linearize the remaining modes in
/// ascending order with the lowest remaining mode fastest.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> a);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return a_.size(); }

    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }

    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }
    std::vector<double>& values() { return a_; }
    const std::vector<double>& values() const { return a_; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> a_;
};

/// sqrt of the sum of squared entries.
double frobenius_norm(const DenseTensor& t);
double frobenius_norm(const Matrix& m);

/// Entries of `src` where observed, entries of `dest` where missing.
DenseTensor project_observed(const DenseTensor& dest, const DenseTensor& src, const Mask& w);

}  // namespace mtc
