#include "mtc/tensor.hpp"

#include <cmath>
#include <limits>

#include "mtc/kernels.hpp"

namespace mtc {

std::size_t shape_product(const Shape& shape) {
    if (shape.empty()) {
        throw std::invalid_argument("shape must have at least one extent");
    }
    std::size_t n = 1;
    for (std::size_t e : shape) {
        if (e == 0) {
            throw std::invalid_argument("shape extents must be >= 1");
        }
        if (e > std::numeric_limits<std::size_t>::max() / n) {
            throw std::invalid_argument("shape product overflows 64 bits");
        }
        n *= e;
    }
    return n;
}

std::string shape_to_string(const Shape& shape) {
    std::string s = "(";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(shape[i]);
    }
    return s + ")";
}

DenseTensor::DenseTensor(Shape shape)
    : shape_(std::move(shape)), data_(shape_product(shape_), 0.0) {}

DenseTensor::DenseTensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != shape_product(shape_)) {
        throw std::invalid_argument("data length " + std::to_string(data_.size()) +
                                    " does not match shape " + shape_to_string(shape_));
    }
}

std::size_t DenseTensor::offset(const std::vector<std::size_t>& index) const {
    std::size_t off = 0;
    std::size_t stride = 1;
    for (std::size_t m = 0; m < shape_.size(); ++m) {
        off += index[m] * stride;
        stride *= shape_[m];
    }
    return off;
}

Mask::Mask(Shape shape, std::uint8_t fill)
    : shape_(std::move(shape)), bits_(shape_product(shape_), fill) {}

Mask::Mask(Shape shape, std::vector<std::uint8_t> bits)
    : shape_(std::move(shape)), bits_(std::move(bits)) {
    if (bits_.size() != shape_product(shape_)) {
        throw std::invalid_argument("mask length does not match shape " +
                                    shape_to_string(shape_));
    }
}

std::size_t Mask::count_observed() const {
    std::size_t n = 0;
    for (std::uint8_t b : bits_) n += (b != 0);
    return n;
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> a)
    : rows_(rows), cols_(cols), a_(std::move(a)) {
    if (a_.size() != rows_ * cols_) {
        throw std::invalid_argument("matrix data length does not match rows*cols");
    }
}

double frobenius_norm(const DenseTensor& t) {
    return std::sqrt(kern::sumsq(std::span<const double>(t.values())));
}

double frobenius_norm(const Matrix& m) {
    return std::sqrt(kern::sumsq(std::span<const double>(m.values())));
}

DenseTensor project_observed(const DenseTensor& dest, const DenseTensor& src, const Mask& w) {
    if (!dest.same_shape(src) || dest.shape() != w.shape()) {
        throw std::invalid_argument("project_observed: dest " + shape_to_string(dest.shape()) +
                                    ", src " + shape_to_string(src.shape()) + " and mask " +
                                    shape_to_string(w.shape()) + " must share one shape");
    }
    DenseTensor out = dest;
    kern::apply_observed(out, src, w);
    return out;
}

}  // namespace mtc
