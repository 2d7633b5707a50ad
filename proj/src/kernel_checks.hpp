#pragma once

// Shared argument checking for the kern/ref kernel pairs; both flavours must
// reject exactly the same inputs with the same messages.

#include <string>

#include "mtc/tensor.hpp"

namespace mtc::detail {

inline void check_mode(const Shape& shape, std::size_t mode, const char* op) {
    if (mode >= shape.size()) {
        throw std::invalid_argument(std::string(op) + ": mode " + std::to_string(mode) +
                                    " out of range for order " + std::to_string(shape.size()));
    }
}

inline void check_fold_dims(const Matrix& m, std::size_t mode, const Shape& shape,
                            const char* op) {
    check_mode(shape, mode, op);
    const std::size_t total = shape_product(shape);
    if (m.rows() != shape[mode] || m.cols() != total / shape[mode]) {
        throw std::invalid_argument(std::string(op) + ": matrix " + std::to_string(m.rows()) +
                                    "x" + std::to_string(m.cols()) +
                                    " inconsistent with shape " + shape_to_string(shape) +
                                    " at mode " + std::to_string(mode));
    }
}

inline void check_same_shape3(const DenseTensor& dst, const DenseTensor& src, const Mask& w,
                              const char* op) {
    if (!dst.same_shape(src) || dst.shape() != w.shape()) {
        throw std::invalid_argument(std::string(op) + ": tensors " +
                                    shape_to_string(dst.shape()) + ", " +
                                    shape_to_string(src.shape()) + " and mask " +
                                    shape_to_string(w.shape()) + " must share one shape");
    }
}

inline void check_mul(std::size_t a_inner, std::size_t b_inner, const char* op) {
    if (a_inner != b_inner) {
        throw std::invalid_argument(std::string(op) + ": inner dimensions " +
                                    std::to_string(a_inner) + " and " +
                                    std::to_string(b_inner) + " do not match");
    }
}

inline void check_same_dims(const Matrix& a, const Matrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument(std::string(op) + ": shapes " + std::to_string(a.rows()) +
                                    "x" + std::to_string(a.cols()) + " and " +
                                    std::to_string(b.rows()) + "x" + std::to_string(b.cols()) +
                                    " do not match");
    }
}

}  // namespace mtc::detail
