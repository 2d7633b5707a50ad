#pragma once

#include <span>

#include "mtc/tensor.hpp"

// Compute kernels in two flavours with identical signatures:
//
//   mtc::kern  - OpenMP-parallel production kernels
//   mtc::ref   - straightforward serial loops, kept as the reference the
//                parallel kernels are tested and benchmarked against
//
// Parallel kernels assign every output element to exactly one thread and run
// each element's inner accumulation in a fixed ascending order, so results do
// not depend on thread count or scheduling. The two reductions (sumsq,
// residual_sumsq) combine fixed-size partial sums in a fixed order; they are
// likewise thread-count independent but round differently from the linear
// reference accumulation, so tests compare them at 1e-13 relative.

namespace mtc::detail {

/// Loop geometry of a mode-n unfolding under the first-index-fastest
/// linearization: flat = inner + r*inner_count + outer*inner_count*n_mode,
/// column = inner + outer*inner_count.
struct UnfoldGeometry {
    std::size_t n_rows;        // extent of the unfolding mode
    std::size_t n_cols;        // product of the remaining extents
    std::size_t inner_count;   // product of extents below the mode
    std::size_t outer_count;   // product of extents above the mode
};

UnfoldGeometry unfold_geometry(const Shape& shape, std::size_t mode);

}  // namespace mtc::detail

#define MTC_DECLARE_KERNELS                                                              \
    /* Mode-n unfolding; rows = mode coordinate, columns = remaining coordinates */      \
    Matrix unfold(const DenseTensor& t, std::size_t mode);                               \
    /* Exact inverse of unfold for the given shape */                                    \
    DenseTensor fold(const Matrix& m, std::size_t mode, const Shape& shape);             \
    /* dst += alpha * fold(m, mode) */                                                   \
    void fold_add(DenseTensor& dst, const Matrix& m, std::size_t mode, double alpha);    \
    /* dst[i] = src[i] wherever w[i] == 1 */                                             \
    void apply_observed(DenseTensor& dst, const DenseTensor& src, const Mask& w);        \
    Matrix matmul_nn(const Matrix& a, const Matrix& b); /* A * B   */                    \
    Matrix matmul_nt(const Matrix& a, const Matrix& b); /* A * B^T */                    \
    Matrix matmul_tn(const Matrix& a, const Matrix& b); /* A^T * B */                    \
    Matrix gram(const Matrix& a);                       /* A^T * A */                    \
    /* acc += alpha * x (entrywise) */                                                   \
    void add_scaled(Matrix& acc, const Matrix& x, double alpha);                         \
    double sumsq(std::span<const double> x);                                             \
    /* || m - u * v^T ||_F^2 without materializing u * v^T */                            \
    double residual_sumsq(const Matrix& m, const Matrix& u, const Matrix& v);

namespace mtc::kern {
MTC_DECLARE_KERNELS
}

namespace mtc::ref {
MTC_DECLARE_KERNELS
}

#undef MTC_DECLARE_KERNELS
