#include "mtc/kernels.hpp"

#include "kernel_checks.hpp"

// Serial reference: the plainest correct loops, no chunking, no tiling.

namespace mtc::ref {

Matrix unfold(const DenseTensor& t, std::size_t mode) {
    const auto g = detail::unfold_geometry(t.shape(), mode);
    Matrix m(g.n_rows, g.n_cols);
    for (std::size_t o = 0; o < g.outer_count; ++o)
        for (std::size_t r = 0; r < g.n_rows; ++r)
            for (std::size_t in = 0; in < g.inner_count; ++in)
                m(r, o * g.inner_count + in) = t[(o * g.n_rows + r) * g.inner_count + in];
    return m;
}

DenseTensor fold(const Matrix& m, std::size_t mode, const Shape& shape) {
    detail::check_fold_dims(m, mode, shape, "fold");
    const auto g = detail::unfold_geometry(shape, mode);
    DenseTensor t(shape);
    for (std::size_t o = 0; o < g.outer_count; ++o)
        for (std::size_t r = 0; r < g.n_rows; ++r)
            for (std::size_t in = 0; in < g.inner_count; ++in)
                t[(o * g.n_rows + r) * g.inner_count + in] = m(r, o * g.inner_count + in);
    return t;
}

void fold_add(DenseTensor& dst, const Matrix& m, std::size_t mode, double alpha) {
    detail::check_fold_dims(m, mode, dst.shape(), "fold_add");
    const auto g = detail::unfold_geometry(dst.shape(), mode);
    for (std::size_t o = 0; o < g.outer_count; ++o)
        for (std::size_t r = 0; r < g.n_rows; ++r)
            for (std::size_t in = 0; in < g.inner_count; ++in)
                dst[(o * g.n_rows + r) * g.inner_count + in] +=
                    alpha * m(r, o * g.inner_count + in);
}

void apply_observed(DenseTensor& dst, const DenseTensor& src, const Mask& w) {
    detail::check_same_shape3(dst, src, w, "apply_observed");
    for (std::size_t i = 0; i < dst.size(); ++i)
        if (w[i]) dst[i] = src[i];
}

Matrix matmul_nn(const Matrix& a, const Matrix& b) {
    detail::check_mul(a.cols(), b.rows(), "matmul_nn");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t t = 0; t < b.cols(); ++t) {
            double acc = 0.0;
            for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * b(j, t);
            c(i, t) = acc;
        }
    return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    detail::check_mul(a.cols(), b.cols(), "matmul_nt");
    Matrix c(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.rows(); ++j) {
            double acc = 0.0;
            for (std::size_t t = 0; t < a.cols(); ++t) acc += a(i, t) * b(j, t);
            c(i, j) = acc;
        }
    return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    detail::check_mul(a.rows(), b.rows(), "matmul_tn");
    Matrix c(a.cols(), b.cols());
    for (std::size_t p = 0; p < a.cols(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q) {
            double acc = 0.0;
            for (std::size_t i = 0; i < a.rows(); ++i) acc += a(i, p) * b(i, q);
            c(p, q) = acc;
        }
    return c;
}

Matrix gram(const Matrix& a) {
    Matrix g(a.cols(), a.cols());
    for (std::size_t p = 0; p < a.cols(); ++p)
        for (std::size_t q = 0; q < a.cols(); ++q) {
            double acc = 0.0;
            for (std::size_t i = 0; i < a.rows(); ++i) acc += a(i, p) * a(i, q);
            g(p, q) = acc;
        }
    return g;
}

void add_scaled(Matrix& acc, const Matrix& x, double alpha) {
    detail::check_same_dims(acc, x, "add_scaled");
    for (std::size_t i = 0; i < acc.size(); ++i) acc.values()[i] += alpha * x.values()[i];
}

double sumsq(std::span<const double> x) {
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return acc;
}

double residual_sumsq(const Matrix& m, const Matrix& u, const Matrix& v) {
    detail::check_mul(m.rows(), u.rows(), "residual_sumsq");
    detail::check_mul(m.cols(), v.rows(), "residual_sumsq");
    detail::check_mul(u.cols(), v.cols(), "residual_sumsq");
    double acc = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            double fit = 0.0;
            for (std::size_t t = 0; t < u.cols(); ++t) fit += u(i, t) * v(j, t);
            const double d = m(i, j) - fit;
            acc += d * d;
        }
    return acc;
}

}  // namespace mtc::ref
