#include "mtc/kernels.hpp"

#include "kernel_checks.hpp"

// Parallelization contract: one thread owns one output element (or one
// disjoint run of them), inner accumulations run in fixed ascending order,
// reductions combine fixed-size chunk partials serially. Results are bitwise
// independent of OMP_NUM_THREADS.

namespace mtc::kern {

namespace {
constexpr std::size_t kGrain = 1 << 14;     // below this, skip the parallel region
constexpr std::size_t kSumChunk = 1 << 12;  // fixed reduction chunk, entries
}  // namespace

Matrix unfold(const DenseTensor& t, std::size_t mode) {
    const auto g = detail::unfold_geometry(t.shape(), mode);
    Matrix m(g.n_rows, g.n_cols);
    const double* src = t.data();
    double* dst = m.data();
    const std::size_t runs = g.outer_count * g.n_rows;
    const bool par = t.size() >= kGrain;
#pragma omp parallel for schedule(static) if (par)
    for (std::size_t q = 0; q < runs; ++q) {
        const std::size_t o = q / g.n_rows;
        const std::size_t r = q % g.n_rows;
        const double* s = src + (o * g.n_rows + r) * g.inner_count;
        double* d = dst + r * g.n_cols + o * g.inner_count;
        for (std::size_t in = 0; in < g.inner_count; ++in) d[in] = s[in];
    }
    return m;
}

DenseTensor fold(const Matrix& m, std::size_t mode, const Shape& shape) {
    detail::check_fold_dims(m, mode, shape, "fold");
    const auto g = detail::unfold_geometry(shape, mode);
    DenseTensor t(shape);
    const double* src = m.data();
    double* dst = t.data();
    const std::size_t runs = g.outer_count * g.n_rows;
    const bool par = t.size() >= kGrain;
#pragma omp parallel for schedule(static) if (par)
    for (std::size_t q = 0; q < runs; ++q) {
        const std::size_t o = q / g.n_rows;
        const std::size_t r = q % g.n_rows;
        const double* s = src + r * g.n_cols + o * g.inner_count;
        double* d = dst + (o * g.n_rows + r) * g.inner_count;
        for (std::size_t in = 0; in < g.inner_count; ++in) d[in] = s[in];
    }
    return t;
}

void fold_add(DenseTensor& dst, const Matrix& m, std::size_t mode, double alpha) {
    detail::check_fold_dims(m, mode, dst.shape(), "fold_add");
    const auto g = detail::unfold_geometry(dst.shape(), mode);
    const double* src = m.data();
    double* out = dst.data();
    const std::size_t runs = g.outer_count * g.n_rows;
    const bool par = dst.size() >= kGrain;
#pragma omp parallel for schedule(static) if (par)
    for (std::size_t q = 0; q < runs; ++q) {
        const std::size_t o = q / g.n_rows;
        const std::size_t r = q % g.n_rows;
        const double* s = src + r * g.n_cols + o * g.inner_count;
        double* d = out + (o * g.n_rows + r) * g.inner_count;
        for (std::size_t in = 0; in < g.inner_count; ++in) d[in] += alpha * s[in];
    }
}

void apply_observed(DenseTensor& dst, const DenseTensor& src, const Mask& w) {
    detail::check_same_shape3(dst, src, w, "apply_observed");
    const std::size_t n = dst.size();
    double* d = dst.data();
    const double* s = src.data();
    const std::uint8_t* b = w.bits().data();
    const bool par = n >= kGrain;
#pragma omp parallel for schedule(static) if (par)
    for (std::size_t i = 0; i < n; ++i) {
        if (b[i]) d[i] = s[i];
    }
}

Matrix matmul_nn(const Matrix& a, const Matrix& b) {
    detail::check_mul(a.cols(), b.rows(), "matmul_nn");
    Matrix c(a.rows(), b.cols());
    const std::size_t k = a.cols(), n = b.cols();
    const bool par = a.rows() * k * n >= kGrain;
#pragma omp parallel for schedule(static) if (par)
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* crow = c.data() + i * n;
        for (std::size_t j = 0; j < k; ++j) {
            const double aij = a(i, j);
            const double* brow = b.data() + j * n;
            for (std::size_t t = 0; t < n; ++t) crow[t] += aij * brow[t];
        }
    }
    return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    detail::check_mul(a.cols(), b.cols(), "matmul_nt");
    Matrix c(a.rows(), b.rows());
    const std::size_t r = a.cols(), n = b.rows();
    const bool par = a.rows() * r * n >= kGrain;
#pragma omp parallel for schedule(static) if (par)
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* arow = a.data() + i * r;
        double* crow = c.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            const double* brow = b.data() + j * r;
            double acc = 0.0;
            for (std::size_t t = 0; t < r; ++t) acc += arow[t] * brow[t];
            crow[j] = acc;
        }
    }
    return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    detail::check_mul(a.rows(), b.rows(), "matmul_tn");
    Matrix c(a.cols(), b.cols());
    const std::size_t m = a.rows(), s = b.cols();
    const bool par = a.cols() * m * s >= kGrain;
#pragma omp parallel for schedule(static) if (par)
    for (std::size_t p = 0; p < a.cols(); ++p) {
        double* crow = c.data() + p * s;
        for (std::size_t i = 0; i < m; ++i) {
            const double aip = a(i, p);
            const double* brow = b.data() + i * s;
            for (std::size_t q = 0; q < s; ++q) crow[q] += aip * brow[q];
        }
    }
    return c;
}

Matrix gram(const Matrix& a) {
    const std::size_t m = a.rows(), r = a.cols();
    Matrix g(r, r);
    const bool par = m * r * r >= kGrain;
#pragma omp parallel for schedule(static) if (par)
    for (std::size_t p = 0; p < r; ++p) {
        for (std::size_t q = p; q < r; ++q) {
            double acc = 0.0;
            for (std::size_t i = 0; i < m; ++i) acc += a(i, p) * a(i, q);
            g(p, q) = acc;
            g(q, p) = acc;
        }
    }
    return g;
}

void add_scaled(Matrix& acc, const Matrix& x, double alpha) {
    detail::check_same_dims(acc, x, "add_scaled");
    const std::size_t n = acc.size();
    double* d = acc.data();
    const double* s = x.data();
    const bool par = n >= kGrain;
#pragma omp parallel for schedule(static) if (par)
    for (std::size_t i = 0; i < n; ++i) d[i] += alpha * s[i];
}

double sumsq(std::span<const double> x) {
    const std::size_t n = x.size();
    const std::size_t nchunks = (n + kSumChunk - 1) / kSumChunk;
    if (nchunks <= 1) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
        return acc;
    }
    std::vector<double> partial(nchunks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::size_t c = 0; c < nchunks; ++c) {
        const std::size_t lo = c * kSumChunk;
        const std::size_t hi = lo + kSumChunk < n ? lo + kSumChunk : n;
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += x[i] * x[i];
        partial[c] = acc;
    }
    double total = 0.0;
    for (std::size_t c = 0; c < nchunks; ++c) total += partial[c];
    return total;
}

double residual_sumsq(const Matrix& m, const Matrix& u, const Matrix& v) {
    detail::check_mul(m.rows(), u.rows(), "residual_sumsq");
    detail::check_mul(m.cols(), v.rows(), "residual_sumsq");
    detail::check_mul(u.cols(), v.cols(), "residual_sumsq");
    const std::size_t rows = m.rows(), cols = m.cols(), r = u.cols();
    std::vector<double> partial(rows, 0.0);
    const bool par = rows * cols * (r + 1) >= kGrain;
#pragma omp parallel for schedule(static) if (par)
    for (std::size_t i = 0; i < rows; ++i) {
        const double* urow = u.data() + i * r;
        const double* mrow = m.data() + i * cols;
        double acc = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
            const double* vrow = v.data() + j * r;
            double fit = 0.0;
            for (std::size_t t = 0; t < r; ++t) fit += urow[t] * vrow[t];
            const double d = mrow[j] - fit;
            acc += d * d;
        }
        partial[i] = acc;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < rows; ++i) total += partial[i];
    return total;
}

}  // namespace mtc::kern
