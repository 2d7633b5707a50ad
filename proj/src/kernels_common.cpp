#include "mtc/kernels.hpp"

#include "kernel_checks.hpp"

namespace mtc::detail {

UnfoldGeometry unfold_geometry(const Shape& shape, std::size_t mode) {
    check_mode(shape, mode, "unfold");
    UnfoldGeometry g;
    g.n_rows = shape[mode];
    std::size_t inner = 1;
    for (std::size_t m = 0; m < mode; ++m) inner *= shape[m];
    std::size_t outer = 1;
    for (std::size_t m = mode + 1; m < shape.size(); ++m) outer *= shape[m];
    g.inner_count = inner;
    g.outer_count = outer;
    g.n_cols = inner * outer;
    return g;
}

}  // namespace mtc::detail
