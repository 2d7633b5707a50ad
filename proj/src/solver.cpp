#include "mtc/solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "mtc/kernels.hpp"
#include "mtc/rng.hpp"

namespace mtc {

namespace {

using RowMajorMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

/// X with X * S = N for symmetric positive-definite S.
Matrix solve_spd_rhs(const Matrix& s, const Matrix& n) {
    const Eigen::Index r = static_cast<Eigen::Index>(s.rows());
    RowMajorMap es(s.data(), r, r);
    RowMajorMap en(n.data(), static_cast<Eigen::Index>(n.rows()), r);
    Eigen::LLT<Eigen::MatrixXd> llt(es);
    const Eigen::MatrixXd xt = llt.solve(en.transpose());
    Matrix out(n.rows(), s.rows());
    for (std::size_t i = 0; i < out.rows(); ++i)
        for (std::size_t j = 0; j < out.cols(); ++j)
            out(i, j) = xt(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
    return out;
}

void scale_in_place(Matrix& m, double f) {
    for (double& v : m.values()) v *= f;
}

void add_diagonal(Matrix& m, double f) {
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) += f;
}

std::size_t unfold_rows(const Shape& shape, std::size_t mode) { return shape[mode]; }

std::size_t unfold_cols(const Shape& shape, std::size_t mode) {
    return shape_product(shape) / shape[mode];
}

std::string pair_str(const PairKL& p) {
    return "(" + std::to_string(p.tensor) + "," + std::to_string(p.mode) + ")";
}

}  // namespace

std::size_t SharingPlan::group_of(std::size_t tensor, std::size_t mode) const {
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (const PairKL& p : groups[g].members)
            if (p.tensor == tensor && p.mode == mode) return g;
    throw std::invalid_argument("sharing plan does not cover pair " +
                                pair_str({tensor, mode}));
}

PairKL SharingPlan::representative(const SharingGroup& g) {
    return *std::min_element(g.members.begin(), g.members.end());
}

SharingPlan SharingPlan::singletons(const std::vector<Shape>& shapes,
                                    const std::vector<std::vector<std::size_t>>& ranks) {
    SharingPlan plan;
    plan.num_tensors = shapes.size();
    for (std::size_t k = 0; k < shapes.size(); ++k) {
        plan.modes_per_tensor.push_back(shapes[k].size());
        for (std::size_t l = 0; l < shapes[k].size(); ++l)
            plan.groups.push_back({{{k, l}}, ranks[k][l]});
    }
    return plan;
}

SharingPlan SharingPlan::restrict_to_tensor(std::size_t tensor) const {
    SharingPlan out;
    out.num_tensors = 1;
    out.modes_per_tensor = {modes_per_tensor[tensor]};
    for (std::size_t l = 0; l < modes_per_tensor[tensor]; ++l)
        out.groups.push_back({{{0, l}}, groups[group_of(tensor, l)].rank});
    return out;
}

std::vector<std::vector<double>> resolve_alpha(const SharingPlan& plan, const SolverConfig& cfg) {
    if (!cfg.alpha.empty()) return cfg.alpha;
    std::vector<std::vector<double>> alpha(plan.num_tensors);
    for (std::size_t k = 0; k < plan.num_tensors; ++k)
        alpha[k].assign(plan.modes_per_tensor[k],
                        1.0 / static_cast<double>(plan.modes_per_tensor[k]));
    return alpha;
}

std::vector<std::string> validate(const SharingPlan& plan,
                                  const std::vector<MaskedTensor>& tensors,
                                  const SolverConfig& cfg) {
    std::vector<std::string> errors;
    auto fail = [&errors](std::string msg) { errors.push_back(std::move(msg)); };

    if (plan.num_tensors != tensors.size())
        fail("plan declares " + std::to_string(plan.num_tensors) + " tensors but " +
             std::to_string(tensors.size()) + " were supplied");
    if (plan.modes_per_tensor.size() != plan.num_tensors)
        fail("modes_per_tensor has " + std::to_string(plan.modes_per_tensor.size()) +
             " entries for " + std::to_string(plan.num_tensors) + " tensors");

    const std::size_t k_max = std::min(plan.num_tensors, tensors.size());
    for (std::size_t k = 0; k < k_max; ++k) {
        if (k < plan.modes_per_tensor.size() &&
            plan.modes_per_tensor[k] != tensors[k].values.order())
            fail("tensor " + std::to_string(k) + " has order " +
                 std::to_string(tensors[k].values.order()) + " but the plan declares " +
                 std::to_string(plan.modes_per_tensor[k]));
        if (tensors[k].values.shape() != tensors[k].mask.shape())
            fail("tensor " + std::to_string(k) + " shape " +
                 shape_to_string(tensors[k].values.shape()) + " does not match its mask " +
                 shape_to_string(tensors[k].mask.shape()));
    }

    // Partition: every pair covered exactly once.
    std::vector<std::vector<int>> covered(k_max);
    for (std::size_t k = 0; k < k_max; ++k) covered[k].assign(tensors[k].values.order(), 0);
    for (std::size_t g = 0; g < plan.groups.size(); ++g) {
        const SharingGroup& grp = plan.groups[g];
        if (grp.members.empty()) {
            fail("group " + std::to_string(g) + " is empty");
            continue;
        }
        if (grp.rank < 1) fail("group " + std::to_string(g) + " has rank 0");
        std::size_t rows0 = 0;
        bool rows0_set = false;
        for (const PairKL& p : grp.members) {
            if (p.tensor >= k_max || p.mode >= tensors[p.tensor].values.order()) {
                fail("group " + std::to_string(g) + " member " + pair_str(p) +
                     " is out of range");
                continue;
            }
            covered[p.tensor][p.mode] += 1;
            const Shape& shape = tensors[p.tensor].values.shape();
            const std::size_t rows = unfold_rows(shape, p.mode);
            const std::size_t cols = unfold_cols(shape, p.mode);
            if (!rows0_set) {
                rows0 = rows;
                rows0_set = true;
            } else if (rows != rows0) {
                fail("group " + std::to_string(g) + " member " + pair_str(p) +
                     " has mode extent " + std::to_string(rows) +
                     " but the group requires " + std::to_string(rows0));
            }
            if (grp.rank > std::min(rows, cols))
                fail("group " + std::to_string(g) + " rank " + std::to_string(grp.rank) +
                     " exceeds min(rows, cols) = " + std::to_string(std::min(rows, cols)) +
                     " of unfolding " + pair_str(p));
        }
    }
    for (std::size_t k = 0; k < k_max; ++k)
        for (std::size_t l = 0; l < covered[k].size(); ++l) {
            if (covered[k][l] == 0)
                fail("pair " + pair_str({k, l}) + " is not covered by any group");
            else if (covered[k][l] > 1)
                fail("pair " + pair_str({k, l}) + " is covered by " +
                     std::to_string(covered[k][l]) + " groups");
        }

    if (!(cfg.lambda > 0.0)) fail("lambda must be > 0, got " + std::to_string(cfg.lambda));
    if (cfg.max_sweeps < 1) fail("max_sweeps must be >= 1");
    if (cfg.rel_tolerance < 0.0) fail("rel_tolerance must be >= 0");

    if (!cfg.alpha.empty()) {
        if (cfg.alpha.size() != k_max) {
            fail("alpha has " + std::to_string(cfg.alpha.size()) + " rows for " +
                 std::to_string(k_max) + " tensors");
        } else {
            for (std::size_t k = 0; k < k_max; ++k) {
                if (cfg.alpha[k].size() != tensors[k].values.order()) {
                    fail("alpha row for tensor " + std::to_string(k) + " has " +
                         std::to_string(cfg.alpha[k].size()) + " weights for order " +
                         std::to_string(tensors[k].values.order()));
                    continue;
                }
                double sum = 0.0;
                bool negative = false;
                for (double a : cfg.alpha[k]) {
                    sum += a;
                    negative = negative || a < 0.0;
                }
                if (negative) fail("alpha row for tensor " + std::to_string(k) +
                                   " has a negative weight");
                if (std::abs(sum - 1.0) > 1e-12)
                    fail("alpha row for tensor " + std::to_string(k) + " sums to " +
                         std::to_string(sum) + ", expected 1");
            }
        }
    }
    return errors;
}

ModelState init_state(const SharingPlan& plan, const std::vector<MaskedTensor>& tensors,
                      const SolverConfig& cfg) {
    ModelState state;
    state.estimate.reserve(tensors.size());
    for (const MaskedTensor& mt : tensors) {
        DenseTensor y(mt.values.shape());  // zeros at missing entries
        kern::apply_observed(y, mt.values, mt.mask);
        state.estimate.push_back(std::move(y));
    }

    state.local_factor.resize(tensors.size());
    for (std::size_t k = 0; k < tensors.size(); ++k)
        state.local_factor[k].resize(tensors[k].values.order());
    state.shared_factor.resize(plan.groups.size());

    if (cfg.init == InitMode::random) {
        for (std::size_t g = 0; g < plan.groups.size(); ++g) {
            const SharingGroup& grp = plan.groups[g];
            const PairKL rep = SharingPlan::representative(grp);
            const Shape& shape = tensors[rep.tensor].values.shape();
            Matrix u(unfold_rows(shape, rep.mode), grp.rank);
            Rng rng(derive_stream(cfg.seed + rep.tensor, kStreamFactorU, rep.mode));
            rng.fill_normal(u.values());
            scale_in_place(u, 1.0 / std::sqrt(static_cast<double>(grp.rank)));
            state.shared_factor[g] = std::move(u);
        }
        for (std::size_t k = 0; k < tensors.size(); ++k)
            for (std::size_t l = 0; l < tensors[k].values.order(); ++l) {
                const std::size_t rank = plan.groups[plan.group_of(k, l)].rank;
                Matrix v(unfold_cols(tensors[k].values.shape(), l), rank);
                Rng rng(derive_stream(cfg.seed + k, kStreamFactorV, l));
                rng.fill_normal(v.values());
                scale_in_place(v, 1.0 / std::sqrt(static_cast<double>(rank)));
                state.local_factor[k][l] = std::move(v);
            }
    } else {
        for (std::size_t g = 0; g < plan.groups.size(); ++g) {
            const SharingGroup& grp = plan.groups[g];
            std::size_t total_cols = 0;
            for (const PairKL& p : grp.members)
                total_cols += unfold_cols(tensors[p.tensor].values.shape(), p.mode);
            const PairKL rep = SharingPlan::representative(grp);
            const std::size_t rows = unfold_rows(tensors[rep.tensor].values.shape(), rep.mode);
            Eigen::MatrixXd stacked(rows, total_cols);
            std::size_t off = 0;
            for (const PairKL& p : grp.members) {
                const Matrix m = kern::unfold(state.estimate[p.tensor], p.mode);
                stacked.block(0, static_cast<Eigen::Index>(off),
                              static_cast<Eigen::Index>(rows),
                              static_cast<Eigen::Index>(m.cols())) =
                    RowMajorMap(m.data(), static_cast<Eigen::Index>(rows),
                                static_cast<Eigen::Index>(m.cols()));
                off += m.cols();
            }
            Eigen::BDCSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeThinU);
            const auto thin_u = svd.matrixU().leftCols(static_cast<Eigen::Index>(grp.rank));
            Matrix u(rows, grp.rank);
            for (std::size_t i = 0; i < rows; ++i)
                for (std::size_t j = 0; j < grp.rank; ++j)
                    u(i, j) = thin_u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            state.shared_factor[g] = std::move(u);
        }
        for (std::size_t k = 0; k < tensors.size(); ++k)
            for (std::size_t l = 0; l < tensors[k].values.order(); ++l) {
                const Matrix m = kern::unfold(state.estimate[k], l);
                state.local_factor[k][l] =
                    kern::matmul_tn(m, state.shared_factor[plan.group_of(k, l)]);
            }
    }
    return state;
}

Matrix update_shared_factor(std::size_t group, const ModelState& state, const SharingPlan& plan,
                            const SolverConfig& cfg) {
    const auto alpha = resolve_alpha(plan, cfg);
    const SharingGroup& grp = plan.groups[group];
    const std::size_t rank = grp.rank;
    const std::size_t rows = state.shared_factor[group].rows();

    Matrix numerator(rows, rank);
    Matrix gram_sum(rank, rank);
    for (const PairKL& p : grp.members) {
        const double a = alpha[p.tensor][p.mode];
        const Matrix m = kern::unfold(state.estimate[p.tensor], p.mode);
        const Matrix& v = state.local_factor[p.tensor][p.mode];
        kern::add_scaled(numerator, kern::matmul_nn(m, v), a);
        kern::add_scaled(gram_sum, kern::gram(v), a);
    }
    add_diagonal(gram_sum, cfg.lambda);
    return solve_spd_rhs(gram_sum, numerator);
}

Matrix update_local_factor(std::size_t tensor, std::size_t mode, const ModelState& state,
                           const SharingPlan& plan, const SolverConfig& cfg) {
    const auto alpha = resolve_alpha(plan, cfg);
    const double a = alpha[tensor][mode];
    const Matrix& u = state.shared_factor[plan.group_of(tensor, mode)];

    const Matrix m = kern::unfold(state.estimate[tensor], mode);
    Matrix numerator = kern::matmul_tn(m, u);
    scale_in_place(numerator, a);
    Matrix system = kern::gram(u);
    scale_in_place(system, a);
    add_diagonal(system, cfg.lambda);
    return solve_spd_rhs(system, numerator);
}

DenseTensor reconstruct_model(std::size_t tensor, const ModelState& state,
                              const SharingPlan& plan, const SolverConfig& cfg) {
    const auto alpha = resolve_alpha(plan, cfg);
    DenseTensor y(state.estimate[tensor].shape());
    for (std::size_t l = 0; l < state.local_factor[tensor].size(); ++l) {
        const Matrix& u = state.shared_factor[plan.group_of(tensor, l)];
        const Matrix p = kern::matmul_nt(u, state.local_factor[tensor][l]);
        kern::fold_add(y, p, l, alpha[tensor][l]);
    }
    return y;
}

DenseTensor reconstruct_estimate(std::size_t tensor, const ModelState& state,
                                 const SharingPlan& plan, const SolverConfig& cfg,
                                 const DenseTensor& original, const Mask& w) {
    DenseTensor y = reconstruct_model(tensor, state, plan, cfg);
    kern::apply_observed(y, original, w);
    return y;
}

double objective(const ModelState& state, const SharingPlan& plan, const SolverConfig& cfg) {
    const auto alpha = resolve_alpha(plan, cfg);
    double f = 0.0;
    for (std::size_t k = 0; k < state.estimate.size(); ++k)
        for (std::size_t l = 0; l < state.local_factor[k].size(); ++l) {
            const Matrix m = kern::unfold(state.estimate[k], l);
            const Matrix& u = state.shared_factor[plan.group_of(k, l)];
            f += alpha[k][l] * kern::residual_sumsq(m, u, state.local_factor[k][l]);
        }
    for (const Matrix& u : state.shared_factor)
        f += cfg.lambda * kern::sumsq(std::span<const double>(u.values()));
    for (const auto& per_tensor : state.local_factor)
        for (const Matrix& v : per_tensor)
            f += cfg.lambda * kern::sumsq(std::span<const double>(v.values()));
    return f;
}

void sweep(ModelState& state, const SharingPlan& plan, const SolverConfig& cfg,
           const std::vector<MaskedTensor>& tensors) {
    for (std::size_t g = 0; g < plan.groups.size(); ++g)
        state.shared_factor[g] = update_shared_factor(g, state, plan, cfg);
    for (std::size_t k = 0; k < tensors.size(); ++k)
        for (std::size_t l = 0; l < tensors[k].values.order(); ++l)
            state.local_factor[k][l] = update_local_factor(k, l, state, plan, cfg);
    for (std::size_t k = 0; k < tensors.size(); ++k)
        state.estimate[k] =
            reconstruct_estimate(k, state, plan, cfg, tensors[k].values, tensors[k].mask);
}

std::pair<ModelState, SolveReport> solve(const SharingPlan& plan,
                                         const std::vector<MaskedTensor>& tensors,
                                         const SolverConfig& cfg) {
    const auto errors = validate(plan, tensors, cfg);
    if (!errors.empty()) {
        std::string joined;
        for (const std::string& e : errors) {
            if (!joined.empty()) joined += "; ";
            joined += e;
        }
        throw std::invalid_argument(joined);
    }

    ModelState state = init_state(plan, tensors, cfg);
    SolveReport report;
    double previous = objective(state, plan, cfg);
    for (std::size_t t = 0; t < cfg.max_sweeps; ++t) {
        sweep(state, plan, cfg, tensors);
        const double f = objective(state, plan, cfg);
        report.objective_trace.push_back(f);
        if (std::abs(f - previous) / (1.0 + std::abs(previous)) < cfg.rel_tolerance) {
            report.converged = true;
            break;
        }
        previous = f;
    }
    report.sweeps_run = report.objective_trace.size();
    report.final_objective = report.objective_trace.back();
    return {std::move(state), std::move(report)};
}

}  // namespace mtc
