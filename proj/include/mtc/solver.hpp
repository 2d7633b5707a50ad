#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mtc/tensor.hpp"

namespace mtc {

/// One (tensor, mode) pair.
struct PairKL {
    std::size_t tensor = 0;
    std::size_t mode = 0;

    friend bool operator==(const PairKL&, const PairKL&) = default;
    friend auto operator<=>(const PairKL&, const PairKL&) = default;
};

/// A set of (tensor, mode) pairs constrained to use one common row-space
/// factor, together with that factor's rank.
struct SharingGroup {
    std::vector<PairKL> members;
    std::size_t rank = 1;
};

/// Partition of all (tensor, mode) pairs into sharing groups. Groups with a
/// single member leave that unfolding uncoupled; multi-member groups are the
/// cross-tensor coupling device.
struct SharingPlan {
    std::size_t num_tensors = 0;
    std::vector<std::size_t> modes_per_tensor;
    std::vector<SharingGroup> groups;

    /// Index of the group containing (k,l); throws if the pair is uncovered.
    std::size_t group_of(std::size_t tensor, std::size_t mode) const;

    /// Lexicographically smallest member, used as the group's stream id.
    static PairKL representative(const SharingGroup& g);

    /// All-singleton plan: one group per (k,l) with the given per-pair ranks.
    static SharingPlan singletons(const std::vector<Shape>& shapes,
                                  const std::vector<std::vector<std::size_t>>& ranks);

    /// Single-tensor plan that keeps tensor k's group ranks from this plan.
    SharingPlan restrict_to_tensor(std::size_t tensor) const;
};

enum class InitMode { random, svd };

struct SolverConfig {
    double lambda = 0.1;
    /// Per-(tensor, mode) weights; each tensor's row must sum to 1.
    /// Empty means uniform 1/L_k.
    std::vector<std::vector<double>> alpha;
    std::size_t max_sweeps = 300;
    double rel_tolerance = 1e-6;
    InitMode init = InitMode::random;
    std::uint64_t seed = 0;
};

struct MaskedTensor {
    DenseTensor values;
    Mask mask;
};

struct ModelState {
    std::vector<Matrix> shared_factor;              // one per group, rows x rank
    std::vector<std::vector<Matrix>> local_factor;  // [k][l], cols x rank
    std::vector<DenseTensor> estimate;              // one per tensor
};

struct SolveReport {
    std::size_t sweeps_run = 0;
    std::vector<double> objective_trace;  // one value per sweep
    bool converged = false;
    double final_objective = 0.0;
};

/// Checks every structural invariant: the groups partition all (k,l) pairs,
/// members of one group agree on the unfolding row count, ranks are >= 1 and
/// at most min(rows, cols) of every governed unfolding, tensor and mask
/// shapes agree, lambda > 0, and each alpha row sums to 1 within 1e-12.
/// Returns one message per violation; empty means valid.
std::vector<std::string> validate(const SharingPlan& plan,
                                  const std::vector<MaskedTensor>& tensors,
                                  const SolverConfig& cfg);

/// Effective weights: cfg.alpha if present, otherwise uniform 1/L_k.
std::vector<std::vector<double>> resolve_alpha(const SharingPlan& plan, const SolverConfig& cfg);

/// Estimates start as the observed entries with zeros at missing positions.
/// random init draws factor entries i.i.d. N(0,1)/sqrt(rank) from the
/// documented per-(tensor, mode) streams; svd init takes each group factor
/// from the leading left singular vectors of its members' zero-filled
/// unfoldings (concatenated columnwise for shared groups) and sets each local
/// factor to unfold(Y,l)^T * U.
ModelState init_state(const SharingPlan& plan, const std::vector<MaskedTensor>& tensors,
                      const SolverConfig& cfg);

/// Ridge-regularized least-squares update of one group factor against the
/// current estimates and local factors:
///   U = (sum alpha * Y^(l) V) (sum alpha * V^T V + lambda I)^-1
/// realized as an SPD solve, never an explicit inverse.
Matrix update_shared_factor(std::size_t group, const ModelState& state, const SharingPlan& plan,
                            const SolverConfig& cfg);

/// Same update for one local factor:
///   V = (alpha * Y^(l)T U) (alpha * U^T U + lambda I)^-1
Matrix update_local_factor(std::size_t tensor, std::size_t mode, const ModelState& state,
                           const SharingPlan& plan, const SolverConfig& cfg);

/// Weighted fold-back of all mode models, before the data constraint:
///   sum_l alpha_{k,l} * fold(U_g V_{k,l}^T, l)
DenseTensor reconstruct_model(std::size_t tensor, const ModelState& state,
                              const SharingPlan& plan, const SolverConfig& cfg);

/// reconstruct_model followed by overwriting observed entries from the data.
DenseTensor reconstruct_estimate(std::size_t tensor, const ModelState& state,
                                 const SharingPlan& plan, const SolverConfig& cfg,
                                 const DenseTensor& original, const Mask& w);

/// sum_{k,l} alpha_{k,l} ||Y_k^(l) - U_g V_{k,l}^T||_F^2
///   + lambda * sum_groups ||U_g||_F^2 + lambda * sum_{k,l} ||V_{k,l}||_F^2
/// Each distinct shared factor is regularized exactly once, which is the
/// counting under which the factor updates are exact block minimizers.
/// lambda = 0 is allowed here for diagnostics.
double objective(const ModelState& state, const SharingPlan& plan, const SolverConfig& cfg);

/// One Gauss-Seidel pass: all group factors, then all local factors, then all
/// estimates with the observed-entry constraint re-applied. Within a phase
/// the updates are data-independent.
void sweep(ModelState& state, const SharingPlan& plan, const SolverConfig& cfg,
           const std::vector<MaskedTensor>& tensors);

/// init_state, then sweeps until max_sweeps or until the relative objective
/// change |f_t - f_{t-1}| / (1 + |f_{t-1}|) drops below rel_tolerance.
/// Throws std::invalid_argument with all validate messages if validation
/// fails.
std::pair<ModelState, SolveReport> solve(const SharingPlan& plan,
                                         const std::vector<MaskedTensor>& tensors,
                                         const SolverConfig& cfg);

}  // namespace mtc
