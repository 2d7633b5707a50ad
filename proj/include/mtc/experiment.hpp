#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mtc/solver.hpp"
#include "mtc/tensor.hpp"

namespace mtc {

struct MaskSpec {
    double missing_fraction = 0.0;
    std::uint64_t seed = 0;
};

/// Exactly floor(missing_fraction * N) entries are missing, chosen uniformly
/// without replacement. The missing set is the prefix of one seeded
/// permutation of all positions, so for a fixed seed the missing sets at
/// increasing fractions are nested.
Mask generate_mask(const Shape& shape, const MaskSpec& spec);

/// Ground-truth generator for coupled low-rank tensors. Each tensor is a
/// random multilinear product: a dense core of extents `ranks[k]` contracted
/// with one factor matrix per mode (entries i.i.d. N(0,1) from documented
/// streams), optionally plus i.i.d. Gaussian noise. Every mode unfolding of
/// such a tensor has rank at most that mode's rank. Pairs listed in one
/// `shared` group draw one common factor matrix, so those unfoldings span a
/// common column space.
struct SynthSpec {
    std::vector<Shape> shapes;
    std::vector<std::vector<std::size_t>> ranks;  // per tensor, per mode
    std::vector<std::vector<PairKL>> shared;      // groups of pairs with one common factor
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
};

std::vector<DenseTensor> synth_coupled(const SynthSpec& spec);

/// ||estimate - truth||_F / ||truth||_F over all entries.
double rse(const DenseTensor& estimate, const DenseTensor& truth);

/// Same ratio restricted to the missing entries of w. Returns 0 when nothing
/// is missing and NaN when the truth is zero on the whole missing set.
double rse_missing_only(const DenseTensor& estimate, const DenseTensor& truth, const Mask& w);

struct ComparisonRow {
    std::uint64_t seed = 0;
    std::string arm;  // "joint" or "independent"
    std::size_t tensor = 0;
    double missing_fraction = 0.0;
    double rse_all = 0.0;
    double rse_missing_only = 0.0;
    std::size_t sweeps = 0;
    double final_objective = 0.0;
};

struct ExperimentReport {
    std::vector<ComparisonRow> rows;
    std::vector<SolveReport> joint_reports;                     // per mask spec
    std::vector<std::vector<SolveReport>> independent_reports;  // per mask spec, per tensor
    SolverConfig config;
};

/// The joint-vs-independent protocol: synthesize ground truth, mask it at
/// each requested level, complete it (a) with the given plan and (b) with the
/// same solver and ranks but all-singleton groups run per tensor (seeded with
/// config seed + k, matching the joint arm's per-tensor streams), and score
/// both arms against the uncorrupted truth. Per-tensor masks use seed
/// spec.seed + k.
ExperimentReport run_comparison(const SynthSpec& spec, const std::vector<MaskSpec>& masks,
                                const SharingPlan& plan, const SolverConfig& cfg);

/// Flat text table, one row per tensor x arm x missing level. Column order:
/// seed arm tensor missing_fraction rse_all rse_missing_only sweeps
/// final_objective. Numbers carry 17 significant digits.
std::string format_report(const ExperimentReport& report);

}  // namespace mtc
