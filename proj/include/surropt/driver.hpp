#ifndef SURROPT_DRIVER_HPP
#define SURROPT_DRIVER_HPP

#include <optional>
#include <string>
#include <vector>

#include "surropt/common.hpp"
#include "surropt/problem.hpp"
#include "surropt/sampling.hpp"
#include "surropt/tags.hpp"

namespace surropt {

struct DriverOptions {
    long max_evals = 0;  // 0 -> 50 * dim
    SurrogateTag surrogate = SurrogateTag::MIX_RcM;
    SamplingTag sampling = SamplingTag::CANDglob;
    DesignKind design = DesignKind::SLHD;
    int design_size = 0;  // 0 -> max(2*(d+1), min_design_size(surrogate, d))
    Matrix start_points;  // extra design rows for epoch 0 (may be 0 x 0)
    int batch = 1;        // points evaluated per iteration
    std::uint64_t seed = 1;
    int workers = 1;      // max concurrent objective evaluations
};

struct EpochInfo {
    int epoch = 0;
    long start_eval_index = 1;  // 1-based index of the epoch's first evaluation
    std::string reason;         // "initial" or "range-reduction-limit"
};

/// Per-evaluation metadata that the history file carries alongside the
/// EvaluationRecord: the sigma in effect when the point was chosen and,
/// for candidate-sampling selections, the w_R used.
struct RecordAnnotation {
    std::optional<double> w_r;
    double sigma = 1.0;
};

struct IterationTrace {
    int epoch = 0;
    long first_eval_index = 0;
    int n_points = 0;    // points evaluated this iteration
    int fit_points = 0;  // size of the surrogate's training set (epoch-local)
    std::vector<double> w_r;
    SamplerState state_after;  // counters/sigma after this trial's update
    Vector ensemble_weights;   // empty unless the surrogate is a mixture
};

struct RunResult {
    Vector best_point;
    double best_value = 0.0;
    std::vector<EvaluationRecord> history;
    std::vector<RecordAnnotation> annotations;  // aligned with history
    std::vector<EpochInfo> epochs;
    std::vector<IterationTrace> state_trace;
};

/// Runs the full loop: initial design, batch evaluation, fit, sample,
/// counter updates, adaptive restarts, until the evaluation budget is
/// spent. Each restart epoch fits surrogates on its own points only;
/// the reported incumbent is global across epochs.
RunResult optimize(const ProblemSpec& spec, const DriverOptions& opts);

/// Counter machine for the perturbation range. Improvement resets the
/// fail counter; more than 3 consecutive successes double sigma (clamped
/// at 1), more than max{5, d} consecutive failures halve it and bump
/// reduction_count. Pure function; replaying a trial outcome sequence
/// reproduces the state trajectory.
SamplerState update_counters(SamplerState state, bool improved, int d);

/// True when a 6th range reduction has been demanded.
bool should_restart(const SamplerState& state);

/// Evaluates all rows, at most `workers` concurrently; results are in
/// input order. Any failure aborts the batch naming the failing point.
/// Pass `seconds` to collect per-point wall times.
std::vector<double> evaluate_batch(const ProblemSpec& spec, const Matrix& points,
                                   int workers, std::vector<double>* seconds = nullptr);

}  // namespace surropt

#endif
