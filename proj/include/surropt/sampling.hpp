#ifndef SURROPT_SAMPLING_HPP
#define SURROPT_SAMPLING_HPP

#include <array>
#include <vector>

#include "surropt/common.hpp"
#include "surropt/problem.hpp"
#include "surropt/surrogate.hpp"

namespace surropt {

/// Response-surface weight cycle; the distance weight is 1 - w_R.
inline constexpr std::array<double, 5> kWeightPattern{1.0, 0.75, 0.5, 0.25, 0.0};

struct SamplerState {
    int cycle_pos = 0;       // index into kWeightPattern
    int fail_count = 0;      // consecutive failed improvement trials
    int success_count = 0;   // consecutive successful trials
    double sigma = 1.0;      // perturbation-range multiplier, in (0, 1]
    int reduction_count = 0; // halvings this epoch; a 6th demand restarts
};

enum class CandidateGroup { PerturbContinuous, PerturbInteger, PerturbAll, Uniform };

enum class SearchMode { Local, Global };

struct CandidateSet {
    Matrix points;  // feasible, deduplicated against `evaluated`
    std::vector<CandidateGroup> labels;  // one per surviving row
    // Pre-filter row count per generated group, in generation order.
    std::vector<std::pair<CandidateGroup, int>> generated;
    bool degenerate = false;  // regeneration also produced nothing
};

/// Eq.-style coordinate perturbation probability: 1 for d <= 5,
/// otherwise max{0.1, 5/d}.
double perturbation_probability(int d);

/// Dedup tolerance against evaluated points: 0.1% of the shortest box
/// side (exact coincidence for pure-integer problems).
double dedup_tolerance(const ProblemSpec& spec);

// Candidate generators. `evaluated` (n x d, possibly 0 rows) is the
// current epoch's evaluated set used for the too-close filter. Group
// sizes before filtering: 500*d1 (continuous), 500*d2 (integer),
// 125*(d1+d2) per group (mixed); Global mode adds one uniform group.
CandidateSet gen_candidates_continuous(const Vector& best, const ProblemSpec& spec,
                                       SearchMode mode, const SamplerState& state,
                                       const Matrix& evaluated, Rng& rng);
CandidateSet gen_candidates_integer(const Vector& best, const ProblemSpec& spec,
                                    SearchMode mode, const SamplerState& state,
                                    const Matrix& evaluated, Rng& rng);
CandidateSet gen_candidates_mixed(const Vector& best, const ProblemSpec& spec,
                                  SearchMode mode, const SamplerState& state,
                                  const Matrix& evaluated, Rng& rng);

/// Dispatch on the problem's variable classes.
CandidateSet gen_candidates(const Vector& best, const ProblemSpec& spec,
                            SearchMode mode, const SamplerState& state,
                            const Matrix& evaluated, Rng& rng);

struct Selection {
    Matrix points;              // selected rows, in selection order
    std::vector<double> w_r;    // response-surface weight used per selection
};

/// Weighted-score selection of `batch` points. Each selection takes
/// w_R from the cycle (advancing state.cycle_pos), scales predictions
/// and min-distances to [0,1] over the surviving pool, picks the
/// arg-min score (ties by lowest candidate index), and removes the
/// point from the pool. Distances account for points already selected
/// in this batch. Returns fewer points with a warning if the pool runs
/// out.
Selection score_and_select(const CandidateSet& cands, const Model& model,
                           const Matrix& evaluated, SamplerState& state, int batch);

/// Local minimum of the surrogate: multistart coordinate descent for
/// continuous problems, an integrality-respecting evolutionary search
/// otherwise. Falls back to maximin_point when the found minimum is
/// within the dedup tolerance of an evaluated point or the inner
/// search fails.
Vector surfmin_point(const Model& model, const ProblemSpec& spec,
                     const Matrix& evaluated, Rng& rng);

/// Approximate maximin point: best of 1000*d uniform feasible draws by
/// minimum distance to the evaluated set.
Vector maximin_point(const Matrix& evaluated, const ProblemSpec& spec, Rng& rng);

}  // namespace surropt

#endif
