#ifndef SURROPT_DESIGN_HPP
#define SURROPT_DESIGN_HPP

#include <string>

#include "surropt/common.hpp"
#include "surropt/problem.hpp"
#include "surropt/tags.hpp"

namespace surropt {

struct DesignMatrix {
    Matrix points;  // n x d, feasible rows, pairwise distinct
    DesignKind kind = DesignKind::SLHD;
};

/// Latin hypercube with the "maximin" option: the best of k_draws random
/// stratified designs by minimum pairwise distance. Integer coordinates
/// are rounded to the nearest feasible integer afterwards; designs with
/// duplicate rows are redrawn (up to 100 attempts), then deduplicated
/// with a warning.
DesignMatrix latin_hypercube(int n, const ProblemSpec& spec, Rng& rng,
                             int k_draws = 20);

/// Symmetric Latin hypercube: stratum indices pair k <-> n+1-k per column
/// with random pairing signs, so the pre-rounding point set is invariant
/// under x -> lower + upper - x (odd n places one point at the exact
/// box center).
DesignMatrix symmetric_lhd(int n, const ProblemSpec& spec, Rng& rng);

/// Box center plus n-1 corners; when n-1 < 2^d the corners are picked by
/// greedy maximin selection seeded with a random corner. Requires
/// n <= 2^d + 1 and d <= 20 (the corner set is enumerated).
DesignMatrix corner_design(int n, const ProblemSpec& spec, Rng& rng);

DesignMatrix build_design(DesignKind kind, int n, const ProblemSpec& spec, Rng& rng);

/// Optional user start points: text file, one whitespace-separated point
/// per row, validated against bounds and integrality.
Matrix load_start_points(const std::string& path, const ProblemSpec& spec);

}  // namespace surropt

#endif
