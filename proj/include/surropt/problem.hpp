#ifndef SURROPT_PROBLEM_HPP
#define SURROPT_PROBLEM_HPP

#include <functional>
#include <string>
#include <vector>

#include "surropt/common.hpp"

namespace surropt {

using Objective = std::function<double(const Vector&)>;

/// Box-constrained minimization problem with an optional set of
/// integer-valued coordinates. Immutable after construction.
struct ProblemSpec {
    int dim = 0;
    Vector lower;
    Vector upper;
    std::vector<int> integer_idx;   // 0-based, sorted, unique
    std::vector<bool> integer_mask; // size dim
    Objective objective;
    std::string name;

    int d1() const { return dim - static_cast<int>(integer_idx.size()); }
    int d2() const { return static_cast<int>(integer_idx.size()); }
    bool is_integer(int i) const { return integer_mask[static_cast<size_t>(i)]; }
    bool pure_continuous() const { return d2() == 0; }
    bool pure_integer() const { return d1() == 0; }

    /// Shortest side of the box, over all coordinates.
    double min_side() const;
    /// Shortest side over continuous coordinates only; throws if none exist.
    double min_continuous_side() const;

    bool in_bounds(const Vector& x, double tol = 0.0) const;
    bool integrality_ok(const Vector& x, double tol = 1e-9) const;
};

struct EvaluationRecord {
    Vector point;
    double value = 0.0;
    long eval_index = 0;  // 1-based over the whole run
    int epoch = 0;        // restart epoch, 0-based
    double wall_time = 0.0;
};

/// Validates bounds/indices and rounds integer-coordinate bounds inward
/// (ceil lower, floor upper). integer_idx is 0-based here; the problem
/// config file uses 1-based indices.
ProblemSpec make_problem(int dim, Vector lower, Vector upper,
                         std::vector<int> integer_idx, Objective objective,
                         std::string name);

/// Reads a key/value problem file (see README for the format).
ProblemSpec load_problem(const std::string& path);

/// Catalogue entry by name ("sphere", "branin", "ackley", "rastrigin",
/// plus "-int" and "-mi" variants) with canonical bounds.
ProblemSpec builtin_problem(const std::string& name, int dim);

/// Looks up just the formula of a builtin (variants share the base
/// formula). Throws config_error for unknown names / unsupported dim.
Objective builtin_objective(const std::string& name, int dim);

/// Single evaluation. Checks feasibility of the point, invokes the
/// objective, and rejects non-finite results.
double evaluate(const ProblemSpec& spec, const Vector& point);

/// Wraps a shell command as an objective: the point is written to the
/// child's stdin as one space-separated line, the child must print a
/// single finite scalar. Safe to call concurrently on distinct points.
Objective make_command_objective(std::string cmd);

}  // namespace surropt

#endif
