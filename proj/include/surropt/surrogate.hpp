#ifndef SURROPT_SURROGATE_HPP
#define SURROPT_SURROGATE_HPP

#include <string>
#include <variant>
#include <vector>

#include "surropt/common.hpp"
#include "surropt/tags.hpp"

namespace surropt {

/// Radial basis function interpolant with a linear polynomial tail.
/// Solves the augmented system [Phi P; P^T 0][lambda; c] = [f; 0].
struct RbfModel {
    Matrix centers;   // n x d
    Vector lambda;    // n RBF weights
    Vector tail;      // d+1: constant, then one slope per coordinate
    RbfKernel kernel = RbfKernel::Cubic;
};

/// Least-squares regression polynomial over a fixed monomial basis.
struct PolyModel {
    int dim = 0;
    PolyVariant variant = PolyVariant::Lin;
    // One entry per monomial: the list of coordinate indices to multiply
    // (with multiplicity); the empty list is the constant term. Ordered by
    // degree, then lexicographically -- the dump format relies on this.
    std::vector<std::vector<int>> basis;
    Vector beta;
};

struct HingeFactor {
    int var = 0;
    double knot = 0.0;
    int sign = 1;  // +1: max(0, x - knot); -1: max(0, knot - x)
};

struct MarsTerm {
    std::vector<HingeFactor> factors;  // empty == intercept
};

/// Multivariate adaptive regression spline: greedy forward pass adding
/// reflected hinge pairs (knots at data values), GCV-pruning backward pass.
struct MarsModel {
    int dim = 0;
    std::vector<MarsTerm> terms;  // terms[0] is the intercept
    Vector coef;
    double gcv = 0.0;          // of the returned (pruned) model
    double forward_gcv = 0.0;  // of the forward-pass-final model
};

using BaseModel = std::variant<RbfModel, PolyModel, MarsModel>;

/// Convex-weighted mixture; prediction is sum_m w_m * s_m(x).
struct EnsembleModel {
    std::vector<SurrogateTag> member_tags;
    std::vector<BaseModel> members;  // aligned with member_tags
    Vector weights;                  // >= 0, sums to 1; 0 for failed members
};

using Model = std::variant<RbfModel, PolyModel, MarsModel, EnsembleModel>;

/// Minimum number of design points for a well-posed fit of the tagged model.
int min_design_size(SurrogateTag tag, int d);

int mars_default_max_terms(int d);  // min(21, 2d+1)

RbfModel fit_rbf(const Matrix& points, const Vector& values, RbfKernel kernel);

PolyModel fit_poly(const Matrix& points, const Vector& values, PolyVariant variant);

MarsModel fit_mars(const Matrix& points, const Vector& values, int max_terms,
                   int max_interaction, double gcv_penalty = 3.0);

/// Fits every member on the full data, then weighs members by
/// cross-validation evidence (leave-one-out for n <= 50, else 10-fold)
/// combined with Dempster's rule; see README for the exact scheme.
EnsembleModel fit_ensemble(const Matrix& points, const Vector& values,
                           const std::vector<SurrogateTag>& member_tags);

/// Dispatch on the tag (single models and Table-style mixtures alike).
Model fit_model(SurrogateTag tag, const Matrix& points, const Vector& values);

double predict(const RbfModel& m, const Vector& x);
double predict(const PolyModel& m, const Vector& x);
double predict(const MarsModel& m, const Vector& x);
double predict(const EnsembleModel& m, const Vector& x);
double predict(const Model& m, const Vector& x);

/// Batch prediction, one value per row of X. OpenMP inside; results do not
/// depend on the thread count.
Vector predict(const Model& m, const Matrix& X);
Vector predict(const BaseModel& m, const Matrix& X);

/// Diagnostic text serialization; parse_model_dump round-trips it.
std::string dump_model(const Model& m);
Model parse_model_dump(const std::string& text);

const std::vector<std::vector<int>>& poly_basis(int dim, PolyVariant variant);

}  // namespace surropt

#endif
