#include "surropt/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "surropt/kernels.hpp"

namespace surropt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double perturbation_probability(int d) {
    if (d < 1) throw std::invalid_argument("perturbation_probability: d >= 1");
    if (d > 5) return std::max(0.1, 5.0 / d);
    return 1.0;
}

double dedup_tolerance(const ProblemSpec& spec) {
    // Exact coincidence for pure-integer problems, 0.1% of the shortest
    // box side otherwise.
    if (spec.pure_integer()) return 1e-12;
    return 1e-3 * spec.min_side();
}

// ---------------------------------------------------------------------------
// Candidate generation

namespace {

Vector random_feasible_point(const ProblemSpec& spec, Rng& rng) {
    Vector x(spec.dim);
    for (int i = 0; i < spec.dim; ++i) {
        if (spec.is_integer(i)) {
            std::uniform_int_distribution<long> u(static_cast<long>(spec.lower(i)),
                                                  static_cast<long>(spec.upper(i)));
            x(i) = static_cast<double>(u(rng));
        } else {
            std::uniform_real_distribution<double> u(spec.lower(i), spec.upper(i));
            x(i) = u(rng);
        }
    }
    return x;
}

void fill_uniform_rows(Matrix& M, Eigen::Index row0, int count,
                       const ProblemSpec& spec, Rng& rng) {
    for (int c = 0; c < count; ++c)
        M.row(row0 + c) = random_feasible_point(spec, rng).transpose();
}

enum class PerturbWhich { ContOnly, IntOnly, All };

// Perturbs `count` copies of `best`, the coordinate set given by `which`.
// Per candidate one rho is drawn per coordinate type in play; each eligible
// coordinate moves with probability P; a candidate that would stay put gets
// one forced coordinate. Results are clipped to the box.
void fill_perturbed_rows(Matrix& M, Eigen::Index row0, int count, const Vector& best,
                         const ProblemSpec& spec, PerturbWhich which, double sigma,
                         Rng& rng) {
    std::vector<int> coords;
    for (int i = 0; i < spec.dim; ++i) {
        const bool isint = spec.is_integer(i);
        if (which == PerturbWhich::ContOnly && isint) continue;
        if (which == PerturbWhich::IntOnly && !isint) continue;
        coords.push_back(i);
    }
    if (coords.empty()) throw std::logic_error("fill_perturbed_rows: empty coordinate set");

    bool any_cont = false, any_int = false;
    for (int i : coords) (spec.is_integer(i) ? any_int : any_cont) = true;
    const double r = any_cont ? spec.min_continuous_side() : 0.0;
    const double P = perturbation_probability(spec.dim);

    static constexpr double kRhoCont[3] = {0.2, 0.1, 0.05};
    static constexpr double kRhoInt[3] = {1.0, 2.0, 3.0};
    std::uniform_int_distribution<int> pick3(0, 2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<size_t> pick_coord(0, coords.size() - 1);

    for (int c = 0; c < count; ++c) {
        Vector x = best;
        const double rho_c = any_cont ? kRhoCont[pick3(rng)] : 0.0;
        const double rho_i = any_int ? kRhoInt[pick3(rng)] : 0.0;

        auto apply = [&](int i) {
            if (spec.is_integer(i)) {
                const double phi = gauss(rng);
                long off = std::lround(rho_i * sigma * phi);
                if (off == 0) off = phi >= 0.0 ? 1 : -1;  // must actually move
                x(i) = std::clamp(x(i) + static_cast<double>(off), spec.lower(i),
                                  spec.upper(i));
            } else {
                x(i) = std::clamp(x(i) + r * rho_c * sigma * gauss(rng), spec.lower(i),
                                  spec.upper(i));
            }
        };

        bool any = false;
        for (int i : coords)
            if (unit(rng) < P) {
                apply(i);
                any = true;
            }
        if (!any) apply(coords[pick_coord(rng)]);
        M.row(row0 + c) = x.transpose();
    }
}

struct GroupPlan {
    CandidateGroup label;
    PerturbWhich which;  // meaningless for Uniform
    int count;
};

CandidateSet generate_once(const Vector& best, const ProblemSpec& spec,
                           const std::vector<GroupPlan>& plan, double sigma,
                           const Matrix& evaluated, Rng& rng) {
    int total = 0;
    for (const auto& g : plan) total += g.count;
    Matrix M(total, spec.dim);
    std::vector<CandidateGroup> labels(static_cast<size_t>(total));

    Eigen::Index row = 0;
    CandidateSet cs;
    for (const auto& g : plan) {
        if (g.label == CandidateGroup::Uniform)
            fill_uniform_rows(M, row, g.count, spec, rng);
        else
            fill_perturbed_rows(M, row, g.count, best, spec, g.which, sigma, rng);
        std::fill(labels.begin() + row, labels.begin() + row + g.count, g.label);
        cs.generated.emplace_back(g.label, g.count);
        row += g.count;
    }

    const double tol = dedup_tolerance(spec);
    const Vector dist = kernels::min_distances(M, evaluated);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < total; ++i)
        if (!(dist(i) < tol)) keep.push_back(i);

    cs.points.resize(static_cast<Eigen::Index>(keep.size()), spec.dim);
    cs.labels.resize(keep.size());
    for (size_t i = 0; i < keep.size(); ++i) {
        cs.points.row(static_cast<Eigen::Index>(i)) = M.row(keep[i]);
        cs.labels[i] = labels[static_cast<size_t>(keep[i])];
    }
    return cs;
}

CandidateSet generate(const Vector& best, const ProblemSpec& spec,
                      const std::vector<GroupPlan>& plan, const SamplerState& state,
                      const Matrix& evaluated, Rng& rng) {
    if (best.size() != spec.dim)
        throw std::invalid_argument("candidate generation: best point has wrong dimension");
    CandidateSet cs = generate_once(best, spec, plan, state.sigma, evaluated, rng);
    if (cs.points.rows() > 0) return cs;
    // Degenerate draw: everything fell inside the dedup tolerance.
    CandidateSet retry = generate_once(best, spec, plan, state.sigma, evaluated, rng);
    if (retry.points.rows() == 0) {
        warn("candidate generation produced no points after a retry");
        retry.degenerate = true;
    }
    return retry;
}

}  // namespace

CandidateSet gen_candidates_continuous(const Vector& best, const ProblemSpec& spec,
                                       SearchMode mode, const SamplerState& state,
                                       const Matrix& evaluated, Rng& rng) {
    if (!spec.pure_continuous())
        throw std::invalid_argument("gen_candidates_continuous: problem has integer variables");
    const int n = 500 * spec.d1();
    std::vector<GroupPlan> plan{{CandidateGroup::PerturbAll, PerturbWhich::All, n}};
    if (mode == SearchMode::Global)
        plan.push_back({CandidateGroup::Uniform, PerturbWhich::All, n});
    return generate(best, spec, plan, state, evaluated, rng);
}

CandidateSet gen_candidates_integer(const Vector& best, const ProblemSpec& spec,
                                    SearchMode mode, const SamplerState& state,
                                    const Matrix& evaluated, Rng& rng) {
    if (!spec.pure_integer())
        throw std::invalid_argument("gen_candidates_integer: problem has continuous variables");
    const int n = 500 * spec.d2();
    std::vector<GroupPlan> plan{{CandidateGroup::PerturbAll, PerturbWhich::All, n}};
    if (mode == SearchMode::Global)
        plan.push_back({CandidateGroup::Uniform, PerturbWhich::All, n});
    return generate(best, spec, plan, state, evaluated, rng);
}

CandidateSet gen_candidates_mixed(const Vector& best, const ProblemSpec& spec,
                                  SearchMode mode, const SamplerState& state,
                                  const Matrix& evaluated, Rng& rng) {
    if (spec.d1() < 1 || spec.d2() < 1)
        throw std::invalid_argument("gen_candidates_mixed: needs both variable classes");
    const int n = 125 * (spec.d1() + spec.d2());
    std::vector<GroupPlan> plan{
        {CandidateGroup::PerturbContinuous, PerturbWhich::ContOnly, n},
        {CandidateGroup::PerturbInteger, PerturbWhich::IntOnly, n},
        {CandidateGroup::PerturbAll, PerturbWhich::All, n},
    };
    if (mode == SearchMode::Global)
        plan.push_back({CandidateGroup::Uniform, PerturbWhich::All, n});
    return generate(best, spec, plan, state, evaluated, rng);
}

CandidateSet gen_candidates(const Vector& best, const ProblemSpec& spec,
                            SearchMode mode, const SamplerState& state,
                            const Matrix& evaluated, Rng& rng) {
    if (spec.pure_continuous())
        return gen_candidates_continuous(best, spec, mode, state, evaluated, rng);
    if (spec.pure_integer())
        return gen_candidates_integer(best, spec, mode, state, evaluated, rng);
    return gen_candidates_mixed(best, spec, mode, state, evaluated, rng);
}

// ---------------------------------------------------------------------------
// Weighted-score selection

Selection score_and_select(const CandidateSet& cands, const Model& model,
                           const Matrix& evaluated, SamplerState& state, int batch) {
    const Eigen::Index m = cands.points.rows();
    if (m == 0) throw std::invalid_argument("score_and_select: empty candidate set");
    if (batch < 1) throw std::invalid_argument("score_and_select: batch >= 1");

    const Vector preds = predict(model, cands.points);
    Vector dist = kernels::min_distances(cands.points, evaluated);
    std::vector<char> taken(static_cast<size_t>(m), 0);

    Selection sel;
    sel.points.resize(0, cands.points.cols());
    for (int k = 0; k < batch; ++k) {
        const double w_r = kWeightPattern[static_cast<size_t>(state.cycle_pos)];
        state.cycle_pos = (state.cycle_pos + 1) % static_cast<int>(kWeightPattern.size());
        const double w_d = 1.0 - w_r;

        double smin = kInf, smax = -kInf, dmin = kInf, dmax = -kInf;
        for (Eigen::Index i = 0; i < m; ++i) {
            if (taken[static_cast<size_t>(i)]) continue;
            smin = std::min(smin, preds(i));
            smax = std::max(smax, preds(i));
            dmin = std::min(dmin, dist(i));
            dmax = std::max(dmax, dist(i));
        }
        if (smin == kInf) {  // pool exhausted
            warn("score_and_select: candidate pool exhausted before batch filled");
            break;
        }

        Eigen::Index best = -1;
        double best_score = kInf;
        for (Eigen::Index i = 0; i < m; ++i) {
            if (taken[static_cast<size_t>(i)]) continue;
            const double s_r = smax > smin ? (preds(i) - smin) / (smax - smin) : 1.0;
            const double s_d = dmax > dmin ? (dmax - dist(i)) / (dmax - dmin) : 1.0;
            const double score = w_r * s_r + w_d * s_d;
            if (score < best_score) {  // ties keep the lowest candidate index
                best_score = score;
                best = i;
            }
        }
        taken[static_cast<size_t>(best)] = 1;
        sel.points.conservativeResize(sel.points.rows() + 1, Eigen::NoChange);
        sel.points.row(sel.points.rows() - 1) = cands.points.row(best);
        sel.w_r.push_back(w_r);

        // Later selections must keep their distance from this batch too.
        for (Eigen::Index i = 0; i < m; ++i) {
            if (taken[static_cast<size_t>(i)]) continue;
            dist(i) = std::min(dist(i), (cands.points.row(i) - cands.points.row(best)).norm());
        }
    }
    return sel;
}

// ---------------------------------------------------------------------------
// SurfMin and maximin

namespace {

double model_at(const Model& model, const Vector& x) { return predict(model, x); }

// Scan the coordinate slice on a coarse grid, then golden-section the
// bracketing interval. Good enough for a local minimum of a cheap model.
double line_minimize(const Model& model, Vector& x, int coord, double lo, double hi) {
    constexpr int kScan = 33;
    double best_t = x(coord), best_f = model_at(model, x);
    int best_k = -1;
    for (int k = 0; k < kScan; ++k) {
        const double t = lo + (hi - lo) * k / (kScan - 1);
        x(coord) = t;
        const double f = model_at(model, x);
        if (f < best_f) {
            best_f = f;
            best_t = t;
            best_k = k;
        }
    }
    double a = lo, b = hi;
    if (best_k >= 0) {
        a = lo + (hi - lo) * std::max(0, best_k - 1) / (kScan - 1);
        b = lo + (hi - lo) * std::min(kScan - 1, best_k + 1) / (kScan - 1);
    }
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    x(coord) = c;
    double fc = model_at(model, x);
    x(coord) = d;
    double fd = model_at(model, x);
    for (int it = 0; it < 60 && (b - a) > 1e-12 * (hi - lo); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            x(coord) = c;
            fc = model_at(model, x);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            x(coord) = d;
            fd = model_at(model, x);
        }
    }
    const double t = 0.5 * (a + b);
    x(coord) = t;
    const double f = model_at(model, x);
    if (f <= best_f) return f;
    x(coord) = best_t;
    return best_f;
}

Vector coordinate_descent(const Model& model, const ProblemSpec& spec, Vector x) {
    double f = model_at(model, x);
    for (int sweep = 0; sweep < 50; ++sweep) {
        const double f_before = f;
        for (int i = 0; i < spec.dim; ++i)
            f = line_minimize(model, x, i, spec.lower(i), spec.upper(i));
        if (f_before - f <= 1e-12 * (1.0 + std::abs(f_before))) break;
    }
    return x;
}

Vector surrogate_min_continuous(const Model& model, const ProblemSpec& spec, Rng& rng) {
    Vector best;
    double best_f = kInf;
    for (int s = 0; s < 3; ++s) {  // multistart local descent
        Vector x = coordinate_descent(model, spec, random_feasible_point(spec, rng));
        const double f = model_at(model, x);
        if (f < best_f) {
            best_f = f;
            best = x;
        }
    }
    return best;
}

// Steady-state evolutionary search honoring integrality: tournament
// parents, uniform crossover, per-coordinate mutation, keep-best merge.
Vector surrogate_min_evolutionary(const Model& model, const ProblemSpec& spec, Rng& rng) {
    const int d = spec.dim;
    const int pop_size = 20 * d;
    const int generations = 50;

    Matrix pop(pop_size, d);
    for (int i = 0; i < pop_size; ++i)
        pop.row(i) = random_feasible_point(spec, rng).transpose();
    Vector fit = predict(model, pop);

    std::uniform_int_distribution<int> pick(0, pop_size - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<int> mag(1, 3);
    const double p_mut = 1.0 / d;

    auto tournament = [&]() {
        const int a = pick(rng), b = pick(rng);
        return fit(a) <= fit(b) ? a : b;
    };

    for (int g = 0; g < generations; ++g) {
        Matrix kids(pop_size, d);
        for (int c = 0; c < pop_size; ++c) {
            const int pa = tournament(), pb = tournament();
            Vector x(d);
            for (int i = 0; i < d; ++i) x(i) = unit(rng) < 0.5 ? pop(pa, i) : pop(pb, i);
            for (int i = 0; i < d; ++i) {
                if (unit(rng) >= p_mut) continue;
                if (spec.is_integer(i)) {
                    const int step = mag(rng);
                    const double sign = unit(rng) < 0.5 ? 1.0 : -1.0;
                    x(i) = std::clamp(x(i) + sign * step, spec.lower(i), spec.upper(i));
                } else {
                    const double w = spec.upper(i) - spec.lower(i);
                    x(i) = std::clamp(x(i) + 0.1 * w * gauss(rng), spec.lower(i), spec.upper(i));
                }
            }
            kids.row(c) = x.transpose();
        }
        const Vector kid_fit = predict(model, kids);
        // mu+lambda: keep the best pop_size of parents+children (stable).
        std::vector<int> order(static_cast<size_t>(2 * pop_size));
        std::iota(order.begin(), order.end(), 0);
        auto value = [&](int i) { return i < pop_size ? fit(i) : kid_fit(i - pop_size); };
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return value(a) < value(b); });
        Matrix next(pop_size, d);
        Vector next_fit(pop_size);
        for (int i = 0; i < pop_size; ++i) {
            const int o = order[static_cast<size_t>(i)];
            next.row(i) = o < pop_size ? pop.row(o) : kids.row(o - pop_size);
            next_fit(i) = value(o);
        }
        pop = std::move(next);
        fit = std::move(next_fit);
    }
    return pop.row(0).transpose();
}

}  // namespace

Vector maximin_point(const Matrix& evaluated, const ProblemSpec& spec, Rng& rng) {
    if (evaluated.rows() == 0)
        throw std::invalid_argument("maximin_point: evaluated set is empty");
    const int n_draws = 1000 * spec.dim;
    Matrix draws(n_draws, spec.dim);
    for (int i = 0; i < n_draws; ++i)
        draws.row(i) = random_feasible_point(spec, rng).transpose();
    const Vector dist = kernels::min_distances(draws, evaluated);
    Eigen::Index best = 0;
    dist.maxCoeff(&best);
    return draws.row(best).transpose();
}

Vector surfmin_point(const Model& model, const ProblemSpec& spec,
                     const Matrix& evaluated, Rng& rng) {
    Vector x;
    try {
        x = spec.pure_continuous() ? surrogate_min_continuous(model, spec, rng)
                                   : surrogate_min_evolutionary(model, spec, rng);
    } catch (const std::exception& e) {
        warn(std::string("SurfMin inner search failed (") + e.what() +
             "); falling back to the maximin point");
        return maximin_point(evaluated, spec, rng);
    }
    if (evaluated.rows() > 0) {
        Matrix one = x.transpose();
        if (kernels::min_distances(one, evaluated)(0) < dedup_tolerance(spec))
            return maximin_point(evaluated, spec, rng);
    }
    return x;
}

}  // namespace surropt
