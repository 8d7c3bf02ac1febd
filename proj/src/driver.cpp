#include "surropt/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "surropt/design.hpp"
#include "surropt/surrogate.hpp"

namespace surropt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

SamplerState update_counters(SamplerState state, bool improved, int d) {
    if (improved) {
        state.success_count += 1;
        state.fail_count = 0;
        if (state.success_count > 3) {
            state.sigma = std::min(1.0, state.sigma * 2.0);
            state.success_count = 0;
        }
    } else {
        state.fail_count += 1;
        state.success_count = 0;
        if (state.fail_count > std::max(5, d)) {
            state.sigma *= 0.5;
            state.reduction_count += 1;
            state.fail_count = 0;
        }
    }
    return state;
}

bool should_restart(const SamplerState& state) { return state.reduction_count > 5; }

std::vector<double> evaluate_batch(const ProblemSpec& spec, const Matrix& points,
                                   int workers, std::vector<double>* seconds) {
    const Eigen::Index p = points.rows();
    std::vector<double> values(static_cast<size_t>(p), 0.0);
    std::vector<double> times(static_cast<size_t>(p), 0.0);
    std::vector<std::string> errors(static_cast<size_t>(p));
    if (workers < 1) workers = 1;
    const int threads = static_cast<int>(std::min<Eigen::Index>(workers, std::max<Eigen::Index>(p, 1)));

    auto eval_one = [&](Eigen::Index i) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            values[static_cast<size_t>(i)] = evaluate(spec, points.row(i).transpose());
        } catch (const std::exception& e) {
            errors[static_cast<size_t>(i)] = e.what();
        }
        times[static_cast<size_t>(i)] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    if (threads <= 1) {
        for (Eigen::Index i = 0; i < p; ++i) eval_one(i);
    } else {
#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (Eigen::Index i = 0; i < p; ++i) eval_one(i);
    }

    for (Eigen::Index i = 0; i < p; ++i) {
        if (errors[static_cast<size_t>(i)].empty()) continue;
        std::ostringstream os;
        os << "batch evaluation failed at point " << i + 1 << " of " << p << " (";
        for (Eigen::Index j = 0; j < points.cols(); ++j)
            os << (j ? " " : "") << points(i, j);
        os << "): " << errors[static_cast<size_t>(i)];
        throw objective_error(os.str());
    }
    if (seconds) *seconds = std::move(times);
    return values;
}

namespace {

void append_rows(Matrix& M, const Matrix& rows) {
    const Eigen::Index old = M.rows();
    M.conservativeResize(old + rows.rows(), rows.cols());
    M.bottomRows(rows.rows()) = rows;
}

struct Incumbent {
    Vector point;
    double value = kInf;
    void offer(const Vector& x, double v) {
        if (v < value) {
            value = v;
            point = x;
        }
    }
};

}  // namespace

RunResult optimize(const ProblemSpec& spec, const DriverOptions& opts) {
    const int d = spec.dim;
    DriverOptions o = opts;
    if (o.max_evals <= 0) o.max_evals = 50L * d;
    if (o.batch < 1) throw config_error("batch must be >= 1");
    if (o.workers < 1) throw config_error("workers must be >= 1");

    const int min_sz = min_design_size(o.surrogate, d);
    if (o.design_size == 0)
        o.design_size = std::max(2 * (d + 1), min_sz);
    else if (o.design_size < min_sz)
        throw config_error("design size " + std::to_string(o.design_size) +
                           " is below the minimum " + std::to_string(min_sz) +
                           " required by surrogate " + to_string(o.surrogate));

    const Eigen::Index n_user = o.start_points.rows();
    if (n_user > 0) {
        if (o.start_points.cols() != d)
            throw config_error("start points have wrong dimension");
        for (Eigen::Index i = 0; i < n_user; ++i) {
            const Vector x = o.start_points.row(i).transpose();
            if (!spec.in_bounds(x) || !spec.integrality_ok(x))
                throw config_error("start point " + std::to_string(i + 1) +
                                   " is infeasible");
        }
    }
    if (o.max_evals < o.design_size + n_user)
        throw config_error("evaluation budget " + std::to_string(o.max_evals) +
                           " is smaller than one initial design (" +
                           std::to_string(o.design_size + n_user) + ")");

    Rng rng(o.seed);
    RunResult res;
    Incumbent global;
    long evals = 0;
    int epoch = 0;

    auto record_batch = [&](const Matrix& pts, const std::vector<double>& vals,
                            const std::vector<double>& times,
                            const std::vector<double>& w_r, double sigma) {
        for (Eigen::Index i = 0; i < pts.rows(); ++i) {
            EvaluationRecord rec;
            rec.point = pts.row(i).transpose();
            rec.value = vals[static_cast<size_t>(i)];
            rec.eval_index = ++evals;
            rec.epoch = epoch;
            rec.wall_time = times[static_cast<size_t>(i)];
            res.history.push_back(std::move(rec));
            RecordAnnotation ann;
            ann.sigma = sigma;
            if (static_cast<size_t>(i) < w_r.size()) ann.w_r = w_r[static_cast<size_t>(i)];
            res.annotations.push_back(ann);
        }
    };

    while (evals < o.max_evals) {
        const long remaining = o.max_evals - evals;
        const long user_rows = epoch == 0 ? n_user : 0;
        const int n0 = static_cast<int>(std::min<long>(o.design_size, remaining - user_rows));
        if (n0 < min_sz) break;  // too little budget left to restart

        Matrix pts = build_design(o.design, n0, spec, rng).points;
        if (user_rows > 0) {
            for (Eigen::Index i = 0; i < n_user; ++i) {
                bool dup = false;
                for (Eigen::Index j = 0; j < pts.rows(); ++j)
                    dup = dup || (pts.row(j) - o.start_points.row(i)).norm() == 0.0;
                if (dup) {
                    warn("user start point duplicates a design row; dropped");
                    continue;
                }
                append_rows(pts, o.start_points.row(i));
            }
        }

        res.epochs.push_back({epoch, evals + 1,
                              epoch == 0 ? "initial" : "range-reduction-limit"});

        std::vector<double> times;
        std::vector<double> vals = evaluate_batch(spec, pts, o.workers, &times);
        record_batch(pts, vals, times, {}, 1.0);

        Matrix epoch_pts = pts;
        Vector epoch_vals = Eigen::Map<const Vector>(vals.data(),
                                                     static_cast<Eigen::Index>(vals.size()));
        Incumbent epoch_best;
        for (Eigen::Index i = 0; i < epoch_pts.rows(); ++i)
            epoch_best.offer(epoch_pts.row(i).transpose(), epoch_vals(i));
        global.offer(epoch_best.point, epoch_best.value);

        SamplerState state;
        while (evals < o.max_evals) {
            const int p_eff = static_cast<int>(std::min<long>(o.batch, o.max_evals - evals));
            const int fit_n = static_cast<int>(epoch_pts.rows());
            const Model model = fit_model(o.surrogate, epoch_pts, epoch_vals);
            Vector ens_w;
            if (const auto* ens = std::get_if<EnsembleModel>(&model)) ens_w = ens->weights;

            Matrix sel;
            std::vector<double> w_r_used;
            if (o.sampling == SamplingTag::SurfMin) {
                sel = surfmin_point(model, spec, epoch_pts, rng).transpose();
                Matrix ref = epoch_pts;  // batch fills with maximin points
                while (sel.rows() < p_eff) {
                    append_rows(ref, sel.bottomRows(1));
                    append_rows(sel, maximin_point(ref, spec, rng).transpose());
                }
            } else {
                const SearchMode mode = o.sampling == SamplingTag::CANDglob
                                            ? SearchMode::Global
                                            : SearchMode::Local;
                const CandidateSet cs =
                    gen_candidates(epoch_best.point, spec, mode, state, epoch_pts, rng);
                if (cs.points.rows() > 0) {
                    Selection s = score_and_select(cs, model, epoch_pts, state, p_eff);
                    sel = std::move(s.points);
                    w_r_used = std::move(s.w_r);
                }
                if (sel.rows() == 0) {
                    // Degenerate candidate set; fall back to space-filling.
                    sel = maximin_point(epoch_pts, spec, rng).transpose();
                }
            }

            const double sigma_at_selection = state.sigma;
            const long first_idx = evals + 1;
            vals = evaluate_batch(spec, sel, o.workers, &times);
            record_batch(sel, vals, times, w_r_used, sigma_at_selection);

            const double batch_min = *std::min_element(vals.begin(), vals.end());
            const bool improved = batch_min < epoch_best.value;
            for (Eigen::Index i = 0; i < sel.rows(); ++i)
                epoch_best.offer(sel.row(i).transpose(), vals[static_cast<size_t>(i)]);
            global.offer(epoch_best.point, epoch_best.value);

            append_rows(epoch_pts, sel);
            const Eigen::Index old_n = epoch_vals.size();
            epoch_vals.conservativeResize(old_n + sel.rows());
            for (Eigen::Index i = 0; i < sel.rows(); ++i)
                epoch_vals(old_n + i) = vals[static_cast<size_t>(i)];

            state = update_counters(state, improved, d);
            res.state_trace.push_back({epoch, first_idx, static_cast<int>(sel.rows()),
                                       fit_n, w_r_used, state, ens_w});
            if (should_restart(state)) break;
        }
        ++epoch;
    }

    res.best_point = global.point;
    res.best_value = global.value;
    return res;
}

}  // namespace surropt
