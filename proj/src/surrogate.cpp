#include "surropt/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "surropt/kernels.hpp"

namespace surropt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Sizes

int min_design_size(SurrogateTag tag, int d) {
    using S = SurrogateTag;
    switch (tag) {
        case S::RBFcub:
        case S::RBFtps:
        case S::RBFlin: return d + 1;
        case S::MARS: return d + 2;
        case S::POLYlin: return d + 2;
        case S::POLYquad: return (d + 1) * (d + 2) / 2 + 1;
        case S::POLYquadr: return 2 * d + 2;
        case S::POLYcub: return (d + 1) * (d + 2) * (d + 3) / 6 + 1;
        case S::POLYcubr: return 3 * d + 2;
        default: {
            int m = 0;
            for (SurrogateTag t : mixture_members(tag))
                m = std::max(m, min_design_size(t, d));
            return m;
        }
    }
}

int mars_default_max_terms(int d) { return std::min(21, 2 * d + 1); }

// ---------------------------------------------------------------------------
// RBF

RbfModel fit_rbf(const Matrix& points, const Vector& values, RbfKernel kernel) {
    const Eigen::Index n = points.rows();
    const Eigen::Index d = points.cols();
    if (n < d + 1)
        throw std::invalid_argument("fit_rbf: need at least d+1 = " +
                                    std::to_string(d + 1) + " points, got " +
                                    std::to_string(n));
    if (values.size() != n)
        throw std::invalid_argument("fit_rbf: points/values size mismatch");

    Matrix P(n, d + 1);
    P.col(0).setOnes();
    P.rightCols(d) = points;
    if (Eigen::ColPivHouseholderQR<Matrix>(P).rank() < d + 1)
        throw numerical_error(
            "fit_rbf: polynomial tail basis is rank-deficient (points are "
            "affinely degenerate), n=" + std::to_string(n));

    const Eigen::Index m = n + d + 1;
    Matrix A = Matrix::Zero(m, m);
    A.topLeftCorner(n, n) = kernels::rbf_phi(points, points, kernel);
    A.block(0, n, n, d + 1) = P;
    A.block(n, 0, d + 1, n) = P.transpose();
    Vector rhs = Vector::Zero(m);
    rhs.head(n) = values;

    Eigen::FullPivLU<Matrix> lu(A);
    const double rc = lu.rcond();
    if (!lu.isInvertible() || !(rc > 1e-12)) {
        double min_pair = kInf;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j)
                min_pair = std::min(min_pair, (points.row(i) - points.row(j)).norm());
        std::ostringstream os;
        os << "fit_rbf: interpolation system is singular or ill-conditioned "
           << "(rcond=" << rc << ", n=" << n << ", min pairwise distance="
           << min_pair << ")";
        throw numerical_error(os.str());
    }

    const Vector sol = lu.solve(rhs);
    RbfModel mdl;
    mdl.centers = points;
    mdl.lambda = sol.head(n);
    mdl.tail = sol.tail(d + 1);
    mdl.kernel = kernel;
    return mdl;
}

double predict(const RbfModel& m, const Vector& x) {
    if (x.size() != m.centers.cols())
        throw std::invalid_argument("predict: point dimension mismatch");
    double s = m.tail(0);
    for (Eigen::Index i = 0; i < m.centers.cols(); ++i) s += m.tail(i + 1) * x(i);
    for (Eigen::Index j = 0; j < m.centers.rows(); ++j)
        s += m.lambda(j) * kernels::phi((x.transpose() - m.centers.row(j)).norm(), m.kernel);
    return s;
}

// ---------------------------------------------------------------------------
// Polynomials

const std::vector<std::vector<int>>& poly_basis(int dim, PolyVariant variant) {
    static std::map<std::pair<int, int>, std::vector<std::vector<int>>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(dim, static_cast<int>(variant));
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::vector<std::vector<int>> b;
    b.push_back({});  // constant
    for (int i = 0; i < dim; ++i) b.push_back({i});
    switch (variant) {
        case PolyVariant::Lin: break;
        case PolyVariant::QuadR:
            for (int i = 0; i < dim; ++i) b.push_back({i, i});
            break;
        case PolyVariant::CubR:
            for (int i = 0; i < dim; ++i) b.push_back({i, i});
            for (int i = 0; i < dim; ++i) b.push_back({i, i, i});
            break;
        case PolyVariant::Quad:
            for (int i = 0; i < dim; ++i)
                for (int j = i; j < dim; ++j) b.push_back({i, j});
            break;
        case PolyVariant::Cub:
            for (int i = 0; i < dim; ++i)
                for (int j = i; j < dim; ++j) b.push_back({i, j});
            for (int i = 0; i < dim; ++i)
                for (int j = i; j < dim; ++j)
                    for (int k = j; k < dim; ++k) b.push_back({i, j, k});
            break;
    }
    return cache.emplace(key, std::move(b)).first->second;
}

namespace {

double eval_monomial(const std::vector<int>& mono, const Vector& x) {
    double v = 1.0;
    for (int idx : mono) v *= x(idx);
    return v;
}

Matrix poly_design_matrix(const Matrix& points, const std::vector<std::vector<int>>& basis) {
    Matrix A(points.rows(), static_cast<Eigen::Index>(basis.size()));
    for (Eigen::Index r = 0; r < points.rows(); ++r) {
        const Vector x = points.row(r).transpose();
        for (size_t c = 0; c < basis.size(); ++c)
            A(r, static_cast<Eigen::Index>(c)) = eval_monomial(basis[c], x);
    }
    return A;
}

}  // namespace

PolyModel fit_poly(const Matrix& points, const Vector& values, PolyVariant variant) {
    if (values.size() != points.rows())
        throw std::invalid_argument("fit_poly: points/values size mismatch");
    PolyModel m;
    m.dim = static_cast<int>(points.cols());
    m.variant = variant;
    m.basis = poly_basis(m.dim, variant);
    const Matrix A = poly_design_matrix(points, m.basis);
    // Minimum-norm least squares; rank-deficient designs must not crash.
    m.beta = A.completeOrthogonalDecomposition().solve(values);
    return m;
}

double predict(const PolyModel& m, const Vector& x) {
    if (x.size() != m.dim)
        throw std::invalid_argument("predict: point dimension mismatch");
    double s = 0.0;
    for (size_t c = 0; c < m.basis.size(); ++c)
        s += m.beta(static_cast<Eigen::Index>(c)) * eval_monomial(m.basis[c], x);
    return s;
}

// ---------------------------------------------------------------------------
// MARS

namespace {

double hinge(const HingeFactor& h, double xv) {
    const double t = h.sign > 0 ? xv - h.knot : h.knot - xv;
    return t > 0.0 ? t : 0.0;
}

double eval_term(const MarsTerm& term, const Vector& x) {
    double v = 1.0;
    for (const auto& f : term.factors) v *= hinge(f, x(f.var));
    return v;
}

Vector term_column(const MarsTerm& term, const Matrix& X) {
    Vector c = Vector::Ones(X.rows());
    for (const auto& f : term.factors)
        for (Eigen::Index r = 0; r < X.rows(); ++r) c(r) *= hinge(f, X(r, f.var));
    return c;
}

double mars_gcv(double rss, int n, int n_terms, int n_knots, double penalty) {
    const double enp = n_terms + penalty * n_knots;
    if (enp >= n) return kInf;
    const double den = 1.0 - enp / n;
    return (rss / n) / (den * den);
}

int count_knots(const std::vector<MarsTerm>& terms) {
    std::set<std::pair<int, double>> ks;
    for (const auto& t : terms)
        for (const auto& f : t.factors) ks.insert({f.var, f.knot});
    return static_cast<int>(ks.size());
}

// Candidate knots: all distinct data values (thinned evenly past 50).
std::vector<double> knot_candidates(const Matrix& X, int var) {
    std::vector<double> v(static_cast<size_t>(X.rows()));
    for (Eigen::Index r = 0; r < X.rows(); ++r) v[static_cast<size_t>(r)] = X(r, var);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    const size_t cap = 50;
    if (v.size() <= cap) return v;
    std::vector<double> out;
    out.reserve(cap);
    for (size_t k = 0; k < cap; ++k)
        out.push_back(v[k * (v.size() - 1) / (cap - 1)]);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct LsFit {
    Vector coef;
    double rss = 0.0;
};

LsFit least_squares(const Matrix& B, const Vector& y) {
    LsFit f;
    f.coef = B.completeOrthogonalDecomposition().solve(y);
    f.rss = (y - B * f.coef).squaredNorm();
    return f;
}

}  // namespace

MarsModel fit_mars(const Matrix& points, const Vector& values, int max_terms,
                   int max_interaction, double gcv_penalty) {
    const int n = static_cast<int>(points.rows());
    const int d = static_cast<int>(points.cols());
    if (n < d + 2)
        throw std::invalid_argument("fit_mars: need at least d+2 points");
    if (max_terms < 1) max_terms = 1;
    if (max_interaction < 1) max_interaction = 1;

    std::vector<std::vector<double>> knots(static_cast<size_t>(d));
    for (int v = 0; v < d; ++v) knots[static_cast<size_t>(v)] = knot_candidates(points, v);

    std::vector<MarsTerm> terms{MarsTerm{}};
    Matrix B = Matrix::Ones(n, 1);

    // Orthonormal basis of span(B) and the current LS residual; candidate
    // pairs are scored by projecting their columns against these.
    Matrix Q = Matrix::Ones(n, 1) / std::sqrt(static_cast<double>(n));
    Vector resid = values - Q.col(0) * Q.col(0).dot(values);
    double rss = resid.squaredNorm();
    double cur_gcv = mars_gcv(rss, n, 1, 0, gcv_penalty);

    const double col_tol = 1e-10 * std::sqrt(static_cast<double>(n));

    auto project_out = [&](Vector c) {
        c -= Q * (Q.transpose() * c);
        c -= Q * (Q.transpose() * c);  // second pass for orthogonality
        return c;
    };

    while (static_cast<int>(terms.size()) + 2 <= max_terms) {
        int best_parent = -1, best_var = -1;
        double best_knot = 0.0, best_gcv = cur_gcv;

        for (size_t m = 0; m < terms.size(); ++m) {
            if (static_cast<int>(terms[m].factors.size()) >= max_interaction) continue;
            for (int v = 0; v < d; ++v) {
                bool used = false;
                for (const auto& f : terms[m].factors) used = used || f.var == v;
                if (used) continue;
                for (double t : knots[static_cast<size_t>(v)]) {
                    Vector c1(n), c2(n);
                    for (int r = 0; r < n; ++r) {
                        const double b = B(r, static_cast<Eigen::Index>(m));
                        const double xv = points(r, v);
                        c1(r) = b * std::max(0.0, xv - t);
                        c2(r) = b * std::max(0.0, t - xv);
                    }
                    double red = 0.0;
                    Vector u1 = project_out(c1);
                    const double n1 = u1.norm();
                    if (n1 > col_tol) {
                        u1 /= n1;
                        const double p = u1.dot(resid);
                        red += p * p;
                    }
                    Vector u2 = project_out(c2);
                    if (n1 > col_tol) u2 -= u1 * u1.dot(u2);
                    const double n2 = u2.norm();
                    if (n2 > col_tol) {
                        const double p = u2.dot(resid) / n2;
                        red += p * p;
                    }
                    std::pair<int, double> key{v, t};
                    int nk = count_knots(terms);
                    bool have = false;
                    for (const auto& tm : terms)
                        for (const auto& f : tm.factors)
                            have = have || (f.var == v && f.knot == t);
                    if (!have) ++nk;
                    const double g = mars_gcv(rss - red, n,
                                              static_cast<int>(terms.size()) + 2, nk,
                                              gcv_penalty);
                    if (g < best_gcv) {
                        best_gcv = g;
                        best_parent = static_cast<int>(m);
                        best_var = v;
                        best_knot = t;
                    }
                }
            }
        }
        if (best_parent < 0) break;  // no GCV-improving split

        for (int sign : {+1, -1}) {
            MarsTerm t = terms[static_cast<size_t>(best_parent)];
            t.factors.push_back({best_var, best_knot, sign});
            terms.push_back(t);
            const Vector col = term_column(t, points);
            B.conservativeResize(Eigen::NoChange, B.cols() + 1);
            B.col(B.cols() - 1) = col;
            Vector u = project_out(col);
            const double nu = u.norm();
            if (nu > col_tol) {
                u /= nu;
                Q.conservativeResize(Eigen::NoChange, Q.cols() + 1);
                Q.col(Q.cols() - 1) = u;
                resid -= u * u.dot(resid);
            }
        }
        rss = resid.squaredNorm();
        cur_gcv = mars_gcv(rss, n, static_cast<int>(terms.size()),
                           count_knots(terms), gcv_penalty);
    }

    const double forward_gcv = cur_gcv;

    // Backward pass: walk removal sequences, keep the best subset seen.
    std::vector<size_t> current(terms.size());
    for (size_t i = 0; i < terms.size(); ++i) current[i] = i;
    std::vector<size_t> best_set = current;
    double best_gcv = forward_gcv;

    auto subset_fit = [&](const std::vector<size_t>& idx) {
        Matrix Bs(n, static_cast<Eigen::Index>(idx.size()));
        std::vector<MarsTerm> ts;
        for (size_t c = 0; c < idx.size(); ++c) {
            Bs.col(static_cast<Eigen::Index>(c)) = B.col(static_cast<Eigen::Index>(idx[c]));
            ts.push_back(terms[idx[c]]);
        }
        LsFit f = least_squares(Bs, values);
        return std::make_pair(f, mars_gcv(f.rss, n, static_cast<int>(idx.size()),
                                          count_knots(ts), gcv_penalty));
    };

    while (current.size() > 1) {
        double level_best = kInf;
        size_t drop = 0;
        for (size_t k = 1; k < current.size(); ++k) {  // never drop the intercept
            std::vector<size_t> trial = current;
            trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(k));
            const double g = subset_fit(trial).second;
            if (g < level_best) {
                level_best = g;
                drop = k;
            }
        }
        current.erase(current.begin() + static_cast<std::ptrdiff_t>(drop));
        if (level_best < best_gcv) {
            best_gcv = level_best;
            best_set = current;
        }
    }

    MarsModel mdl;
    mdl.dim = d;
    for (size_t i : best_set) mdl.terms.push_back(terms[i]);
    auto [fit, gcv] = subset_fit(best_set);
    mdl.coef = fit.coef;
    mdl.gcv = gcv;
    mdl.forward_gcv = forward_gcv;
    return mdl;
}

double predict(const MarsModel& m, const Vector& x) {
    if (x.size() != m.dim)
        throw std::invalid_argument("predict: point dimension mismatch");
    double s = 0.0;
    for (size_t i = 0; i < m.terms.size(); ++i)
        s += m.coef(static_cast<Eigen::Index>(i)) * eval_term(m.terms[i], x);
    return s;
}

// ---------------------------------------------------------------------------
// Ensembles (cross-validation evidence + Dempster's rule)

namespace {

constexpr double kEvidenceMass = 0.9;  // per-statistic mass on singletons

BaseModel fit_base(SurrogateTag tag, const Matrix& pts, const Vector& vals) {
    using S = SurrogateTag;
    switch (tag) {
        case S::RBFcub: return fit_rbf(pts, vals, RbfKernel::Cubic);
        case S::RBFtps: return fit_rbf(pts, vals, RbfKernel::ThinPlate);
        case S::RBFlin: return fit_rbf(pts, vals, RbfKernel::Linear);
        case S::MARS:
            return fit_mars(pts, vals, mars_default_max_terms(static_cast<int>(pts.cols())), 2);
        case S::POLYlin: return fit_poly(pts, vals, PolyVariant::Lin);
        case S::POLYquad: return fit_poly(pts, vals, PolyVariant::Quad);
        case S::POLYquadr: return fit_poly(pts, vals, PolyVariant::QuadR);
        case S::POLYcub: return fit_poly(pts, vals, PolyVariant::Cub);
        case S::POLYcubr: return fit_poly(pts, vals, PolyVariant::CubR);
        default: throw std::logic_error("fit_base: mixture tag");
    }
}

double pearson(const Vector& a, const Vector& b) {
    const double ma = a.mean(), mb = b.mean();
    const Vector da = a.array() - ma, db = b.array() - mb;
    const double den = da.norm() * db.norm();
    return den > 0.0 ? da.dot(db) / den : 0.0;
}

struct Bpa {
    Vector singleton;  // mass per member
    double theta = 1.0;
};

Bpa evidence_bpa(const Vector& goodness) {
    const Eigen::Index k = goodness.size();
    Bpa b;
    b.singleton = Vector::Zero(k);
    const double lo = goodness.minCoeff(), hi = goodness.maxCoeff();
    if (hi - lo < 1e-15) {
        b.singleton.setConstant(kEvidenceMass / static_cast<double>(k));
    } else {
        Vector norm = (goodness.array() - lo) / (hi - lo);
        b.singleton = kEvidenceMass * norm / norm.sum();
    }
    b.theta = 1.0 - b.singleton.sum();
    return b;
}

Bpa dempster_combine(const Bpa& a, const Bpa& b) {
    const Eigen::Index k = a.singleton.size();
    Bpa c;
    c.singleton = Vector::Zero(k);
    for (Eigen::Index i = 0; i < k; ++i)
        c.singleton(i) = a.singleton(i) * b.singleton(i) +
                         a.singleton(i) * b.theta + a.theta * b.singleton(i);
    c.theta = a.theta * b.theta;
    const double mass = c.singleton.sum() + c.theta;  // = 1 - conflict
    c.singleton /= mass;
    c.theta /= mass;
    return c;
}

}  // namespace

EnsembleModel fit_ensemble(const Matrix& points, const Vector& values,
                           const std::vector<SurrogateTag>& member_tags) {
    if (member_tags.empty())
        throw std::invalid_argument("fit_ensemble: no member tags");
    const int n = static_cast<int>(points.rows());
    const int d = static_cast<int>(points.cols());

    EnsembleModel ens;
    for (SurrogateTag tag : member_tags) {
        try {
            BaseModel m = fit_base(tag, points, values);
            ens.members.push_back(std::move(m));
            ens.member_tags.push_back(tag);
        } catch (const std::exception& e) {
            warn("ensemble member " + to_string(tag) + " failed to fit: " + e.what());
        }
    }
    if (ens.members.empty())
        throw numerical_error("fit_ensemble: every member failed to fit");

    const size_t k = ens.members.size();
    if (k == 1) {
        ens.weights = Vector::Ones(1);
        return ens;
    }

    const int folds = n <= 50 ? n : 10;
    int min_train = n;
    for (int f = 0; f < folds; ++f) {
        int held = 0;
        for (int i = f; i < n; i += folds) ++held;
        min_train = std::min(min_train, n - held);
    }
    int need = 0;
    for (SurrogateTag tag : ens.member_tags)
        need = std::max(need, min_design_size(tag, d));
    if (min_train < need) {
        warn("ensemble: too few points for cross-validation; using equal weights");
        ens.weights = Vector::Constant(static_cast<Eigen::Index>(k), 1.0 / static_cast<double>(k));
        return ens;
    }

    // Out-of-fold predictions per member (fold of row i is i mod folds).
    Matrix preds(n, static_cast<Eigen::Index>(k));
    std::vector<bool> cv_ok(k, true);
    for (int f = 0; f < folds; ++f) {
        std::vector<int> train, held;
        for (int i = 0; i < n; ++i) (i % folds == f ? held : train).push_back(i);
        Matrix tp(static_cast<Eigen::Index>(train.size()), d);
        Vector tv(static_cast<Eigen::Index>(train.size()));
        for (size_t i = 0; i < train.size(); ++i) {
            tp.row(static_cast<Eigen::Index>(i)) = points.row(train[i]);
            tv(static_cast<Eigen::Index>(i)) = values(train[i]);
        }
        for (size_t m = 0; m < k; ++m) {
            if (!cv_ok[m]) continue;
            try {
                BaseModel fold_model = fit_base(ens.member_tags[m], tp, tv);
                for (int i : held)
                    preds(i, static_cast<Eigen::Index>(m)) = std::visit(
                        [&](const auto& mm) { return predict(mm, Vector(points.row(i).transpose())); },
                        fold_model);
            } catch (const std::exception&) {
                cv_ok[m] = false;
            }
        }
    }

    std::vector<size_t> ok;
    for (size_t m = 0; m < k; ++m)
        if (cv_ok[m]) ok.push_back(m);
    if (ok.size() < 2) {
        warn("ensemble: cross-validation failed for all but " +
             std::to_string(ok.size()) + " member(s); using equal weights");
        ens.weights = Vector::Constant(static_cast<Eigen::Index>(k), 1.0 / static_cast<double>(k));
        return ens;
    }

    // Three evidence statistics per member, each turned into a BPA by
    // scaling to relative [0,1] goodness, then Dempster-combined; the
    // pignistic transform spreads the residual uncertainty mass evenly.
    const Eigen::Index ko = static_cast<Eigen::Index>(ok.size());
    Vector g_corr(ko), g_rmse(ko), g_maxe(ko);
    for (Eigen::Index j = 0; j < ko; ++j) {
        const Vector p = preds.col(static_cast<Eigen::Index>(ok[static_cast<size_t>(j)]));
        const Vector err = p - values;
        g_corr(j) = pearson(p, values);
        g_rmse(j) = -std::sqrt(err.squaredNorm() / n);
        g_maxe(j) = -err.cwiseAbs().maxCoeff();
    }
    Bpa combined = dempster_combine(
        dempster_combine(evidence_bpa(g_corr), evidence_bpa(g_rmse)),
        evidence_bpa(g_maxe));

    Vector w = Vector::Zero(static_cast<Eigen::Index>(k));
    for (Eigen::Index j = 0; j < ko; ++j)
        w(static_cast<Eigen::Index>(ok[static_cast<size_t>(j)])) =
            combined.singleton(j) + combined.theta / static_cast<double>(ko);
    ens.weights = w / w.sum();
    return ens;
}

Model fit_model(SurrogateTag tag, const Matrix& points, const Vector& values) {
    if (is_mixture(tag)) return fit_ensemble(points, values, mixture_members(tag));
    return std::visit([](auto&& m) -> Model { return std::move(m); },
                      fit_base(tag, points, values));
}

// ---------------------------------------------------------------------------
// Prediction

double predict(const EnsembleModel& m, const Vector& x) {
    double s = 0.0;
    for (size_t i = 0; i < m.members.size(); ++i)
        s += m.weights(static_cast<Eigen::Index>(i)) *
             std::visit([&](const auto& mm) { return predict(mm, x); }, m.members[i]);
    return s;
}

double predict(const Model& m, const Vector& x) {
    return std::visit([&](const auto& mm) { return predict(mm, x); }, m);
}

namespace {

template <typename M>
Vector predict_rows(const M& m, const Matrix& X) {
    Vector out(X.rows());
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        out(i) = predict(m, Vector(X.row(i).transpose()));
    return out;
}

}  // namespace

Vector predict(const BaseModel& m, const Matrix& X) {
    return std::visit(
        [&](const auto& mm) -> Vector {
            using T = std::decay_t<decltype(mm)>;
            if constexpr (std::is_same_v<T, RbfModel>) {
                if (X.cols() != mm.centers.cols())
                    throw std::invalid_argument("predict: point dimension mismatch");
                Vector out = kernels::rbf_phi(X, mm.centers, mm.kernel) * mm.lambda;
                out.array() += mm.tail(0);
                out += X * mm.tail.tail(mm.centers.cols());
                return out;
            } else {
                return predict_rows(mm, X);
            }
        },
        m);
}

Vector predict(const Model& m, const Matrix& X) {
    if (const auto* ens = std::get_if<EnsembleModel>(&m)) {
        Vector out = Vector::Zero(X.rows());
        for (size_t i = 0; i < ens->members.size(); ++i)
            out += ens->weights(static_cast<Eigen::Index>(i)) * predict(ens->members[i], X);
        return out;
    }
    return std::visit(
        [&](const auto& mm) -> Vector {
            using T = std::decay_t<decltype(mm)>;
            if constexpr (std::is_same_v<T, EnsembleModel>) {
                return Vector{};  // handled above
            } else {
                return predict(BaseModel(mm), X);
            }
        },
        m);
}

// ---------------------------------------------------------------------------
// Diagnostic dump / parse

namespace {

void dump_vector(std::ostream& os, const Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? " " : "") << v(i);
    os << "\n";
}

Vector read_vector(std::istream& is, Eigen::Index n, const char* what) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(is >> v(i))) throw config_error(std::string("model dump: bad ") + what);
    return v;
}

void expect_word(std::istream& is, const std::string& want) {
    std::string w;
    if (!(is >> w) || w != want)
        throw config_error("model dump: expected '" + want + "', got '" + w + "'");
}

void dump_base(std::ostream& os, const BaseModel& m);
BaseModel parse_base(std::istream& is);

void dump_rbf(std::ostream& os, const RbfModel& m) {
    const Eigen::Index n = m.centers.rows(), d = m.centers.cols();
    os << "type rbf\nkernel " << to_string(m.kernel) << "\ndim " << d << "\nn " << n << "\n";
    for (Eigen::Index i = 0; i < n; ++i) {
        os << "center ";
        dump_vector(os, m.centers.row(i).transpose());
    }
    os << "lambda ";
    dump_vector(os, m.lambda);
    os << "tail ";
    dump_vector(os, m.tail);
}

RbfModel parse_rbf(std::istream& is) {
    RbfModel m;
    std::string kernel;
    Eigen::Index d = 0, n = 0;
    expect_word(is, "kernel");
    is >> kernel;
    if (kernel == "cubic") m.kernel = RbfKernel::Cubic;
    else if (kernel == "thin-plate") m.kernel = RbfKernel::ThinPlate;
    else if (kernel == "linear") m.kernel = RbfKernel::Linear;
    else throw config_error("model dump: unknown kernel " + kernel);
    expect_word(is, "dim");
    is >> d;
    expect_word(is, "n");
    is >> n;
    m.centers.resize(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        expect_word(is, "center");
        m.centers.row(i) = read_vector(is, d, "center").transpose();
    }
    expect_word(is, "lambda");
    m.lambda = read_vector(is, n, "lambda");
    expect_word(is, "tail");
    m.tail = read_vector(is, d + 1, "tail");
    return m;
}

void dump_poly(std::ostream& os, const PolyModel& m) {
    os << "type poly\nvariant " << to_string(m.variant) << "\ndim " << m.dim << "\nbeta ";
    dump_vector(os, m.beta);
}

PolyModel parse_poly(std::istream& is) {
    PolyModel m;
    std::string variant;
    expect_word(is, "variant");
    is >> variant;
    if (variant == "lin") m.variant = PolyVariant::Lin;
    else if (variant == "quad") m.variant = PolyVariant::Quad;
    else if (variant == "quadr") m.variant = PolyVariant::QuadR;
    else if (variant == "cub") m.variant = PolyVariant::Cub;
    else if (variant == "cubr") m.variant = PolyVariant::CubR;
    else throw config_error("model dump: unknown poly variant " + variant);
    expect_word(is, "dim");
    is >> m.dim;
    m.basis = poly_basis(m.dim, m.variant);
    expect_word(is, "beta");
    m.beta = read_vector(is, static_cast<Eigen::Index>(m.basis.size()), "beta");
    return m;
}

void dump_mars(std::ostream& os, const MarsModel& m) {
    os << "type mars\ndim " << m.dim << "\nnterms " << m.terms.size() << "\n";
    for (const auto& t : m.terms) {
        os << "term " << t.factors.size();
        for (const auto& f : t.factors)
            os << " " << f.sign << " " << f.var << " " << f.knot;
        os << "\n";
    }
    os << "coef ";
    dump_vector(os, m.coef);
    os << "gcv " << m.gcv << " " << m.forward_gcv << "\n";
}

MarsModel parse_mars(std::istream& is) {
    MarsModel m;
    size_t nterms = 0;
    expect_word(is, "dim");
    is >> m.dim;
    expect_word(is, "nterms");
    is >> nterms;
    for (size_t i = 0; i < nterms; ++i) {
        expect_word(is, "term");
        size_t nf = 0;
        is >> nf;
        MarsTerm t;
        for (size_t f = 0; f < nf; ++f) {
            HingeFactor h;
            is >> h.sign >> h.var >> h.knot;
            t.factors.push_back(h);
        }
        m.terms.push_back(std::move(t));
    }
    expect_word(is, "coef");
    m.coef = read_vector(is, static_cast<Eigen::Index>(nterms), "coef");
    expect_word(is, "gcv");
    is >> m.gcv >> m.forward_gcv;
    if (!is) throw config_error("model dump: truncated mars model");
    return m;
}

void dump_base(std::ostream& os, const BaseModel& m) {
    std::visit(
        [&](const auto& mm) {
            using T = std::decay_t<decltype(mm)>;
            if constexpr (std::is_same_v<T, RbfModel>) dump_rbf(os, mm);
            else if constexpr (std::is_same_v<T, PolyModel>) dump_poly(os, mm);
            else dump_mars(os, mm);
        },
        m);
}

BaseModel parse_base(std::istream& is) {
    expect_word(is, "type");
    std::string type;
    is >> type;
    if (type == "rbf") return parse_rbf(is);
    if (type == "poly") return parse_poly(is);
    if (type == "mars") return parse_mars(is);
    throw config_error("model dump: unknown type " + type);
}

}  // namespace

std::string dump_model(const Model& m) {
    std::ostringstream os;
    os.precision(17);
    os << "surropt-model v1\n";
    if (const auto* ens = std::get_if<EnsembleModel>(&m)) {
        os << "type ensemble\nmembers " << ens->members.size() << "\nweights ";
        dump_vector(os, ens->weights);
        for (size_t i = 0; i < ens->members.size(); ++i) {
            os << "member " << to_string(ens->member_tags[i]) << "\n";
            dump_base(os, ens->members[i]);
        }
    } else {
        std::visit(
            [&](const auto& mm) {
                using T = std::decay_t<decltype(mm)>;
                if constexpr (!std::is_same_v<T, EnsembleModel>) dump_base(os, BaseModel(mm));
            },
            m);
    }
    return os.str();
}

Model parse_model_dump(const std::string& text) {
    std::istringstream is(text);
    expect_word(is, "surropt-model");
    expect_word(is, "v1");
    std::streampos mark = is.tellg();
    expect_word(is, "type");
    std::string type;
    is >> type;
    if (type == "ensemble") {
        EnsembleModel ens;
        size_t k = 0;
        expect_word(is, "members");
        is >> k;
        expect_word(is, "weights");
        ens.weights = read_vector(is, static_cast<Eigen::Index>(k), "weights");
        for (size_t i = 0; i < k; ++i) {
            expect_word(is, "member");
            std::string tag;
            is >> tag;
            ens.member_tags.push_back(parse_surrogate_tag(tag));
            ens.members.push_back(parse_base(is));
        }
        return ens;
    }
    is.seekg(mark);
    return std::visit([](auto&& mm) -> Model { return std::move(mm); }, parse_base(is));
}

}  // namespace surropt
