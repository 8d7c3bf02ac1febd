#include "surropt/design.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace surropt {

namespace {

double min_pairwise_distance(const Matrix& X) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index j = i + 1; j < X.rows(); ++j)
            best = std::min(best, (X.row(i) - X.row(j)).norm());
    return best;
}

void round_integer_coords(Matrix& X, const ProblemSpec& spec) {
    for (int c : spec.integer_idx)
        for (Eigen::Index r = 0; r < X.rows(); ++r)
            X(r, c) = std::clamp(std::round(X(r, c)), spec.lower(c), spec.upper(c));
}

bool has_duplicate_rows(const Matrix& X) {
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index j = i + 1; j < X.rows(); ++j)
            if ((X.row(i) - X.row(j)).norm() == 0.0) return true;
    return false;
}

Matrix dedup_rows(const Matrix& X) {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        bool dup = false;
        for (Eigen::Index k : keep)
            if ((X.row(i) - X.row(k)).norm() == 0.0) { dup = true; break; }
        if (!dup) keep.push_back(i);
    }
    Matrix out(static_cast<Eigen::Index>(keep.size()), X.cols());
    for (size_t i = 0; i < keep.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = X.row(keep[i]);
    return out;
}

// Distinct points are impossible when the whole integer lattice is smaller
// than the requested design.
void check_integer_capacity(int n, const ProblemSpec& spec) {
    if (!spec.pure_integer()) return;
    double lattice = 1.0;
    for (int i = 0; i < spec.dim; ++i)
        lattice *= spec.upper(i) - spec.lower(i) + 1.0;
    if (static_cast<double>(n) > lattice) {
        std::ostringstream os;
        os << "design size " << n << " exceeds the " << lattice
           << " distinct integer points of the box; duplicate rows are unavoidable";
        throw config_error(os.str());
    }
}

// One stratified draw: column j is a random permutation of the n strata,
// with a uniform offset inside each stratum.
Matrix lhd_draw(int n, const ProblemSpec& spec, Rng& rng) {
    const int d = spec.dim;
    Matrix X(n, d);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<int> perm(static_cast<size_t>(n));
    for (int j = 0; j < d; ++j) {
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        const double w = (spec.upper(j) - spec.lower(j)) / n;
        for (int i = 0; i < n; ++i)
            X(i, j) = spec.lower(j) + (perm[static_cast<size_t>(i)] + unit(rng)) * w;
    }
    return X;
}

Matrix slhd_draw(int n, const ProblemSpec& spec, Rng& rng) {
    const int d = spec.dim;
    const int m = n / 2;  // row pairs; odd n adds a center row at index n-1
    Matrix X(n, d);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);

    std::vector<int> perm(static_cast<size_t>(m));
    for (int j = 0; j < d; ++j) {
        const double lo = spec.lower(j), w = (spec.upper(j) - lo) / n;
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        for (int i = 0; i < m; ++i) {
            int a = perm[static_cast<size_t>(i)];
            int b = n - 1 - a;
            if (coin(rng)) std::swap(a, b);
            const double u = unit(rng);
            // Mirrored offsets keep x + x' = lower + upper exact.
            X(i, j) = lo + (a + u) * w;
            X(m + i, j) = lo + (b + (1.0 - u)) * w;
        }
        if (n % 2 == 1) X(n - 1, j) = lo + 0.5 * (spec.upper(j) - lo);
    }
    return X;
}

using DrawFn = Matrix (*)(int, const ProblemSpec&, Rng&);

DesignMatrix finish_design(int n, const ProblemSpec& spec, Rng& rng, DrawFn draw,
                           bool maximin_of_k, int k_draws, DesignKind kind) {
    check_integer_capacity(n, spec);
    Matrix best;
    for (int attempt = 0; attempt < 100; ++attempt) {
        Matrix X;
        if (maximin_of_k) {
            double best_score = -1.0;
            for (int k = 0; k < k_draws; ++k) {
                Matrix cand = draw(n, spec, rng);
                const double score = min_pairwise_distance(cand);
                if (score > best_score) {
                    best_score = score;
                    X = std::move(cand);
                }
            }
        } else {
            X = draw(n, spec, rng);
        }
        round_integer_coords(X, spec);
        if (!has_duplicate_rows(X)) return {std::move(X), kind};
        if (attempt == 0) best = X;  // keep the first for the dedup fallback
    }
    warn("design still has duplicate rows after 100 attempts; deduplicating");
    return {dedup_rows(best), kind};
}

}  // namespace

DesignMatrix latin_hypercube(int n, const ProblemSpec& spec, Rng& rng, int k_draws) {
    if (n < 2) throw config_error("Latin hypercube design needs n >= 2");
    if (k_draws < 1) k_draws = 1;
    return finish_design(n, spec, rng, lhd_draw, true, k_draws, DesignKind::LHD);
}

DesignMatrix symmetric_lhd(int n, const ProblemSpec& spec, Rng& rng) {
    if (n < 2) throw config_error("symmetric Latin hypercube design needs n >= 2");
    return finish_design(n, spec, rng, slhd_draw, false, 0, DesignKind::SLHD);
}

DesignMatrix corner_design(int n, const ProblemSpec& spec, Rng& rng) {
    const int d = spec.dim;
    if (n < 1) throw config_error("corner design needs n >= 1");
    if (d > 20)
        throw config_error("corner design enumerates 2^d corners; d > 20 unsupported");
    const std::uint64_t n_corners = std::uint64_t{1} << d;
    if (static_cast<std::uint64_t>(n) > n_corners + 1)
        throw config_error("corner design size " + std::to_string(n) + " exceeds 2^d+1 = " +
                           std::to_string(n_corners + 1));

    auto corner_coord = [&](std::uint64_t mask, int j) {
        return (mask >> j) & 1u ? spec.upper(j) : spec.lower(j);
    };
    // Squared distance between corners: the sides where the masks differ.
    auto corner_dist2 = [&](std::uint64_t a, std::uint64_t b) {
        double s = 0.0;
        std::uint64_t diff = a ^ b;
        for (int j = 0; j < d; ++j)
            if ((diff >> j) & 1u) {
                const double w = spec.upper(j) - spec.lower(j);
                s += w * w;
            }
        return s;
    };

    const int want = n - 1;  // corners besides the center
    std::vector<std::uint64_t> chosen;
    if (want > 0) {
        std::uniform_int_distribution<std::uint64_t> pick(0, n_corners - 1);
        chosen.push_back(pick(rng));
        std::vector<double> min_d2(n_corners, std::numeric_limits<double>::infinity());
        while (static_cast<int>(chosen.size()) < want) {
            for (std::uint64_t c = 0; c < n_corners; ++c)
                min_d2[c] = std::min(min_d2[c], corner_dist2(chosen.back(), c));
            std::uint64_t best_c = 0;
            double best_v = -1.0;
            for (std::uint64_t c = 0; c < n_corners; ++c) {
                if (min_d2[c] > best_v) {  // ties keep the lowest corner index
                    best_v = min_d2[c];
                    best_c = c;
                }
            }
            chosen.push_back(best_c);
        }
    }

    Matrix X(n, d);
    for (int i = 0; i < want; ++i)
        for (int j = 0; j < d; ++j) X(i, j) = corner_coord(chosen[static_cast<size_t>(i)], j);
    for (int j = 0; j < d; ++j) X(n - 1, j) = 0.5 * (spec.lower(j) + spec.upper(j));
    round_integer_coords(X, spec);

    if (has_duplicate_rows(X)) {
        warn("corner design has duplicate rows after integer rounding; deduplicating");
        X = dedup_rows(X);
    }
    return {std::move(X), DesignKind::CORNER};
}

DesignMatrix build_design(DesignKind kind, int n, const ProblemSpec& spec, Rng& rng) {
    switch (kind) {
        case DesignKind::LHD: return latin_hypercube(n, spec, rng);
        case DesignKind::SLHD: return symmetric_lhd(n, spec, rng);
        case DesignKind::CORNER: return corner_design(n, spec, rng);
    }
    throw std::logic_error("unknown design kind");
}

Matrix load_start_points(const std::string& path, const ProblemSpec& spec) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open start-points file: " + path);
    std::vector<Vector> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream is(line);
        std::vector<double> vals;
        double v;
        while (is >> v) vals.push_back(v);
        if (vals.empty()) continue;
        if (static_cast<int>(vals.size()) != spec.dim)
            throw config_error(path + ":" + std::to_string(lineno) + ": expected " +
                               std::to_string(spec.dim) + " coordinates");
        Vector x = Eigen::Map<const Vector>(vals.data(), spec.dim);
        if (!spec.in_bounds(x))
            throw config_error(path + ":" + std::to_string(lineno) +
                               ": start point out of bounds");
        if (!spec.integrality_ok(x))
            throw config_error(path + ":" + std::to_string(lineno) +
                               ": start point violates integrality");
        rows.push_back(std::move(x));
    }
    Matrix out(static_cast<Eigen::Index>(rows.size()), spec.dim);
    for (size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = rows[i];
    return out;
}

}  // namespace surropt
