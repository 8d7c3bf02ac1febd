#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "surropt/design.hpp"
#include "surropt/surrogate.hpp"

using namespace surropt;

namespace {

ProblemSpec box_problem(Vector lower, Vector upper, std::vector<int> integer_idx = {}) {
    const int d = static_cast<int>(lower.size());
    return make_problem(d, std::move(lower), std::move(upper), std::move(integer_idx),
                        [](const Vector& x) { return x.squaredNorm(); }, "box");
}

ProblemSpec unit_box(int d) {
    return box_problem(Vector::Zero(d), Vector::Ones(d));
}

int stratum(double x, double lo, double hi, int n) {
    const int s = static_cast<int>(std::floor((x - lo) / (hi - lo) * n));
    return std::clamp(s, 0, n - 1);
}

double min_pairwise(const Matrix& X) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index j = i + 1; j < X.rows(); ++j)
            best = std::min(best, (X.row(i) - X.row(j)).norm());
    return best;
}

}  // namespace

TEST_SUITE("design") {

TEST_CASE("latin hypercube columns are stratified") {
    const ProblemSpec spec = unit_box(2);
    Rng rng(42);
    const DesignMatrix dm = latin_hypercube(5, spec, rng);
    REQUIRE(dm.points.rows() == 5);
    for (int j = 0; j < 2; ++j) {
        std::set<int> strata;
        for (int i = 0; i < 5; ++i)
            strata.insert(stratum(dm.points(i, j), 0.0, 1.0, 5));
        CHECK(strata.size() == 5);  // each of the n bins hit exactly once
    }
}

TEST_CASE("integer 1-d design is a permutation of the lattice") {
    const ProblemSpec spec = box_problem(Vector::Zero(1), Vector::Constant(1, 3.0), {0});
    Rng rng(7);
    const DesignMatrix dm = latin_hypercube(4, spec, rng);
    std::multiset<double> vals;
    for (int i = 0; i < 4; ++i) vals.insert(dm.points(i, 0));
    CHECK(vals == std::multiset<double>({0.0, 1.0, 2.0, 3.0}));
}

TEST_CASE("maximin pick beats typical draws") {
    const ProblemSpec spec = unit_box(3);
    Rng rng(19);
    const DesignMatrix dm = latin_hypercube(10, spec, rng, 20);
    const double chosen = min_pairwise(dm.points);
    // The argmax of 20 draws should beat at least half of 20 fresh ones.
    Rng other(991);
    int beaten = 0;
    for (int k = 0; k < 20; ++k) {
        const DesignMatrix fresh = latin_hypercube(10, spec, other, 1);
        if (min_pairwise(fresh.points) <= chosen) ++beaten;
    }
    CHECK(beaten >= 10);
}

TEST_CASE("designs are reproducible from the seed") {
    const ProblemSpec spec = unit_box(4);
    Rng a(123), b(123);
    const DesignMatrix da = latin_hypercube(8, spec, a);
    const DesignMatrix db = latin_hypercube(8, spec, b);
    CHECK((da.points - db.points).cwiseAbs().maxCoeff() == 0.0);
    Rng c(123), d(123);
    CHECK((symmetric_lhd(8, spec, c).points - symmetric_lhd(8, spec, d).points)
              .cwiseAbs()
              .maxCoeff() == 0.0);
}

TEST_CASE("symmetric design pairs rows around the box center") {
    const ProblemSpec spec = box_problem(Vector::Zero(2), Vector::Ones(2));
    Rng rng(3);
    const DesignMatrix dm = symmetric_lhd(4, spec, rng);
    REQUIRE(dm.points.rows() == 4);
    for (int i = 0; i < 4; ++i) {
        bool has_mirror = false;
        for (int j = 0; j < 4; ++j) {
            const Vector sum = dm.points.row(i) + dm.points.row(j);
            has_mirror = has_mirror || (sum - Vector::Ones(2)).cwiseAbs().maxCoeff() < 1e-12;
        }
        CHECK(has_mirror);
    }
}

TEST_CASE("odd symmetric design contains the exact center") {
    const ProblemSpec spec = unit_box(1);
    Rng rng(8);
    const DesignMatrix dm = symmetric_lhd(3, spec, rng);
    bool center = false;
    for (int i = 0; i < 3; ++i) center = center || dm.points(i, 0) == 0.5;
    CHECK(center);
}

TEST_CASE("symmetric design strata pair to n+1") {
    const ProblemSpec spec = unit_box(2);
    Rng rng(10);
    const int n = 6;
    const DesignMatrix dm = symmetric_lhd(n, spec, rng);
    // Find each row's mirror, then check the stratum pairing column-wise.
    for (int i = 0; i < n; ++i) {
        int mirror = -1;
        for (int j = 0; j < n; ++j) {
            const Vector sum = dm.points.row(i) + dm.points.row(j);
            if ((sum - Vector::Ones(2)).cwiseAbs().maxCoeff() < 1e-12) mirror = j;
        }
        REQUIRE(mirror >= 0);
        for (int c = 0; c < 2; ++c) {
            const int k = stratum(dm.points(i, c), 0.0, 1.0, n);
            const int kp = stratum(dm.points(mirror, c), 0.0, 1.0, n);
            CHECK(k + kp == n - 1);  // 1-based: k + k' = n + 1
        }
        std::set<int> strata;
        for (int r = 0; r < n; ++r) strata.insert(stratum(dm.points(r, 0), 0.0, 1.0, n));
        CHECK(strata.size() == static_cast<size_t>(n));
    }
}

TEST_CASE("full corner design on the unit square") {
    const ProblemSpec spec = unit_box(2);
    Rng rng(4);
    const DesignMatrix dm = corner_design(5, spec, rng);
    REQUIRE(dm.points.rows() == 5);
    std::set<std::pair<double, double>> got;
    for (int i = 0; i < 5; ++i) got.insert({dm.points(i, 0), dm.points(i, 1)});
    const std::set<std::pair<double, double>> want{
        {0, 0}, {1, 0}, {0, 1}, {1, 1}, {0.5, 0.5}};
    CHECK(got == want);
}

TEST_CASE("corner design in one dimension") {
    const ProblemSpec spec = box_problem(Vector::Constant(1, -5.0), Vector::Constant(1, 10.0));
    Rng rng(4);
    const DesignMatrix dm = corner_design(3, spec, rng);
    std::multiset<double> got;
    for (int i = 0; i < 3; ++i) got.insert(dm.points(i, 0));
    CHECK(got == std::multiset<double>({-5.0, 2.5, 10.0}));
}

TEST_CASE("greedy corner subset follows the maximin rule") {
    const ProblemSpec spec = unit_box(3);
    Rng rng(15);
    const DesignMatrix dm = corner_design(4, spec, rng);
    REQUIRE(dm.points.rows() == 4);
    // Last row is the center; the rest are corners picked greedily.
    CHECK((dm.points.row(3).transpose() - Vector::Constant(3, 0.5)).norm() == 0.0);

    // Oracle: enumerate all 8 corners and replay the greedy rule.
    std::vector<Vector> corners;
    for (int mask = 0; mask < 8; ++mask) {
        Vector c(3);
        for (int j = 0; j < 3; ++j) c(j) = (mask >> j) & 1 ? 1.0 : 0.0;
        corners.push_back(c);
    }
    std::vector<Vector> chosen{dm.points.row(0).transpose()};
    for (int k = 1; k < 3; ++k) {
        const Vector picked = dm.points.row(k).transpose();
        auto min_dist = [&](const Vector& c) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& s : chosen) best = std::min(best, (c - s).norm());
            return best;
        };
        double best = -1.0;
        for (const auto& c : corners) best = std::max(best, min_dist(c));
        CHECK(min_dist(picked) == doctest::Approx(best));
        chosen.push_back(picked);
    }
}

TEST_CASE("corner design size limit") {
    const ProblemSpec spec = unit_box(2);
    Rng rng(4);
    CHECK_THROWS_AS(corner_design(6, spec, rng), config_error);  // > 2^2 + 1
}

TEST_CASE("minimum design sizes per surrogate") {
    CHECK(min_design_size(SurrogateTag::RBFcub, 5) == 6);
    CHECK(min_design_size(SurrogateTag::RBFtps, 3) == 4);
    CHECK(min_design_size(SurrogateTag::MARS, 4) == 6);
    CHECK(min_design_size(SurrogateTag::POLYlin, 3) == 5);
    // Oracle: count monomials of degree <= 2 in 3 variables, plus one.
    int quad_monomials = 0;
    for (int a = 0; a <= 2; ++a)
        for (int b = 0; a + b <= 2; ++b)
            for (int c = 0; a + b + c <= 2; ++c) ++quad_monomials;
    CHECK(min_design_size(SurrogateTag::POLYquad, 3) == quad_monomials + 1);
    CHECK(min_design_size(SurrogateTag::POLYquad, 3) == 11);
    CHECK(min_design_size(SurrogateTag::POLYquadr, 3) == 8);
    CHECK(min_design_size(SurrogateTag::POLYcub, 2) == 11);  // C(5,3) = 10 monomials
    CHECK(min_design_size(SurrogateTag::POLYcubr, 3) == 11);
    CHECK(min_design_size(SurrogateTag::MIX_RcM, 4) == 6);  // max(5, 6)
    CHECK(min_design_size(SurrogateTag::MIX_RcPq, 2) == 7);
}

TEST_CASE("rbf fit is solvable at exactly the minimum size") {
    // The d+1 minimum comes from the rank condition of the linear tail.
    const int d = 5;
    Rng rng(77);
    const ProblemSpec spec = unit_box(d);
    const DesignMatrix dm = latin_hypercube(min_design_size(SurrogateTag::RBFcub, d), spec, rng);
    Vector f(dm.points.rows());
    for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = dm.points.row(i).squaredNorm();
    const RbfModel m = fit_rbf(dm.points, f, RbfKernel::Cubic);
    for (Eigen::Index i = 0; i < f.size(); ++i)
        CHECK(predict(m, Vector(dm.points.row(i).transpose())) == doctest::Approx(f(i)).epsilon(1e-8));
}

TEST_CASE("impossible integer designs are reported") {
    const ProblemSpec spec = box_problem(Vector::Zero(1), Vector::Ones(1), {0});
    Rng rng(2);
    CHECK_THROWS_AS(latin_hypercube(3, spec, rng), config_error);  // only 2 lattice points
}

TEST_CASE("start point files are validated") {
    const ProblemSpec spec = box_problem(Vector::Zero(2), Vector::Constant(2, 4.0), {1});
    {
        std::ofstream out("/tmp/surropt_test_pts.txt");
        out << "1.5 2\n0.25 4\n";
    }
    const Matrix pts = load_start_points("/tmp/surropt_test_pts.txt", spec);
    REQUIRE(pts.rows() == 2);
    CHECK(pts(0, 1) == 2.0);
    {
        std::ofstream out("/tmp/surropt_test_bad.txt");
        out << "1.5 2.25\n";  // fractional on the integer coordinate
    }
    CHECK_THROWS_AS(load_start_points("/tmp/surropt_test_bad.txt", spec), config_error);
    {
        std::ofstream out("/tmp/surropt_test_oob.txt");
        out << "9 2\n";
    }
    CHECK_THROWS_AS(load_start_points("/tmp/surropt_test_oob.txt", spec), config_error);
}

TEST_CASE("every design row is feasible") {
    const ProblemSpec spec = box_problem(Vector::Constant(3, -2.0), Vector::Constant(3, 7.0), {0, 2});
    Rng rng(31);
    for (auto kind : {DesignKind::LHD, DesignKind::SLHD, DesignKind::CORNER}) {
        const DesignMatrix dm = build_design(kind, 8, spec, rng);
        for (Eigen::Index i = 0; i < dm.points.rows(); ++i) {
            const Vector x = dm.points.row(i).transpose();
            CHECK(spec.in_bounds(x));
            CHECK(spec.integrality_ok(x));
        }
        CHECK(min_pairwise(dm.points) > 0.0);  // rows pairwise distinct
    }
}

}  // TEST_SUITE
