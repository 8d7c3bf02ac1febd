#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "surropt/problem.hpp"

using namespace surropt;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = "/tmp/surropt_test_" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_SUITE("problem") {

TEST_CASE("load_problem maps fields directly") {
    const auto path = write_temp("branin.cfg",
                                 "dim = 2\n"
                                 "lower = -5 0\n"
                                 "upper = 10 15\n"
                                 "integer_idx =\n"
                                 "objective.kind = builtin\n"
                                 "objective.name = branin\n");
    const ProblemSpec spec = load_problem(path);
    CHECK(spec.dim == 2);
    CHECK(spec.d1() == 2);
    CHECK(spec.d2() == 0);
    CHECK(spec.lower(0) == -5.0);
    CHECK(spec.upper(1) == 15.0);
    CHECK(spec.name == "branin");
}

TEST_CASE("integer index set cardinality") {
    const auto path = write_temp("mixed.cfg",
                                 "dim = 4\n"
                                 "lower = 0 0 0 0\n"
                                 "upper = 9 9 9 9\n"
                                 "integer_idx = 1 2\n"
                                 "objective.kind = builtin\n"
                                 "objective.name = sphere\n");
    const ProblemSpec spec = load_problem(path);
    CHECK(spec.d1() == 2);
    CHECK(spec.d2() == 2);
    CHECK(spec.is_integer(0));
    CHECK(spec.is_integer(1));
    CHECK_FALSE(spec.is_integer(2));
}

TEST_CASE("integer bounds are rounded inward") {
    const auto path = write_temp("round.cfg",
                                 "dim = 1\n"
                                 "lower = 0.3\n"
                                 "upper = 4.7\n"
                                 "integer_idx = 1\n"
                                 "objective.kind = builtin\n"
                                 "objective.name = sphere\n");
    const ProblemSpec spec = load_problem(path);
    // Oracle: inward rounding is ceil on the lower, floor on the upper.
    CHECK(spec.lower(0) == std::ceil(0.3));
    CHECK(spec.upper(0) == std::floor(4.7));
    CHECK(spec.lower(0) == 1.0);
    CHECK(spec.upper(0) == 4.0);
}

TEST_CASE("load errors") {
    CHECK_THROWS_AS(load_problem("/nonexistent/file.cfg"), config_error);
    CHECK_THROWS_AS(
        load_problem(write_temp("nobounds.cfg",
                                "dim = 2\nlower = 0 0\n"
                                "objective.kind = builtin\nobjective.name = sphere\n")),
        config_error);
    CHECK_THROWS_AS(
        load_problem(write_temp("badbox.cfg",
                                "dim = 1\nlower = 2\nupper = 2\n"
                                "objective.kind = builtin\nobjective.name = sphere\n")),
        config_error);
    CHECK_THROWS_AS(
        load_problem(write_temp("badidx.cfg",
                                "dim = 2\nlower = 0 0\nupper = 1 1\ninteger_idx = 3\n"
                                "objective.kind = builtin\nobjective.name = sphere\n")),
        config_error);
    CHECK_THROWS_AS(
        load_problem(write_temp("badname.cfg",
                                "dim = 2\nlower = 0 0\nupper = 1 1\n"
                                "objective.kind = builtin\nobjective.name = nosuchfn\n")),
        config_error);
}

TEST_CASE("sphere at the origin") {
    const ProblemSpec spec = builtin_problem("sphere", 3);
    CHECK(evaluate(spec, Vector::Zero(3)) == 0.0);
}

TEST_CASE("branin global minimum against a dense grid") {
    const ProblemSpec spec = builtin_problem("branin", 2);
    CHECK(spec.lower(0) == -5.0);
    CHECK(spec.upper(0) == 10.0);
    CHECK(spec.lower(1) == 0.0);
    CHECK(spec.upper(1) == 15.0);

    // Grid oracle for the global minimum value.
    double grid_min = std::numeric_limits<double>::infinity();
    const int g = 400;
    for (int i = 0; i <= g; ++i)
        for (int j = 0; j <= g; ++j) {
            Vector x(2);
            x << -5.0 + 15.0 * i / g, 15.0 * j / g;
            grid_min = std::min(grid_min, evaluate(spec, x));
        }
    CHECK(grid_min == doctest::Approx(0.397887).epsilon(1e-2));

    Vector xstar(2);
    xstar << std::numbers::pi, 2.275;
    const double fstar = evaluate(spec, xstar);
    CHECK(fstar == doctest::Approx(0.397887).epsilon(1e-5));
    CHECK(fstar <= grid_min + 1e-6);
}

TEST_CASE("ackley canonical box and optimum") {
    const ProblemSpec spec = builtin_problem("ackley", 10);
    CHECK(spec.dim == 10);
    for (int i = 0; i < 10; ++i) {
        CHECK(spec.lower(i) == -32.768);
        CHECK(spec.upper(i) == 32.768);
    }
    CHECK(std::abs(evaluate(spec, Vector::Zero(10))) < 1e-12);
}

TEST_CASE("integer and mixed variants") {
    const ProblemSpec pi = builtin_problem("rastrigin-int", 5);
    CHECK(pi.d2() == 5);
    CHECK(pi.pure_integer());
    CHECK(pi.lower(0) == -5.0);  // 5.12 rounded inward
    CHECK(pi.upper(0) == 5.0);

    const ProblemSpec pm = builtin_problem("ackley-mi", 5);
    CHECK(pm.d2() == 2);
    CHECK(pm.d1() == 3);

    CHECK_THROWS_AS(builtin_problem("branin", 3), config_error);
    CHECK_THROWS_AS(builtin_problem("nosuch", 2), config_error);
    CHECK_THROWS_AS(builtin_problem("sphere-mi", 1), config_error);
}

TEST_CASE("builtin evaluation is deterministic") {
    const ProblemSpec spec = builtin_problem("rastrigin", 4);
    Vector x(4);
    x << 1.5, -2.25, 0.125, 3.0;
    CHECK(evaluate(spec, x) == evaluate(spec, x));
}

TEST_CASE("evaluate rejects infeasible points and non-finite values") {
    const ProblemSpec spec = builtin_problem("sphere", 2);
    Vector out(2);
    out << 99.0, 0.0;
    CHECK_THROWS_AS(evaluate(spec, out), std::invalid_argument);

    const ProblemSpec ispec = builtin_problem("sphere-int", 2);
    Vector frac(2);
    frac << 0.5, 1.0;
    CHECK_THROWS_AS(evaluate(ispec, frac), std::invalid_argument);

    const ProblemSpec bad = make_problem(
        1, Vector::Constant(1, -1.0), Vector::Constant(1, 1.0), {},
        [](const Vector&) { return std::nan(""); }, "nan");
    CHECK_THROWS_AS(evaluate(bad, Vector::Zero(1)), objective_error);
}

TEST_CASE("external command objectives") {
    const Objective echo = make_command_objective("echo 3.5");
    Vector x(2);
    x << 1.0, 2.0;
    CHECK(echo(x) == 3.5);

    // The point arrives on stdin as one line; this doubles x1.
    const Objective dbl = make_command_objective("read a b; echo \"$a\" | awk '{print 2*$1}'");
    Vector y(2);
    y << 4.0, 7.0;
    CHECK(dbl(y) == doctest::Approx(8.0));

    const Objective fail = make_command_objective("exit 3");
    CHECK_THROWS_AS(fail(x), objective_error);
    const Objective garbage = make_command_objective("echo not-a-number");
    CHECK_THROWS_AS(garbage(x), objective_error);
}

TEST_CASE("command objective through a full spec") {
    const auto path = write_temp("cmd.cfg",
                                 "dim = 2\n"
                                 "lower = -1 -1\n"
                                 "upper = 1 1\n"
                                 "objective.kind = command\n"
                                 "objective.cmd = echo 3.5\n");
    const ProblemSpec spec = load_problem(path);
    CHECK(evaluate(spec, Vector::Zero(2)) == 3.5);
}

}  // TEST_SUITE
