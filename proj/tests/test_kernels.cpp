#include <doctest.h>

#include <cmath>
#include <random>

#include "surropt/kernels.hpp"

using surropt::Matrix;
using surropt::RbfKernel;
using surropt::Vector;
namespace kernels = surropt::kernels;

namespace {

Matrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = u(rng);
    return m;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("radial kernel values") {
    CHECK(kernels::phi(2.0, RbfKernel::Cubic) == 8.0);
    CHECK(kernels::phi(3.0, RbfKernel::Linear) == 3.0);
    CHECK(kernels::phi(2.0, RbfKernel::ThinPlate) == doctest::Approx(4.0 * std::log(2.0)));
    CHECK(kernels::phi(0.0, RbfKernel::ThinPlate) == 0.0);  // limit value, no log blowup
    CHECK(kernels::phi(0.0, RbfKernel::Cubic) == 0.0);
}

TEST_CASE("omp kernels match the serial reference bitwise") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const int m = 17 + 431 * trial, n = 3 + 19 * trial, d = 1 + trial;
        const Matrix A = random_matrix(m, d, rng);
        const Matrix B = random_matrix(n, d, rng);

        const Vector ds = kernels::serial::min_distances(A, B);
        const Vector dp = kernels::min_distances(A, B);
        CHECK((ds - dp).cwiseAbs().maxCoeff() == 0.0);

        for (RbfKernel k : {RbfKernel::Cubic, RbfKernel::ThinPlate, RbfKernel::Linear}) {
            const Matrix ps = kernels::serial::rbf_phi(A, B, k);
            const Matrix pp = kernels::rbf_phi(A, B, k);
            CHECK((ps - pp).cwiseAbs().maxCoeff() == 0.0);
        }
    }
}

TEST_CASE("min distance against a hand-computed set") {
    Matrix A(2, 2);
    A << 0.0, 0.0, 3.0, 4.0;
    Matrix B(2, 2);
    B << 1.0, 0.0, 3.0, 0.0;
    const Vector d = kernels::min_distances(A, B);
    CHECK(d(0) == doctest::Approx(1.0));
    CHECK(d(1) == doctest::Approx(4.0));
}

TEST_CASE("empty reference set gives infinite distances") {
    std::mt19937_64 rng(5);
    const Matrix A = random_matrix(4, 3, rng);
    const Matrix B(0, 3);
    const Vector d = kernels::min_distances(A, B);
    for (int i = 0; i < 4; ++i) CHECK(std::isinf(d(i)));
}

}  // TEST_SUITE
