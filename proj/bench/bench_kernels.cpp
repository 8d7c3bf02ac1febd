// Timing comparison of the OpenMP kernels against their serial references.
// Run manually: build/bench/bench_kernels [reps]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "surropt/kernels.hpp"

using surropt::Matrix;
using surropt::Vector;
namespace kernels = surropt::kernels;

namespace {

Matrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = u(rng);
    return m;
}

template <typename F>
double time_ms(int reps, F&& f) {
    volatile double sink = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) sink += f();
    const auto t1 = std::chrono::steady_clock::now();
    (void)sink;
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main(int argc, char** argv) {
    const int reps = argc > 1 ? std::atoi(argv[1]) : 5;
    std::mt19937_64 rng(42);

    std::printf("%-34s %12s %12s %9s\n", "kernel", "serial ms", "omp ms", "speedup");

    for (auto [m, n, d] : {std::tuple{20000, 100, 10}, {50000, 200, 10}, {100000, 400, 20}}) {
        const Matrix A = random_matrix(m, d, rng);
        const Matrix B = random_matrix(n, d, rng);

        const Vector ref = kernels::serial::min_distances(A, B);
        const Vector par = kernels::min_distances(A, B);
        if ((ref - par).cwiseAbs().maxCoeff() != 0.0) {
            std::fprintf(stderr, "min_distances mismatch at m=%d n=%d d=%d\n", m, n, d);
            return 1;
        }
        const double ts = time_ms(reps, [&] { return kernels::serial::min_distances(A, B)(0); });
        const double tp = time_ms(reps, [&] { return kernels::min_distances(A, B)(0); });
        std::printf("min_distances %6dx%-3d vs %5d    %12.3f %12.3f %8.2fx\n", m, d, n,
                    ts, tp, ts / tp);

        const Matrix phis = kernels::serial::rbf_phi(A.topRows(m / 4), B,
                                                     surropt::RbfKernel::Cubic);
        const Matrix phip = kernels::rbf_phi(A.topRows(m / 4), B, surropt::RbfKernel::Cubic);
        if ((phis - phip).cwiseAbs().maxCoeff() != 0.0) {
            std::fprintf(stderr, "rbf_phi mismatch at m=%d n=%d d=%d\n", m, n, d);
            return 1;
        }
        const double ps = time_ms(reps, [&] {
            return kernels::serial::rbf_phi(A.topRows(m / 4), B, surropt::RbfKernel::Cubic)(0, 0);
        });
        const double pp = time_ms(reps, [&] {
            return kernels::rbf_phi(A.topRows(m / 4), B, surropt::RbfKernel::Cubic)(0, 0);
        });
        std::printf("rbf_phi       %6dx%-3d vs %5d    %12.3f %12.3f %8.2fx\n", m / 4, d, n,
                    ps, pp, ps / pp);
    }
    return 0;
}
