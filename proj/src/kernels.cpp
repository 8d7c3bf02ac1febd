#include "surropt/kernels.hpp"

#include <cmath>
#include <limits>

namespace surropt::kernels {

double phi(double r, RbfKernel kernel) {
    switch (kernel) {
        case RbfKernel::Cubic: return r * r * r;
        case RbfKernel::ThinPlate: return r > 0.0 ? r * r * std::log(r) : 0.0;
        case RbfKernel::Linear: return r;
    }
    return 0.0;
}

namespace {

inline double min_dist_row(const Matrix& A, const Matrix& B, Eigen::Index i) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < B.rows(); ++j) {
        const double d2 = (A.row(i) - B.row(j)).squaredNorm();
        if (d2 < best) best = d2;
    }
    return std::sqrt(best);
}

inline void phi_row(const Matrix& X, const Matrix& C, RbfKernel k, Matrix& out,
                    Eigen::Index i) {
    for (Eigen::Index j = 0; j < C.rows(); ++j)
        out(i, j) = phi((X.row(i) - C.row(j)).norm(), k);
}

}  // namespace

Vector min_distances(const Matrix& A, const Matrix& B) {
    Vector out(A.rows());
    if (B.rows() == 0) {
        out.setConstant(std::numeric_limits<double>::infinity());
        return out;
    }
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < A.rows(); ++i) out(i) = min_dist_row(A, B, i);
    return out;
}

Matrix rbf_phi(const Matrix& X, const Matrix& centers, RbfKernel kernel) {
    Matrix out(X.rows(), centers.rows());
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < X.rows(); ++i) phi_row(X, centers, kernel, out, i);
    return out;
}

namespace serial {

Vector min_distances(const Matrix& A, const Matrix& B) {
    Vector out(A.rows());
    if (B.rows() == 0) {
        out.setConstant(std::numeric_limits<double>::infinity());
        return out;
    }
    for (Eigen::Index i = 0; i < A.rows(); ++i) out(i) = min_dist_row(A, B, i);
    return out;
}

Matrix rbf_phi(const Matrix& X, const Matrix& centers, RbfKernel kernel) {
    Matrix out(X.rows(), centers.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) phi_row(X, centers, kernel, out, i);
    return out;
}

}  // namespace serial

}  // namespace surropt::kernels
