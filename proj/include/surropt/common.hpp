#ifndef SURROPT_COMMON_HPP
#define SURROPT_COMMON_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace surropt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Rng = std::mt19937_64;

/// Bad user input: problem files, option values, infeasible requests.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// The black box misbehaved: non-finite value, failed external process.
class objective_error : public std::runtime_error {
public:
    explicit objective_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical breakdown: singular or hopelessly ill-conditioned fit systems.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Non-fatal diagnostics go to stderr; tests may swallow them.
void warn(const std::string& msg);

}  // namespace surropt

#endif
