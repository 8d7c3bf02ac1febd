#include "surropt/problem.hpp"

#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

extern char** environ;

namespace surropt {

namespace {

std::string format_point(const Vector& x) {
    std::ostringstream os;
    os.precision(17);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (i) os << ' ';
        os << x(i);
    }
    return os.str();
}

}  // namespace

double ProblemSpec::min_side() const { return (upper - lower).minCoeff(); }

double ProblemSpec::min_continuous_side() const {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < dim; ++i)
        if (!is_integer(i)) best = std::min(best, upper(i) - lower(i));
    if (!std::isfinite(best))
        throw std::logic_error("min_continuous_side: no continuous coordinates");
    return best;
}

bool ProblemSpec::in_bounds(const Vector& x, double tol) const {
    if (x.size() != dim) return false;
    for (int i = 0; i < dim; ++i)
        if (x(i) < lower(i) - tol || x(i) > upper(i) + tol) return false;
    return true;
}

bool ProblemSpec::integrality_ok(const Vector& x, double tol) const {
    for (int i : integer_idx)
        if (std::abs(x(i) - std::round(x(i))) > tol) return false;
    return true;
}

ProblemSpec make_problem(int dim, Vector lower, Vector upper,
                         std::vector<int> integer_idx, Objective objective,
                         std::string name) {
    if (dim < 1) throw config_error("problem dimension must be >= 1");
    if (lower.size() != dim || upper.size() != dim)
        throw config_error("bounds must be given for all " + std::to_string(dim) +
                           " variables");
    for (int i = 0; i < dim; ++i)
        if (!std::isfinite(lower(i)) || !std::isfinite(upper(i)))
            throw config_error("bounds must be finite");

    std::sort(integer_idx.begin(), integer_idx.end());
    integer_idx.erase(std::unique(integer_idx.begin(), integer_idx.end()),
                      integer_idx.end());
    for (int i : integer_idx)
        if (i < 0 || i >= dim)
            throw config_error("integer index " + std::to_string(i + 1) +
                               " out of range 1.." + std::to_string(dim));

    std::vector<bool> mask(static_cast<size_t>(dim), false);
    for (int i : integer_idx) mask[static_cast<size_t>(i)] = true;

    // Integer coordinates get inward-rounded bounds so the box stays feasible.
    for (int i : integer_idx) {
        lower(i) = std::ceil(lower(i));
        upper(i) = std::floor(upper(i));
    }
    for (int i = 0; i < dim; ++i)
        if (!(lower(i) < upper(i)))
            throw config_error("empty box: lower >= upper on coordinate " +
                               std::to_string(i + 1) +
                               (mask[static_cast<size_t>(i)] ? " (after inward rounding)" : ""));

    ProblemSpec spec;
    spec.dim = dim;
    spec.lower = std::move(lower);
    spec.upper = std::move(upper);
    spec.integer_idx = std::move(integer_idx);
    spec.integer_mask = std::move(mask);
    spec.objective = std::move(objective);
    spec.name = std::move(name);
    return spec;
}

double evaluate(const ProblemSpec& spec, const Vector& point) {
    if (point.size() != spec.dim)
        throw std::invalid_argument("evaluate: point dimension " +
                                    std::to_string(point.size()) + " != " +
                                    std::to_string(spec.dim));
    if (!spec.in_bounds(point, 1e-9))
        throw std::invalid_argument("evaluate: point out of bounds: " +
                                    format_point(point));
    if (!spec.integrality_ok(point))
        throw std::invalid_argument("evaluate: integrality violated: " +
                                    format_point(point));
    const double v = spec.objective(point);
    if (!std::isfinite(v))
        throw objective_error("objective returned non-finite value at " +
                              format_point(point));
    return v;
}

// ---------------------------------------------------------------------------
// Builtin test functions

namespace {

double f_sphere(const Vector& x) { return x.squaredNorm(); }

double f_rastrigin(const Vector& x) {
    double s = 10.0 * static_cast<double>(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
        s += x(i) * x(i) - 10.0 * std::cos(2.0 * std::numbers::pi * x(i));
    return s;
}

double f_ackley(const Vector& x) {
    const double n = static_cast<double>(x.size());
    double s1 = 0.0, s2 = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        s1 += x(i) * x(i);
        s2 += std::cos(2.0 * std::numbers::pi * x(i));
    }
    return -20.0 * std::exp(-0.2 * std::sqrt(s1 / n)) - std::exp(s2 / n) + 20.0 +
           std::numbers::e;
}

double f_branin(const Vector& x) {
    const double pi = std::numbers::pi;
    const double b = 5.1 / (4.0 * pi * pi);
    const double c = 5.0 / pi;
    const double t = 1.0 / (8.0 * pi);
    const double u = x(1) - b * x(0) * x(0) + c * x(0) - 6.0;
    return u * u + 10.0 * (1.0 - t) * std::cos(x(0)) + 10.0;
}

struct Builtin {
    Objective fn;
    double lo, hi;      // canonical per-coordinate bounds (branin overrides)
    int fixed_dim = 0;  // 0 = any dimension
};

const std::map<std::string, Builtin>& catalogue() {
    static const std::map<std::string, Builtin> cat = {
        {"sphere", {f_sphere, -5.12, 5.12, 0}},
        {"rastrigin", {f_rastrigin, -5.12, 5.12, 0}},
        {"ackley", {f_ackley, -32.768, 32.768, 0}},
        {"branin", {f_branin, 0, 0, 2}},
    };
    return cat;
}

std::string catalogue_names() {
    std::string s;
    for (const auto& [k, v] : catalogue()) s += (s.empty() ? "" : ", ") + k;
    return s + " (each also with -int / -mi suffix)";
}

// Splits "rastrigin-int" into base + variant.
void split_variant(const std::string& name, std::string& base, std::string& variant) {
    base = name;
    variant.clear();
    for (const char* suffix : {"-int", "-mi"}) {
        const size_t sl = std::strlen(suffix);
        if (name.size() > sl && name.compare(name.size() - sl, sl, suffix) == 0) {
            base = name.substr(0, name.size() - sl);
            variant = suffix + 1;
            return;
        }
    }
}

const Builtin& lookup_builtin(const std::string& name, int dim, std::string& variant) {
    std::string base;
    split_variant(name, base, variant);
    auto it = catalogue().find(base);
    if (it == catalogue().end())
        throw config_error("unknown builtin objective '" + name +
                           "'; available: " + catalogue_names());
    const Builtin& b = it->second;
    if (b.fixed_dim != 0 && dim != b.fixed_dim)
        throw config_error("builtin '" + base + "' is fixed to dimension " +
                           std::to_string(b.fixed_dim));
    if (dim < 1) throw config_error("builtin dimension must be >= 1");
    if (variant == "mi" && dim < 2)
        throw config_error("mixed-integer variant needs dimension >= 2");
    return b;
}

}  // namespace

Objective builtin_objective(const std::string& name, int dim) {
    std::string variant;
    return lookup_builtin(name, dim, variant).fn;
}

ProblemSpec builtin_problem(const std::string& name, int dim) {
    std::string variant;
    const Builtin& b = lookup_builtin(name, dim, variant);

    Vector lower(dim), upper(dim);
    if (b.fixed_dim == 2 && name.rfind("branin", 0) == 0) {
        lower << -5.0, 0.0;
        upper << 10.0, 15.0;
    } else {
        lower.setConstant(b.lo);
        upper.setConstant(b.hi);
    }

    std::vector<int> integer_idx;
    if (variant == "int") {
        for (int i = 0; i < dim; ++i) integer_idx.push_back(i);
    } else if (variant == "mi") {
        for (int i = 0; i < dim / 2; ++i) integer_idx.push_back(i);
    }
    return make_problem(dim, std::move(lower), std::move(upper),
                        std::move(integer_idx), b.fn, name);
}

// ---------------------------------------------------------------------------
// External command objectives

namespace {

// Runs /bin/sh -c cmd, writes `input` to its stdin, returns its stdout.
// posix_spawn keeps this safe to call from worker threads.
std::string run_command(const std::string& cmd, const std::string& input) {
    int in_pipe[2], out_pipe[2];
    if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0)
        throw objective_error("pipe() failed: " + std::string(std::strerror(errno)));

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
    posix_spawn_file_actions_addclose(&actions, in_pipe[0]);
    posix_spawn_file_actions_addclose(&actions, in_pipe[1]);
    posix_spawn_file_actions_addclose(&actions, out_pipe[0]);
    posix_spawn_file_actions_addclose(&actions, out_pipe[1]);

    const char* argv[] = {"/bin/sh", "-c", cmd.c_str(), nullptr};
    pid_t pid = -1;
    const int rc = posix_spawn(&pid, "/bin/sh", &actions, nullptr,
                               const_cast<char**>(argv), environ);
    posix_spawn_file_actions_destroy(&actions);
    close(in_pipe[0]);
    close(out_pipe[1]);
    if (rc != 0) {
        close(in_pipe[1]);
        close(out_pipe[0]);
        throw objective_error("failed to spawn '" + cmd + "': " + std::strerror(rc));
    }

    size_t off = 0;
    while (off < input.size()) {
        const ssize_t w = write(in_pipe[1], input.data() + off, input.size() - off);
        if (w < 0) {
            if (errno == EINTR) continue;
            break;  // child may exit without reading; surfaced via exit status
        }
        off += static_cast<size_t>(w);
    }
    close(in_pipe[1]);

    std::string out;
    char buf[4096];
    for (;;) {
        const ssize_t r = read(out_pipe[0], buf, sizeof buf);
        if (r > 0) {
            out.append(buf, static_cast<size_t>(r));
        } else if (r == 0) {
            break;
        } else if (errno != EINTR) {
            break;
        }
    }
    close(out_pipe[0]);

    int status = 0;
    while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {}
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
        throw objective_error("external objective '" + cmd + "' exited with status " +
                              std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1));
    return out;
}

}  // namespace

Objective make_command_objective(std::string cmd) {
    return [cmd = std::move(cmd)](const Vector& x) -> double {
        const std::string out = run_command(cmd, format_point(x) + "\n");
        std::istringstream is(out);
        double v = 0.0;
        if (!(is >> v))
            throw objective_error("external objective '" + cmd +
                                  "' produced unparsable output: '" + out + "'");
        return v;
    };
}

// ---------------------------------------------------------------------------
// Problem file loading

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_numbers(std::string s, const std::string& key) {
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream is(s);
    std::vector<double> out;
    double v;
    while (is >> v) out.push_back(v);
    is.clear();
    std::string leftover;
    if (is >> leftover)
        throw config_error("non-numeric value in '" + key + "': " + leftover);
    return out;
}

}  // namespace

ProblemSpec load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open problem file: " + path);

    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(path + ":" + std::to_string(lineno) +
                               ": expected 'key = value'");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }

    auto require = [&](const std::string& key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end())
            throw config_error(path + ": missing required key '" + key + "'");
        return it->second;
    };

    const auto dims = parse_numbers(require("dim"), "dim");
    if (dims.size() != 1 || dims[0] < 1 || dims[0] != std::floor(dims[0]))
        throw config_error(path + ": 'dim' must be a positive integer");
    const int dim = static_cast<int>(dims[0]);

    const auto lo = parse_numbers(require("lower"), "lower");
    const auto hi = parse_numbers(require("upper"), "upper");
    if (static_cast<int>(lo.size()) != dim || static_cast<int>(hi.size()) != dim)
        throw config_error(path + ": 'lower'/'upper' must list " +
                           std::to_string(dim) + " values");
    Vector lower = Eigen::Map<const Vector>(lo.data(), dim);
    Vector upper = Eigen::Map<const Vector>(hi.data(), dim);

    // 1-based in the file, 0-based internally. Absent key = empty set.
    std::vector<int> integer_idx;
    if (auto it = kv.find("integer_idx"); it != kv.end()) {
        for (double v : parse_numbers(it->second, "integer_idx")) {
            if (v != std::floor(v))
                throw config_error(path + ": integer_idx entries must be integers");
            integer_idx.push_back(static_cast<int>(v) - 1);
        }
    }

    const std::string kind = require("objective.kind");
    Objective fn;
    std::string name = kv.count("name") ? kv.at("name") : "";
    if (kind == "builtin") {
        const std::string oname = require("objective.name");
        fn = builtin_objective(oname, dim);
        if (name.empty()) name = oname;
    } else if (kind == "command") {
        const std::string cmd = require("objective.cmd");
        fn = make_command_objective(cmd);
        if (name.empty()) name = "command";
    } else {
        throw config_error(path + ": objective.kind must be 'builtin' or 'command'");
    }

    return make_problem(dim, std::move(lower), std::move(upper),
                        std::move(integer_idx), std::move(fn), std::move(name));
}

}  // namespace surropt
