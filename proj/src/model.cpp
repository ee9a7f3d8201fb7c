#include "rou/model.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "rou/error.hpp"

namespace rou {

namespace {

void require_finite(double v, const char* field) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteInput, field, "value must be finite");
}

}  // namespace

OUParams::OUParams(double alpha, double gamma, double sigma)
    : alpha_(alpha), gamma_(gamma), sigma_(sigma) {
    require_finite(alpha, "alpha");
    require_finite(gamma, "gamma");
    require_finite(sigma, "sigma");
    if (!(gamma > 0.0)) throw Error(ErrorCode::NonPositiveGamma, "gamma", "gamma must be > 0");
    if (!(sigma > 0.0)) throw Error(ErrorCode::NonPositiveSigma, "sigma", "sigma must be > 0");
}

double OUParams::sd() const noexcept { return sigma_ / std::sqrt(2.0 * gamma_); }

OUParams validate_params(double alpha, double gamma, double sigma) {
    return OUParams(alpha, gamma, sigma);
}

BoundarySpec::BoundarySpec(std::optional<double> lower, std::optional<double> upper)
    : lower_(lower), upper_(upper) {
    if (!lower && !upper) throw Error(ErrorCode::NoBoundary, "boundary", "no barrier given");
    if (lower) require_finite(*lower, "lower");
    if (upper) require_finite(*upper, "upper");
    if (lower && upper && !(*lower < *upper)) {
        throw Error(ErrorCode::EmptyInterval, "boundary", "lower must be < upper");
    }
}

bool BoundarySpec::contains(double y) const noexcept {
    if (lower_ && y < *lower_) return false;
    if (upper_ && y > *upper_) return false;
    return true;
}

BoundarySpec validate_boundary(std::optional<double> lower, std::optional<double> upper) {
    return BoundarySpec(lower, upper);
}

PathCheck validate_path(const ReflectedPath& path, const BoundarySpec& boundary) {
    auto fail = [](std::string why) { return PathCheck{false, std::move(why)}; };
    const std::size_t n = path.y.size();
    if (n == 0) return fail("empty path");
    if (path.times.size() != n || path.l.size() != n || path.u.size() != n) {
        return fail("column lengths differ");
    }
    if (path.l.front() != 0.0 || path.u.front() != 0.0) return fail("regulators must start at 0");

    for (std::size_t k = 0; k < n; ++k) {
        if (!boundary.contains(path.y[k])) {
            return fail("y[" + std::to_string(k) + "] outside the boundaries");
        }
        if (k + 1 == n) break;
        if (!(path.times[k + 1] > path.times[k])) return fail("time grid not increasing");
        const double dl = path.l[k + 1] - path.l[k];
        const double du = path.u[k + 1] - path.u[k];
        if (dl < 0.0) return fail("l decreases at step " + std::to_string(k));
        if (du < 0.0) return fail("u decreases at step " + std::to_string(k));
        if (dl > 0.0 && !(boundary.lower() && path.y[k + 1] == *boundary.lower())) {
            return fail("l grows off the lower barrier at step " + std::to_string(k));
        }
        if (du > 0.0 && !(boundary.upper() && path.y[k + 1] == *boundary.upper())) {
            return fail("u grows off the upper barrier at step " + std::to_string(k));
        }
    }
    return {};
}

std::pair<double, double> regulator_identity(const ReflectedPath& path, double barrier,
                                             const std::function<double(double)>& g,
                                             bool upper) {
    const auto& reg = upper ? path.u : path.l;
    const double at_barrier = g(barrier);
    double weighted = 0.0;
    double reference = 0.0;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const double d = reg[k + 1] - reg[k];
        if (d == 0.0) continue;
        weighted += g(path.y[k + 1]) * d;
        reference += at_barrier * d;
    }
    return {weighted, reference};
}

void write_path_csv(const ReflectedPath& path, std::ostream& out) {
    out << "t,y,l,u\n" << std::setprecision(17);
    for (std::size_t k = 0; k < path.size(); ++k) {
        out << path.times[k] << ',' << path.y[k] << ',' << path.l[k] << ',' << path.u[k] << '\n';
    }
}

void write_path_csv(const ReflectedPath& path, const std::string& filename) {
    std::ofstream out(filename);
    if (!out) throw Error(ErrorCode::WriteFailure, filename, "cannot open for writing");
    write_path_csv(path, out);
    if (!out) throw Error(ErrorCode::WriteFailure, filename, "write failed");
}

ReflectedPath read_path_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "t,y,l,u") {
        throw Error(ErrorCode::ReadFailure, "header", "expected `t,y,l,u`");
    }
    ReflectedPath path;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        double v[4];
        char sep = 0;
        row >> v[0] >> sep >> v[1] >> sep >> v[2] >> sep >> v[3];
        if (!row) throw Error(ErrorCode::ReadFailure, "row", line);
        path.times.push_back(v[0]);
        path.y.push_back(v[1]);
        path.l.push_back(v[2]);
        path.u.push_back(v[3]);
    }
    if (path.times.size() >= 2) path.dt = path.times[1] - path.times[0];
    if (!path.times.empty()) path.horizon = path.times.back();
    return path;
}

}  // namespace rou
