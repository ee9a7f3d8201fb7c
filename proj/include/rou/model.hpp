#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rou {

// Coefficients of dY = (alpha - gamma Y) dt + sigma dW. Only constructible
// with gamma > 0, sigma > 0 and all three finite.
class OUParams {
public:
    OUParams(double alpha, double gamma, double sigma);

    double alpha() const noexcept { return alpha_; }
    double gamma() const noexcept { return gamma_; }
    double sigma() const noexcept { return sigma_; }

    // Mean and standard deviation of the unreflected stationary law
    // N(alpha/gamma, sigma^2 / (2 gamma)).
    double mean() const noexcept { return alpha_ / gamma_; }
    double sd() const noexcept;

    // Same gamma and sigma, drift offset replaced.
    OUParams with_alpha(double alpha) const { return {alpha, gamma_, sigma_}; }

    friend bool operator==(const OUParams&, const OUParams&) = default;

private:
    double alpha_;
    double gamma_;
    double sigma_;
};

OUParams validate_params(double alpha, double gamma, double sigma);

// Active reflecting barriers. At least one is present; with both, lower < upper.
class BoundarySpec {
public:
    BoundarySpec(std::optional<double> lower, std::optional<double> upper);

    static BoundarySpec lower_at(double level) { return {level, std::nullopt}; }
    static BoundarySpec upper_at(double level) { return {std::nullopt, level}; }
    static BoundarySpec interval(double lower, double upper) { return {lower, upper}; }

    const std::optional<double>& lower() const noexcept { return lower_; }
    const std::optional<double>& upper() const noexcept { return upper_; }

    bool is_doubly() const noexcept { return lower_ && upper_; }
    bool contains(double y) const noexcept;

    friend bool operator==(const BoundarySpec&, const BoundarySpec&) = default;

private:
    std::optional<double> lower_;
    std::optional<double> upper_;
};

BoundarySpec validate_boundary(std::optional<double> lower, std::optional<double> upper);

// Discretised trajectory on the closed grid 0, dt, ..., horizon. The regulators
// l (idle, lower barrier) and u (loss, upper barrier) are cumulative.
struct ReflectedPath {
    double dt = 0.0;
    double horizon = 0.0;  // floor(T/dt) * dt
    std::uint64_t seed = 0;
    std::vector<double> times;
    std::vector<double> y;
    std::vector<double> l;
    std::vector<double> u;

    std::size_t size() const noexcept { return y.size(); }
};

struct PathCheck {
    bool ok = true;
    std::string failure;  // first violated invariant, empty when ok

    explicit operator bool() const noexcept { return ok; }
};

// Checks the structural invariants of a simulated path: matching lengths, an
// increasing grid, l/u nondecreasing from 0, boundary respect and exact-contact
// complementarity (l grows on a step only if the step ends exactly on the
// lower barrier, likewise u on the upper one).
PathCheck validate_path(const ReflectedPath& path, const BoundarySpec& boundary);

// Discrete form of  int g(Y) dL = g(lower) L_T : returns the pair
// (sum_k g(y[k+1]) dl_k,  sum_k g(lower) dl_k)  with dl_k = l[k+1] - l[k].
// Both sums run over the same terms in the same order, so on a path with
// exact contact they agree bit-for-bit; the second equals g(lower) * l.back()
// up to summation rounding.
std::pair<double, double> regulator_identity(const ReflectedPath& path, double barrier,
                                             const std::function<double(double)>& g,
                                             bool upper = false);

// CSV with header `t,y,l,u`, one row per grid point, 17 significant digits.
void write_path_csv(const ReflectedPath& path, std::ostream& out);
void write_path_csv(const ReflectedPath& path, const std::string& filename);
ReflectedPath read_path_csv(std::istream& in);

}  // namespace rou
