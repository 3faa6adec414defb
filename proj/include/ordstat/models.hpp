#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ordstat/errors.hpp"
#include "ordstat/rng.hpp"

namespace ordstat {

enum class Kind { Location, Scale };
enum class Family {
    BivariateNormal,          // params: sigma1 > 0, sigma2 > 0, rho in (-1,1)
    IndepExponentialLocation, // params: sigma1 > 0, sigma2 > 0
    IndepGammaScale,          // params: a1 > 0, a2 > 0
    IndepPowerScale,          // params: a1 > 0, a2 > 0
    CustomDensity,
};
enum class Source { ClosedForm, Quadrature };

const char* kind_name(Kind k);
const char* family_name(Family f);

struct Interval {
    double lo;
    double hi;
    bool contains(double z) const { return z > lo && z < hi; }
};

struct Rect {
    double x1_lo, x1_hi;
    double x2_lo, x2_hi;
};

/// User-supplied standardized density with a declared support rectangle.
/// Integrals are clipped to the rectangle; a sampler is optional.
struct CustomDensitySpec {
    std::function<double(double, double)> pdf;
    Rect support;
    std::function<std::pair<double, double>(Rng&)> sampler;
};

/// Functions of the pivot Z = Z2 - Z1 (location) or Z2 / Z1 (scale),
/// derived from the standardized density.
///
/// psi1 is E[Z1 | Z=z] for both kinds. psi2 is E[Z2 | Z=z] = z + psi1(z)
/// for the location kind, and E[Z1^2 | Z=z] for the scale kind. The
/// scale-only members satisfy psi3 = z*psi1, psi4 = z^2*psi2,
/// psi = psi1/psi2 and psi_star = psi3/psi4 by construction.
///
/// m0/m1/m2 are the moment-density products: for the location kind
/// m_r(z) = integral s^r f(s, s+z) ds, for the scale kind
/// m_r(z) = integral s^{r+1} f(s, s z) ds, so m0 = f_Z and
/// m_r = E[Z1^r | Z=z] f_Z(z). They vanish outside the support instead
/// of signalling, which makes them safe quadrature integrands.
struct DerivedFunctions {
    Kind kind;
    Source source;
    Interval z_support;
    std::function<double(double)> fz;
    std::function<double(double)> log_fz;
    std::function<double(double)> m1;
    std::function<double(double)> m2;
    std::function<double(double)> psi1;
    std::function<double(double)> psi2;
    std::function<double(double)> psi3;
    std::function<double(double)> psi4;
    std::function<double(double)> psi;
    std::function<double(double)> psi_star;
};

/// One pivot draw; z is kept consistent with (z1, z2) by construction.
struct PivotSample {
    double z1;
    double z2;
    double z;
};

/// A bivariate location or scale family together with a parameter point.
/// Immutable after construction and safe to share across threads.
class Model {
public:
    static Model bivariate_normal(double s1, double s2, double rho,
                                  double th1 = 0.0, double th2 = 0.0);
    static Model exponential_location(double s1, double s2,
                                      double th1 = 0.0, double th2 = 0.0);
    static Model gamma_scale(double a1, double a2,
                             double th1 = 1.0, double th2 = 1.0);
    static Model power_scale(double a1, double a2,
                             double th1 = 1.0, double th2 = 1.0);
    static Model custom(Kind kind, CustomDensitySpec spec,
                        double th1, double th2);

    /// Builds a family from parsed fields; validates counts and ranges.
    static Model make(Kind kind, Family family, const std::vector<double>& params,
                      double th1, double th2);

    Kind kind() const { return kind_; }
    Family family() const { return family_; }
    const std::vector<double>& params() const { return params_; }
    std::pair<double, double> theta() const { return {theta1_, theta2_}; }
    Model with_theta(double th1, double th2) const;

    /// Density of X at the model's theta.
    double density(double x1, double x2) const;
    /// Standardized density f(z1, z2).
    double standard_density(double z1, double z2) const;

    double fz(double z) const { return derived_->fz(z); }
    const DerivedFunctions& derived() const { return *derived_; }

    /// Best equivariant-estimator constants (c01, c02): E[Zi] for the
    /// location kind, E[Zi]/E[Zi^2] for the scale kind.
    std::pair<double, double> constants() const;

    /// Draws one standardized pair (Z1, Z2).
    PivotSample sample_pivot(Rng& rng) const;
    /// Draws n points X distributed under the model's theta.
    std::vector<std::pair<double, double>> sample(std::size_t n, std::uint64_t seed) const;

private:
    Model() = default;
    void finalize();
    void verify_normalization() const;
    void compute_constants();

    Kind kind_{};
    Family family_{};
    std::vector<double> params_;
    double theta1_ = 0.0;
    double theta2_ = 0.0;
    CustomDensitySpec custom_;
    Rect support_{};
    std::shared_ptr<const DerivedFunctions> derived_;
    std::optional<std::pair<double, double>> constants_;
};

/// Spec-level accessor mirroring the operation names.
inline const DerivedFunctions& derived_functions(const Model& m) { return m.derived(); }

} // namespace ordstat
