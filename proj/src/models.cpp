#include "ordstat/models.hpp"

#include <cmath>

#include "ordstat/quadrature.hpp"

namespace ordstat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        raise(ErrorCode::InvalidArgument, std::string(name) + " must be positive and finite");
    }
    return v;
}

} // namespace

const char* kind_name(Kind k) {
    return k == Kind::Location ? "location" : "scale";
}

const char* family_name(Family f) {
    switch (f) {
        case Family::BivariateNormal: return "bivariate_normal";
        case Family::IndepExponentialLocation: return "indep_exponential_location";
        case Family::IndepGammaScale: return "indep_gamma_scale";
        case Family::IndepPowerScale: return "indep_power_scale";
        case Family::CustomDensity: return "custom_density";
    }
    return "?";
}

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NonPositiveTheta: return "NonPositiveTheta";
        case ErrorCode::UnsupportedFamily: return "UnsupportedFamily";
        case ErrorCode::QuadratureFailure: return "QuadratureFailure";
        case ErrorCode::MomentDivergence: return "MomentDivergence";
        case ErrorCode::ZeroWeights: return "ZeroWeights";
        case ErrorCode::OutOfSupport: return "OutOfSupport";
        case ErrorCode::InapplicableTag: return "InapplicableTag";
        case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
        case ErrorCode::Inconclusive: return "Inconclusive";
        case ErrorCode::ZeroDensity: return "ZeroDensity";
        case ErrorCode::UnknownPanel: return "UnknownPanel";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Derived-function construction
// ---------------------------------------------------------------------------

namespace {

void attach_ratios(DerivedFunctions& d) {
    // The scale-kind identities psi3 = z*psi1, psi4 = z^2*psi2,
    // psi = psi1/psi2 and psi_star = psi3/psi4 are enforced by computing
    // them through the same code path, so they hold bit-exactly.
    auto psi1 = d.psi1;
    auto psi2 = d.psi2;
    d.psi3 = [psi1](double z) { return z * psi1(z); };
    d.psi4 = [psi2](double z) { return z * z * psi2(z); };
    d.psi = [psi1, psi2](double z) { return psi1(z) / psi2(z); };
    auto psi3 = d.psi3;
    auto psi4 = d.psi4;
    d.psi_star = [psi3, psi4](double z) { return psi3(z) / psi4(z); };
}

void check_in_support(const Interval& support, double z) {
    if (!support.contains(z)) {
        raise(ErrorCode::OutOfSupport, "z outside the support of Z");
    }
}

DerivedFunctions make_normal_derived(double s1, double s2, double rho) {
    DerivedFunctions d;
    d.kind = Kind::Location;
    d.source = Source::ClosedForm;
    d.z_support = {-kInf, kInf};
    const double tau2 = s1 * s1 + s2 * s2 - 2.0 * rho * s1 * s2;
    const double slope = s1 * (rho * s2 - s1) / tau2;
    const double cond_var = (1.0 - rho * rho) * s1 * s1 * s2 * s2 / tau2;
    d.fz = [tau2](double z) {
        return std::exp(-0.5 * z * z / tau2) / std::sqrt(2.0 * M_PI * tau2);
    };
    d.log_fz = [tau2](double z) {
        return -0.5 * z * z / tau2 - 0.5 * std::log(2.0 * M_PI * tau2);
    };
    d.psi1 = [slope](double z) { return slope * z; };
    d.psi2 = [slope](double z) { return z + slope * z; };
    auto fz = d.fz;
    d.m1 = [slope, fz](double z) { return slope * z * fz(z); };
    d.m2 = [slope, cond_var, fz](double z) {
        const double mu = slope * z;
        return (cond_var + mu * mu) * fz(z);
    };
    return d;
}

DerivedFunctions make_exponential_derived(double s1, double s2) {
    DerivedFunctions d;
    d.kind = Kind::Location;
    d.source = Source::ClosedForm;
    d.z_support = {-kInf, kInf};
    const double c = s1 * s2 / (s1 + s2);
    const double norm = 1.0 / (s1 + s2);
    d.fz = [s1, s2, norm](double z) {
        return z < 0.0 ? norm * std::exp(z / s1) : norm * std::exp(-z / s2);
    };
    d.log_fz = [s1, s2, norm](double z) {
        return (z < 0.0 ? z / s1 : -z / s2) + std::log(norm);
    };
    d.psi1 = [c](double z) { return std::max(-z, 0.0) + c; };
    auto psi1 = d.psi1;
    d.psi2 = [psi1](double z) { return z + psi1(z); };
    auto fz = d.fz;
    d.m1 = [psi1, fz](double z) { return psi1(z) * fz(z); };
    d.m2 = [psi1, c, fz](double z) {
        const double mu = psi1(z);
        // Z1 | Z=z is a shifted exponential with scale c, so the
        // conditional variance is c^2.
        return (c * c + mu * mu) * fz(z);
    };
    return d;
}

DerivedFunctions make_gamma_derived(double a1, double a2) {
    DerivedFunctions d;
    d.kind = Kind::Scale;
    d.source = Source::ClosedForm;
    d.z_support = {0.0, kInf};
    const double A = a1 + a2;
    const double log_norm = std::lgamma(A) - std::lgamma(a1) - std::lgamma(a2);
    d.log_fz = [a1, a2, A, log_norm](double z) {
        if (!(z > 0.0)) return -kInf;
        return log_norm + (a2 - 1.0) * std::log(z) - A * std::log1p(z);
    };
    auto log_fz = d.log_fz;
    d.fz = [log_fz](double z) { return z > 0.0 ? std::exp(log_fz(z)) : 0.0; };
    auto support = d.z_support;
    d.psi1 = [A, support](double z) {
        check_in_support(support, z);
        return A / (1.0 + z);
    };
    d.psi2 = [A, support](double z) {
        check_in_support(support, z);
        return (A + 1.0) * A / ((1.0 + z) * (1.0 + z));
    };
    auto fz = d.fz;
    d.m1 = [A, fz](double z) { return z > 0.0 ? A / (1.0 + z) * fz(z) : 0.0; };
    d.m2 = [A, fz](double z) {
        return z > 0.0 ? (A + 1.0) * A / ((1.0 + z) * (1.0 + z)) * fz(z) : 0.0;
    };
    return d;
}

DerivedFunctions make_power_derived(double a1, double a2) {
    DerivedFunctions d;
    d.kind = Kind::Scale;
    d.source = Source::ClosedForm;
    d.z_support = {0.0, kInf};
    const double A = a1 + a2;
    const double norm = a1 * a2 / A;
    d.fz = [a2, A, norm](double z) {
        if (!(z > 0.0)) return 0.0;
        const double q = std::min(1.0, 1.0 / z);
        return norm * std::pow(z, a2 - 1.0) * std::pow(q, A);
    };
    d.log_fz = [a2, A, norm](double z) {
        if (!(z > 0.0)) return -kInf;
        return std::log(norm) + (a2 - 1.0) * std::log(z) - A * std::max(std::log(z), 0.0);
    };
    auto support = d.z_support;
    d.psi1 = [A, support](double z) {
        check_in_support(support, z);
        return A / (A + 1.0) * std::min(1.0, 1.0 / z);
    };
    d.psi2 = [A, support](double z) {
        check_in_support(support, z);
        const double q = std::min(1.0, 1.0 / z);
        return A / (A + 2.0) * q * q;
    };
    auto fz = d.fz;
    d.m1 = [A, fz](double z) {
        return z > 0.0 ? A / (A + 1.0) * std::min(1.0, 1.0 / z) * fz(z) : 0.0;
    };
    d.m2 = [A, fz](double z) {
        if (!(z > 0.0)) return 0.0;
        const double q = std::min(1.0, 1.0 / z);
        return A / (A + 2.0) * q * q * fz(z);
    };
    return d;
}

DerivedFunctions make_custom_derived(Kind kind, const CustomDensitySpec& spec) {
    DerivedFunctions d;
    d.kind = kind;
    d.source = Source::Quadrature;
    const Rect r = spec.support;
    auto pdf = spec.pdf;

    // m_r(z): location integrates s^r f(s, s+z); scale integrates
    // s^{r+1} f(s, s z). Integration is clipped to the declared support.
    auto moment = [pdf, r, kind](int order, double z) -> double {
        double lo = r.x1_lo, hi = r.x1_hi;
        if (kind == Kind::Location) {
            lo = std::max(lo, r.x2_lo - z);
            hi = std::min(hi, r.x2_hi - z);
            if (!(lo < hi)) return 0.0;
            return integrate(
                [pdf, order, z](double s) {
                    double w = pdf(s, s + z);
                    for (int i = 0; i < order; ++i) w *= s;
                    return w;
                },
                lo, hi);
        }
        if (!(z > 0.0)) return 0.0;
        lo = std::max(lo, r.x2_lo / z);
        hi = std::min(hi, r.x2_hi / z);
        if (!(lo < hi)) return 0.0;
        return integrate(
            [pdf, order, z](double s) {
                double w = s * pdf(s, s * z);
                for (int i = 0; i < order; ++i) w *= s;
                return w;
            },
            lo, hi);
    };

    if (kind == Kind::Location) {
        d.z_support = {r.x2_lo - r.x1_hi, r.x2_hi - r.x1_lo};
    } else {
        const double lo = r.x1_hi == 0.0 ? kInf : r.x2_lo / r.x1_hi;
        const double hi = r.x1_lo == 0.0 ? kInf : r.x2_hi / r.x1_lo;
        d.z_support = {std::isnan(lo) ? 0.0 : lo, std::isnan(hi) ? kInf : hi};
    }

    d.fz = [moment](double z) { return std::max(0.0, moment(0, z)); };
    auto fz = d.fz;
    d.log_fz = [fz](double z) {
        const double v = fz(z);
        return v > 0.0 ? std::log(v) : -kInf;
    };
    d.m1 = [moment](double z) { return moment(1, z); };
    d.m2 = [moment](double z) { return moment(2, z); };
    auto m1 = d.m1;
    auto m2 = d.m2;
    auto support = d.z_support;
    auto ratio = [fz, support](const std::function<double(double)>& num, double z) {
        check_in_support(support, z);
        const double den = fz(z);
        if (!(den > 0.0)) {
            raise(ErrorCode::OutOfSupport, "f_Z vanishes at z; conditional moment undefined");
        }
        return num(z) / den;
    };
    d.psi1 = [ratio, m1](double z) { return ratio(m1, z); };
    if (kind == Kind::Location) {
        auto psi1 = d.psi1;
        d.psi2 = [psi1](double z) { return z + psi1(z); };
    } else {
        d.psi2 = [ratio, m2](double z) { return ratio(m2, z); };
    }
    return d;
}

} // namespace

// ---------------------------------------------------------------------------
// Model construction
// ---------------------------------------------------------------------------

Model Model::bivariate_normal(double s1, double s2, double rho, double th1, double th2) {
    require_positive(s1, "sigma1");
    require_positive(s2, "sigma2");
    if (!(rho > -1.0 && rho < 1.0)) {
        raise(ErrorCode::InvalidArgument, "rho must lie in (-1, 1)");
    }
    Model m;
    m.kind_ = Kind::Location;
    m.family_ = Family::BivariateNormal;
    m.params_ = {s1, s2, rho};
    m.theta1_ = th1;
    m.theta2_ = th2;
    m.support_ = {-kInf, kInf, -kInf, kInf};
    m.finalize();
    return m;
}

Model Model::exponential_location(double s1, double s2, double th1, double th2) {
    require_positive(s1, "sigma1");
    require_positive(s2, "sigma2");
    Model m;
    m.kind_ = Kind::Location;
    m.family_ = Family::IndepExponentialLocation;
    m.params_ = {s1, s2};
    m.theta1_ = th1;
    m.theta2_ = th2;
    m.support_ = {0.0, kInf, 0.0, kInf};
    m.finalize();
    return m;
}

Model Model::gamma_scale(double a1, double a2, double th1, double th2) {
    require_positive(a1, "a1");
    require_positive(a2, "a2");
    Model m;
    m.kind_ = Kind::Scale;
    m.family_ = Family::IndepGammaScale;
    m.params_ = {a1, a2};
    m.theta1_ = th1;
    m.theta2_ = th2;
    m.support_ = {0.0, kInf, 0.0, kInf};
    m.finalize();
    return m;
}

Model Model::power_scale(double a1, double a2, double th1, double th2) {
    require_positive(a1, "a1");
    require_positive(a2, "a2");
    Model m;
    m.kind_ = Kind::Scale;
    m.family_ = Family::IndepPowerScale;
    m.params_ = {a1, a2};
    m.theta1_ = th1;
    m.theta2_ = th2;
    m.support_ = {0.0, 1.0, 0.0, 1.0};
    m.finalize();
    return m;
}

Model Model::custom(Kind kind, CustomDensitySpec spec, double th1, double th2) {
    if (!spec.pdf) {
        raise(ErrorCode::InvalidArgument, "custom density requires a pdf callable");
    }
    if (kind == Kind::Scale && (spec.support.x1_lo < 0.0 || spec.support.x2_lo < 0.0)) {
        raise(ErrorCode::InvalidArgument,
              "scale kind requires support inside the positive quadrant");
    }
    Model m;
    m.kind_ = kind;
    m.family_ = Family::CustomDensity;
    m.theta1_ = th1;
    m.theta2_ = th2;
    m.custom_ = std::move(spec);
    m.support_ = m.custom_.support;
    m.finalize();
    return m;
}

Model Model::make(Kind kind, Family family, const std::vector<double>& p,
                  double th1, double th2) {
    auto need = [&](std::size_t n) {
        if (p.size() != n) {
            raise(ErrorCode::InvalidArgument, "wrong number of family parameters");
        }
    };
    switch (family) {
        case Family::BivariateNormal:
            need(3);
            if (kind != Kind::Location) raise(ErrorCode::InvalidArgument, "bivariate_normal is a location family");
            return bivariate_normal(p[0], p[1], p[2], th1, th2);
        case Family::IndepExponentialLocation:
            need(2);
            if (kind != Kind::Location) raise(ErrorCode::InvalidArgument, "indep_exponential_location is a location family");
            return exponential_location(p[0], p[1], th1, th2);
        case Family::IndepGammaScale:
            need(2);
            if (kind != Kind::Scale) raise(ErrorCode::InvalidArgument, "indep_gamma_scale is a scale family");
            return gamma_scale(p[0], p[1], th1, th2);
        case Family::IndepPowerScale:
            need(2);
            if (kind != Kind::Scale) raise(ErrorCode::InvalidArgument, "indep_power_scale is a scale family");
            return power_scale(p[0], p[1], th1, th2);
        case Family::CustomDensity:
            raise(ErrorCode::UnsupportedFamily, "custom densities are built through Model::custom");
    }
    raise(ErrorCode::InvalidArgument, "unknown family");
}

Model Model::with_theta(double th1, double th2) const {
    Model m = *this;
    if (kind_ == Kind::Scale && (!(th1 > 0.0) || !(th2 > 0.0))) {
        raise(ErrorCode::NonPositiveTheta, "scale parameters must be positive");
    }
    m.theta1_ = th1;
    m.theta2_ = th2;
    return m;
}

void Model::finalize() {
    if (kind_ == Kind::Scale && (!(theta1_ > 0.0) || !(theta2_ > 0.0))) {
        raise(ErrorCode::NonPositiveTheta, "scale parameters must be positive");
    }
    switch (family_) {
        case Family::BivariateNormal:
            derived_ = std::make_shared<DerivedFunctions>(
                make_normal_derived(params_[0], params_[1], params_[2]));
            break;
        case Family::IndepExponentialLocation:
            derived_ = std::make_shared<DerivedFunctions>(
                make_exponential_derived(params_[0], params_[1]));
            break;
        case Family::IndepGammaScale:
            derived_ = std::make_shared<DerivedFunctions>(
                make_gamma_derived(params_[0], params_[1]));
            break;
        case Family::IndepPowerScale:
            derived_ = std::make_shared<DerivedFunctions>(
                make_power_derived(params_[0], params_[1]));
            break;
        case Family::CustomDensity:
            derived_ = std::make_shared<DerivedFunctions>(
                make_custom_derived(kind_, custom_));
            break;
    }
    if (kind_ == Kind::Scale) {
        auto d = std::const_pointer_cast<DerivedFunctions>(derived_);
        attach_ratios(*d);
    }
    verify_normalization();
    compute_constants();
}

double Model::standard_density(double z1, double z2) const {
    switch (family_) {
        case Family::BivariateNormal: {
            const double s1 = params_[0], s2 = params_[1], rho = params_[2];
            const double q = (z1 * z1 / (s1 * s1) - 2.0 * rho * z1 * z2 / (s1 * s2) +
                              z2 * z2 / (s2 * s2)) /
                             (1.0 - rho * rho);
            return std::exp(-0.5 * q) /
                   (2.0 * M_PI * s1 * s2 * std::sqrt(1.0 - rho * rho));
        }
        case Family::IndepExponentialLocation: {
            if (z1 <= 0.0 || z2 <= 0.0) return 0.0;
            const double s1 = params_[0], s2 = params_[1];
            return std::exp(-z1 / s1 - z2 / s2) / (s1 * s2);
        }
        case Family::IndepGammaScale: {
            if (z1 <= 0.0 || z2 <= 0.0) return 0.0;
            const double a1 = params_[0], a2 = params_[1];
            return std::exp(-z1 - z2 + (a1 - 1.0) * std::log(z1) + (a2 - 1.0) * std::log(z2) -
                            std::lgamma(a1) - std::lgamma(a2));
        }
        case Family::IndepPowerScale: {
            if (z1 <= 0.0 || z1 >= 1.0 || z2 <= 0.0 || z2 >= 1.0) return 0.0;
            const double a1 = params_[0], a2 = params_[1];
            return a1 * a2 * std::pow(z1, a1 - 1.0) * std::pow(z2, a2 - 1.0);
        }
        case Family::CustomDensity: {
            const Rect& r = custom_.support;
            if (z1 < r.x1_lo || z1 > r.x1_hi || z2 < r.x2_lo || z2 > r.x2_hi) return 0.0;
            return custom_.pdf(z1, z2);
        }
    }
    return 0.0;
}

double Model::density(double x1, double x2) const {
    if (kind_ == Kind::Location) {
        return standard_density(x1 - theta1_, x2 - theta2_);
    }
    if (!(theta1_ > 0.0) || !(theta2_ > 0.0)) {
        raise(ErrorCode::NonPositiveTheta, "scale parameters must be positive");
    }
    return standard_density(x1 / theta1_, x2 / theta2_) / (theta1_ * theta2_);
}

void Model::verify_normalization() const {
    const double tol = 1e-6;
    double total = 0.0;
    switch (family_) {
        case Family::BivariateNormal:
        case Family::CustomDensity: {
            const Rect& r = support_;
            total = integrate(
                [this, &r](double x1) {
                    return integrate([this, x1](double x2) { return standard_density(x1, x2); },
                                     r.x2_lo, r.x2_hi, {1e-9, 1e-5, 1e-16});
                },
                r.x1_lo, r.x1_hi, {1e-9, 1e-5, 1e-16});
            break;
        }
        case Family::IndepExponentialLocation: {
            const double s1 = params_[0], s2 = params_[1];
            const double i1 = integrate([s1](double z) { return std::exp(-z / s1) / s1; }, 0.0, kInf);
            const double i2 = integrate([s2](double z) { return std::exp(-z / s2) / s2; }, 0.0, kInf);
            total = i1 * i2;
            break;
        }
        case Family::IndepGammaScale: {
            const double a1 = params_[0], a2 = params_[1];
            auto marginal = [](double a) {
                return integrate(
                    [a](double z) {
                        return std::exp(-z + (a - 1.0) * std::log(z) - std::lgamma(a));
                    },
                    0.0, kInf);
            };
            total = marginal(a1) * marginal(a2);
            break;
        }
        case Family::IndepPowerScale: {
            const double a1 = params_[0], a2 = params_[1];
            auto marginal = [](double a) {
                return integrate([a](double z) { return a * std::pow(z, a - 1.0); }, 0.0, 1.0);
            };
            total = marginal(a1) * marginal(a2);
            break;
        }
    }
    if (!(std::abs(total - 1.0) <= tol)) {
        raise(ErrorCode::InvalidArgument,
              "density does not integrate to 1 (got " + std::to_string(total) + ")");
    }
}

void Model::compute_constants() {
    switch (family_) {
        case Family::BivariateNormal:
            constants_ = {0.0, 0.0};
            return;
        case Family::IndepExponentialLocation:
            constants_ = {params_[0], params_[1]};
            return;
        case Family::IndepGammaScale:
            constants_ = {1.0 / (params_[0] + 1.0), 1.0 / (params_[1] + 1.0)};
            return;
        case Family::IndepPowerScale:
            constants_ = {(params_[0] + 2.0) / (params_[0] + 1.0),
                          (params_[1] + 2.0) / (params_[1] + 1.0)};
            return;
        case Family::CustomDensity:
            break;
    }
    // Custom density: first and second Z-moments by iterated quadrature.
    const Rect& r = support_;
    auto moment = [&](int component, int order) {
        double v = 0.0;
        try {
            v = integrate(
                [&](double x1) {
                    return integrate(
                        [&](double x2) {
                            const double base = component == 1 ? x1 : x2;
                            double w = standard_density(x1, x2);
                            for (int i = 0; i < order; ++i) w *= base;
                            return w;
                        },
                        r.x2_lo, r.x2_hi, {1e-9, 1e-5, 1e-16});
                },
                r.x1_lo, r.x1_hi, {1e-9, 1e-5, 1e-16});
        } catch (const Error& e) {
            if (e.code() == ErrorCode::QuadratureFailure) {
                raise(ErrorCode::MomentDivergence, "Z-moment quadrature did not converge");
            }
            throw;
        }
        if (!std::isfinite(v)) {
            raise(ErrorCode::MomentDivergence, "Z-moment is not finite");
        }
        return v;
    };
    const double e1 = moment(1, 1);
    const double e2 = moment(2, 1);
    const double q1 = moment(1, 2);
    const double q2 = moment(2, 2);
    if (kind_ == Kind::Location) {
        constants_ = {e1, e2};
    } else {
        if (!(q1 > 0.0) || !(q2 > 0.0)) {
            raise(ErrorCode::MomentDivergence, "second Z-moment vanished or diverged");
        }
        constants_ = {e1 / q1, e2 / q2};
    }
}

std::pair<double, double> Model::constants() const {
    return *constants_;
}

PivotSample Model::sample_pivot(Rng& rng) const {
    double z1 = 0.0, z2 = 0.0;
    switch (family_) {
        case Family::BivariateNormal: {
            const double s1 = params_[0], s2 = params_[1], rho = params_[2];
            const double n1 = rng.normal();
            const double n2 = rng.normal();
            z1 = s1 * n1;
            z2 = s2 * (rho * n1 + std::sqrt(1.0 - rho * rho) * n2);
            break;
        }
        case Family::IndepExponentialLocation:
            z1 = rng.exponential(params_[0]);
            z2 = rng.exponential(params_[1]);
            break;
        case Family::IndepGammaScale:
            z1 = rng.gamma(params_[0]);
            z2 = rng.gamma(params_[1]);
            break;
        case Family::IndepPowerScale:
            z1 = rng.power(params_[0]);
            z2 = rng.power(params_[1]);
            break;
        case Family::CustomDensity: {
            if (!custom_.sampler) {
                raise(ErrorCode::UnsupportedFamily, "custom density has no registered sampler");
            }
            auto p = custom_.sampler(rng);
            z1 = p.first;
            z2 = p.second;
            break;
        }
    }
    const double z = kind_ == Kind::Location ? z2 - z1 : z2 / z1;
    return {z1, z2, z};
}

std::vector<std::pair<double, double>> Model::sample(std::size_t n, std::uint64_t seed) const {
    if (n < 1) raise(ErrorCode::InvalidArgument, "sample size must be at least 1");
    Rng rng(seed);
    std::vector<std::pair<double, double>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const PivotSample p = sample_pivot(rng);
        if (kind_ == Kind::Location) {
            out.emplace_back(theta1_ + p.z1, theta2_ + p.z2);
        } else {
            out.emplace_back(theta1_ * p.z1, theta2_ * p.z2);
        }
    }
    return out;
}

} // namespace ordstat
