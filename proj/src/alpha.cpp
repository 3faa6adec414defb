#include "ordstat/alpha.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "ordstat/quadrature.hpp"

namespace ordstat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_kind(const Model& m, Kind kind, const char* op) {
    if (m.kind() != kind) {
        raise(ErrorCode::InvalidArgument, std::string(op) + " requires a " +
                                              kind_name(kind) + "-kind model");
    }
}

void require_lambda(Kind kind, double lambda) {
    const double lo = kind == Kind::Location ? 0.0 : 1.0;
    if (!(lambda >= lo) || !std::isfinite(lambda)) {
        raise(ErrorCode::InvalidArgument,
              std::string("lambda must be finite and at least ") + (kind == Kind::Location ? "0" : "1"));
    }
}

// ---------------------------------------------------------------------
// Location kind: ratio of integrals over the pooling region Z < w.
//
// Closed-form families are integrated in a normalized form,
// exp(log f_Z(u) - s0) with s0 the largest log-density over the region,
// so the ratio stays computable when the pooling probability underflows
// (needed to chase the weight curve out to lambda ~ 2^40). Quadrature
// families integrate the raw moment densities instead.
// ---------------------------------------------------------------------

struct LocationRatio {
    double value;
};

double location_ratio(const Model& m, double c0, double w, bool use_psi2) {
    const DerivedFunctions& d = m.derived();
    const double z_lo = d.z_support.lo; // lower endpoint of the support of Z
    if (!(w > z_lo)) {
        raise(ErrorCode::DegenerateDenominator, "pooling region carries no probability mass");
    }

    if (d.source == Source::ClosedForm) {
        // Reference log-density and decay-rate estimate over z in (-inf, 0).
        double s0 = -kInf;
        double rate = 1.0;
        const double span = std::isinf(z_lo) ? kInf : w - z_lo;
        double prev_off = 0.0, prev_log = d.log_fz(w);
        s0 = prev_log;
        for (double off : {1e-6, 1e-4, 1e-2, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0,
                           1e3, 1e4, 1e5, 1e6}) {
            if (off >= span) break;
            const double lf = d.log_fz(w - off);
            if (std::isfinite(lf) && std::isfinite(prev_log)) {
                const double r = (prev_log - lf) / (off - prev_off);
                rate = std::max(rate, r);
            }
            s0 = std::max(s0, lf);
            prev_off = off;
            prev_log = lf;
        }
        if (!std::isfinite(s0)) {
            raise(ErrorCode::DegenerateDenominator, "pooling region carries no probability mass");
        }
        rate = std::min(std::max(rate, 1e-6), 1e18);
        const double y_hi = std::isinf(span) ? kInf : rate * span;
        auto g = use_psi2 ? d.psi2 : d.psi1;
        auto num = [&](double y) {
            const double z = -y / rate;
            const double lf = d.log_fz(z + w);
            if (!std::isfinite(lf)) return 0.0;
            return (g(z + w) - c0) * z * std::exp(lf - s0);
        };
        auto den = [&](double y) {
            const double z = -y / rate;
            const double lf = d.log_fz(z + w);
            if (!std::isfinite(lf)) return 0.0;
            return z * z * std::exp(lf - s0);
        };
        const double den_value = integrate(den, 0.0, y_hi);
        if (!(den_value > 1e-290)) {
            raise(ErrorCode::DegenerateDenominator, "pooling region carries no probability mass");
        }
        return integrate(num, 0.0, y_hi) / den_value;
    }

    // Quadrature-backed density: integrate the moment densities directly.
    const double lo = std::isinf(z_lo) ? -kInf : z_lo - w;
    auto num = [&](double z) {
        const double u = z + w;
        if (use_psi2) {
            // (psi2(u) - c0) f_Z(u) = m1(u) + (u - c0) m0(u)
            return (d.m1(u) + (u - c0) * d.fz(u)) * z;
        }
        return (d.m1(u) - c0 * d.fz(u)) * z;
    };
    auto den = [&](double z) {
        const double u = z + w;
        return z * z * d.fz(u);
    };
    const double den_value = integrate(den, lo, 0.0);
    if (!(den_value > 1e-290)) {
        raise(ErrorCode::DegenerateDenominator, "pooling region carries no probability mass");
    }
    return integrate(num, lo, 0.0) / den_value;
}

// ---------------------------------------------------------------------
// Scale kind: integrals over the unit interval after substituting the
// pooling region (0, c0/(lambda nu)) (theta1) or (0, beta/(lambda c0))
// (theta2) onto t in (0, 1).
// ---------------------------------------------------------------------

double scale_ratio(const Model& m, double c0, double arg_scale, bool theta2) {
    const DerivedFunctions& d = m.derived();
    auto num = [&](double t) {
        const double u = arg_scale * t;
        const double p1 = d.m1(u); // psi1 fz
        const double p2 = d.m2(u); // psi2 fz
        if (theta2) {
            const double q = (1.0 - t) / t;
            return q * (u * p1 - c0 * u * u * p2);
        }
        return (1.0 - t) * (p1 - c0 * p2);
    };
    auto den = [&](double t) {
        const double u = arg_scale * t;
        const double p2 = d.m2(u);
        if (theta2) {
            const double q = (1.0 - t) / t;
            return q * q * u * u * p2;
        }
        return (1.0 - t) * (1.0 - t) * p2;
    };
    const double den_value = integrate(den, 0.0, 1.0);
    if (!(den_value > 1e-290)) {
        raise(ErrorCode::DegenerateDenominator, "pooling region carries no probability mass");
    }
    return integrate(num, 0.0, 1.0) / den_value;
}

} // namespace

const char* limit_class_name(LimitClass c) {
    switch (c) {
        case LimitClass::Finite: return "finite";
        case LimitClass::PlusInfinity: return "plus_infinity";
        case LimitClass::MinusInfinity: return "minus_infinity";
    }
    return "?";
}

const char* direction_name(Direction d) {
    switch (d) {
        case Direction::Increasing: return "increasing";
        case Direction::Decreasing: return "decreasing";
        case Direction::Constant: return "constant";
    }
    return "?";
}

const char* theorem_name(TheoremTag t) {
    switch (t) {
        case TheoremTag::T311a: return "T311a";
        case TheoremTag::T311b: return "T311b";
        case TheoremTag::T321a: return "T321a";
        case TheoremTag::T321b: return "T321b";
        case TheoremTag::T411a: return "T411a";
        case TheoremTag::T411b: return "T411b";
        case TheoremTag::T421a: return "T421a";
        case TheoremTag::T421b: return "T421b";
    }
    return "?";
}

double alpha1_star_location(const Model& m, double nu, double lambda) {
    require_kind(m, Kind::Location, "alpha1_location");
    require_lambda(Kind::Location, lambda);
    const double c01 = m.constants().first;
    return location_ratio(m, c01, nu - c01 - lambda, /*use_psi2=*/false);
}

double alpha1_location(const Model& m, double nu, double lambda) {
    return 1.0 + alpha1_star_location(m, nu, lambda);
}

double alpha2_location(const Model& m, double beta, double lambda) {
    require_kind(m, Kind::Location, "alpha2_location");
    require_lambda(Kind::Location, lambda);
    const double c02 = m.constants().second;
    return location_ratio(m, c02, c02 - beta - lambda, /*use_psi2=*/true);
}

double alpha1_star_scale(const Model& m, double nu, double lambda) {
    require_kind(m, Kind::Scale, "alpha1_scale");
    require_lambda(Kind::Scale, lambda);
    if (!(nu > 0.0)) raise(ErrorCode::InvalidArgument, "nu must be positive for the scale kind");
    const double c01 = m.constants().first;
    return scale_ratio(m, c01, c01 / (nu * lambda), /*theta2=*/false) / c01;
}

double alpha1_scale(const Model& m, double nu, double lambda) {
    return 1.0 + alpha1_star_scale(m, nu, lambda);
}

double alpha2_scale(const Model& m, double beta, double lambda) {
    require_kind(m, Kind::Scale, "alpha2_scale");
    require_lambda(Kind::Scale, lambda);
    if (!(beta > 0.0)) raise(ErrorCode::InvalidArgument, "beta must be positive for the scale kind");
    const double c02 = m.constants().second;
    return scale_ratio(m, c02, beta / (lambda * c02), /*theta2=*/true) / c02;
}

double alpha_weight(const Model& m, Target target, double companion, double lambda) {
    if (m.kind() == Kind::Location) {
        return target == Target::Theta1 ? alpha1_location(m, companion, lambda)
                                        : alpha2_location(m, companion, lambda);
    }
    return target == Target::Theta1 ? alpha1_scale(m, companion, lambda)
                                    : alpha2_scale(m, companion, lambda);
}

std::vector<double> default_lambda_grid(Kind kind, int points, double lo, double hi) {
    if (points < 2) raise(ErrorCode::InvalidArgument, "grid needs at least 2 points");
    std::vector<double> grid;
    grid.reserve(points);
    if (kind == Kind::Location) {
        if (lo < 0.0) lo = 0.0;
        if (hi < 0.0) hi = 10.0;
        if (lo == 0.0) {
            // log spacing cannot reach 0; keep it as an explicit first point
            grid.push_back(0.0);
            const double start = hi / 100.0;
            for (int i = 0; i < points - 1; ++i) {
                grid.push_back(start * std::pow(hi / start, double(i) / double(points - 2)));
            }
        } else {
            for (int i = 0; i < points; ++i) {
                grid.push_back(lo * std::pow(hi / lo, double(i) / double(points - 1)));
            }
        }
    } else {
        if (lo < 1.0) lo = 1.0;
        if (hi < 0.0) hi = 20.0;
        for (int i = 0; i < points; ++i) {
            grid.push_back(lo * std::pow(hi / lo, double(i) / double(points - 1)));
        }
    }
    return grid;
}

AlphaCurve compute_alpha_curve(const Model& m, Target target, double companion,
                               const std::vector<double>& lambda_grid) {
    if (lambda_grid.empty()) raise(ErrorCode::InvalidArgument, "empty lambda grid");
    AlphaCurve curve;
    curve.target = target;
    curve.kind = m.kind();
    curve.companion = companion;
    curve.lambda_grid = lambda_grid;
    curve.values.reserve(lambda_grid.size());
    for (double lam : lambda_grid) {
        curve.values.push_back(alpha_weight(m, target, companion, lam));
    }
    curve.boundary_value = curve.values.front();
    curve.infinity = infinity_limit(m, target, companion);
    return curve;
}

InfinityLimit infinity_limit(const Model& m, Target target, double companion) {
    const double diverge_threshold = 1e6;
    const double converge_threshold = 1e-5;
    double prev = std::numeric_limits<double>::quiet_NaN();
    double prev_diff = std::numeric_limits<double>::quiet_NaN();
    bool trend_up = false, trend_down = false;
    for (int k = 0; k <= 40; ++k) {
        const double lam = std::ldexp(1.0, k); // 2^k
        double v;
        try {
            v = alpha_weight(m, target, companion, lam);
        } catch (const Error&) {
            // The pooling mass became numerically invisible. Classify from
            // the established trend, otherwise give up.
            if (trend_up && prev > diverge_threshold) return {LimitClass::PlusInfinity, kInf};
            if (trend_down && prev < -diverge_threshold) return {LimitClass::MinusInfinity, -kInf};
            raise(ErrorCode::Inconclusive, "infinity limit: weight curve not evaluable far out");
        }
        if (!std::isnan(prev)) {
            const double diff = v - prev;
            trend_up = diff > 0.0 && (std::isnan(prev_diff) || prev_diff > 0.0);
            trend_down = diff < 0.0 && (std::isnan(prev_diff) || prev_diff < 0.0);
            if (std::abs(diff) < converge_threshold &&
                (std::isnan(prev_diff) ? true : std::abs(prev_diff) < 10 * converge_threshold)) {
                // First-order Richardson step for the C/lambda tail.
                return {LimitClass::Finite, 2.0 * v - prev};
            }
            if (v > diverge_threshold && trend_up) return {LimitClass::PlusInfinity, kInf};
            if (v < -diverge_threshold && trend_down) return {LimitClass::MinusInfinity, -kInf};
            prev_diff = diff;
        }
        prev = v;
    }
    raise(ErrorCode::Inconclusive, "infinity limit: no classification by lambda = 2^40");
}

namespace {

TheoremTag theorem_for(Kind kind, Target target, bool case_a) {
    if (kind == Kind::Location) {
        if (target == Target::Theta1) return case_a ? TheoremTag::T311a : TheoremTag::T311b;
        return case_a ? TheoremTag::T321a : TheoremTag::T321b;
    }
    if (target == Target::Theta1) return case_a ? TheoremTag::T411a : TheoremTag::T411b;
    return case_a ? TheoremTag::T421a : TheoremTag::T421b;
}

} // namespace

AdmissibleInterval admissible_interval(const Model& m, Target target, double companion,
                                       AssumptionReport* out_report) {
    AssumptionReport report = classify_lemma_case(m, target, companion);
    if (out_report) *out_report = report;

    const double lambda0 = m.kind() == Kind::Location ? 0.0 : 1.0;
    const double boundary = alpha_weight(m, target, companion, lambda0);
    const InfinityLimit limit = infinity_limit(m, target, companion);
    const double limit_value = limit.value;

    AdmissibleInterval out;
    out.boundary_value = boundary;
    out.limit = limit;
    out.low = std::min(boundary, limit_value);
    out.high = std::max(boundary, limit_value);
    out.trusted = report.lemma_case != LemmaCase::Unverified;

    bool case_a;
    switch (report.lemma_case) {
        case LemmaCase::CaseA: case_a = true; break;
        case LemmaCase::CaseB: case_a = false; break;
        case LemmaCase::Unverified: case_a = boundary <= limit_value; break;
    }
    out.direction = case_a ? Direction::Increasing : Direction::Decreasing;
    if (limit.cls == LimitClass::Finite &&
        std::abs(boundary - limit_value) <= 1e-9 * std::max(1.0, std::abs(boundary))) {
        out.direction = Direction::Constant;
    }
    out.theorem = theorem_for(m.kind(), target, case_a);
    out.dominance_rule =
        "for alpha < low, increasing alpha toward low dominates; "
        "for alpha > high, decreasing alpha toward high dominates";
    return out;
}

// ---------------------------------------------------------------------
// Monte Carlo oracle
// ---------------------------------------------------------------------

double oracle_best_alpha(const Model& m, Target target, double companion,
                         double lambda, std::size_t n, std::uint64_t seed) {
    if (n < 10000) raise(ErrorCode::InvalidArgument, "oracle needs at least 1e4 replicates");
    require_lambda(m.kind(), lambda);

    std::uint64_t lam_bits;
    static_assert(sizeof(double) == sizeof(std::uint64_t));
    std::memcpy(&lam_bits, &lambda, sizeof lambda);
    Rng rng(derive_seed(seed, mix64(lam_bits)));

    const auto [c01, c02] = m.constants();
    const double c0 = target == Target::Theta1 ? c01 : c02;

    // Per-draw deviations of delta1 and delta2 from the target parameter.
    // The pooled deviation is alpha*A + (1-alpha)*B with A belonging to
    // delta1; the unmixed branch keeps the anchor's deviation.
    struct Cell {
        double pooled_a, pooled_b;
        double anchor_dev;
        bool pooled;
    };
    std::vector<Cell> cells(n);
    for (std::size_t i = 0; i < n; ++i) {
        const PivotSample p = m.sample_pivot(rng);
        double d1, d2, anchor_dev, dev1, dev2;
        if (m.kind() == Kind::Location) {
            const double x1 = p.z1, x2 = p.z2 + lambda; // theta = (0, lambda)
            if (target == Target::Theta1) {
                d1 = x1 - c0;
                d2 = x2 - companion;
                dev1 = d1;
                dev2 = d2;
                anchor_dev = d1;
            } else {
                d1 = x1 - companion;
                d2 = x2 - c0;
                dev1 = d1 - lambda;
                dev2 = d2 - lambda;
                anchor_dev = dev2;
            }
        } else {
            const double x1 = p.z1, x2 = lambda * p.z2; // theta = (1, lambda)
            if (target == Target::Theta1) {
                d1 = c0 * x1;
                d2 = companion * x2;
                dev1 = d1 - 1.0;
                dev2 = d2 - 1.0;
                anchor_dev = dev1;
            } else {
                d1 = companion * x1;
                d2 = c0 * x2;
                dev1 = d1 / lambda - 1.0;
                dev2 = d2 / lambda - 1.0;
                anchor_dev = dev2;
            }
        }
        cells[i] = {dev1, dev2, anchor_dev, d1 > d2};
    }

    auto risk = [&](double alpha) {
        double sum = 0.0;
        for (const Cell& c : cells) {
            const double dev =
                c.pooled ? alpha * c.pooled_a + (1.0 - alpha) * c.pooled_b : c.anchor_dev;
            sum += dev * dev;
        }
        return sum / double(n);
    };

    double lo = -5.0, hi = 5.0;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int expansion = 0; expansion < 60; ++expansion) {
        double a = lo, b = hi;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = risk(x1), f2 = risk(x2);
        for (int it = 0; it < 200 && (b - a) > 1e-7 * std::max(1.0, std::abs(a) + std::abs(b));
             ++it) {
            if (f1 <= f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = risk(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = risk(x2);
            }
        }
        const double x = 0.5 * (a + b);
        const double width = hi - lo;
        if (x - lo < 0.01 * width) {
            hi = lo + 0.1 * width;
            lo -= width;
        } else if (hi - x < 0.01 * width) {
            lo = hi - 0.1 * width;
            hi += width;
        } else {
            return x;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace ordstat
