#include "ordstat/assumptions.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace ordstat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Representability floor: grids over unbounded intervals are clipped to
// where the density stays above this, so far tails cannot force a
// spurious ZeroDensity.
constexpr double kDensityFloor = 1e-280;

// Maps t in (0,1) onto (lo, hi) with rational compactification of
// infinite endpoints.
double map_point(double t, double lo, double hi) {
    const bool ilo = std::isinf(lo), ihi = std::isinf(hi);
    if (!ilo && !ihi) return lo + t * (hi - lo);
    if (ilo && ihi) {
        const double u = 2.0 * t - 1.0; // (-1, 1)
        return u / (1.0 - u * u);
    }
    if (ihi) return lo + t / (1.0 - t);
    return hi - (1.0 - t) / t;
}

std::vector<double> build_grid(double lo, double hi, int n) {
    std::vector<double> g;
    g.reserve(n);
    for (int i = 1; i <= n; ++i) {
        g.push_back(map_point(double(i) / double(n + 1), lo, hi));
    }
    return g;
}

// Clips an unbounded examination interval to where g is representable.
// Bisects in the transformed coordinate toward each infinite endpoint.
Interval clip_to_representable(const std::function<double(double)>& g, Interval iv) {
    auto ok = [&](double z) {
        const double v = g(z);
        return std::isfinite(v) && v > kDensityFloor;
    };
    double t_lo = 1e-12, t_hi = 1.0 - 1e-12;
    if (std::isinf(iv.lo)) {
        double a = t_lo, b = 0.5;
        if (!ok(map_point(b, iv.lo, iv.hi))) b = 0.9;
        if (!ok(map_point(a, iv.lo, iv.hi))) {
            for (int i = 0; i < 80; ++i) {
                const double mid = 0.5 * (a + b);
                (ok(map_point(mid, iv.lo, iv.hi)) ? b : a) = mid;
            }
            iv.lo = map_point(b, iv.lo, iv.hi);
        }
    }
    if (std::isinf(iv.hi)) {
        double a = 0.5, b = t_hi;
        if (!ok(map_point(a, iv.lo, iv.hi))) a = 0.1;
        if (!ok(map_point(b, iv.lo, iv.hi))) {
            for (int i = 0; i < 80; ++i) {
                const double mid = 0.5 * (a + b);
                (ok(map_point(mid, iv.lo, iv.hi)) ? a : b) = mid;
            }
            iv.hi = map_point(a, iv.lo, iv.hi);
        }
    }
    return iv;
}

// A constant slice is compatible with either direction; keeping it as a
// separate state lets probe combination stay strict without a constant
// slice at a boundary parameter spoiling the verdict.
enum class Dir4 { Increasing, Decreasing, Constant, Neither };

Dir4 direction4_of(const std::vector<double>& values, double slack) {
    bool can_increase = true, can_decrease = true;
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double d = values[i] - values[i - 1];
        if (d < -slack) can_increase = false;
        if (d > slack) can_decrease = false;
    }
    if (can_increase && can_decrease) return Dir4::Constant;
    if (can_increase) return Dir4::Increasing;
    if (can_decrease) return Dir4::Decreasing;
    return Dir4::Neither;
}

// Reproducible tie rule: constants count as increasing.
MonotoneClass to_monotone(Dir4 d) {
    switch (d) {
        case Dir4::Increasing:
        case Dir4::Constant: return MonotoneClass::Increasing;
        case Dir4::Decreasing: return MonotoneClass::Decreasing;
        case Dir4::Neither: return MonotoneClass::Neither;
    }
    return MonotoneClass::Neither;
}

struct DirCombiner {
    Dir4 state = Dir4::Constant;
    void add(Dir4 d) {
        if (state == Dir4::Neither || d == Dir4::Constant) return;
        if (d == Dir4::Neither || state == Dir4::Constant) {
            state = d;
        } else if (state != d) {
            state = Dir4::Neither;
        }
    }
    MonotoneClass result() const { return to_monotone(state); }
};

Dir4 direction4_on_grid(const std::function<double(double)>& g, Interval interval, int n,
                        double slack) {
    const std::vector<double> zs = build_grid(interval.lo, interval.hi, n);
    std::vector<double> vals(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) vals[i] = g(zs[i]);
    return direction4_of(vals, slack);
}

} // namespace

const char* shape_name(ShapeClass s) {
    switch (s) {
        case ShapeClass::LogConcave: return "log_concave";
        case ShapeClass::LogConvex: return "log_convex";
        case ShapeClass::Neither: return "neither";
    }
    return "?";
}

const char* monotone_name(MonotoneClass m) {
    switch (m) {
        case MonotoneClass::Increasing: return "increasing";
        case MonotoneClass::Decreasing: return "decreasing";
        case MonotoneClass::Neither: return "neither";
    }
    return "?";
}

const char* lemma_case_name(LemmaCase c) {
    switch (c) {
        case LemmaCase::CaseA: return "case_a";
        case LemmaCase::CaseB: return "case_b";
        case LemmaCase::Unverified: return "unverified";
    }
    return "?";
}

ShapeClass check_log_shape(const std::function<double(double)>& g, Interval interval, int n,
                           double slack) {
    if (n < 16) raise(ErrorCode::InvalidArgument, "shape check needs at least 16 grid points");
    const Interval iv = clip_to_representable(g, interval);
    const std::vector<double> zs = build_grid(iv.lo, iv.hi, n);
    std::vector<double> logs(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) {
        const double v = g(zs[i]);
        if (!(v > 0.0)) {
            raise(ErrorCode::ZeroDensity, "density vanishes inside the examined interval");
        }
        logs[i] = std::log(v);
    }
    // Second divided differences keep the convexity sign on uneven grids.
    bool concave = true, convex = true;
    for (std::size_t i = 2; i < zs.size(); ++i) {
        const double d1 = (logs[i - 1] - logs[i - 2]) / (zs[i - 1] - zs[i - 2]);
        const double d2 = (logs[i] - logs[i - 1]) / (zs[i] - zs[i - 1]);
        const double dd = (d2 - d1) / (zs[i] - zs[i - 2]);
        if (dd > slack) concave = false;
        if (dd < -slack) convex = false;
    }
    if (concave) return ShapeClass::LogConcave;
    if (convex) return ShapeClass::LogConvex;
    return ShapeClass::Neither;
}

MonotoneClass check_monotone(const std::function<double(double)>& g, Interval interval, int n,
                             double slack) {
    if (n < 16) raise(ErrorCode::InvalidArgument, "monotone check needs at least 16 grid points");
    return to_monotone(direction4_on_grid(g, interval, n, slack));
}

MonotoneClass check_ratio_monotone(const std::function<double(double)>& g, Interval interval,
                                   int n, double slack) {
    if (n < 16) raise(ErrorCode::InvalidArgument, "ratio check needs at least 16 grid points");
    const Interval iv = clip_to_representable(g, interval);
    const std::vector<double> ts = build_grid(iv.lo, iv.hi, n);
    DirCombiner combined;
    for (double theta : {0.25, 0.5, 0.75}) {
        std::vector<double> vals;
        vals.reserve(ts.size());
        for (double t : ts) {
            const double den = g(t);
            if (!(den > 0.0)) {
                raise(ErrorCode::ZeroDensity, "density vanishes inside the examined interval");
            }
            vals.push_back(g(theta * t) / den);
        }
        combined.add(direction4_of(vals, slack));
    }
    return combined.result();
}

namespace {

std::function<double(double)> k_function(const Model& m, Target target, double companion,
                                         double lambda) {
    const DerivedFunctions& d = m.derived();
    const auto [c01, c02] = m.constants();
    if (m.kind() == Kind::Location) {
        if (target == Target::Theta1) {
            const double shift = companion - c01 - lambda;
            return [&d, c01, shift](double z) { return (d.psi1(z + shift) - c01) / z; };
        }
        const double shift = c02 - companion - lambda;
        return [&d, c02, shift](double z) { return (d.psi2(z + shift) - c02) / z; };
    }
    if (target == Target::Theta1) {
        const double s = c01 / (companion * lambda);
        return [&d, c01, s](double z) { return (d.psi(s * z) - c01) / (1.0 - z); };
    }
    const double s = companion / (lambda * c02);
    return [&d, c02, s](double z) { return (d.psi_star(s * z) - c02) / (1.0 / z - 1.0); };
}

} // namespace

MonotoneClass check_k_direction(const Model& m, Target target, double companion,
                                const std::vector<double>& lambda_probes, int n, double slack) {
    if (lambda_probes.empty()) raise(ErrorCode::InvalidArgument, "lambda probe set is empty");
    if (n < 16) raise(ErrorCode::InvalidArgument, "k check needs at least 16 grid points");
    const Interval domain = m.kind() == Kind::Location ? Interval{-kInf, 0.0} : Interval{0.0, 1.0};
    DirCombiner combined;
    for (double lam : lambda_probes) {
        Interval iv = domain;
        if (m.kind() == Kind::Location) {
            // Keep the psi argument inside the numeric support of Z.
            const auto& d = m.derived();
            const double shift = target == Target::Theta1
                                     ? companion - m.constants().first - lam
                                     : m.constants().second - companion - lam;
            Interval probe = clip_to_representable(d.fz, d.z_support);
            iv.lo = std::max(iv.lo, probe.lo - shift);
            iv.hi = std::min(iv.hi, probe.hi - shift);
            if (!(iv.lo < iv.hi)) continue;
        }
        combined.add(direction4_on_grid(k_function(m, target, companion, lam), iv, n, slack));
    }
    return combined.result();
}

AssumptionReport classify_lemma_case(const Model& m, Target target, double companion,
                                     const AssumptionOptions& opts) {
    AssumptionReport rep;
    rep.target = target;
    rep.kind = m.kind();
    rep.companion = companion;
    rep.grid_size = opts.grid_size;
    rep.lambda_probes = opts.lambda_probes;
    if (rep.lambda_probes.empty()) {
        rep.lambda_probes = m.kind() == Kind::Location
                                ? std::vector<double>{0.0, 0.5, 1.0, 2.0, 5.0, 10.0}
                                : std::vector<double>{1.0, 1.5, 2.0, 3.0, 6.0, 11.0};
    }

    const DerivedFunctions& d = m.derived();
    const auto [c01, c02] = m.constants();

    Interval region; // where the shape and psi hypotheses are examined
    std::function<double(double)> psi_fn;
    if (m.kind() == Kind::Location) {
        const double edge = target == Target::Theta1 ? companion - c01 : c02 - companion;
        region = {-kInf, edge};
        region.lo = std::max(region.lo, d.z_support.lo);
        region.hi = std::min(region.hi, d.z_support.hi);
        psi_fn = target == Target::Theta1 ? d.psi1 : d.psi2;
    } else {
        const double edge = target == Target::Theta1 ? c01 / companion : companion / c02;
        region = {std::max(0.0, d.z_support.lo), std::min(edge, d.z_support.hi)};
        psi_fn = target == Target::Theta1 ? d.psi : d.psi_star;
    }
    rep.interval = region;

    // Shape hypothesis: log-concavity/convexity of f_Z for the location
    // kind; the fixed-theta ratio condition for the scale kind, recorded
    // in the same slot with increasing ratios in the log-concave place.
    if (m.kind() == Kind::Location) {
        rep.fz_shape = check_log_shape(d.fz, region, opts.grid_size, opts.slack);
    } else {
        const std::function<double(double)> moment_density =
            target == Target::Theta1 ? d.psi2 : d.psi4;
        const MonotoneClass r_fz = check_ratio_monotone(d.fz, region, opts.grid_size, opts.slack);
        const MonotoneClass r_m =
            check_ratio_monotone(moment_density, region, opts.grid_size, opts.slack);
        if (r_fz == r_m && r_fz == MonotoneClass::Increasing) {
            rep.fz_shape = ShapeClass::LogConcave;
        } else if (r_fz == r_m && r_fz == MonotoneClass::Decreasing) {
            rep.fz_shape = ShapeClass::LogConvex;
        } else {
            rep.fz_shape = ShapeClass::Neither;
        }
    }

    {
        const Interval iv = clip_to_representable(d.fz, region);
        rep.psi_direction = check_monotone(psi_fn, iv, opts.grid_size, opts.slack);
        rep.psi_grid = build_grid(iv.lo, iv.hi, std::min(opts.grid_size, 64));
        for (double z : rep.psi_grid) rep.psi_values.push_back(psi_fn(z));
        rep.shape_grid = rep.psi_grid;
        for (double z : rep.shape_grid) rep.shape_values.push_back(d.fz(z));
    }

    rep.k_direction =
        check_k_direction(m, target, companion, rep.lambda_probes, opts.grid_size, opts.slack);

    // Pairings behind the monotone-weight conclusions. CaseA certifies an
    // increasing weight curve, CaseB a decreasing one. The psi condition
    // flips between the location and scale kinds.
    const bool shape_pos = rep.fz_shape == ShapeClass::LogConcave;
    const bool shape_neg = rep.fz_shape == ShapeClass::LogConvex;
    const bool k_inc = rep.k_direction == MonotoneClass::Increasing;
    const bool k_dec = rep.k_direction == MonotoneClass::Decreasing;
    const bool pair_pos = (shape_pos && k_inc) || (shape_neg && k_dec);
    const bool pair_neg = (shape_pos && k_dec) || (shape_neg && k_inc);
    const MonotoneClass psi_for_a =
        m.kind() == Kind::Location ? MonotoneClass::Increasing : MonotoneClass::Decreasing;
    const MonotoneClass psi_for_b =
        m.kind() == Kind::Location ? MonotoneClass::Decreasing : MonotoneClass::Increasing;
    if (rep.psi_direction == psi_for_a && pair_pos) {
        rep.lemma_case = LemmaCase::CaseA;
    } else if (rep.psi_direction == psi_for_b && pair_neg) {
        rep.lemma_case = LemmaCase::CaseB;
    } else {
        rep.lemma_case = LemmaCase::Unverified;
    }
    return rep;
}

std::string report_to_json(const AssumptionReport& rep) {
    nlohmann::json j;
    j["target"] = target_name(rep.target);
    j["kind"] = kind_name(rep.kind);
    j["companion"] = rep.companion;
    j["fz_shape"] = shape_name(rep.fz_shape);
    j["shape_form"] = rep.kind == Kind::Location ? "log_density" : "fixed_theta_ratio";
    j["psi_direction"] = monotone_name(rep.psi_direction);
    j["k_direction"] = monotone_name(rep.k_direction);
    j["lemma_case"] = lemma_case_name(rep.lemma_case);
    j["certification"] = "numerically certified on grid";
    j["interval"] = {rep.interval.lo, rep.interval.hi};
    j["grid_size"] = rep.grid_size;
    j["lambda_probes"] = rep.lambda_probes;
    j["audit"] = {{"grid", rep.psi_grid},
                  {"psi", rep.psi_values},
                  {"fz", rep.shape_values}};
    return j.dump(2);
}

} // namespace ordstat
