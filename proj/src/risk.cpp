#include "ordstat/risk.hpp"

#include <algorithm>
#include <cmath>

#include "ordstat/alpha.hpp"
#include "ordstat/quadrature.hpp"

namespace ordstat {

namespace {

constexpr long kBlock = 4096;

// Pairwise reduction keeps the floating-point accumulation independent
// of block count and bounds drift on long runs.
double pairwise_sum(const std::vector<double>& xs, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return xs[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(xs, lo, mid) + pairwise_sum(xs, mid, hi);
}

double pairwise_sum(const std::vector<double>& xs) {
    return xs.empty() ? 0.0 : pairwise_sum(xs, 0, xs.size());
}

void require_lambda_grid(Kind kind, const std::vector<double>& grid) {
    const double lo = kind == Kind::Location ? 0.0 : 1.0;
    for (double lam : grid) {
        if (!(lam >= lo) || !std::isfinite(lam)) {
            raise(ErrorCode::InvalidArgument, "lambda grid contains values outside the restricted range");
        }
    }
}

double loss_of(const EstimatorSpec& spec, double value, double theta_target) {
    if (spec.kind == Kind::Location) {
        const double d = value - theta_target;
        return d * d;
    }
    const double d = value / theta_target - 1.0;
    return d * d;
}

/// Runs the replicate loop for one lambda and hands each replicate's
/// per-estimator losses to the sink.
template <class Sink>
void run_replicates(const Model& model, const std::vector<EstimatorSpec>& specs, double lambda,
                    std::size_t lambda_index, long n, std::uint64_t seed, Sink&& sink) {
    std::vector<double> losses(specs.size());
    const Kind kind = model.kind();
    for (long start = 0, block = 0; start < n; start += kBlock, ++block) {
        Rng rng(derive_seed(seed, lambda_index, static_cast<std::uint64_t>(block)));
        const long m = std::min<long>(kBlock, n - start);
        for (long i = 0; i < m; ++i) {
            const PivotSample p = model.sample_pivot(rng);
            double x1, x2, th1, th2;
            if (kind == Kind::Location) {
                th1 = 0.0;
                th2 = lambda;
                x1 = p.z1;
                x2 = p.z2 + lambda;
            } else {
                th1 = 1.0;
                th2 = lambda;
                x1 = p.z1;
                x2 = lambda * p.z2;
            }
            for (std::size_t e = 0; e < specs.size(); ++e) {
                const Estimate est = apply_estimator(specs[e], x1, x2);
                const double th = specs[e].target == Target::Theta1 ? th1 : th2;
                losses[e] = loss_of(specs[e], est.value, th);
            }
            sink(block, losses);
        }
    }
}

} // namespace

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::DominatesWithinMC: return "dominates_within_mc";
        case Verdict::NoDominance: return "no_dominance";
        case Verdict::Mixed: return "mixed";
    }
    return "?";
}

std::vector<RiskCurve> simulate_risks(const Model& model,
                                      const std::vector<LabeledEstimator>& estimators,
                                      const std::vector<double>& lambda_grid, long n,
                                      std::uint64_t seed) {
    if (n < 2) raise(ErrorCode::InvalidArgument, "need at least 2 replicates");
    if (estimators.empty()) raise(ErrorCode::InvalidArgument, "no estimators given");
    require_lambda_grid(model.kind(), lambda_grid);

    std::vector<EstimatorSpec> specs;
    specs.reserve(estimators.size());
    for (const auto& e : estimators) specs.push_back(e.spec);

    std::vector<RiskCurve> curves(estimators.size());
    for (std::size_t e = 0; e < estimators.size(); ++e) {
        curves[e].estimator_id = estimators[e].label;
        curves[e].lambda_grid = lambda_grid;
        curves[e].n = n;
        curves[e].seed = seed;
    }

    const std::size_t nblocks = (n + kBlock - 1) / kBlock;
    for (std::size_t j = 0; j < lambda_grid.size(); ++j) {
        std::vector<std::vector<double>> sum(estimators.size(), std::vector<double>(nblocks, 0.0));
        std::vector<std::vector<double>> sumsq(estimators.size(), std::vector<double>(nblocks, 0.0));
        run_replicates(model, specs, lambda_grid[j], j, n, seed,
                       [&](long block, const std::vector<double>& losses) {
                           for (std::size_t e = 0; e < losses.size(); ++e) {
                               sum[e][block] += losses[e];
                               sumsq[e][block] += losses[e] * losses[e];
                           }
                       });
        for (std::size_t e = 0; e < estimators.size(); ++e) {
            const double s = pairwise_sum(sum[e]);
            const double s2 = pairwise_sum(sumsq[e]);
            const double mean = s / double(n);
            const double var = std::max(0.0, (s2 - double(n) * mean * mean) / double(n - 1));
            curves[e].risk.push_back(mean);
            curves[e].std_err.push_back(std::sqrt(var / double(n)));
        }
    }
    return curves;
}

RiskCurve simulate_risk(const Model& model, const EstimatorSpec& estimator,
                        const std::vector<double>& lambda_grid, long n, std::uint64_t seed) {
    return simulate_risks(model, {{estimator_id(estimator), estimator}}, lambda_grid, n, seed)
        .front();
}

double quadrature_risk_location(const Model& model, const EstimatorSpec& spec, double lambda) {
    if (model.kind() != Kind::Location || spec.kind != Kind::Location) {
        raise(ErrorCode::InvalidArgument, "quadrature risk is defined for the location kind");
    }
    if (!(lambda >= 0.0)) raise(ErrorCode::InvalidArgument, "lambda must be non-negative");
    const DerivedFunctions& d = model.derived();
    const double c0 = spec.c0;
    const double comp = spec.companion;
    const double alpha = spec.alpha;

    // Pooling region Z < w; deviations conditional on Z = z are
    // Z1 + h(z) (unmixed) and Z1 + g(z) (pooled), integrated against the
    // moment densities m0 = f_Z, m1, m2.
    double w, h_const;
    std::function<double(double)> gfun;
    if (spec.target == Target::Theta1) {
        w = comp - c0 - lambda;
        h_const = -c0;
        gfun = [=](double z) { return (1.0 - alpha) * (z + lambda - comp) - alpha * c0; };
    } else {
        w = c0 - comp - lambda;
        h_const = std::numeric_limits<double>::quiet_NaN(); // h depends on z below
        gfun = [=](double z) { return (z - c0) - alpha * (z + lambda + comp - c0); };
    }

    const double lo = d.z_support.lo;
    const double hi = d.z_support.hi;
    auto quad = [&](double a, double b, const std::function<double(double)>& shift) {
        if (!(a < b)) return 0.0;
        return integrate(
            [&](double z) {
                const double s = shift(z);
                return d.m2(z) + 2.0 * s * d.m1(z) + s * s * d.fz(z);
            },
            a, b);
    };
    std::function<double(double)> hfun;
    if (spec.target == Target::Theta1) {
        hfun = [=](double) { return h_const; };
    } else {
        hfun = [=](double z) { return z - c0; };
    }
    const double unmixed = quad(std::max(lo, w), hi, hfun);
    const double pooled = quad(lo, std::min(hi, w), gfun);
    return unmixed + pooled;
}

DominanceReport dominance_report(const Model& model, const EstimatorSpec& challenger,
                                 const EstimatorSpec& incumbent,
                                 const std::vector<double>& lambda_grid, long n,
                                 std::uint64_t seed) {
    if (challenger.target != incumbent.target || challenger.kind != incumbent.kind) {
        raise(ErrorCode::InvalidArgument, "dominance comparison needs matching target and kind");
    }
    require_lambda_grid(model.kind(), lambda_grid);
    DominanceReport rep;
    rep.challenger = estimator_id(challenger);
    rep.incumbent = estimator_id(incumbent);
    const std::vector<EstimatorSpec> specs{challenger, incumbent};

    bool any_worse = false, any_better = false;
    const std::size_t nblocks = (n + kBlock - 1) / kBlock;
    for (std::size_t j = 0; j < lambda_grid.size(); ++j) {
        std::vector<double> dsum(nblocks, 0.0), dsumsq(nblocks, 0.0);
        run_replicates(model, specs, lambda_grid[j], j, n, seed,
                       [&](long block, const std::vector<double>& losses) {
                           const double diff = losses[0] - losses[1];
                           dsum[block] += diff;
                           dsumsq[block] += diff * diff;
                       });
        const double s = pairwise_sum(dsum);
        const double s2 = pairwise_sum(dsumsq);
        const double mean = s / double(n);
        const double var = std::max(0.0, (s2 - double(n) * mean * mean) / double(n - 1));
        const double se = std::sqrt(var / double(n));
        const double z = se > 0.0 ? mean / se : 0.0;
        rep.cells.push_back({lambda_grid[j], mean, z});
        if (z > 3.0) any_worse = true;
        if (z < -3.0) any_better = true;
    }
    if (!any_worse) {
        rep.verdict = Verdict::DominatesWithinMC;
    } else {
        rep.verdict = any_better ? Verdict::Mixed : Verdict::NoDominance;
    }
    return rep;
}

// ---------------------------------------------------------------------
// Figures
// ---------------------------------------------------------------------

const std::vector<FigurePanel>& figure_panels(FigureId id) {
    static const std::vector<FigurePanel> fig1{{1.0, 0.5}, {0.5, 1.5},  {3.0, 2.0},
                                               {5.0, 10.0}, {10.0, 15.0}, {15.0, 12.0}};
    static const std::vector<FigurePanel> fig2{{0.1, 0.2}, {0.8, 0.5}, {1.0, 1.0}, {2.0, 1.0}};
    return id == FigureId::Fig1 ? fig1 : fig2;
}

FigureResult reproduce_figure(FigureId id, FigurePanel panel, long n, std::uint64_t seed,
                              const std::vector<double>& lambda_grid) {
    const auto& panels = figure_panels(id);
    const bool known = std::any_of(panels.begin(), panels.end(), [&](const FigurePanel& p) {
        return p.p1 == panel.p1 && p.p2 == panel.p2;
    });
    if (!known) {
        raise(ErrorCode::UnknownPanel, "panel is not part of the published set");
    }

    if (id == FigureId::Fig1) {
        const Model model = Model::exponential_location(panel.p1, panel.p2);
        const std::vector<double> grid =
            lambda_grid.empty() ? default_lambda_grid(Kind::Location) : lambda_grid;
        std::vector<LabeledEstimator> legend{
            {"BLEE", named_estimator(Tag::Blee, Target::Theta1, model)},
            {"RMLE", named_estimator(Tag::Rmle, Target::Theta1, model)},
            {"IRE-BLEE", named_estimator(Tag::IreOnBlees, Target::Theta1, model)},
            {"IRE-NU", named_estimator(Tag::ExpDominator, Target::Theta1, model)},
        };
        FigureResult out{id, panel, model, simulate_risks(model, legend, grid, n, seed), {}, {}};
        out.designated = dominance_report(model, legend[3].spec, legend[0].spec, grid, n, seed);
        out.naive = dominance_report(model, legend[2].spec, legend[0].spec, grid, n, seed);
        return out;
    }

    const Model model = Model::gamma_scale(panel.p1, panel.p2);
    const std::vector<double> grid =
        lambda_grid.empty() ? default_lambda_grid(Kind::Scale) : lambda_grid;
    std::vector<LabeledEstimator> legend{
        {"BSEE", named_estimator(Tag::Bsee, Target::Theta1, model)},
        {"IRE-BSEE", named_estimator(Tag::IreOnBsees, Target::Theta1, model)},
        {"IRE-NU", named_estimator(Tag::GammaDominator, Target::Theta1, model)},
    };
    FigureResult out{id, panel, model, simulate_risks(model, legend, grid, n, seed), {}, {}};
    out.designated = dominance_report(model, legend[2].spec, legend[0].spec, grid, n, seed);
    out.naive = dominance_report(model, legend[1].spec, legend[0].spec, grid, n, seed);
    return out;
}

} // namespace ordstat
