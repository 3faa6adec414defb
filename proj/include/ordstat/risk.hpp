#pragma once

#include <string>
#include <vector>

#include "ordstat/estimators.hpp"
#include "ordstat/models.hpp"

namespace ordstat {

enum class Verdict { DominatesWithinMC, NoDominance, Mixed };

const char* verdict_name(Verdict v);

struct RiskCurve {
    std::string estimator_id;
    std::vector<double> lambda_grid;
    std::vector<double> risk;
    std::vector<double> std_err;
    long n;
    std::uint64_t seed;
};

struct DominanceCell {
    double lambda;
    double gap;     // challenger risk minus incumbent risk
    double z_score; // gap over the paired standard error
};

struct DominanceReport {
    std::string challenger;
    std::string incumbent;
    std::vector<DominanceCell> cells;
    Verdict verdict;
};

/// A named estimator within one simulation; label is used in CSV/SVG.
struct LabeledEstimator {
    std::string label;
    EstimatorSpec spec;
};

/// Seeded Monte Carlo risk over the lambda grid. Replicates are drawn in
/// fixed-size blocks with counter-derived seeds and combined by pairwise
/// summation, so results do not depend on scheduling. All estimators see
/// the same draws (common random numbers).
std::vector<RiskCurve> simulate_risks(const Model& model,
                                      const std::vector<LabeledEstimator>& estimators,
                                      const std::vector<double>& lambda_grid, long n,
                                      std::uint64_t seed);

RiskCurve simulate_risk(const Model& model, const EstimatorSpec& estimator,
                        const std::vector<double>& lambda_grid, long n, std::uint64_t seed);

/// Location-kind risk by quadrature of the two-branch decomposition;
/// cross-checks the Monte Carlo path.
double quadrature_risk_location(const Model& model, const EstimatorSpec& estimator,
                                double lambda);

DominanceReport dominance_report(const Model& model, const EstimatorSpec& challenger,
                                 const EstimatorSpec& incumbent,
                                 const std::vector<double>& lambda_grid, long n,
                                 std::uint64_t seed);

// ---------------------------------------------------------------------
// Figure reproduction
// ---------------------------------------------------------------------

enum class FigureId { Fig1, Fig2 };

struct FigurePanel {
    double p1;
    double p2;
};

struct FigureResult {
    FigureId figure;
    FigurePanel panel;
    Model model;
    std::vector<RiskCurve> curves;       // legend order
    DominanceReport designated;          // paper-designated dominator vs incumbent
    DominanceReport naive;               // pooled best-equivariant pair vs incumbent
};

/// Panels available for each figure, in the published order.
const std::vector<FigurePanel>& figure_panels(FigureId id);

FigureResult reproduce_figure(FigureId id, FigurePanel panel, long n, std::uint64_t seed,
                              const std::vector<double>& lambda_grid = {});

} // namespace ordstat
