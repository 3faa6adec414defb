#pragma once

#include <functional>
#include <vector>

#include "ordstat/estimators.hpp"
#include "ordstat/models.hpp"

namespace ordstat {

enum class ShapeClass { LogConcave, LogConvex, Neither };
enum class MonotoneClass { Increasing, Decreasing, Neither };
enum class LemmaCase { CaseA, CaseB, Unverified };

const char* shape_name(ShapeClass s);
const char* monotone_name(MonotoneClass m);
const char* lemma_case_name(LemmaCase c);

/// Grid certificate for the hypotheses behind the admissibility results.
/// CaseA certifies a nondecreasing weight curve, CaseB a nonincreasing
/// one. These are numerical certifications on grids, not proofs.
struct AssumptionReport {
    Target target;
    Kind kind;
    double companion;
    ShapeClass fz_shape;          // scale kind: ratio condition, mapped
    MonotoneClass psi_direction;  // psi1/psi2 (location), psi/psi* (scale)
    MonotoneClass k_direction;    // uniform over the lambda probes
    LemmaCase lemma_case;
    Interval interval;            // domain examined after clipping
    int grid_size;
    std::vector<double> lambda_probes;
    // Grids retained for audit; exported as JSON.
    std::vector<double> shape_grid, shape_values;
    std::vector<double> psi_grid, psi_values;
};

struct AssumptionOptions {
    int grid_size = 512;
    double slack = 1e-9;
    std::vector<double> lambda_probes; // defaults depend on the kind
};

/// Sign of the second divided differences of log g on a grid over the
/// interval. Infinite endpoints are compactified, and the examined range
/// is clipped to where g is representable; ZeroDensity signals a zero of
/// g strictly inside that range.
ShapeClass check_log_shape(const std::function<double(double)>& g,
                           Interval interval, int n, double slack = 1e-9);

/// Direction of successive grid differences; constants report Increasing.
MonotoneClass check_monotone(const std::function<double(double)>& g,
                             Interval interval, int n, double slack = 1e-9);

/// Scale-kind shape hypothesis: monotonicity of t -> g(theta*t)/g(t),
/// uniform over theta in {0.25, 0.5, 0.75}.
MonotoneClass check_ratio_monotone(const std::function<double(double)>& g,
                                   Interval interval, int n, double slack = 1e-9);

/// Direction of z -> k(z, lambda), uniform over the lambda probes.
MonotoneClass check_k_direction(const Model& model, Target target, double companion,
                                const std::vector<double>& lambda_probes, int n,
                                double slack = 1e-9);

/// Runs the three checks on the intervals the results require and
/// combines them into a lemma case. Unverified never blocks downstream
/// computation; it only marks intervals untrusted.
AssumptionReport classify_lemma_case(const Model& model, Target target, double companion,
                                     const AssumptionOptions& opts = {});

std::string report_to_json(const AssumptionReport& report);

} // namespace ordstat
