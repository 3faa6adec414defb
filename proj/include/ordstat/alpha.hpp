#pragma once

#include <string>
#include <vector>

#include "ordstat/assumptions.hpp"
#include "ordstat/estimators.hpp"
#include "ordstat/models.hpp"

namespace ordstat {

enum class LimitClass { Finite, PlusInfinity, MinusInfinity };
enum class Direction { Increasing, Decreasing, Constant };
enum class TheoremTag { T311a, T311b, T321a, T321b, T411a, T411b, T421a, T421b };

const char* limit_class_name(LimitClass c);
const char* direction_name(Direction d);
const char* theorem_name(TheoremTag t);

struct InfinityLimit {
    LimitClass cls;
    double value; // finite limit, or +/-inf matching cls
};

/// Risk-minimizing weight at one lambda. Dispatches on kind and target.
double alpha_weight(const Model& model, Target target, double companion, double lambda);

// The four cases individually. Location lambdas start at 0, scale at 1.
double alpha1_location(const Model& model, double nu, double lambda);
double alpha2_location(const Model& model, double beta, double lambda);
double alpha1_scale(const Model& model, double nu, double lambda);
double alpha2_scale(const Model& model, double beta, double lambda);

/// alpha1(lambda) - 1; exposed so the identity alpha1 = 1 + alpha1* can
/// be checked bit-exactly.
double alpha1_star_location(const Model& model, double nu, double lambda);
double alpha1_star_scale(const Model& model, double nu, double lambda);

/// Default 30-point grid: {0} then log-spaced to 10 for the location
/// kind, log-spaced on [1, 20] for the scale kind.
std::vector<double> default_lambda_grid(Kind kind, int points = 30,
                                        double lo = -1.0, double hi = -1.0);

struct AlphaCurve {
    Target target;
    Kind kind;
    double companion;
    std::vector<double> lambda_grid;
    std::vector<double> values;
    double boundary_value;
    InfinityLimit infinity;
};

AlphaCurve compute_alpha_curve(const Model& model, Target target, double companion,
                               const std::vector<double>& lambda_grid);

/// Evaluates alpha at geometrically growing lambda and classifies the
/// tail: Finite (Richardson-extrapolated value), PlusInfinity or
/// MinusInfinity once values pass +/-1e6 monotonically. Inconclusive is
/// raised when nothing triggers by lambda = 2^40.
InfinityLimit infinity_limit(const Model& model, Target target, double companion);

struct AdmissibleInterval {
    double low;
    double high; // extended reals; +/inf allowed
    Direction direction;
    TheoremTag theorem;
    bool trusted; // false when the lemma hypotheses were not certified
    double boundary_value;
    InfinityLimit limit;
    std::string dominance_rule;
};

/// Weight interval of the applicable admissibility result, endpoints
/// taken from the boundary value and the lambda->infinity limit. When
/// the assumptions are Unverified the interval is still computed and
/// flagged untrusted.
AdmissibleInterval admissible_interval(const Model& model, Target target, double companion,
                                       AssumptionReport* out_report = nullptr);

/// Brute-force risk minimizer over alpha by golden-section search with
/// common random numbers; independent of the quadrature path.
double oracle_best_alpha(const Model& model, Target target, double companion,
                         double lambda, std::size_t n, std::uint64_t seed);

} // namespace ordstat
