#pragma once

#include <optional>
#include <string>
#include <utility>

#include "ordstat/models.hpp"

namespace ordstat {

enum class Target { Theta1, Theta2 };

const char* target_name(Target t);

/// Named presets from the worked examples. The mapping (family, target,
/// tag) -> constants is data, kept in one registry in estimators.cpp.
enum class Tag {
    Blee,           // anchor-only branch: alpha=1 (theta1) / alpha=0 (theta2)
    Bsee,           // alias of Blee for scale families
    Rmle,           // restricted MLE where it coincides with a class member
    ExpDominator,   // exponential location, theta1
    GammaDominator, // gamma scale, theta1
    PowerDominator, // power scale, theta1 and theta2
    IreOnBlees,     // pooled pair of best equivariant estimators, alpha=0
    IreOnBsees,     // pooled pair of best equivariant estimators, alpha=a1/(a1+a2)
};

const char* tag_name(Tag t);
std::optional<Tag> tag_from_name(const std::string& name);

struct WeightPair {
    double w1;
    double w2;
};

/// One member of the mixed-estimator class: anchor constant c0 for the
/// target component, companion constant (nu for theta1, beta for theta2)
/// and pooling weight alpha. alpha may lie anywhere in R.
struct EstimatorSpec {
    Target target;
    Kind kind;
    double c0;
    double companion;
    double alpha;
    std::optional<Tag> tag;
};

/// Result of applying an estimator at a data point. pair1/pair2 is the
/// ordered pooled pair; value is the component the spec targets.
struct Estimate {
    double value;
    double pair1;
    double pair2;
    bool pooled;
    /// Scale-kind estimate left the action space (possible for alpha
    /// outside [0,1]); returned as-is.
    bool nonpositive;
};

/// Weighted two-point isotonic regression: the ordered pair minimizing
/// w1 (d1-y1)^2 + w2 (d2-y2)^2 over y1 <= y2.
std::pair<double, double> isotonic_pair(double d1, double d2, const WeightPair& w);

void validate(const EstimatorSpec& spec);

Estimate apply_estimator(const EstimatorSpec& spec, double x1, double x2);

/// Preset estimator for a built-in family; InapplicableTag if the
/// combination is not registered.
EstimatorSpec named_estimator(Tag tag, Target target, const Model& model);

/// Compact identifier used in CSV output and reports.
std::string estimator_id(const EstimatorSpec& spec);

std::string estimator_to_json(const EstimatorSpec& spec);
EstimatorSpec estimator_from_json(const std::string& text);

} // namespace ordstat
