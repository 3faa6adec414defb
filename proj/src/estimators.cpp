#include "ordstat/estimators.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace ordstat {

const char* target_name(Target t) {
    return t == Target::Theta1 ? "theta1" : "theta2";
}

const char* tag_name(Tag t) {
    switch (t) {
        case Tag::Blee: return "blee";
        case Tag::Bsee: return "bsee";
        case Tag::Rmle: return "rmle";
        case Tag::ExpDominator: return "exp-dominator";
        case Tag::GammaDominator: return "gamma-dominator";
        case Tag::PowerDominator: return "power-dominator";
        case Tag::IreOnBlees: return "ire-on-blees";
        case Tag::IreOnBsees: return "ire-on-bsees";
    }
    return "?";
}

std::optional<Tag> tag_from_name(const std::string& name) {
    for (Tag t : {Tag::Blee, Tag::Bsee, Tag::Rmle, Tag::ExpDominator, Tag::GammaDominator,
                  Tag::PowerDominator, Tag::IreOnBlees, Tag::IreOnBsees}) {
        if (name == tag_name(t)) return t;
    }
    return std::nullopt;
}

std::pair<double, double> isotonic_pair(double d1, double d2, const WeightPair& w) {
    if (w.w1 < 0.0 || w.w2 < 0.0) {
        raise(ErrorCode::InvalidArgument, "weights must be non-negative");
    }
    if (w.w1 + w.w2 == 0.0) {
        raise(ErrorCode::ZeroWeights, "weights must not both be zero");
    }
    if (d1 <= d2) return {d1, d2};
    const double alpha = w.w1 / (w.w1 + w.w2);
    const double pooled = alpha * d1 + (1.0 - alpha) * d2;
    return {pooled, pooled};
}

void validate(const EstimatorSpec& spec) {
    if (!std::isfinite(spec.c0) || !std::isfinite(spec.companion) || !std::isfinite(spec.alpha)) {
        raise(ErrorCode::InvalidArgument, "estimator constants must be finite");
    }
    if (spec.kind == Kind::Scale && (!(spec.c0 > 0.0) || !(spec.companion > 0.0))) {
        raise(ErrorCode::InvalidArgument,
              "scale-kind estimators need positive anchor and companion constants");
    }
}

Estimate apply_estimator(const EstimatorSpec& spec, double x1, double x2) {
    validate(spec);
    double d1, d2; // d1 estimates theta1, d2 estimates theta2
    if (spec.kind == Kind::Location) {
        d1 = x1 - (spec.target == Target::Theta1 ? spec.c0 : spec.companion);
        d2 = x2 - (spec.target == Target::Theta1 ? spec.companion : spec.c0);
    } else {
        if (!(x1 > 0.0) || !(x2 > 0.0)) {
            raise(ErrorCode::OutOfSupport, "scale-kind data must lie in the positive quadrant");
        }
        d1 = (spec.target == Target::Theta1 ? spec.c0 : spec.companion) * x1;
        d2 = (spec.target == Target::Theta1 ? spec.companion : spec.c0) * x2;
    }
    Estimate e{};
    // Tie d1 == d2 takes the unmixed branch; both branches agree there.
    if (d1 <= d2) {
        e.pooled = false;
        e.pair1 = d1;
        e.pair2 = d2;
    } else {
        e.pooled = true;
        const double pooled = spec.alpha * d1 + (1.0 - spec.alpha) * d2;
        e.pair1 = pooled;
        e.pair2 = pooled;
    }
    e.value = spec.target == Target::Theta1 ? e.pair1 : e.pair2;
    e.nonpositive = spec.kind == Kind::Scale && !(e.value > 0.0);
    return e;
}

// ---------------------------------------------------------------------------
// Preset registry
// ---------------------------------------------------------------------------

namespace {

struct PresetKey {
    Family family;
    Target target;
    Tag tag;
    bool operator==(const PresetKey&) const = default;
};

EstimatorSpec blee(Target target, const Model& m) {
    const auto [c01, c02] = m.constants();
    EstimatorSpec s{};
    s.target = target;
    s.kind = m.kind();
    s.c0 = target == Target::Theta1 ? c01 : c02;
    s.companion = target == Target::Theta1 ? c02 : c01;
    s.alpha = target == Target::Theta1 ? 1.0 : 0.0;
    return s;
}

} // namespace

EstimatorSpec named_estimator(Tag tag, Target target, const Model& m) {
    const auto p = m.params();
    const auto [c01, c02] = m.constants();
    auto fail = [&]() -> EstimatorSpec {
        raise(ErrorCode::InapplicableTag,
              std::string(tag_name(tag)) + " is not defined for family " +
                  family_name(m.family()) + " / " + target_name(target));
    };
    EstimatorSpec s{};
    s.target = target;
    s.kind = m.kind();
    s.tag = tag;
    switch (tag) {
        case Tag::Blee:
        case Tag::Bsee: {
            if (tag == Tag::Bsee && m.kind() != Kind::Scale) return fail();
            EstimatorSpec b = blee(target, m);
            b.tag = tag;
            return b;
        }
        case Tag::Rmle: {
            if (m.family() == Family::BivariateNormal) {
                const double s1 = p[0], s2 = p[1], rho = p[2];
                const double tau2 = s1 * s1 + s2 * s2 - 2.0 * rho * s1 * s2;
                const double beta0 = s2 * (s2 - rho * s1) / tau2;
                s.c0 = 0.0;
                s.companion = 0.0;
                s.alpha = beta0;
                return s;
            }
            if (m.family() == Family::IndepExponentialLocation && target == Target::Theta1) {
                // min{X1, X2}: pooled pair of the raw observations.
                s.c0 = 0.0;
                s.companion = 0.0;
                s.alpha = 0.0;
                return s;
            }
            return fail();
        }
        case Tag::ExpDominator: {
            if (m.family() != Family::IndepExponentialLocation || target != Target::Theta1)
                return fail();
            s.c0 = c01;
            s.companion = p[0] * p[1] / (p[0] + p[1]);
            s.alpha = 0.0;
            return s;
        }
        case Tag::GammaDominator: {
            if (m.family() != Family::IndepGammaScale || target != Target::Theta1) return fail();
            s.c0 = c01;
            s.companion = 1.0 / p[1];
            s.alpha = (p[0] + 1.0) / (p[0] + p[1] + 1.0);
            return s;
        }
        case Tag::PowerDominator: {
            if (m.family() != Family::IndepPowerScale) return fail();
            const double a1 = p[0], a2 = p[1];
            if (target == Target::Theta1) {
                s.c0 = c01;
                s.companion = c02;
                s.alpha = 1.0 - a2 * (a2 + 2.0) / (2.0 * (a1 + 2.0) * (a1 + a2 + 1.0));
            } else {
                s.c0 = c02;
                s.companion = (a1 + a2 + 2.0) / (a1 + a2 + 1.0);
                s.alpha = 1.0;
            }
            return s;
        }
        case Tag::IreOnBlees: {
            if (m.kind() != Kind::Location) return fail();
            s.c0 = target == Target::Theta1 ? c01 : c02;
            s.companion = target == Target::Theta1 ? c02 : c01;
            s.alpha = 0.0;
            return s;
        }
        case Tag::IreOnBsees: {
            if (m.family() != Family::IndepGammaScale || target != Target::Theta1) return fail();
            s.c0 = c01;
            s.companion = c02;
            s.alpha = p[0] / (p[0] + p[1]);
            return s;
        }
    }
    return fail();
}

std::string estimator_id(const EstimatorSpec& spec) {
    if (spec.tag) return tag_name(*spec.tag);
    std::ostringstream os;
    os << "ire[" << target_name(spec.target) << ",c0=" << spec.c0
       << ",comp=" << spec.companion << ",alpha=" << spec.alpha << "]";
    return os.str();
}

std::string estimator_to_json(const EstimatorSpec& spec) {
    nlohmann::json j;
    j["target"] = target_name(spec.target);
    j["kind"] = kind_name(spec.kind);
    j["c0"] = spec.c0;
    j["companion"] = spec.companion;
    j["alpha"] = spec.alpha;
    if (spec.tag) j["tag"] = tag_name(*spec.tag);
    return j.dump();
}

EstimatorSpec estimator_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorCode::ParseError, std::string("bad estimator JSON: ") + e.what());
    }
    EstimatorSpec s{};
    try {
        const std::string target = j.at("target");
        const std::string kind = j.at("kind");
        if (target != "theta1" && target != "theta2") {
            raise(ErrorCode::ParseError, "target must be theta1 or theta2");
        }
        if (kind != "location" && kind != "scale") {
            raise(ErrorCode::ParseError, "kind must be location or scale");
        }
        s.target = target == "theta1" ? Target::Theta1 : Target::Theta2;
        s.kind = kind == "location" ? Kind::Location : Kind::Scale;
        s.c0 = j.at("c0");
        s.companion = j.at("companion");
        s.alpha = j.at("alpha");
        if (j.contains("tag")) {
            auto t = tag_from_name(j["tag"]);
            if (!t) raise(ErrorCode::ParseError, "unknown estimator tag");
            s.tag = t;
        }
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorCode::ParseError, std::string("bad estimator JSON: ") + e.what());
    }
    validate(s);
    return s;
}

} // namespace ordstat
