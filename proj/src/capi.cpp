#include "ordstat/ordstat.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "ordstat/alpha.hpp"
#include "ordstat/assumptions.hpp"
#include "ordstat/estimators.hpp"
#include "ordstat/export.hpp"
#include "ordstat/model_file.hpp"
#include "ordstat/models.hpp"
#include "ordstat/risk.hpp"
#include "ordstat/version.hpp"

using namespace ordstat;

struct ordstat_model {
    Model model;
};

namespace {

thread_local std::string g_last_error;

ordstat_status status_of(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return ORDSTAT_E_INVALID_ARGUMENT;
        case ErrorCode::NonPositiveTheta: return ORDSTAT_E_NONPOSITIVE_THETA;
        case ErrorCode::UnsupportedFamily: return ORDSTAT_E_UNSUPPORTED_FAMILY;
        case ErrorCode::QuadratureFailure: return ORDSTAT_E_QUADRATURE_FAILURE;
        case ErrorCode::MomentDivergence: return ORDSTAT_E_MOMENT_DIVERGENCE;
        case ErrorCode::ZeroWeights: return ORDSTAT_E_ZERO_WEIGHTS;
        case ErrorCode::OutOfSupport: return ORDSTAT_E_OUT_OF_SUPPORT;
        case ErrorCode::InapplicableTag: return ORDSTAT_E_INAPPLICABLE_TAG;
        case ErrorCode::DegenerateDenominator: return ORDSTAT_E_DEGENERATE_DENOMINATOR;
        case ErrorCode::Inconclusive: return ORDSTAT_E_INCONCLUSIVE;
        case ErrorCode::ZeroDensity: return ORDSTAT_E_ZERO_DENSITY;
        case ErrorCode::UnknownPanel: return ORDSTAT_E_UNKNOWN_PANEL;
        case ErrorCode::ParseError: return ORDSTAT_E_PARSE;
        case ErrorCode::IoError: return ORDSTAT_E_IO;
    }
    return ORDSTAT_E_INTERNAL;
}

template <class F>
ordstat_status guarded(F&& f) {
    try {
        f();
        return ORDSTAT_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return ORDSTAT_E_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return ORDSTAT_E_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

Kind to_kind(int k) {
    if (k != ORDSTAT_LOCATION && k != ORDSTAT_SCALE) {
        raise(ErrorCode::InvalidArgument, "bad kind value");
    }
    return k == ORDSTAT_LOCATION ? Kind::Location : Kind::Scale;
}

Family to_family(int f) {
    switch (f) {
        case ORDSTAT_BIVARIATE_NORMAL: return Family::BivariateNormal;
        case ORDSTAT_INDEP_EXPONENTIAL_LOCATION: return Family::IndepExponentialLocation;
        case ORDSTAT_INDEP_GAMMA_SCALE: return Family::IndepGammaScale;
        case ORDSTAT_INDEP_POWER_SCALE: return Family::IndepPowerScale;
    }
    raise(ErrorCode::InvalidArgument, "bad family value");
}

Target to_target(int t) {
    if (t != ORDSTAT_THETA1 && t != ORDSTAT_THETA2) {
        raise(ErrorCode::InvalidArgument, "bad target value");
    }
    return t == ORDSTAT_THETA1 ? Target::Theta1 : Target::Theta2;
}

Tag to_tag(int t) {
    switch (t) {
        case ORDSTAT_TAG_BLEE: return Tag::Blee;
        case ORDSTAT_TAG_BSEE: return Tag::Bsee;
        case ORDSTAT_TAG_RMLE: return Tag::Rmle;
        case ORDSTAT_TAG_EXP_DOMINATOR: return Tag::ExpDominator;
        case ORDSTAT_TAG_GAMMA_DOMINATOR: return Tag::GammaDominator;
        case ORDSTAT_TAG_POWER_DOMINATOR: return Tag::PowerDominator;
        case ORDSTAT_TAG_IRE_ON_BLEES: return Tag::IreOnBlees;
        case ORDSTAT_TAG_IRE_ON_BSEES: return Tag::IreOnBsees;
    }
    raise(ErrorCode::InvalidArgument, "bad tag value");
}

EstimatorSpec to_spec(const ordstat_estimator* e) {
    if (!e) raise(ErrorCode::InvalidArgument, "null estimator");
    EstimatorSpec s{};
    s.target = to_target(e->target);
    s.kind = to_kind(e->kind);
    s.c0 = e->c0;
    s.companion = e->companion;
    s.alpha = e->alpha;
    return s;
}

ordstat_estimator from_spec(const EstimatorSpec& s) {
    ordstat_estimator e{};
    e.target = s.target == Target::Theta1 ? ORDSTAT_THETA1 : ORDSTAT_THETA2;
    e.kind = s.kind == Kind::Location ? ORDSTAT_LOCATION : ORDSTAT_SCALE;
    e.c0 = s.c0;
    e.companion = s.companion;
    e.alpha = s.alpha;
    return e;
}

const Model& model_of(const ordstat_model* m) {
    if (!m) raise(ErrorCode::InvalidArgument, "null model handle");
    return m->model;
}

} // namespace

extern "C" {

const char* ordstat_version(void) { return ORDSTAT_VERSION; }

const char* ordstat_last_error(void) { return g_last_error.c_str(); }

void ordstat_string_free(char* s) { delete[] s; }

ordstat_status ordstat_model_create(int kind, int family, const double* params, size_t n_params,
                                    double theta1, double theta2, ordstat_model** out) {
    return guarded([&] {
        if (!out) raise(ErrorCode::InvalidArgument, "null output pointer");
        std::vector<double> p(params, params + n_params);
        *out = new ordstat_model{Model::make(to_kind(kind), to_family(family), p, theta1, theta2)};
    });
}

ordstat_status ordstat_model_parse_toml(const char* text, ordstat_model** out) {
    return guarded([&] {
        if (!text || !out) raise(ErrorCode::InvalidArgument, "null argument");
        *out = new ordstat_model{parse_model_toml(text)};
    });
}

ordstat_status ordstat_model_load_file(const char* path, ordstat_model** out) {
    return guarded([&] {
        if (!path || !out) raise(ErrorCode::InvalidArgument, "null argument");
        *out = new ordstat_model{load_model_file(path)};
    });
}

void ordstat_model_free(ordstat_model* model) { delete model; }

ordstat_status ordstat_model_kind(const ordstat_model* model, int* out_kind) {
    return guarded([&] {
        if (!out_kind) raise(ErrorCode::InvalidArgument, "null output pointer");
        *out_kind = model_of(model).kind() == Kind::Location ? ORDSTAT_LOCATION : ORDSTAT_SCALE;
    });
}

ordstat_status ordstat_model_density(const ordstat_model* model, double x1, double x2,
                                     double* out) {
    return guarded([&] { *out = model_of(model).density(x1, x2); });
}

ordstat_status ordstat_model_fz(const ordstat_model* model, double z, double* out) {
    return guarded([&] { *out = model_of(model).fz(z); });
}

ordstat_status ordstat_model_psi(const ordstat_model* model, int which, double z, double* out) {
    return guarded([&] {
        const DerivedFunctions& d = model_of(model).derived();
        switch (which) {
            case 1: *out = d.psi1(z); return;
            case 2: *out = d.psi2(z); return;
        }
        if (d.kind != Kind::Scale) {
            raise(ErrorCode::InvalidArgument, "psi3..psi_star exist for the scale kind only");
        }
        switch (which) {
            case 3: *out = d.psi3(z); return;
            case 4: *out = d.psi4(z); return;
            case 5: *out = d.psi(z); return;
            case 6: *out = d.psi_star(z); return;
        }
        raise(ErrorCode::InvalidArgument, "psi selector must be 1..6");
    });
}

ordstat_status ordstat_model_constants(const ordstat_model* model, double* c01, double* c02) {
    return guarded([&] {
        const auto [a, b] = model_of(model).constants();
        if (c01) *c01 = a;
        if (c02) *c02 = b;
    });
}

ordstat_status ordstat_model_sample(const ordstat_model* model, size_t n, uint64_t seed,
                                    double* xs) {
    return guarded([&] {
        if (!xs) raise(ErrorCode::InvalidArgument, "null output buffer");
        const auto pts = model_of(model).sample(n, seed);
        for (size_t i = 0; i < pts.size(); ++i) {
            xs[2 * i] = pts[i].first;
            xs[2 * i + 1] = pts[i].second;
        }
    });
}

ordstat_status ordstat_isotonic_pair(double d1, double d2, double w1, double w2, double* y1,
                                     double* y2) {
    return guarded([&] {
        const auto [a, b] = isotonic_pair(d1, d2, WeightPair{w1, w2});
        if (y1) *y1 = a;
        if (y2) *y2 = b;
    });
}

ordstat_status ordstat_estimate(const ordstat_estimator* spec, double x1, double x2,
                                ordstat_estimate* out) {
    return guarded([&] {
        if (!out) raise(ErrorCode::InvalidArgument, "null output pointer");
        const Estimate e = apply_estimator(to_spec(spec), x1, x2);
        out->value = e.value;
        out->pair1 = e.pair1;
        out->pair2 = e.pair2;
        out->pooled = e.pooled ? 1 : 0;
        out->nonpositive = e.nonpositive ? 1 : 0;
    });
}

ordstat_status ordstat_named_estimator(const ordstat_model* model, int tag, int target,
                                       ordstat_estimator* out) {
    return guarded([&] {
        if (!out) raise(ErrorCode::InvalidArgument, "null output pointer");
        *out = from_spec(named_estimator(to_tag(tag), to_target(target), model_of(model)));
    });
}

ordstat_status ordstat_estimator_to_json(const ordstat_estimator* spec, char** out) {
    return guarded([&] {
        if (!out) raise(ErrorCode::InvalidArgument, "null output pointer");
        *out = dup_string(estimator_to_json(to_spec(spec)));
    });
}

ordstat_status ordstat_estimator_from_json(const char* text, ordstat_estimator* out) {
    return guarded([&] {
        if (!text || !out) raise(ErrorCode::InvalidArgument, "null argument");
        *out = from_spec(estimator_from_json(text));
    });
}

ordstat_status ordstat_alpha_value(const ordstat_model* model, int target, double companion,
                                   double lambda, double* out) {
    return guarded([&] {
        *out = alpha_weight(model_of(model), to_target(target), companion, lambda);
    });
}

ordstat_status ordstat_alpha_curve(const ordstat_model* model, int target, double companion,
                                   const double* lambdas, size_t n, double* out_values) {
    return guarded([&] {
        if (!lambdas || !out_values) raise(ErrorCode::InvalidArgument, "null argument");
        const Model& m = model_of(model);
        for (size_t i = 0; i < n; ++i) {
            out_values[i] = alpha_weight(m, to_target(target), companion, lambdas[i]);
        }
    });
}

ordstat_status ordstat_default_lambda_grid(int kind, int points, double lo, double hi,
                                           double* out) {
    return guarded([&] {
        if (!out) raise(ErrorCode::InvalidArgument, "null output buffer");
        const auto grid = default_lambda_grid(to_kind(kind), points, lo, hi);
        std::copy(grid.begin(), grid.end(), out);
    });
}

ordstat_status ordstat_infinity_limit(const ordstat_model* model, int target, double companion,
                                      ordstat_limit* out) {
    return guarded([&] {
        if (!out) raise(ErrorCode::InvalidArgument, "null output pointer");
        const InfinityLimit lim = infinity_limit(model_of(model), to_target(target), companion);
        out->cls = static_cast<int>(lim.cls);
        out->value = lim.value;
    });
}

ordstat_status ordstat_admissible_interval(const ordstat_model* model, int target,
                                           double companion, ordstat_interval* out,
                                           char** report_json) {
    if (!out) {
        g_last_error = "null output pointer";
        return ORDSTAT_E_INVALID_ARGUMENT;
    }
    std::memset(out, 0, sizeof *out);
    return guarded([&] {
        const Model& m = model_of(model);
        AssumptionReport report;
        try {
            const AdmissibleInterval iv =
                admissible_interval(m, to_target(target), companion, &report);
            out->low = iv.low;
            out->high = iv.high;
            out->direction = static_cast<int>(iv.direction);
            std::snprintf(out->theorem, sizeof out->theorem, "%s", theorem_name(iv.theorem));
            out->trusted = iv.trusted ? 1 : 0;
            out->boundary_value = iv.boundary_value;
            out->limit.cls = static_cast<int>(iv.limit.cls);
            out->limit.value = iv.limit.value;
        } catch (const Error& e) {
            if (e.code() == ErrorCode::Inconclusive) {
                // Partial result: boundary value only.
                const double lambda0 = m.kind() == Kind::Location ? 0.0 : 1.0;
                out->boundary_value = alpha_weight(m, to_target(target), companion, lambda0);
                report = classify_lemma_case(m, to_target(target), companion);
                if (report_json) *report_json = dup_string(report_to_json(report));
            }
            throw;
        }
        if (report_json) *report_json = dup_string(report_to_json(report));
    });
}

ordstat_status ordstat_check_assumptions(const ordstat_model* model, int target,
                                         double companion, int* lemma_case, char** report_json) {
    return guarded([&] {
        const AssumptionReport rep =
            classify_lemma_case(model_of(model), to_target(target), companion);
        if (lemma_case) *lemma_case = static_cast<int>(rep.lemma_case);
        if (report_json) *report_json = dup_string(report_to_json(rep));
    });
}

ordstat_status ordstat_oracle_best_alpha(const ordstat_model* model, int target,
                                         double companion, double lambda, size_t n,
                                         uint64_t seed, double* out) {
    return guarded([&] {
        *out = oracle_best_alpha(model_of(model), to_target(target), companion, lambda, n, seed);
    });
}

ordstat_status ordstat_simulate_risk(const ordstat_model* model, const ordstat_estimator* spec,
                                     const double* lambdas, size_t n_lambda, long n,
                                     uint64_t seed, double* out_risk, double* out_se) {
    return guarded([&] {
        if (!lambdas || !out_risk) raise(ErrorCode::InvalidArgument, "null argument");
        std::vector<double> grid(lambdas, lambdas + n_lambda);
        const RiskCurve c = simulate_risk(model_of(model), to_spec(spec), grid, n, seed);
        for (size_t i = 0; i < n_lambda; ++i) {
            out_risk[i] = c.risk[i];
            if (out_se) out_se[i] = c.std_err[i];
        }
    });
}

ordstat_status ordstat_quadrature_risk_location(const ordstat_model* model,
                                                const ordstat_estimator* spec, double lambda,
                                                double* out) {
    return guarded([&] {
        *out = quadrature_risk_location(model_of(model), to_spec(spec), lambda);
    });
}

ordstat_status ordstat_dominance_report(const ordstat_model* model,
                                        const ordstat_estimator* challenger,
                                        const ordstat_estimator* incumbent,
                                        const double* lambdas, size_t n_lambda, long n,
                                        uint64_t seed, double* out_gaps, double* out_z,
                                        int* out_verdict) {
    return guarded([&] {
        if (!lambdas) raise(ErrorCode::InvalidArgument, "null lambda grid");
        std::vector<double> grid(lambdas, lambdas + n_lambda);
        const DominanceReport rep = dominance_report(model_of(model), to_spec(challenger),
                                                     to_spec(incumbent), grid, n, seed);
        for (size_t i = 0; i < rep.cells.size(); ++i) {
            if (out_gaps) out_gaps[i] = rep.cells[i].gap;
            if (out_z) out_z[i] = rep.cells[i].z_score;
        }
        if (out_verdict) *out_verdict = static_cast<int>(rep.verdict);
    });
}

ordstat_status ordstat_figure(int figure_id, double p1, double p2, long n, uint64_t seed,
                              const char* out_dir, int points, double lambda_lo,
                              double lambda_hi, char** summary_json) {
    return guarded([&] {
        if (!out_dir) raise(ErrorCode::InvalidArgument, "null output directory");
        if (figure_id != 1 && figure_id != 2) {
            raise(ErrorCode::UnknownPanel, "figure id must be 1 or 2");
        }
        const FigureId id = figure_id == 1 ? FigureId::Fig1 : FigureId::Fig2;
        std::vector<double> grid;
        if (points > 0) {
            grid = default_lambda_grid(id == FigureId::Fig1 ? Kind::Location : Kind::Scale,
                                       points, lambda_lo, lambda_hi);
        }
        const FigureResult result = reproduce_figure(id, {p1, p2}, n, seed, grid);
        const auto [csv_path, svg_path] = emit_figure_files(result, out_dir);

        nlohmann::json j;
        j["figure"] = figure_id;
        j["panel"] = {p1, p2};
        j["csv"] = csv_path;
        j["svg"] = svg_path;
        j["n"] = n;
        j["seed"] = seed;
        nlohmann::json curves = nlohmann::json::array();
        for (const RiskCurve& c : result.curves) curves.push_back(c.estimator_id);
        j["curves"] = curves;
        j["designated_dominator"] = {{"challenger", result.designated.challenger},
                                     {"incumbent", result.designated.incumbent},
                                     {"verdict", verdict_name(result.designated.verdict)}};
        j["pooled_best_equivariant"] = {{"challenger", result.naive.challenger},
                                        {"incumbent", result.naive.incumbent},
                                        {"verdict", verdict_name(result.naive.verdict)}};
        if (summary_json) *summary_json = dup_string(j.dump(2));
    });
}

} // extern "C"
