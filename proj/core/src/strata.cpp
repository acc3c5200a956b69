#include "tpbounds/strata.hpp"

#include "tpbounds/error.hpp"

#include <algorithm>
#include <utility>

namespace tpb {

void CohortDataset::validate() const {
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].covariates.size() != covariate_names.size())
            raise(ErrorKind::SchemaError,
                  "record " + std::to_string(i) + " has " +
                      std::to_string(records[i].covariates.size()) + " covariates, expected " +
                      std::to_string(covariate_names.size()));
    }
}

const BoundsResult* StratumReport::tightest_benefit() const {
    if (benefit_combined) return &*benefit_combined;
    if (benefit_experimental) return &*benefit_experimental;
    if (benefit_observational) return &*benefit_observational;
    return nullptr;
}

const BoundsResult* StratumReport::tightest_harm() const {
    if (harm_combined) return &*harm_combined;
    if (harm_experimental) return &*harm_experimental;
    if (harm_observational) return &*harm_observational;
    return nullptr;
}

StudyProbabilities reconcile_probabilities(const StudyProbabilities& probs) {
    StudyProbabilities out = probs;
    if (!probs.has_experimental() || !probs.has_observational()) return out;
    const JointCells cells = joint_cells(probs);
    const Rat p_t = *probs.p_t;
    const Rat yt_hi = cells.ty + (1 - p_t);
    const Rat yc_hi = cells.cy + p_t;
    out.p_yt = std::clamp(*probs.p_yt, cells.ty, yt_hi);
    out.p_yc = std::clamp(*probs.p_yc, cells.cy, yc_hi);
    return out;
}

StratumReport analyze_probabilities(const StudyProbabilities& probs, const std::string& label,
                                    const AnalysisOptions& options) {
    probs.validate();
    const bool has_exp = probs.has_experimental();
    const bool has_obs = probs.has_observational();
    if (!has_exp && !has_obs)
        raise(ErrorKind::MissingField, "stratum '" + label + "' carries neither study's fields");

    StratumReport r;
    r.label = label;
    r.raw_probabilities = probs;
    r.probabilities = probs;

    if (has_exp && has_obs) {
        r.compatibility = check_compatibility(probs);
        if (!r.compatibility->compatible) {
            if (!options.reconcile) {
                std::string detail;
                for (const auto& v : r.compatibility->violations) {
                    if (!detail.empty()) detail += "; ";
                    detail += v.constraint + " fails by " + exact_string(v.slack);
                }
                raise(ErrorKind::IncompatibleData,
                      "stratum '" + label + "': no single population fits both studies: " + detail);
            }
            r.probabilities = reconcile_probabilities(probs);
            r.reconciled = true;
        }
    }

    const StudyProbabilities& p = r.probabilities;
    if (has_exp) {
        r.cate = ate(p);
        r.benefit_experimental = benefit_bounds(p, EvidenceScope::ExperimentalOnly);
        r.harm_experimental = harm_bounds(p, EvidenceScope::ExperimentalOnly);
        r.nnt_experimental = nnt_from_benefit(r.benefit_experimental->interval);
        r.nnt_classic = nnt_classic(*r.cate);
        r.monotonicity = monotonicity_verdict(p);
    }
    if (has_obs) {
        r.p_y = marginal_outcome(p);
        r.benefit_observational = benefit_bounds(p, EvidenceScope::ObservationalOnly);
        r.harm_observational = harm_bounds(p, EvidenceScope::ObservationalOnly);
    }
    if (has_exp && has_obs) {
        r.benefit_combined = benefit_bounds(p, EvidenceScope::Combined);
        r.harm_combined = harm_bounds(p, EvidenceScope::Combined);
    }
    if (const BoundsResult* tightest = r.tightest_benefit())
        r.nnt_corrected = nnt_from_benefit(tightest->interval);

    // Policies are evaluated at (benefit, harm) corners; harm pairs with
    // benefit through P(harm) = P(benefit) - ATE, so each corner is a point
    // some feasible population attains.
    if (has_exp) {
        const Interval& b =
            (r.benefit_combined ? *r.benefit_combined : *r.benefit_experimental).interval;
        auto add_case = [&](const char* case_label, const Rat& benefit_value) {
            PolicyCase pc;
            pc.label = case_label;
            pc.benefit = benefit_value;
            pc.harm = benefit_value - *r.cate;
            for (PolicyKind kind : {PolicyKind::TreatAll, PolicyKind::TreatNone,
                                    PolicyKind::ExcludeHarmedMarker, PolicyKind::TreatStratumOnly})
                pc.policies.push_back(policy_value(pc.benefit, pc.harm, *p.p_yc, kind));
            r.policy_cases.push_back(std::move(pc));
        };
        if (b.is_point()) {
            add_case("point", b.lower());
        } else {
            add_case("worst-case", b.lower());
            add_case("best-case", b.upper());
        }
    }
    return r;
}

StratumReport analyze_stratum(const ExperimentalSummary& experimental,
                              const ObservationalSummary& observational, const std::string& label,
                              const AnalysisOptions& options) {
    if (experimental.treated.total() == 0)
        raise(ErrorKind::EmptyStratumArm,
              "stratum '" + label + "': experimental treated arm has no units");
    if (experimental.control.total() == 0)
        raise(ErrorKind::EmptyStratumArm,
              "stratum '" + label + "': experimental control arm has no units");
    if (observational.total() == 0)
        raise(ErrorKind::EmptyStratumArm,
              "stratum '" + label + "': observational sample has no units");
    StratumReport r =
        analyze_probabilities(from_counts(experimental, observational), label, options);
    r.n_experimental = experimental.treated.total() + experimental.control.total();
    r.n_observational = observational.total();
    return r;
}

namespace {

struct GroupTally {
    ExperimentalSummary exp;
    ObservationalSummary obs;
    std::uint64_t units = 0;
};

void tally_record(GroupTally& g, const CohortRecord& rec) {
    ++g.units;
    ArmCounts& arm =
        rec.source == Source::Experimental
            ? (rec.exposure == Exposure::Treatment ? g.exp.treated : g.exp.control)
            : (rec.exposure == Exposure::Treatment ? g.obs.chose_treatment : g.obs.chose_control);
    if (rec.outcome_y)
        ++arm.survivors;
    else
        ++arm.deaths;
}

std::vector<std::size_t> covariate_indices(const CohortDataset& cohort,
                                           const std::vector<std::string>& names) {
    std::vector<std::size_t> indices;
    for (const auto& name : names) {
        auto it = std::find(cohort.covariate_names.begin(), cohort.covariate_names.end(), name);
        if (it == cohort.covariate_names.end())
            raise(ErrorKind::ValueError, "unknown covariate '" + name + "'");
        indices.push_back(static_cast<std::size_t>(it - cohort.covariate_names.begin()));
    }
    return indices;
}

} // namespace

CohortAnalysis analyze_all(const CohortDataset& cohort, const std::vector<std::string>& stratify_by,
                           const AnalysisOptions& options) {
    cohort.validate();
    if (cohort.records.empty()) raise(ErrorKind::ValueError, "cohort has no records");
    const auto indices = covariate_indices(cohort, stratify_by);

    GroupTally pooled;
    std::map<std::string, GroupTally> groups;
    for (const auto& rec : cohort.records) {
        tally_record(pooled, rec);
        if (indices.empty()) continue;
        std::string key;
        for (std::size_t k = 0; k < indices.size(); ++k) {
            if (k) key += ',';
            key += stratify_by[k] + "=" + rec.covariates[indices[k]];
        }
        tally_record(groups[key], rec);
    }

    CohortAnalysis out;
    out.pooled = analyze_stratum(pooled.exp, pooled.obs, "pooled", options);
    for (const auto& [key, tally] : groups)
        out.by_stratum.emplace(key, analyze_stratum(tally.exp, tally.obs, key, options));
    return out;
}

FeatureScreenResult screen_features(const CohortDataset& cohort,
                                    const std::vector<std::string>& candidates,
                                    const ScreenOptions& options) {
    cohort.validate();
    FeatureScreenResult out;
    out.pooled = analyze_all(cohort, {}, options.analysis).pooled;
    if (!out.pooled.benefit_combined)
        raise(ErrorKind::ValueError,
              "screening needs both experimental and observational records");
    const Rat pooled_width = out.pooled.benefit_combined->interval.width();
    const std::uint64_t total_units = cohort.records.size();

    std::vector<FeatureVerdict> usable;
    std::vector<FeatureVerdict> skipped;
    for (const auto& feature : candidates) {
        FeatureVerdict v;
        v.feature = feature;
        const auto indices = covariate_indices(cohort, {feature});

        std::map<std::string, GroupTally> groups;
        for (const auto& rec : cohort.records)
            tally_record(groups[feature + "=" + rec.covariates[indices[0]]], rec);

        for (const auto& [key, g] : groups) {
            const std::pair<const char*, std::uint64_t> arms[] = {
                {"experimental treated", g.exp.treated.total()},
                {"experimental control", g.exp.control.total()},
                {"observational treatment-choosing", g.obs.chose_treatment.total()},
                {"observational control-choosing", g.obs.chose_control.total()},
            };
            for (const auto& [arm_name, n] : arms) {
                if (n < options.min_arm_size) {
                    v.skip_reason = "stratum '" + key + "': " + arm_name + " arm has " +
                                    std::to_string(n) + " units, minimum is " +
                                    std::to_string(options.min_arm_size);
                    break;
                }
            }
            if (!v.skip_reason.empty()) break;
        }
        if (!v.skip_reason.empty()) {
            skipped.push_back(std::move(v));
            continue;
        }

        bool any_harm_free = false;
        bool any_harm_proven = false;
        Rat mean_width = 0;
        bool failed = false;
        for (const auto& [key, g] : groups) {
            try {
                const StratumReport r = analyze_stratum(g.exp, g.obs, key, options.analysis);
                mean_width += Rat(g.units, total_units) * r.benefit_combined->interval.width();
                if (r.harm_combined->interval.lower() == 0) any_harm_free = true;
                if (r.harm_combined->interval.lower() > 0) any_harm_proven = true;
                v.strata.push_back(key);
            } catch (const Error& e) {
                v.skip_reason = e.what();
                failed = true;
                break;
            }
        }
        if (failed) {
            skipped.push_back(std::move(v));
            continue;
        }
        v.usable = true;
        v.mean_benefit_width = mean_width;
        v.width_reduction = pooled_width - mean_width;
        v.separates_harm = any_harm_free && any_harm_proven;
        usable.push_back(std::move(v));
    }

    std::sort(usable.begin(), usable.end(), [](const FeatureVerdict& a, const FeatureVerdict& b) {
        if (a.mean_benefit_width != b.mean_benefit_width)
            return a.mean_benefit_width < b.mean_benefit_width;
        return a.feature < b.feature;
    });
    std::sort(skipped.begin(), skipped.end(),
              [](const FeatureVerdict& a, const FeatureVerdict& b) { return a.feature < b.feature; });
    out.ranking = std::move(usable);
    out.ranking.insert(out.ranking.end(), std::make_move_iterator(skipped.begin()),
                       std::make_move_iterator(skipped.end()));
    return out;
}

} // namespace tpb
