#pragma once

#include "tpbounds/bounds.hpp"
#include "tpbounds/metrics.hpp"
#include "tpbounds/rational.hpp"
#include "tpbounds/study.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tpb {

enum class Source { Experimental, Observational };
enum class Exposure { Treatment, Control };

inline const char* source_name(Source s) {
    return s == Source::Experimental ? "experimental" : "observational";
}
inline const char* exposure_name(Exposure e) {
    return e == Exposure::Treatment ? "t" : "c";
}

struct CohortRecord {
    std::vector<std::string> covariates; // parallel to CohortDataset::covariate_names
    Source source;
    Exposure exposure;
    bool outcome_y;
};

struct CohortDataset {
    std::vector<std::string> covariate_names;
    std::vector<CohortRecord> records;

    void validate() const; // covariate vectors match the declared names
};

// Policy numbers evaluated at one (benefit, harm) corner of the bounds.
struct PolicyCase {
    std::string label; // "point", "worst-case", "best-case"
    Rat benefit;
    Rat harm;
    std::vector<PolicyReport> policies;
};

// Everything derivable for one stratum. Fields are absent when the evidence
// they need is absent (e.g. no observational arm -> no combined scope).
struct StratumReport {
    std::string label;
    std::uint64_t n_experimental = 0;
    std::uint64_t n_observational = 0;

    StudyProbabilities raw_probabilities;  // as observed
    StudyProbabilities probabilities;      // analysis inputs (clamped when reconciled)
    std::optional<CompatibilityVerdict> compatibility; // of the raw inputs
    bool reconciled = false;

    std::optional<Rat> cate; // P(y_t) - P(y_c)
    std::optional<Rat> p_y;  // observational outcome rate

    std::optional<BoundsResult> benefit_combined;
    std::optional<BoundsResult> benefit_experimental;
    std::optional<BoundsResult> benefit_observational;
    std::optional<BoundsResult> harm_combined;
    std::optional<BoundsResult> harm_experimental;
    std::optional<BoundsResult> harm_observational;

    std::optional<MonotonicityVerdict> monotonicity;
    std::optional<NNTInterval> nnt_corrected;    // from the tightest benefit bounds
    std::optional<NNTInterval> nnt_experimental; // from experimental-only bounds
    std::optional<Rat> nnt_classic;              // 1/CATE, absent when CATE <= 0

    std::vector<PolicyCase> policy_cases; // combined scope only

    const BoundsResult* tightest_benefit() const;
    const BoundsResult* tightest_harm() const;
};

struct AnalysisOptions {
    // When the observed rates are jointly impossible (a sampling artifact
    // near the boundary), clamp P(y_t) and P(y_c) into the compatible region
    // instead of failing. The clamp is minimal: each rate moves to the
    // nearest endpoint of its interval around the observational joints.
    bool reconcile = false;
};

StratumReport analyze_probabilities(const StudyProbabilities& probs, const std::string& label,
                                    const AnalysisOptions& options = {});

StratumReport analyze_stratum(const ExperimentalSummary& experimental,
                              const ObservationalSummary& observational, const std::string& label,
                              const AnalysisOptions& options = {});

// Clamped copy satisfying the compatibility inequalities:
// P(y_t) into [P(t,y), P(t,y) + 1 - P(t)], P(y_c) into [P(c,y), P(c,y) + P(t)].
StudyProbabilities reconcile_probabilities(const StudyProbabilities& probs);

struct CohortAnalysis {
    std::map<std::string, StratumReport> by_stratum; // key: "feature=value" joined by ","
    StratumReport pooled;
};

// Splits the cohort by the given covariates, tallies each stratum's four
// arms, and analyzes every stratum plus the pooled data. Throws
// Error(EmptyStratumArm) naming the stratum and arm that has no units.
CohortAnalysis analyze_all(const CohortDataset& cohort,
                           const std::vector<std::string>& stratify_by,
                           const AnalysisOptions& options = {});

struct FeatureVerdict {
    std::string feature;
    bool usable = false;
    std::string skip_reason;          // set when not usable
    Rat mean_benefit_width;           // unit-weighted mean combined-benefit width
    Rat width_reduction;              // pooled width minus mean width
    // Some stratum proves harm (lower bound > 0) while another stays
    // consistent with harm-free (lower bound 0).
    bool separates_harm = false;
    std::vector<std::string> strata;  // stratum keys in report order
};

struct FeatureScreenResult {
    StratumReport pooled;
    std::vector<FeatureVerdict> ranking; // usable features first, narrowest mean width first
};

struct ScreenOptions {
    std::uint64_t min_arm_size = 30; // every arm of every stratum must reach this
    AnalysisOptions analysis{.reconcile = true};
};

FeatureScreenResult screen_features(const CohortDataset& cohort,
                                    const std::vector<std::string>& candidates,
                                    const ScreenOptions& options = {});

} // namespace tpb
