#pragma once

#include "tpbounds/oracle.hpp"
#include "tpbounds/rational.hpp"
#include "tpbounds/strata.hpp"
#include "tpbounds/study.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tpb {

// One subpopulation: its latent response-type mix and how each type chooses
// treatment when given the option. The choice rates are what confound the
// observational study, and are exactly what the combined bounds exploit.
struct StratumSpec {
    std::string label;
    Rat weight;
    std::array<Rat, 4> mix;    // indexed by ResponseType: benefit, harm, always, doomed
    std::array<Rat, 4> choice; // P(chooses treatment | response type)
};

struct ScenarioSpec {
    std::vector<StratumSpec> strata;
    std::string feature = "stratum";        // covariate name carrying the stratum label
    Rat rct_treated_fraction = Rat(1, 2);   // RCT assignment probability

    // Mixes sum to 1 per stratum, weights sum to 1, all rates in [0,1],
    // labels nonempty and distinct.
    void validate() const;
};

struct StratumGroundTruth {
    std::string label;
    Rat weight;
    StudyProbabilities probabilities;
    Rat benefit; // true benefit-type mass
    Rat harm;    // true harm-type mass
};

struct ScenarioGroundTruth {
    std::vector<StratumGroundTruth> strata;
    StratumGroundTruth pooled;
};

// Closed-form evaluation of the scenario, no sampling: P(y_t) = pi_b + pi_a,
// P(y_c) = pi_h + pi_a, P(t) = sum_r pi_r c_r, conditionals by Bayes.
ScenarioGroundTruth ground_truth(const ScenarioSpec& spec);

struct UnitRecord {
    std::string stratum;
    ResponseType latent;
    Source source;
    Exposure exposure; // assigned (experimental) or chosen (observational)
    bool outcome_y;
    bool coin; // fair-coin covariate, useful as a screening placebo
};

struct SampledStudies {
    ExperimentalSummary experimental;
    ObservationalSummary observational;
    std::map<std::string, ExperimentalSummary> experimental_by_stratum;
    std::map<std::string, ObservationalSummary> observational_by_stratum;
    std::uint64_t seed = 0;
    std::vector<UnitRecord> units; // retained only when requested
};

struct SimulateOptions {
    bool retain_units = false;
};

// Samples an RCT of n_experimental units (arm assigned independently of the
// latent type) and a survey of n_observational units (treatment chosen by
// the latent type's rate). Outcomes are deterministic in (type, exposure):
// benefit recovers iff treated, harm iff untreated, always recovers, doomed
// never does.
//
// Reproducibility contract: the generator is std::mt19937_64 seeded with
// `seed`; uniform doubles take the top 53 bits ((x >> 11) * 2^-53);
// categorical draws walk cumulative probabilities in declared order. No
// std::*_distribution is used, so streams are identical across standard
// libraries.
SampledStudies simulate(const ScenarioSpec& spec, std::uint64_t n_experimental,
                        std::uint64_t n_observational, std::uint64_t seed,
                        const SimulateOptions& options = {});

// Deterministic per-replicate seed stream: SplitMix64 finalizer applied to
// seed + (index + 1) * 0x9E3779B97F4A7C15.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t replicate_index);

// Named scenarios: model1, model2, model2-informed-avoiders, female, male,
// two-sex-trial. Throws Error(UnknownPreset) otherwise.
ScenarioSpec preset(const std::string& name);

std::vector<std::string> preset_names();

// Unit records as an analyzable cohort. Covariates: the scenario's feature
// name (stratum label), "harm_marker" (carrier/none from the latent type),
// and "coin" (heads/tails). Requires retained units.
CohortDataset cohort_from_samples(const SampledStudies& samples, const std::string& feature);

} // namespace tpb
