#pragma once

#include "tpbounds/bounds.hpp"
#include "tpbounds/rational.hpp"
#include "tpbounds/study.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tpb {

// Necessary test: P(y_t) >= P(y) >= P(y_c). A violated side means some
// individuals must be harmed by treatment.
struct NecessaryTestResult {
    bool pass = false;
    Rat upper_margin; // P(y_t) - P(y)
    Rat lower_margin; // P(y) - P(y_c)
};

NecessaryTestResult monotonicity_necessary(const StudyProbabilities& p);

// Sufficient conditions, applicable when P(y_t) > P(y_c): P(y_c) = 0, or
// P(y_t) = 1, or P(t,y') = P(c,y) = 0. Inconclusive otherwise (including
// when P(y_t) <= P(y_c); no mirrored conditions are invented).
struct SufficientTestResult {
    bool guaranteed = false;
    std::string condition; // which condition fired, empty if none
};

SufficientTestResult monotonicity_sufficient(const StudyProbabilities& p);

enum class Monotonicity {
    Guaranteed,   // treatment cannot harm any individual
    RuledOut,     // some individuals are necessarily harmed
    Undetermined,
};

const char* monotonicity_name(Monotonicity verdict);

struct MonotonicityVerdict {
    Monotonicity verdict = Monotonicity::Undetermined;
    std::string evidence; // which test fired
    Rat margin;           // how decisively
};

// Synthesis over whatever fields are present: Guaranteed if a sufficient
// condition holds or the harm upper bound is 0; RuledOut if the necessary
// test fails or the harm lower bound is positive.
MonotonicityVerdict monotonicity_verdict(const StudyProbabilities& p);

// Persons needed to treat for one counterfactual recovery: 1 / P(benefit).
// A nullopt endpoint is +infinity (benefit endpoint of 0).
struct NNTInterval {
    std::optional<Rat> lower;
    std::optional<Rat> upper;

    bool lower_finite() const { return lower.has_value(); }
    bool upper_finite() const { return upper.has_value(); }
};

NNTInterval nnt_from_benefit(const Interval& benefit);

// The classical 1 / ATE, undefined (nullopt) when ATE <= 0. Merely an upper
// bound on the true NNT when treatment can harm.
std::optional<Rat> nnt_classic(const Rat& ate_value);

enum class PolicyKind {
    TreatAll,
    TreatNone,
    ExcludeHarmedMarker, // withhold from units a perfect marker flags as harmed
    TreatStratumOnly,    // treat this stratum; headline is benefit per treated
};

const char* policy_name(PolicyKind policy);

struct PolicyReport {
    std::string policy;
    Rat treated_fraction;
    Rat survival;            // expected survival rate under the policy
    Rat benefit_per_treated; // realized benefit per treated unit
    Rat harmed_avoided;      // harm-type mass spared by withholding treatment
};

// Point-estimate policy arithmetic over the response-type masses implied by
// (benefit, harm, P(y_c)): always = P(y_c) - harm, doomed is the remainder.
// Throws Error(InfeasibleInputs) when those masses are not a distribution.
PolicyReport policy_value(const Rat& benefit, const Rat& harm, const Rat& p_yc,
                          PolicyKind policy);

} // namespace tpb
