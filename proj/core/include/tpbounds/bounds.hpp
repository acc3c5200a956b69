#pragma once

#include "tpbounds/rational.hpp"
#include "tpbounds/study.hpp"

#include <string>
#include <vector>

namespace tpb {

// Which studies inform the bounds. ExperimentalOnly ignores the survey
// fields; ObservationalOnly ignores the RCT fields.
enum class EvidenceScope {
    Combined,
    ExperimentalOnly,
    ObservationalOnly,
};

const char* scope_name(EvidenceScope scope);

enum class CausalTarget {
    Benefit, // recover if treated AND die if untreated
    Harm,    // recover if untreated AND die if treated
};

const char* target_name(CausalTarget target);

// A [lower, upper] probability interval. Construction enforces
// 0 <= lower <= upper <= 1.
class Interval {
public:
    Interval(Rat lower, Rat upper);

    const Rat& lower() const { return lower_; }
    const Rat& upper() const { return upper_; }
    Rat width() const { return upper_ - lower_; }

    // Exact collapse; the rational pipeline never needs a tolerance.
    bool is_point() const { return lower_ == upper_; }
    // Float-level collapse for values that passed through doubles.
    bool is_point(double eps) const { return to_double(upper_ - lower_) <= eps; }

    bool contains(const Rat& value) const { return lower_ <= value && value <= upper_; }
    bool contains(const Interval& other) const {
        return lower_ <= other.lower_ && other.upper_ <= upper_;
    }

    friend bool operator==(const Interval& a, const Interval& b) {
        return a.lower_ == b.lower_ && a.upper_ == b.upper_;
    }

private:
    Rat lower_;
    Rat upper_;
};

// One max/min argument: its display label and exact value.
struct BoundTerm {
    std::string label;
    Rat value;
};

// Endpoints before interval validation, with every candidate argument and
// the labels of those that attained the max/min. Incompatible empirical data
// can make lower exceed upper here; Interval construction is where that is
// rejected. Estimation paths that must tolerate sampling noise read the raw
// endpoints directly.
struct BoundEndpoints {
    Rat lower;
    Rat upper;
    std::vector<BoundTerm> lower_terms;
    std::vector<BoundTerm> upper_terms;
    std::vector<std::string> lower_attained;
    std::vector<std::string> upper_attained;
};

// Validated bounds plus attribution of the binding arguments.
struct BoundsResult {
    Interval interval;
    std::vector<std::string> lower_attained;
    std::vector<std::string> upper_attained;
};

// Max/min over the scope's applicable arguments, no validation. Lower is
// clamped at 0 by the always-present 0 argument; negative intermediate
// arguments stay in the lists and are resolved by the max itself.
// Throws Error(MissingField) if the scope needs an absent field.
BoundEndpoints bound_endpoints(const StudyProbabilities& p, EvidenceScope scope,
                               CausalTarget target);

// Tight bounds on P(benefit). Combined scope first requires the two studies
// to be compatible and throws Error(IncompatibleData) otherwise.
BoundsResult benefit_bounds(const StudyProbabilities& p, EvidenceScope scope);

// Tight bounds on P(harm), same contract as benefit_bounds.
BoundsResult harm_bounds(const StudyProbabilities& p, EvidenceScope scope);

// ATE = P(y_t) - P(y_c), in [-1, 1].
Rat ate(const StudyProbabilities& p);

// P(harm) = P(benefit) - ATE. Throws Error(InconsistentPair) if the result
// leaves [0,1].
Rat harm_from_benefit(const Rat& benefit, const Rat& ate_value);

} // namespace tpb
