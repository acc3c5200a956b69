#pragma once

#include "tpbounds/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tpb {

// One arm of a study, as raw counts.
struct ArmCounts {
    std::uint64_t survivors = 0;
    std::uint64_t deaths = 0;

    std::uint64_t total() const { return survivors + deaths; }
};

// RCT summary: do(treatment) and do(control) arms.
struct ExperimentalSummary {
    ArmCounts treated;
    ArmCounts control;
};

// Survey summary: units that chose the treatment vs. avoided it.
struct ObservationalSummary {
    ArmCounts chose_treatment;
    ArmCounts chose_control;

    std::uint64_t total() const { return chose_treatment.total() + chose_control.total(); }
};

// The five observed quantities driving everything downstream:
//   p_yt = P(y_t): recovery under do(treatment)      [experimental]
//   p_yc = P(y_c): recovery under do(control)        [experimental]
//   p_y_given_t = P(y|t): recovery among choosers    [observational]
//   p_y_given_c = P(y|c): recovery among avoiders    [observational]
//   p_t = P(t): fraction choosing treatment          [observational]
//
// Fields are optional so that partial evidence (one study missing, or an
// empty observational arm leaving a conditional undefined) is representable.
// A conditional may be absent only when its arm carries zero mass; the joint
// probability of an empty arm is zero and is treated as such everywhere.
struct StudyProbabilities {
    std::optional<Rat> p_yt;
    std::optional<Rat> p_yc;
    std::optional<Rat> p_y_given_t;
    std::optional<Rat> p_y_given_c;
    std::optional<Rat> p_t;

    bool has_experimental() const { return p_yt.has_value() && p_yc.has_value(); }
    bool has_observational() const;

    // Range invariants on whatever fields are present; conditionals may be
    // undefined only for a zero-mass arm when p_t is present.
    void validate() const;
};

// Joint cells P(t,y), P(t,y'), P(c,y), P(c,y'). Cells of an empty arm are 0.
struct JointCells {
    Rat ty;
    Rat ty_prime;
    Rat cy;
    Rat cy_prime;
};

struct CompatibilityViolation {
    std::string constraint; // e.g. "P(t,y) <= P(y_t)"
    Rat slack;              // amount by which the inequality failed (> 0)
};

struct CompatibilityVerdict {
    bool compatible = true;
    std::vector<CompatibilityViolation> violations;
};

// Exact rates from counts. Throws Error(ZeroDenominator) if an experimental
// arm or the whole observational sample is empty. A single empty
// observational arm is allowed: p_t becomes 0 or 1 and the conditional for
// the empty arm is left undefined.
StudyProbabilities from_counts(const ExperimentalSummary& exp, const ObservationalSummary& obs);
StudyProbabilities from_counts(const ExperimentalSummary& exp);
StudyProbabilities from_counts(const ObservationalSummary& obs);

// P(y) = P(t) P(y|t) + P(c) P(y|c). Requires the observational fields.
Rat marginal_outcome(const StudyProbabilities& p);

// Requires the observational fields.
JointCells joint_cells(const StudyProbabilities& p);

// Whether some single population could have produced both studies:
//   P(t,y) <= P(y_t) <= P(t,y) + P(c)   and   P(c,y) <= P(y_c) <= P(c,y) + P(t).
// Exactly the nonemptiness condition of the oracle's response-type polytope.
// Requires all five fields (a verdict needs both studies).
CompatibilityVerdict check_compatibility(const StudyProbabilities& p);

} // namespace tpb
