#include "tpbounds/metrics.hpp"

#include "tpbounds/error.hpp"

#include <algorithm>

namespace tpb {

const char* monotonicity_name(Monotonicity verdict) {
    switch (verdict) {
        case Monotonicity::Guaranteed: return "guaranteed";
        case Monotonicity::RuledOut: return "ruled-out";
        case Monotonicity::Undetermined: return "undetermined";
    }
    return "?";
}

NecessaryTestResult monotonicity_necessary(const StudyProbabilities& p) {
    if (!p.has_experimental() || !p.has_observational())
        raise(ErrorKind::MissingField, "necessary test needs all five probabilities");

    const Rat p_y = marginal_outcome(p);
    NecessaryTestResult result;
    result.upper_margin = *p.p_yt - p_y;
    result.lower_margin = p_y - *p.p_yc;
    result.pass = result.upper_margin >= 0 && result.lower_margin >= 0;
    return result;
}

SufficientTestResult monotonicity_sufficient(const StudyProbabilities& p) {
    if (!p.has_experimental())
        raise(ErrorKind::MissingField, "sufficient test needs P(y_t) and P(y_c)");

    SufficientTestResult result;
    if (*p.p_yt <= *p.p_yc) return result;

    if (*p.p_yc == 0) {
        result.guaranteed = true;
        result.condition = "P(y_c) = 0";
        return result;
    }
    if (*p.p_yt == 1) {
        result.guaranteed = true;
        result.condition = "P(y_t) = 1";
        return result;
    }
    if (p.has_observational()) {
        const JointCells cells = joint_cells(p);
        if (cells.ty_prime == 0 && cells.cy == 0) {
            result.guaranteed = true;
            result.condition = "P(t,y') = P(c,y) = 0";
        }
    }
    return result;
}

MonotonicityVerdict monotonicity_verdict(const StudyProbabilities& p) {
    if (!p.has_experimental())
        raise(ErrorKind::MissingField, "monotonicity verdict needs the experimental rates");

    const bool full = p.has_observational();
    const EvidenceScope scope = full ? EvidenceScope::Combined : EvidenceScope::ExperimentalOnly;

    MonotonicityVerdict out;

    const SufficientTestResult sufficient = monotonicity_sufficient(p);
    const BoundEndpoints harm = bound_endpoints(p, scope, CausalTarget::Harm);

    bool guaranteed = false;
    if (sufficient.guaranteed) {
        guaranteed = true;
        out.evidence = "sufficient condition: " + sufficient.condition;
        out.margin = 0;
    } else if (harm.upper <= 0) {
        guaranteed = true;
        out.evidence = "P(harm) upper bound = 0";
        out.margin = 0;
    }

    bool ruled_out = false;
    if (full) {
        const NecessaryTestResult necessary = monotonicity_necessary(p);
        if (!necessary.pass) {
            ruled_out = true;
            const Rat violation =
                std::max(-necessary.upper_margin, -necessary.lower_margin);
            out.evidence = necessary.upper_margin < 0
                               ? "necessary test violated: P(y) > P(y_t)"
                               : "necessary test violated: P(y_c) > P(y)";
            out.margin = violation;
        }
    }
    if (!ruled_out && harm.lower > 0) {
        ruled_out = true;
        out.evidence = "P(harm) lower bound " + display_string(harm.lower) + " > 0";
        out.margin = harm.lower;
    }

    if (guaranteed && ruled_out)
        raise(ErrorKind::IncompatibleData,
              "monotonicity both guaranteed and ruled out; the studies disagree");

    if (guaranteed)
        out.verdict = Monotonicity::Guaranteed;
    else if (ruled_out)
        out.verdict = Monotonicity::RuledOut;
    else {
        out.verdict = Monotonicity::Undetermined;
        out.evidence = "no sufficient condition holds and harm bounds straddle 0";
        out.margin = 0;
    }
    return out;
}

NNTInterval nnt_from_benefit(const Interval& benefit) {
    NNTInterval nnt;
    if (benefit.upper() > 0) nnt.lower = 1 / benefit.upper();
    if (benefit.lower() > 0) nnt.upper = 1 / benefit.lower();
    return nnt;
}

std::optional<Rat> nnt_classic(const Rat& ate_value) {
    if (ate_value <= 0) return std::nullopt;
    return 1 / ate_value;
}

const char* policy_name(PolicyKind policy) {
    switch (policy) {
        case PolicyKind::TreatAll: return "treat-all";
        case PolicyKind::TreatNone: return "treat-none";
        case PolicyKind::ExcludeHarmedMarker: return "exclude-harmed-marker";
        case PolicyKind::TreatStratumOnly: return "treat-stratum-only";
    }
    return "?";
}

PolicyReport policy_value(const Rat& benefit, const Rat& harm, const Rat& p_yc,
                          PolicyKind policy) {
    if (benefit < 0 || harm < 0 || benefit + harm > 1)
        raise(ErrorKind::InfeasibleInputs, "benefit/harm masses are not probabilities");

    const Rat always = p_yc - harm;
    if (always < 0)
        raise(ErrorKind::InfeasibleInputs,
              "P(always) = P(y_c) - P(harm) = " + exact_string(always) + " < 0");
    const Rat doomed = 1 - benefit - harm - always;
    if (doomed < 0)
        raise(ErrorKind::InfeasibleInputs,
              "P(doomed) = " + exact_string(doomed) + " < 0");

    PolicyReport report;
    report.policy = policy_name(policy);
    switch (policy) {
        case PolicyKind::TreatAll:
        case PolicyKind::TreatStratumOnly:
            // Everyone treated: the benefiting recover, the harmed die.
            report.treated_fraction = 1;
            report.survival = benefit + always;
            report.benefit_per_treated = benefit;
            report.harmed_avoided = 0;
            break;
        case PolicyKind::TreatNone:
            report.treated_fraction = 0;
            report.survival = p_yc;
            report.benefit_per_treated = 0;
            report.harmed_avoided = harm;
            break;
        case PolicyKind::ExcludeHarmedMarker:
            // A perfect marker withholds treatment exactly from the harmed,
            // who then survive untreated.
            report.treated_fraction = 1 - harm;
            report.survival = benefit + harm + always;
            report.benefit_per_treated =
                report.treated_fraction > 0 ? benefit / report.treated_fraction : Rat(0);
            report.harmed_avoided = harm;
            break;
    }
    return report;
}

} // namespace tpb
