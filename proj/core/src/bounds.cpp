#include "tpbounds/bounds.hpp"

#include "tpbounds/error.hpp"

#include <algorithm>

namespace tpb {

const char* scope_name(EvidenceScope scope) {
    switch (scope) {
        case EvidenceScope::Combined: return "combined";
        case EvidenceScope::ExperimentalOnly: return "experimental";
        case EvidenceScope::ObservationalOnly: return "observational";
    }
    return "?";
}

const char* target_name(CausalTarget target) {
    return target == CausalTarget::Benefit ? "benefit" : "harm";
}

Interval::Interval(Rat lower, Rat upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_ > upper_)
        raise(ErrorKind::InvalidInterval,
              "lower " + exact_string(lower_) + " > upper " + exact_string(upper_));
    if (lower_ < 0 || upper_ > 1)
        raise(ErrorKind::InvalidInterval,
              "[" + exact_string(lower_) + ", " + exact_string(upper_) + "] outside [0,1]");
}

namespace {

void require_experimental(const StudyProbabilities& p, const char* what) {
    if (!p.has_experimental())
        raise(ErrorKind::MissingField, std::string(what) + " needs P(y_t) and P(y_c)");
}

void require_observational(const StudyProbabilities& p, const char* what) {
    if (!p.has_observational())
        raise(ErrorKind::MissingField, std::string(what) + " needs the survey fields");
}

struct TermSet {
    std::vector<BoundTerm> lower;
    std::vector<BoundTerm> upper;
};

// The four-vs-four argument lists for the combined bounds; the partial
// scopes keep the arguments that do not mention the missing study. Argument
// order follows the canonical listing so attribution labels are stable.
TermSet make_terms(const StudyProbabilities& p, EvidenceScope scope, CausalTarget target) {
    const bool want_exp = scope != EvidenceScope::ObservationalOnly;
    const bool want_obs = scope != EvidenceScope::ExperimentalOnly;

    if (want_exp) require_experimental(p, "bounds");
    if (want_obs) require_observational(p, "bounds");

    TermSet terms;
    terms.lower.push_back({"0", Rat(0)});

    // Benefit and harm are mirror images under swapping the roles of the
    // treated and control arms.
    Rat p_win, p_lose; // P of recovery under the target's "good" / "bad" assignment
    if (want_exp) {
        if (target == CausalTarget::Benefit) {
            p_win = *p.p_yt;
            p_lose = *p.p_yc;
        } else {
            p_win = *p.p_yc;
            p_lose = *p.p_yt;
        }
    }

    if (target == CausalTarget::Benefit) {
        if (want_exp) {
            terms.lower.push_back({"P(y_t) - P(y_c)", p_win - p_lose});
            terms.upper.push_back({"P(y_t)", p_win});
            terms.upper.push_back({"P(y'_c)", 1 - p_lose});
        }
        if (want_obs) {
            const JointCells cells = joint_cells(p);
            if (want_exp) {
                const Rat p_y = cells.ty + cells.cy;
                terms.lower.push_back({"P(y) - P(y_c)", p_y - p_lose});
                terms.lower.push_back({"P(y_t) - P(y)", p_win - p_y});
            }
            terms.upper.push_back({"P(t,y) + P(c,y')", cells.ty + cells.cy_prime});
            if (want_exp)
                terms.upper.push_back({"P(y_t) - P(y_c) + P(t,y') + P(c,y)",
                                       p_win - p_lose + cells.ty_prime + cells.cy});
        }
    } else {
        if (want_exp) {
            terms.lower.push_back({"P(y_c) - P(y_t)", p_win - p_lose});
            terms.upper.push_back({"P(y_c)", p_win});
            terms.upper.push_back({"P(y'_t)", 1 - p_lose});
        }
        if (want_obs) {
            const JointCells cells = joint_cells(p);
            if (want_exp) {
                const Rat p_y = cells.ty + cells.cy;
                terms.lower.push_back({"P(y) - P(y_t)", p_y - p_lose});
                terms.lower.push_back({"P(y_c) - P(y)", p_win - p_y});
            }
            terms.upper.push_back({"P(t,y') + P(c,y)", cells.ty_prime + cells.cy});
            if (want_exp)
                terms.upper.push_back({"P(y_c) - P(y_t) + P(t,y) + P(c,y')",
                                       p_win - p_lose + cells.ty + cells.cy_prime});
        }
    }

    if (terms.upper.empty())
        terms.upper.push_back({"1", Rat(1)});
    return terms;
}

} // namespace

BoundEndpoints bound_endpoints(const StudyProbabilities& p, EvidenceScope scope,
                               CausalTarget target) {
    TermSet terms = make_terms(p, scope, target);

    BoundEndpoints out;
    out.lower = terms.lower.front().value;
    for (const auto& term : terms.lower) out.lower = std::max(out.lower, term.value);
    out.upper = terms.upper.front().value;
    for (const auto& term : terms.upper) out.upper = std::min(out.upper, term.value);
    // The upper argument lists can exceed 1 (the mixed four-term sums do);
    // the final bound is still a probability.
    out.upper = std::min(out.upper, Rat(1));

    for (const auto& term : terms.lower)
        if (term.value == out.lower) out.lower_attained.push_back(term.label);
    for (const auto& term : terms.upper)
        if (std::min(term.value, Rat(1)) == out.upper) out.upper_attained.push_back(term.label);

    out.lower_terms = std::move(terms.lower);
    out.upper_terms = std::move(terms.upper);
    return out;
}

namespace {

BoundsResult checked_bounds(const StudyProbabilities& p, EvidenceScope scope,
                            CausalTarget target) {
    if (scope == EvidenceScope::Combined) {
        const CompatibilityVerdict verdict = check_compatibility(p);
        if (!verdict.compatible) {
            std::string detail;
            for (const auto& v : verdict.violations) {
                if (!detail.empty()) detail += "; ";
                detail += v.constraint + " violated by " + exact_string(v.slack);
            }
            raise(ErrorKind::IncompatibleData, detail);
        }
    }
    BoundEndpoints raw = bound_endpoints(p, scope, target);
    return BoundsResult{Interval(raw.lower, raw.upper), std::move(raw.lower_attained),
                        std::move(raw.upper_attained)};
}

} // namespace

BoundsResult benefit_bounds(const StudyProbabilities& p, EvidenceScope scope) {
    return checked_bounds(p, scope, CausalTarget::Benefit);
}

BoundsResult harm_bounds(const StudyProbabilities& p, EvidenceScope scope) {
    return checked_bounds(p, scope, CausalTarget::Harm);
}

Rat ate(const StudyProbabilities& p) {
    require_experimental(p, "ATE");
    return *p.p_yt - *p.p_yc;
}

Rat harm_from_benefit(const Rat& benefit, const Rat& ate_value) {
    const Rat harm = benefit - ate_value;
    if (harm < 0 || harm > 1)
        raise(ErrorKind::InconsistentPair,
              "P(benefit) - ATE = " + exact_string(harm) + " outside [0,1]");
    return harm;
}

} // namespace tpb
