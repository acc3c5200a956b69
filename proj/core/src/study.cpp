#include "tpbounds/study.hpp"

#include "tpbounds/error.hpp"

namespace tpb {

namespace {

void check_unit_range(const std::optional<Rat>& value, const char* name) {
    if (!value) return;
    if (*value < 0 || *value > 1)
        raise(ErrorKind::ValueError, std::string(name) + " outside [0,1]: " + exact_string(*value));
}

Rat arm_rate(const ArmCounts& arm, const char* name) {
    if (arm.total() == 0)
        raise(ErrorKind::ZeroDenominator, std::string("empty arm: ") + name);
    return Rat(arm.survivors, arm.total());
}

} // namespace

bool StudyProbabilities::has_observational() const {
    if (!p_t) return false;
    if (!p_y_given_t && *p_t != 0) return false;
    if (!p_y_given_c && *p_t != 1) return false;
    return true;
}

void StudyProbabilities::validate() const {
    check_unit_range(p_yt, "P(y_t)");
    check_unit_range(p_yc, "P(y_c)");
    check_unit_range(p_y_given_t, "P(y|t)");
    check_unit_range(p_y_given_c, "P(y|c)");
    check_unit_range(p_t, "P(t)");
}

StudyProbabilities from_counts(const ExperimentalSummary& exp, const ObservationalSummary& obs) {
    StudyProbabilities p = from_counts(exp);
    StudyProbabilities o = from_counts(obs);
    p.p_y_given_t = o.p_y_given_t;
    p.p_y_given_c = o.p_y_given_c;
    p.p_t = o.p_t;
    return p;
}

StudyProbabilities from_counts(const ExperimentalSummary& exp) {
    StudyProbabilities p;
    p.p_yt = arm_rate(exp.treated, "experimental do(treatment)");
    p.p_yc = arm_rate(exp.control, "experimental do(control)");
    return p;
}

StudyProbabilities from_counts(const ObservationalSummary& obs) {
    const std::uint64_t total = obs.total();
    if (total == 0)
        raise(ErrorKind::ZeroDenominator, "observational study has no units");

    StudyProbabilities p;
    p.p_t = Rat(obs.chose_treatment.total(), total);
    if (obs.chose_treatment.total() > 0)
        p.p_y_given_t = arm_rate(obs.chose_treatment, "observational choosers");
    if (obs.chose_control.total() > 0)
        p.p_y_given_c = arm_rate(obs.chose_control, "observational avoiders");
    return p;
}

Rat marginal_outcome(const StudyProbabilities& p) {
    const JointCells cells = joint_cells(p);
    return cells.ty + cells.cy;
}

JointCells joint_cells(const StudyProbabilities& p) {
    if (!p.has_observational())
        raise(ErrorKind::MissingField, "joint cells need P(t) and the defined conditionals");

    const Rat pt = *p.p_t;
    const Rat pc = 1 - pt;

    JointCells cells;
    if (pt == 0) {
        cells.ty = 0;
        cells.ty_prime = 0;
    } else {
        cells.ty = pt * *p.p_y_given_t;
        cells.ty_prime = pt * (1 - *p.p_y_given_t);
    }
    if (pc == 0) {
        cells.cy = 0;
        cells.cy_prime = 0;
    } else {
        cells.cy = pc * *p.p_y_given_c;
        cells.cy_prime = pc * (1 - *p.p_y_given_c);
    }
    return cells;
}

CompatibilityVerdict check_compatibility(const StudyProbabilities& p) {
    if (!p.has_experimental() || !p.has_observational())
        raise(ErrorKind::MissingField, "compatibility needs both studies");

    const JointCells cells = joint_cells(p);
    const Rat pt = *p.p_t;
    const Rat pc = 1 - pt;

    CompatibilityVerdict verdict;
    auto require = [&](const Rat& lhs, const Rat& rhs, const std::string& name) {
        if (lhs > rhs) verdict.violations.push_back({name, lhs - rhs});
    };
    require(cells.ty, *p.p_yt, "P(t,y) <= P(y_t)");
    require(*p.p_yt, cells.ty + pc, "P(y_t) <= P(t,y) + P(c)");
    require(cells.cy, *p.p_yc, "P(c,y) <= P(y_c)");
    require(*p.p_yc, cells.cy + pt, "P(y_c) <= P(c,y) + P(t)");

    verdict.compatible = verdict.violations.empty();
    return verdict;
}

} // namespace tpb
