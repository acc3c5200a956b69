#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tpbounds/bounds.hpp"
#include "tpbounds/error.hpp"
#include "tpbounds/metrics.hpp"
#include "tpbounds/oracle.hpp"
#include "tpbounds/simulate.hpp"
#include "tpbounds/strata.hpp"

#include "support.hpp"

using tpb::CausalTarget;
using tpb::EvidenceScope;
using tpb::Rat;
using tpb::ResponseType;

namespace {

constexpr EvidenceScope kScopes[] = {EvidenceScope::Combined, EvidenceScope::ExperimentalOnly,
                                     EvidenceScope::ObservationalOnly};
constexpr CausalTarget kTargets[] = {CausalTarget::Benefit, CausalTarget::Harm};

} // namespace

TEST_CASE("closed form equals the oracle on random feasible inputs") {
    tpbtest::RandomSource random(1);
    for (int i = 0; i < 300; ++i) {
        const tpb::StudyProbabilities p = random.feasible_probs();
        for (const EvidenceScope scope : kScopes) {
            for (const CausalTarget target : kTargets) {
                const tpb::BoundEndpoints closed = tpb::bound_endpoints(p, scope, target);
                const tpb::OracleResult oracle = tpb::oracle_bounds(p, scope, target);
                REQUIRE(oracle.bounds.lower() == closed.lower);
                REQUIRE(oracle.bounds.upper() == closed.upper);
            }
        }
    }
}

TEST_CASE("compatibility inequalities decide polytope nonemptiness") {
    tpbtest::RandomSource random(2);
    int incompatible_seen = 0;
    for (int i = 0; i < 400; ++i) {
        // Arbitrary five-tuples are usually infeasible; feasible ones keep
        // the mix honest.
        const tpb::StudyProbabilities p =
            (i % 4 == 0) ? random.feasible_probs() : random.arbitrary_probs();
        const bool compatible = tpb::check_compatibility(p).compatible;
        REQUIRE(compatible == tpb::feasible(p));
        if (!compatible) ++incompatible_seen;
    }
    CHECK(incompatible_seen > 50); // the mix must actually exercise both sides
}

TEST_CASE("oracle witnesses always validate and attain their endpoints") {
    tpbtest::RandomSource random(3);
    for (int i = 0; i < 60; ++i) {
        const tpb::StudyProbabilities p = random.feasible_probs();
        for (const CausalTarget target : kTargets) {
            const tpb::OracleResult oracle =
                tpb::oracle_bounds(p, EvidenceScope::Combined, target);
            oracle.lower_witness.validate();
            oracle.upper_witness.validate();
            const ResponseType wanted =
                target == CausalTarget::Benefit ? ResponseType::Benefit : ResponseType::Harm;
            REQUIRE(oracle.lower_witness.type_mass(wanted) == oracle.bounds.lower());
            REQUIRE(oracle.upper_witness.type_mass(wanted) == oracle.bounds.upper());
        }
    }
}

TEST_CASE("any distribution's masses fall inside the bounds of its own observables") {
    tpbtest::RandomSource random(4);
    for (int i = 0; i < 200; ++i) {
        const tpb::ResponseTypeDistribution d = random.distribution();
        const tpb::InducedObservables obs = tpb::pns_of(d);
        const tpb::StudyProbabilities p = obs.study();
        for (const EvidenceScope scope : kScopes) {
            const tpb::BoundEndpoints benefit =
                tpb::bound_endpoints(p, scope, CausalTarget::Benefit);
            REQUIRE(benefit.lower <= obs.benefit);
            REQUIRE(obs.benefit <= benefit.upper);
            const tpb::BoundEndpoints harm = tpb::bound_endpoints(p, scope, CausalTarget::Harm);
            REQUIRE(harm.lower <= obs.harm);
            REQUIRE(obs.harm <= harm.upper);
        }
    }
}

TEST_CASE("harm bounds are the benefit bounds shifted by the ATE") {
    tpbtest::RandomSource random(5);
    for (int i = 0; i < 200; ++i) {
        const tpb::StudyProbabilities p = random.feasible_probs();
        const Rat shift = tpb::ate(p);
        for (const EvidenceScope scope :
             {EvidenceScope::Combined, EvidenceScope::ExperimentalOnly}) {
            const tpb::BoundEndpoints benefit =
                tpb::bound_endpoints(p, scope, CausalTarget::Benefit);
            const tpb::BoundEndpoints harm = tpb::bound_endpoints(p, scope, CausalTarget::Harm);
            REQUIRE(harm.lower == benefit.lower - shift);
            REQUIRE(harm.upper == benefit.upper - shift);
        }
    }
}

TEST_CASE("combining studies never loses information") {
    tpbtest::RandomSource random(6);
    for (int i = 0; i < 200; ++i) {
        const tpb::StudyProbabilities p = random.feasible_probs();
        for (const CausalTarget target : kTargets) {
            const tpb::BoundEndpoints combined =
                tpb::bound_endpoints(p, EvidenceScope::Combined, target);
            const tpb::BoundEndpoints exp =
                tpb::bound_endpoints(p, EvidenceScope::ExperimentalOnly, target);
            const tpb::BoundEndpoints obs =
                tpb::bound_endpoints(p, EvidenceScope::ObservationalOnly, target);
            REQUIRE(combined.lower >= exp.lower);
            REQUIRE(combined.upper <= exp.upper);
            REQUIRE(combined.lower >= obs.lower);
            REQUIRE(combined.upper <= obs.upper);
        }
    }
}

TEST_CASE("every scenario's ground truth is covered by the bounds") {
    tpbtest::RandomSource random(7);
    for (int i = 0; i < 150; ++i) {
        const tpb::ScenarioSpec spec = random_scenario(random);
        const tpb::ScenarioGroundTruth truth = tpb::ground_truth(spec);
        std::vector<const tpb::StratumGroundTruth*> all;
        for (const auto& g : truth.strata) all.push_back(&g);
        all.push_back(&truth.pooled);
        for (const tpb::StratumGroundTruth* g : all) {
            REQUIRE(tpb::check_compatibility(g->probabilities).compatible);
            const tpb::BoundsResult benefit =
                tpb::benefit_bounds(g->probabilities, EvidenceScope::Combined);
            REQUIRE(benefit.interval.contains(g->benefit));
            const tpb::BoundsResult harm =
                tpb::harm_bounds(g->probabilities, EvidenceScope::Combined);
            REQUIRE(harm.interval.contains(g->harm));
        }
    }
}

TEST_CASE("the necessary test never rejects a truly harm-free population") {
    tpbtest::RandomSource random(8);
    int checked = 0;
    for (int i = 0; i < 150; ++i) {
        tpb::ScenarioSpec spec = random_scenario(random);
        for (auto& s : spec.strata) {
            // Move all harm mass onto the always type: same marginals under
            // control, but no individual is harmed.
            s.mix[2] += s.mix[1];
            s.mix[1] = 0;
        }
        const tpb::ScenarioGroundTruth truth = tpb::ground_truth(spec);
        for (const auto& g : truth.strata) {
            REQUIRE(g.harm == 0);
            REQUIRE(tpb::monotonicity_necessary(g.probabilities).pass);
            const tpb::MonotonicityVerdict verdict = tpb::monotonicity_verdict(g.probabilities);
            REQUIRE(verdict.verdict != tpb::Monotonicity::RuledOut);
            ++checked;
        }
    }
    CHECK(checked >= 150);
}

TEST_CASE("reconciliation is idempotent, minimal, and always lands compatible") {
    tpbtest::RandomSource random(9);
    for (int i = 0; i < 300; ++i) {
        const tpb::StudyProbabilities p =
            (i % 3 == 0) ? random.feasible_probs() : random.arbitrary_probs();
        const tpb::StudyProbabilities fixed = tpb::reconcile_probabilities(p);
        REQUIRE(tpb::check_compatibility(fixed).compatible);

        const tpb::StudyProbabilities again = tpb::reconcile_probabilities(fixed);
        REQUIRE(*again.p_yt == *fixed.p_yt);
        REQUIRE(*again.p_yc == *fixed.p_yc);

        if (tpb::check_compatibility(p).compatible) {
            REQUIRE(*fixed.p_yt == *p.p_yt);
            REQUIRE(*fixed.p_yc == *p.p_yc);
        } else {
            // A clamp only ever moves a rate to the boundary it violated.
            const tpb::JointCells cells = tpb::joint_cells(p);
            if (*fixed.p_yt != *p.p_yt)
                REQUIRE((*fixed.p_yt == cells.ty || *fixed.p_yt == cells.ty + 1 - *p.p_t));
            if (*fixed.p_yc != *p.p_yc)
                REQUIRE((*fixed.p_yc == cells.cy || *fixed.p_yc == cells.cy + *p.p_t));
        }

        // The untouched fields never move.
        REQUIRE(*fixed.p_t == *p.p_t);
        REQUIRE(*fixed.p_y_given_t == *p.p_y_given_t);
        REQUIRE(*fixed.p_y_given_c == *p.p_y_given_c);
    }
}

TEST_CASE("NNT duality is exact over random intervals") {
    tpbtest::RandomSource random(10);
    for (int i = 0; i < 200; ++i) {
        Rat lo = random.unit();
        Rat hi = random.unit();
        if (lo > hi) std::swap(lo, hi);
        if (hi == 0) hi = Rat(1, 13);
        const tpb::NNTInterval nnt = tpb::nnt_from_benefit(tpb::Interval(lo, hi));
        REQUIRE(nnt.lower_finite());
        REQUIRE(*nnt.lower == 1 / hi);
        if (lo > 0) {
            REQUIRE(*nnt.upper == 1 / lo);
            REQUIRE(1 / *nnt.upper == lo); // reciprocal round trip is exact
            REQUIRE(*nnt.lower <= *nnt.upper);
        } else {
            REQUIRE_FALSE(nnt.upper_finite());
        }
    }
}

TEST_CASE("simulated frequencies converge on the scenario ground truth") {
    // One deterministic medium-size draw per preset; the acceptance suite
    // does the many-replicate error-statistics version.
    for (const std::string& name : {std::string("female"), std::string("male")}) {
        const tpb::ScenarioGroundTruth truth = tpb::ground_truth(tpb::preset(name));
        const tpb::SampledStudies s = tpb::simulate(tpb::preset(name), 20000, 20000, 2026);
        const tpb::StudyProbabilities rates = tpb::from_counts(s.experimental, s.observational);
        const tpb::StudyProbabilities& exact = truth.strata[0].probabilities;
        CHECK(tpb::to_double(abs(*rates.p_yt - *exact.p_yt)) < 0.02);
        CHECK(tpb::to_double(abs(*rates.p_yc - *exact.p_yc)) < 0.02);
        CHECK(tpb::to_double(abs(*rates.p_t - *exact.p_t)) < 0.02);
        CHECK(tpb::to_double(abs(*rates.p_y_given_t - *exact.p_y_given_t)) < 0.02);
        CHECK(tpb::to_double(abs(*rates.p_y_given_c - *exact.p_y_given_c)) < 0.02);
    }
}
