#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tpbounds/error.hpp"
#include "tpbounds/study.hpp"

#include "support.hpp"

using tpb::Rat;
using tpbtest::make_probs;

namespace {

tpb::ExperimentalSummary female_exp() { return {{489, 511}, {210, 790}}; }
tpb::ObservationalSummary female_obs() { return {{378, 1022}, {420, 180}}; }
tpb::ExperimentalSummary male_exp() { return {{490, 510}, {210, 790}}; }
tpb::ObservationalSummary male_obs() { return {{980, 420}, {420, 180}}; }

} // namespace

TEST_CASE("from_counts keeps exact ratios") {
    const tpb::StudyProbabilities f = tpb::from_counts(female_exp(), female_obs());
    CHECK(*f.p_yt == Rat(489, 1000));
    CHECK(*f.p_yc == Rat(21, 100));
    CHECK(*f.p_y_given_t == Rat(27, 100));
    CHECK(*f.p_y_given_c == Rat(7, 10));
    CHECK(*f.p_t == Rat(7, 10));

    const tpb::StudyProbabilities m = tpb::from_counts(male_exp(), male_obs());
    CHECK(*m.p_yt == Rat(49, 100));
    CHECK(*m.p_y_given_t == Rat(7, 10));
    CHECK(m.has_experimental());
    CHECK(m.has_observational());
}

TEST_CASE("from_counts rejects empty required arms") {
    CHECK_THROWS_WITH_AS(tpb::from_counts(tpb::ExperimentalSummary{{0, 0}, {5, 5}}),
                         doctest::Contains("do(treatment)"), tpb::Error);
    CHECK_THROWS_AS(tpb::from_counts(tpb::ExperimentalSummary{{5, 5}, {0, 0}}), tpb::Error);
    CHECK_THROWS_AS(tpb::from_counts(tpb::ObservationalSummary{{0, 0}, {0, 0}}), tpb::Error);
    try {
        tpb::from_counts(tpb::ObservationalSummary{{0, 0}, {0, 0}});
    } catch (const tpb::Error& e) {
        CHECK(e.kind() == tpb::ErrorKind::ZeroDenominator);
    }
}

TEST_CASE("an empty observational arm leaves its conditional undefined") {
    const tpb::StudyProbabilities all_chose =
        tpb::from_counts(tpb::ObservationalSummary{{30, 10}, {0, 0}});
    CHECK(*all_chose.p_t == Rat(1));
    CHECK(all_chose.p_y_given_t.has_value());
    CHECK_FALSE(all_chose.p_y_given_c.has_value());
    CHECK(all_chose.has_observational());

    const tpb::JointCells cells = tpb::joint_cells(all_chose);
    CHECK(cells.ty == Rat(3, 4));
    CHECK(cells.cy == Rat(0));
    CHECK(cells.cy_prime == Rat(0));

    const tpb::StudyProbabilities none_chose =
        tpb::from_counts(tpb::ObservationalSummary{{0, 0}, {10, 30}});
    CHECK(*none_chose.p_t == Rat(0));
    CHECK_FALSE(none_chose.p_y_given_t.has_value());
    CHECK(none_chose.has_observational());
    CHECK(tpb::joint_cells(none_chose).ty == Rat(0));
}

TEST_CASE("validate rejects out-of-range fields") {
    tpb::StudyProbabilities p = make_probs(Rat(3, 2), Rat(0), {}, {}, {});
    CHECK_THROWS_AS(p.validate(), tpb::Error);
    tpbtest::female_probs().validate();
}

TEST_CASE("joint cells and marginal outcome") {
    const tpb::StudyProbabilities f = tpbtest::female_probs();
    const tpb::JointCells cells = tpb::joint_cells(f);
    CHECK(cells.ty == Rat(189, 1000));
    CHECK(cells.ty_prime == Rat(511, 1000));
    CHECK(cells.cy == Rat(21, 100));
    CHECK(cells.cy_prime == Rat(9, 100));
    CHECK(tpb::marginal_outcome(f) == Rat(399, 1000));
    CHECK(tpb::marginal_outcome(tpbtest::male_probs()) == Rat(7, 10));

    tpb::StudyProbabilities exp_only = make_probs(Rat(1, 2), Rat(1, 2), {}, {}, {});
    CHECK_THROWS_AS(tpb::joint_cells(exp_only), tpb::Error);
}

TEST_CASE("paper strata are compatible") {
    CHECK(tpb::check_compatibility(tpbtest::female_probs()).compatible);
    CHECK(tpb::check_compatibility(tpbtest::male_probs()).compatible);
}

TEST_CASE("a constructed violation is reported with its slack") {
    // P(y_t) = 0.9 cannot coexist with P(t,y) = 0.05 and P(c) = 0.5.
    const tpb::StudyProbabilities p =
        make_probs(Rat(9, 10), Rat(1, 10), Rat(1, 10), Rat(1, 10), Rat(1, 2));
    const tpb::CompatibilityVerdict verdict = tpb::check_compatibility(p);
    REQUIRE_FALSE(verdict.compatible);
    REQUIRE(verdict.violations.size() == 1);
    CHECK(verdict.violations[0].constraint == "P(y_t) <= P(t,y) + P(c)");
    CHECK(verdict.violations[0].slack == Rat(9, 10) - Rat(11, 20));
}

TEST_CASE("tight boundaries are still compatible") {
    // P(y_t) exactly at P(t,y) + P(c) and P(y_c) exactly at P(c,y).
    const tpb::StudyProbabilities p =
        make_probs(Rat(489, 1000), Rat(21, 100), Rat(27, 100), Rat(7, 10), Rat(7, 10));
    const tpb::CompatibilityVerdict verdict = tpb::check_compatibility(p);
    CHECK(verdict.compatible);
    CHECK(verdict.violations.empty());
}

TEST_CASE("compatibility needs both studies") {
    CHECK_THROWS_AS(tpb::check_compatibility(make_probs(Rat(1, 2), Rat(1, 2), {}, {}, {})),
                    tpb::Error);
}
