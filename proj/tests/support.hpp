#pragma once

#include "tpbounds/oracle.hpp"
#include "tpbounds/rational.hpp"
#include "tpbounds/simulate.hpp"
#include "tpbounds/study.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace tpbtest {

using tpb::Rat;

inline tpb::StudyProbabilities make_probs(std::optional<Rat> p_yt, std::optional<Rat> p_yc,
                                          std::optional<Rat> p_y_given_t,
                                          std::optional<Rat> p_y_given_c, std::optional<Rat> p_t) {
    tpb::StudyProbabilities p;
    p.p_yt = std::move(p_yt);
    p.p_yc = std::move(p_yc);
    p.p_y_given_t = std::move(p_y_given_t);
    p.p_y_given_c = std::move(p_y_given_c);
    p.p_t = std::move(p_t);
    return p;
}

inline tpb::StudyProbabilities female_probs() {
    return make_probs(Rat(489, 1000), Rat(21, 100), Rat(27, 100), Rat(7, 10), Rat(7, 10));
}

inline tpb::StudyProbabilities male_probs() {
    return make_probs(Rat(49, 100), Rat(21, 100), Rat(7, 10), Rat(7, 10), Rat(7, 10));
}

// Small random rationals keep the exact-arithmetic suites fast while still
// hitting plenty of degenerate cases (zeros, ones, tight boundaries).
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t integer(std::uint64_t bound) { return gen_() % bound; }

    Rat unit(std::uint64_t max_denominator = 24) {
        const std::uint64_t d = integer(max_denominator) + 1;
        const std::uint64_t k = integer(d + 1);
        return Rat(k, d);
    }

    tpb::ResponseTypeDistribution distribution(std::uint64_t cell_range = 12) {
        tpb::ResponseTypeDistribution d;
        Rat total = 0;
        for (auto& cell : d.cells) {
            cell = Rat(integer(cell_range), 1);
            total += cell;
        }
        if (total == 0) {
            d.cells[integer(8)] = 1;
            total = 1;
        }
        for (auto& cell : d.cells) cell /= total;
        return d;
    }

    tpb::StudyProbabilities feasible_probs() { return tpb::pns_of(distribution()).study(); }

    tpb::StudyProbabilities arbitrary_probs() {
        return make_probs(unit(), unit(), unit(), unit(), unit());
    }

private:
    std::mt19937_64 gen_;
};

// One to three strata with exact rational weights, mixes, and choice rates.
inline tpb::ScenarioSpec random_scenario(RandomSource& random) {
    tpb::ScenarioSpec spec;
    const std::size_t strata = 1 + random.integer(3);
    std::vector<std::uint64_t> weights;
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < strata; ++i) {
        weights.push_back(1 + random.integer(5));
        total += weights.back();
    }
    for (std::size_t i = 0; i < strata; ++i) {
        tpb::StratumSpec s;
        s.label = "s" + std::to_string(i);
        s.weight = Rat(weights[i], total);
        const tpb::ResponseTypeDistribution d = random.distribution();
        for (std::size_t r = 0; r < 4; ++r) {
            s.mix[r] = d.type_mass(static_cast<tpb::ResponseType>(r));
            s.choice[r] = random.unit();
        }
        spec.strata.push_back(std::move(s));
    }
    return spec;
}

} // namespace tpbtest
