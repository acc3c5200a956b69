#include "tpbounds/simulate.hpp"

#include "tpbounds/error.hpp"

#include <random>
#include <set>
#include <utility>

namespace tpb {

namespace {

constexpr std::array<ResponseType, 4> kTypes = {ResponseType::Benefit, ResponseType::Harm,
                                                ResponseType::Always, ResponseType::Doomed};

double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

std::size_t pick_category(const std::vector<double>& cumulative, double u) {
    for (std::size_t i = 0; i + 1 < cumulative.size(); ++i) {
        if (u < cumulative[i]) return i;
    }
    return cumulative.size() - 1;
}

bool outcome_of(ResponseType type, bool treated) {
    switch (type) {
    case ResponseType::Benefit: return treated;
    case ResponseType::Harm: return !treated;
    case ResponseType::Always: return true;
    case ResponseType::Doomed: return false;
    }
    return false;
}

void tally(ArmCounts& arm, bool outcome_y) {
    if (outcome_y)
        ++arm.survivors;
    else
        ++arm.deaths;
}

StratumGroundTruth stratum_truth(const StratumSpec& s) {
    StratumGroundTruth g;
    g.label = s.label;
    g.weight = s.weight;
    g.benefit = s.mix[0];
    g.harm = s.mix[1];
    const Rat always = s.mix[2];

    Rat p_t = 0;
    for (std::size_t r = 0; r < 4; ++r) p_t += s.mix[r] * s.choice[r];
    const Rat joint_ty = s.mix[0] * s.choice[0] + always * s.choice[2];
    const Rat joint_cy = s.mix[1] * (1 - s.choice[1]) + always * (1 - s.choice[2]);

    StudyProbabilities p;
    p.p_yt = g.benefit + always;
    p.p_yc = g.harm + always;
    p.p_t = p_t;
    if (p_t > 0) p.p_y_given_t = joint_ty / p_t;
    if (p_t < 1) p.p_y_given_c = joint_cy / (1 - p_t);
    g.probabilities = p;
    return g;
}

} // namespace

void ScenarioSpec::validate() const {
    if (strata.empty()) raise(ErrorKind::InvalidSpec, "scenario has no strata");
    if (rct_treated_fraction <= 0 || rct_treated_fraction >= 1)
        raise(ErrorKind::InvalidSpec, "rct_treated_fraction must lie strictly between 0 and 1");
    Rat total_weight = 0;
    std::set<std::string> seen;
    for (const auto& s : strata) {
        if (s.label.empty()) raise(ErrorKind::InvalidSpec, "stratum label is empty");
        if (!seen.insert(s.label).second)
            raise(ErrorKind::InvalidSpec, "duplicate stratum label '" + s.label + "'");
        if (s.weight < 0)
            raise(ErrorKind::InvalidSpec, "stratum '" + s.label + "' has negative weight");
        total_weight += s.weight;
        Rat mix_total = 0;
        for (std::size_t r = 0; r < 4; ++r) {
            if (s.mix[r] < 0)
                raise(ErrorKind::InvalidSpec, "stratum '" + s.label + "' has a negative mix entry");
            if (s.choice[r] < 0 || s.choice[r] > 1)
                raise(ErrorKind::InvalidSpec,
                      "stratum '" + s.label + "' has a choice rate outside [0, 1]");
            mix_total += s.mix[r];
        }
        if (mix_total != 1)
            raise(ErrorKind::InvalidSpec,
                  "stratum '" + s.label + "' response mix sums to " + exact_string(mix_total) +
                      ", expected 1");
    }
    if (total_weight != 1)
        raise(ErrorKind::InvalidSpec,
              "stratum weights sum to " + exact_string(total_weight) + ", expected 1");
}

ScenarioGroundTruth ground_truth(const ScenarioSpec& spec) {
    spec.validate();
    ScenarioGroundTruth out;
    Rat benefit = 0, harm = 0, p_yt = 0, p_yc = 0, p_t = 0, joint_ty = 0, joint_cy = 0;
    for (const auto& s : spec.strata) {
        StratumGroundTruth g = stratum_truth(s);
        benefit += s.weight * g.benefit;
        harm += s.weight * g.harm;
        p_yt += s.weight * *g.probabilities.p_yt;
        p_yc += s.weight * *g.probabilities.p_yc;
        p_t += s.weight * *g.probabilities.p_t;
        joint_ty += s.weight * (s.mix[0] * s.choice[0] + s.mix[2] * s.choice[2]);
        joint_cy += s.weight * (s.mix[1] * (1 - s.choice[1]) + s.mix[2] * (1 - s.choice[2]));
        out.strata.push_back(std::move(g));
    }
    StratumGroundTruth pooled;
    pooled.label = "pooled";
    pooled.weight = 1;
    pooled.benefit = benefit;
    pooled.harm = harm;
    pooled.probabilities.p_yt = p_yt;
    pooled.probabilities.p_yc = p_yc;
    pooled.probabilities.p_t = p_t;
    if (p_t > 0) pooled.probabilities.p_y_given_t = joint_ty / p_t;
    if (p_t < 1) pooled.probabilities.p_y_given_c = joint_cy / (1 - p_t);
    out.pooled = std::move(pooled);
    return out;
}

SampledStudies simulate(const ScenarioSpec& spec, std::uint64_t n_experimental,
                        std::uint64_t n_observational, std::uint64_t seed,
                        const SimulateOptions& options) {
    spec.validate();
    if (n_experimental == 0 || n_observational == 0)
        raise(ErrorKind::ValueError, "unit counts must be positive");

    std::vector<double> stratum_cum;
    {
        Rat acc = 0;
        for (const auto& s : spec.strata) {
            acc += s.weight;
            stratum_cum.push_back(to_double(acc));
        }
    }
    std::vector<std::array<double, 4>> mix_cum;
    std::vector<std::array<double, 4>> choice_rate;
    for (const auto& s : spec.strata) {
        std::array<double, 4> cum{};
        Rat acc = 0;
        std::array<double, 4> rate{};
        for (std::size_t r = 0; r < 4; ++r) {
            acc += s.mix[r];
            cum[r] = to_double(acc);
            rate[r] = to_double(s.choice[r]);
        }
        mix_cum.push_back(cum);
        choice_rate.push_back(rate);
    }
    const double assign_t = to_double(spec.rct_treated_fraction);

    std::mt19937_64 gen(seed);
    SampledStudies out;
    out.seed = seed;
    for (const auto& s : spec.strata) {
        out.experimental_by_stratum.emplace(s.label, ExperimentalSummary{});
        out.observational_by_stratum.emplace(s.label, ObservationalSummary{});
    }
    if (options.retain_units) out.units.reserve(n_experimental + n_observational);

    auto draw_latent = [&](std::size_t& stratum_index) -> ResponseType {
        stratum_index = pick_category(stratum_cum, uniform01(gen));
        const double u = uniform01(gen);
        std::size_t r = 0;
        const auto& cum = mix_cum[stratum_index];
        while (r + 1 < 4 && u >= cum[r]) ++r;
        return kTypes[r];
    };

    for (std::uint64_t i = 0; i < n_experimental; ++i) {
        std::size_t si = 0;
        const ResponseType latent = draw_latent(si);
        const bool treated = uniform01(gen) < assign_t;
        const bool coin = uniform01(gen) < 0.5;
        const bool y = outcome_of(latent, treated);
        auto& overall = treated ? out.experimental.treated : out.experimental.control;
        tally(overall, y);
        auto& per = out.experimental_by_stratum[spec.strata[si].label];
        tally(treated ? per.treated : per.control, y);
        if (options.retain_units)
            out.units.push_back({spec.strata[si].label, latent, Source::Experimental,
                                 treated ? Exposure::Treatment : Exposure::Control, y, coin});
    }
    for (std::uint64_t i = 0; i < n_observational; ++i) {
        std::size_t si = 0;
        const ResponseType latent = draw_latent(si);
        const bool chose_t = uniform01(gen) < choice_rate[si][static_cast<std::size_t>(latent)];
        const bool coin = uniform01(gen) < 0.5;
        const bool y = outcome_of(latent, chose_t);
        auto& overall = chose_t ? out.observational.chose_treatment : out.observational.chose_control;
        tally(overall, y);
        auto& per = out.observational_by_stratum[spec.strata[si].label];
        tally(chose_t ? per.chose_treatment : per.chose_control, y);
        if (options.retain_units)
            out.units.push_back({spec.strata[si].label, latent, Source::Observational,
                                 chose_t ? Exposure::Treatment : Exposure::Control, y, coin});
    }
    return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t replicate_index) {
    std::uint64_t z = seed + (replicate_index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

StratumSpec make_stratum(std::string label, Rat weight, std::array<Rat, 4> mix,
                         std::array<Rat, 4> choice) {
    StratumSpec s;
    s.label = std::move(label);
    s.weight = std::move(weight);
    s.mix = std::move(mix);
    s.choice = std::move(choice);
    return s;
}

// Choice rates are pinned so the scenario's observational distribution
// reproduces the published one exactly; types with zero mass get rate 0.
StratumSpec female_stratum(Rat weight) {
    return make_stratum("female", std::move(weight),
                        {Rat(279, 1000), Rat(0), Rat(21, 100), Rat(511, 1000)},
                        {Rat(21, 31), Rat(0), Rat(0), Rat(1)});
}

StratumSpec male_stratum(Rat weight) {
    return make_stratum("male", std::move(weight),
                        {Rat(49, 100), Rat(21, 100), Rat(0), Rat(3, 10)},
                        {Rat(1), Rat(0), Rat(0), Rat(7, 10)});
}

} // namespace

ScenarioSpec preset(const std::string& name) {
    ScenarioSpec spec;
    if (name == "model1") {
        // No benefit or harm types at all; choices carry no outcome information.
        spec.strata.push_back(make_stratum("all", 1, {Rat(0), Rat(0), Rat(9, 10), Rat(1, 10)},
                                           {Rat(0), Rat(0), Rat(1, 2), Rat(1, 2)}));
    } else if (name == "model2") {
        // Benefit types seek treatment, harm types avoid it; both observed
        // arms show perfect recovery yet 10% of units are harmed.
        spec.strata.push_back(make_stratum("all", 1,
                                           {Rat(1, 10), Rat(1, 10), Rat(8, 10), Rat(0)},
                                           {Rat(1), Rat(0), Rat(1, 2), Rat(0)}));
    } else if (name == "model2-informed-avoiders") {
        // Same RCT face as model1, but only doomed units choose treatment:
        // P(y | chose t) = 0, which forces the benefit mass to zero.
        spec.strata.push_back(make_stratum("all", 1, {Rat(0), Rat(0), Rat(9, 10), Rat(1, 10)},
                                           {Rat(0), Rat(0), Rat(0), Rat(1)}));
    } else if (name == "female") {
        spec.strata.push_back(female_stratum(1));
    } else if (name == "male") {
        spec.strata.push_back(male_stratum(1));
    } else if (name == "two-sex-trial") {
        spec.feature = "sex";
        spec.strata.push_back(female_stratum(Rat(1, 2)));
        spec.strata.push_back(male_stratum(Rat(1, 2)));
    } else {
        raise(ErrorKind::UnknownPreset, "unknown preset '" + name + "'");
    }
    spec.validate();
    return spec;
}

std::vector<std::string> preset_names() {
    return {"model1", "model2", "model2-informed-avoiders", "female", "male", "two-sex-trial"};
}

CohortDataset cohort_from_samples(const SampledStudies& samples, const std::string& feature) {
    if (samples.units.empty())
        raise(ErrorKind::ValueError, "no unit records were retained by the simulation");
    CohortDataset cohort;
    cohort.covariate_names = {feature, "harm_marker", "coin"};
    cohort.records.reserve(samples.units.size());
    for (const auto& u : samples.units) {
        CohortRecord rec;
        rec.covariates = {u.stratum, u.latent == ResponseType::Harm ? "carrier" : "none",
                          u.coin ? "heads" : "tails"};
        rec.source = u.source;
        rec.exposure = u.exposure;
        rec.outcome_y = u.outcome_y;
        cohort.records.push_back(std::move(rec));
    }
    return cohort;
}

} // namespace tpb
