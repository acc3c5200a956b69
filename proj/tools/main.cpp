#include "tpbounds/error.hpp"
#include "tpbounds/io.hpp"
#include "tpbounds/oracle.hpp"
#include "tpbounds/simulate.hpp"
#include "tpbounds/strata.hpp"
#include "tpbounds/version.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitIncompatible = 3;
constexpr int kExitOracleMismatch = 4;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) tpb::raise(tpb::ErrorKind::ValueError, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& path, const std::string& bytes) {
    if (path == "-") {
        std::cout << bytes;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) tpb::raise(tpb::ErrorKind::ValueError, "cannot write '" + path + "'");
    out << bytes;
}

std::vector<tpb::EvidenceScope> resolve_scopes(const std::vector<std::string>& names) {
    if (names.empty())
        return {tpb::EvidenceScope::Combined, tpb::EvidenceScope::ExperimentalOnly,
                tpb::EvidenceScope::ObservationalOnly};
    std::vector<tpb::EvidenceScope> scopes;
    for (const auto& name : names) {
        if (name == "combined")
            scopes.push_back(tpb::EvidenceScope::Combined);
        else if (name == "exp" || name == "experimental")
            scopes.push_back(tpb::EvidenceScope::ExperimentalOnly);
        else if (name == "obs" || name == "observational")
            scopes.push_back(tpb::EvidenceScope::ObservationalOnly);
        else
            tpb::raise(tpb::ErrorKind::ValueError,
                       "unknown scope '" + name + "' (use combined, exp, or obs)");
    }
    return scopes;
}

tpb::ReportFormat resolve_format(const std::string& name) {
    if (name == "json") return tpb::ReportFormat::Json;
    if (name == "text") return tpb::ReportFormat::Text;
    tpb::raise(tpb::ErrorKind::ValueError, "unknown format '" + name + "' (use json or text)");
}

struct ReportArgs {
    std::string input;
    std::string output = "-";
    std::string format = "json";
    std::vector<std::string> scopes;
    std::string stratum;
    bool reconcile = false;
};

int run_report(const ReportArgs& args, bool include_metrics) {
    const std::string bytes = read_input(args.input);
    const tpb::StudyFile doc = tpb::parse_study_file(bytes);
    std::vector<tpb::StratumReport> reports =
        tpb::analyze_study_file(doc, tpb::AnalysisOptions{.reconcile = args.reconcile});
    if (!args.stratum.empty()) {
        std::vector<tpb::StratumReport> picked;
        for (auto& r : reports)
            if (r.label == args.stratum) picked.push_back(std::move(r));
        if (picked.empty())
            tpb::raise(tpb::ErrorKind::ValueError, "no stratum labeled '" + args.stratum + "'");
        reports = std::move(picked);
    }
    tpb::ReportOptions options;
    options.scopes = resolve_scopes(args.scopes);
    options.include_metrics = include_metrics;
    const tpb::Provenance provenance{args.input, tpb::digest_string(bytes)};
    write_output(args.output,
                 tpb::emit_report(reports, provenance, options, resolve_format(args.format)));
    return kExitOk;
}

struct SimulateArgs {
    std::string preset_name;
    std::string spec_path;
    std::uint64_t n_exp = 1000;
    std::uint64_t n_obs = 1000;
    std::uint64_t seed = 0;
    std::string output = "-";
    std::string cohort_out;
};

int run_simulate(const SimulateArgs& args) {
    tpb::ScenarioSpec spec;
    std::string name;
    if (!args.preset_name.empty()) {
        spec = tpb::preset(args.preset_name);
        name = args.preset_name;
    } else if (!args.spec_path.empty()) {
        spec = tpb::parse_scenario_file(read_input(args.spec_path));
        name = args.spec_path;
    } else {
        tpb::raise(tpb::ErrorKind::ValueError, "one of --preset or --spec is required");
    }
    tpb::SimulateOptions options;
    options.retain_units = !args.cohort_out.empty();
    const tpb::SampledStudies samples =
        tpb::simulate(spec, args.n_exp, args.n_obs, args.seed, options);
    write_output(args.output, tpb::emit_sampled_study_file(samples, name));
    if (!args.cohort_out.empty())
        write_output(args.cohort_out,
                     tpb::emit_cohort_csv(tpb::cohort_from_samples(samples, spec.feature)));
    return kExitOk;
}

struct ScreenArgs {
    std::string cohort_path;
    std::vector<std::string> features;
    std::uint64_t min_arm = 30;
    bool no_reconcile = false;
    std::string output = "-";
    std::string format = "json";
};

int run_screen(const ScreenArgs& args) {
    const std::string bytes = read_input(args.cohort_path);
    const tpb::CohortDataset cohort = tpb::parse_cohort_csv(bytes);
    tpb::ScreenOptions options;
    options.min_arm_size = args.min_arm;
    options.analysis.reconcile = !args.no_reconcile;
    const tpb::FeatureScreenResult result = tpb::screen_features(cohort, args.features, options);
    const tpb::Provenance provenance{args.cohort_path, tpb::digest_string(bytes)};
    write_output(args.output, tpb::emit_screen_report(result, provenance, args.min_arm,
                                                      resolve_format(args.format)));
    return kExitOk;
}

struct OracleArgs {
    std::string input;
    bool reconcile = false;
};

// Recomputes every closed-form bound by vertex enumeration; any difference
// is a defect in one of the two, so the command fails loudly.
int run_oracle_check(const OracleArgs& args) {
    const std::string bytes = read_input(args.input);
    const tpb::StudyFile doc = tpb::parse_study_file(bytes);
    bool mismatch = false;
    for (const auto& stratum : doc.strata) {
        tpb::StudyProbabilities p = stratum.resolve();
        if (args.reconcile) p = tpb::reconcile_probabilities(p);
        std::vector<tpb::EvidenceScope> scopes;
        if (p.has_experimental() && p.has_observational())
            scopes.push_back(tpb::EvidenceScope::Combined);
        if (p.has_experimental()) scopes.push_back(tpb::EvidenceScope::ExperimentalOnly);
        if (p.has_observational()) scopes.push_back(tpb::EvidenceScope::ObservationalOnly);
        for (tpb::EvidenceScope scope : scopes) {
            for (tpb::CausalTarget target : {tpb::CausalTarget::Benefit, tpb::CausalTarget::Harm}) {
                const tpb::BoundsResult closed = target == tpb::CausalTarget::Benefit
                                                     ? tpb::benefit_bounds(p, scope)
                                                     : tpb::harm_bounds(p, scope);
                const tpb::OracleResult oracle = tpb::oracle_bounds(p, scope, target);
                const bool ok = closed.interval == oracle.bounds;
                std::cout << "stratum " << stratum.label << " " << tpb::scope_name(scope) << " "
                          << tpb::target_name(target) << ": closed ["
                          << tpb::exact_string(closed.interval.lower()) << ", "
                          << tpb::exact_string(closed.interval.upper()) << "] oracle ["
                          << tpb::exact_string(oracle.bounds.lower()) << ", "
                          << tpb::exact_string(oracle.bounds.upper()) << "] "
                          << (ok ? "ok" : "MISMATCH") << "\n";
                if (!ok) mismatch = true;
            }
        }
    }
    return mismatch ? kExitOracleMismatch : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tight bounds on individual-level treatment benefit and harm"};
    app.set_version_flag("--version", std::string(tpb::kToolName) + " " + tpb::kToolVersion);
    app.set_config("--config", "", "read option defaults from a config file");
    app.require_subcommand(1);

    ReportArgs bounds_args;
    CLI::App* bounds = app.add_subcommand("bounds", "benefit and harm bounds from a study file");
    bounds->add_option("input", bounds_args.input, "study JSON file, or - for stdin")->required();
    bounds->add_option("--scope", bounds_args.scopes,
                       "evidence scope: combined, exp, obs (repeatable; default all)");
    bounds->add_option("--stratum", bounds_args.stratum, "only this stratum label");
    bounds->add_option("-o,--output", bounds_args.output, "output path (default stdout)");
    bounds->add_option("--format", bounds_args.format, "json or text (default json)");
    bounds->add_flag("--reconcile", bounds_args.reconcile,
                     "clamp jointly impossible rates into the compatible region");

    ReportArgs report_args;
    CLI::App* report =
        app.add_subcommand("report", "full analysis: bounds, monotonicity, NNT, policies");
    report->add_option("input", report_args.input, "study JSON file, or - for stdin")->required();
    report->add_option("--scope", report_args.scopes,
                       "evidence scope: combined, exp, obs (repeatable; default all)");
    report->add_option("--stratum", report_args.stratum, "only this stratum label");
    report->add_option("-o,--output", report_args.output, "output path (default stdout)");
    report->add_option("--format", report_args.format, "json or text (default json)");
    report->add_flag("--reconcile", report_args.reconcile,
                     "clamp jointly impossible rates into the compatible region");

    SimulateArgs sim_args;
    CLI::App* simulate = app.add_subcommand("simulate", "sample studies from a scenario");
    CLI::Option* preset_opt =
        simulate->add_option("--preset", sim_args.preset_name, "named scenario");
    simulate->add_option("--spec", sim_args.spec_path, "scenario JSON file")->excludes(preset_opt);
    simulate->add_option("--n-exp", sim_args.n_exp, "experimental units (default 1000)");
    simulate->add_option("--n-obs", sim_args.n_obs, "observational units (default 1000)");
    simulate->add_option("--seed", sim_args.seed, "RNG seed (default 0)");
    simulate->add_option("-o,--output", sim_args.output, "study file path (default stdout)");
    simulate->add_option("--cohort-out", sim_args.cohort_out,
                         "also write the unit-level cohort CSV here");

    ScreenArgs screen_args;
    CLI::App* screen = app.add_subcommand("screen", "rank covariates by bound sharpening");
    screen->add_option("--cohort", screen_args.cohort_path, "cohort CSV file")->required();
    screen->add_option("--features", screen_args.features, "candidate covariates")
        ->required()
        ->delimiter(',');
    screen->add_option("--min-arm", screen_args.min_arm, "minimum units per arm (default 30)");
    screen->add_flag("--no-reconcile", screen_args.no_reconcile,
                     "fail on jointly impossible strata instead of clamping");
    screen->add_option("-o,--output", screen_args.output, "output path (default stdout)");
    screen->add_option("--format", screen_args.format, "json or text (default json)");

    OracleArgs oracle_args;
    CLI::App* oracle =
        app.add_subcommand("oracle-check", "verify closed-form bounds by vertex enumeration");
    oracle->add_option("input", oracle_args.input, "study JSON file, or - for stdin")->required();
    oracle->add_flag("--reconcile", oracle_args.reconcile,
                     "clamp jointly impossible rates into the compatible region");

    try {
        app.parse(argc, argv);
        if (app.got_subcommand(bounds)) return run_report(bounds_args, false);
        if (app.got_subcommand(report)) return run_report(report_args, true);
        if (app.got_subcommand(simulate)) return run_simulate(sim_args);
        if (app.got_subcommand(screen)) return run_screen(screen_args);
        if (app.got_subcommand(oracle)) return run_oracle_check(oracle_args);
        return kExitInput;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    } catch (const tpb::Error& e) {
        std::cerr << "error: " << e.what() << " [" << tpb::error_kind_name(e.kind()) << "]\n";
        return e.is_input_error() ? kExitInput : kExitIncompatible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
