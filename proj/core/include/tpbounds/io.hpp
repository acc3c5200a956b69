#pragma once

#include "tpbounds/simulate.hpp"
#include "tpbounds/strata.hpp"
#include "tpbounds/study.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tpb {

// One stratum of a study file: either raw counts (experimental and/or
// observational) or the five probabilities directly, never both forms.
struct StudyStratumInput {
    std::string label;
    std::optional<ExperimentalSummary> experimental;
    std::optional<ObservationalSummary> observational;
    std::optional<StudyProbabilities> probabilities;

    bool counts_form() const { return experimental.has_value() || observational.has_value(); }
    StudyProbabilities resolve() const;
};

struct StudyFile {
    int version = 1;
    std::vector<StudyStratumInput> strata;
};

// Canonical JSON study document. Probability values may be JSON numbers
// (read as the shortest decimal the double prints as, which is exact for
// decimal inputs) or strings like "21/31" or "0.279".
StudyFile parse_study_file(const std::string& bytes);
std::string emit_study_file(const StudyFile& doc);

ScenarioSpec parse_scenario_file(const std::string& bytes);
std::string emit_scenario_file(const ScenarioSpec& spec);

// CSV with header: covariate columns first, then source,exposure,outcome.
// source: experimental|observational; exposure: t|c; outcome: y|y'.
// Fields are comma-separated with no quoting; values must not contain commas.
CohortDataset parse_cohort_csv(const std::string& bytes);
std::string emit_cohort_csv(const CohortDataset& cohort);

// Per-stratum analyses in file order; a pooled entry is appended when the
// file has several strata, all in counts form with both studies.
std::vector<StratumReport> analyze_study_file(const StudyFile& doc,
                                              const AnalysisOptions& options = {});

struct Provenance {
    std::string input_name;
    std::string input_digest;
};

struct ReportOptions {
    std::vector<EvidenceScope> scopes = {EvidenceScope::Combined, EvidenceScope::ExperimentalOnly,
                                         EvidenceScope::ObservationalOnly};
    bool include_metrics = true; // monotonicity, NNT, policies
};

enum class ReportFormat { Json, Text };

// Deterministic serialization: strata sorted by label, fixed field order,
// every numeric as {exact, value, display}. The text form speaks in P(...)
// notation and renders percentages for policy lines.
std::string emit_report(const std::vector<StratumReport>& reports, const Provenance& provenance,
                        const ReportOptions& options, ReportFormat format);

std::string emit_screen_report(const FeatureScreenResult& result, const Provenance& provenance,
                               std::uint64_t min_arm_size, ReportFormat format);

// Simulated studies as a study file, one stratum per scenario stratum, with
// a meta block recording scenario name, seed, and unit counts.
std::string emit_sampled_study_file(const SampledStudies& samples, const std::string& scenario_name);

std::uint64_t fnv1a64(std::string_view bytes);
std::string digest_string(std::string_view bytes); // "fnv1a64:" + 16 hex digits

} // namespace tpb
