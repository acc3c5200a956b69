#include "tpbounds/io.hpp"

#include "tpbounds/error.hpp"
#include "tpbounds/version.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

namespace tpb {

namespace {

using ojson = nlohmann::ordered_json;

ojson parse_json(const std::string& bytes) {
    try {
        return ojson::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        raise(ErrorKind::ParseError, e.what());
    }
}

const ojson* find(const ojson& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

const ojson& require(const ojson& obj, const char* key, const std::string& where) {
    const ojson* v = find(obj, key);
    if (!v) raise(ErrorKind::SchemaError, "missing field '" + where + key + "'");
    return *v;
}

std::string require_string(const ojson& obj, const char* key, const std::string& where) {
    const ojson& v = require(obj, key, where);
    if (!v.is_string())
        raise(ErrorKind::SchemaError, "field '" + where + key + "' must be a string");
    return v.get<std::string>();
}

std::uint64_t parse_count(const ojson& v, const std::string& where) {
    if (v.is_number_integer() && !v.is_number_unsigned())
        raise(ErrorKind::ValueError, "'" + where + "' is negative");
    if (!v.is_number_unsigned())
        raise(ErrorKind::ValueError, "'" + where + "' must be a nonnegative integer");
    return v.get<std::uint64_t>();
}

Rat parse_probability(const ojson& v, const std::string& where) {
    Rat q;
    if (v.is_number()) {
        q = rational_from_shortest_decimal(v.get<double>());
    } else if (v.is_string()) {
        try {
            q = parse_rational(v.get<std::string>());
        } catch (const Error& e) {
            raise(ErrorKind::ValueError, "'" + where + "': " + e.what());
        }
    } else {
        raise(ErrorKind::ValueError, "'" + where + "' must be a number or a rational string");
    }
    if (q < 0 || q > 1)
        raise(ErrorKind::ValueError, "'" + where + "' = " + exact_string(q) + " is outside [0, 1]");
    return q;
}

ArmCounts parse_arm(const ojson& v, const std::string& where) {
    if (!v.is_object()) raise(ErrorKind::SchemaError, "'" + where + "' must be an object");
    ArmCounts arm;
    arm.survivors = parse_count(require(v, "survived", where + "."), where + ".survived");
    arm.deaths = parse_count(require(v, "died", where + "."), where + ".died");
    return arm;
}

// A rational prints as a JSON number only if the number reads back as the
// same rational; anything else (e.g. 21/31) is kept as a fraction string.
ojson rat_plain(const Rat& q) {
    const double d = to_double(q);
    if (rational_from_shortest_decimal(d) == q) return ojson(d);
    return ojson(exact_string(q));
}

ojson num(const Rat& q) {
    ojson o;
    o["exact"] = exact_string(q);
    o["value"] = to_double(q);
    o["display"] = display_string(q);
    return o;
}

ojson num_opt(const std::optional<Rat>& q) { return q ? num(*q) : ojson(nullptr); }

void check_envelope(const ojson& doc, const char* expected_format) {
    if (!doc.is_object())
        raise(ErrorKind::SchemaError, "top-level value must be an object");
    const std::string format = require_string(doc, "format", "");
    if (format != expected_format)
        raise(ErrorKind::SchemaError,
              "format is '" + format + "', expected '" + std::string(expected_format) + "'");
    const ojson& version = require(doc, "version", "");
    if (!version.is_number_unsigned() || version.get<std::uint64_t>() != 1)
        raise(ErrorKind::SchemaError, "unrecognized document version");
}

} // namespace

StudyProbabilities StudyStratumInput::resolve() const {
    if (probabilities) return *probabilities;
    if (experimental && observational) return from_counts(*experimental, *observational);
    if (experimental) return from_counts(*experimental);
    if (observational) return from_counts(*observational);
    raise(ErrorKind::SchemaError, "stratum '" + label + "' has no data");
}

StudyFile parse_study_file(const std::string& bytes) {
    const ojson doc = parse_json(bytes);
    check_envelope(doc, "study");

    StudyFile out;
    const ojson& strata = require(doc, "strata", "");
    if (!strata.is_array() || strata.empty())
        raise(ErrorKind::SchemaError, "'strata' must be a nonempty array");
    std::set<std::string> labels;
    for (std::size_t i = 0; i < strata.size(); ++i) {
        const std::string where = "strata[" + std::to_string(i) + "]";
        const ojson& s = strata[i];
        if (!s.is_object()) raise(ErrorKind::SchemaError, "'" + where + "' must be an object");
        StudyStratumInput in;
        in.label = require_string(s, "label", where + ".");
        if (in.label.empty()) raise(ErrorKind::ValueError, "'" + where + ".label' is empty");
        if (!labels.insert(in.label).second)
            raise(ErrorKind::SchemaError, "duplicate stratum label '" + in.label + "'");

        if (const ojson* e = find(s, "experimental")) {
            if (!e->is_object())
                raise(ErrorKind::SchemaError, "'" + where + ".experimental' must be an object");
            ExperimentalSummary exp;
            exp.treated = parse_arm(require(*e, "treated", where + ".experimental."),
                                    where + ".experimental.treated");
            exp.control = parse_arm(require(*e, "control", where + ".experimental."),
                                    where + ".experimental.control");
            in.experimental = exp;
        }
        if (const ojson* o = find(s, "observational")) {
            if (!o->is_object())
                raise(ErrorKind::SchemaError, "'" + where + ".observational' must be an object");
            ObservationalSummary obs;
            obs.chose_treatment = parse_arm(require(*o, "chose_treatment", where + ".observational."),
                                            where + ".observational.chose_treatment");
            obs.chose_control = parse_arm(require(*o, "chose_control", where + ".observational."),
                                          where + ".observational.chose_control");
            in.observational = obs;
        }
        if (const ojson* p = find(s, "probabilities")) {
            if (!p->is_object())
                raise(ErrorKind::SchemaError, "'" + where + ".probabilities' must be an object");
            StudyProbabilities sp;
            const std::string base = where + ".probabilities.";
            if (const ojson* v = find(*p, "p_yt")) sp.p_yt = parse_probability(*v, base + "p_yt");
            if (const ojson* v = find(*p, "p_yc")) sp.p_yc = parse_probability(*v, base + "p_yc");
            if (const ojson* v = find(*p, "p_y_given_t"))
                sp.p_y_given_t = parse_probability(*v, base + "p_y_given_t");
            if (const ojson* v = find(*p, "p_y_given_c"))
                sp.p_y_given_c = parse_probability(*v, base + "p_y_given_c");
            if (const ojson* v = find(*p, "p_t")) sp.p_t = parse_probability(*v, base + "p_t");
            if (!sp.p_yt && !sp.p_yc && !sp.p_y_given_t && !sp.p_y_given_c && !sp.p_t)
                raise(ErrorKind::SchemaError, "'" + where + ".probabilities' has no fields");
            sp.validate();
            in.probabilities = sp;
        }
        if (in.counts_form() == in.probabilities.has_value())
            raise(ErrorKind::SchemaError,
                  "'" + where + "' must carry exactly one of counts or probabilities");
        out.strata.push_back(std::move(in));
    }
    return out;
}

namespace {

ojson arm_json(const ArmCounts& a) {
    ojson o;
    o["survived"] = a.survivors;
    o["died"] = a.deaths;
    return o;
}

ojson study_to_json(const StudyFile& doc) {
    ojson j;
    j["format"] = "study";
    j["version"] = doc.version;
    j["strata"] = ojson::array();
    for (const auto& s : doc.strata) {
        ojson js;
        js["label"] = s.label;
        if (s.experimental) {
            ojson e;
            e["treated"] = arm_json(s.experimental->treated);
            e["control"] = arm_json(s.experimental->control);
            js["experimental"] = e;
        }
        if (s.observational) {
            ojson o;
            o["chose_treatment"] = arm_json(s.observational->chose_treatment);
            o["chose_control"] = arm_json(s.observational->chose_control);
            js["observational"] = o;
        }
        if (s.probabilities) {
            ojson p = ojson::object();
            const StudyProbabilities& sp = *s.probabilities;
            if (sp.p_yt) p["p_yt"] = rat_plain(*sp.p_yt);
            if (sp.p_yc) p["p_yc"] = rat_plain(*sp.p_yc);
            if (sp.p_y_given_t) p["p_y_given_t"] = rat_plain(*sp.p_y_given_t);
            if (sp.p_y_given_c) p["p_y_given_c"] = rat_plain(*sp.p_y_given_c);
            if (sp.p_t) p["p_t"] = rat_plain(*sp.p_t);
            js["probabilities"] = p;
        }
        j["strata"].push_back(std::move(js));
    }
    return j;
}

} // namespace

std::string emit_study_file(const StudyFile& doc) { return study_to_json(doc).dump(2) + "\n"; }

ScenarioSpec parse_scenario_file(const std::string& bytes) {
    const ojson doc = parse_json(bytes);
    check_envelope(doc, "scenario");

    ScenarioSpec spec;
    if (const ojson* f = find(doc, "feature")) {
        if (!f->is_string()) raise(ErrorKind::SchemaError, "'feature' must be a string");
        spec.feature = f->get<std::string>();
    }
    if (const ojson* r = find(doc, "rct_treated_fraction"))
        spec.rct_treated_fraction = parse_probability(*r, "rct_treated_fraction");

    const ojson& strata = require(doc, "strata", "");
    if (!strata.is_array() || strata.empty())
        raise(ErrorKind::SchemaError, "'strata' must be a nonempty array");
    static constexpr const char* kTypeKeys[4] = {"benefit", "harm", "always", "doomed"};
    for (std::size_t i = 0; i < strata.size(); ++i) {
        const std::string where = "strata[" + std::to_string(i) + "]";
        const ojson& s = strata[i];
        if (!s.is_object()) raise(ErrorKind::SchemaError, "'" + where + "' must be an object");
        StratumSpec st;
        st.label = require_string(s, "label", where + ".");
        st.weight = parse_probability(require(s, "weight", where + "."), where + ".weight");
        const ojson& mix = require(s, "mix", where + ".");
        const ojson& choice = require(s, "choice", where + ".");
        if (!mix.is_object() || !choice.is_object())
            raise(ErrorKind::SchemaError, "'" + where + "' mix and choice must be objects");
        for (std::size_t r = 0; r < 4; ++r) {
            st.mix[r] = parse_probability(require(mix, kTypeKeys[r], where + ".mix."),
                                          where + ".mix." + kTypeKeys[r]);
            st.choice[r] = parse_probability(require(choice, kTypeKeys[r], where + ".choice."),
                                             where + ".choice." + kTypeKeys[r]);
        }
        spec.strata.push_back(std::move(st));
    }
    spec.validate();
    return spec;
}

std::string emit_scenario_file(const ScenarioSpec& spec) {
    static constexpr const char* kTypeKeys[4] = {"benefit", "harm", "always", "doomed"};
    ojson j;
    j["format"] = "scenario";
    j["version"] = 1;
    j["feature"] = spec.feature;
    j["rct_treated_fraction"] = rat_plain(spec.rct_treated_fraction);
    j["strata"] = ojson::array();
    for (const auto& s : spec.strata) {
        ojson js;
        js["label"] = s.label;
        js["weight"] = rat_plain(s.weight);
        ojson mix, choice;
        for (std::size_t r = 0; r < 4; ++r) {
            mix[kTypeKeys[r]] = rat_plain(s.mix[r]);
            choice[kTypeKeys[r]] = rat_plain(s.choice[r]);
        }
        js["mix"] = mix;
        js["choice"] = choice;
        j["strata"].push_back(std::move(js));
    }
    return j.dump(2) + "\n";
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

} // namespace

CohortDataset parse_cohort_csv(const std::string& bytes) {
    CohortDataset out;
    std::istringstream in(bytes);
    std::string line;
    std::size_t line_no = 0;
    std::size_t columns = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields = split_fields(line);
        if (!have_header) {
            if (fields.size() < 3)
                raise(ErrorKind::SchemaError,
                      "header must end with source,exposure,outcome columns");
            const std::size_t n = fields.size();
            if (fields[n - 3] != "source" || fields[n - 2] != "exposure" ||
                fields[n - 1] != "outcome")
                raise(ErrorKind::SchemaError,
                      "header must end with source,exposure,outcome columns");
            out.covariate_names.assign(fields.begin(), fields.end() - 3);
            columns = n;
            have_header = true;
            continue;
        }
        if (fields.size() != columns)
            raise(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                             std::to_string(columns) + " fields, got " +
                                             std::to_string(fields.size()));
        CohortRecord rec;
        rec.covariates.assign(fields.begin(), fields.end() - 3);
        const std::string& source = fields[columns - 3];
        const std::string& exposure = fields[columns - 2];
        const std::string& outcome = fields[columns - 1];
        if (source == "experimental")
            rec.source = Source::Experimental;
        else if (source == "observational")
            rec.source = Source::Observational;
        else
            raise(ErrorKind::ValueError,
                  "line " + std::to_string(line_no) + ": unknown source '" + source + "'");
        if (exposure == "t")
            rec.exposure = Exposure::Treatment;
        else if (exposure == "c")
            rec.exposure = Exposure::Control;
        else
            raise(ErrorKind::ValueError,
                  "line " + std::to_string(line_no) + ": unknown exposure '" + exposure + "'");
        if (outcome == "y")
            rec.outcome_y = true;
        else if (outcome == "y'")
            rec.outcome_y = false;
        else
            raise(ErrorKind::ValueError,
                  "line " + std::to_string(line_no) + ": unknown outcome '" + outcome + "'");
        out.records.push_back(std::move(rec));
    }
    if (!have_header) raise(ErrorKind::ParseError, "document is empty, expected a CSV header");
    return out;
}

std::string emit_cohort_csv(const CohortDataset& cohort) {
    cohort.validate();
    std::string out;
    for (const auto& name : cohort.covariate_names) out += name + ",";
    out += "source,exposure,outcome\n";
    for (const auto& rec : cohort.records) {
        for (const auto& value : rec.covariates) out += value + ",";
        out += std::string(source_name(rec.source)) + "," + exposure_name(rec.exposure) + "," +
               (rec.outcome_y ? "y" : "y'") + "\n";
    }
    return out;
}

std::vector<StratumReport> analyze_study_file(const StudyFile& doc, const AnalysisOptions& options) {
    std::vector<StratumReport> reports;
    bool poolable = doc.strata.size() >= 2;
    ExperimentalSummary pooled_exp;
    ObservationalSummary pooled_obs;
    for (const auto& s : doc.strata) {
        if (s.label == "pooled") poolable = false;
        if (s.experimental && s.observational) {
            reports.push_back(analyze_stratum(*s.experimental, *s.observational, s.label, options));
            pooled_exp.treated.survivors += s.experimental->treated.survivors;
            pooled_exp.treated.deaths += s.experimental->treated.deaths;
            pooled_exp.control.survivors += s.experimental->control.survivors;
            pooled_exp.control.deaths += s.experimental->control.deaths;
            pooled_obs.chose_treatment.survivors += s.observational->chose_treatment.survivors;
            pooled_obs.chose_treatment.deaths += s.observational->chose_treatment.deaths;
            pooled_obs.chose_control.survivors += s.observational->chose_control.survivors;
            pooled_obs.chose_control.deaths += s.observational->chose_control.deaths;
        } else {
            poolable = false;
            StratumReport r = analyze_probabilities(s.resolve(), s.label, options);
            if (s.experimental)
                r.n_experimental = s.experimental->treated.total() + s.experimental->control.total();
            if (s.observational) r.n_observational = s.observational->total();
            reports.push_back(std::move(r));
        }
    }
    if (poolable) reports.push_back(analyze_stratum(pooled_exp, pooled_obs, "pooled", options));
    return reports;
}

namespace {

bool wants(const ReportOptions& options, EvidenceScope scope) {
    return std::find(options.scopes.begin(), options.scopes.end(), scope) != options.scopes.end();
}

ojson bound_json(const std::optional<BoundsResult>& b, bool included) {
    if (!included || !b) return nullptr;
    ojson o;
    o["lower"] = num(b->interval.lower());
    o["upper"] = num(b->interval.upper());
    o["width"] = num(b->interval.width());
    o["point"] = b->interval.is_point();
    o["lower_attained"] = b->lower_attained;
    o["upper_attained"] = b->upper_attained;
    return o;
}

ojson nnt_json(const std::optional<NNTInterval>& n) {
    if (!n) return nullptr;
    ojson o;
    o["lower"] = n->lower ? num(*n->lower) : ojson(nullptr);
    o["upper"] = n->upper ? num(*n->upper) : ojson(nullptr);
    return o;
}

ojson stratum_json(const StratumReport& r, const ReportOptions& options) {
    ojson o;
    o["label"] = r.label;
    if (r.n_experimental || r.n_observational) {
        ojson n;
        n["experimental"] = r.n_experimental;
        n["observational"] = r.n_observational;
        o["n"] = n;
    } else {
        o["n"] = nullptr;
    }

    ojson p;
    p["p_yt"] = num_opt(r.probabilities.p_yt);
    p["p_yc"] = num_opt(r.probabilities.p_yc);
    p["p_y_given_t"] = num_opt(r.probabilities.p_y_given_t);
    p["p_y_given_c"] = num_opt(r.probabilities.p_y_given_c);
    p["p_t"] = num_opt(r.probabilities.p_t);
    p["p_y"] = num_opt(r.p_y);
    if (r.probabilities.has_observational()) {
        const JointCells cells = joint_cells(r.probabilities);
        ojson jc;
        jc["ty"] = num(cells.ty);
        jc["ty_prime"] = num(cells.ty_prime);
        jc["cy"] = num(cells.cy);
        jc["cy_prime"] = num(cells.cy_prime);
        p["joint"] = jc;
    } else {
        p["joint"] = nullptr;
    }
    o["probabilities"] = p;

    if (r.reconciled) {
        ojson observed;
        observed["p_yt"] = num_opt(r.raw_probabilities.p_yt);
        observed["p_yc"] = num_opt(r.raw_probabilities.p_yc);
        o["observed"] = observed;
    } else {
        o["observed"] = nullptr;
    }
    o["reconciled"] = r.reconciled;

    if (r.compatibility) {
        ojson c;
        c["compatible"] = r.compatibility->compatible;
        c["violations"] = ojson::array();
        for (const auto& v : r.compatibility->violations) {
            ojson vj;
            vj["constraint"] = v.constraint;
            vj["slack"] = num(v.slack);
            c["violations"].push_back(std::move(vj));
        }
        o["compatibility"] = c;
    } else {
        o["compatibility"] = nullptr;
    }

    o["ate"] = num_opt(r.cate);

    ojson benefit, harm;
    benefit["combined"] = bound_json(r.benefit_combined, wants(options, EvidenceScope::Combined));
    benefit["experimental"] =
        bound_json(r.benefit_experimental, wants(options, EvidenceScope::ExperimentalOnly));
    benefit["observational"] =
        bound_json(r.benefit_observational, wants(options, EvidenceScope::ObservationalOnly));
    harm["combined"] = bound_json(r.harm_combined, wants(options, EvidenceScope::Combined));
    harm["experimental"] =
        bound_json(r.harm_experimental, wants(options, EvidenceScope::ExperimentalOnly));
    harm["observational"] =
        bound_json(r.harm_observational, wants(options, EvidenceScope::ObservationalOnly));
    ojson bounds;
    bounds["benefit"] = benefit;
    bounds["harm"] = harm;
    o["bounds"] = bounds;

    if (options.include_metrics) {
        if (r.monotonicity) {
            ojson m;
            m["verdict"] = monotonicity_name(r.monotonicity->verdict);
            m["evidence"] = r.monotonicity->evidence;
            m["margin"] = num(r.monotonicity->margin);
            o["monotonicity"] = m;
        } else {
            o["monotonicity"] = nullptr;
        }
        ojson nn;
        nn["corrected"] = nnt_json(r.nnt_corrected);
        nn["experimental"] = nnt_json(r.nnt_experimental);
        nn["classic"] = num_opt(r.nnt_classic);
        o["nnt"] = nn;
        ojson policies = ojson::array();
        for (const auto& pc : r.policy_cases) {
            ojson pj;
            pj["case"] = pc.label;
            pj["benefit"] = num(pc.benefit);
            pj["harm"] = num(pc.harm);
            pj["values"] = ojson::array();
            for (const auto& pv : pc.policies) {
                ojson vj;
                vj["policy"] = pv.policy;
                vj["treated_fraction"] = num(pv.treated_fraction);
                vj["survival"] = num(pv.survival);
                vj["benefit_per_treated"] = num(pv.benefit_per_treated);
                vj["harmed_avoided"] = num(pv.harmed_avoided);
                pj["values"].push_back(std::move(vj));
            }
            policies.push_back(std::move(pj));
        }
        o["policies"] = policies;
    } else {
        o["monotonicity"] = nullptr;
        o["nnt"] = nullptr;
        o["policies"] = ojson::array();
    }
    return o;
}

std::vector<std::string> scope_names(const ReportOptions& options) {
    std::vector<std::string> names;
    for (EvidenceScope s : {EvidenceScope::Combined, EvidenceScope::ExperimentalOnly,
                            EvidenceScope::ObservationalOnly})
        if (wants(options, s)) names.emplace_back(scope_name(s));
    return names;
}

ojson report_header(const char* format, const Provenance& provenance) {
    ojson j;
    j["format"] = format;
    j["version"] = 1;
    ojson tool;
    tool["name"] = kToolName;
    tool["version"] = kToolVersion;
    j["tool"] = tool;
    ojson input;
    input["name"] = provenance.input_name;
    input["digest"] = provenance.input_digest;
    j["input"] = input;
    return j;
}

std::string interval_text(const Interval& iv) {
    if (iv.is_point()) return display_string(iv.lower());
    return "[" + display_string(iv.lower()) + ", " + display_string(iv.upper()) + "]";
}

std::string percent_text(const Rat& q) { return display_string(q * 100) + "%"; }

std::string joined(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string nnt_endpoint_text(const std::optional<Rat>& v) {
    return v ? display_string(*v) : std::string("inf");
}

std::string nnt_text(const NNTInterval& n) {
    if (n.lower && n.upper && *n.lower == *n.upper) return display_string(*n.lower);
    return "[" + nnt_endpoint_text(n.lower) + ", " + nnt_endpoint_text(n.upper) + "]";
}

// Whole persons: a fractional person needed to treat is rounded up.
Rat ceil_rat(const Rat& q) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    auto n = numerator(q);
    auto d = denominator(q);
    return Rat((n + d - 1) / d);
}

void append_bound_lines(std::string& out, const char* quantity,
                        const std::optional<BoundsResult>& combined,
                        const std::optional<BoundsResult>& experimental,
                        const std::optional<BoundsResult>& observational,
                        const ReportOptions& options) {
    struct Row {
        const char* tag;
        const std::optional<BoundsResult>* result;
        bool included;
    };
    const Row rows[] = {
        {"", &combined, wants(options, EvidenceScope::Combined)},
        {" [experimental]", &experimental, wants(options, EvidenceScope::ExperimentalOnly)},
        {" [observational]", &observational, wants(options, EvidenceScope::ObservationalOnly)},
    };
    for (const Row& row : rows) {
        if (!row.included || !row.result->has_value()) continue;
        const BoundsResult& b = **row.result;
        out += "  " + std::string(quantity) + row.tag + ": " + interval_text(b.interval) + "\n";
        out += "    binding: lower = " + joined(b.lower_attained, " | ") + "; upper = " +
               joined(b.upper_attained, " | ") + "\n";
    }
}

void append_prob_line(std::string& out, const char* name, const std::optional<Rat>& v) {
    if (v) out += "  " + std::string(name) + ": " + display_string(*v) + "\n";
}

std::string report_text(const std::vector<const StratumReport*>& sorted,
                        const Provenance& provenance, const ReportOptions& options) {
    std::string out;
    out += "causal effect report\n";
    out += "tool: " + std::string(kToolName) + " " + kToolVersion + "\n";
    out += "input: " + provenance.input_name + "\n";
    out += "digest: " + provenance.input_digest + "\n";
    out += "scopes: " + joined(scope_names(options), ", ") + "\n";
    for (const StratumReport* rp : sorted) {
        const StratumReport& r = *rp;
        out += "\nstratum: " + r.label + "\n";
        if (r.n_experimental || r.n_observational)
            out += "  units: experimental " + std::to_string(r.n_experimental) +
                   ", observational " + std::to_string(r.n_observational) + "\n";
        append_prob_line(out, "P(y_t)", r.probabilities.p_yt);
        append_prob_line(out, "P(y_c)", r.probabilities.p_yc);
        append_prob_line(out, "P(y|t)", r.probabilities.p_y_given_t);
        append_prob_line(out, "P(y|c)", r.probabilities.p_y_given_c);
        append_prob_line(out, "P(t)", r.probabilities.p_t);
        append_prob_line(out, "P(y)", r.p_y);
        if (r.compatibility) {
            if (r.compatibility->compatible) {
                out += "  compatibility: compatible\n";
            } else {
                std::vector<std::string> parts;
                for (const auto& v : r.compatibility->violations)
                    parts.push_back(v.constraint + " fails by " + display_string(v.slack));
                out += "  compatibility: violated (" + joined(parts, "; ") + ")\n";
            }
        }
        if (r.reconciled) {
            out += "  note: observed rates were jointly impossible; P(y_t) and P(y_c) were "
                   "clamped to the compatible region\n";
            if (r.raw_probabilities.p_yt && r.raw_probabilities.p_yc)
                out += "  observed: P(y_t) " + display_string(*r.raw_probabilities.p_yt) +
                       ", P(y_c) " + display_string(*r.raw_probabilities.p_yc) + "\n";
        }
        if (r.cate) out += "  ATE: " + display_string(*r.cate) + "\n";
        append_bound_lines(out, "P(benefit)", r.benefit_combined, r.benefit_experimental,
                           r.benefit_observational, options);
        append_bound_lines(out, "P(harm)", r.harm_combined, r.harm_experimental,
                           r.harm_observational, options);
        if (!options.include_metrics) continue;
        if (r.monotonicity)
            out += "  monotonicity: " + std::string(monotonicity_name(r.monotonicity->verdict)) +
                   " (" + r.monotonicity->evidence + "; margin " +
                   display_string(r.monotonicity->margin) + ")\n";
        if (r.nnt_corrected) {
            out += "  NNT (corrected): " + nnt_text(*r.nnt_corrected) + "\n";
            if (r.nnt_corrected->lower && r.nnt_corrected->upper &&
                *r.nnt_corrected->lower == *r.nnt_corrected->upper)
                out += "  persons needed to treat: " +
                       exact_string(ceil_rat(*r.nnt_corrected->lower)) + "\n";
        }
        if (r.nnt_experimental && r.benefit_combined)
            out += "  NNT (experimental bounds): " + nnt_text(*r.nnt_experimental) + "\n";
        if (r.cate)
            out += "  NNT (classic, 1/ATE): " +
                   (r.nnt_classic ? display_string(*r.nnt_classic)
                                  : std::string("undefined (ATE <= 0)")) +
                   "\n";
        for (const auto& pc : r.policy_cases) {
            out += "  policies (" + pc.label + ", benefit " + display_string(pc.benefit) +
                   ", harm " + display_string(pc.harm) + "):\n";
            for (const auto& pv : pc.policies) {
                out += "    " + pv.policy + ": treated " + percent_text(pv.treated_fraction) +
                       ", survival " + percent_text(pv.survival) + ", benefit per treated " +
                       percent_text(pv.benefit_per_treated) + ", harmed avoided " +
                       percent_text(pv.harmed_avoided) + "\n";
            }
        }
    }
    return out;
}

} // namespace

std::string emit_report(const std::vector<StratumReport>& reports, const Provenance& provenance,
                        const ReportOptions& options, ReportFormat format) {
    if (reports.empty()) raise(ErrorKind::ValueError, "report set is empty");
    std::vector<const StratumReport*> sorted;
    sorted.reserve(reports.size());
    for (const auto& r : reports) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(),
              [](const StratumReport* a, const StratumReport* b) { return a->label < b->label; });

    if (format == ReportFormat::Text) return report_text(sorted, provenance, options);

    ojson j = report_header("report", provenance);
    j["scopes"] = scope_names(options);
    j["strata"] = ojson::array();
    for (const StratumReport* r : sorted) j["strata"].push_back(stratum_json(*r, options));
    return j.dump(2) + "\n";
}

std::string emit_screen_report(const FeatureScreenResult& result, const Provenance& provenance,
                               std::uint64_t min_arm_size, ReportFormat format) {
    const ReportOptions full_options{};
    if (format == ReportFormat::Json) {
        ojson j = report_header("screen", provenance);
        j["min_arm_size"] = min_arm_size;
        j["pooled"] = stratum_json(result.pooled, full_options);
        j["ranking"] = ojson::array();
        for (const auto& v : result.ranking) {
            ojson vj;
            vj["feature"] = v.feature;
            vj["usable"] = v.usable;
            if (v.usable) {
                vj["mean_benefit_width"] = num(v.mean_benefit_width);
                vj["width_reduction"] = num(v.width_reduction);
                vj["separates_harm"] = v.separates_harm;
                vj["strata"] = v.strata;
                vj["skip_reason"] = nullptr;
            } else {
                vj["mean_benefit_width"] = nullptr;
                vj["width_reduction"] = nullptr;
                vj["separates_harm"] = nullptr;
                vj["strata"] = ojson::array();
                vj["skip_reason"] = v.skip_reason;
            }
            j["ranking"].push_back(std::move(vj));
        }
        return j.dump(2) + "\n";
    }

    std::string out;
    out += "feature screen\n";
    out += "tool: " + std::string(kToolName) + " " + kToolVersion + "\n";
    out += "input: " + provenance.input_name + "\n";
    out += "digest: " + provenance.input_digest + "\n";
    out += "minimum arm size: " + std::to_string(min_arm_size) + "\n";
    if (result.pooled.benefit_combined)
        out += "pooled P(benefit): " + interval_text(result.pooled.benefit_combined->interval) +
               " (width " + display_string(result.pooled.benefit_combined->interval.width()) +
               ")\n";
    out += "ranking:\n";
    std::size_t rank = 0;
    for (const auto& v : result.ranking) {
        if (v.usable) {
            ++rank;
            out += "  " + std::to_string(rank) + ". " + v.feature + ": mean width " +
                   display_string(v.mean_benefit_width) + ", reduction " +
                   display_string(v.width_reduction) + ", separates harm: " +
                   (v.separates_harm ? "yes" : "no") + " (strata: " + joined(v.strata, ", ") +
                   ")\n";
        } else {
            out += "  " + v.feature + ": skipped: " + v.skip_reason + "\n";
        }
    }
    return out;
}

std::string emit_sampled_study_file(const SampledStudies& samples,
                                    const std::string& scenario_name) {
    StudyFile doc;
    for (const auto& [label, exp] : samples.experimental_by_stratum) {
        StudyStratumInput s;
        s.label = label;
        s.experimental = exp;
        s.observational = samples.observational_by_stratum.at(label);
        doc.strata.push_back(std::move(s));
    }
    ojson j = study_to_json(doc);
    ojson meta;
    meta["scenario"] = scenario_name;
    meta["seed"] = samples.seed;
    meta["n_experimental"] =
        samples.experimental.treated.total() + samples.experimental.control.total();
    meta["n_observational"] = samples.observational.total();
    j["meta"] = meta;
    return j.dump(2) + "\n";
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string digest_string(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return std::string("fnv1a64:") + buf;
}

} // namespace tpb
