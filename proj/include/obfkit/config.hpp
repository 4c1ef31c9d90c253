#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "obfkit/corpus.hpp"
#include "obfkit/detector.hpp"
#include "obfkit/dex.hpp"
#include "obfkit/errors.hpp"
#include "obfkit/evaluate.hpp"
#include "obfkit/json_io.hpp"
#include "obfkit/proguard.hpp"
#include "obfkit/simulate.hpp"

namespace obfkit {

// Single configuration document for detector thresholds, marker lists and
// corpus policy. Every key is optional; absent keys keep their defaults.
struct ToolConfig {
    DetectorConfig detector;
    dex::ToolMarkerConfig markers;
    CorpusOptions corpus;
};

inline AlphabetMode alphabet_mode_from_string(const std::string& s,
                                              const std::string& path) {
    if (s == "lower_case") return AlphabetMode::lower_case;
    if (s == "mixed_case") return AlphabetMode::mixed_case;
    throw ValidationError("unknown alphabet mode '" + s + "'", path);
}

inline ToolConfig config_from_json(const ordered_json& doc) {
    using detail::as_bool;
    using detail::as_count;
    using detail::as_number;
    using detail::as_string;
    ToolConfig config;
    if (!doc.is_object()) throw ValidationError("expected object", "$");

    if (auto it = doc.find("detector"); it != doc.end()) {
        const ordered_json& d = *it;
        if (auto v = d.find("min_scope_size"); v != d.end())
            config.detector.min_scope_size =
                as_count(*v, "$.detector.min_scope_size");
        if (auto v = d.find("match_threshold"); v != d.end()) {
            config.detector.match_threshold =
                as_number(*v, "$.detector.match_threshold");
            if (config.detector.match_threshold <= 0.0 ||
                config.detector.match_threshold > 1.0)
                throw ValidationError("match_threshold must be in (0,1]",
                                      "$.detector.match_threshold");
        }
        if (auto v = d.find("evaluate_annotations"); v != d.end())
            config.detector.evaluate_annotations =
                as_bool(*v, "$.detector.evaluate_annotations");
        if (auto v = d.find("alphabet_modes"); v != d.end()) {
            if (!v->is_array())
                throw ValidationError("expected array", "$.detector.alphabet_modes");
            config.detector.alphabet_modes.clear();
            for (const auto& m : *v)
                config.detector.alphabet_modes.push_back(alphabet_mode_from_string(
                    as_string(m, "$.detector.alphabet_modes[]"),
                    "$.detector.alphabet_modes[]"));
        }
        if (auto v = d.find("windows_keywords"); v != d.end()) {
            if (!v->is_array())
                throw ValidationError("expected array", "$.detector.windows_keywords");
            std::set<std::string> keywords;
            for (const auto& k : *v)
                keywords.insert(as_string(k, "$.detector.windows_keywords[]"));
            config.detector.windows_keywords = WindowsKeywordSet::custom(keywords);
        }
    }
    if (auto it = doc.find("tool_markers"); it != doc.end()) {
        const ordered_json& m = *it;
        if (auto v = m.find("dexprotector"); v != m.end()) {
            config.markers.dexprotector_prefixes.clear();
            for (const auto& p : *v)
                config.markers.dexprotector_prefixes.push_back(
                    as_string(p, "$.tool_markers.dexprotector[]"));
        }
        if (auto v = m.find("bangcle"); v != m.end()) {
            config.markers.bangcle_prefixes.clear();
            for (const auto& p : *v)
                config.markers.bangcle_prefixes.push_back(
                    as_string(p, "$.tool_markers.bangcle[]"));
        }
    }
    if (auto it = doc.find("corpus"); it != doc.end()) {
        const ordered_json& c = *it;
        if (auto v = c.find("scope_depth"); v != c.end())
            config.corpus.scope_max_depth = as_count(*v, "$.corpus.scope_depth");
        if (auto v = c.find("account_bucket_edges"); v != c.end()) {
            if (!v->is_array())
                throw ValidationError("expected array",
                                      "$.corpus.account_bucket_edges");
            config.corpus.account_bucket_edges.clear();
            for (const auto& e : *v)
                config.corpus.account_bucket_edges.push_back(
                    as_count(e, "$.corpus.account_bucket_edges[]"));
        }
        if (auto v = c.find("micro_average_accounts"); v != c.end())
            config.corpus.micro_average_accounts =
                as_bool(*v, "$.corpus.micro_average_accounts");
    }
    return config;
}

inline ToolConfig load_config(const std::string& bytes) {
    return config_from_json(detail::parse_document(bytes));
}

// --- simulation plan ------------------------------------------------------------

inline SimulationPlan plan_from_json(const ordered_json& doc) {
    using detail::as_bool;
    using detail::as_string;
    if (!doc.is_object()) throw ValidationError("expected object", "$");
    SimulationPlan plan;
    auto flag = [&](const char* key, bool& slot) {
        if (auto it = doc.find(key); it != doc.end())
            slot = as_bool(*it, std::string("$.") + key);
    };
    flag("rename_classes", plan.rename_classes);
    flag("rename_methods", plan.rename_methods);
    flag("rename_fields", plan.rename_fields);
    flag("overload_aggressively", plan.overload_aggressively);
    flag("strip_debug", plan.strip_debug);
    flag("strip_source", plan.strip_source);
    flag("strip_annotations", plan.strip_annotations);
    if (auto it = doc.find("alphabet"); it != doc.end())
        plan.alphabet =
            alphabet_mode_from_string(as_string(*it, "$.alphabet"), "$.alphabet");
    if (auto it = doc.find("seed"); it != doc.end()) {
        if (!it->is_number_integer() && !it->is_number_unsigned())
            throw ValidationError("expected integer", "$.seed");
        plan.seed = it->get<std::int64_t>();
    }
    if (auto it = doc.find("keep_rules"); it != doc.end()) {
        if (!it->is_array()) throw ValidationError("expected array", "$.keep_rules");
        std::string text;
        for (const auto& line : *it)
            text += as_string(line, "$.keep_rules[]") + "\n";
        RuleFile rules = parse_rules(text);
        plan.keep_rules = rules.keep_rules;
    }
    if (plan.overload_aggressively && !plan.rename_methods)
        throw ValidationError("overload_aggressively requires rename_methods",
                              "$.overload_aggressively");
    return plan;
}

inline SimulationPlan load_plan(const std::string& bytes) {
    return plan_from_json(detail::parse_document(bytes));
}

// --- grading rubric ----------------------------------------------------------------

inline Rubric rubric_from_json(const ordered_json& doc) {
    using detail::as_string;
    if (!doc.is_object()) throw ValidationError("expected object", "$");
    Rubric rubric;
    auto targets = [&](const char* key, std::vector<RubricTarget>& out) {
        auto it = doc.find(key);
        if (it == doc.end()) return;
        if (!it->is_array())
            throw ValidationError("expected array", std::string("$.") + key);
        std::size_t i = 0;
        for (const auto& jt : *it) {
            const std::string path =
                std::string("$.") + key + "[" + std::to_string(i++) + "]";
            if (!jt.is_object()) throw ValidationError("expected object", path);
            RubricTarget target;
            target.class_name =
                as_string(detail::require(jt, "class", path), path + ".class");
            if (auto m = jt.find("member"); m != jt.end() && !m->is_null())
                target.member = as_string(*m, path + ".member");
            out.push_back(std::move(target));
        }
    };
    targets("must_keep", rubric.must_keep);
    targets("must_obfuscate", rubric.must_obfuscate);
    return rubric;
}

inline Rubric load_rubric(const std::string& bytes) {
    return rubric_from_json(detail::parse_document(bytes));
}

inline ordered_json grade_to_json(const GradeResult& result) {
    ordered_json doc;
    doc["verdict"] = result.correct ? "correct" : "incorrect";
    ordered_json reasons = ordered_json::array();
    for (const GradeReason& r : result.reasons) {
        ordered_json jr;
        jr["code"] = to_string(r.code);
        jr["detail"] = r.detail;
        reasons.push_back(std::move(jr));
    }
    doc["reasons"] = std::move(reasons);
    return doc;
}

// --- labeled-corpus manifest and metrics table ---------------------------------------

inline ordered_json labels_to_json(const FeatureLabels& labels) {
    ordered_json j;
    for (EvalFeature f : all_eval_features()) j[to_string(f)] = labels.at(f);
    return j;
}

inline ordered_json manifest_entry(const std::string& model_path,
                                   const FeatureLabels& labels) {
    ordered_json j;
    j["model_path"] = model_path;
    j["labels"] = labels_to_json(labels);
    return j;
}

inline std::string metrics_to_csv(
    const std::map<EvalFeature, FeatureScore>& scores) {
    std::string out = "Feature,TP,TN,FP,FN,MCC\n";
    for (EvalFeature f : all_eval_features()) {
        const FeatureScore& s = scores.at(f);
        char mcc_buf[32];
        std::snprintf(mcc_buf, sizeof mcc_buf, "%.3f", s.mcc);
        out += describe(f) + "," + std::to_string(s.counts.tp) + "," +
               std::to_string(s.counts.tn) + "," + std::to_string(s.counts.fp) +
               "," + std::to_string(s.counts.fn) + "," + mcc_buf + "\n";
    }
    return out;
}

inline ordered_json metrics_to_json(
    const std::map<EvalFeature, FeatureScore>& scores) {
    ordered_json arr = ordered_json::array();
    for (EvalFeature f : all_eval_features()) {
        const FeatureScore& s = scores.at(f);
        ordered_json j;
        j["feature"] = to_string(f);
        j["tp"] = s.counts.tp;
        j["tn"] = s.counts.tn;
        j["fp"] = s.counts.fp;
        j["fn"] = s.counts.fn;
        j["mcc"] = s.mcc;
        arr.push_back(std::move(j));
    }
    return arr;
}

}  // namespace obfkit
