#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "obfkit/app_model.hpp"
#include "obfkit/errors.hpp"
#include "obfkit/report.hpp"

namespace obfkit {

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline const ordered_json& require(const ordered_json& obj, const char* key,
                                   const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw ValidationError("missing required key '" + std::string(key) + "'",
                              path);
    return *it;
}

inline std::string as_string(const ordered_json& v, const std::string& path) {
    if (!v.is_string()) throw ValidationError("expected string", path);
    return v.get<std::string>();
}

inline bool as_bool(const ordered_json& v, const std::string& path) {
    if (!v.is_boolean()) throw ValidationError("expected boolean", path);
    return v.get<bool>();
}

inline std::size_t as_count(const ordered_json& v, const std::string& path) {
    if (!v.is_number_unsigned() && !v.is_number_integer())
        throw ValidationError("expected non-negative integer", path);
    auto n = v.get<std::int64_t>();
    if (n < 0) throw ValidationError("expected non-negative integer", path);
    return static_cast<std::size_t>(n);
}

inline double as_number(const ordered_json& v, const std::string& path) {
    if (!v.is_number()) throw ValidationError("expected number", path);
    return v.get<double>();
}

inline ordered_json parse_document(const std::string& bytes) {
    try {
        return ordered_json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte);
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Canonical app JSON (one app per document). Unknown keys are ignored so
// corpora can carry extra metadata.
// ---------------------------------------------------------------------------

inline AppModel app_from_json(const ordered_json& doc) {
    using namespace detail;
    if (!doc.is_object()) throw ValidationError("expected object", "$");
    AppModel app;
    app.app_id = as_string(require(doc, "app_id", "$"), "$.app_id");
    if (auto it = doc.find("main_package"); it != doc.end() && !it->is_null())
        app.main_package = as_string(*it, "$.main_package");
    const ordered_json& classes = require(doc, "classes", "$");
    if (!classes.is_array()) throw ValidationError("expected array", "$.classes");
    app.classes.reserve(classes.size());
    std::size_t ci = 0;
    for (const auto& jc : classes) {
        const std::string cpath = "$.classes[" + std::to_string(ci++) + "]";
        if (!jc.is_object()) throw ValidationError("expected object", cpath);
        ClassRecord cls;
        cls.qualified_name =
            as_string(require(jc, "qualified_name", cpath), cpath + ".qualified_name");
        if (auto it = jc.find("is_interface"); it != jc.end())
            cls.is_interface = as_bool(*it, cpath + ".is_interface");
        if (auto it = jc.find("source_file"); it != jc.end() && !it->is_null())
            cls.source_file = as_string(*it, cpath + ".source_file");
        if (auto it = jc.find("annotations_present"); it != jc.end())
            cls.annotations_present = as_bool(*it, cpath + ".annotations_present");
        if (auto it = jc.find("methods"); it != jc.end()) {
            if (!it->is_array())
                throw ValidationError("expected array", cpath + ".methods");
            std::size_t mi = 0;
            for (const auto& jm : *it) {
                const std::string mpath =
                    cpath + ".methods[" + std::to_string(mi++) + "]";
                if (!jm.is_object()) throw ValidationError("expected object", mpath);
                MethodRecord m;
                m.name = as_string(require(jm, "name", mpath), mpath + ".name");
                if (auto pit = jm.find("param_types"); pit != jm.end()) {
                    if (!pit->is_array())
                        throw ValidationError("expected array", mpath + ".param_types");
                    std::size_t pi = 0;
                    for (const auto& jp : *pit)
                        m.param_types.push_back(as_string(
                            jp, mpath + ".param_types[" + std::to_string(pi++) + "]"));
                }
                if (auto rit = jm.find("return_type"); rit != jm.end())
                    m.return_type = as_string(*rit, mpath + ".return_type");
                if (auto hit = jm.find("has_code"); hit != jm.end())
                    m.has_code = as_bool(*hit, mpath + ".has_code");
                if (auto lit = jm.find("has_line_numbers"); lit != jm.end())
                    m.has_line_numbers = as_bool(*lit, mpath + ".has_line_numbers");
                cls.methods.push_back(std::move(m));
            }
        }
        if (auto it = jc.find("fields"); it != jc.end()) {
            if (!it->is_array())
                throw ValidationError("expected array", cpath + ".fields");
            std::size_t fi = 0;
            for (const auto& jf : *it) {
                const std::string fpath =
                    cpath + ".fields[" + std::to_string(fi++) + "]";
                if (!jf.is_object()) throw ValidationError("expected object", fpath);
                FieldRecord f;
                f.name = as_string(require(jf, "name", fpath), fpath + ".name");
                if (auto tit = jf.find("type"); tit != jf.end())
                    f.type = as_string(*tit, fpath + ".type");
                cls.fields.push_back(std::move(f));
            }
        }
        app.classes.push_back(std::move(cls));
    }
    validate(app);
    return app;
}

inline AppModel load_app(const std::string& bytes) {
    return app_from_json(detail::parse_document(bytes));
}

inline ordered_json app_to_json(const AppModel& app) {
    ordered_json doc;
    doc["app_id"] = app.app_id;
    doc["main_package"] =
        app.main_package ? ordered_json(*app.main_package) : ordered_json(nullptr);
    ordered_json classes = ordered_json::array();
    for (const ClassRecord& cls : app.classes) {
        ordered_json jc;
        jc["qualified_name"] = cls.qualified_name;
        jc["is_interface"] = cls.is_interface;
        jc["source_file"] =
            cls.source_file ? ordered_json(*cls.source_file) : ordered_json(nullptr);
        jc["annotations_present"] = cls.annotations_present;
        ordered_json methods = ordered_json::array();
        for (const MethodRecord& m : cls.methods) {
            ordered_json jm;
            jm["name"] = m.name;
            jm["param_types"] = m.param_types;
            jm["return_type"] = m.return_type;
            jm["has_code"] = m.has_code;
            jm["has_line_numbers"] = m.has_line_numbers;
            methods.push_back(std::move(jm));
        }
        jc["methods"] = std::move(methods);
        ordered_json fields = ordered_json::array();
        for (const FieldRecord& f : cls.fields) {
            ordered_json jf;
            jf["name"] = f.name;
            jf["type"] = f.type;
            fields.push_back(std::move(jf));
        }
        jc["fields"] = std::move(fields);
        classes.push_back(std::move(jc));
    }
    doc["classes"] = std::move(classes);
    return doc;
}

inline std::string save_app(const AppModel& app) {
    return app_to_json(app).dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// FeatureReport JSON. All feature booleans are emitted explicitly; a missing
// main package view is an explicit null.
// ---------------------------------------------------------------------------

inline ordered_json flags_to_json(const FeatureFlags& f) {
    ordered_json j;
    j["class_name_obfuscated"] = f.class_name_obfuscated;
    j["method_name_obfuscated"] = f.method_name_obfuscated;
    j["field_name_obfuscated"] = f.field_name_obfuscated;
    j["overloading_detected"] = f.overloading_detected;
    j["debug_info_removed"] = f.debug_info_removed;
    j["source_files_removed"] = f.source_files_removed;
    j["annotations_removed"] = f.annotations_removed;
    j["windows_keywords_detected"] = f.windows_keywords_detected;
    return j;
}

inline FeatureFlags flags_from_json(const ordered_json& j, const std::string& path) {
    using namespace detail;
    FeatureFlags f;
    f.class_name_obfuscated =
        as_bool(require(j, "class_name_obfuscated", path), path + ".class_name_obfuscated");
    f.method_name_obfuscated =
        as_bool(require(j, "method_name_obfuscated", path), path + ".method_name_obfuscated");
    f.field_name_obfuscated =
        as_bool(require(j, "field_name_obfuscated", path), path + ".field_name_obfuscated");
    f.overloading_detected =
        as_bool(require(j, "overloading_detected", path), path + ".overloading_detected");
    f.debug_info_removed =
        as_bool(require(j, "debug_info_removed", path), path + ".debug_info_removed");
    f.source_files_removed =
        as_bool(require(j, "source_files_removed", path), path + ".source_files_removed");
    f.annotations_removed =
        as_bool(require(j, "annotations_removed", path), path + ".annotations_removed");
    f.windows_keywords_detected =
        as_bool(require(j, "windows_keywords_detected", path),
                path + ".windows_keywords_detected");
    return f;
}

inline ordered_json report_to_json(const FeatureReport& report) {
    ordered_json doc;
    doc["app_id"] = report.app_id;
    doc["all_packages"] = flags_to_json(report.all_packages);
    doc["main_package"] = report.main_package
                              ? flags_to_json(*report.main_package)
                              : ordered_json(nullptr);
    ordered_json packages = ordered_json::object();
    for (const auto& [pkg, detail] : report.packages) {
        ordered_json jp = flags_to_json(detail.flags);
        jp["class_count"] = detail.class_count;
        jp["class_name_matches"] = detail.class_name_matches;
        jp["class_name_fraction"] = detail.class_name_fraction;
        jp["method_flagged_classes"] = detail.method_flagged_classes;
        jp["method_scoped_classes"] = detail.method_scoped_classes;
        jp["field_flagged_classes"] = detail.field_flagged_classes;
        jp["field_scoped_classes"] = detail.field_scoped_classes;
        jp["overloaded_classes"] = detail.overloaded_classes;
        jp["package_segment_obfuscated"] = detail.package_segment_obfuscated;
        jp["segment_matches"] = detail.segment_matches;
        jp["segment_count"] = detail.segment_count;
        packages[pkg] = std::move(jp);
    }
    doc["packages"] = std::move(packages);
    doc["windows_keyword_evidence"] = report.windows_keyword_evidence;
    return doc;
}

inline FeatureReport report_from_json(const ordered_json& doc) {
    using namespace detail;
    if (!doc.is_object()) throw ValidationError("expected object", "$");
    FeatureReport report;
    report.app_id = as_string(require(doc, "app_id", "$"), "$.app_id");
    report.all_packages =
        flags_from_json(require(doc, "all_packages", "$"), "$.all_packages");
    const ordered_json& main = require(doc, "main_package", "$");
    if (!main.is_null())
        report.main_package = flags_from_json(main, "$.main_package");
    const ordered_json& packages = require(doc, "packages", "$");
    if (!packages.is_object()) throw ValidationError("expected object", "$.packages");
    for (auto it = packages.begin(); it != packages.end(); ++it) {
        const std::string ppath = "$.packages." + it.key();
        const ordered_json& jp = *it;
        PackageFeatures detail;
        detail.flags = flags_from_json(jp, ppath);
        detail.class_count = as_count(require(jp, "class_count", ppath),
                                      ppath + ".class_count");
        detail.class_name_matches =
            as_count(require(jp, "class_name_matches", ppath),
                     ppath + ".class_name_matches");
        detail.class_name_fraction =
            as_number(require(jp, "class_name_fraction", ppath),
                      ppath + ".class_name_fraction");
        detail.method_flagged_classes =
            as_count(require(jp, "method_flagged_classes", ppath),
                     ppath + ".method_flagged_classes");
        detail.method_scoped_classes =
            as_count(require(jp, "method_scoped_classes", ppath),
                     ppath + ".method_scoped_classes");
        detail.field_flagged_classes =
            as_count(require(jp, "field_flagged_classes", ppath),
                     ppath + ".field_flagged_classes");
        detail.field_scoped_classes =
            as_count(require(jp, "field_scoped_classes", ppath),
                     ppath + ".field_scoped_classes");
        detail.overloaded_classes =
            as_count(require(jp, "overloaded_classes", ppath),
                     ppath + ".overloaded_classes");
        detail.package_segment_obfuscated =
            as_bool(require(jp, "package_segment_obfuscated", ppath),
                    ppath + ".package_segment_obfuscated");
        detail.segment_matches = as_count(require(jp, "segment_matches", ppath),
                                          ppath + ".segment_matches");
        detail.segment_count = as_count(require(jp, "segment_count", ppath),
                                        ppath + ".segment_count");
        report.packages.emplace(it.key(), std::move(detail));
    }
    if (auto it = doc.find("windows_keyword_evidence"); it != doc.end()) {
        if (!it->is_array())
            throw ValidationError("expected array", "$.windows_keyword_evidence");
        for (const auto& e : *it)
            report.windows_keyword_evidence.push_back(
                as_string(e, "$.windows_keyword_evidence[]"));
    }
    return report;
}

inline std::string save_report(const FeatureReport& report) {
    return report_to_json(report).dump(2) + "\n";
}

inline FeatureReport load_report(const std::string& bytes) {
    return report_from_json(detail::parse_document(bytes));
}

}  // namespace obfkit
