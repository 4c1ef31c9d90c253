#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "obfkit/app_model.hpp"
#include "obfkit/name_sequence.hpp"
#include "obfkit/report.hpp"

namespace obfkit {

struct DetectorConfig {
    // Scopes smaller than this get no verdict and count as unflagged.
    std::size_t min_scope_size = 3;
    // A scope is flagged when at least this fraction of its names matches
    // the generated prefix; also the flagged-class fraction needed to flag
    // a package for member features.
    double match_threshold = 0.5;
    // Annotation removal has a known false-positive mode on apps that never
    // had annotations; corpus aggregation ignores it regardless.
    bool evaluate_annotations = true;
    std::vector<AlphabetMode> alphabet_modes = {AlphabetMode::lower_case,
                                                AlphabetMode::mixed_case};
    WindowsKeywordSet windows_keywords = WindowsKeywordSet::standard();
};

struct ScopeMatch {
    bool flagged = false;
    std::size_t matches = 0;
    double fraction = 0.0;
};

namespace detail {

inline bool has_single_uppercase_name(const std::set<std::string>& names) {
    for (const auto& n : names)
        if (n.size() == 1 && n[0] >= 'A' && n[0] <= 'Z') return true;
    return false;
}

// Best match fraction over the configured alphabet modes. The mixed-case
// alphabet is only attempted when the scope shows mixed-case evidence
// (a single uppercase-letter name); otherwise the lower-case sequence governs.
inline ScopeMatch match_name_scope(const std::set<std::string>& names,
                                   const DetectorConfig& cfg) {
    ScopeMatch result;
    if (names.empty() || names.size() < cfg.min_scope_size) return result;
    const bool mixed_evidence = has_single_uppercase_name(names);
    for (AlphabetMode mode : cfg.alphabet_modes) {
        if (mode == AlphabetMode::mixed_case && !mixed_evidence) continue;
        auto alphabet = RenameAlphabet::from_mode(mode);
        std::size_t hits = match_scope_count(names, alphabet);
        result.matches = std::max(result.matches, hits);
        result.fraction = std::max(
            result.fraction,
            static_cast<double>(hits) / static_cast<double>(names.size()));
    }
    result.flagged = result.fraction >= cfg.match_threshold;
    return result;
}

// Union of the first-k prefixes over the configured modes, used for
// pattern-consistency checks (overloading).
inline std::set<std::string> pattern_names(std::size_t k,
                                           const DetectorConfig& cfg,
                                           bool mixed_evidence) {
    std::set<std::string> out;
    for (AlphabetMode mode : cfg.alphabet_modes) {
        if (mode == AlphabetMode::mixed_case && !mixed_evidence) continue;
        auto alphabet = RenameAlphabet::from_mode(mode);
        for (std::size_t i = 0; i < k; ++i) out.insert(alphabet.nth_name(i));
    }
    return out;
}

inline bool is_structural_method(const std::string& name) {
    return name == "<init>" || name == "<clinit>";
}

inline std::set<std::string> method_name_scope(const ClassRecord& cls) {
    std::set<std::string> names;
    for (const MethodRecord& m : cls.methods)
        if (!is_structural_method(m.name)) names.insert(m.name);
    return names;
}

inline std::set<std::string> field_name_scope(const ClassRecord& cls) {
    std::set<std::string> names;
    for (const FieldRecord& f : cls.fields) names.insert(f.name);
    return names;
}

}  // namespace detail

// --- individual heuristics --------------------------------------------------

// Class-name scope per package: the simple names of a package's classes,
// compared against the simulated rename sequence.
inline std::map<std::string, ScopeMatch> detect_class_names(
    const PackageTree& tree, const DetectorConfig& cfg) {
    std::map<std::string, ScopeMatch> out;
    for (const auto& [pkg, indices] : tree.packages()) {
        std::set<std::string> names;
        for (std::size_t i : indices) names.insert(tree.class_at(i).simple_name());
        out[pkg] = detail::match_name_scope(names, cfg);
    }
    return out;
}

struct MemberVerdict {
    bool method_flagged = false;
    bool field_flagged = false;
    bool method_scoped = false;  // class had a judgeable method scope
    bool field_scoped = false;
};

// Method/field name scopes per class. Constructors and static initializers
// are fixed by the container format and never renamed, so they stay out of
// the method scope.
inline std::map<std::string, MemberVerdict> detect_member_names(
    const PackageTree& tree, const DetectorConfig& cfg) {
    std::map<std::string, MemberVerdict> out;
    for (const auto& [pkg, indices] : tree.packages()) {
        for (std::size_t i : indices) {
            const ClassRecord& cls = tree.class_at(i);
            MemberVerdict verdict;
            auto methods = detail::method_name_scope(cls);
            if (!methods.empty()) {
                verdict.method_scoped = true;
                verdict.method_flagged =
                    detail::match_name_scope(methods, cfg).flagged;
            }
            auto fields = detail::field_name_scope(cls);
            if (!fields.empty()) {
                verdict.field_scoped = true;
                verdict.field_flagged =
                    detail::match_name_scope(fields, cfg).flagged;
            }
            out[cls.qualified_name] = verdict;
        }
    }
    return out;
}

// A class shows overloading when a pattern-consistent method name is shared
// by methods with different parameter lists. No minimum scope: one reused
// generated name is already strong evidence.
inline std::map<std::string, bool> detect_overloading(const PackageTree& tree,
                                                      const DetectorConfig& cfg) {
    std::map<std::string, bool> out;
    for (const auto& [pkg, indices] : tree.packages()) {
        for (std::size_t i : indices) {
            const ClassRecord& cls = tree.class_at(i);
            auto names = detail::method_name_scope(cls);
            bool flagged = false;
            if (!names.empty()) {
                auto pattern = detail::pattern_names(
                    names.size(), cfg, detail::has_single_uppercase_name(names));
                std::map<std::string, std::set<std::vector<std::string>>> sigs;
                for (const MethodRecord& m : cls.methods) {
                    if (detail::is_structural_method(m.name)) continue;
                    if (!pattern.count(m.name)) continue;
                    auto& seen = sigs[m.name];
                    seen.insert(m.param_types);
                    if (seen.size() >= 2) {
                        flagged = true;
                        break;
                    }
                }
            }
            out[cls.qualified_name] = flagged;
        }
    }
    return out;
}

struct StrippingVerdict {
    bool debug_info_removed = false;
    bool source_files_removed = false;
    bool annotations_removed = false;
};

inline std::map<std::string, StrippingVerdict> detect_stripping(
    const PackageTree& tree, const DetectorConfig& cfg) {
    std::map<std::string, StrippingVerdict> out;
    for (const auto& [pkg, indices] : tree.packages()) {
        StrippingVerdict v;
        std::size_t coded_methods = 0;
        bool any_line_numbers = false;
        bool any_source_file = false;
        bool any_annotations = false;
        for (std::size_t i : indices) {
            const ClassRecord& cls = tree.class_at(i);
            for (const MethodRecord& m : cls.methods) {
                if (!m.has_code) continue;
                ++coded_methods;
                if (m.has_line_numbers) any_line_numbers = true;
            }
            if (cls.source_file) any_source_file = true;
            if (cls.annotations_present) any_annotations = true;
        }
        v.debug_info_removed = coded_methods > 0 && !any_line_numbers;
        v.source_files_removed = !any_source_file;
        v.annotations_removed = cfg.evaluate_annotations && !any_annotations;
        out[pkg] = v;
    }
    return out;
}

struct WindowsKeywordResult {
    bool detected = false;
    std::vector<std::string> evidence;  // qualified class names
};

inline WindowsKeywordResult detect_windows_keywords(
    const PackageTree& tree,
    const WindowsKeywordSet& keywords = WindowsKeywordSet::standard()) {
    WindowsKeywordResult out;
    for (const auto& [pkg, indices] : tree.packages())
        for (std::size_t i : indices) {
            const ClassRecord& cls = tree.class_at(i);
            if (is_windows_keyword(cls.simple_name(), keywords))
                out.evidence.push_back(cls.qualified_name);
        }
    std::sort(out.evidence.begin(), out.evidence.end());
    out.detected = !out.evidence.empty();
    return out;
}

// --- composed analysis -------------------------------------------------------

namespace detail {

inline FeatureFlags or_flags(FeatureFlags a, const FeatureFlags& b) {
    a.class_name_obfuscated |= b.class_name_obfuscated;
    a.method_name_obfuscated |= b.method_name_obfuscated;
    a.field_name_obfuscated |= b.field_name_obfuscated;
    a.overloading_detected |= b.overloading_detected;
    a.debug_info_removed |= b.debug_info_removed;
    a.source_files_removed |= b.source_files_removed;
    a.annotations_removed |= b.annotations_removed;
    a.windows_keywords_detected |= b.windows_keywords_detected;
    return a;
}

inline bool in_subtree(const std::string& pkg, const std::string& prefix) {
    if (pkg == prefix) return true;
    return pkg.size() > prefix.size() && pkg.rfind(prefix + ".", 0) == 0;
}

}  // namespace detail

inline FeatureReport analyze(const AppModel& app,
                             const DetectorConfig& cfg = {}) {
    PackageTree tree(app);
    FeatureReport report;
    report.app_id = app.app_id;

    auto class_matches = detect_class_names(tree, cfg);
    auto member_verdicts = detect_member_names(tree, cfg);
    auto overloading = detect_overloading(tree, cfg);
    auto stripping = detect_stripping(tree, cfg);
    auto windows = detect_windows_keywords(tree, cfg.windows_keywords);
    report.windows_keyword_evidence = windows.evidence;

    for (const auto& [pkg, indices] : tree.packages()) {
        PackageFeatures detail;
        detail.class_count = indices.size();
        const ScopeMatch& cm = class_matches.at(pkg);
        detail.flags.class_name_obfuscated = cm.flagged;
        detail.class_name_matches = cm.matches;
        detail.class_name_fraction = cm.fraction;

        for (std::size_t i : indices) {
            const ClassRecord& cls = tree.class_at(i);
            const MemberVerdict& mv = member_verdicts.at(cls.qualified_name);
            if (mv.method_scoped) ++detail.method_scoped_classes;
            if (mv.method_flagged) ++detail.method_flagged_classes;
            if (mv.field_scoped) ++detail.field_scoped_classes;
            if (mv.field_flagged) ++detail.field_flagged_classes;
            if (overloading.at(cls.qualified_name)) ++detail.overloaded_classes;
            if (is_windows_keyword(cls.simple_name(), cfg.windows_keywords))
                detail.flags.windows_keywords_detected = true;
        }
        detail.flags.method_name_obfuscated =
            detail.method_scoped_classes > 0 &&
            static_cast<double>(detail.method_flagged_classes) /
                    static_cast<double>(detail.method_scoped_classes) >=
                cfg.match_threshold;
        detail.flags.field_name_obfuscated =
            detail.field_scoped_classes > 0 &&
            static_cast<double>(detail.field_flagged_classes) /
                    static_cast<double>(detail.field_scoped_classes) >=
                cfg.match_threshold;
        detail.flags.overloading_detected = detail.overloaded_classes > 0;

        const StrippingVerdict& sv = stripping.at(pkg);
        detail.flags.debug_info_removed = sv.debug_info_removed;
        detail.flags.source_files_removed = sv.source_files_removed;
        detail.flags.annotations_removed = sv.annotations_removed;

        report.packages.emplace(pkg, std::move(detail));
    }

    // Package-segment names evaluated as one more rename scope; recorded on
    // the parent package's detail entry (created if it holds no classes).
    std::map<std::string, std::set<std::string>> child_segments;
    for (const auto& [pkg, _] : tree.packages()) {
        if (pkg.empty()) continue;
        std::string path;
        std::size_t start = 0;
        while (true) {
            std::size_t dot = pkg.find('.', start);
            std::string segment = pkg.substr(start, dot - start);
            child_segments[path].insert(segment);
            if (dot == std::string::npos) break;
            path = path.empty() ? segment : path + "." + segment;
            start = dot + 1;
        }
    }
    for (const auto& [parent, segments] : child_segments) {
        if (segments.size() < cfg.min_scope_size) continue;
        ScopeMatch match = detail::match_name_scope(segments, cfg);
        PackageFeatures& entry = report.packages[parent];
        entry.package_segment_obfuscated = match.flagged;
        entry.segment_matches = match.matches;
        entry.segment_count = segments.size();
    }

    for (const auto& [pkg, detail] : report.packages)
        report.all_packages = detail::or_flags(report.all_packages, detail.flags);

    if (app.main_package) {
        FeatureFlags main;
        bool any = false;
        for (const auto& [pkg, detail] : report.packages) {
            if (detail.class_count == 0) continue;
            if (!detail::in_subtree(pkg, *app.main_package)) continue;
            any = true;
            main = detail::or_flags(main, detail.flags);
        }
        if (any) report.main_package = main;
    }
    return report;
}

}  // namespace obfkit
