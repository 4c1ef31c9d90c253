#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace obfkit {

// One detection verdict per obfuscation feature.
struct FeatureFlags {
    bool class_name_obfuscated = false;
    bool method_name_obfuscated = false;
    bool field_name_obfuscated = false;
    bool overloading_detected = false;
    bool debug_info_removed = false;
    bool source_files_removed = false;
    bool annotations_removed = false;
    bool windows_keywords_detected = false;

    bool operator==(const FeatureFlags&) const = default;

    bool any_name_feature() const {
        return class_name_obfuscated || method_name_obfuscated ||
               field_name_obfuscated || overloading_detected;
    }
};

// Per-package verdicts plus the match counts behind them. Entries with
// class_count == 0 are ancestor packages that only carry a package-segment
// scope verdict.
struct PackageFeatures {
    FeatureFlags flags;

    std::size_t class_count = 0;
    std::size_t class_name_matches = 0;
    double class_name_fraction = 0.0;

    std::size_t method_flagged_classes = 0;
    std::size_t method_scoped_classes = 0;
    std::size_t field_flagged_classes = 0;
    std::size_t field_scoped_classes = 0;
    std::size_t overloaded_classes = 0;

    // Child package segment names evaluated as one more rename scope.
    bool package_segment_obfuscated = false;
    std::size_t segment_matches = 0;
    std::size_t segment_count = 0;

    bool operator==(const PackageFeatures&) const = default;
};

struct FeatureReport {
    std::string app_id;
    FeatureFlags all_packages;
    std::optional<FeatureFlags> main_package;  // absent: no code in main package
    std::map<std::string, PackageFeatures> packages;
    std::vector<std::string> windows_keyword_evidence;  // qualified class names

    bool operator==(const FeatureReport&) const = default;
};

}  // namespace obfkit
