#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "obfkit/report.hpp"
#include "obfkit/simulate.hpp"

namespace obfkit {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + tn + fp + fn; }

    void add(bool predicted, bool actual) {
        if (predicted && actual) ++tp;
        else if (!predicted && !actual) ++tn;
        else if (predicted) ++fp;
        else ++fn;
    }

    bool operator==(const ConfusionCounts&) const = default;
};

// Matthews correlation coefficient; 0 by convention when any marginal is empty.
inline double mcc(const ConfusionCounts& c) {
    const double tp = static_cast<double>(c.tp);
    const double tn = static_cast<double>(c.tn);
    const double fp = static_cast<double>(c.fp);
    const double fn = static_cast<double>(c.fn);
    const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
    if (denom == 0.0) return 0.0;
    return (tp * tn - fp * fn) / std::sqrt(denom);
}

struct FeatureScore {
    ConfusionCounts counts;
    double mcc = 0.0;
};

// Per-feature confusion counts + MCC for same-shape prediction/label runs.
inline std::map<EvalFeature, FeatureScore> score(
    const std::vector<FeatureLabels>& predictions,
    const std::vector<FeatureLabels>& labels) {
    if (predictions.size() != labels.size())
        throw std::invalid_argument("prediction/label count mismatch");
    std::map<EvalFeature, FeatureScore> out;
    for (EvalFeature feature : all_eval_features()) out[feature] = {};
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        for (EvalFeature feature : all_eval_features()) {
            auto pit = predictions[i].find(feature);
            auto lit = labels[i].find(feature);
            if (pit == predictions[i].end() || lit == labels[i].end())
                throw std::invalid_argument("prediction/label shape mismatch");
            out[feature].counts.add(pit->second, lit->second);
        }
    }
    for (auto& [feature, entry] : out) entry.mcc = mcc(entry.counts);
    return out;
}

// Detector verdicts (all-packages view) in evaluation shape.
inline FeatureLabels predictions_from_report(const FeatureFlags& view) {
    return {
        {EvalFeature::class_names, view.class_name_obfuscated},
        {EvalFeature::method_names, view.method_name_obfuscated},
        {EvalFeature::field_names, view.field_name_obfuscated},
        {EvalFeature::overloading, view.overloading_detected},
        {EvalFeature::debug_removed, view.debug_info_removed},
        {EvalFeature::source_removed, view.source_files_removed},
        {EvalFeature::annotations_removed, view.annotations_removed},
    };
}

}  // namespace obfkit
