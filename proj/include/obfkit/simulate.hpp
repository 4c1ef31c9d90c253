#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "obfkit/app_model.hpp"
#include "obfkit/name_sequence.hpp"
#include "obfkit/proguard.hpp"

namespace obfkit {

struct SimulationPlan {
    bool rename_classes = false;
    bool rename_methods = false;
    bool rename_fields = false;
    bool overload_aggressively = false;  // requires rename_methods
    bool strip_debug = false;
    bool strip_source = false;
    bool strip_annotations = false;
    AlphabetMode alphabet = AlphabetMode::mixed_case;
    std::vector<KeepRule> keep_rules;
    // Kept for plan-file stability; every choice here is deterministic.
    std::int64_t seed = 0;

    static SimulationPlan full() {
        SimulationPlan plan;
        plan.rename_classes = plan.rename_methods = plan.rename_fields = true;
        plan.overload_aggressively = true;
        plan.strip_debug = plan.strip_source = plan.strip_annotations = true;
        return plan;
    }

    bool identity() const {
        return !rename_classes && !rename_methods && !rename_fields &&
               !overload_aggressively && !strip_debug && !strip_source &&
               !strip_annotations;
    }
};

// old -> new names, for verification and inverse application.
struct RenameMap {
    std::map<std::string, std::string> classes;  // old qualified -> new qualified
    // per OLD qualified class name: "name(params)" -> new name for methods,
    // plain old -> new for fields
    std::map<std::string, std::map<std::string, std::string>> methods;
    std::map<std::string, std::map<std::string, std::string>> fields;
    std::vector<std::string> notes;  // collision skips etc.
};

struct SimulationResult {
    AppModel app;
    RenameMap renames;
};

namespace sim_detail {

inline bool is_structural(const std::string& name) {
    return name == "<init>" || name == "<clinit>";
}

inline std::string method_key(const MethodRecord& m) {
    std::string key = m.name + "(";
    for (std::size_t i = 0; i < m.param_types.size(); ++i) {
        if (i) key += ",";
        key += m.param_types[i];
    }
    return key + ")";
}

inline bool class_kept(const ClassRecord& cls,
                       const std::vector<KeepRule>& rules) {
    return std::any_of(rules.begin(), rules.end(), [&](const KeepRule& r) {
        return rule_covers_class(r, cls.qualified_name);
    });
}

inline bool member_kept(const ClassRecord& cls, const std::string& member,
                        const std::vector<KeepRule>& rules) {
    return std::any_of(rules.begin(), rules.end(), [&](const KeepRule& r) {
        return rule_covers_member(r, cls.qualified_name, member);
    });
}

// Assign the next sequence names to `to_rename` (sorted), skipping any name
// already reserved by a kept symbol.
inline std::map<std::string, std::string> assign_names(
    const std::vector<std::string>& to_rename, const std::set<std::string>& reserved,
    const RenameAlphabet& alphabet, const std::string& scope,
    std::vector<std::string>& notes) {
    std::map<std::string, std::string> mapping;
    std::size_t index = 0;
    for (const std::string& original : to_rename) {
        std::string candidate = alphabet.nth_name(index++);
        while (reserved.count(candidate)) {
            notes.push_back(scope + ": '" + candidate +
                            "' reserved by kept name, skipped");
            candidate = alphabet.nth_name(index++);
        }
        mapping[original] = candidate;
    }
    return mapping;
}

}  // namespace sim_detail

// Applies ProGuard-style transforms, producing a ground-truth labeled twin of
// the input. Classes are renamed per package in sorted original order; methods
// and fields per class the same way. overload_aggressively reuses the earliest
// generated name across distinct parameter lists.
inline SimulationResult simulate(const AppModel& app, const SimulationPlan& plan) {
    if (plan.overload_aggressively && !plan.rename_methods)
        throw std::invalid_argument(
            "overload_aggressively requires rename_methods");

    SimulationResult result;
    result.app = app;
    const RenameAlphabet alphabet = RenameAlphabet::from_mode(plan.alphabet);

    if (plan.rename_classes) {
        std::map<std::string, std::vector<std::size_t>> by_package;
        for (std::size_t i = 0; i < app.classes.size(); ++i)
            by_package[app.classes[i].package()].push_back(i);
        for (auto& [pkg, indices] : by_package) {
            std::set<std::string> reserved;
            std::vector<std::string> to_rename;
            for (std::size_t i : indices) {
                const ClassRecord& cls = app.classes[i];
                if (sim_detail::class_kept(cls, plan.keep_rules))
                    reserved.insert(cls.simple_name());
                else
                    to_rename.push_back(cls.simple_name());
            }
            std::sort(to_rename.begin(), to_rename.end());
            auto mapping = sim_detail::assign_names(
                to_rename, reserved, alphabet,
                pkg.empty() ? "<default>" : pkg, result.renames.notes);
            for (std::size_t i : indices) {
                const ClassRecord& original = app.classes[i];
                auto it = mapping.find(original.simple_name());
                if (it == mapping.end()) continue;
                std::string renamed =
                    pkg.empty() ? it->second : pkg + "." + it->second;
                result.renames.classes[original.qualified_name] = renamed;
                result.app.classes[i].qualified_name = renamed;
            }
        }
    }

    for (std::size_t i = 0; i < app.classes.size(); ++i) {
        const ClassRecord& original = app.classes[i];
        ClassRecord& target = result.app.classes[i];

        if (plan.rename_fields) {
            std::set<std::string> reserved;
            std::vector<std::string> to_rename;
            std::set<std::string> seen;
            for (const FieldRecord& f : original.fields) {
                if (!seen.insert(f.name).second) continue;
                if (sim_detail::member_kept(original, f.name, plan.keep_rules))
                    reserved.insert(f.name);
                else
                    to_rename.push_back(f.name);
            }
            std::sort(to_rename.begin(), to_rename.end());
            auto mapping = sim_detail::assign_names(
                to_rename, reserved, alphabet,
                original.qualified_name + " fields", result.renames.notes);
            for (FieldRecord& f : target.fields) {
                auto it = mapping.find(f.name);
                if (it == mapping.end()) continue;
                result.renames.fields[original.qualified_name][f.name] = it->second;
                f.name = it->second;
            }
        }

        if (plan.rename_methods) {
            std::set<std::string> reserved;
            for (const MethodRecord& m : original.methods)
                if (!sim_detail::is_structural(m.name) &&
                    sim_detail::member_kept(original, m.name, plan.keep_rules))
                    reserved.insert(m.name);

            if (plan.overload_aggressively) {
                // Greedy per method in sorted order: the earliest generated
                // name not yet holding this parameter list.
                std::vector<std::size_t> order;
                for (std::size_t m = 0; m < original.methods.size(); ++m)
                    if (!sim_detail::is_structural(original.methods[m].name) &&
                        !reserved.count(original.methods[m].name))
                        order.push_back(m);
                std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                    return sim_detail::method_key(original.methods[a]) <
                           sim_detail::method_key(original.methods[b]);
                });
                std::map<std::string, std::set<std::vector<std::string>>> used;
                for (std::size_t m : order) {
                    const MethodRecord& method = original.methods[m];
                    for (std::size_t n = 0;; ++n) {
                        std::string candidate = alphabet.nth_name(n);
                        if (reserved.count(candidate)) continue;
                        auto& sigs = used[candidate];
                        if (sigs.count(method.param_types)) continue;
                        sigs.insert(method.param_types);
                        result.renames
                            .methods[original.qualified_name]
                                    [sim_detail::method_key(method)] = candidate;
                        target.methods[m].name = candidate;
                        break;
                    }
                }
            } else {
                std::vector<std::string> to_rename;
                std::set<std::string> seen;
                for (const MethodRecord& m : original.methods) {
                    if (sim_detail::is_structural(m.name)) continue;
                    if (!seen.insert(m.name).second) continue;
                    if (!reserved.count(m.name)) to_rename.push_back(m.name);
                }
                std::sort(to_rename.begin(), to_rename.end());
                auto mapping = sim_detail::assign_names(
                    to_rename, reserved, alphabet,
                    original.qualified_name + " methods", result.renames.notes);
                for (std::size_t m = 0; m < target.methods.size(); ++m) {
                    auto it = mapping.find(original.methods[m].name);
                    if (it == mapping.end()) continue;
                    result.renames
                        .methods[original.qualified_name]
                                [sim_detail::method_key(original.methods[m])] =
                        it->second;
                    target.methods[m].name = it->second;
                }
            }
        }

        if (plan.strip_debug)
            for (MethodRecord& m : target.methods) m.has_line_numbers = false;
        if (plan.strip_source) target.source_file.reset();
        if (plan.strip_annotations) target.annotations_present = false;
    }
    return result;
}

// --- labeled evaluation corpus -------------------------------------------------

// The seven features the evaluation scores, in reporting order.
enum class EvalFeature {
    class_names,
    method_names,
    field_names,
    overloading,
    debug_removed,
    source_removed,
    annotations_removed,
};

inline const std::vector<EvalFeature>& all_eval_features() {
    static const std::vector<EvalFeature> features = {
        EvalFeature::class_names,   EvalFeature::method_names,
        EvalFeature::field_names,   EvalFeature::overloading,
        EvalFeature::debug_removed, EvalFeature::source_removed,
        EvalFeature::annotations_removed,
    };
    return features;
}

inline std::string to_string(EvalFeature f) {
    switch (f) {
        case EvalFeature::class_names: return "class_name_obfuscation";
        case EvalFeature::method_names: return "method_name_obfuscation";
        case EvalFeature::field_names: return "field_name_obfuscation";
        case EvalFeature::overloading: return "method_name_overloading";
        case EvalFeature::debug_removed: return "debug_information_removed";
        case EvalFeature::source_removed: return "source_files_removed";
        case EvalFeature::annotations_removed: return "annotations_removed";
    }
    return "unknown";
}

inline std::string describe(EvalFeature f) {
    switch (f) {
        case EvalFeature::class_names: return "Class name obfuscation";
        case EvalFeature::method_names: return "Method name obfuscation";
        case EvalFeature::field_names: return "Field name obfuscation";
        case EvalFeature::overloading: return "Method name overloading";
        case EvalFeature::debug_removed: return "Debug information removed";
        case EvalFeature::source_removed: return "Source files removed";
        case EvalFeature::annotations_removed: return "Annotations removed";
    }
    return "unknown";
}

using FeatureLabels = std::map<EvalFeature, bool>;

struct LabeledModel {
    AppModel model;
    FeatureLabels labels;
};

inline FeatureLabels labels_for_plan(const SimulationPlan& plan) {
    return {
        {EvalFeature::class_names, plan.rename_classes},
        {EvalFeature::method_names, plan.rename_methods},
        {EvalFeature::field_names, plan.rename_fields},
        {EvalFeature::overloading, plan.overload_aggressively},
        {EvalFeature::debug_removed, plan.strip_debug},
        {EvalFeature::source_removed, plan.strip_source},
        {EvalFeature::annotations_removed, plan.strip_annotations},
    };
}

inline FeatureLabels negative_labels() {
    FeatureLabels labels;
    for (EvalFeature f : all_eval_features()) labels[f] = false;
    return labels;
}

// Two labeled models per input: the untouched original (all-negative) and the
// simulated twin labeled by the plan.
inline std::vector<LabeledModel> make_eval_corpus(
    const std::vector<AppModel>& apps, const SimulationPlan& plan) {
    std::vector<LabeledModel> corpus;
    corpus.reserve(apps.size() * 2);
    FeatureLabels positive = labels_for_plan(plan);
    for (const AppModel& app : apps) {
        LabeledModel original{app, negative_labels()};
        original.model.app_id = app.app_id + ":original";
        corpus.push_back(std::move(original));

        LabeledModel simulated{simulate(app, plan).app, positive};
        simulated.model.app_id = app.app_id + ":simulated";
        corpus.push_back(std::move(simulated));
    }
    return corpus;
}

}  // namespace obfkit
