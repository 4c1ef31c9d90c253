#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "obfkit/errors.hpp"

namespace obfkit {

struct MethodRecord {
    std::string name;
    std::vector<std::string> param_types;
    std::string return_type = "void";
    bool has_code = false;
    bool has_line_numbers = false;  // implies has_code

    bool operator==(const MethodRecord&) const = default;
};

struct FieldRecord {
    std::string name;
    std::string type;

    bool operator==(const FieldRecord&) const = default;
};

struct ClassRecord {
    std::string qualified_name;  // dot-separated binary name, e.g. "a.b.C"
    bool is_interface = false;
    std::optional<std::string> source_file;  // absent = stripped
    bool annotations_present = false;
    std::vector<MethodRecord> methods;
    std::vector<FieldRecord> fields;

    // Dot-separated package prefix; empty for the default package.
    std::string package() const {
        auto pos = qualified_name.rfind('.');
        return pos == std::string::npos ? std::string()
                                        : qualified_name.substr(0, pos);
    }

    std::string simple_name() const {
        auto pos = qualified_name.rfind('.');
        return pos == std::string::npos ? qualified_name
                                        : qualified_name.substr(pos + 1);
    }

    bool operator==(const ClassRecord&) const = default;
};

struct AppModel {
    std::string app_id;
    std::optional<std::string> main_package;  // externally supplied metadata
    std::vector<ClassRecord> classes;

    bool operator==(const AppModel&) const = default;
};

// Checks the model invariants, throwing ValidationError with the offending
// path. load_app calls this; frontends and tests can call it directly.
inline void validate(const AppModel& app) {
    if (app.app_id.empty())
        throw ValidationError("app_id must be non-empty", "app_id");
    std::map<std::string_view, std::size_t> seen;
    for (std::size_t i = 0; i < app.classes.size(); ++i) {
        const ClassRecord& cls = app.classes[i];
        const std::string path = "classes[" + std::to_string(i) + "]";
        if (cls.qualified_name.empty())
            throw ValidationError("qualified_name must be non-empty",
                                  path + ".qualified_name");
        auto [it, inserted] = seen.emplace(cls.qualified_name, i);
        if (!inserted)
            throw ValidationError("duplicate class name " + cls.qualified_name,
                                  path + ".qualified_name");
        for (std::size_t m = 0; m < cls.methods.size(); ++m) {
            const MethodRecord& method = cls.methods[m];
            const std::string mpath = path + ".methods[" + std::to_string(m) + "]";
            if (method.name.empty())
                throw ValidationError("method name must be non-empty",
                                      mpath + ".name");
            if (method.has_line_numbers && !method.has_code)
                throw ValidationError("has_line_numbers requires has_code",
                                      mpath + ".has_line_numbers");
            for (std::size_t p = 0; p < method.param_types.size(); ++p)
                if (method.param_types[p].empty())
                    throw ValidationError(
                        "param type must be non-empty",
                        mpath + ".param_types[" + std::to_string(p) + "]");
        }
        for (std::size_t f = 0; f < cls.fields.size(); ++f)
            if (cls.fields[f].name.empty())
                throw ValidationError(
                    "field name must be non-empty",
                    path + ".fields[" + std::to_string(f) + "].name");
    }
}

// Classes grouped by package. Keys are only the packages that directly hold
// classes; subtree queries walk the sorted key range, so intermediate
// packages need no nodes of their own. Holds indices into the source model,
// which must outlive the tree.
class PackageTree {
public:
    explicit PackageTree(const AppModel& app) : app_(&app) {
        for (std::size_t i = 0; i < app.classes.size(); ++i)
            packages_[app.classes[i].package()].push_back(i);
    }

    const AppModel& app() const noexcept { return *app_; }

    // Number of distinct packages holding at least one class.
    std::size_t package_count() const noexcept { return packages_.size(); }

    const std::map<std::string, std::vector<std::size_t>>& packages() const noexcept {
        return packages_;
    }

    const ClassRecord& class_at(std::size_t index) const {
        return app_->classes[index];
    }

    // Packages inside `prefix` (the package itself plus subpackages).
    // Empty prefix selects everything.
    std::vector<std::string> subtree(const std::string& prefix) const {
        std::vector<std::string> out;
        if (prefix.empty()) {
            for (const auto& [pkg, _] : packages_) out.push_back(pkg);
            return out;
        }
        const std::string dotted = prefix + ".";
        for (auto it = packages_.lower_bound(prefix); it != packages_.end(); ++it) {
            if (it->first == prefix || it->first.rfind(dotted, 0) == 0)
                out.push_back(it->first);
            else if (it->first.compare(0, dotted.size(), dotted) > 0)
                break;
        }
        return out;
    }

    std::size_t class_count_in_subtree(const std::string& prefix) const {
        std::size_t total = 0;
        for (const auto& pkg : subtree(prefix))
            total += packages_.at(pkg).size();
        return total;
    }

private:
    const AppModel* app_;
    std::map<std::string, std::vector<std::size_t>> packages_;
};

inline PackageTree build_package_tree(const AppModel& app) {
    return PackageTree(app);
}

}  // namespace obfkit
