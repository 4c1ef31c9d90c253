#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "obfkit/app_model.hpp"
#include "obfkit/errors.hpp"

namespace obfkit {

// --- Gradle activation snippet ----------------------------------------------

struct BuildConfig {
    std::string build_type;
    bool minify_enabled = false;
    std::vector<std::string> proguard_files;

    bool operator==(const BuildConfig&) const = default;
};

struct GradleBuildFile {
    std::vector<BuildConfig> build_types;

    const BuildConfig* find(const std::string& type) const {
        for (const auto& b : build_types)
            if (b.build_type == type) return &b;
        return nullptr;
    }

    bool operator==(const GradleBuildFile&) const = default;
};

namespace pg_detail {

struct Token {
    std::string text;
    std::size_t line = 0;
};

inline std::vector<Token> tokenize_gradle(const std::string& text) {
    std::vector<Token> tokens;
    std::size_t line = 1;
    std::string word;
    auto flush = [&] {
        if (!word.empty()) {
            tokens.push_back({word, line});
            word.clear();
        }
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '\n') {
            flush();
            ++line;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else if (c == '{' || c == '}') {
            flush();
            tokens.push_back({std::string(1, c), line});
        } else if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            flush();
            while (i < text.size() && text[i] != '\n') ++i;
            --i;
        } else {
            word += c;
        }
    }
    flush();
    return tokens;
}

// 'proguard-rules.pro' or getDefaultProguardFile('proguard-android.txt') or a
// bare file name; trailing commas stripped.
inline std::optional<std::string> extract_file_arg(std::string token) {
    while (!token.empty() && token.back() == ',') token.pop_back();
    if (token.empty()) return std::nullopt;
    auto first = token.find_first_of("'\"");
    if (first != std::string::npos) {
        auto last = token.find_last_of("'\"");
        if (last > first + 1) return token.substr(first + 1, last - first - 1);
        return std::nullopt;
    }
    return token;
}

}  // namespace pg_detail

// Tolerant brace-matching scan of a buildTypes block: any block that assigns
// minifyEnabled or proguardFiles is taken as a build type.
inline GradleBuildFile parse_gradle_snippet(const std::string& text) {
    auto tokens = pg_detail::tokenize_gradle(text);
    GradleBuildFile out;
    std::vector<pg_detail::Token> block_stack;
    std::string pending_block_name;

    auto config_for = [&](const std::string& type) -> BuildConfig& {
        for (auto& b : out.build_types)
            if (b.build_type == type) return b;
        out.build_types.push_back(BuildConfig{type, false, {}});
        return out.build_types.back();
    };

    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto& tok = tokens[i];
        if (tok.text == "{") {
            block_stack.push_back({pending_block_name, tok.line});
            pending_block_name.clear();
        } else if (tok.text == "}") {
            if (block_stack.empty())
                throw ParseError("unbalanced '}' in Gradle snippet", std::nullopt,
                                 "line " + std::to_string(tok.line));
            block_stack.pop_back();
            pending_block_name.clear();
        } else if (tok.text == "minifyEnabled") {
            std::string scope = block_stack.empty() ? "" : block_stack.back().text;
            bool value = i + 1 < tokens.size() && tokens[i + 1].text == "true";
            config_for(scope).minify_enabled = value;
            if (i + 1 < tokens.size()) ++i;
        } else if (tok.text == "proguardFiles" || tok.text == "proguardFile") {
            std::string scope = block_stack.empty() ? "" : block_stack.back().text;
            BuildConfig& cfg = config_for(scope);
            while (i + 1 < tokens.size() && tokens[i + 1].line == tok.line &&
                   tokens[i + 1].text != "{" && tokens[i + 1].text != "}") {
                if (auto file = pg_detail::extract_file_arg(tokens[++i].text))
                    cfg.proguard_files.push_back(*file);
            }
        } else {
            pending_block_name = tok.text;
        }
    }
    if (!block_stack.empty())
        throw ParseError("unbalanced '{' in Gradle snippet", std::nullopt,
                         "line " + std::to_string(block_stack.back().line));
    return out;
}

// --- ProGuard rule files ------------------------------------------------------

enum class KeepVariant {
    keep,
    keepclassmembers,
    keepclasseswithmembers,
    keepnames,
    keepclassmembernames,
    keepclasseswithmembernames,
};

inline std::string to_string(KeepVariant v) {
    switch (v) {
        case KeepVariant::keep: return "keep";
        case KeepVariant::keepclassmembers: return "keepclassmembers";
        case KeepVariant::keepclasseswithmembers: return "keepclasseswithmembers";
        case KeepVariant::keepnames: return "keepnames";
        case KeepVariant::keepclassmembernames: return "keepclassmembernames";
        case KeepVariant::keepclasseswithmembernames:
            return "keepclasseswithmembernames";
    }
    return "keep";
}

enum class MemberKind { method, field, wildcard };

struct MemberSpec {
    MemberKind kind = MemberKind::wildcard;
    std::vector<std::string> modifiers;
    std::string type_pattern;  // return/field type as written; may be empty
    std::string name_pattern;
    // Methods only. nullopt means any parameter list ("..." or a field spec).
    std::optional<std::vector<std::string>> param_types;

    bool operator==(const MemberSpec&) const = default;
};

struct KeepRule {
    KeepVariant variant = KeepVariant::keep;
    std::vector<std::string> modifiers;  // public, final, @Annotation, ...
    std::string class_keyword = "class";  // class | interface | enum
    std::string class_pattern;
    std::string extends_keyword;  // "extends" or "implements" when present
    std::optional<std::string> extends_pattern;
    std::vector<MemberSpec> member_specs;

    bool operator==(const KeepRule&) const = default;
};

struct RuleFile {
    std::vector<KeepRule> keep_rules;
    bool dontobfuscate = false;
    bool dontusemixedcaseclassnames = false;
    bool overloadaggressively = false;
    std::vector<std::string> dontwarn_patterns;
    bool printmapping = false;
    std::string printmapping_target;  // empty: print to stdout
    std::optional<int> optimization_passes;
    std::vector<std::string> unrecognized;  // verbatim directive text

    bool operator==(const RuleFile&) const = default;
};

namespace pg_detail {

inline const std::set<std::string>& member_modifiers() {
    static const std::set<std::string> mods = {
        "public",    "private",   "protected", "static",  "final",
        "abstract",  "native",    "synchronized", "transient", "volatile",
        "strictfp",  "synthetic", "bridge",    "varargs", "!static",
        "!final",    "!public",   "!private",  "!protected", "!abstract",
    };
    return mods;
}

inline bool is_class_keyword(const std::string& t) {
    return t == "class" || t == "interface" || t == "enum" ||
           t == "!interface" || t == "!enum" || t == "@interface";
}

inline std::optional<KeepVariant> keep_variant_of(const std::string& name) {
    if (name == "keep") return KeepVariant::keep;
    if (name == "keepclassmembers" || name == "keepclassmemebers")
        return KeepVariant::keepclassmembers;  // common misspelling, accepted
    if (name == "keepclasseswithmembers") return KeepVariant::keepclasseswithmembers;
    if (name == "keepnames") return KeepVariant::keepnames;
    if (name == "keepclassmembernames") return KeepVariant::keepclassmembernames;
    if (name == "keepclasseswithmembernames")
        return KeepVariant::keepclasseswithmembernames;
    return std::nullopt;
}

inline std::vector<Token> tokenize_rules(const std::string& text) {
    std::vector<Token> tokens;
    std::size_t line = 1;
    std::string word;
    bool in_comment = false;
    auto flush = [&] {
        if (!word.empty()) {
            tokens.push_back({word, line});
            word.clear();
        }
    };
    for (char c : text) {
        if (c == '\n') {
            flush();
            in_comment = false;
            ++line;
        } else if (in_comment) {
            continue;
        } else if (c == '#') {
            flush();
            in_comment = true;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else if (c == '{' || c == '}' || c == '(' || c == ')' || c == ',' ||
                   c == ';') {
            flush();
            tokens.push_back({std::string(1, c), line});
        } else {
            word += c;
        }
    }
    flush();
    return tokens;
}

struct TokenCursor {
    const std::vector<Token>& tokens;
    std::size_t pos = 0;

    bool done() const { return pos >= tokens.size(); }
    const Token& peek() const { return tokens[pos]; }
    const Token& next() { return tokens[pos++]; }
    bool at(const char* text) const { return !done() && peek().text == text; }
};

inline MemberSpec parse_member_spec(TokenCursor& cur, std::size_t line) {
    MemberSpec spec;
    std::vector<std::string> words;
    bool saw_paren = false;
    std::vector<std::string> params;
    bool any_params = false;

    while (!cur.done() && !cur.at(";")) {
        if (cur.at("}"))
            throw ParseError("member spec missing ';'", std::nullopt,
                             "line " + std::to_string(line));
        if (cur.at("(")) {
            cur.next();
            saw_paren = true;
            std::string current;
            while (!cur.done() && !cur.at(")")) {
                const Token& t = cur.next();
                if (t.text == ",") {
                    if (!current.empty()) params.push_back(current);
                    current.clear();
                } else {
                    current = t.text;
                }
            }
            if (!current.empty()) params.push_back(current);
            if (cur.done())
                throw ParseError("unterminated parameter list", std::nullopt,
                                 "line " + std::to_string(line));
            cur.next();  // ')'
            if (params.size() == 1 && params[0] == "...") {
                any_params = true;
                params.clear();
            }
        } else {
            words.push_back(cur.next().text);
        }
    }
    if (cur.done())
        throw ParseError("member spec missing ';'", std::nullopt,
                         "line " + std::to_string(line));
    cur.next();  // ';'

    while (!words.empty() && member_modifiers().count(words.front())) {
        spec.modifiers.push_back(words.front());
        words.erase(words.begin());
    }
    if (words.empty())
        throw ParseError("empty member spec", std::nullopt,
                         "line " + std::to_string(line));

    const std::string& last = words.back();
    if (saw_paren) {
        spec.kind = MemberKind::method;
        spec.name_pattern = last;
        if (words.size() > 1)
            spec.type_pattern = words[words.size() - 2];
        spec.param_types = any_params
                               ? std::optional<std::vector<std::string>>()
                               : std::optional<std::vector<std::string>>(params);
    } else if (last == "<methods>") {
        spec.kind = MemberKind::method;
        spec.name_pattern = "*";
    } else if (last == "<fields>") {
        spec.kind = MemberKind::field;
        spec.name_pattern = "*";
    } else if (last == "*" && words.size() == 1) {
        spec.kind = MemberKind::wildcard;
        spec.name_pattern = "*";
    } else {
        spec.kind = MemberKind::field;
        spec.name_pattern = last;
        if (words.size() > 1) spec.type_pattern = words[words.size() - 2];
    }
    return spec;
}

inline KeepRule parse_keep_rule(TokenCursor& cur, KeepVariant variant,
                                std::vector<std::string> rule_options,
                                std::size_t line) {
    KeepRule rule;
    rule.variant = variant;
    rule.modifiers = std::move(rule_options);

    while (!cur.done() && !is_class_keyword(cur.peek().text)) {
        const std::string& t = cur.peek().text;
        if (t.size() > 1 && t[0] == '-')
            throw ParseError("keep rule missing class keyword", std::nullopt,
                             "line " + std::to_string(line));
        if (t == "{" || t == "}" || t == ";" || t == "(" || t == ")")
            throw ParseError("malformed keep class spec", std::nullopt,
                             "line " + std::to_string(cur.peek().line));
        rule.modifiers.push_back(cur.next().text);
    }
    if (cur.done())
        throw ParseError("keep rule missing class keyword", std::nullopt,
                         "line " + std::to_string(line));
    rule.class_keyword = cur.next().text;
    if (cur.done() || cur.peek().text[0] == '-' || cur.at("{"))
        throw ParseError("keep rule missing class pattern", std::nullopt,
                         "line " + std::to_string(line));
    rule.class_pattern = cur.next().text;

    if (cur.at("extends") || cur.at("implements")) {
        rule.extends_keyword = cur.next().text;
        if (cur.done() || cur.peek().text[0] == '-' || cur.at("{"))
            throw ParseError("missing pattern after " + rule.extends_keyword,
                             std::nullopt, "line " + std::to_string(line));
        rule.extends_pattern = cur.next().text;
    }

    if (cur.at("{")) {
        std::size_t open_line = cur.peek().line;
        cur.next();
        while (!cur.at("}")) {
            if (cur.done())
                throw ParseError("unterminated member block", std::nullopt,
                                 "line " + std::to_string(open_line));
            rule.member_specs.push_back(parse_member_spec(cur, cur.peek().line));
        }
        cur.next();  // '}'
    }
    return rule;
}

}  // namespace pg_detail

inline RuleFile parse_rules(const std::string& text) {
    using namespace pg_detail;
    auto tokens = tokenize_rules(text);
    TokenCursor cur{tokens};
    RuleFile out;

    auto take_unrecognized = [&](const std::string& directive) {
        // everything up to the next '-' directive, joined back with spaces
        std::string raw = directive;
        while (!cur.done() && cur.peek().text[0] != '-') {
            raw += " " + cur.peek().text;
            cur.next();
        }
        out.unrecognized.push_back(raw);
    };

    while (!cur.done()) {
        const Token tok = cur.next();
        if (tok.text.size() < 2 || tok.text[0] != '-') {
            throw ParseError("expected '-' directive, got '" + tok.text + "'",
                             std::nullopt, "line " + std::to_string(tok.line));
        }
        std::string name = tok.text.substr(1);
        std::vector<std::string> rule_options;
        if (auto comma = name.find(','); comma != std::string::npos) {
            // -keep,allowshrinking style options
            std::string opts = name.substr(comma + 1);
            name = name.substr(0, comma);
            std::size_t start = 0;
            while (start <= opts.size()) {
                auto end = opts.find(',', start);
                std::string piece = opts.substr(start, end - start);
                if (!piece.empty()) rule_options.push_back(piece);
                if (end == std::string::npos) break;
                start = end + 1;
            }
        }

        if (auto variant = keep_variant_of(name)) {
            out.keep_rules.push_back(
                parse_keep_rule(cur, *variant, std::move(rule_options), tok.line));
        } else if (name == "dontobfuscate") {
            out.dontobfuscate = true;
        } else if (name == "dontusemixedcaseclassnames") {
            out.dontusemixedcaseclassnames = true;
        } else if (name == "overloadaggressively") {
            out.overloadaggressively = true;
        } else if (name == "dontwarn") {
            if (!cur.done() && cur.peek().text[0] != '-')
                out.dontwarn_patterns.push_back(cur.next().text);
            else
                out.dontwarn_patterns.push_back("**");
        } else if (name == "printmapping") {
            out.printmapping = true;
            if (!cur.done() && cur.peek().text[0] != '-')
                out.printmapping_target = cur.next().text;
        } else if (name == "optimizationpasses") {
            bool parsed = false;
            if (!cur.done() && cur.peek().text[0] != '-') {
                try {
                    out.optimization_passes = std::stoi(cur.peek().text);
                    cur.next();
                    parsed = true;
                } catch (const std::exception&) {
                }
            }
            if (!parsed) take_unrecognized(tok.text);
        } else {
            take_unrecognized(tok.text);
        }
    }
    return out;
}

inline std::string print_rules(const RuleFile& rules) {
    std::string out;
    if (rules.optimization_passes)
        out += "-optimizationpasses " + std::to_string(*rules.optimization_passes) +
               "\n";
    if (rules.dontusemixedcaseclassnames) out += "-dontusemixedcaseclassnames\n";
    if (rules.overloadaggressively) out += "-overloadaggressively\n";
    if (rules.dontobfuscate) out += "-dontobfuscate\n";
    if (rules.printmapping) {
        out += "-printmapping";
        if (!rules.printmapping_target.empty())
            out += " " + rules.printmapping_target;
        out += "\n";
    }
    for (const auto& p : rules.dontwarn_patterns) out += "-dontwarn " + p + "\n";
    for (const KeepRule& rule : rules.keep_rules) {
        out += "-" + to_string(rule.variant);
        for (const auto& m : rule.modifiers) out += " " + m;
        out += " " + rule.class_keyword + " " + rule.class_pattern;
        if (rule.extends_pattern)
            out += " " + rule.extends_keyword + " " + *rule.extends_pattern;
        if (!rule.member_specs.empty()) {
            out += " {\n";
            for (const MemberSpec& spec : rule.member_specs) {
                out += "    ";
                for (const auto& m : spec.modifiers) out += m + " ";
                if (spec.kind == MemberKind::method) {
                    if (spec.name_pattern == "*" && !spec.param_types) {
                        out += "<methods>";
                    } else {
                        if (!spec.type_pattern.empty()) out += spec.type_pattern + " ";
                        out += spec.name_pattern + "(";
                        if (!spec.param_types) {
                            out += "...";
                        } else {
                            for (std::size_t i = 0; i < spec.param_types->size(); ++i) {
                                if (i) out += ", ";
                                out += (*spec.param_types)[i];
                            }
                        }
                        out += ")";
                    }
                } else if (spec.kind == MemberKind::field &&
                           spec.name_pattern == "*" && spec.type_pattern.empty()) {
                    out += "<fields>";
                } else if (spec.kind == MemberKind::wildcard) {
                    out += "*";
                } else {
                    if (!spec.type_pattern.empty()) out += spec.type_pattern + " ";
                    out += spec.name_pattern;
                }
                out += ";\n";
            }
            out += "}";
        }
        out += "\n";
    }
    for (const auto& raw : rules.unrecognized) out += raw + "\n";
    return out;
}

// --- matching ------------------------------------------------------------------

namespace pg_detail {

inline bool pattern_matches_impl(const char* p, const char* pe, const char* s,
                                 const char* se) {
    while (p != pe) {
        if (*p == '*') {
            const bool cross = (p + 1 != pe && *(p + 1) == '*');
            const char* rest = p + (cross ? 2 : 1);
            for (const char* t = s;; ++t) {
                if (pattern_matches_impl(rest, pe, t, se)) return true;
                if (t == se) return false;
                if (!cross && *t == '.') return false;
            }
        }
        if (s == se || *p != *s) return false;
        ++p;
        ++s;
    }
    return s == se;
}

}  // namespace pg_detail

// '*' matches within a package segment (no '.'); '**' matches across segments.
inline bool pattern_matches(const std::string& pattern, const std::string& name) {
    return pg_detail::pattern_matches_impl(pattern.data(),
                                           pattern.data() + pattern.size(),
                                           name.data(), name.data() + name.size());
}

inline bool class_spec_matches(const KeepRule& rule, const std::string& class_name,
                               const std::vector<std::string>& super_types = {}) {
    // a lone '*' as the whole class name matches any class regardless of
    // package (long-standing rule-file behavior)
    bool name_ok = rule.class_pattern == "*"
                       ? true
                       : pattern_matches(rule.class_pattern, class_name);
    if (!name_ok) return false;
    if (!rule.extends_pattern) return true;
    // `class P extends S`: the named class must match P and derive from S.
    return std::any_of(super_types.begin(), super_types.end(),
                       [&](const std::string& s) {
                           return pattern_matches(*rule.extends_pattern, s);
                       });
}

// Does the rule exempt the class NAME itself from renaming?
inline bool rule_covers_class(const KeepRule& rule, const std::string& class_name,
                              const std::vector<std::string>& super_types = {}) {
    if (!class_spec_matches(rule, class_name, super_types)) return false;
    switch (rule.variant) {
        case KeepVariant::keep:
        case KeepVariant::keepnames:
            return true;
        case KeepVariant::keepclasseswithmembers:
        case KeepVariant::keepclasseswithmembernames:
            // "with members": the class is kept only alongside listed members.
            return !rule.member_specs.empty();
        case KeepVariant::keepclassmembers:
        case KeepVariant::keepclassmembernames:
            return false;
    }
    return false;
}

// Does the rule exempt a member of the class from renaming?
inline bool rule_covers_member(
    const KeepRule& rule, const std::string& class_name,
    const std::string& member_name,
    const std::optional<std::vector<std::string>>& params = std::nullopt,
    const std::vector<std::string>& super_types = {}) {
    if (!class_spec_matches(rule, class_name, super_types)) return false;
    for (const MemberSpec& spec : rule.member_specs) {
        if (!pattern_matches(spec.name_pattern, member_name)) continue;
        if (spec.param_types && params) {
            if (spec.param_types->size() != params->size()) continue;
            bool all = true;
            for (std::size_t i = 0; i < params->size(); ++i)
                if (!pattern_matches((*spec.param_types)[i], (*params)[i])) {
                    all = false;
                    break;
                }
            if (!all) continue;
        }
        return true;
    }
    return false;
}

inline bool rule_matches(const KeepRule& rule, const std::string& class_name,
                         const std::optional<std::string>& member = std::nullopt,
                         const std::vector<std::string>& super_types = {}) {
    return member ? rule_covers_member(rule, class_name, *member, std::nullopt,
                                       super_types)
                  : rule_covers_class(rule, class_name, super_types);
}

// --- grading ---------------------------------------------------------------------

enum class ReasonCode {
    MISSING_MINIFY,
    MISSING_PROGUARD_FILES,
    DONTOBFUSCATE_PRESENT,
    KEEP_MISSING_TARGET,
    KEEP_COVERS_FORBIDDEN,
    WILDCARD_TOO_BROAD,
    CLASS_NAME_MISSPELLED,
};

inline std::string to_string(ReasonCode code) {
    switch (code) {
        case ReasonCode::MISSING_MINIFY: return "MISSING_MINIFY";
        case ReasonCode::MISSING_PROGUARD_FILES: return "MISSING_PROGUARD_FILES";
        case ReasonCode::DONTOBFUSCATE_PRESENT: return "DONTOBFUSCATE_PRESENT";
        case ReasonCode::KEEP_MISSING_TARGET: return "KEEP_MISSING_TARGET";
        case ReasonCode::KEEP_COVERS_FORBIDDEN: return "KEEP_COVERS_FORBIDDEN";
        case ReasonCode::WILDCARD_TOO_BROAD: return "WILDCARD_TOO_BROAD";
        case ReasonCode::CLASS_NAME_MISSPELLED: return "CLASS_NAME_MISSPELLED";
    }
    return "UNKNOWN";
}

struct GradeReason {
    ReasonCode code;
    std::string detail;

    bool operator==(const GradeReason&) const = default;
};

struct GradeResult {
    bool correct = false;
    std::vector<GradeReason> reasons;  // non-empty iff incorrect

    bool has(ReasonCode code) const {
        return std::any_of(reasons.begin(), reasons.end(),
                           [&](const GradeReason& r) { return r.code == code; });
    }
};

struct RubricTarget {
    std::string class_name;
    std::optional<std::string> member;

    std::string describe() const {
        return member ? class_name + "#" + *member : class_name;
    }
};

struct Rubric {
    std::vector<RubricTarget> must_keep;
    std::vector<RubricTarget> must_obfuscate;
};

struct GradeOptions {
    // Strict mode requires member targets to be covered by a member spec;
    // lenient also accepts a rule that keeps the whole class.
    bool lenient = false;
    // Class names known to exist, for misspelling detection.
    const AppModel* app = nullptr;
};

namespace pg_detail {

inline std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

inline bool has_wildcard(const std::string& pattern) {
    return pattern.find('*') != std::string::npos;
}

}  // namespace pg_detail

// Binary correctness with machine-readable reasons. An empty rubric is the
// plain activation check; targets add keep-coverage requirements.
inline GradeResult grade(const BuildConfig& build, const RuleFile& rules,
                         const Rubric& rubric, const GradeOptions& options = {}) {
    GradeResult result;
    auto fail = [&](ReasonCode code, std::string detail = {}) {
        GradeReason reason{code, std::move(detail)};
        if (std::find(result.reasons.begin(), result.reasons.end(), reason) ==
            result.reasons.end())
            result.reasons.push_back(std::move(reason));
    };

    if (!build.minify_enabled) fail(ReasonCode::MISSING_MINIFY);
    if (build.proguard_files.empty()) fail(ReasonCode::MISSING_PROGUARD_FILES);
    if (rules.dontobfuscate) fail(ReasonCode::DONTOBFUSCATE_PRESENT);

    for (const RubricTarget& target : rubric.must_keep) {
        bool covered = false;
        for (const KeepRule& rule : rules.keep_rules) {
            if (target.member) {
                covered = rule_covers_member(rule, target.class_name, *target.member) ||
                          (options.lenient &&
                           rule_covers_class(rule, target.class_name));
            } else {
                covered = rule_covers_class(rule, target.class_name);
            }
            if (covered) break;
        }
        if (covered) continue;

        // Included a keep rule but misspelled the class? A wildcard-free
        // pattern close to the target (and matching nothing real) points at
        // a typo rather than a missing rule.
        bool misspelled = false;
        for (const KeepRule& rule : rules.keep_rules) {
            if (pg_detail::has_wildcard(rule.class_pattern)) continue;
            if (pg_detail::edit_distance(rule.class_pattern, target.class_name) == 0 ||
                pg_detail::edit_distance(rule.class_pattern, target.class_name) > 2)
                continue;
            bool matches_known = false;
            if (options.app) {
                for (const ClassRecord& cls : options.app->classes)
                    if (pattern_matches(rule.class_pattern, cls.qualified_name)) {
                        matches_known = true;
                        break;
                    }
            }
            if (!matches_known) {
                misspelled = true;
                fail(ReasonCode::CLASS_NAME_MISSPELLED,
                     rule.class_pattern + " vs " + target.class_name);
                break;
            }
        }
        if (!misspelled) fail(ReasonCode::KEEP_MISSING_TARGET, target.describe());
    }

    for (const RubricTarget& target : rubric.must_obfuscate) {
        for (const KeepRule& rule : rules.keep_rules) {
            bool covers = target.member
                              ? rule_covers_member(rule, target.class_name,
                                                   *target.member) ||
                                    rule_covers_class(rule, target.class_name)
                              : rule_covers_class(rule, target.class_name);
            if (!covers) continue;
            fail(ReasonCode::KEEP_COVERS_FORBIDDEN,
                 to_string(rule.variant) + " " + rule.class_pattern + " covers " +
                     target.describe());
            if (pg_detail::has_wildcard(rule.class_pattern))
                fail(ReasonCode::WILDCARD_TOO_BROAD, rule.class_pattern);
            break;
        }
    }

    result.correct = result.reasons.empty();
    return result;
}

}  // namespace obfkit
