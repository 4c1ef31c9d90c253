#include "obfkit/proguard.hpp"

#include <gtest/gtest.h>

using namespace obfkit;

namespace {
ClassRecord named_class(const std::string& qualified_name) {
    ClassRecord cls;
    cls.qualified_name = qualified_name;
    return cls;
}
}  // namespace

namespace {

const char* kGradleActivation = R"(android{
   buildTypes {
       release {
           minifyEnabled true
           proguardFiles 'proguard-rules.pro'
}}})";

const char* kExampleRules = R"(-optimizationpasses 5

-dontusemixedcaseclassnames
-overloadaggressively
-printmapping mapping.txt

-keep public class * extends project.Interface
-dontwarn project.example.**
)";

Rubric study_rubric() {
    Rubric rubric;
    rubric.must_keep.push_back({"com.task.OpenClass", std::nullopt});
    rubric.must_keep.push_back({"com.task.OpenClass", "doStuff"});
    rubric.must_obfuscate.push_back({"com.task.SecretClass", std::nullopt});
    rubric.must_obfuscate.push_back({"com.task.SecretClass", "doSecretStuff"});
    return rubric;
}

BuildConfig release_build() {
    return parse_gradle_snippet(kGradleActivation).find("release")
               ? *parse_gradle_snippet(kGradleActivation).find("release")
               : BuildConfig{};
}

}  // namespace

TEST(GradleSnippet, ActivationBlockParses) {
    GradleBuildFile build = parse_gradle_snippet(kGradleActivation);
    const BuildConfig* release = build.find("release");
    ASSERT_NE(release, nullptr);
    EXPECT_TRUE(release->minify_enabled);
    EXPECT_EQ(release->proguard_files,
              std::vector<std::string>{"proguard-rules.pro"});
}

TEST(GradleSnippet, MinifyDisabledParses) {
    GradleBuildFile build = parse_gradle_snippet(
        "buildTypes { release { minifyEnabled false } }");
    ASSERT_NE(build.find("release"), nullptr);
    EXPECT_FALSE(build.find("release")->minify_enabled);
}

TEST(GradleSnippet, EmptyBlockGivesDefaults) {
    GradleBuildFile build = parse_gradle_snippet("buildTypes { }");
    EXPECT_TRUE(build.build_types.empty());
    EXPECT_EQ(build.find("release"), nullptr);
}

TEST(GradleSnippet, UnbalancedBracesReportLine) {
    try {
        parse_gradle_snippet("android {\n buildTypes {\n release {\n}}");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("line"), std::string::npos);
    }
}

TEST(GradleSnippet, DefaultProguardFileCallUnwrapped) {
    GradleBuildFile build = parse_gradle_snippet(
        "release {\n"
        "  minifyEnabled true\n"
        "  proguardFiles getDefaultProguardFile('proguard-android.txt'), "
        "'proguard-rules.pro'\n"
        "}");
    const BuildConfig* release = build.find("release");
    ASSERT_NE(release, nullptr);
    EXPECT_EQ(release->proguard_files,
              (std::vector<std::string>{"proguard-android.txt",
                                        "proguard-rules.pro"}));
}

TEST(ParseRules, ExampleConfigurationBreaksDown) {
    RuleFile rules = parse_rules(kExampleRules);
    EXPECT_EQ(rules.optimization_passes, 5);
    EXPECT_TRUE(rules.dontusemixedcaseclassnames);
    EXPECT_TRUE(rules.overloadaggressively);
    EXPECT_TRUE(rules.printmapping);
    EXPECT_EQ(rules.printmapping_target, "mapping.txt");
    EXPECT_EQ(rules.dontwarn_patterns,
              std::vector<std::string>{"project.example.**"});
    ASSERT_EQ(rules.keep_rules.size(), 1u);
    const KeepRule& keep = rules.keep_rules[0];
    EXPECT_EQ(keep.variant, KeepVariant::keep);
    EXPECT_EQ(keep.modifiers, std::vector<std::string>{"public"});
    EXPECT_EQ(keep.class_pattern, "*");
    ASSERT_TRUE(keep.extends_pattern.has_value());
    EXPECT_EQ(*keep.extends_pattern, "project.Interface");
    EXPECT_TRUE(keep.member_specs.empty());
    EXPECT_TRUE(rules.unrecognized.empty());
}

TEST(ParseRules, DontObfuscateFlag) {
    RuleFile rules = parse_rules("-dontobfuscate\n");
    EXPECT_TRUE(rules.dontobfuscate);
}

TEST(ParseRules, KeepWithMethodMemberSpec) {
    RuleFile rules = parse_rules("-keep class a.b.OpenClass { void doStuff(); }");
    ASSERT_EQ(rules.keep_rules.size(), 1u);
    const KeepRule& keep = rules.keep_rules[0];
    EXPECT_EQ(keep.class_pattern, "a.b.OpenClass");
    ASSERT_EQ(keep.member_specs.size(), 1u);
    const MemberSpec& spec = keep.member_specs[0];
    EXPECT_EQ(spec.kind, MemberKind::method);
    EXPECT_EQ(spec.name_pattern, "doStuff");
    EXPECT_EQ(spec.type_pattern, "void");
    ASSERT_TRUE(spec.param_types.has_value());
    EXPECT_TRUE(spec.param_types->empty());
}

TEST(ParseRules, MemberWildcardsAndFields) {
    RuleFile rules = parse_rules(
        "-keepclassmembers class com.x.Api {\n"
        "  <methods>;\n"
        "  <fields>;\n"
        "  *;\n"
        "  public static int LIMIT;\n"
        "  void open(int, java.lang.String);\n"
        "  <init>(...);\n"
        "}\n");
    ASSERT_EQ(rules.keep_rules.size(), 1u);
    const auto& specs = rules.keep_rules[0].member_specs;
    ASSERT_EQ(specs.size(), 6u);
    EXPECT_EQ(specs[0].kind, MemberKind::method);
    EXPECT_EQ(specs[0].name_pattern, "*");
    EXPECT_EQ(specs[1].kind, MemberKind::field);
    EXPECT_EQ(specs[2].kind, MemberKind::wildcard);
    EXPECT_EQ(specs[3].kind, MemberKind::field);
    EXPECT_EQ(specs[3].name_pattern, "LIMIT");
    EXPECT_EQ(specs[3].modifiers,
              (std::vector<std::string>{"public", "static"}));
    EXPECT_EQ(specs[4].kind, MemberKind::method);
    ASSERT_TRUE(specs[4].param_types.has_value());
    EXPECT_EQ(*specs[4].param_types,
              (std::vector<std::string>{"int", "java.lang.String"}));
    EXPECT_EQ(specs[5].name_pattern, "<init>");
    EXPECT_FALSE(specs[5].param_types.has_value());  // (...) matches anything
}

TEST(ParseRules, PaperMisspellingAccepted) {
    RuleFile rules = parse_rules("-keepclassmemebers class X { *; }");
    ASSERT_EQ(rules.keep_rules.size(), 1u);
    EXPECT_EQ(rules.keep_rules[0].variant, KeepVariant::keepclassmembers);
}

TEST(ParseRules, UnknownDirectivePreservedVerbatim) {
    RuleFile rules = parse_rules(
        "-dontpreverify\n-assumenosideeffects class android.util.Log\n"
        "-dontobfuscate\n");
    EXPECT_TRUE(rules.dontobfuscate);
    ASSERT_EQ(rules.unrecognized.size(), 2u);
    EXPECT_EQ(rules.unrecognized[0], "-dontpreverify");
    EXPECT_EQ(rules.unrecognized[1],
              "-assumenosideeffects class android.util.Log");
}

TEST(ParseRules, CommentsIgnored) {
    RuleFile rules = parse_rules(
        "# header comment\n-dontobfuscate # trailing words\n");
    EXPECT_TRUE(rules.dontobfuscate);
    EXPECT_TRUE(rules.unrecognized.empty());
}

TEST(ParseRules, MalformedKeepReportsLine) {
    try {
        parse_rules("-dontobfuscate\n-keep class\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
}

TEST(ParseRules, UnterminatedMemberBlockFails) {
    EXPECT_THROW(parse_rules("-keep class X { void m();"), ParseError);
}

TEST(PrintRules, RoundTripIsStable) {
    for (const char* text :
         {kExampleRules,
          "-keep class a.b.OpenClass { void doStuff(); }",
          "-keepclassmembers class com.x.Api {\n <fields>;\n int count;\n}\n",
          "-dontobfuscate\n-dontwarn **\n-printmapping\n",
          "-keepnames class p.Q extends p.Base { calc(int); }\n"
          "-somethingcustom with args\n"}) {
        RuleFile first = parse_rules(text);
        RuleFile second = parse_rules(print_rules(first));
        EXPECT_EQ(first, second) << text;
    }
}

TEST(PatternMatch, SingleStarStaysInsideSegment) {
    EXPECT_TRUE(pattern_matches("a.*.C", "a.b.C"));
    EXPECT_FALSE(pattern_matches("a.*.C", "a.b.d.C"));
}

TEST(PatternMatch, DoubleStarCrossesSegments) {
    EXPECT_TRUE(pattern_matches("**", "anything.at.all"));
    EXPECT_TRUE(pattern_matches("com.task.**", "com.task.sub.Deep"));
    EXPECT_FALSE(pattern_matches("com.task.**", "org.task.Deep"));
}

TEST(PatternMatch, LiteralsAndEdgeCases) {
    EXPECT_TRUE(pattern_matches("a.b.C", "a.b.C"));
    EXPECT_FALSE(pattern_matches("a.b.C", "a.b.c"));
    EXPECT_TRUE(pattern_matches("*", "Solo"));
    EXPECT_FALSE(pattern_matches("*", "has.dots"));
    EXPECT_TRUE(pattern_matches("**Activity", "com.app.MainActivity"));
}

TEST(RuleMatches, ExtendsRequiresSupertypeEvidence) {
    RuleFile rules = parse_rules("-keep public class * extends project.Interface");
    const KeepRule& rule = rules.keep_rules[0];
    EXPECT_TRUE(rule_matches(rule, "com.app.Impl", std::nullopt,
                             {"project.Interface"}));
    EXPECT_FALSE(rule_matches(rule, "com.app.Impl", std::nullopt,
                              {"java.lang.Object"}));
    EXPECT_FALSE(rule_matches(rule, "com.app.Impl"));
}

TEST(RuleMatches, VariantSemantics) {
    auto rule_for = [](const std::string& text) {
        return parse_rules(text).keep_rules.at(0);
    };
    const std::string spec = " class com.x.Api { void open(); }";

    // keep / keepnames cover the class and the listed member
    for (const char* variant : {"-keep", "-keepnames"}) {
        KeepRule rule = rule_for(variant + spec);
        EXPECT_TRUE(rule_covers_class(rule, "com.x.Api")) << variant;
        EXPECT_TRUE(rule_covers_member(rule, "com.x.Api", "open")) << variant;
        EXPECT_FALSE(rule_covers_member(rule, "com.x.Api", "close")) << variant;
    }
    // member-only variants never cover the class name
    for (const char* variant : {"-keepclassmembers", "-keepclassmembernames"}) {
        KeepRule rule = rule_for(variant + spec);
        EXPECT_FALSE(rule_covers_class(rule, "com.x.Api")) << variant;
        EXPECT_TRUE(rule_covers_member(rule, "com.x.Api", "open")) << variant;
    }
    // "with members" variants cover the class only alongside member specs
    for (const char* variant :
         {"-keepclasseswithmembers", "-keepclasseswithmembernames"}) {
        KeepRule rule = rule_for(variant + spec);
        EXPECT_TRUE(rule_covers_class(rule, "com.x.Api")) << variant;
        KeepRule bare = rule_for(std::string(variant) + " class com.x.Api");
        EXPECT_FALSE(rule_covers_class(bare, "com.x.Api")) << variant;
    }
    // a class-level keep without member specs covers the class, not members
    KeepRule bare_keep = rule_for("-keep class com.x.Api");
    EXPECT_TRUE(rule_covers_class(bare_keep, "com.x.Api"));
    EXPECT_FALSE(rule_covers_member(bare_keep, "com.x.Api", "open"));
}

TEST(Grade, ActivationTaskAcceptsFullSetup) {
    GradeResult result = grade(release_build(), RuleFile{}, Rubric{});
    EXPECT_TRUE(result.correct);
    EXPECT_TRUE(result.reasons.empty());
}

TEST(Grade, MissingMinifyFails) {
    BuildConfig build;
    build.build_type = "release";
    build.proguard_files = {"proguard-rules.pro"};
    GradeResult result = grade(build, RuleFile{}, Rubric{});
    EXPECT_FALSE(result.correct);
    EXPECT_TRUE(result.has(ReasonCode::MISSING_MINIFY));
}

TEST(Grade, MissingProguardFilesFails) {
    BuildConfig build;
    build.build_type = "release";
    build.minify_enabled = true;
    GradeResult result = grade(build, RuleFile{}, Rubric{});
    EXPECT_FALSE(result.correct);
    EXPECT_TRUE(result.has(ReasonCode::MISSING_PROGUARD_FILES));
}

TEST(Grade, DontObfuscateDisqualifies) {
    RuleFile rules = parse_rules("-dontobfuscate");
    GradeResult result = grade(release_build(), rules, Rubric{});
    EXPECT_FALSE(result.correct);
    EXPECT_TRUE(result.has(ReasonCode::DONTOBFUSCATE_PRESENT));
}

TEST(Grade, KeepTaskAcceptsTargetedRule) {
    RuleFile rules =
        parse_rules("-keep class com.task.OpenClass { void doStuff(); }");
    GradeResult result = grade(release_build(), rules, study_rubric());
    std::string reasons;
    for (const auto& r : result.reasons) reasons += to_string(r.code) + " ";
    EXPECT_TRUE(result.correct) << reasons;
}

TEST(Grade, BroadWildcardCoversForbiddenClass) {
    RuleFile rules = parse_rules("-keep class com.task.** { *; }");
    GradeResult result = grade(release_build(), rules, study_rubric());
    EXPECT_FALSE(result.correct);
    EXPECT_TRUE(result.has(ReasonCode::KEEP_COVERS_FORBIDDEN));
    EXPECT_TRUE(result.has(ReasonCode::WILDCARD_TOO_BROAD));
}

TEST(Grade, MissingKeepReported) {
    GradeResult result = grade(release_build(), RuleFile{}, study_rubric());
    EXPECT_FALSE(result.correct);
    EXPECT_TRUE(result.has(ReasonCode::KEEP_MISSING_TARGET));
}

TEST(Grade, MisspelledClassDetected) {
    RuleFile rules =
        parse_rules("-keep class com.tsak.OpenClass { void doStuff(); }");
    AppModel app;
    app.app_id = "task";
    app.classes.push_back(named_class("com.task.OpenClass"));
    app.classes.push_back(named_class("com.task.SecretClass"));
    GradeOptions options;
    options.app = &app;
    GradeResult result = grade(release_build(), rules, study_rubric(), options);
    EXPECT_FALSE(result.correct);
    EXPECT_TRUE(result.has(ReasonCode::CLASS_NAME_MISSPELLED));
    EXPECT_FALSE(result.has(ReasonCode::KEEP_MISSING_TARGET));
}

TEST(Grade, LenientModeAcceptsClassLevelKeepForMembers) {
    RuleFile rules = parse_rules("-keep class com.task.OpenClass");
    GradeResult strict = grade(release_build(), rules, study_rubric());
    EXPECT_FALSE(strict.correct);
    GradeOptions lenient;
    lenient.lenient = true;
    GradeResult relaxed = grade(release_build(), rules, study_rubric(), lenient);
    EXPECT_TRUE(relaxed.correct);
}

TEST(Grade, AddingForbiddenCoverageNeverFixesAVerdict) {
    // monotonicity: a rule matching a must_obfuscate target cannot turn an
    // incorrect grade correct
    std::vector<std::string> bases = {
        "",  // missing keep entirely
        "-keep class com.task.OpenClass { void doStuff(); }\n-dontobfuscate\n",
        "-keepclassmembers class com.task.OpenClass { void doStuff(); }\n",
    };
    for (const std::string& base : bases) {
        RuleFile before = parse_rules(base);
        GradeResult verdict_before = grade(release_build(), before, study_rubric());
        if (verdict_before.correct) continue;
        RuleFile after = parse_rules(
            base + "\n-keep class com.task.SecretClass { void doSecretStuff(); }\n");
        GradeResult verdict_after = grade(release_build(), after, study_rubric());
        EXPECT_FALSE(verdict_after.correct) << base;
    }
}
