// obfkit - batch analysis of ProGuard-family obfuscation in Android apps.
//
// Subcommands:
//   scan      binaries / model JSONs -> per-app feature reports
//   corpus    feature reports + store metadata -> aggregate tables
//   simulate  model JSONs + plan -> obfuscated twins with rename maps
//   eval      model JSONs + plan -> detector confusion counts and MCC
//   grade     gradle snippet + rule file + rubric -> correctness verdict
//
// Exit codes: 0 success, 1 input error, 2 internal error.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "obfkit/config.hpp"
#include "obfkit/corpus.hpp"
#include "obfkit/detector.hpp"
#include "obfkit/dex.hpp"
#include "obfkit/errors.hpp"
#include "obfkit/evaluate.hpp"
#include "obfkit/json_io.hpp"
#include "obfkit/proguard.hpp"
#include "obfkit/simulate.hpp"

namespace fs = std::filesystem;
using namespace obfkit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitInternalError = 2;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
    std::string text = read_file(path);
    return std::vector<std::uint8_t>(text.begin(), text.end());
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path.string());
    out << content;
}

ToolConfig load_config_file(const std::string& path) {
    if (path.empty()) return {};
    return load_config(read_file(path));
}

std::vector<fs::path> sorted_json_files(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

// --- scan -------------------------------------------------------------------

enum class InputFormat { automatic, apk, dexfile, json };

struct ScanJob {
    fs::path input;
    std::string status;  // "ok" or the error text
    fs::path output;
};

InputFormat sniff_format(const fs::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (ext == ".json") return InputFormat::json;
    if (ext == ".dex") return InputFormat::dexfile;
    if (ext == ".apk" || ext == ".zip") return InputFormat::apk;
    return InputFormat::automatic;
}

int run_scan(const std::vector<std::string>& inputs,
             const std::string& main_package, const std::string& format_name,
             const std::string& config_path, const std::string& out_dir,
             unsigned jobs) {
    ToolConfig config = load_config_file(config_path);
    InputFormat forced = InputFormat::automatic;
    if (format_name == "apk") forced = InputFormat::apk;
    else if (format_name == "dex") forced = InputFormat::dexfile;
    else if (format_name == "json") forced = InputFormat::json;

    std::vector<ScanJob> results(inputs.size());
    std::atomic<std::size_t> next{0};
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());

    auto worker = [&] {
        while (true) {
            std::size_t index = next.fetch_add(1);
            if (index >= inputs.size()) return;
            ScanJob& job = results[index];
            job.input = inputs[index];
            try {
                InputFormat format =
                    forced == InputFormat::automatic ? sniff_format(job.input)
                                                     : forced;
                AppModel app;
                std::optional<dex::ToolMarkerReport> markers;
                if (format == InputFormat::json) {
                    app = load_app(read_file(job.input));
                } else {
                    auto bytes = read_bytes(job.input);
                    auto container = dex::open_container(bytes);
                    app = dex::parse_app(
                        container, job.input.stem().string(),
                        main_package.empty()
                            ? std::optional<std::string>()
                            : std::optional<std::string>(main_package));
                    markers = dex::scan_tool_markers(container, config.markers);
                }
                FeatureReport report = analyze(app, config.detector);
                ordered_json doc = report_to_json(report);
                if (markers) {
                    ordered_json jm;
                    jm["dexprotector_detected"] = markers->dexprotector_detected;
                    jm["bangcle_detected"] = markers->bangcle_detected;
                    jm["marker_evidence"] = markers->marker_evidence;
                    doc["tool_markers"] = std::move(jm);
                }
                job.output = fs::path(out_dir) /
                             (job.input.stem().string() + ".report.json");
                write_file(job.output, doc.dump(2) + "\n");
                job.status = "ok";
            } catch (const std::exception& e) {
                job.status = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(jobs, inputs.size()); ++t)
        pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::size_t failures = 0;
    for (const ScanJob& job : results) {
        if (job.status == "ok") {
            std::cout << job.input.string() << ": ok -> " << job.output.string()
                      << "\n";
        } else {
            ++failures;
            std::cerr << job.input.string() << ": error: " << job.status << "\n";
        }
    }
    if (!inputs.empty() && failures == inputs.size()) return kExitInputError;
    return kExitOk;
}

// --- corpus ------------------------------------------------------------------

int run_corpus(const std::string& report_dir, const std::string& metadata_path,
               const std::string& out_dir, const std::string& config_path) {
    ToolConfig config = load_config_file(config_path);
    MetadataTable metadata = parse_metadata_csv(read_file(metadata_path));
    for (const std::string& warning : metadata.warnings)
        std::cerr << "metadata: " << warning << "\n";

    CorpusAggregator aggregator(config.corpus);
    std::size_t reports = 0, without_metadata = 0, unreadable = 0;
    for (const fs::path& path : sorted_json_files(report_dir)) {
        FeatureReport report;
        try {
            report = load_report(read_file(path));
        } catch (const std::exception& e) {
            ++unreadable;
            std::cerr << path.string() << ": skipped: " << e.what() << "\n";
            continue;
        }
        ++reports;
        auto row = metadata.rows.find(report.app_id);
        if (row == metadata.rows.end()) {
            ++without_metadata;
            std::cerr << report.app_id
                      << ": no metadata row; excluded from bucket/account/month "
                         "tables\n";
            aggregator.add_report(report);
            continue;
        }
        aggregator.add(CorpusRecord{report.app_id, std::move(report),
                                    row->second.downloads_bucket,
                                    row->second.account_id,
                                    row->second.last_update});
    }

    CorpusTables tables = aggregator.tables();
    const fs::path out(out_dir);
    write_file(out / "download_buckets.csv", to_csv(tables.download_buckets));
    write_file(out / "download_buckets.json",
               to_json(tables.download_buckets).dump(2) + "\n");
    write_file(out / "account_buckets.csv", to_csv(tables.account_buckets));
    write_file(out / "account_buckets.json",
               to_json(tables.account_buckets).dump(2) + "\n");
    write_file(out / "monthly_trend.csv", to_csv(tables.monthly_trend));
    write_file(out / "monthly_trend.json",
               to_json(tables.monthly_trend).dump(2) + "\n");
    write_file(out / "trend_all_packages.csv",
               trend_series_csv(tables.monthly_trend, false));
    write_file(out / "trend_main_package.csv",
               trend_series_csv(tables.monthly_trend, true));
    write_file(out / "scope_ranking.csv", to_csv(tables.scope_ranking));
    write_file(out / "scope_ranking.json",
               to_json(tables.scope_ranking).dump(2) + "\n");
    write_file(out / "orphan_bound.csv", to_csv(tables.orphan_bound));
    write_file(out / "orphan_bound.json",
               to_json(tables.orphan_bound).dump(2) + "\n");

    std::cout << "reports: " << reports << " (no metadata: " << without_metadata
              << ", unreadable: " << unreadable
              << ", skipped metadata rows: " << metadata.skipped_rows << ")\n"
              << "tables written to " << out.string() << "\n";
    return kExitOk;
}

// --- simulate -----------------------------------------------------------------

int run_simulate(const std::vector<std::string>& inputs,
                 const std::string& plan_path, const std::string& out_dir) {
    SimulationPlan plan = load_plan(read_file(plan_path));
    ordered_json manifest = ordered_json::array();
    for (const std::string& input : inputs) {
        fs::path path(input);
        AppModel app = load_app(read_file(path));
        SimulationResult result = simulate(app, plan);
        fs::path model_out =
            fs::path(out_dir) / (path.stem().string() + ".simulated.json");
        write_file(model_out, save_app(result.app));

        ordered_json renames;
        renames["classes"] = result.renames.classes;
        renames["methods"] = result.renames.methods;
        renames["fields"] = result.renames.fields;
        renames["notes"] = result.renames.notes;
        write_file(fs::path(out_dir) / (path.stem().string() + ".renames.json"),
                   renames.dump(2) + "\n");

        manifest.push_back(
            manifest_entry(model_out.string(), labels_for_plan(plan)));
        std::cout << input << " -> " << model_out.string() << "\n";
    }
    write_file(fs::path(out_dir) / "manifest.json", manifest.dump(2) + "\n");
    return kExitOk;
}

// --- eval ----------------------------------------------------------------------

int run_eval(const std::string& models_dir, const std::string& plan_path,
             const std::string& out_path, const std::string& config_path) {
    ToolConfig config = load_config_file(config_path);
    SimulationPlan plan = load_plan(read_file(plan_path));

    std::vector<AppModel> apps;
    for (const fs::path& path : sorted_json_files(models_dir))
        apps.push_back(load_app(read_file(path)));
    if (apps.empty()) {
        std::cerr << "eval: no model JSONs found in " << models_dir << "\n";
        return kExitInputError;
    }

    auto corpus = make_eval_corpus(apps, plan);
    std::vector<FeatureLabels> predictions, labels;
    predictions.reserve(corpus.size());
    labels.reserve(corpus.size());
    for (const LabeledModel& labeled : corpus) {
        FeatureReport report = analyze(labeled.model, config.detector);
        predictions.push_back(predictions_from_report(report.all_packages));
        labels.push_back(labeled.labels);
    }
    auto scores = score(predictions, labels);

    std::string csv = metrics_to_csv(scores);
    write_file(out_path, csv);
    fs::path json_path = fs::path(out_path).replace_extension(".json");
    write_file(json_path, metrics_to_json(scores).dump(2) + "\n");
    std::cout << csv;
    std::cout << "labeled models: " << corpus.size() << "\n";
    return kExitOk;
}

// --- grade -----------------------------------------------------------------------

int run_grade(const std::string& gradle_path, const std::string& rules_path,
              const std::string& rubric_path, const std::string& app_path,
              bool lenient, const std::string& build_type,
              const std::string& out_path) {
    GradleBuildFile gradle = parse_gradle_snippet(read_file(gradle_path));
    RuleFile rules = parse_rules(read_file(rules_path));
    Rubric rubric = load_rubric(read_file(rubric_path));

    std::optional<AppModel> app;
    if (!app_path.empty()) app = load_app(read_file(app_path));

    BuildConfig build;
    build.build_type = build_type;
    if (const BuildConfig* found = gradle.find(build_type)) build = *found;

    GradeOptions options;
    options.lenient = lenient;
    options.app = app ? &*app : nullptr;
    GradeResult result = grade(build, rules, rubric, options);

    ordered_json doc = grade_to_json(result);
    if (!out_path.empty()) write_file(out_path, doc.dump(2) + "\n");
    std::cout << "verdict: " << (result.correct ? "correct" : "incorrect")
              << "\n";
    for (const GradeReason& reason : result.reasons)
        std::cout << "  " << to_string(reason.code)
                  << (reason.detail.empty() ? "" : ": " + reason.detail) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"static analysis of ProGuard-family obfuscation in Android apps"};
    app.require_subcommand(1);

    // scan
    auto* scan_cmd = app.add_subcommand(
        "scan", "analyze apps (apk/dex/model JSON) into feature reports");
    std::vector<std::string> scan_inputs;
    std::string scan_main, scan_format = "auto", scan_config, scan_out = ".";
    unsigned scan_jobs = 0;
    scan_cmd->add_option("inputs", scan_inputs, "apk/dex/json files")
        ->required()
        ->expected(-1);
    scan_cmd->add_option("--main-package", scan_main,
                         "declared main package for binary inputs");
    scan_cmd->add_option("--format", scan_format, "auto|apk|dex|json")
        ->check(CLI::IsMember({"auto", "apk", "dex", "json"}));
    scan_cmd->add_option("--config", scan_config, "tool config JSON");
    scan_cmd->add_option("--out", scan_out, "output directory");
    scan_cmd->add_option("--jobs", scan_jobs, "parallel workers (0 = auto)");

    // corpus
    auto* corpus_cmd = app.add_subcommand(
        "corpus", "aggregate feature reports with store metadata");
    std::string corpus_reports, corpus_metadata, corpus_out = ".",
                corpus_config;
    corpus_cmd->add_option("report_dir", corpus_reports, "directory of report JSONs")
        ->required();
    corpus_cmd->add_option("metadata", corpus_metadata, "metadata CSV")
        ->required();
    corpus_cmd->add_option("--out", corpus_out, "output directory");
    corpus_cmd->add_option("--config", corpus_config, "tool config JSON");

    // simulate
    auto* simulate_cmd = app.add_subcommand(
        "simulate", "apply an obfuscation plan to model JSONs");
    std::vector<std::string> simulate_inputs;
    std::string simulate_plan, simulate_out = ".";
    simulate_cmd->add_option("models", simulate_inputs, "model JSON files")
        ->required()
        ->expected(-1);
    simulate_cmd->add_option("--plan", simulate_plan, "simulation plan JSON")
        ->required();
    simulate_cmd->add_option("--out", simulate_out, "output directory");

    // eval
    auto* eval_cmd = app.add_subcommand(
        "eval", "score the detector on a simulated labeled corpus");
    std::string eval_models, eval_plan, eval_out = "metrics.csv", eval_config;
    eval_cmd->add_option("models_dir", eval_models, "directory of model JSONs")
        ->required();
    eval_cmd->add_option("--plan", eval_plan, "simulation plan JSON")->required();
    eval_cmd->add_option("--out", eval_out, "metrics CSV path");
    eval_cmd->add_option("--config", eval_config, "tool config JSON");

    // grade
    auto* grade_cmd = app.add_subcommand(
        "grade", "grade a ProGuard configuration against a rubric");
    std::string grade_gradle, grade_rules, grade_rubric, grade_app,
        grade_build_type = "release", grade_out;
    bool grade_lenient = false;
    grade_cmd->add_option("gradle", grade_gradle, "build.gradle snippet")
        ->required();
    grade_cmd->add_option("rules", grade_rules, "proguard rules file")->required();
    grade_cmd->add_option("rubric", grade_rubric, "rubric JSON")->required();
    grade_cmd->add_option("--app", grade_app, "model JSON for misspelling checks");
    grade_cmd->add_flag("--lenient", grade_lenient,
                        "class-level keeps satisfy member targets");
    grade_cmd->add_option("--build-type", grade_build_type, "build type to grade");
    grade_cmd->add_option("--out", grade_out, "verdict JSON path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*scan_cmd)
            return run_scan(scan_inputs, scan_main, scan_format, scan_config,
                            scan_out, scan_jobs);
        if (*corpus_cmd)
            return run_corpus(corpus_reports, corpus_metadata, corpus_out,
                              corpus_config);
        if (*simulate_cmd)
            return run_simulate(simulate_inputs, simulate_plan, simulate_out);
        if (*eval_cmd)
            return run_eval(eval_models, eval_plan, eval_out, eval_config);
        if (*grade_cmd)
            return run_grade(grade_gradle, grade_rules, grade_rubric, grade_app,
                             grade_lenient, grade_build_type, grade_out);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternalError;
    }
    return kExitInternalError;
}
