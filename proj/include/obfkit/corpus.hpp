#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "obfkit/errors.hpp"
#include "obfkit/report.hpp"

namespace obfkit {

inline const std::vector<std::string>& download_buckets() {
    static const std::vector<std::string> buckets = {
        "0+", "10+", "100+", "1k+", "10k+", "100k+", "1M+", "10M+", "100M+"};
    return buckets;
}

inline bool is_download_bucket(const std::string& s) {
    const auto& b = download_buckets();
    return std::find(b.begin(), b.end(), s) != b.end();
}

struct CorpusRecord {
    std::string app_id;
    FeatureReport report;
    std::string downloads_bucket;  // one of download_buckets()
    std::string account_id;
    std::string last_update;  // ISO-8601 date
};

struct CorpusOptions {
    // Library scope = leading min(scope_max_depth, segments-1) package
    // segments; single-segment packages are their own scope.
    std::size_t scope_max_depth = 3;
    std::vector<std::size_t> account_bucket_edges = {1, 2, 10, 100, 250, 500};
    // Default macro-average (mean of per-account rates); micro pools apps.
    bool micro_average_accounts = false;
};

inline std::string scope_of(const std::string& package, std::size_t max_depth = 3) {
    std::vector<std::size_t> dots;
    for (std::size_t i = 0; i < package.size(); ++i)
        if (package[i] == '.') dots.push_back(i);
    if (dots.empty()) return package;
    std::size_t want = std::min(max_depth, dots.size());  // segments-1 == dots
    return package.substr(0, dots[want - 1]);
}

inline bool parse_iso_date(const std::string& s, std::string* month_out = nullptr) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (s[i] < '0' || s[i] > '9') return false;
    int month = (s[5] - '0') * 10 + (s[6] - '0');
    int day = (s[8] - '0') * 10 + (s[9] - '0');
    if (month < 1 || month > 12 || day < 1 || day > 31) return false;
    if (month_out) *month_out = s.substr(0, 7);
    return true;
}

inline std::string format_percent(double fraction_times_100) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", fraction_times_100);
    return buf;
}

inline std::string percent_of(std::size_t numerator, std::size_t denominator) {
    if (denominator == 0) return "0.00";
    return format_percent(static_cast<double>(numerator) * 100.0 /
                          static_cast<double>(denominator));
}

// --- result tables ----------------------------------------------------------

struct BucketRow {
    std::string bucket;
    std::size_t total_apps = 0;
    std::size_t apps_with_main = 0;
    std::size_t obfuscated_main = 0;
    std::string percent = "0.00";
    std::size_t no_main = 0;

    bool operator==(const BucketRow&) const = default;
};

struct AccountRow {
    std::string bucket;
    std::size_t accounts = 0;
    std::string avg_percent = "0.00";

    bool operator==(const AccountRow&) const = default;
};

struct MonthRow {
    std::string month;
    std::size_t total_apps = 0;
    std::size_t apps_with_main = 0;
    std::string percent_all = "0.00";
    std::string percent_main = "0.00";

    bool operator==(const MonthRow&) const = default;
};

struct ScopeStat {
    std::string scope;
    std::size_t package_count = 0;
    std::size_t unique_apps = 0;

    bool operator==(const ScopeStat&) const = default;
};

struct OrphanBound {
    std::size_t orphan_apps = 0;
    std::size_t total_apps = 0;
    std::string percent = "0.00";

    bool operator==(const OrphanBound&) const = default;
};

struct CorpusTables {
    std::vector<BucketRow> download_buckets;
    std::vector<AccountRow> account_buckets;
    std::size_t accounts_without_main_view = 0;
    std::vector<MonthRow> monthly_trend;
    std::size_t skipped_dates = 0;
    std::vector<ScopeStat> scope_ranking;
    OrphanBound orphan_bound;
};

// --- mergeable aggregation ----------------------------------------------------

// One pass over the corpus; partitions can be aggregated independently and
// merged. "Obfuscated" means class-name obfuscation throughout, the feature
// every ProGuard-family tool implements.
class CorpusAggregator {
public:
    explicit CorpusAggregator(CorpusOptions options = {})
        : options_(std::move(options)) {}

    // Full record: feeds every table.
    void add(const CorpusRecord& record) {
        add_report(record.report);
        std::optional<bool> main_flag = main_class_flag(record.report);

        BucketCell& bucket = buckets_[record.downloads_bucket];
        ++bucket.total;
        if (main_flag) {
            ++bucket.with_main;
            if (*main_flag) ++bucket.flagged;
        }

        AccountCell& account = accounts_[record.account_id];
        ++account.apps;
        if (main_flag) {
            ++account.with_main;
            if (*main_flag) ++account.flagged;
        }

        std::string month;
        if (parse_iso_date(record.last_update, &month)) {
            MonthCell& cell = months_[month];
            ++cell.total;
            if (report_all_flag(record.report)) ++cell.all_flagged;
            if (main_flag) {
                ++cell.with_main;
                if (*main_flag) ++cell.main_flagged;
            }
        } else {
            ++skipped_dates_;
        }
    }

    // Report without store metadata: feeds only scope ranking and the orphan
    // bound (both are metadata-free).
    void add_report(const FeatureReport& report) {
        ++total_apps_;
        std::vector<std::string> obfuscated;
        for (const auto& [pkg, detail] : report.packages) {
            if (detail.class_count == 0) continue;  // segment-only ancestor entry
            ++package_occurrences_[pkg];
            if (detail.flags.class_name_obfuscated) {
                obfuscated.push_back(pkg);
                ScopeCell& cell = scopes_[scope_of(pkg, options_.scope_max_depth)];
                ++cell.package_count;
                cell.apps.insert(report.app_id);
            }
        }
        std::optional<bool> main_flag = main_class_flag(report);
        if (main_flag && !*main_flag && !obfuscated.empty())
            orphan_candidates_.emplace_back(report.app_id, std::move(obfuscated));
    }

    void merge(const CorpusAggregator& other) {
        total_apps_ += other.total_apps_;
        skipped_dates_ += other.skipped_dates_;
        for (const auto& [k, v] : other.buckets_) {
            BucketCell& c = buckets_[k];
            c.total += v.total;
            c.with_main += v.with_main;
            c.flagged += v.flagged;
        }
        for (const auto& [k, v] : other.accounts_) {
            AccountCell& c = accounts_[k];
            c.apps += v.apps;
            c.with_main += v.with_main;
            c.flagged += v.flagged;
        }
        for (const auto& [k, v] : other.months_) {
            MonthCell& c = months_[k];
            c.total += v.total;
            c.with_main += v.with_main;
            c.all_flagged += v.all_flagged;
            c.main_flagged += v.main_flagged;
        }
        for (const auto& [k, v] : other.scopes_) {
            ScopeCell& c = scopes_[k];
            c.package_count += v.package_count;
            c.apps.insert(v.apps.begin(), v.apps.end());
        }
        for (const auto& [k, v] : other.package_occurrences_)
            package_occurrences_[k] += v;
        orphan_candidates_.insert(orphan_candidates_.end(),
                                  other.orphan_candidates_.begin(),
                                  other.orphan_candidates_.end());
    }

    CorpusTables tables() const {
        CorpusTables out;

        for (const std::string& bucket : download_buckets()) {
            auto it = buckets_.find(bucket);
            if (it == buckets_.end()) continue;
            const BucketCell& cell = it->second;
            BucketRow row;
            row.bucket = bucket;
            row.total_apps = cell.total;
            row.apps_with_main = cell.with_main;
            row.obfuscated_main = cell.flagged;
            row.percent = percent_of(cell.flagged, cell.with_main);
            row.no_main = cell.total - cell.with_main;
            out.download_buckets.push_back(std::move(row));
        }

        // Accounts: buckets are cumulative lower bounds (an account with
        // >= e apps lands in bucket e for every edge it clears).
        // Macro-average per-account rates in sorted-account order; micro pools
        // the apps instead.
        std::map<std::size_t, std::vector<const AccountCell*>> by_edge;
        for (const auto& [account, cell] : accounts_) {
            if (cell.with_main == 0) {
                ++out.accounts_without_main_view;
                continue;
            }
            for (std::size_t e : options_.account_bucket_edges)
                if (cell.apps >= e) by_edge[e].push_back(&cell);
        }
        for (std::size_t edge : options_.account_bucket_edges) {
            auto it = by_edge.find(edge);
            if (it == by_edge.end()) continue;
            AccountRow row;
            row.bucket = edge == 1 ? "1" : std::to_string(edge) + "+";
            row.accounts = it->second.size();
            if (options_.micro_average_accounts) {
                std::size_t flagged = 0, with_main = 0;
                for (const AccountCell* cell : it->second) {
                    flagged += cell->flagged;
                    with_main += cell->with_main;
                }
                row.avg_percent = percent_of(flagged, with_main);
            } else {
                double sum = 0.0;
                for (const AccountCell* cell : it->second)
                    sum += static_cast<double>(cell->flagged) /
                           static_cast<double>(cell->with_main);
                row.avg_percent = format_percent(
                    sum / static_cast<double>(it->second.size()) * 100.0);
            }
            out.account_buckets.push_back(std::move(row));
        }

        for (const auto& [month, cell] : months_) {
            MonthRow row;
            row.month = month;
            row.total_apps = cell.total;
            row.apps_with_main = cell.with_main;
            row.percent_all = percent_of(cell.all_flagged, cell.total);
            row.percent_main = percent_of(cell.main_flagged, cell.with_main);
            out.monthly_trend.push_back(std::move(row));
        }
        out.skipped_dates = skipped_dates_;

        for (const auto& [scope, cell] : scopes_) {
            out.scope_ranking.push_back(
                ScopeStat{scope, cell.package_count, cell.apps.size()});
        }
        std::sort(out.scope_ranking.begin(), out.scope_ranking.end(),
                  [](const ScopeStat& a, const ScopeStat& b) {
                      if (a.unique_apps != b.unique_apps)
                          return a.unique_apps > b.unique_apps;
                      if (a.package_count != b.package_count)
                          return a.package_count > b.package_count;
                      return a.scope < b.scope;
                  });

        out.orphan_bound.total_apps = total_apps_;
        for (const auto& [app_id, packages] : orphan_candidates_) {
            bool orphan = std::any_of(
                packages.begin(), packages.end(), [&](const std::string& pkg) {
                    auto it = package_occurrences_.find(pkg);
                    return it != package_occurrences_.end() && it->second == 1;
                });
            if (orphan) ++out.orphan_bound.orphan_apps;
        }
        out.orphan_bound.percent =
            percent_of(out.orphan_bound.orphan_apps, total_apps_);
        return out;
    }

    static std::optional<bool> main_class_flag(const FeatureReport& report) {
        if (!report.main_package) return std::nullopt;
        return report.main_package->class_name_obfuscated;
    }

    static bool report_all_flag(const FeatureReport& report) {
        return report.all_packages.class_name_obfuscated;
    }

private:
    struct BucketCell {
        std::size_t total = 0, with_main = 0, flagged = 0;
    };
    struct AccountCell {
        std::size_t apps = 0, with_main = 0, flagged = 0;
    };
    struct MonthCell {
        std::size_t total = 0, with_main = 0, all_flagged = 0, main_flagged = 0;
    };
    struct ScopeCell {
        std::size_t package_count = 0;
        std::set<std::string> apps;
    };

    CorpusOptions options_;
    std::size_t total_apps_ = 0;
    std::size_t skipped_dates_ = 0;
    std::map<std::string, BucketCell> buckets_;
    std::map<std::string, AccountCell> accounts_;
    std::map<std::string, MonthCell> months_;
    std::map<std::string, ScopeCell> scopes_;
    std::map<std::string, std::size_t> package_occurrences_;
    std::vector<std::pair<std::string, std::vector<std::string>>> orphan_candidates_;
};

// --- metadata CSV ---------------------------------------------------------------

struct MetadataRow {
    std::string downloads_bucket;
    std::string account_id;
    std::string last_update;
};

struct MetadataTable {
    std::map<std::string, MetadataRow> rows;  // keyed by app_id
    std::size_t skipped_rows = 0;
    std::vector<std::string> warnings;
};

// Columns: app_id,downloads_bucket,account_id,last_update. Malformed rows are
// skipped with a warning, not fatal.
inline MetadataTable parse_metadata_csv(const std::string& text) {
    MetadataTable table;
    std::size_t line_no = 0;
    std::size_t start = 0;
    bool header_seen = false;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        std::string line = text.substr(
            start, end == std::string::npos ? std::string::npos : end - start);
        start = end == std::string::npos ? text.size() + 1 : end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::vector<std::string> cols;
        std::size_t field_start = 0;
        while (true) {
            std::size_t comma = line.find(',', field_start);
            cols.push_back(line.substr(field_start, comma == std::string::npos
                                                        ? std::string::npos
                                                        : comma - field_start));
            if (comma == std::string::npos) break;
            field_start = comma + 1;
        }
        if (!header_seen) {
            header_seen = true;
            if (!cols.empty() && cols[0] == "app_id") continue;  // header row
        }
        auto skip = [&](const std::string& why) {
            ++table.skipped_rows;
            table.warnings.push_back("line " + std::to_string(line_no) + ": " + why);
        };
        if (cols.size() != 4) {
            skip("expected 4 columns, got " + std::to_string(cols.size()));
            continue;
        }
        if (cols[0].empty()) {
            skip("empty app_id");
            continue;
        }
        if (!is_download_bucket(cols[1])) {
            skip("unknown downloads bucket '" + cols[1] + "'");
            continue;
        }
        if (!parse_iso_date(cols[3])) {
            skip("unparseable date '" + cols[3] + "'");
            continue;
        }
        table.rows[cols[0]] = MetadataRow{cols[1], cols[2], cols[3]};
    }
    return table;
}

// --- rendering --------------------------------------------------------------------

inline std::string to_csv(const std::vector<BucketRow>& rows) {
    std::string out =
        "bucket,total_apps,apps_with_main,obfuscated_main,percent,no_main\n";
    for (const auto& r : rows)
        out += r.bucket + "," + std::to_string(r.total_apps) + "," +
               std::to_string(r.apps_with_main) + "," +
               std::to_string(r.obfuscated_main) + "," + r.percent + "," +
               std::to_string(r.no_main) + "\n";
    return out;
}

inline std::string to_csv(const std::vector<AccountRow>& rows) {
    std::string out = "bucket,accounts,avg_percent\n";
    for (const auto& r : rows)
        out += r.bucket + "," + std::to_string(r.accounts) + "," + r.avg_percent +
               "\n";
    return out;
}

inline std::string to_csv(const std::vector<MonthRow>& rows) {
    std::string out = "month,total_apps,apps_with_main,percent_all,percent_main\n";
    for (const auto& r : rows)
        out += r.month + "," + std::to_string(r.total_apps) + "," +
               std::to_string(r.apps_with_main) + "," + r.percent_all + "," +
               r.percent_main + "\n";
    return out;
}

inline std::string to_csv(const std::vector<ScopeStat>& rows) {
    std::string out = "scope,package_count,unique_apps\n";
    for (const auto& r : rows)
        out += r.scope + "," + std::to_string(r.package_count) + "," +
               std::to_string(r.unique_apps) + "\n";
    return out;
}

inline std::string to_csv(const OrphanBound& bound) {
    return "orphan_apps,total_apps,percent\n" +
           std::to_string(bound.orphan_apps) + "," +
           std::to_string(bound.total_apps) + "," + bound.percent + "\n";
}

// Plot-ready two-column series (month,percent).
inline std::string trend_series_csv(const std::vector<MonthRow>& rows,
                                    bool main_view) {
    std::string out = "month,percent\n";
    for (const auto& r : rows)
        out += r.month + "," + (main_view ? r.percent_main : r.percent_all) + "\n";
    return out;
}

inline nlohmann::ordered_json to_json(const std::vector<BucketRow>& rows) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rows)
        arr.push_back({{"bucket", r.bucket},
                       {"total_apps", r.total_apps},
                       {"apps_with_main", r.apps_with_main},
                       {"obfuscated_main", r.obfuscated_main},
                       {"percent", r.percent},
                       {"no_main", r.no_main}});
    return arr;
}

inline nlohmann::ordered_json to_json(const std::vector<AccountRow>& rows) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rows)
        arr.push_back({{"bucket", r.bucket},
                       {"accounts", r.accounts},
                       {"avg_percent", r.avg_percent}});
    return arr;
}

inline nlohmann::ordered_json to_json(const std::vector<MonthRow>& rows) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rows)
        arr.push_back({{"month", r.month},
                       {"total_apps", r.total_apps},
                       {"apps_with_main", r.apps_with_main},
                       {"percent_all", r.percent_all},
                       {"percent_main", r.percent_main}});
    return arr;
}

inline nlohmann::ordered_json to_json(const std::vector<ScopeStat>& rows) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rows)
        arr.push_back({{"scope", r.scope},
                       {"package_count", r.package_count},
                       {"unique_apps", r.unique_apps}});
    return arr;
}

inline nlohmann::ordered_json to_json(const OrphanBound& bound) {
    return {{"orphan_apps", bound.orphan_apps},
            {"total_apps", bound.total_apps},
            {"percent", bound.percent}};
}

}  // namespace obfkit
