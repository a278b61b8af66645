#pragma once

// Paired baseline-vs-adaptive evaluation: per-image records, aggregate
// summary, and the CSV/JSON report set.
//
// Downstream encoder latency is not measured here. Each record carries a
// proxy cost (tokens x per-token constant) next to the real preprocessing
// time, and the two are never mixed.

#include "adaprep/codec.hpp"
#include "adaprep/csv.hpp"
#include "adaprep/errors.hpp"
#include "adaprep/hash.hpp"
#include "adaprep/pipeline.hpp"
#include "adaprep/quality.hpp"
#include "adaprep/version.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <map>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace adaprep {

struct ManifestEntry {
    std::string name;
    std::variant<std::filesystem::path, Image> source;
};

using Manifest = std::vector<ManifestEntry>;

struct BenchOptions {
    int repeats = 3;
    int workers = 1;
    double proxy_cost_per_token = 1.0;
};

struct PairedRecord {
    std::string image_id;  // SHA-256 of the input bytes
    std::string name;
    bool skipped = false;
    std::string skip_reason;

    ComplexityClass complexity_class = ComplexityClass::Low;
    double complexity_score = 0;
    Dims baseline_dims;
    Dims adaptive_dims;
    std::int64_t baseline_tokens = 0;
    std::int64_t adaptive_tokens = 0;
    double token_reduction = 0;
    double baseline_prep_ms = 0;
    double adaptive_prep_ms = 0;
    double baseline_proxy_cost = 0;
    double adaptive_proxy_cost = 0;
    QualityScore quality;
};

/// Hash of an in-memory raster: dimensions, layout and pixels.
inline std::string image_content_id(const Image& img) {
    const std::string header = std::to_string(img.width()) + "x" + std::to_string(img.height()) + "x" +
                               std::to_string(img.channel_count()) + "\n";
    std::vector<std::uint8_t> bytes(header.begin(), header.end());
    bytes.insert(bytes.end(), img.pixels().begin(), img.pixels().end());
    return sha256_hex(bytes);
}

namespace bench_detail {

using Clock = std::chrono::steady_clock;

/// Lower-middle element for even counts.
inline double lower_median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[(v.size() - 1) / 2];
}

inline double time_ms(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
}

inline PairedRecord measure(const Image& img, const PipelineConfig& cfg, const BenchOptions& opt) {
    std::vector<double> base_ms, adapt_ms;
    std::optional<BaselineResult> base;
    std::optional<AdaptiveResult> adapt;
    for (int r = 0; r < opt.repeats; ++r) {
        const auto t0 = Clock::now();
        base = baseline_preprocess(img, cfg.policy);
        const auto t1 = Clock::now();
        adapt = adaptive_preprocess(img, cfg);
        const auto t2 = Clock::now();
        base_ms.push_back(time_ms(t0, t1));
        adapt_ms.push_back(time_ms(t1, t2));
    }
    if (opt.repeats >= 3) {
        base_ms.erase(base_ms.begin());
        adapt_ms.erase(adapt_ms.begin());
    }

    PairedRecord rec;
    rec.complexity_class = adapt->plan.complexity.complexity;
    rec.complexity_score = adapt->plan.complexity.score;
    rec.baseline_dims = base->placement.output;
    rec.adaptive_dims = adapt->plan.output_dims();
    rec.baseline_tokens = base->tokens.token_count;
    rec.adaptive_tokens = adapt->plan.predicted_tokens;
    rec.token_reduction =
        reduction(base->tokens, token_stats(rec.adaptive_dims.width, rec.adaptive_dims.height, cfg.policy.patch));
    rec.baseline_prep_ms = lower_median(base_ms);
    rec.adaptive_prep_ms = lower_median(adapt_ms);
    rec.baseline_proxy_cost = static_cast<double>(rec.baseline_tokens) * opt.proxy_cost_per_token;
    rec.adaptive_proxy_cost = static_cast<double>(rec.adaptive_tokens) * opt.proxy_cost_per_token;
    rec.quality = quality_score(base->image, adaptive_in_baseline_frame(adapt->image, adapt->plan, base->placement));
    return rec;
}

inline PairedRecord run_one(const ManifestEntry& entry, const PipelineConfig& cfg, const BenchOptions& opt) {
    PairedRecord rec;
    std::string id;
    try {
        std::optional<Image> decoded;
        const Image* img = nullptr;
        if (const auto* path = std::get_if<std::filesystem::path>(&entry.source)) {
            const auto bytes = read_file(*path);
            id = sha256_hex(bytes);
            decoded = decode(bytes);
            img = &*decoded;
        } else {
            img = &std::get<Image>(entry.source);
            id = image_content_id(*img);
        }
        rec = measure(*img, cfg, opt);
    } catch (const Error& e) {
        rec = PairedRecord{};
        rec.skipped = true;
        rec.skip_reason = e.what();
    }
    rec.image_id = id;
    rec.name = entry.name;
    return rec;
}

} // namespace bench_detail

/// Runs both pipelines on every entry. Records come back in manifest order
/// whatever the worker count; unreadable entries become skipped records.
inline std::vector<PairedRecord> run_paired(const Manifest& manifest, const PipelineConfig& config = {},
                                            const BenchOptions& opt = {}) {
    if (manifest.empty()) {
        throw EmptyManifest("no images to benchmark");
    }
    if (opt.repeats < 1) {
        throw ConfigError("bench.repeats must be at least 1");
    }
    const PipelineConfig cfg = config.validated();
    std::vector<PairedRecord> records(manifest.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < manifest.size(); i = next++) {
            records[i] = bench_detail::run_one(manifest[i], cfg, opt);
        }
    };
    const int workers = std::clamp(opt.workers, 1, static_cast<int>(manifest.size()));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }
    return records;
}

struct MetricStats {
    double mean = 0;
    double median = 0;
    double p90 = 0;
};

struct ClassBreakdown {
    int n = 0;
    double mean_token_reduction = 0;
    double mean_baseline_tokens = 0;
    double mean_adaptive_tokens = 0;
    double mean_quality = 0;
};

struct BenchSummary {
    int n = 0;
    int skipped = 0;
    std::map<std::string, MetricStats> metrics;
    double mean_token_reduction = 0;
    std::map<std::string, ClassBreakdown> per_class;
    double wall_clock_total_ms = 0;
};

/// Metric names in report order.
inline const std::vector<std::string>& summary_metric_names() {
    static const std::vector<std::string> names{
        "baseline_tokens",     "adaptive_tokens",     "token_reduction", "baseline_prep_ms",
        "adaptive_prep_ms",    "baseline_proxy_cost", "adaptive_proxy_cost", "quality_value"};
    return names;
}

inline double metric_value(const PairedRecord& r, const std::string& name) {
    if (name == "baseline_tokens") return static_cast<double>(r.baseline_tokens);
    if (name == "adaptive_tokens") return static_cast<double>(r.adaptive_tokens);
    if (name == "token_reduction") return r.token_reduction;
    if (name == "baseline_prep_ms") return r.baseline_prep_ms;
    if (name == "adaptive_prep_ms") return r.adaptive_prep_ms;
    if (name == "baseline_proxy_cost") return r.baseline_proxy_cost;
    if (name == "adaptive_proxy_cost") return r.adaptive_proxy_cost;
    if (name == "quality_value") return r.quality.value;
    throw Error("unknown metric " + name);
}

/// Mean, lower median and nearest-rank 90th percentile.
inline MetricStats metric_stats(const std::vector<double>& values) {
    MetricStats s;
    double sum = 0;
    for (const double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    s.median = sorted[(sorted.size() - 1) / 2];
    const auto rank = static_cast<std::size_t>(std::ceil(0.9 * static_cast<double>(sorted.size())));
    s.p90 = sorted[std::max<std::size_t>(rank, 1) - 1];
    return s;
}

inline BenchSummary summarize(const std::vector<PairedRecord>& records, double wall_clock_total_ms = 0) {
    std::vector<const PairedRecord*> ok;
    for (const auto& r : records) {
        if (!r.skipped) ok.push_back(&r);
    }
    if (ok.empty()) {
        throw AllSkipped(std::to_string(records.size()) + " records, none usable");
    }
    BenchSummary s;
    s.n = static_cast<int>(ok.size());
    s.skipped = static_cast<int>(records.size() - ok.size());
    s.wall_clock_total_ms = wall_clock_total_ms;
    for (const auto& name : summary_metric_names()) {
        std::vector<double> values;
        values.reserve(ok.size());
        for (const auto* r : ok) values.push_back(metric_value(*r, name));
        s.metrics[name] = metric_stats(values);
    }
    s.mean_token_reduction = s.metrics["token_reduction"].mean;

    for (const ComplexityClass c : {ComplexityClass::Low, ComplexityClass::Medium, ComplexityClass::High}) {
        ClassBreakdown b;
        for (const auto* r : ok) {
            if (r->complexity_class != c) continue;
            ++b.n;
            b.mean_token_reduction += r->token_reduction;
            b.mean_baseline_tokens += static_cast<double>(r->baseline_tokens);
            b.mean_adaptive_tokens += static_cast<double>(r->adaptive_tokens);
            b.mean_quality += r->quality.value;
        }
        if (b.n > 0) {
            b.mean_token_reduction /= b.n;
            b.mean_baseline_tokens /= b.n;
            b.mean_adaptive_tokens /= b.n;
            b.mean_quality /= b.n;
        }
        s.per_class[std::string(to_string(c))] = b;
    }
    return s;
}

// ---- report files --------------------------------------------------------

inline constexpr int kSummarySchemaVersion = 1;

/// records.csv columns, in order. The two *_prep_ms columns are the only
/// timing-dependent ones.
inline const std::vector<std::string>& record_columns() {
    static const std::vector<std::string> cols{
        "image_id",         "name",
        "status",           "skip_reason",
        "complexity_class", "complexity_score",
        "baseline_w",       "baseline_h",
        "adaptive_w",       "adaptive_h",
        "baseline_tokens",  "adaptive_tokens",
        "token_reduction",  "baseline_prep_ms",
        "adaptive_prep_ms", "baseline_proxy_cost",
        "adaptive_proxy_cost", "quality_value",
        "quality_method"};
    return cols;
}

inline const std::vector<std::string>& timing_columns() {
    static const std::vector<std::string> cols{"baseline_prep_ms", "adaptive_prep_ms"};
    return cols;
}

inline std::string records_csv(const std::vector<PairedRecord>& records) {
    using csv::format_double;
    std::string out = csv::join(record_columns());
    for (const auto& r : records) {
        if (r.skipped) {
            std::vector<std::string> row(record_columns().size());
            row[0] = r.image_id;
            row[1] = r.name;
            row[2] = "skipped";
            row[3] = r.skip_reason;
            out += csv::join(row);
            continue;
        }
        out += csv::join({r.image_id,
                          r.name,
                          "ok",
                          "",
                          std::string(to_string(r.complexity_class)),
                          format_double(r.complexity_score),
                          std::to_string(r.baseline_dims.width),
                          std::to_string(r.baseline_dims.height),
                          std::to_string(r.adaptive_dims.width),
                          std::to_string(r.adaptive_dims.height),
                          std::to_string(r.baseline_tokens),
                          std::to_string(r.adaptive_tokens),
                          format_double(r.token_reduction),
                          format_double(r.baseline_prep_ms),
                          format_double(r.adaptive_prep_ms),
                          format_double(r.baseline_proxy_cost),
                          format_double(r.adaptive_proxy_cost),
                          format_double(r.quality.value),
                          std::string(to_string(r.quality.method))});
    }
    return out;
}

inline std::vector<PairedRecord> parse_records_csv(std::string_view text) {
    const auto rows = csv::parse(text);
    if (rows.empty() || rows.front() != record_columns()) {
        throw IoError("records.csv header does not match the expected schema");
    }
    std::vector<PairedRecord> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& f = rows[i];
        if (f.size() != record_columns().size()) {
            throw IoError("records.csv row " + std::to_string(i) + " has " + std::to_string(f.size()) + " fields");
        }
        PairedRecord r;
        r.image_id = f[0];
        r.name = f[1];
        if (f[2] == "skipped") {
            r.skipped = true;
            r.skip_reason = f[3];
            out.push_back(std::move(r));
            continue;
        }
        const auto cls = parse_complexity_class(f[4]);
        if (!cls) throw IoError("bad complexity_class '" + f[4] + "'");
        r.complexity_class = *cls;
        r.complexity_score = csv::parse_double(f[5]);
        r.baseline_dims = {static_cast<int>(csv::parse_int(f[6])), static_cast<int>(csv::parse_int(f[7]))};
        r.adaptive_dims = {static_cast<int>(csv::parse_int(f[8])), static_cast<int>(csv::parse_int(f[9]))};
        r.baseline_tokens = csv::parse_int(f[10]);
        r.adaptive_tokens = csv::parse_int(f[11]);
        r.token_reduction = csv::parse_double(f[12]);
        r.baseline_prep_ms = csv::parse_double(f[13]);
        r.adaptive_prep_ms = csv::parse_double(f[14]);
        r.baseline_proxy_cost = csv::parse_double(f[15]);
        r.adaptive_proxy_cost = csv::parse_double(f[16]);
        r.quality.value = csv::parse_double(f[17]);
        if (f[18] == "Ssim") r.quality.method = QualityMethod::Ssim;
        else if (f[18] == "FallbackMad") r.quality.method = QualityMethod::FallbackMad;
        else throw IoError("bad quality_method '" + f[18] + "'");
        out.push_back(std::move(r));
    }
    return out;
}

inline nlohmann::ordered_json summary_json(const BenchSummary& s, double proxy_cost_per_token = 1.0) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSummarySchemaVersion;
    j["build"] = std::string(build_id());
    j["n"] = s.n;
    j["skipped"] = s.skipped;
    j["mean_token_reduction"] = s.mean_token_reduction;
    j["wall_clock_total_ms"] = s.wall_clock_total_ms;
    auto& m = j["metrics"];
    for (const auto& name : summary_metric_names()) {
        const auto& st = s.metrics.at(name);
        m[name] = {{"mean", st.mean}, {"median", st.median}, {"p90", st.p90}};
    }
    auto& pc = j["per_class"];
    for (const char* c : {"Low", "Medium", "High"}) {
        const auto& b = s.per_class.at(c);
        pc[c] = {{"n", b.n},
                 {"mean_token_reduction", b.mean_token_reduction},
                 {"mean_baseline_tokens", b.mean_baseline_tokens},
                 {"mean_adaptive_tokens", b.mean_adaptive_tokens},
                 {"mean_quality", b.mean_quality}};
    }
    j["proxy_cost"] = {
        {"per_token", proxy_cost_per_token},
        {"note", "proxy_cost = visual tokens x per_token; it stands in for encoder and prefill latency, "
                 "which are not measured. *_prep_ms columns are real preprocessing wall time."}};
    return j;
}

/// Writes records.csv, summary.json and the per-figure data files into `dir`.
inline void emit_report(const BenchSummary& summary, const std::vector<PairedRecord>& records,
                        const std::filesystem::path& dir, double proxy_cost_per_token = 1.0) {
    using csv::format_double;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create " + dir.string() + ": " + ec.message());
    }

    write_file(dir / "records.csv", records_csv(records));
    write_file(dir / "summary.json", summary_json(summary, proxy_cost_per_token).dump(2) + "\n");

    std::string fig5 = csv::join({"image_id", "baseline_prep_ms", "adaptive_prep_ms", "baseline_proxy_cost",
                                  "adaptive_proxy_cost"});
    std::string fig7 = csv::join({"image_id", "baseline_tokens", "adaptive_tokens", "token_reduction"});
    std::string fig8 = csv::join({"image_id", "adaptive_tokens", "quality_value", "method"});
    std::string fig9 = csv::join({"image_id", "complexity_class", "quality_value", "method"});
    for (const auto& r : records) {
        if (r.skipped) continue;
        fig5 += csv::join({r.image_id, format_double(r.baseline_prep_ms), format_double(r.adaptive_prep_ms),
                           format_double(r.baseline_proxy_cost), format_double(r.adaptive_proxy_cost)});
        fig7 += csv::join({r.image_id, std::to_string(r.baseline_tokens), std::to_string(r.adaptive_tokens),
                           format_double(r.token_reduction)});
        fig8 += csv::join({r.image_id, std::to_string(r.adaptive_tokens), format_double(r.quality.value),
                           std::string(to_string(r.quality.method))});
        fig9 += csv::join({r.image_id, std::string(to_string(r.complexity_class)), format_double(r.quality.value),
                           std::string(to_string(r.quality.method))});
    }
    const auto& m = summary.metrics;
    std::string fig6 = csv::join({"pipeline", "mean_prep_ms", "mean_proxy_cost", "mean_tokens"});
    fig6 += csv::join({"baseline", format_double(m.at("baseline_prep_ms").mean),
                       format_double(m.at("baseline_proxy_cost").mean), format_double(m.at("baseline_tokens").mean)});
    fig6 += csv::join({"adaptive", format_double(m.at("adaptive_prep_ms").mean),
                       format_double(m.at("adaptive_proxy_cost").mean), format_double(m.at("adaptive_tokens").mean)});

    write_file(dir / "fig5_times.csv", fig5);
    write_file(dir / "fig6_means.csv", fig6);
    write_file(dir / "fig7_reduction.csv", fig7);
    write_file(dir / "fig8_tokens_vs_quality.csv", fig8);
    write_file(dir / "fig9_quality.csv", fig9);
}

} // namespace adaprep
