// adaprep: command-line front end.
//
//   adaprep analyze <input>
//   adaprep preprocess <input> --mode baseline|adaptive --out DIR
//   adaprep gen-corpus --seed N --counts L,M,H --dims WxH --out DIR
//   adaprep bench [<input>] --config FILE --out DIR --workers N --repeats N
//
// Flags override the config file. ADAPREP_OUT_DIR overrides the config's
// output directory but not --out.

#include "adaprep/adaprep.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace adaprep;

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<int> repeats;
    bool no_crop = false;
    std::optional<int> patch;
    std::string tiers;
    bool debug = false;
};

std::vector<int> parse_int_list(const std::string& text, std::size_t expected, const char* flag) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError(std::string(flag) + ": '" + item + "' is not an integer");
        }
    }
    if (out.size() != expected) {
        throw ConfigError(std::string(flag) + " expects " + std::to_string(expected) + " comma-separated integers");
    }
    return out;
}

CliConfig resolve_config(const CommonFlags& f) {
    CliConfig cfg = f.config_path.empty() ? CliConfig{} : load_config(f.config_path);
    if (const char* env = std::getenv("ADAPREP_OUT_DIR"); env != nullptr && *env != '\0') {
        cfg.bench.output_dir = env;
    }
    if (!f.out.empty()) cfg.bench.output_dir = f.out;
    if (f.workers) cfg.bench.options.workers = *f.workers;
    if (f.repeats) cfg.bench.options.repeats = *f.repeats;
    if (f.no_crop) cfg.pipeline.crop.enabled = false;
    if (f.patch) cfg.pipeline.policy.patch = *f.patch;
    if (!f.tiers.empty()) {
        const auto t = parse_int_list(f.tiers, 3, "--tiers");
        cfg.pipeline.policy.low_side = t[0];
        cfg.pipeline.policy.medium_side = t[1];
        cfg.pipeline.policy.high_side = t[2];
    }
    if (cfg.bench.options.workers < 1) throw ConfigError("--workers must be at least 1");
    if (cfg.bench.options.repeats < 1) throw ConfigError("--repeats must be at least 1");
    cfg.pipeline = cfg.pipeline.validated();
    return cfg;
}

fs::path require_out(const CliConfig& cfg, const char* cmd) {
    if (!cfg.bench.output_dir) {
        throw ConfigError(std::string(cmd) + " needs an output directory (--out, ADAPREP_OUT_DIR or bench.output_dir)");
    }
    return *cfg.bench.output_dir;
}

int cmd_analyze(const std::string& input, const CommonFlags& flags) {
    const CliConfig cfg = resolve_config(flags);
    int emitted = 0;
    for (const auto& path : list_inputs(input)) {
        try {
            const Image img = load_image(path);
            const auto j = to_json(analyze(img, cfg.pipeline.analyzer));
            nlohmann::ordered_json line;
            line["file"] = path.filename().string();
            for (const auto& [k, v] : j.items()) line[k] = v;
            std::cout << line.dump() << '\n';
            ++emitted;
        } catch (const Error& e) {
            std::cerr << "skip " << path.string() << ": " << e.what() << '\n';
        }
    }
    if (emitted == 0) {
        std::cerr << "error: no readable images in " << input << '\n';
        return 1;
    }
    return 0;
}

Image debug_overlay(const Image& img, const std::optional<CropBox>& box) {
    const Image gray = to_gray(img);
    Image rgb(gray.width(), gray.height(), Channels::Rgb8);
    for (int y = 0; y < gray.height(); ++y) {
        for (int x = 0; x < gray.width(); ++x) {
            for (int c = 0; c < 3; ++c) rgb.at(x, y, c) = gray.at(x, y);
        }
    }
    if (box) {
        auto mark = [&](int x, int y) {
            rgb.at(x, y, 0) = 255;
            rgb.at(x, y, 1) = 0;
            rgb.at(x, y, 2) = 0;
        };
        for (int t = 0; t < 3; ++t) {
            for (int x = box->x; x < box->x + box->w; ++x) {
                mark(x, std::min(box->y + t, gray.height() - 1));
                mark(x, std::max(box->y + box->h - 1 - t, 0));
            }
            for (int y = box->y; y < box->y + box->h; ++y) {
                mark(std::min(box->x + t, gray.width() - 1), y);
                mark(std::max(box->x + box->w - 1 - t, 0), y);
            }
        }
    }
    return rgb;
}

int cmd_preprocess(const std::string& input, const std::string& mode, const CommonFlags& flags) {
    const CliConfig cfg = resolve_config(flags);
    const fs::path out_dir = require_out(cfg, "preprocess");
    fs::create_directories(out_dir);
    int written = 0;
    for (const auto& path : list_inputs(input)) {
        try {
            const Image img = load_image(path);
            const std::string stem = path.stem().string();
            const BaselineResult base = baseline_preprocess(img, cfg.pipeline.policy);
            nlohmann::ordered_json plan;
            plan["build"] = std::string(build_id());
            plan["source"] = path.filename().string();
            plan["mode"] = mode;
            if (mode == "baseline") {
                save_png(out_dir / (stem + ".png"), base.image);
                plan["output_dims"] = {base.placement.output.width, base.placement.output.height};
                plan["content_dims"] = {base.placement.content.width, base.placement.content.height};
                plan["pad_offset"] = {base.placement.offset_x, base.placement.offset_y};
                plan["tokens"] = base.tokens.token_count;
            } else {
                const AdaptiveResult res = adaptive_preprocess(img, cfg.pipeline);
                save_png(out_dir / (stem + ".png"), res.image);
                const auto plan_fields = to_json(res.plan);
                for (const auto& [k, v] : plan_fields.items()) plan[k] = v;
                plan["baseline_tokens"] = base.tokens.token_count;
                plan["token_reduction"] =
                    reduction(base.tokens, token_stats(res.plan.output_dims().width, res.plan.output_dims().height,
                                                       res.plan.patch));
                if (flags.debug) {
                    const ContentMask mask = content_mask(to_gray(img), cfg.pipeline.crop);
                    Image m(mask.width, mask.height, Channels::Gray8);
                    for (std::size_t i = 0; i < mask.bits.size(); ++i) m.pixels()[i] = mask.bits[i] ? 0 : 255;
                    save_png(out_dir / (stem + ".mask.png"), m);
                    save_png(out_dir / (stem + ".overlay.png"), debug_overlay(img, res.plan.crop_box));
                }
            }
            write_file(out_dir / (stem + ".plan.json"), plan.dump(2) + "\n");
            ++written;
        } catch (const DecodeError& e) {
            std::cerr << "skip " << path.string() << ": " << e.what() << '\n';
        }
    }
    if (written == 0) {
        std::cerr << "error: no readable images in " << input << '\n';
        return 1;
    }
    return 0;
}

int cmd_gen_corpus(const CommonFlags& flags, const std::string& counts, const std::string& dims) {
    CorpusSpec spec;
    if (flags.seed) spec.seed = *flags.seed;
    if (!counts.empty()) {
        const auto c = parse_int_list(counts, 3, "--counts");
        spec.count_low = c[0];
        spec.count_medium = c[1];
        spec.count_high = c[2];
    }
    if (!dims.empty()) {
        const auto x = dims.find('x');
        if (x == std::string::npos) throw ConfigError("--dims expects WxH");
        std::string wh = dims;
        wh[x] = ',';
        const auto d = parse_int_list(wh, 2, "--dims");
        spec.page_w = d[0];
        spec.page_h = d[1];
    }
    CliConfig cfg;
    if (const char* env = std::getenv("ADAPREP_OUT_DIR"); env != nullptr && *env != '\0') cfg.bench.output_dir = env;
    if (!flags.out.empty()) cfg.bench.output_dir = flags.out;
    const fs::path out_dir = require_out(cfg, "gen-corpus");
    const auto pages = generate(spec);
    write_corpus(spec, pages, out_dir);
    std::cout << "wrote " << pages.size() << " pages and " << kManifestName << " to " << out_dir.string() << '\n';
    return 0;
}

int cmd_bench(const std::string& input, const CommonFlags& flags) {
    const CliConfig cfg = resolve_config(flags);
    const fs::path out_dir = require_out(cfg, "bench");
    Manifest manifest;
    if (input.empty()) {
        CorpusSpec spec;
        if (flags.seed) spec.seed = *flags.seed;
        manifest = manifest_from_corpus(generate(spec));
    } else {
        manifest = manifest_from_paths(list_inputs(input));
    }
    const auto t0 = std::chrono::steady_clock::now();
    const auto records = run_paired(manifest, cfg.pipeline, cfg.bench.options);
    const double wall = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& r : records) {
        if (r.skipped) std::cerr << "skip " << r.name << ": " << r.skip_reason << '\n';
    }
    const BenchSummary summary = summarize(records, wall);
    emit_report(summary, records, out_dir, cfg.bench.options.proxy_cost_per_token);
    std::cout << "build=" << build_id() << " n=" << summary.n << " skipped=" << summary.skipped
              << " mean_token_reduction=" << summary.mean_token_reduction
              << " mean_baseline_prep_ms=" << summary.metrics.at("baseline_prep_ms").mean
              << " mean_adaptive_prep_ms=" << summary.metrics.at("adaptive_prep_ms").mean
              << " mean_quality=" << summary.metrics.at("quality_value").mean << " report=" << out_dir.string()
              << '\n';
    return 0;
}

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "JSON config file");
    cmd->add_option("--out", f.out, "Output directory");
    cmd->add_option("--workers", f.workers, "Worker threads for bench");
    cmd->add_option("--repeats", f.repeats, "Timed repeats per image");
    cmd->add_flag("--no-crop", f.no_crop, "Disable content-aware cropping");
    cmd->add_option("--patch", f.patch, "Patch side in pixels for token accounting");
    cmd->add_option("--tiers", f.tiers, "Long-side tiers L,M,H");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive visual preprocessing for vision-language model inputs"};
    app.set_version_flag("--version", std::string(build_id()));
    app.require_subcommand(1);

    CommonFlags flags;
    std::string input;
    std::string mode = "adaptive";
    std::string counts;
    std::string dims;

    auto* analyze_cmd = app.add_subcommand("analyze", "Print complexity signals as JSON lines");
    analyze_cmd->add_option("input", input, "Image file or directory")->required();
    add_common(analyze_cmd, flags);

    auto* prep_cmd = app.add_subcommand("preprocess", "Write preprocessed PNGs and plan JSON");
    prep_cmd->add_option("input", input, "Image file or directory")->required();
    prep_cmd->add_option("--mode", mode, "baseline or adaptive")->check(CLI::IsMember({"baseline", "adaptive"}));
    prep_cmd->add_flag("--debug", flags.debug, "Also dump content mask and crop overlay PNGs");
    add_common(prep_cmd, flags);

    auto* gen_cmd = app.add_subcommand("gen-corpus", "Generate the synthetic document corpus");
    gen_cmd->add_option("--seed", flags.seed, "Corpus seed (default 42)");
    gen_cmd->add_option("--counts", counts, "Page counts L,M,H (default 12,10,10)");
    gen_cmd->add_option("--dims", dims, "Page size WxH (default 1700x2200)");
    gen_cmd->add_option("--out", flags.out, "Output directory");

    auto* bench_cmd = app.add_subcommand("bench", "Paired baseline/adaptive benchmark with CSV/JSON reports");
    bench_cmd->add_option("input", input, "Image directory (default: in-memory synthetic corpus)");
    bench_cmd->add_option("--seed", flags.seed, "Seed for the in-memory corpus");
    add_common(bench_cmd, flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze_cmd->parsed()) return cmd_analyze(input, flags);
        if (prep_cmd->parsed()) return cmd_preprocess(input, mode, flags);
        if (gen_cmd->parsed()) return cmd_gen_corpus(flags, counts, dims);
        if (bench_cmd->parsed()) return cmd_bench(input, flags);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: IoError: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
