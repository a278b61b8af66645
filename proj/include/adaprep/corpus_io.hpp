#pragma once

// On-disk corpus layout: one PNG per page plus manifest.json, and input
// discovery for directories of user-supplied images.

#include "adaprep/bench.hpp"
#include "adaprep/codec.hpp"
#include "adaprep/corpus.hpp"
#include "adaprep/version.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <string>
#include <vector>

namespace adaprep {

inline constexpr const char* kManifestName = "manifest.json";

inline nlohmann::ordered_json corpus_manifest(const CorpusSpec& spec, const std::vector<CorpusPage>& pages) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["build"] = std::string(build_id());
    j["seed"] = spec.seed;
    j["counts"] = {{"low", spec.count_low}, {"medium", spec.count_medium}, {"high", spec.count_high}};
    j["page"] = {{"width", spec.page_w}, {"height", spec.page_h}};
    auto& entries = j["entries"] = nlohmann::ordered_json::array();
    for (const auto& p : pages) {
        entries.push_back({{"file", p.filename},
                           {"intended_class", std::string(to_string(p.intended))},
                           {"width", p.image.width()},
                           {"height", p.image.height()},
                           {"seed", spec.seed},
                           {"page_seed", p.seed}});
    }
    return j;
}

/// Writes every page as PNG and the manifest into `dir`.
inline void write_corpus(const CorpusSpec& spec, const std::vector<CorpusPage>& pages,
                         const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create " + dir.string() + ": " + ec.message());
    }
    for (const auto& p : pages) {
        save_png(dir / p.filename, p.image);
    }
    write_file(dir / kManifestName, corpus_manifest(spec, pages).dump(2) + "\n");
}

inline bool has_image_extension(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

/// Input files in manifest order. A directory with manifest.json follows its
/// entry order; otherwise image files sorted by name. A plain file is itself.
inline std::vector<std::filesystem::path> list_inputs(const std::filesystem::path& input) {
    namespace fs = std::filesystem;
    if (!fs::exists(input)) {
        throw IoError("no such file or directory: " + input.string());
    }
    if (!fs::is_directory(input)) {
        return {input};
    }
    std::vector<fs::path> files;
    if (fs::exists(input / kManifestName)) {
        const auto bytes = read_file(input / kManifestName);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(bytes.begin(), bytes.end());
            for (const auto& e : j.at("entries")) {
                files.push_back(input / e.at("file").get<std::string>());
            }
        } catch (const nlohmann::json::exception& e) {
            throw IoError("bad manifest " + (input / kManifestName).string() + ": " + e.what());
        }
        return files;
    }
    for (const auto& entry : fs::directory_iterator(input)) {
        if (entry.is_regular_file() && has_image_extension(entry.path())) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

inline Manifest manifest_from_paths(const std::vector<std::filesystem::path>& paths) {
    Manifest m;
    m.reserve(paths.size());
    for (const auto& p : paths) {
        m.push_back({p.filename().string(), p});
    }
    return m;
}

inline Manifest manifest_from_corpus(std::vector<CorpusPage> pages) {
    Manifest m;
    m.reserve(pages.size());
    for (auto& p : pages) {
        m.push_back({p.filename, std::move(p.image)});
    }
    return m;
}

} // namespace adaprep
