#pragma once

// Corpus manifests ("path<TAB>palm_id<TAB>sample_id") and synthetic corpus generation.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "palmroi/error.hpp"
#include "palmroi/pgm.hpp"
#include "palmroi/synth.hpp"

namespace palmroi {

struct ManifestEntry {
    std::filesystem::path path;
    std::string palm_id;
    std::string sample_id;

    bool operator==(const ManifestEntry&) const = default;
};

inline constexpr const char* kManifestName = "manifest.tsv";

/// Reads a manifest; relative image paths are resolved against the manifest's directory.
inline std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest) {
    std::ifstream in(manifest);
    if (!in) throw IoError("cannot open manifest: " + manifest.string());
    const auto base = manifest.parent_path();
    std::vector<ManifestEntry> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto t1 = line.find('\t');
        const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
            throw ParseError(manifest.string() + ":" + std::to_string(lineno) + ": expected path, palm_id, sample_id");
        }
        std::filesystem::path p = line.substr(0, t1);
        if (p.is_relative()) p = base / p;
        entries.push_back({p, line.substr(t1 + 1, t2 - t1 - 1), line.substr(t2 + 1)});
    }
    return entries;
}

inline void write_manifest(const std::filesystem::path& manifest, const std::vector<ManifestEntry>& entries) {
    std::ofstream out(manifest, std::ios::trunc);
    if (!out) throw IoError("cannot write manifest: " + manifest.string());
    for (const ManifestEntry& e : entries) {
        out << e.path.generic_string() << '\t' << e.palm_id << '\t' << e.sample_id << '\n';
    }
    if (!out) throw IoError("write failed: " + manifest.string());
}

struct CorpusSpec {
    int identities = 10;
    int samples_per_identity = 12;
    std::uint64_t master_seed = 20130501;
    int width = 384;
    int height = 284;
    SynthParams params;
};

inline std::string palm_label(int identity) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "palm%02d", identity);
    return buf;
}

inline std::string sample_label(int sample) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "s%02d", sample);
    return buf;
}

/// Renders sample `sample` of identity `identity` exactly as generate_corpus would.
inline GrayImage corpus_image(const CorpusSpec& spec, int identity, int sample) {
    const PalmModel model = make_palm_model(identity_seed(spec.master_seed, static_cast<std::uint64_t>(identity)),
                                            spec.width, spec.height, spec.params);
    const SampleJitter jitter = make_sample_jitter(
        sample_seed(spec.master_seed, static_cast<std::uint64_t>(identity), static_cast<std::uint64_t>(sample)),
        spec.params);
    return generate_palm(model, jitter, spec.width, spec.height);
}

/**
 * @brief Writes one PGM per (identity, sample) plus manifest.tsv into `out_dir`.
 *
 * Manifest paths are relative to `out_dir`. Returns the entries with
 * absolute-or-as-given paths under `out_dir`.
 */
inline std::vector<ManifestEntry> generate_corpus(const CorpusSpec& spec, const std::filesystem::path& out_dir) {
    if (spec.identities < 1 || spec.samples_per_identity < 1) {
        throw InvalidArgument("corpus needs at least one identity and one sample");
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec || !std::filesystem::is_directory(out_dir)) {
        throw IoError("cannot create output directory: " + out_dir.string());
    }
    std::vector<ManifestEntry> relative;
    std::vector<ManifestEntry> entries;
    for (int i = 0; i < spec.identities; ++i) {
        const PalmModel model =
            make_palm_model(identity_seed(spec.master_seed, static_cast<std::uint64_t>(i)), spec.width, spec.height,
                            spec.params);
        for (int s = 0; s < spec.samples_per_identity; ++s) {
            const SampleJitter jitter = make_sample_jitter(
                sample_seed(spec.master_seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(s)), spec.params);
            const std::string name = palm_label(i) + "_" + sample_label(s) + ".pgm";
            save_pgm(generate_palm(model, jitter, spec.width, spec.height), out_dir / name);
            relative.push_back({name, palm_label(i), sample_label(s)});
            entries.push_back({out_dir / name, palm_label(i), sample_label(s)});
        }
    }
    write_manifest(out_dir / kManifestName, relative);
    return entries;
}

}  // namespace palmroi
