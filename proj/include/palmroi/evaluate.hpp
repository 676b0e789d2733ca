#pragma once

// Identification experiment: ROI-cropped features versus full-frame features.
//
// Per identity the first round(train_fraction * n) manifest samples are
// enrolled and the rest are queried. The common ROI is fit on the enrolled
// images only and then applied unchanged to the queries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "palmroi/corpus.hpp"
#include "palmroi/edge.hpp"
#include "palmroi/features.hpp"
#include "palmroi/histogram.hpp"
#include "palmroi/matcher.hpp"
#include "palmroi/pgm.hpp"
#include "palmroi/roi.hpp"

namespace palmroi {

struct RunConfig {
    RoiParams roi;
    std::vector<int> ks{4, 8, 16};
    Metric metric = Metric::euclidean;
    double train_fraction = 0.5;
    bool resubstitute = false;  ///< enroll and query the same samples
    int threads = 1;

    void validate() const {
        roi.validate();
        if (ks.empty()) throw InvalidArgument("no feature sizes given");
        for (int k : ks) grid_shape(k);
        if (!resubstitute && !(train_fraction > 0.0 && train_fraction < 1.0)) {
            throw InvalidArgument("train fraction must lie strictly between 0 and 1");
        }
        if (threads < 1) throw InvalidArgument("threads must be >= 1");
    }
};

/// Runs fn(i) for i in [0, n) on up to `threads` workers. When several calls
/// throw, the exception of the lowest index is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    std::vector<std::exception_ptr> errors(n);
    auto run = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < n; i += stride) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1 || n < 2) {
        run(0, 1);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t count = std::min(workers, n);
        for (std::size_t w = 0; w < count; ++w) pool.emplace_back(run, w, count);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

inline Split split_corpus(const std::vector<ManifestEntry>& entries, const RunConfig& cfg) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<std::size_t>> by_palm;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        auto [it, inserted] = by_palm.try_emplace(entries[i].palm_id);
        if (inserted) order.push_back(entries[i].palm_id);
        it->second.push_back(i);
    }
    if (order.size() < 2) throw InvalidArgument("evaluation needs at least two identities");

    Split split;
    for (const std::string& palm : order) {
        const auto& idx = by_palm[palm];
        if (cfg.resubstitute) {
            split.train.insert(split.train.end(), idx.begin(), idx.end());
            split.test.insert(split.test.end(), idx.begin(), idx.end());
            continue;
        }
        const auto ntrain = static_cast<std::size_t>(std::llround(cfg.train_fraction * static_cast<double>(idx.size())));
        for (std::size_t j = 0; j < idx.size(); ++j) (j < ntrain ? split.train : split.test).push_back(idx[j]);
    }
    if (split.train.empty() || split.test.empty()) {
        throw InvalidArgument("degenerate split: " + std::to_string(split.train.size()) + " training and " +
                              std::to_string(split.test.size()) + " test samples");
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

struct ModeResult {
    std::string mode;  ///< "full" or "roi"
    int k = 0;
    std::size_t total = 0;
    std::size_t correct = 0;

    double R() const { return static_cast<double>(correct) / static_cast<double>(total); }
};

struct EvaluationResult {
    RoiRect common;       ///< fit on training images
    RoiRect full_frame;
    std::vector<ModeResult> rows;
};

inline EvaluationResult evaluate_images(const std::vector<GrayImage>& images,
                                        const std::vector<ManifestEntry>& entries, const RunConfig& cfg) {
    cfg.validate();
    if (images.size() != entries.size()) throw InvalidArgument("image and manifest counts differ");
    const Split split = split_corpus(entries, cfg);
    const int w = images.front().width();
    const int h = images.front().height();
    for (const GrayImage& img : images) {
        if (img.width() != w || img.height() != h) throw InvalidArgument("corpus images differ in size");
    }

    std::vector<BinaryImage> edges(images.size());
    parallel_for(images.size(), cfg.threads,
                 [&](std::size_t i) { edges[i] = edge_mask(images[i], cfg.roi.edge_threshold); });

    std::vector<RoiRanges> train_ranges(split.train.size());
    parallel_for(split.train.size(), cfg.threads, [&](std::size_t i) {
        const BinaryImage& e = edges[split.train[i]];
        train_ranges[i] = {trim_strips(strip_profile(e, Orientation::horizontal_strips, cfg.roi)),
                           trim_strips(strip_profile(e, Orientation::vertical_strips, cfg.roi))};
    });

    EvaluationResult result;
    result.common = common_roi(train_ranges, cfg.roi.strip_px);
    result.full_frame = {0, 0, w, h};

    for (const auto& [mode, rect] : {std::pair{"full", result.full_frame}, std::pair{"roi", result.common}}) {
        for (int k : cfg.ks) {
            std::vector<FeatureVector> feats(images.size());
            parallel_for(images.size(), cfg.threads,
                         [&](std::size_t i) { feats[i] = extract_features(edges[i], rect, k); });

            std::vector<Template> gallery;
            for (std::size_t i : split.train) gallery.push_back({entries[i].palm_id, entries[i].sample_id, feats[i]});
            const TemplateDB db = enroll(std::move(gallery));

            std::vector<std::pair<std::string, std::string>> predictions(split.test.size());
            parallel_for(split.test.size(), cfg.threads, [&](std::size_t j) {
                const std::size_t i = split.test[j];
                predictions[j] = {identify(feats[i], db, cfg.metric).palm_id, entries[i].palm_id};
            });
            const EvaluationReport rep = accuracy(predictions);
            result.rows.push_back({mode, k, rep.total, rep.correct});
        }
    }
    return result;
}

inline std::vector<GrayImage> load_corpus(const std::vector<ManifestEntry>& entries, int threads) {
    std::vector<GrayImage> images(entries.size());
    parallel_for(entries.size(), threads, [&](std::size_t i) { images[i] = load_pgm(entries[i].path); });
    return images;
}

inline EvaluationResult evaluate_manifest(const std::vector<ManifestEntry>& entries, const RunConfig& cfg) {
    if (entries.empty()) throw InvalidArgument("empty manifest");
    return evaluate_images(load_corpus(entries, cfg.threads), entries, cfg);
}

/// CSV with header "mode,k,total,correct,R".
inline void write_evaluation_csv(std::ostream& out, const EvaluationResult& res) {
    out << "mode,k,total,correct,R\n";
    for (const ModeResult& r : res.rows) {
        out << r.mode << ',' << r.k << ',' << r.total << ',' << r.correct << ',' << format_ratio(r.R()) << '\n';
    }
}

struct HistComparison {
    int peak_orig = 0;
    int peak_roi = 0;
    int modes_orig = 0;
    int modes_roi = 0;
};

inline HistComparison compare_histograms(const GrayImage& original, const GrayImage& roi,
                                         int window = kDefaultModalityWindow) {
    const Histogram ho = histogram(original);
    const Histogram hr = histogram(roi);
    return {histogram_peak(ho), histogram_peak(hr), modality(ho, window), modality(hr, window)};
}

}  // namespace palmroi
