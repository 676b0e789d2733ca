#include <gtest/gtest.h>

#include <atomic>
#include <sstream>
#include <stdexcept>

#include "palmroi/evaluate.hpp"

using namespace palmroi;

namespace {

std::vector<ManifestEntry> manifest(int identities, int samples) {
    std::vector<ManifestEntry> out;
    for (int i = 0; i < identities; ++i)
        for (int s = 0; s < samples; ++s) out.push_back({"x.pgm", palm_label(i), sample_label(s)});
    return out;
}

struct SmallCorpus {
    std::vector<GrayImage> images;
    std::vector<ManifestEntry> entries;
};

const SmallCorpus& small_corpus() {
    static const SmallCorpus c = [] {
        SmallCorpus out;
        CorpusSpec spec;
        spec.identities = 4;
        spec.samples_per_identity = 4;
        for (int i = 0; i < 4; ++i)
            for (int s = 0; s < 4; ++s) {
                out.images.push_back(corpus_image(spec, i, s));
                out.entries.push_back({"x.pgm", palm_label(i), sample_label(s)});
            }
        return out;
    }();
    return c;
}

std::string csv(const EvaluationResult& r) {
    std::ostringstream out;
    write_evaluation_csv(out, r);
    return out.str();
}

}  // namespace

TEST(ParallelFor, VisitsEveryIndexOnce) {
    for (int threads : {1, 3, 8}) {
        std::vector<std::atomic<int>> hits(101);
        parallel_for(hits.size(), threads, [&](std::size_t i) { ++hits[i]; });
        for (auto& h : hits) ASSERT_EQ(h.load(), 1);
    }
}

TEST(ParallelFor, RethrowsLowestIndex) {
    try {
        parallel_for(50, 4, [](std::size_t i) {
            if (i == 7 || i == 30) throw std::runtime_error(std::to_string(i));
        });
        FAIL();
    } catch (const std::runtime_error& e) {
        EXPECT_STREQ(e.what(), "7");
    }
}

TEST(Split, HalfPerIdentity) {
    RunConfig cfg;
    const Split s = split_corpus(manifest(10, 12), cfg);
    ASSERT_EQ(s.train.size(), 60u);
    ASSERT_EQ(s.test.size(), 60u);
    for (std::size_t i : s.train) EXPECT_LT(i % 12, 6u);
    for (std::size_t i : s.test) EXPECT_GE(i % 12, 6u);
}

TEST(Split, FractionRoundsPerIdentity) {
    RunConfig cfg;
    cfg.train_fraction = 0.25;
    const Split s = split_corpus(manifest(3, 10), cfg);
    // round(2.5) = 3 per identity
    EXPECT_EQ(s.train.size(), 9u);
    EXPECT_EQ(s.test.size(), 21u);
}

TEST(Split, Errors) {
    RunConfig cfg;
    EXPECT_THROW(split_corpus(manifest(1, 12), cfg), InvalidArgument);
    EXPECT_THROW(split_corpus(manifest(5, 1), cfg), InvalidArgument);
    cfg.train_fraction = 0.01;
    EXPECT_THROW(split_corpus(manifest(5, 4), cfg), InvalidArgument);
    cfg.train_fraction = 1.0;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    cfg.train_fraction = 0.5;
    cfg.ks = {5};
    EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(Split, Resubstitution) {
    RunConfig cfg;
    cfg.resubstitute = true;
    const Split s = split_corpus(manifest(3, 4), cfg);
    EXPECT_EQ(s.train, s.test);
    EXPECT_EQ(s.train.size(), 12u);
}

TEST(Evaluate, ResubstitutionIsPerfect) {
    RunConfig cfg;
    cfg.resubstitute = true;
    const auto& c = small_corpus();
    const EvaluationResult r = evaluate_images(c.images, c.entries, cfg);
    ASSERT_EQ(r.rows.size(), 6u);
    for (const ModeResult& row : r.rows) {
        EXPECT_EQ(row.total, 16u);
        EXPECT_EQ(row.R(), 1.0) << row.mode << " k=" << row.k;
    }
}

TEST(Evaluate, RowLayout) {
    RunConfig cfg;
    const auto& c = small_corpus();
    const EvaluationResult r = evaluate_images(c.images, c.entries, cfg);
    const std::string text = csv(r);
    EXPECT_EQ(text.rfind("mode,k,total,correct,R\nfull,4,8,", 0), 0u) << text;
    ASSERT_EQ(r.rows.size(), 6u);
    EXPECT_EQ(r.rows[3].mode, "roi");
    EXPECT_EQ(r.rows[3].k, 4);
    EXPECT_EQ(r.full_frame, (RoiRect{0, 0, 384, 284}));
    EXPECT_EQ(r.common.x0 % 10, 0);
    EXPECT_EQ(r.common.width % 10, 0);
}

TEST(Evaluate, ThreadCountDoesNotChangeOutput) {
    const auto& c = small_corpus();
    RunConfig one;
    RunConfig many;
    many.threads = 5;
    EXPECT_EQ(csv(evaluate_images(c.images, c.entries, one)), csv(evaluate_images(c.images, c.entries, many)));
}

TEST(Evaluate, CommonRoiUsesTrainingImagesOnly) {
    const auto& c = small_corpus();
    RunConfig cfg;
    // Replace every test image with a flat frame: a leak would pull the ROI to the full frame.
    std::vector<GrayImage> images = c.images;
    const Split s = split_corpus(c.entries, cfg);
    const EvaluationResult clean = evaluate_images(images, c.entries, cfg);
    for (std::size_t i : s.test) images[i] = GrayImage(384, 284, 150);
    const EvaluationResult tampered = evaluate_images(images, c.entries, cfg);
    EXPECT_EQ(clean.common, tampered.common);

    std::vector<RoiRanges> ranges;
    for (std::size_t i : s.train) ranges.push_back(roi_ranges(c.images[i], cfg.roi));
    EXPECT_EQ(clean.common, common_roi(ranges, cfg.roi.strip_px));
}

TEST(Evaluate, RejectsMismatchedInput) {
    const auto& c = small_corpus();
    RunConfig cfg;
    std::vector<GrayImage> images = c.images;
    images.pop_back();
    EXPECT_THROW(evaluate_images(images, c.entries, cfg), InvalidArgument);
    images = c.images;
    images[3] = GrayImage(380, 284, 1);
    EXPECT_THROW(evaluate_images(images, c.entries, cfg), InvalidArgument);
}

TEST(HistCompare, IdenticalImages) {
    const GrayImage img = small_corpus().images[0];
    const HistComparison h = compare_histograms(img, img);
    EXPECT_EQ(h.peak_orig, h.peak_roi);
    EXPECT_EQ(h.modes_orig, h.modes_roi);
    EXPECT_GE(h.modes_orig, 1);
}
