// palmroi: command-line front end for ROI extraction, enrollment,
// identification, verification and the full-frame vs ROI experiment.
//
// Exit codes: 0 success, 1 pipeline/domain error, 2 usage or I/O error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "palmroi/palmroi.hpp"

namespace fs = std::filesystem;
using namespace palmroi;

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void add_roi_options(CLI::App* cmd, RoiParams& p) {
    cmd->add_option("--strip-px", p.strip_px, "Strip width in pixels")->capture_default_str();
    cmd->add_option("--n", p.n, "Threshold multiplier: T = mean - n * stddev")->capture_default_str();
    cmd->add_option("--edge-threshold", p.edge_threshold, "L1 Sobel magnitude counted as an edge")
        ->capture_default_str();
}

std::optional<RoiRect> rect_from(const std::vector<int>& v) {
    if (v.empty()) return std::nullopt;
    if (v.size() != 4) throw UsageError("--rect takes four integers: x0 y0 width height");
    return RoiRect{v[0], v[1], v[2], v[3]};
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

// Features for one image over `rect`, or over the full frame when absent.
FeatureVector features_for(const GrayImage& img, const std::optional<RoiRect>& rect, int k, int edge_threshold) {
    return extract_features(img, rect.value_or(img.frame()), k, edge_threshold);
}

TemplateFile load_db(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open template database " + path.string());
    return read_template_db(in);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Palm-print ROI extraction and texture-feature authentication"};
    app.require_subcommand(1);

    // gen-dataset
    CorpusSpec corpus;
    fs::path gen_out;
    auto* gen = app.add_subcommand("gen-dataset", "Write a synthetic palm corpus and its manifest");
    gen->add_option("--identities", corpus.identities, "Number of palms")->capture_default_str();
    gen->add_option("--samples", corpus.samples_per_identity, "Samples per palm")->capture_default_str();
    gen->add_option("--seed", corpus.master_seed, "Master seed")->capture_default_str();
    gen->add_option("--width", corpus.width)->capture_default_str();
    gen->add_option("--height", corpus.height)->capture_default_str();
    gen->add_option("--out", gen_out, "Output directory")->required();

    // extract-roi
    RoiParams roi_params;
    fs::path roi_in, roi_out, roi_sidecar;
    auto* ext = app.add_subcommand("extract-roi", "Crop the busy central region of one palm image");
    ext->add_option("image", roi_in, "Input PGM")->required();
    ext->add_option("--out", roi_out, "Cropped PGM")->required();
    ext->add_option("--sidecar", roi_sidecar, "Rect file \"x0 y0 width height\" (default: <out>.txt)");
    add_roi_options(ext, roi_params);

    // histcmp
    fs::path hist_orig, hist_roi;
    int hist_window = kDefaultModalityWindow;
    auto* hist = app.add_subcommand("histcmp", "Compare histogram peak and mode count of an image and its ROI");
    hist->add_option("original", hist_orig)->required();
    hist->add_option("roi", hist_roi)->required();
    hist->add_option("--window", hist_window, "Smoothing window (odd, >= 3)")->capture_default_str();

    // enroll
    fs::path enroll_manifest, enroll_out;
    int enroll_k = 16;
    bool enroll_full = false;
    std::vector<int> enroll_rect;
    RoiParams enroll_params;
    auto* enr = app.add_subcommand("enroll", "Build a template database from a manifest");
    enr->add_option("--manifest", enroll_manifest)->required();
    enr->add_option("--k", enroll_k, "Feature vector size (4, 8 or 16)")->capture_default_str();
    enr->add_option("--out", enroll_out, "Template database file")->required();
    enr->add_flag("--full-frame", enroll_full, "Use the whole image instead of the common ROI");
    enr->add_option("--rect", enroll_rect, "Explicit ROI: x0 y0 width height")->expected(4);
    add_roi_options(enr, enroll_params);

    // identify / verify share the query options
    fs::path query_db, query_image;
    std::vector<int> query_rect;
    bool query_full = false;
    std::string metric_name = "euclidean";
    int query_edge = kDefaultEdgeThreshold;
    auto add_query = [&](CLI::App* cmd) {
        cmd->add_option("image", query_image, "Query PGM")->required();
        cmd->add_option("--db", query_db, "Template database")->required();
        cmd->add_option("--rect", query_rect, "ROI override: x0 y0 width height")->expected(4);
        cmd->add_flag("--full-frame", query_full, "Ignore the database ROI");
        cmd->add_option("--metric", metric_name, "euclidean or manhattan")->capture_default_str();
        cmd->add_option("--edge-threshold", query_edge)->capture_default_str();
    };
    auto* idn = app.add_subcommand("identify", "Nearest-template identification of one image");
    add_query(idn);
    std::string claim;
    double tau = 0.0;
    auto* ver = app.add_subcommand("verify", "Accept or reject a claimed identity");
    add_query(ver);
    ver->add_option("--claim", claim, "Claimed palm id")->required();
    ver->add_option("--tau", tau, "Largest accepted distance")->required();

    // evaluate
    fs::path eval_manifest, eval_out;
    RunConfig cfg;
    auto* ev = app.add_subcommand("evaluate", "Identification rate with and without ROI preprocessing");
    ev->add_option("--manifest", eval_manifest)->required();
    ev->add_option("--k", cfg.ks, "Feature sizes")->delimiter(',')->capture_default_str();
    ev->add_option("--train-fraction", cfg.train_fraction, "Share of each palm's samples enrolled")
        ->capture_default_str();
    ev->add_flag("--resubstitute", cfg.resubstitute, "Enroll and query every sample");
    ev->add_option("--threads", cfg.threads)->capture_default_str();
    ev->add_option("--metric", metric_name, "euclidean or manhattan")->capture_default_str();
    ev->add_option("--out", eval_out, "CSV file (default: stdout)");
    add_roi_options(ev, cfg.roi);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*gen) {
            const auto entries = generate_corpus(corpus, gen_out);
            std::cout << "wrote " << entries.size() << " images and " << (gen_out / kManifestName).string() << "\n";
        } else if (*ext) {
            const GrayImage img = load_pgm(roi_in);
            const RoiRect r = extract_roi(img, roi_params);
            save_pgm(crop(img, r), roi_out);
            const fs::path sidecar = roi_sidecar.empty() ? fs::path(roi_out.string() + ".txt") : roi_sidecar;
            open_out(sidecar) << to_string(r) << "\n";
            std::cout << to_string(r) << "\n";
        } else if (*hist) {
            const HistComparison c = compare_histograms(load_pgm(hist_orig), load_pgm(hist_roi), hist_window);
            std::cout << "peak_orig,peak_roi,modes_orig,modes_roi\n"
                      << c.peak_orig << ',' << c.peak_roi << ',' << c.modes_orig << ',' << c.modes_roi << "\n";
        } else if (*enr) {
            grid_shape(enroll_k);
            const auto entries = read_manifest(enroll_manifest);
            if (entries.empty()) throw InvalidArgument("empty manifest");
            const auto images = load_corpus(entries, 1);
            std::optional<RoiRect> rect = rect_from(enroll_rect);
            if (!rect && !enroll_full) {
                std::vector<RoiRanges> ranges;
                for (const GrayImage& img : images) ranges.push_back(roi_ranges(img, enroll_params));
                rect = common_roi(ranges, enroll_params.strip_px);
            }
            std::vector<Template> templates;
            for (std::size_t i = 0; i < images.size(); ++i) {
                templates.push_back({entries[i].palm_id, entries[i].sample_id,
                                     features_for(images[i], rect, enroll_k, enroll_params.edge_threshold)});
            }
            auto out = open_out(enroll_out);
            write_template_db(out, enroll(std::move(templates)), rect);
            std::cerr << "enrolled " << images.size() << " templates"
                      << (rect ? " over ROI " + to_string(*rect) : std::string(" over full frames")) << "\n";
        } else if (*idn || *ver) {
            const Metric metric = parse_metric(metric_name);
            const TemplateFile file = load_db(query_db);
            if (file.db.empty()) throw InvalidArgument("template database is empty");
            std::optional<RoiRect> rect = rect_from(query_rect);
            if (!rect && !query_full) rect = file.roi;
            const FeatureVector f = features_for(load_pgm(query_image), rect, static_cast<int>(file.db.k()), query_edge);
            if (*idn) {
                const Match m = identify(f, file.db, metric);
                std::cout << m.palm_id << '\t' << format_ratio(m.distance) << "\n";
            } else {
                const double d = claim_distance(f, file.db, claim, metric);
                std::cout << to_string(d <= tau ? Decision::accept : Decision::reject) << '\t' << format_ratio(d)
                          << "\n";
            }
        } else if (*ev) {
            cfg.metric = parse_metric(metric_name);
            const auto result = evaluate_manifest(read_manifest(eval_manifest), cfg);
            if (eval_out.empty()) {
                write_evaluation_csv(std::cout, result);
            } else {
                auto out = open_out(eval_out);
                write_evaluation_csv(out, result);
            }
            std::cerr << "common ROI (training images): " << to_string(result.common) << "\n";
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return 0;
}
