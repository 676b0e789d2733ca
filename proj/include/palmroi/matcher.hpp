#pragma once

// Template storage, nearest-neighbour identification, threshold verification
// and the correct-identification rate.

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "palmroi/features.hpp"
#include "palmroi/image.hpp"

namespace palmroi {

enum class Metric { euclidean, manhattan };

inline Metric parse_metric(std::string_view name) {
    if (name == "euclidean") return Metric::euclidean;
    if (name == "manhattan") return Metric::manhattan;
    throw InvalidArgument("unknown metric '" + std::string(name) + "'");
}

inline double distance(std::span<const double> a, std::span<const double> b, Metric metric = Metric::euclidean) {
    if (a.size() != b.size()) {
        throw InvalidArgument("distance: length mismatch " + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += metric == Metric::euclidean ? d * d : std::abs(d);
    }
    return metric == Metric::euclidean ? std::sqrt(acc) : acc;
}

struct Template {
    std::string palm_id;
    std::string sample_id;
    FeatureVector features;
};

/// Immutable gallery of templates sharing one feature length.
class TemplateDB {
public:
    TemplateDB() = default;

    /// Length shared by every template; 0 while empty.
    std::size_t k() const { return k_; }
    bool empty() const { return templates_.empty(); }
    std::size_t size() const { return templates_.size(); }
    std::span<const Template> templates() const { return templates_; }

    bool has_palm(const std::string& palm_id) const {
        for (const Template& t : templates_) {
            if (t.palm_id == palm_id) return true;
        }
        return false;
    }

private:
    friend TemplateDB enroll(std::vector<Template> samples);

    std::size_t k_ = 0;
    std::vector<Template> templates_;
};

/// Builds a database holding exactly `samples`, in order.
inline TemplateDB enroll(std::vector<Template> samples) {
    TemplateDB db;
    std::set<std::pair<std::string, std::string>> seen;
    for (const Template& t : samples) {
        if (t.features.size() == 0) throw InvalidArgument("enroll: empty feature vector");
        if (db.k_ == 0) db.k_ = t.features.size();
        if (t.features.size() != db.k_) {
            throw InvalidArgument("enroll: feature length " + std::to_string(t.features.size()) +
                                  " differs from " + std::to_string(db.k_));
        }
        if (!seen.emplace(t.palm_id, t.sample_id).second) {
            throw InvalidArgument("enroll: duplicate template " + t.palm_id + "/" + t.sample_id);
        }
    }
    db.templates_ = std::move(samples);
    return db;
}

struct Match {
    std::string palm_id;
    double distance = 0.0;
};

/// Nearest template; the earliest enrolled wins ties.
inline Match identify(const FeatureVector& f, const TemplateDB& db, Metric metric = Metric::euclidean) {
    if (db.empty()) throw InvalidArgument("identify: empty template database");
    if (f.size() != db.k()) {
        throw InvalidArgument("identify: query length " + std::to_string(f.size()) + " vs database k " +
                              std::to_string(db.k()));
    }
    const Template* best = nullptr;
    double best_d = std::numeric_limits<double>::infinity();
    for (const Template& t : db.templates()) {
        const double d = distance(f, t.features, metric);
        if (best == nullptr || d < best_d) {
            best = &t;
            best_d = d;
        }
    }
    return {best->palm_id, best_d};
}

enum class Decision { accept, reject };

inline const char* to_string(Decision d) { return d == Decision::accept ? "accept" : "reject"; }

/// Smallest distance from `f` to any template of `palm_id`.
inline double claim_distance(const FeatureVector& f, const TemplateDB& db, const std::string& palm_id,
                             Metric metric = Metric::euclidean) {
    if (!db.has_palm(palm_id)) throw InvalidArgument("verify: unknown palm id '" + palm_id + "'");
    double best = std::numeric_limits<double>::infinity();
    for (const Template& t : db.templates()) {
        if (t.palm_id == palm_id) best = std::min(best, distance(f, t.features, metric));
    }
    return best;
}

inline Decision verify(const FeatureVector& f, const TemplateDB& db, const std::string& claimed, double tau,
                       Metric metric = Metric::euclidean) {
    return claim_distance(f, db, claimed, metric) <= tau ? Decision::accept : Decision::reject;
}

struct EvaluationReport {
    std::size_t total = 0;
    std::size_t correct = 0;
    double R = 0.0;
    std::map<int, double> per_k;
};

/// R = correct / total over (predicted, truth) pairs.
inline EvaluationReport accuracy(std::span<const std::pair<std::string, std::string>> predictions) {
    if (predictions.empty()) throw InvalidArgument("accuracy: no predictions");
    EvaluationReport rep;
    rep.total = predictions.size();
    for (const auto& [predicted, truth] : predictions) {
        if (predicted == truth) ++rep.correct;
    }
    rep.R = static_cast<double>(rep.correct) / static_cast<double>(rep.total);
    return rep;
}

inline std::string format_ratio(double r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", r);
    return buf;
}

// ---------------------------------------------------------------------------
// Template database file: one template per line,
//   palm_id <TAB> sample_id <TAB> k <TAB> v1,v2,...,vk
// Values are written in shortest round-trip form so a reloaded database
// matches the in-memory one exactly.
// Lines starting with '#' are comments. The writer records the ROI the
// features were taken from as "# roi x0 y0 width height".

struct TemplateFile {
    TemplateDB db;
    std::optional<RoiRect> roi;
};

inline void write_template_db(std::ostream& out, const TemplateDB& db, const std::optional<RoiRect>& roi = {}) {
    out << "# palm_id\tsample_id\tk\tfeatures\n";
    if (roi) out << "# roi " << to_string(*roi) << "\n";
    for (const Template& t : db.templates()) {
        out << t.palm_id << '\t' << t.sample_id << '\t' << t.features.size() << '\t'
            << format_features_exact(t.features) << '\n';
    }
}

inline TemplateFile read_template_db(std::istream& in) {
    TemplateFile file;
    std::vector<Template> templates;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::istringstream meta(line.substr(1));
            std::string tag;
            RoiRect r;
            if (meta >> tag && tag == "roi" && meta >> r.x0 >> r.y0 >> r.width >> r.height) file.roi = r;
            continue;
        }
        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (true) {
            const std::size_t tab = line.find('\t', pos);
            fields.push_back(line.substr(pos, tab - pos));
            if (tab == std::string::npos) break;
            pos = tab + 1;
        }
        const std::string where = "template db line " + std::to_string(lineno);
        if (fields.size() != 4) throw ParseError(where + ": expected 4 tab-separated fields");
        std::size_t k = 0;
        try {
            k = std::stoul(fields[2]);
        } catch (const std::exception&) {
            throw ParseError(where + ": bad k '" + fields[2] + "'");
        }
        FeatureVector f = parse_features(fields[3]);
        if (f.size() != k) throw ParseError(where + ": k says " + fields[2] + " but " + std::to_string(f.size()) + " values");
        templates.push_back({fields[0], fields[1], std::move(f)});
    }
    try {
        file.db = enroll(std::move(templates));
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what());
    }
    return file;
}

struct ReportRow {
    int k = 0;
    std::size_t total = 0;
    std::size_t correct = 0;
};

/// CSV with header "k,total,correct,R".
inline void write_report_csv(std::ostream& out, std::span<const ReportRow> rows) {
    out << "k,total,correct,R\n";
    for (const ReportRow& r : rows) {
        out << r.k << ',' << r.total << ',' << r.correct << ','
            << format_ratio(static_cast<double>(r.correct) / static_cast<double>(r.total)) << '\n';
    }
}

}  // namespace palmroi
