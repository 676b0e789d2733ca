#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "palmroi/matcher.hpp"

using namespace palmroi;

namespace {

Template tmpl(std::string palm, std::string sample, std::vector<double> v) {
    return {std::move(palm), std::move(sample), FeatureVector(std::move(v))};
}

std::vector<std::pair<std::string, std::string>> labelled(int correct, int total) {
    std::vector<std::pair<std::string, std::string>> out;
    for (int i = 0; i < total; ++i) out.emplace_back(i < correct ? "a" : "b", "a");
    return out;
}

}  // namespace

TEST(Distance, Examples) {
    const std::vector<double> o{0, 0};
    EXPECT_EQ(distance(o, std::vector<double>{1, 0}), 1.0);
    EXPECT_NEAR(distance(o, std::vector<double>{0.6, 0.8}), 1.0, 1e-15);
    EXPECT_NEAR(distance(o, std::vector<double>{0.6, 0.8}, Metric::manhattan), 1.4, 1e-15);
    EXPECT_THROW(distance(o, std::vector<double>{1}), InvalidArgument);
}

TEST(Distance, MetricProperties) {
    SplitMix64 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> a(16), b(16), c(16);
        for (std::size_t i = 0; i < 16; ++i) {
            a[i] = rng.uniform01();
            b[i] = rng.uniform01();
            c[i] = rng.uniform01();
        }
        for (Metric m : {Metric::euclidean, Metric::manhattan}) {
            ASSERT_EQ(distance(a, a, m), 0.0);
            ASSERT_EQ(distance(a, b, m), distance(b, a, m));
            ASSERT_GE(distance(a, b, m), 0.0);
            ASSERT_LE(distance(a, c, m), distance(a, b, m) + distance(b, c, m) + 1e-12);
        }
    }
}

TEST(ParseMetric, Names) {
    EXPECT_EQ(parse_metric("euclidean"), Metric::euclidean);
    EXPECT_EQ(parse_metric("manhattan"), Metric::manhattan);
    EXPECT_THROW(parse_metric("cosine"), InvalidArgument);
}

TEST(Enroll, KeepsOrderAndLength) {
    const TemplateDB db = enroll({tmpl("p1", "s1", {0, 1, 0, 1}), tmpl("p2", "s1", {1, 0, 1, 0})});
    EXPECT_EQ(db.size(), 2u);
    EXPECT_EQ(db.k(), 4u);
    EXPECT_EQ(db.templates()[1].palm_id, "p2");
    EXPECT_TRUE(db.has_palm("p1"));
    EXPECT_FALSE(db.has_palm("p3"));
    EXPECT_TRUE(enroll({}).empty());
}

TEST(Enroll, Errors) {
    EXPECT_THROW(enroll({tmpl("p1", "s1", {0, 1, 0, 1}), tmpl("p2", "s1", {1, 0})}), InvalidArgument);
    EXPECT_THROW(enroll({tmpl("p1", "s1", {0, 1}), tmpl("p1", "s1", {1, 0})}), InvalidArgument);
    EXPECT_THROW(enroll({tmpl("p1", "s1", {})}), InvalidArgument);
}

TEST(Identify, NearestAndTies) {
    const TemplateDB db = enroll({tmpl("a", "1", {0, 0}), tmpl("b", "1", {1, 1}), tmpl("c", "1", {0, 0})});
    EXPECT_EQ(identify(FeatureVector({0.9, 0.8}), db).palm_id, "b");
    const Match tie = identify(FeatureVector({0, 0}), db);
    EXPECT_EQ(tie.palm_id, "a");
    EXPECT_EQ(tie.distance, 0.0);
    // Equidistant from a and b.
    EXPECT_EQ(identify(FeatureVector({0.5, 0.5}), db).palm_id, "a");
}

TEST(Identify, Errors) {
    const TemplateDB db = enroll({tmpl("a", "1", {0, 0})});
    EXPECT_THROW(identify(FeatureVector({0, 0, 0}), db), InvalidArgument);
    EXPECT_THROW(identify(FeatureVector({0, 0}), TemplateDB{}), InvalidArgument);
}

TEST(Identify, MatchesLinearScanOracle) {
    SplitMix64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = static_cast<std::size_t>(rng.uniform_int(1, 3)) * 4;
        const int n = static_cast<int>(rng.uniform_int(1, 40));
        std::vector<std::vector<double>> gallery;
        std::vector<Template> templates;
        for (int i = 0; i < n; ++i) {
            std::vector<double> v(k);
            // Coarse values make exact ties common.
            for (double& x : v) x = static_cast<double>(rng.uniform_int(0, 4)) / 4.0;
            gallery.push_back(v);
            templates.push_back(tmpl("p" + std::to_string(i), "s", v));
        }
        const TemplateDB db = enroll(templates);
        std::vector<double> q(k);
        for (double& x : q) x = static_cast<double>(rng.uniform_int(0, 4)) / 4.0;
        const Match m = identify(FeatureVector(q), db);
        ASSERT_EQ(m.palm_id, "p" + std::to_string(oracle::nearest(gallery, q))) << trial;
    }
}

TEST(Verify, Threshold) {
    const TemplateDB db = enroll({tmpl("a", "1", {0, 0}), tmpl("a", "2", {1, 0}), tmpl("b", "1", {0, 1})});
    const FeatureVector q({1, 0.5});
    EXPECT_EQ(claim_distance(q, db, "a"), 0.5);
    EXPECT_EQ(verify(q, db, "a", 0.5), Decision::accept);
    EXPECT_EQ(verify(q, db, "a", 0.49), Decision::reject);
    EXPECT_EQ(verify(q, db, "b", 0.5), Decision::reject);
    EXPECT_STREQ(to_string(Decision::accept), "accept");
    EXPECT_THROW(verify(q, db, "z", 1.0), InvalidArgument);
}

TEST(Verify, MonotoneInTau) {
    SplitMix64 rng(5);
    const TemplateDB db = enroll({tmpl("a", "1", {0.2, 0.4, 0.6, 0.8}), tmpl("b", "1", {1, 0.5, 0, 0.5})});
    for (int trial = 0; trial < 100; ++trial) {
        const FeatureVector q({rng.uniform01(), rng.uniform01(), rng.uniform01(), rng.uniform01()});
        const double lo = rng.uniform(0, 1);
        const double hi = lo + rng.uniform(0, 1);
        if (verify(q, db, "a", lo) == Decision::accept) {
            ASSERT_EQ(verify(q, db, "a", hi), Decision::accept);
        }
    }
}

TEST(Accuracy, Examples) {
    const auto rep = accuracy(labelled(54, 60));
    EXPECT_EQ(rep.total, 60u);
    EXPECT_EQ(rep.correct, 54u);
    EXPECT_EQ(rep.R, 0.9);
    EXPECT_EQ(accuracy(labelled(10, 10)).R, 1.0);
    EXPECT_EQ(accuracy(labelled(0, 10)).R, 0.0);
    EXPECT_EQ(format_ratio(accuracy(labelled(54, 60)).R), "0.900000");
    EXPECT_THROW(accuracy({}), InvalidArgument);
}

TEST(TemplateFile, RoundTrip) {
    const TemplateDB db = enroll({tmpl("palm00", "s00", {0, 0.5, 1, 0.25}), tmpl("palm01", "s00", {1, 1, 0, 0})});
    std::stringstream ss;
    write_template_db(ss, db, RoiRect{60, 40, 260, 200});
    const std::string text = ss.str();
    EXPECT_NE(text.find("# roi 60 40 260 200\n"), std::string::npos);
    EXPECT_NE(text.find("palm00\ts00\t4\t0,0.5,1,0.25\n"), std::string::npos);

    const TemplateFile back = read_template_db(ss);
    ASSERT_TRUE(back.roi.has_value());
    EXPECT_EQ(*back.roi, (RoiRect{60, 40, 260, 200}));
    ASSERT_EQ(back.db.size(), 2u);
    EXPECT_EQ(back.db.templates()[0].features, db.templates()[0].features);
    EXPECT_EQ(back.db.templates()[1].features, db.templates()[1].features);
    EXPECT_EQ(back.db.templates()[1].palm_id, "palm01");

    std::stringstream no_roi;
    write_template_db(no_roi, db);
    EXPECT_FALSE(read_template_db(no_roi).roi.has_value());
}

TEST(TemplateFile, ParseErrors) {
    auto parse = [](const std::string& s) {
        std::istringstream in(s);
        return read_template_db(in);
    };
    EXPECT_THROW(parse("a\tb\t2\n"), ParseError);
    EXPECT_THROW(parse("a\tb\tx\t0,1\n"), ParseError);
    EXPECT_THROW(parse("a\tb\t3\t0,1\n"), ParseError);
    EXPECT_THROW(parse("a\tb\t2\t0,1\na\tb\t2\t1,0\n"), ParseError);
    EXPECT_THROW(parse("a\tb\t2\t0,1\nc\td\t1\t1\n"), ParseError);
    EXPECT_EQ(parse("# nothing\n\n").db.size(), 0u);
}

TEST(ReportCsv, Format) {
    const std::vector<ReportRow> rows{{4, 60, 54}, {16, 60, 60}};
    std::ostringstream out;
    write_report_csv(out, rows);
    EXPECT_EQ(out.str(), "k,total,correct,R\n4,60,54,0.900000\n16,60,60,1.000000\n");
}
