#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "palmroi/pgm.hpp"
#include "palmroi/rng.hpp"

using namespace palmroi;
namespace fs = std::filesystem;

namespace {

class PgmTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("palmroi_pgm_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write_bytes(const std::string& name, const std::string& bytes) {
        const fs::path p = dir_ / name;
        std::ofstream(p, std::ios::binary) << bytes;
        return p;
    }

    static std::string read_bytes(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }

    static PgmErrc error_of(const fs::path& p) {
        try {
            load_pgm(p);
        } catch (const PgmError& e) {
            return e.code();
        }
        ADD_FAILURE() << "no error for " << p;
        return PgmErrc::unwritable_path;
    }

    fs::path dir_;
};

}  // namespace

TEST_F(PgmTest, DecodesTwoByTwo) {
    const auto p = write_bytes("a.pgm", std::string("P5\n2 2\n255\n") + std::string("\x00\x7F\x80\xFF", 4));
    const GrayImage img = load_pgm(p);
    ASSERT_EQ(img.width(), 2);
    ASSERT_EQ(img.height(), 2);
    EXPECT_EQ(img.at(0, 0), 0);
    EXPECT_EQ(img.at(1, 0), 127);
    EXPECT_EQ(img.at(0, 1), 128);
    EXPECT_EQ(img.at(1, 1), 255);
}

TEST_F(PgmTest, HeaderCommentsAndWhitespace) {
    const auto p = write_bytes("c.pgm", std::string("P5 # made by hand\n 3\t1\n# maxval next\n255 ") + "abc");
    EXPECT_EQ(load_pgm(p), GrayImage(3, 1, std::vector<std::uint8_t>{'a', 'b', 'c'}));
}

TEST_F(PgmTest, ErrorsAreDistinct) {
    EXPECT_EQ(error_of(dir_ / "missing.pgm"), PgmErrc::missing_file);
    EXPECT_EQ(error_of(write_bytes("p2.pgm", "P2\n1 1\n255\n0\n")), PgmErrc::malformed_header);
    EXPECT_EQ(error_of(write_bytes("nodim.pgm", "P5\nx 1\n255\n")), PgmErrc::malformed_header);
    EXPECT_EQ(error_of(write_bytes("zero.pgm", "P5\n0 1\n255\n")), PgmErrc::malformed_header);
    EXPECT_EQ(error_of(write_bytes("deep.pgm", "P5\n1 1\n65535\n\x01\x02")), PgmErrc::unsupported_maxval);
    EXPECT_EQ(error_of(write_bytes("short.pgm", "P5\n4 4\n255\nabc")), PgmErrc::truncated_data);
}

TEST_F(PgmTest, MaxvalMessage) {
    const auto p = write_bytes("deep.pgm", "P5\n1 1\n65535\n\x01\x02");
    try {
        load_pgm(p);
        FAIL();
    } catch (const PgmError& e) {
        EXPECT_NE(std::string(e.what()).find("unsupported maxval"), std::string::npos);
    }
}

TEST_F(PgmTest, SaveSinglePixel) {
    const auto p = dir_ / "one.pgm";
    save_pgm(GrayImage(1, 1, 42), p);
    EXPECT_EQ(read_bytes(p), std::string("P5\n1 1\n255\n*"));
}

TEST_F(PgmTest, SavedSizeIsHeaderPlusPixels) {
    const auto p = dir_ / "big.pgm";
    save_pgm(GrayImage(384, 284, 9), p);
    EXPECT_EQ(fs::file_size(p), std::string("P5\n384 284\n255\n").size() + 109056u);
}

TEST_F(PgmTest, UnwritablePath) {
    try {
        save_pgm(GrayImage(1, 1), dir_ / "no_such_dir" / "x.pgm");
        FAIL();
    } catch (const PgmError& e) {
        EXPECT_EQ(e.code(), PgmErrc::unwritable_path);
    }
}

TEST_F(PgmTest, RoundTripEveryIntensity) {
    std::vector<std::uint8_t> px(256 * 3);
    SplitMix64 rng(5);
    for (std::size_t i = 0; i < px.size(); ++i) px[i] = i < 256 ? static_cast<std::uint8_t>(i) : static_cast<std::uint8_t>(rng.next());
    const GrayImage img(48, 16, px);
    const auto p = dir_ / "rt.pgm";
    save_pgm(img, p);
    EXPECT_EQ(load_pgm(p), img);

    // Saving a loaded file reproduces the payload byte for byte.
    const auto again = dir_ / "rt2.pgm";
    save_pgm(load_pgm(p), again);
    EXPECT_EQ(read_bytes(p), read_bytes(again));
}
