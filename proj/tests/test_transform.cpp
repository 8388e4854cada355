#include <doctest.h>

#include <cmath>
#include <vector>

#include "alt/error.hpp"
#include "alt/presets.hpp"
#include "alt/shapelet_bank.hpp"
#include "alt/transform.hpp"
#include "support/oracles.hpp"

using alt::Matrix;
using alt::WindowConfig;

namespace {

std::vector<double> iota_series(std::size_t h) {
    std::vector<double> v(h);
    for (std::size_t t = 0; t < h; ++t) v[t] = double(t);
    return v;
}

} // namespace

TEST_CASE("embed_rows matches the floor formula") {
    SUBCASE("frozen cases") {
        CHECK(alt::embed_rows(10, alt::validate_config(3, 2, 1, 10)) == 9);
        CHECK(alt::embed_rows(100, alt::validate_config(53, 27, 1, 100)) == 74);
        CHECK(alt::embed_rows(150, alt::validate_config(31, 2, 1, 150)) == 121);
        CHECK(alt::embed_rows(10, alt::validate_config(5, 2, 2, 10)) == 3); // floor(7/2)
    }
    SUBCASE("every preset window against the independent formula") {
        for (const alt::Preset& preset : alt::presets()) {
            for (const auto& [r, l, k] : preset.windows) {
                CAPTURE(preset.name);
                CAPTURE(r);
                WindowConfig cfg = alt::validate_config(r, l, k, preset.expected.length);
                CHECK(alt::embed_rows(preset.expected.length, cfg) ==
                      oracles::embed_rows_formula(preset.expected.length, r, l, k));
            }
        }
    }
    SUBCASE("no row fits") {
        WindowConfig cfg = alt::validate_config(9, 5, 1, 9);
        CHECK_THROWS_AS(alt::embed_rows(4, cfg), alt::Error); // 4 < s*l = 5
    }
}

TEST_CASE("embed_instance is the strided sliding window") {
    SUBCASE("identity series, (3,2,1): row w = [w, w+1]") {
        WindowConfig cfg = alt::validate_config(3, 2, 1, 10);
        Matrix a = alt::embed_instance(iota_series(10), cfg);
        REQUIRE(a.rows() == 9);
        REQUIRE(a.cols() == 2);
        for (std::size_t w = 0; w < 9; ++w) {
            CHECK(a(w, 0) == double(w));
            CHECK(a(w, 1) == double(w + 1));
        }
    }
    SUBCASE("(31,2,1) on h = 150: row w = [series[w], series[w+15]]") {
        WindowConfig cfg = alt::validate_config(31, 2, 1, 150);
        Matrix a = alt::embed_instance(iota_series(150), cfg);
        REQUIRE(a.rows() == 121);
        CHECK(a(0, 1) == 15);
        CHECK(a(120, 0) == 120);
        CHECK(a(120, 1) == 135);
    }
    SUBCASE("random series against the index oracle") {
        oracles::XorShift g(77);
        Matrix noise = oracles::random_matrix(1, 40, g);
        std::vector<double> series(noise.row(0), noise.row(0) + 40);
        WindowConfig cfg = alt::validate_config(13, 4, 3, 40);
        Matrix a = alt::embed_instance(series, cfg);
        REQUIRE(a.rows() == oracles::embed_rows_formula(40, 13, 4, 3));
        for (std::size_t w = 0; w < a.rows(); ++w)
            for (std::size_t t = 0; t < cfg.l; ++t)
                CHECK(a(w, t) == series[w * cfg.k + t * cfg.s]);
    }
    SUBCASE("length mismatch") {
        WindowConfig cfg = alt::validate_config(3, 2, 1, 10);
        CHECK_THROWS_AS(alt::embed_instance(iota_series(11), cfg), alt::Error);
    }
}

TEST_CASE("apply_bank equals the naive product") {
    oracles::XorShift g(123);
    SUBCASE("3x2 times 2x4 hand-checkable size") {
        Matrix a = oracles::random_matrix(3, 2, g);
        Matrix p = oracles::random_matrix(2, 4, g);
        Matrix o = alt::apply_bank(a, p);
        Matrix expect = oracles::naive_matmul(a, p);
        for (std::size_t i = 0; i < o.rows(); ++i)
            for (std::size_t j = 0; j < o.cols(); ++j)
                CHECK(std::abs(o(i, j) - expect(i, j)) <= 1e-10 * (1.0 + std::abs(expect(i, j))));
    }
    SUBCASE("100 random shapes") {
        for (int rep = 0; rep < 100; ++rep) {
            std::size_t rows = 1 + g.next() % 12;
            std::size_t inner = 1 + g.next() % 9;
            std::size_t cols = 1 + g.next() % 14;
            Matrix a = oracles::random_matrix(rows, inner, g, -4.0, 4.0);
            Matrix p = oracles::random_matrix(inner, cols, g, -4.0, 4.0);
            Matrix o = alt::apply_bank(a, p);
            Matrix expect = oracles::naive_matmul(a, p);
            for (std::size_t i = 0; i < rows; ++i)
                for (std::size_t j = 0; j < cols; ++j)
                    CHECK(std::abs(o(i, j) - expect(i, j)) <=
                          1e-10 * (1.0 + std::abs(expect(i, j))));
        }
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(alt::apply_bank(Matrix(2, 3), Matrix(2, 3)), alt::Error);
    }
}

TEST_CASE("a series' own laws annihilate its embedding") {
    // instance 0 follows one global first-order recurrence; every window of
    // it yields a law orthogonal to the geometric direction, so the entire
    // class-0 block of O collapses toward zero
    alt::TimeSeriesDataset ds;
    ds.name = "own-law";
    ds.length = 20;
    ds.channels = 1;
    ds.classes = {"geo", "sin"};
    alt::Instance geo;
    geo.label = 0;
    geo.channels.push_back(oracles::geometric_series(20, 1.05));
    alt::Instance sin;
    sin.label = 1;
    sin.channels.push_back(oracles::sinusoid_series(20, 0.8, 0.1));
    ds.instances = {geo, sin};

    WindowConfig cfg = alt::validate_config(9, 5, 1, 20);
    alt::ShapeletMatrix bank = alt::build_bank(ds, cfg, 0);
    Matrix a = alt::embed_instance(ds.series(0, 0), cfg);
    Matrix o = alt::apply_bank(a, bank.P);

    double scale = a.frobenius_norm();
    for (std::size_t col = bank.class_offsets[0]; col < bank.class_offsets[1]; ++col)
        for (std::size_t row = 0; row < o.rows(); ++row)
            CHECK(std::abs(o(row, col)) <= 1e-8 * scale);
}

TEST_CASE("square_partition splits and squares") {
    SUBCASE("widths equal the bank's per-class counts and entries are squares") {
        oracles::XorShift g(9);
        Matrix o = oracles::random_matrix(4, 7, g);
        std::vector<std::size_t> offsets{0, 3, 7};
        alt::ClassResponse resp = alt::square_partition(o, offsets);
        REQUIRE(resp.partitions.size() == 2);
        CHECK(resp.partitions[0].cols() == 3);
        CHECK(resp.partitions[1].cols() == 4);
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 3; ++j)
                CHECK(resp.partitions[0](i, j) == o(i, j) * o(i, j));
            for (std::size_t j = 3; j < 7; ++j)
                CHECK(resp.partitions[1](i, j - 3) == o(i, j) * o(i, j));
        }
    }
    SUBCASE("all-zero O gives all-zero partitions") {
        Matrix o(3, 4);
        alt::ClassResponse resp = alt::square_partition(o, std::vector<std::size_t>{0, 2, 4});
        for (const Matrix& part : resp.partitions)
            for (std::size_t i = 0; i < part.rows(); ++i)
                for (std::size_t j = 0; j < part.cols(); ++j) CHECK(part(i, j) == 0.0);
    }
    SUBCASE("offsets must cover the columns exactly") {
        Matrix o(2, 5);
        CHECK_THROWS_AS(alt::square_partition(o, std::vector<std::size_t>{0, 3}), alt::Error);
        CHECK_THROWS_AS(alt::square_partition(o, std::vector<std::size_t>{1, 5}), alt::Error);
        CHECK_THROWS_AS(alt::square_partition(o, std::vector<std::size_t>{0}), alt::Error);
    }
}

TEST_CASE("responses are invariant to shapelet sign flips") {
    oracles::XorShift g(55);
    Matrix a = oracles::random_matrix(6, 4, g);
    Matrix p = oracles::random_matrix(4, 10, g);
    Matrix flipped = p;
    for (std::size_t j = 0; j < p.cols(); ++j)
        if (g.next() % 2 == 0)
            for (std::size_t i = 0; i < p.rows(); ++i) flipped(i, j) = -flipped(i, j);

    std::vector<std::size_t> offsets{0, 5, 10};
    alt::ClassResponse base = alt::square_partition(alt::apply_bank(a, p), offsets);
    alt::ClassResponse flip = alt::square_partition(alt::apply_bank(a, flipped), offsets);
    for (std::size_t y = 0; y < 2; ++y)
        CHECK(base.partitions[y] == flip.partitions[y]); // bitwise: (-x)^2 == x^2
}
