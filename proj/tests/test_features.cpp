#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "alt/error.hpp"
#include "alt/features.hpp"
#include "alt/presets.hpp"
#include "alt/transform.hpp"
#include "support/oracles.hpp"

using alt::Aggregate;
using alt::BankSet;
using alt::ExtractionMethod;
using alt::Matrix;
using alt::RowReduce;
using alt::ShapeletMatrix;

namespace {

// Structurally valid bank with fabricated content: featurize only relies on
// the shapes, so tests of the feature plumbing need not pay for eigensolves.
ShapeletMatrix fabricated_bank(const alt::WindowConfig& cfg, std::size_t channel,
                               std::size_t classes, std::size_t per_class,
                               oracles::XorShift& g) {
    ShapeletMatrix bank;
    bank.channel = channel;
    bank.config = cfg;
    bank.P = oracles::random_matrix(cfg.l, classes * per_class, g);
    for (std::size_t y = 0; y <= classes; ++y) bank.class_offsets.push_back(y * per_class);
    bank.eigenvalues.assign(classes * per_class, 0.0);
    return bank;
}

BankSet fabricated_set(const std::vector<std::array<std::size_t, 3>>& windows, std::size_t h,
                       std::size_t channels, std::size_t classes, std::uint64_t seed) {
    oracles::XorShift g(seed);
    BankSet set;
    set.channels = channels;
    set.classes = classes;
    for (const auto& [r, l, k] : windows) set.configs.push_back(alt::validate_config(r, l, k, h));
    for (const alt::WindowConfig& cfg : set.configs)
        for (std::size_t j = 0; j < channels; ++j)
            set.banks.push_back(fabricated_bank(cfg, j, classes, 2, g));
    return set;
}

} // namespace

TEST_CASE("ExtractionMethod parses and prints the method tokens") {
    SUBCASE("accepted tokens round-trip through str()") {
        for (const char* token : {"mean-mean", "p5-m4", "p5-mean", "p5-var", "p5-kurt",
                                  "mean-m3", "p2.5-var", "p50-kurt", "p95-mean"}) {
            CAPTURE(token);
            CHECK(ExtractionMethod::parse(token).str() == token);
        }
        ExtractionMethod m = ExtractionMethod::parse("p5-m4");
        CHECK(m.row.kind == RowReduce::Kind::Percentile);
        CHECK(m.row.p == 5.0);
        CHECK(m.agg.kind == Aggregate::Kind::Moment4);
    }
    SUBCASE("rejected tokens") {
        for (const char* token : {"banana", "q5-mean", "p0-mean", "p100-mean", "mean-m5",
                                  "-mean", "mean-", "p-mean", "pfive-mean"}) {
            CAPTURE(token);
            CHECK_THROWS_AS(ExtractionMethod::parse(token), alt::Error);
        }
    }
}

TEST_CASE("row_reduce computes per-row statistics over columns") {
    SUBCASE("mean of [[1,3],[2,2]] is [2,2]") {
        Matrix part(2, 2);
        part(0, 0) = 1;
        part(0, 1) = 3;
        part(1, 0) = 2;
        part(1, 1) = 2;
        CHECK(alt::row_reduce(part, RowReduce{}) == std::vector<double>{2, 2});
    }
    SUBCASE("5th percentile of row [10,20] interpolates to 10.5") {
        Matrix part(1, 2);
        part(0, 0) = 10;
        part(0, 1) = 20;
        RowReduce p5{RowReduce::Kind::Percentile, 5.0};
        CHECK(alt::row_reduce(part, p5) == std::vector<double>{10.5});
    }
    SUBCASE("percentiles match the sorted-interpolation oracle") {
        oracles::XorShift g(17);
        Matrix part = oracles::random_matrix(6, 11, g, -10.0, 10.0);
        for (double p : {5.0, 25.0, 50.0, 75.0, 95.0}) {
            RowReduce method{RowReduce::Kind::Percentile, p};
            std::vector<double> got = alt::row_reduce(part, method);
            for (std::size_t i = 0; i < part.rows(); ++i) {
                std::vector<double> row(part.row(i), part.row(i) + part.cols());
                CHECK(got[i] == oracles::percentile_linear(row, p));
            }
        }
    }
    SUBCASE("single-column partitions are their own percentile") {
        Matrix part(2, 1);
        part(0, 0) = 4;
        part(1, 0) = 7;
        RowReduce p5{RowReduce::Kind::Percentile, 5.0};
        CHECK(alt::row_reduce(part, p5) == std::vector<double>{4, 7});
    }
    SUBCASE("empty partitions are rejected") {
        CHECK_THROWS_AS(alt::row_reduce(Matrix(0, 0), RowReduce{}), alt::Error);
    }
}

TEST_CASE("aggregate computes population central moments") {
    const std::vector<double> sample{0.5, -1.25, 2.0, 3.5, -0.75, 1.0};
    SUBCASE("against the independent two-pass oracle") {
        CHECK(alt::aggregate(sample, Aggregate{Aggregate::Kind::Mean}) ==
              doctest::Approx(oracles::mean_of(sample)).epsilon(1e-14));
        CHECK(alt::aggregate(sample, Aggregate{Aggregate::Kind::Variance}) ==
              doctest::Approx(oracles::central_moment(sample, 2)).epsilon(1e-12));
        CHECK(alt::aggregate(sample, Aggregate{Aggregate::Kind::Moment3}) ==
              doctest::Approx(oracles::central_moment(sample, 3)).epsilon(1e-12));
        CHECK(alt::aggregate(sample, Aggregate{Aggregate::Kind::Moment4}) ==
              doctest::Approx(oracles::central_moment(sample, 4)).epsilon(1e-12));
        CHECK(alt::aggregate(sample, Aggregate{Aggregate::Kind::ExcessKurtosis}) ==
              doctest::Approx(oracles::excess_kurtosis(sample)).epsilon(1e-12));
    }
    SUBCASE("excess kurtosis of {-1,1,-1,1} is exactly -2") {
        std::vector<double> v{-1, 1, -1, 1};
        CHECK(alt::aggregate(v, Aggregate{Aggregate::Kind::ExcessKurtosis}) == -2.0);
    }
    SUBCASE("zero variance defines kurtosis as 0") {
        std::vector<double> v{3, 3, 3};
        CHECK(alt::aggregate(v, Aggregate{Aggregate::Kind::ExcessKurtosis}) == 0.0);
        CHECK(alt::aggregate(v, Aggregate{Aggregate::Kind::Variance}) == 0.0);
    }
    SUBCASE("edge cases error out") {
        CHECK_THROWS_AS(alt::aggregate(std::vector<double>{}, Aggregate{}), alt::Error);
        CHECK_THROWS_AS(alt::aggregate(std::vector<double>{1.0},
                                       Aggregate{Aggregate::Kind::Variance}),
                        alt::Error);
        CHECK(alt::aggregate(std::vector<double>{1.0}, Aggregate{}) == 1.0); // mean of one
    }
}

TEST_CASE("featurize returns m*c*n*g values for every preset shape") {
    for (const alt::Preset& preset : alt::presets()) {
        CAPTURE(preset.name);
        const alt::DatasetInfo& info = preset.expected;
        BankSet banks = fabricated_set(preset.windows, info.length, info.channels, info.classes,
                                       0xFEED ^ info.length);
        std::vector<ExtractionMethod> methods;
        for (const std::string& token : preset.methods)
            methods.push_back(ExtractionMethod::parse(token));

        alt::TimeSeriesDataset probe =
            oracles::sinusoid_dataset(1, info.classes, info.length, info.channels, 3);
        std::vector<double> f = alt::featurize(probe.instances[0], banks, methods);
        CHECK(f.size() ==
              preset.windows.size() * info.channels * info.classes * preset.methods.size());
        CHECK(alt::feature_names(banks, methods).size() == f.size());
    }
}

TEST_CASE("featurize honors the (config, channel, class, method) layout") {
    oracles::XorShift g(91);
    const std::size_t h = 10, channels = 2, classes = 3;
    BankSet banks = fabricated_set({{3, 2, 1}, {9, 5, 1}}, h, channels, classes, 5);
    std::vector<ExtractionMethod> methods{ExtractionMethod::parse("mean-mean"),
                                          ExtractionMethod::parse("p5-var")};

    alt::TimeSeriesDataset probe = oracles::sinusoid_dataset(1, classes, h, channels, 8);
    const alt::Instance& inst = probe.instances[0];
    std::vector<double> f = alt::featurize(inst, banks, methods);
    std::vector<std::string> names = alt::feature_names(banks, methods);
    REQUIRE(f.size() == 2 * channels * classes * 2);
    REQUIRE(names.size() == f.size());

    std::size_t idx = 0;
    for (std::size_t gi = 0; gi < 2; ++gi)
        for (std::size_t j = 0; j < channels; ++j) {
            const ShapeletMatrix& bank = banks.bank(gi, j);
            Matrix o = alt::apply_bank(alt::embed_instance(inst.channels[j], bank.config), bank.P);
            alt::ClassResponse resp = alt::square_partition(o, bank.class_offsets);
            for (std::size_t y = 0; y < classes; ++y)
                for (std::size_t mi = 0; mi < 2; ++mi, ++idx) {
                    double expect = alt::aggregate(alt::row_reduce(resp.partitions[y],
                                                                   methods[mi].row),
                                                   methods[mi].agg);
                    CHECK(f[idx] == expect);
                    std::string want = "g" + std::to_string(gi) + "_ch" + std::to_string(j) +
                                       "_class" + std::to_string(y) + "_" + methods[mi].str();
                    CHECK(names[idx] == want);
                }
        }
}

TEST_CASE("featurize rejects mismatched inputs") {
    BankSet banks = fabricated_set({{3, 2, 1}}, 10, 2, 2, 6);
    alt::TimeSeriesDataset one_chan = oracles::sinusoid_dataset(1, 2, 10, 1, 9);
    std::vector<ExtractionMethod> methods{ExtractionMethod::parse("mean-mean")};
    CHECK_THROWS_AS(alt::featurize(one_chan.instances[0], banks, methods), alt::Error);

    alt::TimeSeriesDataset ok = oracles::sinusoid_dataset(1, 2, 10, 2, 9);
    CHECK_THROWS_AS(alt::featurize(ok.instances[0], banks, std::vector<ExtractionMethod>{}),
                    alt::Error);
}
