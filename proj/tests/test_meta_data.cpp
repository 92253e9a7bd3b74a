#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "rankbench/meta_data.hpp"
#include "rankbench/ranking.hpp"

using namespace rankbench;

namespace {

// Table-1-shaped fixture: 6 algorithms, 6 datasets, columns D2 and D5 absent.
const char* kMtdFixture =
    "dataset_id,algorithm_id,accuracy,runtime_seconds\n"
    "D1,a1,0.85,10\nD1,a2,0.95,20\nD1,a3,0.63,30\nD1,a4,0.45,40\nD1,a5,0.78,50\nD1,a6,0.67,60\n"
    "D3,a1,0.77,10\nD3,a2,0.67,20\nD3,a3,0.55,30\nD3,a4,0.34,40\nD3,a5,0.61,50\nD3,a6,0.70,60\n"
    "D4,a1,0.98,10\nD4,a2,0.68,20\nD4,a3,0.89,30\nD4,a4,0.58,40\nD4,a5,0.34,50\nD4,a6,0.89,60\n"
    "D6,a1,0.82,10\nD6,a2,0.72,20\nD6,a3,0.46,30\nD6,a4,0.63,40\nD6,a5,0.97,50\nD6,a6,0.22,60\n";

PerformanceMatrix load_from_string(const std::string& content) {
    std::istringstream in(content);
    return load_matrix_stream(in);
}

}  // namespace

TEST_CASE("load_matrix parses the fixture with absent columns") {
    auto m = load_from_string(kMtdFixture);
    CHECK(m.algorithms().size() == 6);
    CHECK(m.datasets().size() == 4);  // D2, D5 have no rows at all
    CHECK(m.present_count() == 24);
    CHECK(m.cell("D1", "a2")->accuracy == 0.95);
    CHECK(!m.cell("D1", "a7").has_value());
}

TEST_CASE("load_matrix on header-only file yields an empty matrix") {
    auto m = load_from_string("dataset_id,algorithm_id,accuracy,runtime_seconds\n");
    CHECK(m.algorithms().empty());
    CHECK(m.datasets().empty());
    CHECK(m.present_count() == 0);
}

TEST_CASE("load_matrix rejects bad input") {
    SECTION("duplicate pair") {
        CHECK_THROWS_WITH(load_from_string("dataset_id,algorithm_id,accuracy,runtime_seconds\n"
                                           "D1,a1,0.5,1\nD1,a1,0.6,2\n"),
                          Catch::Matchers::ContainsSubstring("duplicate"));
    }
    SECTION("accuracy out of range") {
        CHECK_THROWS(load_from_string("dataset_id,algorithm_id,accuracy,runtime_seconds\n"
                                      "D1,a1,1.5,1\n"));
    }
    SECTION("non-positive runtime") {
        CHECK_THROWS(load_from_string("dataset_id,algorithm_id,accuracy,runtime_seconds\n"
                                      "D1,a1,0.5,0\n"));
    }
    SECTION("bad header") {
        CHECK_THROWS(load_from_string("dataset,algo,acc,time\nD1,a1,0.5,1\n"));
    }
    SECTION("parse error reports the line number") {
        CHECK_THROWS_WITH(load_from_string("dataset_id,algorithm_id,accuracy,runtime_seconds\n"
                                           "D1,a1,0.5,1\nD1,a2,zzz,1\n"),
                          Catch::Matchers::ContainsSubstring("line 3"));
    }
    SECTION("wrong field count") {
        CHECK_THROWS_WITH(load_from_string("dataset_id,algorithm_id,accuracy,runtime_seconds\n"
                                           "D1,a1,0.5\n"),
                          Catch::Matchers::ContainsSubstring("4 fields"));
    }
}

TEST_CASE("save/load round-trip preserves the cell multiset") {
    auto m = load_from_string(kMtdFixture);
    std::ostringstream out;
    save_matrix_stream(m, out);
    auto m2 = load_from_string(out.str());
    CHECK(m.cells() == m2.cells());
    CHECK(m.algorithms() == m2.algorithms());
    CHECK(m.datasets() == m2.datasets());
}

TEST_CASE("row order does not affect the loaded matrix") {
    auto m1 = load_from_string("dataset_id,algorithm_id,accuracy,runtime_seconds\n"
                               "D1,a1,0.5,1\nD2,a2,0.6,2\nD1,a2,0.7,3\n");
    auto m2 = load_from_string("dataset_id,algorithm_id,accuracy,runtime_seconds\n"
                               "D1,a2,0.7,3\nD1,a1,0.5,1\nD2,a2,0.6,2\n");
    CHECK(m1 == m2);
}

TEST_CASE("generate_synthetic with zero noise yields identical rankings") {
    SyntheticSpec spec;
    spec.n_algorithms = 8;
    spec.n_datasets = 6;
    spec.noise_scale = 0.0;
    spec.seed = 7;
    auto m = generate_synthetic(spec);
    CHECK(m.present_count() == 48);
    CHECK(mean_pairwise_spearman(m) == Catch::Approx(1.0));
}

TEST_CASE("generate_synthetic is deterministic for a fixed seed") {
    SyntheticSpec spec;
    spec.n_algorithms = 10;
    spec.n_datasets = 5;
    spec.noise_scale = 0.5;
    spec.seed = 123;
    CHECK(generate_synthetic(spec) == generate_synthetic(spec));
    spec.seed = 124;
    CHECK(!(generate_synthetic(spec) == generate_synthetic({10, 5, 1.0, 0.5, {0.0, 4.0}, 123})));
}

TEST_CASE("synthetic runtimes stay inside the log range") {
    SyntheticSpec spec;
    spec.n_algorithms = 5;
    spec.n_datasets = 4;
    spec.noise_scale = 0.3;
    spec.runtime_log_range = {1.0, 3.0};
    spec.seed = 9;
    auto m = generate_synthetic(spec);
    for (const auto& [_, c] : m.cells()) {
        CHECK(c.runtime_seconds >= 10.0);
        CHECK(c.runtime_seconds <= 1000.0);
    }
}

TEST_CASE("more noise does not raise mean pairwise spearman",
          "[statistical]") {
    // averaged over 20 seeds per noise level
    double prev = 2.0;
    for (double noise : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        double sum = 0.0;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            SyntheticSpec spec;
            spec.n_algorithms = 12;
            spec.n_datasets = 8;
            spec.noise_scale = noise;
            spec.seed = seed;
            sum += mean_pairwise_spearman(generate_synthetic(spec));
        }
        double mean = sum / 20.0;
        CHECK(mean <= prev + 1e-9);
        prev = mean;
    }
}

TEST_CASE("calibration hits the target mean spearman", "[statistical]") {
    SyntheticSpec spec;
    spec.n_algorithms = 53;
    spec.n_datasets = 39;
    spec.target_mean_spearman = 0.51;
    spec.seed = 42;
    spec.noise_scale = calibrate_noise_scale(spec);
    auto m = generate_synthetic(spec);
    CHECK(mean_pairwise_spearman(m) == Catch::Approx(0.51).margin(0.1));
}
