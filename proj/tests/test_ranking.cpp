#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "rankbench/meta_data.hpp"
#include "rankbench/ranking.hpp"

using namespace rankbench;

namespace {

PerformanceMatrix matrix_from_csv(const std::string& body) {
    std::istringstream in("dataset_id,algorithm_id,accuracy,runtime_seconds\n" + body);
    return load_matrix_stream(in);
}

Ranking make_ranking(std::vector<std::pair<std::string, double>> entries, std::size_t n_max) {
    Ranking r;
    r.n_max = n_max;
    for (auto& [id, rank] : entries) r.entries[id] = rank;
    return r;
}

// Brute-force Pearson on rank vectors, independent of the library path.
double pearson_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    double n = x.size(), sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxy += x[i] * y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
    }
    return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

}  // namespace

TEST_CASE("rank_from_performance sorts accuracies descending") {
    auto m = matrix_from_csv(
        "D1,a1,0.85,1\nD1,a2,0.95,1\nD1,a3,0.63,1\nD1,a4,0.45,1\nD1,a5,0.78,1\nD1,a6,0.67,1\n");
    auto r = rank_from_performance(m, "D1");
    CHECK(r.n_max == 6);
    CHECK(r.entries.at("a2") == 1);
    CHECK(r.entries.at("a1") == 2);
    CHECK(r.entries.at("a5") == 3);
    CHECK(r.entries.at("a6") == 4);
    CHECK(r.entries.at("a3") == 5);
    CHECK(r.entries.at("a4") == 6);
}

TEST_CASE("all-equal accuracies give every algorithm rank (N+1)/2") {
    auto m = matrix_from_csv("D1,a1,0.5,1\nD1,a2,0.5,1\nD1,a3,0.5,1\nD1,a4,0.5,1\n");
    auto r = rank_from_performance(m, "D1");
    for (const auto& [_, rank] : r.entries) CHECK(rank == 2.5);
}

TEST_CASE("singleton dataset gives rank 1") {
    auto m = matrix_from_csv("D1,a1,0.5,1\nD2,a1,0.4,1\nD2,a2,0.6,1\n");
    auto r = rank_from_performance(m, "D1");
    CHECK(r.size() == 1);
    CHECK(r.entries.at("a1") == 1);
}

TEST_CASE("rank_from_performance errors") {
    auto m = matrix_from_csv("D1,a1,0.5,1\n");
    CHECK_THROWS(rank_from_performance(m, "D9"));
}

TEST_CASE("rank sum is always N(N+1)/2", "[property]") {
    std::mt19937 gen(1);
    std::uniform_real_distribution<double> acc(0.0, 1.0);
    std::uniform_int_distribution<int> few(0, 3);  // force ties via coarse values
    for (int iter = 0; iter < 100; ++iter) {
        std::ostringstream body;
        int n = 2 + iter % 9;
        for (int a = 0; a < n; ++a)
            body << "D1,a" << a << ',' << (iter % 2 ? acc(gen) : few(gen) / 4.0) << ",1\n";
        auto r = rank_from_performance(matrix_from_csv(body.str()), "D1");
        double sum = 0;
        for (const auto& [_, rank] : r.entries) sum += rank;
        CHECK(sum == Catch::Approx(n * (n + 1) / 2.0));
    }
}

TEST_CASE("spearman identities") {
    auto r1 = make_ranking({{"a", 1}, {"b", 2}, {"c", 3}, {"d", 4}}, 4);
    auto rev = make_ranking({{"a", 4}, {"b", 3}, {"c", 2}, {"d", 1}}, 4);
    CHECK(spearman(r1, r1) == Catch::Approx(1.0));
    CHECK(spearman(r1, rev) == Catch::Approx(-1.0));
}

TEST_CASE("spearman matches the direct Pearson evaluation") {
    auto r1 = make_ranking({{"a", 1}, {"b", 2}, {"c", 3}, {"d", 4}}, 4);
    auto r2 = make_ranking({{"a", 2}, {"b", 1}, {"c", 4}, {"d", 3}}, 4);
    CHECK(pearson_oracle({1, 2, 3, 4}, {2, 1, 4, 3}) == Catch::Approx(0.6));
    CHECK(spearman(r1, r2) == Catch::Approx(0.6));
    CHECK(spearman(r2, r1) == Catch::Approx(0.6));  // symmetric
}

TEST_CASE("spearman restricts to common algorithms and re-ranks") {
    // common subset {a, c}: r1 ranks 1 < 3, r2 ranks 4 > 2 -> perfectly reversed
    auto r1 = make_ranking({{"a", 1}, {"b", 2}, {"c", 3}}, 5);
    auto r2 = make_ranking({{"a", 4}, {"c", 2}, {"d", 1}}, 5);
    CHECK(spearman(r1, r2) == Catch::Approx(-1.0));
}

TEST_CASE("spearman requires two common algorithms") {
    auto r1 = make_ranking({{"a", 1}, {"b", 2}}, 4);
    auto r2 = make_ranking({{"a", 1}, {"c", 2}}, 4);
    CHECK_THROWS(spearman(r1, r2));
}

TEST_CASE("spearman is invariant under monotone transformation of accuracies") {
    std::mt19937 gen(5);
    std::uniform_real_distribution<double> acc(0.1, 0.9);
    std::ostringstream b1, b2;
    for (int d = 0; d < 2; ++d)
        for (int a = 0; a < 6; ++a) {
            double v = acc(gen);
            b1 << 'D' << d << ",a" << a << ',' << v << ",1\n";
            b2 << 'D' << d << ",a" << a << ',' << v * v << ",1\n";  // strictly monotone on (0,1)
        }
    auto m1 = matrix_from_csv(b1.str());
    auto m2 = matrix_from_csv(b2.str());
    CHECK(spearman(rank_from_performance(m1, "D0"), rank_from_performance(m1, "D1")) ==
          Catch::Approx(spearman(rank_from_performance(m2, "D0"),
                                 rank_from_performance(m2, "D1"))));
}

TEST_CASE("characterize of identical rankings gives mean 1, sd 0") {
    SyntheticSpec spec;
    spec.n_algorithms = 6;
    spec.n_datasets = 5;
    spec.noise_scale = 0.0;
    spec.seed = 3;
    auto s = characterize(generate_synthetic(spec));
    CHECK(s.mean == Catch::Approx(1.0));
    CHECK(s.sd == Catch::Approx(0.0));
    CHECK(s.coeff_variation_percent == Catch::Approx(0.0));
    CHECK(s.n_pairs == 10);
    // all mass in the last bin
    CHECK(s.histogram.back().second == 10);
}

TEST_CASE("characterize of a single reversed pair gives mean -1") {
    auto m = matrix_from_csv("D1,a1,0.9,1\nD1,a2,0.8,1\nD1,a3,0.7,1\n"
                             "D2,a1,0.1,1\nD2,a2,0.2,1\nD2,a3,0.3,1\n");
    auto s = characterize(m);
    CHECK(s.mean == Catch::Approx(-1.0));
    CHECK(s.n_pairs == 1);
}

TEST_CASE("characterize requires enough data") {
    CHECK_THROWS(characterize(matrix_from_csv("D1,a1,0.5,1\nD1,a2,0.6,1\n")));
    // two datasets but no shared pair of algorithms
    CHECK_THROWS(characterize(matrix_from_csv("D1,a1,0.5,1\nD1,a2,0.6,1\n"
                                              "D2,a3,0.5,1\nD2,a4,0.6,1\n")));
}

TEST_CASE("histogram bins cover [-1,1] with width 0.1") {
    auto m = matrix_from_csv("D1,a1,0.9,1\nD1,a2,0.8,1\nD1,a3,0.7,1\n"
                             "D2,a1,0.9,1\nD2,a2,0.8,1\nD2,a3,0.7,1\n");
    auto s = characterize(m);
    REQUIRE(s.histogram.size() == 20);
    CHECK(s.histogram.front().first.first == Catch::Approx(-1.0));
    CHECK(s.histogram.back().first.second == Catch::Approx(1.0));
    std::size_t total = 0;
    for (const auto& [_, c] : s.histogram) total += c;
    CHECK(total == s.n_pairs);
}
