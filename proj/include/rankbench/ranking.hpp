#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rankbench/meta_data.hpp"

namespace rankbench {

// Partial ranking over a universe of n_max algorithms. Present entries
// carry fractional ranks 1..N with ties averaged, so the rank sum is
// always N(N+1)/2.
struct Ranking {
    std::map<std::string, double> entries;  // algorithm_id -> rank
    std::size_t n_max = 0;

    std::size_t size() const { return entries.size(); }
};

namespace detail {

// Fractional (average-tie) ranks of values, rank 1 = largest value.
inline std::vector<double> fractional_ranks_desc(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

// Fractional ranks with rank 1 = smallest value (used to re-rank rank vectors).
inline std::vector<double> fractional_ranks_asc(const std::vector<double>& values) {
    std::vector<double> neg(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) neg[i] = -values[i];
    return fractional_ranks_desc(neg);
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 && syy == 0.0) return 1.0;  // both constant: identical rankings
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace detail

// Ranking of one dataset's present algorithms by accuracy, best first.
inline Ranking rank_from_performance(const PerformanceMatrix& matrix,
                                     const std::string& dataset_id) {
    if (!matrix.has_dataset(dataset_id))
        throw std::invalid_argument("unknown dataset: " + dataset_id);
    auto cells = matrix.dataset_cells(dataset_id);
    if (cells.empty())
        throw std::invalid_argument("dataset has no present cells: " + dataset_id);

    std::vector<double> accs(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) accs[i] = cells[i].second.accuracy;
    auto ranks = detail::fractional_ranks_desc(accs);

    Ranking r;
    r.n_max = matrix.algorithms().size();
    for (std::size_t i = 0; i < cells.size(); ++i) r.entries[cells[i].first] = ranks[i];
    return r;
}

// Spearman correlation restricted to the common algorithms, re-ranked
// within the intersection. Requires >= 2 common algorithms.
inline double spearman(const Ranking& r1, const Ranking& r2) {
    std::vector<double> v1, v2;
    for (const auto& [id, rank1] : r1.entries) {
        auto it = r2.entries.find(id);
        if (it != r2.entries.end()) {
            v1.push_back(rank1);
            v2.push_back(it->second);
        }
    }
    if (v1.size() < 2)
        throw std::invalid_argument("spearman requires >= 2 common algorithms");
    return detail::pearson(detail::fractional_ranks_asc(v1), detail::fractional_ranks_asc(v2));
}

struct SpearmanSummary {
    std::vector<std::pair<std::pair<double, double>, std::size_t>> histogram;  // ((lo,hi), count)
    double mean = 0.0;
    double sd = 0.0;
    double coeff_variation_percent = 0.0;
    std::size_t n_pairs = 0;
};

// Pairwise Spearman over all dataset pairs with >= 2 common algorithms.
// Histogram covers [-1,1] with the given bin width; 1.0 lands in the last bin.
inline SpearmanSummary characterize(const PerformanceMatrix& matrix, double bin_width = 0.1) {
    std::vector<Ranking> rankings;
    for (const auto& d : matrix.datasets())
        if (matrix.dataset_present_count(d) >= 2)
            rankings.push_back(rank_from_performance(matrix, d));
    if (rankings.size() < 2)
        throw std::invalid_argument("characterize requires >= 2 datasets with >= 2 cells each");

    std::vector<double> rhos;
    for (std::size_t i = 0; i < rankings.size(); ++i) {
        for (std::size_t j = i + 1; j < rankings.size(); ++j) {
            std::size_t common = 0;
            for (const auto& [id, _] : rankings[i].entries)
                common += rankings[j].entries.count(id);
            if (common >= 2) rhos.push_back(spearman(rankings[i], rankings[j]));
        }
    }
    if (rhos.empty()) throw std::invalid_argument("no dataset pair shares >= 2 algorithms");

    SpearmanSummary s;
    s.n_pairs = rhos.size();
    double sum = 0;
    for (double r : rhos) sum += r;
    s.mean = sum / rhos.size();
    double ss = 0;
    for (double r : rhos) ss += (r - s.mean) * (r - s.mean);
    s.sd = rhos.size() > 1 ? std::sqrt(ss / (rhos.size() - 1)) : 0.0;
    s.coeff_variation_percent = s.mean != 0.0 ? 100.0 * s.sd / s.mean : 0.0;

    const std::size_t n_bins = static_cast<std::size_t>(std::round(2.0 / bin_width));
    std::vector<std::size_t> counts(n_bins, 0);
    for (double r : rhos) {
        auto idx = static_cast<std::size_t>((r + 1.0) / bin_width);
        if (idx >= n_bins) idx = n_bins - 1;
        ++counts[idx];
    }
    for (std::size_t b = 0; b < n_bins; ++b)
        s.histogram.push_back({{-1.0 + b * bin_width, -1.0 + (b + 1) * bin_width}, counts[b]});
    return s;
}

// Mean pairwise Spearman of a complete matrix, used by the synthetic
// generator calibration.
inline double mean_pairwise_spearman(const PerformanceMatrix& matrix) {
    return characterize(matrix).mean;
}

// Bisect noise_scale so the generated matrix's mean pairwise Spearman
// hits spec.target_mean_spearman.
inline double calibrate_noise_scale(SyntheticSpec spec, double tolerance = 0.02,
                                    int max_iter = 40) {
    auto measure = [&](double noise) {
        spec.noise_scale = noise;
        return mean_pairwise_spearman(generate_synthetic(spec));
    };
    double lo = 0.0, hi = 1.0;
    while (measure(hi) > spec.target_mean_spearman && hi < 1e6) hi *= 2.0;
    for (int i = 0; i < max_iter; ++i) {
        double mid = (lo + hi) / 2.0;
        double m = measure(mid);
        if (std::abs(m - spec.target_mean_spearman) < tolerance) return mid;
        if (m > spec.target_mean_spearman)
            lo = mid;
        else
            hi = mid;
    }
    return (lo + hi) / 2.0;
}

}  // namespace rankbench
