#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rankbench/meta_data.hpp"

namespace rankbench {

enum class OmissionMode { MTD, MTA };

struct OmissionSpec {
    OmissionMode mode = OmissionMode::MTD;
    double percent = 0.0;
    std::uint64_t seed = 0;
};

namespace detail {

// Round-half-even of n*(1-p/100). Reproduces the canonical kept counts
// for 38 datasets (36/34/30/19/4/2) and 53 tests (50/48/42/26/5/3); the
// tie rule matters only at 50% of 53, where 26.5 rounds to 26.
inline std::size_t kept_count(std::size_t n, double percent) {
    double kept = static_cast<double>(n) * (1.0 - percent / 100.0);
    double rounded = std::nearbyint(kept);  // FE_TONEAREST: ties to even
    return static_cast<std::size_t>(rounded);
}

// First k of a seeded Fisher-Yates permutation of 0..n-1.
inline std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k,
                                                          Rng& rng) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.next_below(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

}  // namespace detail

// Missing Tests on Datasets: empties all cells of a random subset of
// datasets, keeping round(D*(1-p/100)) datasets intact. Emptied dataset
// columns stay in the dataset list.
inline PerformanceMatrix apply_mtd(const PerformanceMatrix& matrix, const OmissionSpec& spec) {
    if (spec.mode != OmissionMode::MTD) throw std::invalid_argument("spec.mode must be MTD");
    if (!(spec.percent >= 0.0 && spec.percent <= 100.0))
        throw std::invalid_argument("percent must be in [0,100]");

    const auto& datasets = matrix.datasets();
    const std::size_t keep = detail::kept_count(datasets.size(), spec.percent);
    if (keep == datasets.size()) return matrix;

    detail::Rng rng(spec.seed);
    auto kept_idx = detail::sample_without_replacement(datasets.size(), keep, rng);
    std::vector<bool> kept(datasets.size(), false);
    for (auto i : kept_idx) kept[i] = true;
    std::map<std::string, bool> keep_dataset;
    for (std::size_t i = 0; i < datasets.size(); ++i) keep_dataset[datasets[i]] = kept[i];

    std::map<std::pair<std::string, std::string>, Cell> cells;
    for (const auto& [key, c] : matrix.cells())
        if (keep_dataset.at(key.first)) cells[key] = c;
    return matrix.with_cells(std::move(cells));
}

// Missing Tests of Algorithms: per dataset, keeps an exact count of
// round(A*(1-p/100)) of its present cells, uniformly at random. All
// datasets draw from the same seeded generator, in dataset order.
inline PerformanceMatrix apply_mta(const PerformanceMatrix& matrix, const OmissionSpec& spec) {
    if (spec.mode != OmissionMode::MTA) throw std::invalid_argument("spec.mode must be MTA");
    if (!(spec.percent >= 0.0 && spec.percent <= 100.0))
        throw std::invalid_argument("percent must be in [0,100]");
    if (spec.percent == 0.0) return matrix;

    detail::Rng rng(spec.seed);
    std::map<std::pair<std::string, std::string>, Cell> cells;
    for (const auto& dataset : matrix.datasets()) {
        auto present = matrix.dataset_cells(dataset);
        if (present.empty()) continue;
        const std::size_t keep = detail::kept_count(present.size(), spec.percent);
        auto kept_idx = detail::sample_without_replacement(present.size(), keep, rng);
        for (auto i : kept_idx)
            cells[{dataset, present[i].first}] = present[i].second;
    }
    return matrix.with_cells(std::move(cells));
}

inline PerformanceMatrix apply_omission(const PerformanceMatrix& matrix,
                                        const OmissionSpec& spec) {
    return spec.mode == OmissionMode::MTD ? apply_mtd(matrix, spec) : apply_mta(matrix, spec);
}

}  // namespace rankbench
