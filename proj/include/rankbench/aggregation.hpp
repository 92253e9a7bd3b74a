#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rankbench/ranking.hpp"

namespace rankbench {

struct AggregateEntry {
    double rank = 0.0;
    double weight = 0.0;
};

struct AggregateRanking {
    std::map<std::string, AggregateEntry> entries;
    std::size_t n_max = 0;

    // Deterministic total order: rank ascending, weight descending, id.
    std::vector<std::string> total_order() const {
        std::vector<std::string> ids;
        ids.reserve(entries.size());
        for (const auto& [id, _] : entries) ids.push_back(id);
        std::sort(ids.begin(), ids.end(), [&](const std::string& a, const std::string& b) {
            const auto& ea = entries.at(a);
            const auto& eb = entries.at(b);
            if (ea.rank != eb.rank) return ea.rank < eb.rank;
            if (ea.weight != eb.weight) return ea.weight > eb.weight;
            return a < b;
        });
        return ids;
    }
};

// Completeness weight (N-1)/(Nmax-1): a ranking of N elements carries
// N-1 pairwise preferences out of a possible Nmax-1.
inline double ranking_weight(std::size_t n_present, std::size_t n_max) {
    if (n_max < 2) throw std::invalid_argument("ranking_weight requires n_max >= 2");
    if (n_present < 1 || n_present > n_max)
        throw std::invalid_argument("n_present must be in [1, n_max]");
    return static_cast<double>(n_present - 1) / static_cast<double>(n_max - 1);
}

namespace detail {

inline void check_rankings(const std::vector<Ranking>& rankings, std::size_t n_max) {
    if (rankings.empty()) throw std::invalid_argument("empty ranking list");
    for (const auto& r : rankings)
        if (r.n_max != n_max)
            throw std::invalid_argument("ranking n_max inconsistent with aggregation n_max");
}

}  // namespace detail

// Incremental weighted aggregation (AR-MTA). Elements present in both the
// state and the incoming ranking get a weighted-average rank and summed
// weight; state-only elements are unchanged; new elements are inserted
// with the incoming (rank, weight).
inline AggregateRanking aggregate_incremental(const std::vector<Ranking>& rankings,
                                              std::size_t n_max) {
    detail::check_rankings(rankings, n_max);

    AggregateRanking agg;
    agg.n_max = n_max;
    // Zero-weight entries (singleton-only observations) track the
    // unweighted mean of observed ranks until real weight arrives.
    std::map<std::string, std::size_t> zero_obs;

    for (const auto& ranking : rankings) {
        const double w_j = ranking_weight(ranking.size(), n_max);
        for (const auto& [id, r_j] : ranking.entries) {
            auto it = agg.entries.find(id);
            if (it == agg.entries.end()) {
                agg.entries[id] = AggregateEntry{r_j, w_j};
                zero_obs[id] = 1;
                continue;
            }
            auto& e = it->second;
            if (e.weight + w_j > 0.0) {
                e.rank = e.rank * e.weight / (e.weight + w_j) + r_j * w_j / (e.weight + w_j);
                e.weight += w_j;
            } else {
                // all observations so far have weight 0: unweighted mean
                auto& n = zero_obs[id];
                e.rank = (e.rank * n + r_j) / (n + 1);
                ++n;
            }
        }
    }
    return agg;
}

// Closed-form oracle: weighted mean of observed ranks, weight = sum of
// per-ranking weights. Algebraically identical to the incremental fold.
inline AggregateRanking aggregate_closed_form(const std::vector<Ranking>& rankings,
                                              std::size_t n_max) {
    detail::check_rankings(rankings, n_max);

    struct Acc {
        double weighted_sum = 0.0, weight = 0.0, plain_sum = 0.0;
        std::size_t count = 0;
    };
    std::map<std::string, Acc> accs;
    for (const auto& ranking : rankings) {
        const double w_j = ranking_weight(ranking.size(), n_max);
        for (const auto& [id, r_j] : ranking.entries) {
            auto& a = accs[id];
            a.weighted_sum += w_j * r_j;
            a.weight += w_j;
            a.plain_sum += r_j;
            ++a.count;
        }
    }

    AggregateRanking agg;
    agg.n_max = n_max;
    for (const auto& [id, a] : accs) {
        if (a.weight > 0.0)
            agg.entries[id] = AggregateEntry{a.weighted_sum / a.weight, a.weight};
        else
            agg.entries[id] = AggregateEntry{a.plain_sum / a.count, 0.0};
    }
    return agg;
}

// Baseline average ranking (AR): unweighted mean of observed ranks,
// weight reports the observation count.
inline AggregateRanking aggregate_baseline_ar(const std::vector<Ranking>& rankings) {
    if (rankings.empty()) throw std::invalid_argument("empty ranking list");

    std::map<std::string, std::pair<double, std::size_t>> accs;  // sum, count
    std::size_t n_max = rankings.front().n_max;
    for (const auto& ranking : rankings)
        for (const auto& [id, r] : ranking.entries) {
            auto& a = accs[id];
            a.first += r;
            ++a.second;
        }

    AggregateRanking agg;
    agg.n_max = n_max;
    for (const auto& [id, a] : accs)
        agg.entries[id] = AggregateEntry{a.first / a.second, static_cast<double>(a.second)};
    return agg;
}

}  // namespace rankbench
