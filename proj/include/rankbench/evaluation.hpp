#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rankbench/aggregation.hpp"
#include "rankbench/meta_data.hpp"
#include "rankbench/omission.hpp"
#include "rankbench/ranking.hpp"

namespace rankbench {

// Right-continuous step function of cumulative runtime vs accuracy loss.
// Value before the first breakpoint is initial_loss; at and after a
// breakpoint's time, its loss.
struct LossTimeCurve {
    std::vector<std::pair<double, double>> breakpoints;  // (time_seconds, loss)
    double initial_loss = 0.0;

    double value_at(double t) const {
        double v = initial_loss;
        for (const auto& [time, loss] : breakpoints) {
            if (time > t) break;
            v = loss;
        }
        return v;
    }

    double final_loss() const {
        return breakpoints.empty() ? initial_loss : breakpoints.back().second;
    }
};

enum class TimeScale { Linear, Log };

struct MILConfig {
    double t_min = 10.0;
    double t_max = 1e4;
    TimeScale time_scale = TimeScale::Linear;

    void validate() const {
        if (!(t_min > 0.0 && t_max > t_min))
            throw std::invalid_argument("MILConfig requires 0 < t_min < t_max");
    }
};

// Walks the given order on the held-out dataset: each tested algorithm
// adds its runtime to the clock and may improve the best accuracy so
// far. Loss = (best present accuracy on the dataset) - (best so far).
// Algorithms without a cell on the dataset are skipped at zero cost.
inline LossTimeCurve build_loss_time_curve(const std::vector<std::string>& order,
                                           const PerformanceMatrix& matrix,
                                           const std::string& heldout) {
    if (order.empty()) throw std::invalid_argument("empty algorithm order");
    if (!matrix.has_dataset(heldout)) throw std::invalid_argument("unknown dataset: " + heldout);
    auto cells = matrix.dataset_cells(heldout);
    if (cells.empty()) throw std::invalid_argument("held-out dataset has no present cells");

    std::map<std::string, Cell> by_algo(cells.begin(), cells.end());
    double ideal = 0.0;
    for (const auto& [_, c] : by_algo) ideal = std::max(ideal, c.accuracy);

    LossTimeCurve curve;
    curve.initial_loss = ideal;  // nothing tested yet, default accuracy 0
    double t = 0.0, best = 0.0;
    for (const auto& algo : order) {
        auto it = by_algo.find(algo);
        if (it == by_algo.end()) continue;
        t += it->second.runtime_seconds;
        if (it->second.accuracy > best) {
            best = it->second.accuracy;
            curve.breakpoints.emplace_back(t, ideal - best);
        }
    }
    return curve;
}

// Time-weighted average of the step function over [t_min, t_max].
// Linear scale weights by dt, log scale by d(ln t).
inline double mean_interval_loss(const LossTimeCurve& curve, const MILConfig& cfg) {
    cfg.validate();

    // segment boundaries clipped to the interval
    std::vector<double> times{cfg.t_min};
    for (const auto& [time, _] : curve.breakpoints)
        if (time > cfg.t_min && time < cfg.t_max) times.push_back(time);
    times.push_back(cfg.t_max);

    std::vector<double> values(times.size() - 1);
    for (std::size_t i = 0; i + 1 < times.size(); ++i) values[i] = curve.value_at(times[i]);
    // constant over the interval: exact, no quadrature roundoff
    if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values[0]; }))
        return values[0];

    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        double span = cfg.time_scale == TimeScale::Linear
                          ? times[i + 1] - times[i]
                          : std::log(times[i + 1]) - std::log(times[i]);
        integral += values[i] * span;
    }
    double total = cfg.time_scale == TimeScale::Linear ? cfg.t_max - cfg.t_min
                                                       : std::log(cfg.t_max) - std::log(cfg.t_min);
    return integral / total;
}

// Pointwise mean over the union of breakpoint times.
inline LossTimeCurve aggregate_curves(const std::vector<LossTimeCurve>& curves) {
    if (curves.empty()) throw std::invalid_argument("empty curve list");

    std::set<double> times;
    for (const auto& c : curves)
        for (const auto& [t, _] : c.breakpoints) times.insert(t);

    LossTimeCurve out;
    for (const auto& c : curves) out.initial_loss += c.initial_loss;
    out.initial_loss /= curves.size();

    double prev = out.initial_loss;
    for (double t : times) {
        double v = 0.0;
        for (const auto& c : curves) v += c.value_at(t);
        v /= curves.size();
        if (v != prev) out.breakpoints.emplace_back(t, v);
        prev = v;
    }
    return out;
}

enum class Method { AR, AR_MTA };

inline const char* method_name(Method m) { return m == Method::AR ? "AR" : "AR-MTA"; }

struct MILCell {
    double mean_mil = 0.0;
    std::vector<double> per_fold_mils;
    std::size_t n_skipped = 0;  // repetitions with no usable ranking
};

struct MILReport {
    std::map<std::string, std::map<double, MILCell>> rows;  // method -> percent -> cell
};

struct ExperimentConfig {
    std::vector<Method> methods{Method::AR, Method::AR_MTA};
    OmissionMode mode = OmissionMode::MTA;
    std::vector<double> percents{0, 5, 10, 20, 50, 90, 95};
    std::size_t repeats = 10;
    MILConfig mil;
    std::uint64_t master_seed = 0;
};

namespace detail {

// per-repetition seed: mixed from (master, fold, rep) so every
// (fold, percent grid, rep) cell is an independent deterministic draw
inline std::uint64_t derive_seed(std::uint64_t master, std::size_t fold, std::size_t rep) {
    Rng rng(master ^ (0x9e3779b97f4a7c15ULL * (fold * 1000003ULL + rep + 1)));
    return rng.next_u64();
}

// AR-MTA goes through the closed form here: it computes the identical
// weighted average as the incremental update (property-tested to 1e-9)
// but sums once per element, so with uniform weights it reduces to the
// AR baseline bit-for-bit. The incremental fold accumulates rounding
// that can flip exact rank ties against the baseline order.
inline AggregateRanking aggregate_by(Method m, const std::vector<Ranking>& rankings,
                                     std::size_t n_max) {
    return m == Method::AR ? aggregate_baseline_ar(rankings)
                           : aggregate_closed_form(rankings, n_max);
}

}  // namespace detail

// Leave-one-out experiment: for each held-out dataset and omission
// percentage, degrade the training matrix `repeats` times, aggregate the
// per-dataset rankings with each method, walk the order on the held-out
// dataset, aggregate the repetition curves and take the MIL per fold.
// Reported means are over folds.
using CurveSink = std::function<void(const std::string& method, double percent,
                                     const std::string& heldout, const LossTimeCurve&)>;

inline MILReport loo_experiment(const PerformanceMatrix& matrix, const ExperimentConfig& cfg,
                                const CurveSink& curve_sink = {}) {
    if (matrix.datasets().size() < 2)
        throw std::invalid_argument("loo_experiment requires >= 2 datasets");
    if (cfg.repeats < 1) throw std::invalid_argument("repeats must be >= 1");
    cfg.mil.validate();
    const std::size_t n_max = matrix.algorithms().size();

    MILReport report;
    std::size_t fold = 0;
    for (const auto& heldout : matrix.datasets()) {
        ++fold;
        if (matrix.dataset_present_count(heldout) == 0) continue;
        PerformanceMatrix training = matrix.without_dataset(heldout);

        for (double percent : cfg.percents) {
            std::map<Method, std::vector<LossTimeCurve>> curves;
            std::size_t skipped = 0;

            for (std::size_t rep = 0; rep < cfg.repeats; ++rep) {
                OmissionSpec spec{cfg.mode, percent, detail::derive_seed(cfg.master_seed, fold, rep)};
                PerformanceMatrix degraded = apply_omission(training, spec);

                std::vector<Ranking> rankings;
                for (const auto& d : degraded.datasets())
                    if (degraded.dataset_present_count(d) >= 1)
                        rankings.push_back(rank_from_performance(degraded, d));
                if (rankings.empty()) {
                    ++skipped;
                    continue;
                }

                for (Method m : cfg.methods) {
                    auto order = detail::aggregate_by(m, rankings, n_max).total_order();
                    curves[m].push_back(build_loss_time_curve(order, matrix, heldout));
                }
            }

            for (Method m : cfg.methods) {
                auto& cell = report.rows[method_name(m)][percent];
                cell.n_skipped += skipped;
                if (!curves[m].empty()) {
                    LossTimeCurve fold_curve = aggregate_curves(curves[m]);
                    cell.per_fold_mils.push_back(mean_interval_loss(fold_curve, cfg.mil));
                    if (curve_sink) curve_sink(method_name(m), percent, heldout, fold_curve);
                }
            }
        }
    }

    for (auto& [_, row] : report.rows)
        for (auto& [_p, cell] : row) {
            if (cell.per_fold_mils.empty())
                throw std::runtime_error("no usable fold in the experiment grid");
            double sum = 0;
            for (double v : cell.per_fold_mils) sum += v;
            cell.mean_mil = sum / cell.per_fold_mils.size();
        }
    return report;
}

}  // namespace rankbench
