#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "rankbench/aggregation.hpp"
#include "rankbench/evaluation.hpp"
#include "rankbench/ranking.hpp"

namespace rankbench {

namespace detail {

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    return out;
}

}  // namespace detail

inline void write_histogram_csv(const SpearmanSummary& s, const std::string& path) {
    auto out = detail::open_out(path);
    out << "bin_low,bin_high,count\n";
    for (const auto& [bin, count] : s.histogram)
        out << detail::fmt(bin.first) << ',' << detail::fmt(bin.second) << ',' << count << "\n";
}

inline nlohmann::json summary_json(const SpearmanSummary& s) {
    return {{"mean", s.mean},
            {"sd", s.sd},
            {"cv_percent", s.coeff_variation_percent},
            {"n_pairs", s.n_pairs}};
}

inline void write_aggregate_csv(const AggregateRanking& agg, const std::string& path) {
    auto out = detail::open_out(path);
    out << "algorithm_id,rank,weight\n";
    for (const auto& id : agg.total_order()) {
        const auto& e = agg.entries.at(id);
        out << id << ',' << detail::fmt(e.rank) << ',' << detail::fmt(e.weight) << "\n";
    }
}

inline void write_mil_report_csv(const MILReport& report, const std::string& path) {
    auto out = detail::open_out(path);
    out << "method,percent,mean_mil,n_folds,n_skipped\n";
    for (const auto& [method, row] : report.rows)
        for (const auto& [percent, cell] : row)
            out << method << ',' << detail::fmt(percent) << ',' << detail::fmt(cell.mean_mil)
                << ',' << cell.per_fold_mils.size() << ',' << cell.n_skipped << "\n";
}

inline nlohmann::json mil_report_json(const MILReport& report, TimeScale scale) {
    nlohmann::json rows = nlohmann::json::object();
    for (const auto& [method, row] : report.rows) {
        nlohmann::json cells = nlohmann::json::object();
        for (const auto& [percent, cell] : row)
            cells[detail::fmt(percent)] = {{"mean_mil", cell.mean_mil},
                                           {"per_fold_mils", cell.per_fold_mils},
                                           {"n_skipped", cell.n_skipped}};
        rows[method] = cells;
    }
    return {{"time_scale", scale == TimeScale::Linear ? "linear" : "log"}, {"rows", rows}};
}

inline void write_curve_csv(const LossTimeCurve& curve, const std::string& path) {
    auto out = detail::open_out(path);
    out << "time,loss\n";
    out << "0," << detail::fmt(curve.initial_loss) << "\n";
    for (const auto& [t, loss] : curve.breakpoints)
        out << detail::fmt(t) << ',' << detail::fmt(loss) << "\n";
}

}  // namespace rankbench
