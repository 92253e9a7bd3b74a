#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rankbench {

struct Cell {
    double accuracy = 0.0;
    double runtime_seconds = 0.0;

    bool operator==(const Cell&) const = default;
};

struct RunRecord {
    std::string dataset_id;
    std::string algorithm_id;
    double accuracy = 0.0;
    double runtime_seconds = 0.0;
};

// Grid of test results: algorithms x datasets, cells may be absent.
// A dataset with zero present cells stays in the dataset list.
class PerformanceMatrix {
public:
    PerformanceMatrix() = default;

    static PerformanceMatrix from_records(const std::vector<RunRecord>& records) {
        PerformanceMatrix m;
        std::set<std::string> algos, dsets;
        for (const auto& r : records) {
            validate_record(r);
            auto key = std::make_pair(r.dataset_id, r.algorithm_id);
            if (m.cells_.count(key))
                throw std::invalid_argument("duplicate (dataset, algorithm) pair: " +
                                            r.dataset_id + ", " + r.algorithm_id);
            m.cells_[key] = Cell{r.accuracy, r.runtime_seconds};
            algos.insert(r.algorithm_id);
            dsets.insert(r.dataset_id);
        }
        m.algorithms_.assign(algos.begin(), algos.end());
        m.datasets_.assign(dsets.begin(), dsets.end());
        return m;
    }

    const std::vector<std::string>& algorithms() const { return algorithms_; }
    const std::vector<std::string>& datasets() const { return datasets_; }

    bool has_dataset(const std::string& dataset_id) const {
        return std::binary_search(datasets_.begin(), datasets_.end(), dataset_id);
    }

    std::optional<Cell> cell(const std::string& dataset_id,
                             const std::string& algorithm_id) const {
        auto it = cells_.find({dataset_id, algorithm_id});
        if (it == cells_.end()) return std::nullopt;
        return it->second;
    }

    // Present cells of one dataset, sorted by algorithm id.
    std::vector<std::pair<std::string, Cell>> dataset_cells(const std::string& dataset_id) const {
        std::vector<std::pair<std::string, Cell>> out;
        auto lo = cells_.lower_bound({dataset_id, ""});
        for (auto it = lo; it != cells_.end() && it->first.first == dataset_id; ++it)
            out.emplace_back(it->first.second, it->second);
        return out;
    }

    std::size_t present_count() const { return cells_.size(); }

    std::size_t dataset_present_count(const std::string& dataset_id) const {
        return dataset_cells(dataset_id).size();
    }

    // Copy with some cells removed; id lists are preserved as-is.
    PerformanceMatrix with_cells(
        std::map<std::pair<std::string, std::string>, Cell> kept) const {
        PerformanceMatrix m;
        m.algorithms_ = algorithms_;
        m.datasets_ = datasets_;
        m.cells_ = std::move(kept);
        return m;
    }

    PerformanceMatrix without_dataset(const std::string& dataset_id) const {
        PerformanceMatrix m;
        m.algorithms_ = algorithms_;
        for (const auto& d : datasets_)
            if (d != dataset_id) m.datasets_.push_back(d);
        for (const auto& [key, c] : cells_)
            if (key.first != dataset_id) m.cells_[key] = c;
        return m;
    }

    const std::map<std::pair<std::string, std::string>, Cell>& cells() const { return cells_; }

    bool operator==(const PerformanceMatrix&) const = default;

private:
    static void validate_record(const RunRecord& r) {
        if (r.dataset_id.empty() || r.algorithm_id.empty())
            throw std::invalid_argument("empty dataset or algorithm id");
        if (!(r.accuracy >= 0.0 && r.accuracy <= 1.0))
            throw std::invalid_argument("accuracy out of [0,1] for " + r.dataset_id + "," +
                                        r.algorithm_id);
        if (!(r.runtime_seconds > 0.0))
            throw std::invalid_argument("non-positive runtime for " + r.dataset_id + "," +
                                        r.algorithm_id);
    }

    std::vector<std::string> algorithms_;  // sorted, unique
    std::vector<std::string> datasets_;    // sorted, unique
    std::map<std::pair<std::string, std::string>, Cell> cells_;  // (dataset, algorithm)
};

inline constexpr const char* kMatrixCsvHeader = "dataset_id,algorithm_id,accuracy,runtime_seconds";

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

inline double parse_double(const std::string& s, std::size_t line_no, const char* what) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": bad " + what +
                                    " value '" + s + "'");
    }
    if (pos != s.size())
        throw std::invalid_argument("line " + std::to_string(line_no) + ": bad " + what +
                                    " value '" + s + "'");
    return v;
}

}  // namespace detail

inline PerformanceMatrix load_matrix_stream(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty file, header row required");
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line != kMatrixCsvHeader)
        throw std::invalid_argument(std::string("bad header, expected '") + kMatrixCsvHeader + "'");

    std::vector<RunRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto f = detail::split_csv_line(line);
        if (f.size() != 4)
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": expected 4 fields, got " + std::to_string(f.size()));
        RunRecord r;
        r.dataset_id = f[0];
        r.algorithm_id = f[1];
        r.accuracy = detail::parse_double(f[2], line_no, "accuracy");
        r.runtime_seconds = detail::parse_double(f[3], line_no, "runtime");
        records.push_back(std::move(r));
    }
    return PerformanceMatrix::from_records(records);
}

inline PerformanceMatrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open matrix file: " + path);
    try {
        return load_matrix_stream(in);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

// Rows sorted by (dataset_id, algorithm_id) for reproducible diffs.
inline void save_matrix_stream(const PerformanceMatrix& m, std::ostream& out) {
    out << kMatrixCsvHeader << "\n";
    std::ostringstream num;
    num.precision(17);
    for (const auto& [key, c] : m.cells()) {
        num.str("");
        num << c.accuracy << ',' << c.runtime_seconds;
        out << key.first << ',' << key.second << ',' << num.str() << "\n";
    }
}

inline void save_matrix(const PerformanceMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    save_matrix_stream(m, out);
}

struct SyntheticSpec {
    std::size_t n_algorithms = 0;
    std::size_t n_datasets = 0;
    double target_mean_spearman = 1.0;
    double noise_scale = 0.0;
    std::pair<double, double> runtime_log_range{0.0, 4.0};  // log10 seconds
    std::uint64_t seed = 0;
};

namespace detail {

// splitmix64-driven generator; fully deterministic across platforms,
// unlike the standard distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double next_unit() {  // uniform in [0,1)
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_unit(), u2 = next_unit();
        while (u1 <= 0.0) u1 = next_unit();
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    // uniform integer in [0, n)
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace detail

// Latent-quality model: each algorithm has a quality drawn once, each
// dataset observes quality plus dataset-local noise. Larger noise_scale
// lowers the mean pairwise Spearman correlation between dataset rankings.
inline PerformanceMatrix generate_synthetic(const SyntheticSpec& spec) {
    if (spec.n_algorithms < 2) throw std::invalid_argument("n_algorithms must be >= 2");
    if (spec.n_datasets < 1) throw std::invalid_argument("n_datasets must be >= 1");
    if (!(spec.noise_scale >= 0.0)) throw std::invalid_argument("noise_scale must be >= 0");
    if (!(spec.runtime_log_range.first < spec.runtime_log_range.second))
        throw std::invalid_argument("runtime_log_range must be increasing");

    detail::Rng rng(spec.seed);
    std::vector<double> quality(spec.n_algorithms);
    for (auto& q : quality) q = rng.next_normal();

    auto pad = [](std::size_t i, std::size_t n) {
        std::string s = std::to_string(i + 1);
        std::size_t width = std::to_string(n).size();
        return std::string(width - s.size(), '0') + s;
    };

    std::vector<RunRecord> records;
    records.reserve(spec.n_algorithms * spec.n_datasets);
    for (std::size_t d = 0; d < spec.n_datasets; ++d) {
        for (std::size_t a = 0; a < spec.n_algorithms; ++a) {
            double score = quality[a] + spec.noise_scale * rng.next_normal();
            double log_rt = spec.runtime_log_range.first +
                            rng.next_unit() *
                                (spec.runtime_log_range.second - spec.runtime_log_range.first);
            RunRecord r;
            r.dataset_id = "D" + pad(d, spec.n_datasets);
            r.algorithm_id = "a" + pad(a, spec.n_algorithms);
            r.accuracy = 1.0 / (1.0 + std::exp(-score));  // monotone map into (0,1)
            r.runtime_seconds = std::pow(10.0, log_rt);
            records.push_back(std::move(r));
        }
    }
    return PerformanceMatrix::from_records(records);
}

}  // namespace rankbench
