// rankbench: aggregate incomplete algorithm rankings and measure their
// robustness to missing meta-data via loss-time curves.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rankbench/aggregation.hpp"
#include "rankbench/evaluation.hpp"
#include "rankbench/io.hpp"
#include "rankbench/meta_data.hpp"
#include "rankbench/omission.hpp"
#include "rankbench/ranking.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rankbench;

namespace {

// Tracks files written by one command so a failure leaves nothing behind.
class OutputSet {
public:
    std::ofstream open(const std::string& path) {
        fs::path p(path);
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open file for writing: " + path);
        paths_.push_back(path);
        return out;
    }

    void track(const std::string& path) { paths_.push_back(path); }

    void remove_all() {
        for (const auto& p : paths_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }

    const std::vector<std::string>& paths() const { return paths_; }

private:
    std::vector<std::string> paths_;
};

std::uint64_t fnv1a_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t seed_or_env(CLI::Option* opt, std::uint64_t value) {
    if (opt->count() > 0) return value;
    if (const char* env = std::getenv("RANKBENCH_SEED")) return std::strtoull(env, nullptr, 10);
    return value;
}

void write_manifest(OutputSet& outputs, const std::string& dir, const std::string& command,
                    const std::vector<std::string>& inputs, const json& params) {
    json checksums = json::object();
    for (const auto& p : outputs.paths()) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%016llx",
                      static_cast<unsigned long long>(fnv1a_file(p)));
        checksums[fs::path(p).filename().string()] = buf;
    }
    json manifest{{"command", command},
                  {"input_paths", inputs},
                  {"parameters", params},
                  {"artifact_checksums", checksums}};
    auto out = outputs.open(dir + "/manifest.json");
    out << manifest.dump(2) << "\n";
}

std::string percent_label(double p) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", p);
    return buf;
}

int run(int argc, char** argv) {
    CLI::App app{"Aggregation of incomplete algorithm rankings and loss-time evaluation"};
    app.require_subcommand(1);

    // characterize
    std::string matrix_path, out_dir, out_path;
    auto* characterize_cmd =
        app.add_subcommand("characterize", "Pairwise Spearman histogram and summary statistics");
    characterize_cmd->add_option("--matrix", matrix_path, "performance matrix CSV")->required();
    characterize_cmd->add_option("--out", out_dir, "output directory")->required();

    // aggregate
    std::string method = "ar-mta";
    auto* aggregate_cmd = app.add_subcommand("aggregate", "Aggregate per-dataset rankings");
    aggregate_cmd->add_option("--matrix", matrix_path, "performance matrix CSV")->required();
    aggregate_cmd->add_option("--method", method, "ar | ar-mta")
        ->check(CLI::IsMember({"ar", "ar-mta"}));
    aggregate_cmd->add_option("--out", out_path, "output CSV path")->required();

    // simulate
    std::string mode = "mta";
    double percent = 0.0;
    std::uint64_t seed = 0;
    auto* simulate_cmd = app.add_subcommand("simulate", "Degrade a matrix with MTD/MTA omissions");
    simulate_cmd->add_option("--matrix", matrix_path, "performance matrix CSV")->required();
    simulate_cmd->add_option("--mode", mode, "mtd | mta")->check(CLI::IsMember({"mtd", "mta"}));
    simulate_cmd->add_option("--percent", percent, "omission percentage")
        ->check(CLI::Range(0.0, 100.0));
    auto* simulate_seed = simulate_cmd->add_option("--seed", seed, "RNG seed");
    simulate_cmd->add_option("--out", out_path, "output CSV path")->required();

    // experiment
    std::vector<double> percents{0, 5, 10, 20, 50, 90, 95};
    std::size_t repeats = 10;
    double tmin = 10.0, tmax = 1e4;
    std::string time_scale = "linear";
    auto* experiment_cmd =
        app.add_subcommand("experiment", "Leave-one-out omission experiment (MIL report)");
    experiment_cmd->add_option("--matrix", matrix_path, "performance matrix CSV")->required();
    experiment_cmd->add_option("--mode", mode, "mtd | mta")->check(CLI::IsMember({"mtd", "mta"}));
    experiment_cmd->add_option("--percents", percents, "omission percentages");
    experiment_cmd->add_option("--repeats", repeats, "repetitions per fold and percentage");
    auto* experiment_seed = experiment_cmd->add_option("--seed", seed, "master seed");
    experiment_cmd->add_option("--tmin", tmin, "interval start, seconds");
    experiment_cmd->add_option("--tmax", tmax, "interval end, seconds");
    experiment_cmd->add_option("--time-scale", time_scale, "linear | log")
        ->check(CLI::IsMember({"linear", "log"}));
    experiment_cmd->add_option("--out", out_dir, "output directory")->required();

    // generate
    std::size_t n_algorithms = 53, n_datasets = 39;
    double noise = -1.0, target = 0.51;
    double rt_log_min = 0.0, rt_log_max = 4.0;
    auto* generate_cmd = app.add_subcommand("generate", "Generate a synthetic meta-dataset");
    generate_cmd->add_option("--algorithms", n_algorithms, "number of algorithms");
    generate_cmd->add_option("--datasets", n_datasets, "number of datasets");
    generate_cmd->add_option("--noise", noise,
                             "noise scale; omit to calibrate against --target-spearman");
    generate_cmd->add_option("--target-spearman", target, "target mean pairwise Spearman");
    generate_cmd->add_option("--runtime-log-min", rt_log_min, "log10 of minimum runtime");
    generate_cmd->add_option("--runtime-log-max", rt_log_max, "log10 of maximum runtime");
    auto* generate_seed = generate_cmd->add_option("--seed", seed, "RNG seed");
    generate_cmd->add_option("--out", out_path, "output CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    OutputSet outputs;
    try {
        if (characterize_cmd->parsed()) {
            auto matrix = load_matrix(matrix_path);
            auto summary = characterize(matrix);
            {
                auto out = outputs.open(out_dir + "/histogram.csv");
                out << "bin_low,bin_high,count\n";
                for (const auto& [bin, count] : summary.histogram)
                    out << bin.first << ',' << bin.second << ',' << count << "\n";
            }
            {
                auto out = outputs.open(out_dir + "/summary.json");
                out << summary_json(summary).dump(2) << "\n";
            }
        } else if (aggregate_cmd->parsed()) {
            auto matrix = load_matrix(matrix_path);
            std::vector<Ranking> rankings;
            for (const auto& d : matrix.datasets())
                if (matrix.dataset_present_count(d) >= 1)
                    rankings.push_back(rank_from_performance(matrix, d));
            if (rankings.empty()) throw std::invalid_argument("matrix has no present cells");
            auto agg = method == "ar"
                           ? aggregate_baseline_ar(rankings)
                           : aggregate_incremental(rankings, matrix.algorithms().size());
            outputs.track(out_path);
            write_aggregate_csv(agg, out_path);
        } else if (simulate_cmd->parsed()) {
            auto matrix = load_matrix(matrix_path);
            OmissionSpec spec;
            spec.mode = mode == "mtd" ? OmissionMode::MTD : OmissionMode::MTA;
            spec.percent = percent;
            spec.seed = seed_or_env(simulate_seed, seed);
            outputs.track(out_path);
            save_matrix(apply_omission(matrix, spec), out_path);
        } else if (experiment_cmd->parsed()) {
            auto matrix = load_matrix(matrix_path);
            ExperimentConfig cfg;
            cfg.mode = mode == "mtd" ? OmissionMode::MTD : OmissionMode::MTA;
            cfg.percents = percents;
            cfg.repeats = repeats;
            cfg.mil = {tmin, tmax, time_scale == "log" ? TimeScale::Log : TimeScale::Linear};
            cfg.master_seed = seed_or_env(experiment_seed, seed);

            auto sink = [&](const std::string& m, double p, const std::string& fold,
                            const LossTimeCurve& curve) {
                std::string path =
                    out_dir + "/curves/" + m + "_p" + percent_label(p) + "_" + fold + ".csv";
                outputs.track(path);
                fs::create_directories(out_dir + "/curves");
                write_curve_csv(curve, path);
            };
            auto report = loo_experiment(matrix, cfg, sink);

            outputs.track(out_dir + "/mil_report.csv");
            fs::create_directories(out_dir);
            write_mil_report_csv(report, out_dir + "/mil_report.csv");
            {
                auto out = outputs.open(out_dir + "/mil_report.json");
                out << mil_report_json(report, cfg.mil.time_scale).dump(2) << "\n";
            }
            write_manifest(outputs, out_dir, "experiment", {matrix_path},
                           {{"mode", mode},
                            {"percents", percents},
                            {"repeats", repeats},
                            {"seed", cfg.master_seed},
                            {"tmin", tmin},
                            {"tmax", tmax},
                            {"time_scale", time_scale}});
        } else if (generate_cmd->parsed()) {
            SyntheticSpec spec;
            spec.n_algorithms = n_algorithms;
            spec.n_datasets = n_datasets;
            spec.target_mean_spearman = target;
            spec.runtime_log_range = {rt_log_min, rt_log_max};
            spec.seed = seed_or_env(generate_seed, seed);
            spec.noise_scale = noise >= 0.0 ? noise : calibrate_noise_scale(spec);
            outputs.track(out_path);
            save_matrix(generate_synthetic(spec), out_path);
        }
    } catch (const std::exception& e) {
        outputs.remove_all();
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
