#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "histoclust/clustering.hpp"
#include "histoclust/evaluation.hpp"
#include "histoclust/io.hpp"
#include "histoclust/synthgen.hpp"

namespace fs = std::filesystem;
using namespace histoclust;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitRunSpec = 3;

std::size_t default_threads() {
    if (const char* env = std::getenv("WASSERCLUST_THREADS")) {
        const long v = std::atol(env);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

struct KRange {
    std::size_t lo = 0, hi = 0;  // inclusive
    bool single() const { return lo == hi; }
};

KRange parse_k(const std::string& spec) {
    const std::size_t dots = spec.find("..");
    try {
        KRange r;
        if (dots == std::string::npos) {
            r.lo = r.hi = std::stoul(spec);
        } else {
            r.lo = std::stoul(spec.substr(0, dots));
            r.hi = std::stoul(spec.substr(dots + 2));
        }
        if (r.lo < 1 || r.hi < r.lo) throw InvalidRunSpec("bad k range " + spec);
        return r;
    } catch (const std::exception&) {
        throw InvalidRunSpec("cannot parse k spec `" + spec + "` (expected `K` or `Kmin..Kmax`)");
    }
}

std::vector<Scheme> parse_schemes(const std::string& csv) {
    std::vector<Scheme> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const std::size_t comma = csv.find(',', pos);
        const std::string tok = csv.substr(pos, comma == std::string::npos ? csv.npos : comma - pos);
        if (!tok.empty()) out.push_back(scheme_from_name(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw InvalidRunSpec("no schemes given");
    return out;
}

void write_cluster_artifacts(const fs::path& dir, const HistogramMatrix& matrix,
                             const ClusteringResult& result) {
    fs::create_directories(dir);
    const auto breakdown = inertia(matrix, result);
    const auto report = qpi(breakdown);
    io::write_json((dir / "result.json").string(), io::result_to_json(result, matrix));
    io::write_json((dir / "qpi.json").string(),
                   io::qpi_to_json(report, matrix.variable_names()));
    io::write_text((dir / "qpi.txt").string(),
                   io::qpi_to_text(report, matrix.variable_names()));
    io::write_json((dir / "prototypes.json").string(),
                   io::prototypes_to_json(result, breakdown.general_prototype,
                                          matrix.variable_names()));
    io::write_trace_csv((dir / "trace.csv").string(), result.criterion_trace);
}

struct ClusterArgs {
    std::string input;
    std::string k_spec = "3";
    std::string scheme = "standard";
    std::size_t restarts = 10;
    std::size_t max_iter = 100;
    std::uint64_t seed = 0;
    std::size_t num_bins = 20;
    std::string out = ".";
};

void add_cluster_flags(CLI::App* cmd, ClusterArgs& a) {
    cmd->add_option("--input", a.input, "matrix JSON or raw-samples CSV")->required();
    cmd->add_option("--k", a.k_spec, "cluster count K or range Kmin..Kmax");
    cmd->add_option("--scheme", a.scheme, "standard | gc-awd | cdc-awd");
    cmd->add_option("--restarts", a.restarts, "random restarts per K");
    cmd->add_option("--max-iter", a.max_iter, "iteration cap per restart");
    cmd->add_option("--seed", a.seed, "RNG seed");
    cmd->add_option("--num-bins", a.num_bins, "bins per histogram for CSV ingestion");
    cmd->add_option("--out", a.out, "output directory");
}

int run_cluster(const ClusterArgs& a, bool sweep_only, bool print_qpi) {
    const KRange kr = parse_k(a.k_spec);
    const Scheme scheme = scheme_from_name(a.scheme);
    const HistogramMatrix matrix = io::load_matrix(a.input, a.num_bins);
    if (kr.hi >= matrix.n())
        throw InvalidRunSpec("k range must stay below n = " + std::to_string(matrix.n()));

    DcaOptions opts;
    opts.restarts = a.restarts;
    opts.max_iter = a.max_iter;
    opts.seed = a.seed;

    const fs::path outdir(a.out);
    fs::create_directories(outdir);
    std::vector<std::pair<std::size_t, double>> ch_rows;

    for (std::size_t k = kr.lo; k <= kr.hi; ++k) {
        const auto result = run_dca(matrix, k, scheme, opts);
        const fs::path dir = kr.single() ? outdir : outdir / ("k" + std::to_string(k));
        if (!sweep_only) write_cluster_artifacts(dir, matrix, result);
        if (k >= 2 && k < matrix.n())
            ch_rows.emplace_back(k, ch_index(inertia(matrix, result), k, matrix.n()));
        if (print_qpi && kr.single()) {
            const auto report = qpi(inertia(matrix, result));
            std::cout << io::qpi_to_text(report, matrix.variable_names());
        }
    }
    if (!kr.single() || sweep_only) {
        io::write_ch_csv((outdir / "ch.csv").string(), ch_rows);
        if (sweep_only) {
            std::cout << "k,ch\n";
            for (const auto& [k, ch] : ch_rows) std::cout << k << "," << ch << "\n";
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Clustering of histogram-valued data with adaptive Wasserstein distances"};
    app.require_subcommand(1);
    std::size_t threads = default_threads();
    app.add_option("--threads", threads, "worker threads (default: cores)");

    ClusterArgs cluster_args;
    CLI::App* cluster = app.add_subcommand("cluster", "run the clustering engine")
        ->fallthrough();
    add_cluster_flags(cluster, cluster_args);

    ClusterArgs qpi_args;
    CLI::App* qpi_cmd = app.add_subcommand("qpi", "cluster once and print the partition-quality table")
        ->fallthrough();
    add_cluster_flags(qpi_cmd, qpi_args);

    ClusterArgs sweep_args;
    CLI::App* sweep = app.add_subcommand("ch-sweep", "CH index over a range of K")
        ->fallthrough();
    add_cluster_flags(sweep, sweep_args);

    std::string gen_config, gen_out = ".";
    std::size_t gen_replicate = 0;
    CLI::App* generate = app.add_subcommand("generate", "write one synthetic dataset")
        ->fallthrough();
    generate->add_option("--config", gen_config, "experiment TOML config")->required();
    generate->add_option("--out", gen_out, "output directory");
    generate->add_option("--replicate", gen_replicate, "replicate index (varies the RNG stream)");

    std::string exp_config, exp_out = ".", exp_preset = "full", exp_schemes = "standard,gc-awd,cdc-awd";
    CLI::App* experiment = app.add_subcommand("experiment", "Monte Carlo comparison of the schemes")
        ->fallthrough();
    experiment->add_option("--config", exp_config, "experiment TOML config")->required();
    experiment->add_option("--out", exp_out, "output directory");
    experiment->add_option("--preset", exp_preset, "full | desk (fast: 20 replicates, 10 restarts)");
    experiment->add_option("--schemes", exp_schemes, "comma-separated scheme subset");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitRunSpec;
    }

    try {
        if (cluster->parsed()) return run_cluster(cluster_args, false, false);
        if (qpi_cmd->parsed()) return run_cluster(qpi_args, false, true);
        if (sweep->parsed()) {
            if (parse_k(sweep_args.k_spec).single())
                throw InvalidRunSpec("ch-sweep needs a K range, e.g. --k 2..10");
            return run_cluster(sweep_args, true, false);
        }
        if (generate->parsed()) {
            const ExperimentConfig config = io::load_config(gen_config);
            const auto [matrix, labels] = generate_dataset(config, gen_replicate);
            fs::create_directories(gen_out);
            io::write_json((fs::path(gen_out) / "matrix.json").string(), io::matrix_to_json(matrix));
            io::write_labels_csv((fs::path(gen_out) / "labels.csv").string(), matrix.object_ids(),
                                 labels);
            return kExitOk;
        }
        if (experiment->parsed()) {
            ExperimentConfig config = io::load_config(exp_config);
            if (exp_preset == "desk")
                apply_desk_preset(config);
            else if (exp_preset != "full")
                throw InvalidRunSpec("unknown preset `" + exp_preset + "`");
            const auto schemes = parse_schemes(exp_schemes);
            const auto summary = run_monte_carlo(config, schemes, threads);
            fs::create_directories(exp_out);
            io::write_summary_csv((fs::path(exp_out) / "summary.csv").string(), summary);
            std::cout << "scheme,cr_mean,cr_sd,accuracy_mean,accuracy_sd\n";
            for (const auto& s : summary.per_scheme)
                std::cout << scheme_name(s.scheme) << "," << s.cr_mean << "," << s.cr_sd << ","
                          << s.accuracy_mean << "," << s.accuracy_sd << "\n";
            return kExitOk;
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRunSpec;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRunSpec;
    }
    return kExitOk;
}
