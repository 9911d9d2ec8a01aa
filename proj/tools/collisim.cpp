// collisim: random-collision qudit relaxation experiments.
//
// Subcommands:
//   purity  - ensemble-mean purity decay vs the analytic recursion
//   hist    - per-step purity histograms vs the Haar-random reference
//   table1  - predicted vs simulated steady-state purity spread
//   tangles - chain-mode pairwise/multipartite tangle dynamics with fits
//
// All randomness derives from --seed via per-trajectory streams, so outputs
// are byte-identical across runs and thread counts (COLLISIM_THREADS).

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "collisim/collision.hpp"
#include "collisim/stats.hpp"
#include "collisim/theory.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace collisim;

namespace {

constexpr const char* kVersion = "collisim 0.1.0";

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

class ManifestWriter {
  public:
    ManifestWriter(int argc, char** argv, const fs::path& out_dir) : out_dir_(out_dir) {
        fs::create_directories(out_dir);
        for (int i = 0; i < argc; ++i) {
            if (i) command_ += ' ';
            command_ += argv[i];
        }
        start_ = std::chrono::steady_clock::now();
    }

    std::ofstream open(const std::string& name) {
        outputs_.push_back(name);
        return std::ofstream(out_dir_ / name);
    }

    void finalize(std::uint64_t seed, const json& params) {
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        json manifest{{"command", command_},
                      {"seed", seed},
                      {"parameters", params},
                      {"version", kVersion},
                      {"wall_time_s", wall},
                      {"outputs", outputs_}};
        std::ofstream f(out_dir_ / "manifest.json");
        f << manifest.dump(2) << "\n";
    }

  private:
    fs::path out_dir_;
    std::string command_;
    std::vector<std::string> outputs_;
    std::chrono::steady_clock::time_point start_;
};

Matrix make_eta(int nu, double eta_purity) {
    if (eta_purity < 1.0) return qubit_eta_with_purity(eta_purity);  // nu==2 validated upstream
    Matrix eta = Matrix::Zero(nu, nu);
    eta(0, 0) = 1.0;
    return eta;
}

void write_histogram_csv(std::ofstream f, const Histogram& h) {
    f << "bin_lo,bin_hi,count\n";
    const double width = (h.hi - h.lo) / static_cast<double>(h.counts.size());
    for (std::size_t b = 0; b < h.counts.size(); ++b)
        f << fmt(h.lo + b * width) << "," << fmt(h.lo + (b + 1) * width) << "," << h.counts[b]
          << "\n";
}

struct CommonOpts {
    int mu = 2;
    int nu = 2;
    int steps = 10;
    int trajectories = 10000;
    std::uint64_t seed = 0;
    double eta_purity = 1.0;
    std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_dims = true) {
    if (with_dims) {
        cmd->add_option("--mu", o.mu, "System qudit dimension")->check(CLI::Range(2, 16));
        cmd->add_option("--nu", o.nu, "Environment qudit dimension")->check(CLI::Range(2, 16));
    }
    cmd->add_option("--steps", o.steps, "Number of collisions")->check(CLI::NonNegativeNumber);
    cmd->add_option("--trajectories", o.trajectories, "Ensemble size")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "RNG seed");
    cmd->add_option("--out", o.out_dir, "Output directory");
}

void validate_eta(const CommonOpts& o) {
    if (o.eta_purity < 1.0 / o.nu || o.eta_purity > 1.0)
        throw CLI::ValidationError("--eta-purity must lie in [1/nu, 1]");
    if (o.eta_purity < 1.0 && o.nu != 2)
        throw CLI::ValidationError("--eta-purity below 1 requires --nu 2");
}

int run_purity(int argc, char** argv, const CommonOpts& o) {
    validate_eta(o);
    ManifestWriter manifest(argc, argv, o.out_dir);
    const Matrix eta = make_eta(o.nu, o.eta_purity);
    const EnsembleSeries series =
        run_purity_ensemble(o.mu, o.nu, o.steps, o.trajectories, o.seed, eta);
    const std::vector<double> analytic =
        refreshed_series(o.mu, o.nu, o.eta_purity, 1.0, o.steps);

    auto f = manifest.open("purity_series.csv");
    f << "t,mc_mean,mc_std,analytic\n";
    for (int t = 0; t <= o.steps; ++t)
        f << t << "," << fmt(series.mean[t]) << "," << fmt(series.stddev[t]) << ","
          << fmt(analytic[t]) << "\n";

    manifest.finalize(o.seed, {{"mu", o.mu},
                               {"nu", o.nu},
                               {"steps", o.steps},
                               {"trajectories", o.trajectories},
                               {"eta_purity", o.eta_purity}});
    return 0;
}

int run_hist(int argc, char** argv, const CommonOpts& o) {
    validate_eta(o);
    ManifestWriter manifest(argc, argv, o.out_dir);
    const Matrix eta = make_eta(o.nu, o.eta_purity);
    const EnsembleSeries series =
        run_purity_ensemble(o.mu, o.nu, o.steps, o.trajectories, o.seed, eta);
    const SampleStats ref =
        sample_lubkin_reference(o.mu, o.mu * o.nu, o.trajectories, o.seed);

    json summary{{"reference", {{"mean", ref.mean}, {"std", ref.stddev}}}, {"steps", json::array()}};
    for (int t = 0; t <= o.steps; ++t) {
        write_histogram_csv(manifest.open("hist_t" + std::to_string(t) + ".csv"),
                            series.histograms[t]);
        summary["steps"].push_back({{"t", t}, {"mean", series.mean[t]}, {"std", series.stddev[t]}});
    }
    write_histogram_csv(manifest.open("reference.csv"), ref.histogram);
    {
        auto f = manifest.open("summary.json");
        f << summary.dump(2) << "\n";
    }
    manifest.finalize(o.seed, {{"mu", o.mu},
                               {"nu", o.nu},
                               {"steps", o.steps},
                               {"trajectories", o.trajectories},
                               {"eta_purity", o.eta_purity}});
    return 0;
}

int run_table1(int argc, char** argv, const CommonOpts& o, bool single_row) {
    ManifestWriter manifest(argc, argv, o.out_dir);
    std::optional<std::pair<int, int>> only;
    if (single_row) only = {o.mu, o.nu};
    const std::vector<Table1Row> rows = table1_comparison(o.seed, o.trajectories, only);

    auto f = manifest.open("table1.csv");
    f << "mu,nu,predicted_std,simulated_std,abs_diff\n";
    for (const Table1Row& r : rows)
        f << r.mu << "," << r.nu << "," << fmt(r.predicted_std) << "," << fmt(r.simulated_std)
          << "," << fmt(std::abs(r.predicted_std - r.simulated_std)) << "\n";

    manifest.finalize(o.seed, {{"trajectories", o.trajectories}, {"single_row", single_row}});
    return 0;
}

int run_tangles(int argc, char** argv, const CommonOpts& o) {
    ManifestWriter manifest(argc, argv, o.out_dir);
    const TangleEnsemble ens = run_tangle_ensemble(o.steps, o.trajectories, o.seed);

    auto f = manifest.open("tangles.csv");
    f << "t";
    for (int j = 1; j <= o.steps; ++j) f << ",tau_0_" << j;
    f << ",tau_chain,tau_multi\n";
    for (int t = 1; t <= o.steps; ++t) {
        f << t;
        for (int j = 1; j <= o.steps; ++j)
            f << "," << fmt(j <= t ? ens.pairwise_mean[t - 1][j - 1] : 0.0);
        f << "," << fmt(ens.chain_mean[t - 1]) << "," << fmt(ens.multi_mean[t - 1]) << "\n";
    }

    std::vector<double> ts(o.steps);
    for (int t = 1; t <= o.steps; ++t) ts[t - 1] = t;
    auto jf = [](const FitResult& r) {
        return json{{"amplitude", r.amplitude},
                    {"rate", r.rate},
                    {"offset", r.offset},
                    {"rms_residual", r.rms_residual}};
    };
    json fits = json::object();
    if (o.steps >= 4) fits["fresh_pair_tangle"] = jf(fit_exponential(ts, ens.fresh_pair_mean));
    // tau_M(1) is identically zero (bipartite pure state), so the asymptotic
    // fit starts at t = 2.
    if (o.steps >= 5)
        fits["multipartite_tangle"] =
            jf(fit_exponential(std::span(ts).subspan(1), std::span(ens.multi_mean).subspan(1)));
    {
        auto ff = manifest.open("fits.json");
        ff << fits.dump(2) << "\n";
    }
    manifest.finalize(o.seed, {{"steps", o.steps}, {"trajectories", o.trajectories}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random-collision qudit relaxation simulator"};
    app.require_subcommand(1);

    CommonOpts purity_opts, hist_opts, table_opts, tangle_opts;

    CLI::App* purity = app.add_subcommand("purity", "Ensemble purity decay (CSV + analytic curve)");
    add_common(purity, purity_opts);
    purity->add_option("--eta-purity", purity_opts.eta_purity, "Ancilla purity (qubits only)");

    CLI::App* hist = app.add_subcommand("hist", "Per-step purity histograms and Haar reference");
    add_common(hist, hist_opts);
    hist->add_option("--eta-purity", hist_opts.eta_purity, "Ancilla purity (qubits only)");

    CLI::App* table1 = app.add_subcommand("table1", "Steady-state purity spread comparison");
    bool single_row = false;
    table1->add_option("--mu", table_opts.mu, "Single-row system dimension")->check(CLI::Range(2, 16));
    table1->add_option("--nu", table_opts.nu, "Single-row environment dimension")
        ->check(CLI::Range(2, 16));
    table1->add_option("--trajectories", table_opts.trajectories, "Ensemble size")
        ->check(CLI::PositiveNumber);
    table1->add_option("--seed", table_opts.seed, "RNG seed");
    table1->add_option("--out", table_opts.out_dir, "Output directory");
    table1->add_flag("--single-row", single_row, "Run only the given (mu, nu) pair");

    CLI::App* tangles = app.add_subcommand("tangles", "Chain-mode tangle dynamics and fits");
    add_common(tangles, tangle_opts, /*with_dims=*/false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (purity->parsed()) return run_purity(argc, argv, purity_opts);
        if (hist->parsed()) return run_hist(argc, argv, hist_opts);
        if (table1->parsed()) return run_table1(argc, argv, table_opts, single_row);
        if (tangles->parsed()) return run_tangles(argc, argv, tangle_opts);
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
    return 0;
}
