#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mdsmod/harness.hpp"
#include "mdsmod/plot.hpp"
#include "mdsmod/selftest.hpp"

namespace {

struct SweepArgs {
    std::string config_path;
    std::string pipeline, scheme, mapping, fec, spc_method;
    int n = 0, q = 0, m1 = 0, workers = 0, frame_bits = 0;
    std::vector<double> snr_db;
    std::uint64_t seed = 0;
    long long min_errors = 0, max_frames = 0;
    std::string out;
};

int run_sweep_command(const CLI::App& cmd, const SweepArgs& args) {
    mdsmod::SimConfig cfg;
    std::string out = "sweep.csv";
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) {
            std::cerr << "error: cannot open config file '" << args.config_path << "'\n";
            return 1;
        }
        std::string first;
        std::getline(in, first);
        if (first.rfind("# ber sweep results", 0) == 0) {
            // a sweep CSV replays its own embedded config
            cfg = mdsmod::config_from_csv_header(args.config_path);
        } else {
            in.clear();
            in.seekg(0);
            std::string file_out;
            cfg = mdsmod::parse_config_kv(in, &file_out);
            if (!file_out.empty()) out = file_out;
        }
    }
    // explicit flags override the config file
    if (cmd.count("--pipeline")) cfg.pipeline = mdsmod::pipeline_from_name(args.pipeline);
    if (cmd.count("--scheme")) cfg.modem.scheme = mdsmod::scheme_from_name(args.scheme);
    if (cmd.count("--mapping")) cfg.modem.mode.mapping = mdsmod::mapping_from_name(args.mapping);
    if (cmd.count("--fec")) cfg.fec = mdsmod::fec_from_name(args.fec);
    if (cmd.count("--spc-method")) cfg.spc_method = mdsmod::spc_method_from_name(args.spc_method);
    if (cmd.count("--n")) cfg.modem.n = args.n;
    if (cmd.count("--q")) cfg.modem.q = args.q;
    if (cmd.count("--m1")) cfg.modem.m1 = args.m1;
    if (cmd.count("--snr-db")) cfg.snr_db = args.snr_db;
    if (cmd.count("--seed")) cfg.master_seed = args.seed;
    if (cmd.count("--workers")) cfg.workers = args.workers;
    if (cmd.count("--frame-bits")) cfg.frame_data_bits = args.frame_bits;
    if (cmd.count("--min-errors")) cfg.stop.min_bit_errors = args.min_errors;
    if (cmd.count("--max-frames")) cfg.stop.max_frames = args.max_frames;
    if (cmd.count("--out")) out = args.out;

    cfg = mdsmod::normalized(cfg);
    std::cout << "# snr_db is the symbol SNR with unit average symbol energy"
                 " (N0 = 10^(-snr_db/10)); ebn0_db subtracts 10*log10(eta*rate)\n";
    std::istringstream kv(mdsmod::config_kv(cfg));
    std::string line;
    while (std::getline(kv, line)) std::cout << "# " << line << "\n";
    const std::vector<mdsmod::BerRecord> records = mdsmod::run_sweep(cfg, &std::cout);
    mdsmod::write_csv_file(out, cfg, records);
    std::cout << records.size() << " rows written to " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Link-level BER simulator for MDS-coded modulation"};
    app.require_subcommand(1);

    SweepArgs args;
    CLI::App* sweep = app.add_subcommand("sweep", "Run a Monte Carlo BER sweep and write CSV");
    sweep->add_option("--config", args.config_path, "key=value config file; flags override it");
    sweep->add_option("--pipeline", args.pipeline,
                      "uncoded-ml | coded-hard | coded-lc-soft | coded-opt-soft |"
                      " coded-lc-soft-spc");
    sweep->add_option("--n", args.n, "elements per codeword");
    sweep->add_option("--q", args.q, "disjoint classes");
    sweep->add_option("--m1", args.m1, "points per class");
    sweep->add_option("--mapping", args.mapping, "gray | natural");
    sweep->add_option("--scheme", args.scheme, "iqm | psk");
    sweep->add_option("--fec", args.fec, "k7 | k3 | none");
    sweep->add_option("--spc-method", args.spc_method, "tanh | min-sum");
    sweep->add_option("--snr-db", args.snr_db, "symbol SNR points in dB")
        ->delimiter(',')
        ->expected(-1);
    sweep->add_option("--seed", args.seed, "master seed");
    sweep->add_option("--workers", args.workers, "worker threads (results do not depend on it)");
    sweep->add_option("--frame-bits", args.frame_bits, "data bits per FEC block");
    sweep->add_option("--min-errors", args.min_errors, "stop after this many bit errors");
    sweep->add_option("--max-frames", args.max_frames, "hard frame cap per point");
    sweep->add_option("--out", args.out, "output CSV path");

    std::vector<std::string> plot_in;
    std::string plot_out = "ber.svg";
    std::string plot_title = "BER vs SNR";
    CLI::App* plot = app.add_subcommand("plot", "Render sweep CSVs to an SVG");
    plot->add_option("--in", plot_in, "input CSV files")->required()->expected(-1);
    plot->add_option("--out", plot_out, "output SVG path");
    plot->add_option("--title", plot_title, "plot title");

    CLI::App* selftest = app.add_subcommand("selftest", "Run the built-in oracle checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) return run_sweep_command(*sweep, args);
        if (plot->parsed()) {
            const int curves = mdsmod::plot_ber_csv(plot_in, plot_out, {plot_title}, &std::cerr);
            std::cout << curves << " curves written to " << plot_out << "\n";
            return 0;
        }
        if (selftest->parsed()) return mdsmod::run_selftest(std::cout) ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
