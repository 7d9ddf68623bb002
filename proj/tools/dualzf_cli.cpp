#include <cstdio>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "dualzf/checks.hpp"
#include "dualzf/sim.hpp"

using namespace dualzf;

namespace {

struct BerArgs {
    std::string scheme = "downlink-ic";
    std::size_t n_tx = 2;
    std::string constellation;
    std::optional<unsigned> rate;
    std::string snr_db = "0:2:24";
    std::uint64_t min_errors = 200;
    std::uint64_t max_trials = 10'000'000;
    std::uint64_t seed = 42;
    unsigned workers = 1;
    std::string ic_precoder = "projection";
    std::string estimator = "count";
    std::string out;
    bool quiet = false;
};

SimConfig to_config(const BerArgs& a) {
    SimConfig cfg;
    cfg.scheme.scheme = parse_scheme(a.scheme);
    cfg.scheme.n_tx = a.n_tx;
    cfg.scheme.ic_kind = parse_precoder_kind(a.ic_precoder);
    if (a.rate && !a.constellation.empty())
        throw ConfigError("constellation", "give either --constellation or --rate, not both");
    if (a.rate)
        cfg.scheme.modulation = constellation_for_rate(cfg.scheme.scheme, *a.rate);
    else
        cfg.scheme.modulation = parse_modulation(a.constellation.empty() ? "bpsk" : a.constellation);
    cfg.snr_db = parse_snr_grid(a.snr_db);
    cfg.min_bit_errors = a.min_errors;
    cfg.max_trials = a.max_trials;
    cfg.master_seed = a.seed;
    cfg.workers = a.workers;
    cfg.estimator = parse_estimator(a.estimator);
    return cfg;
}

int run_ber_command(const BerArgs& a) {
    const SimConfig cfg = to_config(a);
    const BerCurve curve = run_ber(cfg, [&](const BerPoint& p) {
        if (a.quiet) return;
        std::fprintf(stderr, "%6.2f dB  ber %.3e  errors %llu  bits %llu%s\n", p.snr_db, p.ber,
                     static_cast<unsigned long long>(p.bit_errors), static_cast<unsigned long long>(p.bits),
                     p.truncated ? "  (truncated)" : "");
    });
    if (a.out.empty() || a.out == "-")
        write_csv(curve, std::cout);
    else
        write_csv(curve, std::filesystem::path(a.out));
    return 0;
}

// CLI11 only reads config files at the top level. Flat keys in the file are
// routed to the `ber` options.
class BerConfig : public CLI::ConfigINI {
public:
    std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
        auto items = CLI::ConfigINI::from_config(in);
        for (auto& item : items)
            if (item.parents.empty()) item.parents.emplace_back("ber");
        return items;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Link-level BER simulation of Alamouti-based broadcast schemes"};
    app.require_subcommand(1);

    BerArgs ber;
    auto* ber_cmd = app.add_subcommand("ber", "simulate a BER curve and write CSV");
    app.set_config("--config", "", "key=value file of ber options; command-line flags take precedence");
    app.config_formatter(std::make_shared<BerConfig>());
    ber_cmd->fallthrough();
    ber_cmd->add_option("--scheme", ber.scheme,
                        "alamouti, dual-alamouti, svd, uplink-ic, downlink-ic, downlink-ic-pa, bd, tdma-da");
    ber_cmd->add_option("--n-tx", ber.n_tx, "antennas on the multi-antenna side");
    ber_cmd->add_option("--constellation", ber.constellation, "bpsk, qpsk, 8psk, 16qam");
    ber_cmd->add_option("--rate", ber.rate, "bits per channel use per user; picks the constellation");
    ber_cmd->add_option("--snr-db", ber.snr_db, "start:step:stop in dB");
    ber_cmd->add_option("--min-errors", ber.min_errors, "bit errors to collect per point");
    ber_cmd->add_option("--max-trials", ber.max_trials, "trial cap per point");
    ber_cmd->add_option("--seed", ber.seed, "master seed");
    ber_cmd->add_option("--workers", ber.workers, "worker threads");
    ber_cmd->add_option("--ic-precoder", ber.ic_precoder, "matched or projection");
    ber_cmd->add_option("--estimator", ber.estimator, "count or conditional");
    ber_cmd->add_option("--out", ber.out, "output CSV path, '-' for stdout");
    ber_cmd->add_flag("--quiet", ber.quiet, "no per-point progress on stderr");

    std::string div_in;
    std::string div_window = "1e-5:1e-3";
    std::uint64_t div_min_errors = 100;
    auto* div_cmd = app.add_subcommand("diversity", "fit the diversity slope of a BER curve");
    div_cmd->add_option("--in", div_in, "CSV produced by 'ber'")->required();
    div_cmd->add_option("--ber-window", div_window, "low:high BER range of the fit");
    div_cmd->add_option("--min-errors", div_min_errors, "minimum bit errors for a point to qualify");

    std::size_t dc_trials = 1000;
    std::size_t dc_n = 2;
    std::uint64_t dc_seed = 7;
    auto* dc_cmd = app.add_subcommand("duality-check", "run the SNR duality and zero-forcing property suites");
    dc_cmd->add_option("--trials", dc_trials, "random channels per suite");
    dc_cmd->add_option("--n", dc_n, "antenna count");
    dc_cmd->add_option("--seed", dc_seed, "master seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ber_cmd) return run_ber_command(ber);
        if (*div_cmd) {
            const BerCurve curve = read_csv(std::filesystem::path(div_in));
            const DiversityEstimate d = estimate_diversity(curve, parse_ber_window(div_window), div_min_errors);
            std::cout << "slope " << d.slope << "\nr_squared " << d.r_squared << "\npoints " << d.points_used
                      << "\nwindow " << d.fit_window.low << ':' << d.fit_window.high << '\n';
            return 0;
        }
        if (*dc_cmd) {
            bool ok = true;
            for (const CheckResult& r : run_duality_suite(dc_trials, dc_n, dc_seed)) {
                std::cout << (r.pass ? "PASS  " : "FAIL  ") << r.name << "  worst " << r.worst << "  limit "
                          << r.limit << '\n';
                ok &= r.pass;
            }
            return ok ? 0 : 1;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
