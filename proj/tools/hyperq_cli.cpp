// Command-line front end: point, sweep, wigner, klyshko, dressed.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "hyperq/dressed.hpp"
#include "hyperq/errors.hpp"
#include "hyperq/sweep.hpp"
#include "hyperq/version.hpp"

namespace {

using hyperq::format_number;

enum ExitCode { kOk = 0, kFailure = 1, kConfigError = 2, kIoError = 3 };

struct ModelFlags {
    double delta = 0.0;
    double eta = 0.5;
    double g = 10.0;
    double kappa = 0.5;
    std::size_t nmax = 0;  // 0 = pick from eta
    std::string phase = "out";
    std::string config;

    CLI::Option* delta_opt = nullptr;
    CLI::Option* eta_opt = nullptr;
    CLI::Option* g_opt = nullptr;
    CLI::Option* kappa_opt = nullptr;
    CLI::Option* nmax_opt = nullptr;
    CLI::Option* phase_opt = nullptr;

    void attach(CLI::App* app) {
        delta_opt = app->add_option("--delta", delta, "detuning Delta_a = Delta_c, units of gamma");
        eta_opt = app->add_option("--eta", eta, "pump Rabi frequency, units of gamma");
        g_opt = app->add_option("--g", g, "coupling magnitude, units of gamma");
        kappa_opt = app->add_option("--kappa", kappa, "cavity decay, units of gamma");
        nmax_opt = app->add_option("--nmax", nmax, "Fock truncation (default: 20 for eta<=1.5, 30 for eta<=3)");
        phase_opt = app->add_option("--phase", phase, "coupling phase: out (g1=-g2) or in (g1=g2)")
                        ->check(CLI::IsMember({"out", "in"}));
        app->add_option("--config", config, "JSON file with delta, eta, g, kappa, nmax, phase; flags win");
    }

    /// JSON values fill in anything not given on the command line.
    void apply_config() {
        if (config.empty()) return;
        std::ifstream in(config);
        if (!in) throw hyperq::IoError("cannot read config " + config);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw hyperq::InvalidArgument(std::string("config: ") + e.what());
        }
        auto take = [&](CLI::Option* opt, const char* key, auto& field) {
            if (opt->count() == 0 && j.contains(key) && !j.at(key).is_null())
                field = j.at(key).get<std::decay_t<decltype(field)>>();
        };
        take(delta_opt, "delta", delta);
        take(eta_opt, "eta", eta);
        take(g_opt, "g", g);
        take(kappa_opt, "kappa", kappa);
        take(nmax_opt, "nmax", nmax);
        take(phase_opt, "phase", phase);
    }

    hyperq::ModelParams params() const {
        return hyperq::make_params(g, kappa, delta, eta, hyperq::parse_phase(phase),
                                   nmax ? std::optional<std::size_t>(nmax) : std::nullopt);
    }
};

std::string default_tag(const hyperq::ModelParams& p) {
    return "d" + format_number(p.delta_a) + "_e" + format_number(p.eta);
}

int run_point_cmd(ModelFlags& flags, bool as_json) {
    flags.apply_config();
    const auto p = flags.params();
    const auto rec = hyperq::run_point(p);
    if (as_json) {
        nlohmann::json j;
        j["delta"] = p.delta_a;
        j["eta"] = p.eta;
        j["g1"] = p.g1;
        j["g2"] = p.g2;
        j["kappa"] = p.kappa;
        j["n_max"] = p.n_max;
        j["nbar_2q"] = rec.nbar_two_qubit;
        j["nbar_1q_1"] = rec.nbar_single_1.value_or(NAN);
        j["nbar_1q_2"] = rec.nbar_single_2.value_or(NAN);
        j["R"] = rec.radiance ? nlohmann::json(*rec.radiance) : nlohmann::json(nullptr);
        j["s_min"] = rec.squeezing->s_min;
        j["theta_s"] = rec.squeezing->theta_s;
        j["residual"] = rec.residual;
        j["tail_population"] = rec.tail_population;
        j["truncation_flag"] = rec.truncation_flag;
        j["P_n"] = rec.photons.p;
        auto k = nlohmann::json::array();
        for (const auto& e : rec.klyshko->k) k.push_back(e.value ? nlohmann::json(*e.value) : nlohmann::json(nullptr));
        j["K_n"] = k;
        std::cout << j.dump(2) << "\n";
        return kOk;
    }
    std::cout << "delta=" << format_number(p.delta_a) << " eta=" << format_number(p.eta)
              << " g1=" << format_number(p.g1) << " g2=" << format_number(p.g2)
              << " kappa=" << format_number(p.kappa) << " n_max=" << p.n_max << "\n";
    std::cout << "nbar_2q         " << format_number(rec.nbar_two_qubit) << "\n";
    if (rec.nbar_single_1) std::cout << "nbar_1q (1, 2)  " << format_number(*rec.nbar_single_1) << " "
                                     << format_number(*rec.nbar_single_2) << "\n";
    if (rec.radiance)
        std::cout << "R               " << format_number(*rec.radiance) << "\n";
    else
        std::cout << "R               undefined (" << rec.radiance_error << ")\n";
    std::cout << "s_min           " << format_number(rec.squeezing->s_min) << "\n";
    std::cout << "theta_s [rad]   " << format_number(rec.squeezing->theta_s) << "\n";
    std::cout << "residual        " << format_number(rec.residual) << "\n";
    std::cout << "tail_population " << format_number(rec.tail_population)
              << (rec.truncation_flag ? "  (truncation-suspect)" : "") << "\n";
    std::cout << "K_n:";
    for (const auto& e : rec.klyshko->k) {
        if (e.n > 8) break;
        std::cout << " K_" << e.n << "=" << (e.value ? format_number(*e.value) : std::string("undefined"));
    }
    std::cout << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steady-state toolkit for two driven qubits in a single-mode cavity"};
    app.set_version_flag("--version", hyperq::kVersion);
    app.require_subcommand(1);

    // point
    ModelFlags point_flags;
    bool point_json = false;
    auto* point = app.add_subcommand("point", "solve one parameter point and print its observables");
    point_flags.attach(point);
    point->add_flag("--json", point_json, "print JSON instead of text");

    // sweep
    std::string sweep_config, delta_range, eta_range, observables, out_dir;
    double sweep_g = 10.0, sweep_kappa = 0.5;
    std::size_t sweep_nmax = 0, workers = 1;
    std::string sweep_phase = "out";
    auto* sweep = app.add_subcommand("sweep", "map observables over a (delta, eta) grid");
    sweep->add_option("--config", sweep_config, "JSON sweep config; flags override it");
    auto* delta_opt = sweep->add_option("--delta", delta_range, "detuning range 'min,max,count'");
    auto* eta_opt = sweep->add_option("--eta", eta_range, "pump range 'min,max,count'");
    auto* g_opt = sweep->add_option("--g", sweep_g, "coupling magnitude");
    auto* kappa_opt = sweep->add_option("--kappa", sweep_kappa, "cavity decay");
    auto* nmax_opt = sweep->add_option("--nmax", sweep_nmax, "fixed Fock truncation (default: per point from eta)");
    auto* phase_opt = sweep->add_option("--phase", sweep_phase, "out or in")->check(CLI::IsMember({"out", "in"}));
    auto* obs_opt = sweep->add_option("--observables", observables, "comma list of R,Smin,thetaS,nbar,Kn");
    auto* out_opt = sweep->add_option("--out", out_dir, "output directory");
    auto* workers_opt = sweep->add_option("--workers", workers, "worker threads (env HYPERQ_WORKERS overrides config)");

    // wigner
    ModelFlags wigner_flags;
    double extent = 4.0;
    std::size_t points = 161;
    std::string wigner_out = ".", wigner_tag;
    auto* wig = app.add_subcommand("wigner", "export the cavity Wigner function on a square grid");
    wigner_flags.attach(wig);
    wig->add_option("--extent", extent, "grid covers [-extent, extent] in both quadratures");
    wig->add_option("--points", points, "samples per axis");
    wig->add_option("--out", wigner_out, "output directory");
    wig->add_option("--tag", wigner_tag, "file tag (wigner_<tag>.csv)");

    // klyshko
    ModelFlags klyshko_flags;
    std::string klyshko_out = ".", klyshko_tag;
    auto* kly = app.add_subcommand("klyshko", "export photon statistics and K_n");
    klyshko_flags.attach(kly);
    kly->add_option("--out", klyshko_out, "output directory");
    kly->add_option("--tag", klyshko_tag, "file tag (klyshko_<tag>.csv)");

    // dressed
    ModelFlags dressed_flags;
    std::size_t manifolds = 5;
    auto* dressed = app.add_subcommand("dressed", "print dressed-manifold spectra and pathway elements");
    dressed_flags.attach(dressed);
    dressed->add_option("--manifolds", manifolds, "highest excitation manifold to tabulate");

    CLI11_PARSE(app, argc, argv);

    try {
        if (point->parsed()) return run_point_cmd(point_flags, point_json);

        if (sweep->parsed()) {
            hyperq::SweepConfig cfg;
            if (!sweep_config.empty()) {
                std::ifstream in(sweep_config);
                if (!in) throw hyperq::IoError("cannot read config " + sweep_config);
                nlohmann::json j;
                try {
                    in >> j;
                } catch (const nlohmann::json::exception& e) {
                    throw hyperq::InvalidArgument(std::string("config: ") + e.what());
                }
                cfg = hyperq::SweepConfig::from_json(j);
            }
            if (const char* env = std::getenv("HYPERQ_WORKERS")) cfg.workers = std::stoul(env);
            if (delta_opt->count()) cfg.delta = hyperq::Range::parse(delta_range);
            if (eta_opt->count()) cfg.eta = hyperq::Range::parse(eta_range);
            if (g_opt->count()) cfg.g = sweep_g;
            if (kappa_opt->count()) cfg.kappa = sweep_kappa;
            if (nmax_opt->count()) cfg.n_max = sweep_nmax;
            if (phase_opt->count()) cfg.phase = hyperq::parse_phase(sweep_phase);
            if (obs_opt->count()) {
                cfg.observables.clear();
                std::stringstream ss(observables);
                for (std::string item; std::getline(ss, item, ',');)
                    if (!item.empty()) cfg.observables.insert(hyperq::parse_observable(item));
            }
            if (out_opt->count()) cfg.output = out_dir;
            if (workers_opt->count()) cfg.workers = workers;

            const auto result = hyperq::run_sweep(cfg);
            char secs[32];
            std::snprintf(secs, sizeof secs, "%.2f", result.seconds);
            std::cout << "wrote " << result.csv_path.string() << " (" << result.rows.size() << " rows, " << secs << " s)\n";
            std::cout << "wrote " << result.meta_path.string() << "\n";
            for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
            return kOk;
        }

        if (wig->parsed()) {
            wigner_flags.apply_config();
            const auto p = wigner_flags.params();
            hyperq::WignerGridSpec grid{-extent, extent, points, -extent, extent, points};
            const auto path =
                hyperq::export_wigner(p, grid, wigner_out, wigner_tag.empty() ? default_tag(p) : wigner_tag);
            std::cout << "wrote " << path.string() << "\n";
            return kOk;
        }

        if (kly->parsed()) {
            klyshko_flags.apply_config();
            const auto p = klyshko_flags.params();
            const auto path =
                hyperq::export_klyshko(p, klyshko_out, klyshko_tag.empty() ? default_tag(p) : klyshko_tag);
            std::cout << "wrote " << path.string() << "\n";
            return kOk;
        }

        if (dressed->parsed()) {
            dressed_flags.apply_config();
            auto p = dressed_flags.params();
            if (dressed_flags.nmax == 0) p.n_max = std::max<std::size_t>(manifolds + 2, 7);
            std::cout << hyperq::dressed_report(p, manifolds);
            return kOk;
        }
    } catch (const hyperq::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const hyperq::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kOk;
}
