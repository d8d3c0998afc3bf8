#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "hyperq/model.hpp"
#include "hyperq/observables.hpp"
#include "hyperq/steady_solver.hpp"

namespace hyperq {

enum class Observable { R, Smin, ThetaS, Nbar, Kn };
enum class Phase { Out, In };

const char* to_string(Observable o);
Observable parse_observable(const std::string& name);
const char* to_string(Phase p);
Phase parse_phase(const std::string& name);

/// Evenly spaced samples min..max inclusive; count = 1 gives {min}.
struct Range {
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 1;

    std::vector<double> values() const;
    /// "min,max,count"
    static Range parse(const std::string& text);
};

/// Equal detunings, the selected coupling phase, and n_max either fixed or
/// chosen from the pump strength by default_n_max().
ModelParams make_params(double g, double kappa, double delta, double eta, Phase phase,
                        std::optional<std::size_t> n_max);

struct SweepConfig {
    Range delta{-15.0, 15.0, 41};
    Range eta{0.0, 3.0, 31};
    double g = 10.0;
    double kappa = 0.5;
    std::optional<std::size_t> n_max;
    Phase phase = Phase::Out;
    std::set<Observable> observables{Observable::R, Observable::Smin, Observable::ThetaS, Observable::Nbar};
    std::filesystem::path output = "sweep_out";
    std::size_t workers = 1;

    /// Throws InvalidArgument on counts < 1, non-finite ranges or an empty observable set.
    void validate() const;

    /// Documented JSON schema (all keys optional):
    /// {"delta": {"min","max","count"}, "eta": {...}, "g", "kappa", "nmax",
    ///  "phase": "out"|"in", "observables": ["R","Smin","thetaS","nbar","Kn"],
    ///  "output": "<dir>", "workers": <int>}
    static SweepConfig from_json(const nlohmann::json& j, SweepConfig base);
    static SweepConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct PointOptions {
    std::set<Observable> observables{Observable::R, Observable::Smin, Observable::ThetaS, Observable::Nbar,
                                     Observable::Kn};
    std::optional<WignerGridSpec> wigner;
    SteadyMethod method = SteadyMethod::HermitianReal;
};

/// Everything computed at one parameter point.
struct ObservablesRecord {
    ModelParams params;
    double residual = 0.0;
    double tail_population = 0.0;
    bool truncation_flag = false;
    SolverStats stats;
    double nbar_two_qubit = 0.0;
    std::optional<double> nbar_single_1;
    std::optional<double> nbar_single_2;
    std::optional<double> radiance;
    std::string radiance_error;  ///< set when R was requested but is undefined
    std::optional<SqueezingResult> squeezing;
    PhotonDistribution photons;
    std::optional<KlyshkoResult> klyshko;
    std::optional<WignerGrid> wigner;
};

/// Steady state plus the requested observables. Solver errors propagate;
/// a truncation-suspect state only sets truncation_flag.
ObservablesRecord run_point(const ModelParams& p, const PointOptions& options = {});

inline constexpr std::size_t kSweepKlyshkoColumns = 5;

struct SweepResultRow {
    double delta = 0.0;
    double eta = 0.0;
    double nbar_2q = 0.0;
    double nbar_1q_1 = 0.0;
    double nbar_1q_2 = 0.0;
    double r = 0.0;
    double s_min = 0.0;
    double theta_s = 0.0;
    double residual = 0.0;
    double tail_population = 0.0;
    bool truncation_flag = false;
    std::string error;                     ///< empty, or "<kind>: <message>"
    std::vector<double> k;                 ///< K_1..K_5 when Kn is requested (NaN if undefined)
};

/// Header of sweep.csv for the given observable set.
std::string sweep_csv_header(const std::set<Observable>& observables);
/// Full sweep.csv content; numbers use 17 significant digits.
std::string sweep_csv(const std::vector<SweepResultRow>& rows, const std::set<Observable>& observables);

/// Row-major over (delta, eta): delta is the slow index. Independent of cfg.workers.
std::vector<SweepResultRow> compute_sweep(const SweepConfig& cfg);

/// Pairs (delta, -delta) on the grid whose s_min or R differ by more than tol.
std::vector<std::string> mirror_symmetry_warnings(const std::vector<SweepResultRow>& rows, double tol = 1e-8);

struct SweepOutput {
    std::filesystem::path csv_path;
    std::filesystem::path meta_path;
    std::vector<SweepResultRow> rows;
    std::vector<std::string> warnings;
    double seconds = 0.0;
};

/// Writes <output>/sweep.csv and <output>/meta.json. The output directory is
/// created and probed for writability before any solve (IoError otherwise).
SweepOutput run_sweep(const SweepConfig& cfg);

/// Writes <dir>/wigner_<tag>.csv: comment header (convention, params, squeezing,
/// warnings), then a "y\x" row of x samples and one row per y sample.
std::filesystem::path export_wigner(const ModelParams& p, const WignerGridSpec& grid,
                                    const std::filesystem::path& dir, const std::string& tag);
std::string wigner_csv(const WignerGrid& w, const std::vector<std::string>& comments);

/// Writes <dir>/klyshko_<tag>.csv with columns n,P_n,K_n,defined.
std::filesystem::path export_klyshko(const ModelParams& p, const std::filesystem::path& dir, const std::string& tag);
std::string klyshko_csv(const PhotonDistribution& pd, const KlyshkoResult& k, const std::vector<std::string>& comments);

/// "%.17g", with "nan" for NaN.
std::string format_number(double v);

}  // namespace hyperq
