#include "hyperq/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "hyperq/errors.hpp"
#include "hyperq/version.hpp"

namespace hyperq {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool wants(const std::set<Observable>& s, Observable o) { return s.count(o) != 0; }

std::string sanitize(std::string text) {
    for (auto& c : text)
        if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
    return text;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw IoError("failed writing " + path.string());
}

void prepare_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

void probe_writable(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw IoError("cannot write " + path.string());
}

std::string params_comment(const ModelParams& p) {
    std::ostringstream os;
    os << "params: delta_a=" << format_number(p.delta_a) << " delta_c=" << format_number(p.delta_c)
       << " g1=" << format_number(p.g1) << " g2=" << format_number(p.g2) << " eta=" << format_number(p.eta)
       << " kappa=" << format_number(p.kappa) << " gamma=" << format_number(p.gamma) << " n_max=" << p.n_max;
    return os.str();
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* to_string(Observable o) {
    switch (o) {
        case Observable::R: return "R";
        case Observable::Smin: return "Smin";
        case Observable::ThetaS: return "thetaS";
        case Observable::Nbar: return "nbar";
        case Observable::Kn: return "Kn";
    }
    return "?";
}

Observable parse_observable(const std::string& name) {
    for (auto o : {Observable::R, Observable::Smin, Observable::ThetaS, Observable::Nbar, Observable::Kn})
        if (name == to_string(o)) return o;
    throw InvalidArgument("unknown observable '" + name + "' (expected R, Smin, thetaS, nbar, Kn)");
}

const char* to_string(Phase p) { return p == Phase::Out ? "out" : "in"; }

Phase parse_phase(const std::string& name) {
    if (name == "out") return Phase::Out;
    if (name == "in") return Phase::In;
    throw InvalidArgument("unknown phase '" + name + "' (expected out or in)");
}

std::vector<double> Range::values() const {
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i)
        v[i] = count == 1 ? min : min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
    return v;
}

Range Range::parse(const std::string& text) {
    Range r;
    char tail = 0;
    double count = 0;
    if (std::sscanf(text.c_str(), "%lf,%lf,%lf%c", &r.min, &r.max, &count, &tail) != 3 || count < 1 ||
        count != std::floor(count))
        throw InvalidArgument("range must be 'min,max,count', got '" + text + "'");
    r.count = static_cast<std::size_t>(count);
    return r;
}

ModelParams make_params(double g, double kappa, double delta, double eta, Phase phase,
                        std::optional<std::size_t> n_max) {
    const std::size_t n = n_max.value_or(default_n_max(eta));
    return phase == Phase::Out ? ModelParams::out_phase(g, kappa, delta, eta, n)
                               : ModelParams::in_phase(g, kappa, delta, eta, n);
}

// ---------------------------------------------------------------------------

void SweepConfig::validate() const {
    for (const Range* r : {&delta, &eta}) {
        if (r->count < 1) throw InvalidArgument("SweepConfig: range count must be >= 1");
        if (!std::isfinite(r->min) || !std::isfinite(r->max)) throw InvalidArgument("SweepConfig: non-finite range");
    }
    if (observables.empty()) throw InvalidArgument("SweepConfig: no observables requested");
    if (workers < 1) throw InvalidArgument("SweepConfig: workers must be >= 1");
    make_params(g, kappa, 0.0, 0.0, phase, n_max).validate();
}

SweepConfig SweepConfig::from_json(const nlohmann::json& j, SweepConfig base) {
    try {
        auto range = [](const nlohmann::json& r, Range current) {
            current.min = r.value("min", current.min);
            current.max = r.value("max", current.max);
            current.count = r.value("count", current.count);
            return current;
        };
        if (j.contains("delta")) base.delta = range(j.at("delta"), base.delta);
        if (j.contains("eta")) base.eta = range(j.at("eta"), base.eta);
        base.g = j.value("g", base.g);
        base.kappa = j.value("kappa", base.kappa);
        if (j.contains("nmax")) {
            if (j.at("nmax").is_null())
                base.n_max.reset();
            else
                base.n_max = j.at("nmax").get<std::size_t>();
        }
        if (j.contains("phase")) base.phase = parse_phase(j.at("phase").get<std::string>());
        if (j.contains("observables")) {
            base.observables.clear();
            for (const auto& o : j.at("observables")) base.observables.insert(parse_observable(o.get<std::string>()));
        }
        if (j.contains("output")) base.output = j.at("output").get<std::string>();
        base.workers = j.value("workers", base.workers);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("sweep config: ") + e.what());
    }
    return base;
}

SweepConfig SweepConfig::from_json(const nlohmann::json& j) { return from_json(j, SweepConfig{}); }

nlohmann::json SweepConfig::to_json() const {
    nlohmann::json j;
    j["delta"] = {{"min", delta.min}, {"max", delta.max}, {"count", delta.count}};
    j["eta"] = {{"min", eta.min}, {"max", eta.max}, {"count", eta.count}};
    j["g"] = g;
    j["kappa"] = kappa;
    j["nmax"] = n_max ? nlohmann::json(*n_max) : nlohmann::json(nullptr);
    j["phase"] = to_string(phase);
    auto obs = nlohmann::json::array();
    for (auto o : observables) obs.push_back(to_string(o));
    j["observables"] = obs;
    j["output"] = output.string();
    j["workers"] = workers;
    return j;
}

// ---------------------------------------------------------------------------

ObservablesRecord run_point(const ModelParams& p, const PointOptions& options) {
    p.validate();
    const auto& obs = options.observables;
    const auto report = steady_state(build_liouvillian(build_two_qubit_model(p)), options.method);

    ObservablesRecord rec;
    rec.params = p;
    rec.residual = report.residual;
    rec.tail_population = report.tail_population;
    rec.truncation_flag = report.truncation_suspect;
    rec.stats = report.stats;
    rec.photons = photon_distribution(report.rho);
    rec.nbar_two_qubit = rec.photons.mean();

    if (wants(obs, Observable::R)) {
        double single[2];
        for (int which = 1; which <= 2; ++which) {
            const auto r1 = steady_state(build_liouvillian(build_single_qubit_model(p, which)), options.method);
            single[which - 1] = photon_distribution(r1.rho).mean();
            rec.residual = std::max(rec.residual, r1.residual);
        }
        rec.nbar_single_1 = single[0];
        rec.nbar_single_2 = single[1];
        check_single_qubit_symmetry(p, single[0], single[1]);
        try {
            rec.radiance = radiance_witness_from(rec.nbar_two_qubit, single[0], single[1]);
        } catch (const UndefinedWitness& e) {
            rec.radiance_error = e.what();
        }
    }
    if (wants(obs, Observable::Smin) || wants(obs, Observable::ThetaS)) rec.squeezing = min_squeezing(report.rho);
    if (wants(obs, Observable::Kn)) rec.klyshko = klyshko(rec.photons);
    if (options.wigner) rec.wigner = wigner(cavity_state(report.rho), *options.wigner);
    return rec;
}

// ---------------------------------------------------------------------------

std::string sweep_csv_header(const std::set<Observable>& observables) {
    std::string h =
        "delta_per_gamma,eta_per_gamma,nbar_2q,nbar_1q_1,nbar_1q_2,R,s_min,theta_s_rad,residual,tail_population,"
        "truncation_flag,error";
    if (wants(observables, Observable::Kn))
        for (std::size_t n = 1; n <= kSweepKlyshkoColumns; ++n) h += ",K_" + std::to_string(n);
    return h;
}

std::string sweep_csv(const std::vector<SweepResultRow>& rows, const std::set<Observable>& observables) {
    std::string out = sweep_csv_header(observables) + "\n";
    const bool with_k = wants(observables, Observable::Kn);
    for (const auto& r : rows) {
        out += format_number(r.delta) + ',' + format_number(r.eta) + ',' + format_number(r.nbar_2q) + ',' +
               format_number(r.nbar_1q_1) + ',' + format_number(r.nbar_1q_2) + ',' + format_number(r.r) + ',' +
               format_number(r.s_min) + ',' + format_number(r.theta_s) + ',' + format_number(r.residual) + ',' +
               format_number(r.tail_population) + ',' + (r.truncation_flag ? "1" : "0") + ',' + sanitize(r.error);
        if (with_k)
            for (std::size_t n = 0; n < kSweepKlyshkoColumns; ++n)
                out += ',' + format_number(n < r.k.size() ? r.k[n] : kNaN);
        out += '\n';
    }
    return out;
}

namespace {

SweepResultRow compute_row(const SweepConfig& cfg, double delta, double eta) {
    SweepResultRow row;
    row.delta = delta;
    row.eta = eta;
    row.nbar_2q = row.nbar_1q_1 = row.nbar_1q_2 = row.r = row.s_min = row.theta_s = kNaN;
    row.residual = row.tail_population = kNaN;
    const bool with_k = wants(cfg.observables, Observable::Kn);
    if (with_k) row.k.assign(kSweepKlyshkoColumns, kNaN);

    PointOptions opts;
    opts.observables = cfg.observables;
    try {
        const auto rec = run_point(make_params(cfg.g, cfg.kappa, delta, eta, cfg.phase, cfg.n_max), opts);
        row.nbar_2q = rec.nbar_two_qubit;
        row.residual = rec.residual;
        row.tail_population = rec.tail_population;
        row.truncation_flag = rec.truncation_flag;
        if (rec.nbar_single_1) row.nbar_1q_1 = *rec.nbar_single_1;
        if (rec.nbar_single_2) row.nbar_1q_2 = *rec.nbar_single_2;
        if (rec.radiance) row.r = *rec.radiance;
        if (!rec.radiance_error.empty()) row.error = "undefined-witness: " + rec.radiance_error;
        if (rec.squeezing) {
            if (wants(cfg.observables, Observable::Smin)) row.s_min = rec.squeezing->s_min;
            if (wants(cfg.observables, Observable::ThetaS)) row.theta_s = rec.squeezing->theta_s;
        }
        if (rec.klyshko)
            for (const auto& e : rec.klyshko->k)
                if (e.n >= 1 && e.n <= kSweepKlyshkoColumns && e.value) row.k[e.n - 1] = *e.value;
        if (row.residual > kResidualTol) row.error = "residual above tolerance";
    } catch (const DegenerateSteadyState& e) {
        row.error = std::string("degenerate-steady-state: ") + e.what();
    } catch (const ConvergenceFailure& e) {
        row.error = std::string("convergence-failure: ") + e.what();
    } catch (const std::exception& e) {
        row.error = std::string("error: ") + e.what();
    }
    return row;
}

}  // namespace

std::vector<SweepResultRow> compute_sweep(const SweepConfig& cfg) {
    cfg.validate();
    const auto deltas = cfg.delta.values();
    const auto etas = cfg.eta.values();
    const std::size_t total = deltas.size() * etas.size();
    std::vector<SweepResultRow> rows(total);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < total; i = next++)
            rows[i] = compute_row(cfg, deltas[i / etas.size()], etas[i % etas.size()]);
    };
    const std::size_t n_threads = std::min(cfg.workers, total);
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

std::vector<std::string> mirror_symmetry_warnings(const std::vector<SweepResultRow>& rows, double tol) {
    std::vector<std::string> warnings;
    std::map<std::pair<double, double>, const SweepResultRow*> index;
    for (const auto& r : rows) index[{r.delta, r.eta}] = &r;
    auto differs = [tol](double a, double b) { return !std::isnan(a) && !std::isnan(b) && std::abs(a - b) > tol; };
    for (const auto& r : rows) {
        if (!(r.delta > 0.0)) continue;
        auto it = index.find({-r.delta, r.eta});
        if (it == index.end()) continue;
        const auto& m = *it->second;
        if (differs(r.s_min, m.s_min) || differs(r.r, m.r))
            warnings.push_back("mirror symmetry violated at delta=+-" + format_number(r.delta) +
                               " eta=" + format_number(r.eta));
    }
    return warnings;
}

SweepOutput run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    SweepOutput out;
    out.csv_path = cfg.output / "sweep.csv";
    out.meta_path = cfg.output / "meta.json";
    prepare_directory(cfg.output);
    probe_writable(out.csv_path);
    probe_writable(out.meta_path);

    const auto t0 = std::chrono::steady_clock::now();
    out.rows = compute_sweep(cfg);
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.warnings = mirror_symmetry_warnings(out.rows);

    write_file(out.csv_path, sweep_csv(out.rows, cfg.observables));

    std::size_t failures = 0, suspect = 0;
    for (const auto& r : out.rows) {
        if (!r.error.empty()) ++failures;
        if (r.truncation_flag) ++suspect;
    }
    nlohmann::json meta;
    meta["config"] = cfg.to_json();
    meta["library"] = {{"name", "hyperq"}, {"version", kVersion}};
    meta["dissipator_convention"] = kDissipatorConvention;
    meta["units"] = "all rates and frequencies in units of gamma; theta_s in radians";
    meta["row_order"] = "row-major over (delta, eta), delta slow";
    meta["csv_header"] = sweep_csv_header(cfg.observables);
    meta["rows"] = out.rows.size();
    meta["rows_with_error_marker"] = failures;
    meta["rows_truncation_suspect"] = suspect;
    meta["warnings"] = out.warnings;
    meta["timings"] = {{"total_seconds", out.seconds}, {"workers", cfg.workers}};
    write_file(out.meta_path, meta.dump(2) + "\n");
    return out;
}

// ---------------------------------------------------------------------------

std::string wigner_csv(const WignerGrid& w, const std::vector<std::string>& comments) {
    std::string out = "# hyperq wigner\n";
    out += std::string("# convention: ") + WignerGrid::kConvention + "\n";
    out += "# layout: first row holds x samples, each following row is y followed by W(x, y)\n";
    if (w.grid_too_small) out += "# warning: grid-too-small (boundary |W| above 1e-3 of peak)\n";
    for (const auto& c : comments) out += "# " + c + "\n";
    out += "y\\x";
    for (double x : w.x_axis) out += ',' + format_number(x);
    out += '\n';
    for (Eigen::Index iy = 0; iy < w.w.rows(); ++iy) {
        out += format_number(w.y_axis[static_cast<std::size_t>(iy)]);
        for (Eigen::Index ix = 0; ix < w.w.cols(); ++ix) out += ',' + format_number(w.w(iy, ix));
        out += '\n';
    }
    return out;
}

fs::path export_wigner(const ModelParams& p, const WignerGridSpec& grid, const fs::path& dir, const std::string& tag) {
    prepare_directory(dir);
    const fs::path path = dir / ("wigner_" + tag + ".csv");
    probe_writable(path);
    PointOptions opts;
    opts.observables = {Observable::Smin, Observable::ThetaS};
    opts.wigner = grid;
    const auto rec = run_point(p, opts);
    std::vector<std::string> comments{params_comment(p),
                                      "s_min=" + format_number(rec.squeezing->s_min) +
                                          " theta_s=" + format_number(rec.squeezing->theta_s),
                                      "integral=" + format_number(rec.wigner->integral())};
    if (rec.truncation_flag) comments.push_back("warning: truncation-suspect steady state");
    write_file(path, wigner_csv(*rec.wigner, comments));
    return path;
}

std::string klyshko_csv(const PhotonDistribution& pd, const KlyshkoResult& k, const std::vector<std::string>& comments) {
    std::string out = "# hyperq klyshko\n";
    for (const auto& c : comments) out += "# " + c + "\n";
    out += "n,P_n,K_n,defined\n";
    for (const auto& e : k.k) {
        out += std::to_string(e.n) + ',' + format_number(pd.p[e.n]) + ',' +
               format_number(e.value ? *e.value : kNaN) + ',' + (e.value ? "1" : "0") + '\n';
    }
    return out;
}

fs::path export_klyshko(const ModelParams& p, const fs::path& dir, const std::string& tag) {
    prepare_directory(dir);
    const fs::path path = dir / ("klyshko_" + tag + ".csv");
    probe_writable(path);
    PointOptions opts;
    opts.observables = {Observable::Kn};
    const auto rec = run_point(p, opts);
    std::vector<std::string> comments{params_comment(p), "P_0=" + format_number(rec.photons.p[0])};
    if (rec.truncation_flag) comments.push_back("warning: truncation-suspect steady state");
    write_file(path, klyshko_csv(rec.photons, *rec.klyshko, comments));
    return path;
}

}  // namespace hyperq
