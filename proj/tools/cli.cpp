#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "quattrack/scenario_io.hpp"
#include "verify.hpp"

namespace quattrack::cli {

namespace fs = std::filesystem;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_verify_failed = 1;
constexpr int exit_config_error = 2;
constexpr int exit_numerical_abort = 3;

std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError(path.string(), "cannot open for writing");
    return out;
}

void write_outputs(const fs::path& dir, const std::string& format, const Trace& trace,
                   const Metrics& metrics, std::ostream& out) {
    fs::create_directories(dir);
    const fs::path trace_path = dir / (format == "json" ? "trace.json" : "trace.csv");
    {
        auto f = open_output(trace_path);
        if (format == "json")
            write_trace_json(f, trace);
        else
            write_trace_csv(f, trace);
    }
    const fs::path metrics_path = dir / "metrics.json";
    {
        auto f = open_output(metrics_path);
        write_metrics_json(f, metrics);
    }
    out << "trace:   " << trace_path.string() << " (" << trace.records.size() << " records)\n"
        << "metrics: " << metrics_path.string() << " (final |e_q| = " << fmt(metrics.final_eq_norm)
        << ", final |e_w| = " << fmt(metrics.final_ew_norm) << ")\n";
}

void write_plot_data(const fs::path& dir, const Trace& trace, const Scenario& cfg) {
    {
        auto f = open_output(dir / "attitude_error.dat");
        std::string buf = "# t eqw eqx eqy eqz eq_norm\n";
        for (const TraceRecord& r : trace.records) {
            buf += fmt(r.t);
            for (double v : {r.e_q.s, r.e_q.v.x, r.e_q.v.y, r.e_q.v.z, norm(r.e_q)})
                buf += ' ' + fmt(v);
            buf += '\n';
        }
        f << buf;
    }
    {
        auto f = open_output(dir / "velocity_error.dat");
        std::string buf = "# t ewx ewy ewz ew_norm\n";
        for (const TraceRecord& r : trace.records) {
            buf += fmt(r.t);
            for (double v : {r.e_omega.x, r.e_omega.y, r.e_omega.z, norm(r.e_omega)})
                buf += ' ' + fmt(v);
            buf += '\n';
        }
        f << buf;
    }
    {
        // Estimate alongside the estimation error d(t) - dhat(t); with the
        // non-robust law the estimate stays 0 and the error is d(t) itself.
        auto f = open_output(dir / "disturbance_estimate.dat");
        std::string buf = "# t dhx dhy dhz edx edy edz ed_norm\n";
        for (const TraceRecord& r : trace.records) {
            const Vec3 e_delta = cfg.disturbance.at(r.t) - r.delta_hat;
            buf += fmt(r.t);
            for (double v : {r.delta_hat.x, r.delta_hat.y, r.delta_hat.z, e_delta.x, e_delta.y,
                             e_delta.z, norm(e_delta)})
                buf += ' ' + fmt(v);
            buf += '\n';
        }
        f << buf;
    }
}

int cmd_simulate(const fs::path& config, const fs::path& out_dir, const std::string& format,
                 std::ostream& out, std::ostream& err) {
    const Scenario cfg = load_scenario(config);
    const auto [trace, metrics] = simulate(cfg);
    for (const std::string& w : trace.warnings) err << "warning: " << w << '\n';
    write_outputs(out_dir, format, trace, metrics, out);
    return exit_ok;
}

int cmd_case_study(int n, const fs::path& out_dir, bool plot_data, double dt_override,
                   double t_end_override, int stride_override, std::ostream& out,
                   std::ostream& err) {
    Scenario cfg = case_study(n);
    if (dt_override > 0.0) cfg.dt = dt_override;
    if (t_end_override >= 0.0) cfg.t_end = t_end_override;
    if (stride_override > 0) cfg.record_stride = stride_override;
    const auto [trace, metrics] = simulate(cfg);
    for (const std::string& w : trace.warnings) err << "warning: " << w << '\n';
    write_outputs(out_dir, "csv", trace, metrics, out);
    if (plot_data) {
        write_plot_data(out_dir, trace, cfg);
        out << "plot data: attitude_error.dat, velocity_error.dat, disturbance_estimate.dat\n";
    }
    return exit_ok;
}

void apply_param(Scenario& cfg, const std::string& name, double value) {
    if (name == "alpha")
        cfg.gains.base.alpha = value;
    else if (name == "k_q")
        cfg.gains.base.k_q = value;
    else if (name == "k1")
        cfg.gains.base.k1 = value;
    else if (name == "k_omega")
        cfg.gains.base.k_omega = value;
    else if (name == "k_delta")
        cfg.gains.k_delta = value;
    else
        throw ConfigError("param",
                          "unknown tunable '" + name +
                              "' (expected alpha, k_q, k1, k_omega, or k_delta)");
}

std::vector<double> parse_values(const std::string& list) {
    std::vector<double> values;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &pos);
        } catch (const std::exception&) {
            throw ConfigError("values", "not a number: '" + item + "'");
        }
        if (pos != item.size()) throw ConfigError("values", "not a number: '" + item + "'");
        values.push_back(v);
    }
    if (values.empty()) throw ConfigError("values", "empty list");
    return values;
}

unsigned sweep_worker_count(size_t jobs) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("QUATTRACK_THREADS")) {
        char* end = nullptr;
        const long parsed = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && parsed >= 1) n = static_cast<unsigned>(parsed);
    }
    return static_cast<unsigned>(std::min<size_t>(n, jobs));
}

int cmd_sweep(const std::string& param, const std::string& values_list, const fs::path& base,
              const fs::path& out_dir, std::ostream& out) {
    const std::vector<double> values = parse_values(values_list);
    const Scenario base_cfg = load_scenario(base);

    // Validate every run configuration up front so a bad value fails fast
    // instead of mid-sweep in a worker thread.
    std::vector<Scenario> cfgs;
    cfgs.reserve(values.size());
    for (double v : values) {
        Scenario cfg = base_cfg;
        apply_param(cfg, param, v);
        try {
            validate(cfg.gains.base);
            if (cfg.mode == ControllerMode::robust) validate(cfg.gains);
        } catch (const std::invalid_argument& ex) {
            throw ConfigError("values", std::string(ex.what()) + " (value " + fmt(v) + ")");
        }
        cfgs.push_back(std::move(cfg));
    }

    // Runs are independent; results land in pre-sized slots so output order
    // matches input order regardless of scheduling.
    std::vector<Metrics> results(cfgs.size());
    std::vector<std::exception_ptr> errors(cfgs.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= cfgs.size()) return;
            try {
                results[i] = simulate(cfgs[i]).second;
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned n_workers = sweep_worker_count(cfgs.size());
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();

    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);

    fs::create_directories(out_dir);
    const fs::path summary = out_dir / "summary.csv";
    auto f = open_output(summary);
    std::string buf =
        "param,value,final_eq_norm,final_ew_norm,final_delta_err_norm,rms_ew_20_40,"
        "settle_time_eq_1e-2,vk1_monotonicity_violations\n";
    for (size_t i = 0; i < values.size(); ++i) {
        const Metrics& m = results[i];
        buf += param + ',' + fmt(values[i]) + ',' + fmt(m.final_eq_norm) + ',' +
               fmt(m.final_ew_norm) + ',' + fmt(m.final_delta_err_norm) + ',' +
               fmt(m.rms_ew_20_40) + ',' + fmt(m.settle_time_eq) + ',' +
               std::to_string(m.vk1_monotonicity_violations) + '\n';
    }
    f << buf;
    out << "summary: " << summary.string() << " (" << values.size() << " runs, " << n_workers
        << " workers)\n";
    return exit_ok;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"quattrack: quaternion attitude tracking simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::string format = "csv";
    CLI::App* sim = app.add_subcommand("simulate", "run a scenario from a JSON config file");
    sim->add_option("--config", config_path, "scenario config file")->required();
    sim->add_option("--out", out_dir, "output directory (default: current directory)");
    sim->add_option("--format", format, "trace file format (csv or json)")
        ->check(CLI::IsMember({"csv", "json"}));

    int cs_n = 0;
    std::string cs_out = ".";
    bool plot_data = false;
    double cs_dt = -1.0, cs_t_end = -1.0;
    int cs_stride = 0;
    CLI::App* cs = app.add_subcommand("case-study", "run one of the built-in presets (1-3)");
    cs->add_option("--n", cs_n, "preset index")->required()->check(CLI::Range(1, 3));
    cs->add_option("--out", cs_out, "output directory (default: current directory)");
    cs->add_flag("--plot-data", plot_data, "also emit per-figure plot data files");
    cs->add_option("--dt", cs_dt, "override the integration step (s)");
    cs->add_option("--t-end", cs_t_end, "override the duration (s)");
    cs->add_option("--record-stride", cs_stride, "override the logging stride");

    std::string suite = "all";
    CLI::App* ver = app.add_subcommand("verify", "run the numerical property battery");
    ver->add_option("--suite", suite, "which property suite to run")
        ->check(CLI::IsMember({"algebra", "dynamics", "lyapunov", "all"}));

    std::string sweep_param, sweep_values, sweep_base, sweep_out;
    CLI::App* sw = app.add_subcommand("sweep", "batch runs over one tunable");
    sw->add_option("--param", sweep_param, "tunable to vary (alpha, k_q, k1, k_omega, k_delta)")
        ->required();
    sw->add_option("--values", sweep_values, "comma-separated list of values")->required();
    sw->add_option("--base", sweep_base, "base scenario config file")->required();
    sw->add_option("--out", sweep_out, "output directory for summary.csv")->required();

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return exit_ok;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_config_error;
    }

    try {
        if (sim->parsed()) return cmd_simulate(config_path, out_dir, format, out, err);
        if (cs->parsed())
            return cmd_case_study(cs_n, cs_out, plot_data, cs_dt, cs_t_end, cs_stride, out, err);
        if (ver->parsed()) return run_verify(suite, out) ? exit_ok : exit_verify_failed;
        if (sw->parsed()) return cmd_sweep(sweep_param, sweep_values, sweep_base, sweep_out, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const NumericalAbort& e) {
        err << "numerical abort: " << e.what() << '\n';
        return exit_numerical_abort;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const fs::filesystem_error& e) {
        err << "i/o error: " << e.what() << '\n';
        return exit_config_error;
    }
    return exit_config_error;  // unreachable with require_subcommand(1)
}

}  // namespace quattrack::cli
