#include "commands.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "ouocc/analytic.hpp"
#include "ouocc/errors.hpp"
#include "ouocc/estimation.hpp"
#include "ouocc/observation_io.hpp"
#include "ouocc/occupation_mc.hpp"
#include "ouocc/ou_sde.hpp"

namespace ouocc::cli {
namespace {

/// Reported for bad values discovered after CLI11 has accepted the flags.
class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// CLI11 reads "-inf" as a cluster of short flags. Glue such a token to the
// preceding long option so "--a -inf" behaves like "--a=-inf".
std::vector<std::string> join_negative_infinity(const std::vector<std::string>& args) {
    std::vector<std::string> joined;
    joined.reserve(args.size());
    for (const auto& arg : args) {
        const bool neg_inf = lowercase(arg).starts_with("-inf");
        if (neg_inf && !joined.empty() && joined.back().starts_with("--") &&
            joined.back().find('=') == std::string::npos && joined.size() > 1) {
            joined.back() += "=" + arg;
        } else {
            joined.push_back(arg);
        }
    }
    return joined;
}

double extended_real(const std::string& text, const char* flag) {
    try {
        return parse_extended_real(text);
    } catch (const std::invalid_argument&) {
        throw UsageError(std::string(flag) + ": not a number or +-inf: '" + text + "'");
    }
}

std::pair<double, double> parse_interval(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw UsageError("--interval: expected a:b, got '" + text + "'");
    }
    return {extended_real(text.substr(0, colon), "--interval"),
            extended_real(text.substr(colon + 1), "--interval")};
}

/// Output goes to --out atomically when given, else to the stream.
void emit(const std::string& content, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << content;
    } else {
        write_file_atomic(out_path, content);
    }
}

GenerationMethod generation_method(const std::string& name) {
    if (name == "direct") return GenerationMethod::direct;
    if (name == "split") return GenerationMethod::split;
    return GenerationMethod::monte_carlo;
}

struct McFlags {
    std::size_t n_samples = 10'000;
    double dt = 1e-2;
    std::uint64_t seed = 0;
    unsigned workers = 0;

    void attach(CLI::App& cmd) {
        cmd.add_option("--n-samples", n_samples, "Monte-Carlo paths")->check(CLI::Range(2ul, 1ul << 40));
        cmd.add_option("--dt", dt, "Euler-Maruyama step")->check(CLI::PositiveNumber);
        cmd.add_option("--seed", seed, "Monte-Carlo seed");
        cmd.add_option("--workers", workers, "worker threads (0 = hardware concurrency)");
    }

    MCOptions options() const {
        MCOptions o;
        o.n_samples = n_samples;
        o.dt = dt;
        o.seed = seed;
        o.workers = workers;
        return o;
    }
};

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    double lambda = 0, sigma = 0, mu = 0, u0 = 0, t_end = 0, dt = 1e-2;
    std::uint64_t seed = 0;
    std::string out;
};

void add_simulate(CLI::App& app, SimulateArgs& a) {
    auto* cmd = app.add_subcommand("simulate", "Simulate one Euler-Maruyama path, CSV t,x");
    cmd->add_option("--lambda", a.lambda, "mean-reversion rate")->required();
    cmd->add_option("--sigma", a.sigma, "diffusion coefficient")->required();
    cmd->add_option("--mu", a.mu, "long-run mean");
    cmd->add_option("--u0", a.u0, "initial value");
    cmd->add_option("--t-end", a.t_end, "horizon")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--dt", a.dt, "time step")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", a.seed, "random seed");
    cmd->add_option("--out", a.out, "output file (default: stdout)");
}

int run_simulate(const SimulateArgs& a, std::ostream& out) {
    const OUParams params(a.lambda, a.sigma, a.mu, a.u0);
    const auto grid = SimulationGrid::with_step(a.t_end, a.dt);
    const auto path = simulate_ou_path(params, grid, a.seed);

    std::string csv = "t,x\n";
    for (std::size_t j = 0; j < path.values.size(); ++j) {
        csv += format_real(grid.time(j)) + ',' + format_real(path.values[j]) + '\n';
    }
    emit(csv, a.out, out);
    return kOk;
}

// ------------------------------------------------------------------ expect

struct ExpectArgs {
    std::optional<double> lambda;
    std::string lambda_range;
    double sigma = 0, t_end = 0;
    std::string a = "-inf", b = "inf";
    std::string method = "split";
    McFlags mc;
    std::string out;
};

void add_expect(CLI::App& app, ExpectArgs& a) {
    auto* cmd = app.add_subcommand("expect", "Expected occupation time of [a, b] up to T");
    auto* single = cmd->add_option("--lambda", a.lambda, "mean-reversion rate");
    auto* sweep = cmd->add_option("--lambda-range", a.lambda_range, "sweep start:stop:step");
    single->excludes(sweep);
    cmd->add_option("--sigma", a.sigma, "diffusion coefficient")->required();
    cmd->add_option("--t-end", a.t_end, "horizon T")->required();
    cmd->add_option("--a", a.a, "lower end (accepts -inf)");
    cmd->add_option("--b", a.b, "upper end (accepts inf)");
    cmd->add_option("--method", a.method, "direct | split | mc")
        ->check(CLI::IsMember({"direct", "split", "mc"}));
    a.mc.attach(*cmd);
    cmd->add_option("--out", a.out, "output file (default: stdout)");
}

int run_expect(const ExpectArgs& a, std::ostream& out) {
    std::vector<double> lambdas;
    if (a.lambda) {
        lambdas.push_back(*a.lambda);
    } else if (!a.lambda_range.empty()) {
        lambdas = parse_range(a.lambda_range);
    } else {
        throw UsageError("expect: one of --lambda or --lambda-range is required");
    }
    const ObservationWindow window(a.t_end, extended_real(a.a, "--a"), extended_real(a.b, "--b"));
    const bool mc = a.method == "mc";

    // Every lambda is validated before the first evaluation.
    std::vector<OUParams> params;
    for (double lambda : lambdas) {
        params.emplace_back(lambda, a.sigma);
        if (!mc) check_precision_guard(lambda, a.t_end);
    }

    std::string csv = mc ? "lambda,expectation,std_error\n" : "lambda,expectation\n";
    for (const auto& p : params) {
        csv += format_real(p.lambda()) + ',';
        if (mc) {
            const auto est = mc_expected_occupation(p, window, a.mc.options());
            csv += format_real(est.mean) + ',' + format_real(est.std_error);
        } else if (a.method == "direct") {
            csv += format_real(expected_occupation_direct(p, window));
        } else {
            csv += format_real(expected_occupation_split(p, window));
        }
        csv += '\n';
    }

    // A single analytic value prints bare; everything else is CSV.
    if (a.lambda && !mc && a.out.empty()) {
        const auto comma = csv.find(',', csv.find('\n'));
        out << csv.substr(comma + 1);
        return kOk;
    }
    emit(csv, a.out, out);
    return kOk;
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
    std::string observations;
    double tol = 1e-5;
    std::size_t max_iters = 2000;
    std::vector<double> start{1.0, 1.0};
    double scale = 0.25;
    std::string model = "split";
    std::string trace;
    bool json = false;
};

void add_estimate(CLI::App& app, EstimateArgs& a) {
    auto* cmd = app.add_subcommand("estimate", "Fit (lambda, sigma) to an observation file");
    cmd->add_option("--observations", a.observations, "CSV with header t_end,a,b,g")->required();
    cmd->add_option("--tol", a.tol, "simplex diameter and spread tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iters", a.max_iters, "iteration limit")->check(CLI::PositiveNumber);
    cmd->add_option("--start", a.start, "initial lambda,sigma")->delimiter(',')->expected(2);
    cmd->add_option("--scale", a.scale, "initial simplex step in log space")->check(CLI::PositiveNumber);
    cmd->add_option("--model", a.model, "split | direct")->check(CLI::IsMember({"split", "direct"}));
    cmd->add_option("--trace", a.trace, "write simplex iterates to this CSV");
    cmd->add_flag("--json", a.json, "structured report");
}

int run_estimate(const EstimateArgs& a, std::ostream& out, std::ostream& err) {
    std::ifstream in(a.observations);
    if (!in) throw UsageError("cannot open observation file '" + a.observations + "'");
    const auto observations = [&] {
        try {
            return read_observations(in);
        } catch (const ParseError& e) {
            throw UsageError(a.observations + ": " + e.what());
        }
    }();

    OptimizerConfig opt;
    opt.tol = a.tol;
    opt.max_iters = a.max_iters;
    opt.initial_point = {a.start.at(0), a.start.at(1)};
    opt.initial_scale = a.scale;
    opt.keep_trace = !a.trace.empty();
    if (!(opt.initial_point[0] > 0 && opt.initial_point[1] > 0)) {
        throw UsageError("--start: both components must be positive");
    }

    const auto model = a.model == "direct" ? ModelEvaluator::direct : ModelEvaluator::split;
    const auto result = estimate_parameters(observations, opt, AnalyticConfig{}, model);

    if (observations.underdetermined() && !result.diagnostic.starts_with("underdetermined")) {
        err << "warning: underdetermined: fewer observations than unknowns\n";
    }
    if (!result.diagnostic.empty()) err << "warning: " << result.diagnostic << '\n';

    if (!a.trace.empty()) {
        std::string csv = "iteration,lambda,sigma,residual\n";
        for (std::size_t k = 0; k < result.trace.size(); ++k) {
            const auto& p = result.trace[k];
            csv += std::to_string(k) + ',' + format_real(p.lambda) + ',' + format_real(p.sigma) +
                   ',' + format_real(p.residual) + '\n';
        }
        write_file_atomic(a.trace, csv);
    }

    if (a.json) {
        nlohmann::ordered_json report;
        report["lambda_star"] = result.lambda_star;
        report["sigma_star"] = result.sigma_star;
        report["residual"] = result.residual;
        report["iterations"] = result.iterations;
        report["converged"] = result.converged;
        if (!result.diagnostic.empty()) report["diagnostic"] = result.diagnostic;
        out << report.dump(2) << '\n';
    } else {
        out << "lambda_star " << format_real(result.lambda_star) << '\n'
            << "sigma_star " << format_real(result.sigma_star) << '\n'
            << "residual " << format_real(result.residual) << '\n'
            << "iterations " << result.iterations << '\n'
            << "converged " << (result.converged ? "true" : "false") << '\n';
    }
    return kOk;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
    double lambda = 0, sigma = 0;
    std::vector<double> horizons{10.0, 12.0};
    std::vector<std::string> intervals{"-0.25:0.25", "-0.5:0.5", "-0.75:0.75", "-1:1"};
    std::string method = "split";
    McFlags mc;
    std::string out;
};

void add_generate(CLI::App& app, GenerateArgs& a) {
    auto* cmd = app.add_subcommand("generate", "Synthetic observation file t_end,a,b,g");
    cmd->add_option("--lambda", a.lambda, "mean-reversion rate")->required();
    cmd->add_option("--sigma", a.sigma, "diffusion coefficient")->required();
    cmd->add_option("--t-end", a.horizons, "horizons (repeatable)")->delimiter(',');
    cmd->add_option("--interval", a.intervals, "windows a:b (repeatable)")->delimiter(',');
    cmd->add_option("--method", a.method, "direct | split | mc")
        ->check(CLI::IsMember({"direct", "split", "mc"}));
    a.mc.attach(*cmd);
    cmd->add_option("--out", a.out, "output file (default: stdout)");
}

int run_generate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
    std::vector<std::pair<double, double>> intervals;
    for (const auto& text : a.intervals) intervals.push_back(parse_interval(text));
    const auto windows = window_grid(a.horizons, intervals);
    const OUParams params(a.lambda, a.sigma);

    const auto set = generate_synthetic_observations(params, windows, generation_method(a.method),
                                                     a.mc.options());
    if (set.mc_seed()) err << "monte-carlo seed " << *set.mc_seed() << '\n';

    std::ostringstream csv;
    write_observations(csv, set);
    emit(csv.str(), a.out, out);
    return kOk;
}

// --------------------------------------------------------- reproduce-table

struct TableArgs {
    std::uint64_t seed = 1;
    std::size_t n_samples = 10'000;
    double dt = 1e-2;
    unsigned workers = 0;
    bool json = false;
};

void add_table(CLI::App& app, TableArgs& a) {
    auto* cmd = app.add_subcommand("reproduce-table",
                                   "Recover five (lambda, sigma) pairs from analytic and MC data");
    cmd->add_option("--seed", a.seed, "base Monte-Carlo seed; row r uses seed + r");
    cmd->add_option("--n-samples", a.n_samples, "Monte-Carlo paths per row")
        ->check(CLI::Range(2ul, 1ul << 40));
    cmd->add_option("--dt", a.dt, "Euler-Maruyama step")->check(CLI::PositiveNumber);
    cmd->add_option("--workers", a.workers, "worker threads (0 = hardware concurrency)");
    cmd->add_flag("--json", a.json, "emit rows as JSON");
}

constexpr std::array<std::pair<double, double>, 5> kTableParameters{{
    {0.25, 0.75}, {0.50, 0.50}, {0.75, 1.25}, {1.00, 2.00}, {1.25, 2.50},
}};

int run_table(const TableArgs& a, std::ostream& out) {
    const auto windows = reference_windows();
    MCOptions mc;
    mc.n_samples = a.n_samples;
    mc.dt = a.dt;
    mc.workers = a.workers;

    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    std::ostringstream table;
    table << std::setw(8) << "lambda" << std::setw(8) << "sigma" << " | " << std::setw(12)
          << "lambda*" << std::setw(12) << "sigma*" << " | " << std::setw(12) << "MC lambda*"
          << std::setw(12) << "MC sigma*" << '\n';

    for (std::size_t r = 0; r < kTableParameters.size(); ++r) {
        const auto [lambda, sigma] = kTableParameters[r];
        const OUParams truth(lambda, sigma);
        mc.seed = a.seed + r;

        const auto direct = estimate_parameters(
            generate_synthetic_observations(truth, windows, GenerationMethod::split));
        const auto from_mc = estimate_parameters(
            generate_synthetic_observations(truth, windows, GenerationMethod::monte_carlo, mc));

        table << std::fixed << std::setprecision(2) << std::setw(8) << lambda << std::setw(8)
              << sigma << " | " << std::setprecision(6) << std::setw(12) << direct.lambda_star
              << std::setw(12) << direct.sigma_star << " | " << std::setw(12)
              << from_mc.lambda_star << std::setw(12) << from_mc.sigma_star << '\n';

        rows.push_back({{"lambda", lambda},
                        {"sigma", sigma},
                        {"direct", {{"lambda_star", direct.lambda_star},
                                    {"sigma_star", direct.sigma_star},
                                    {"converged", direct.converged}}},
                        {"monte_carlo", {{"lambda_star", from_mc.lambda_star},
                                         {"sigma_star", from_mc.sigma_star},
                                         {"converged", from_mc.converged},
                                         {"seed", mc.seed}}}});
    }

    if (a.json) {
        out << nlohmann::ordered_json{{"n_samples", a.n_samples}, {"dt", a.dt}, {"rows", rows}}.dump(2)
            << '\n';
    } else {
        out << table.str();
    }
    return kOk;
}

}  // namespace

std::vector<double> parse_range(const std::string& text) {
    const auto first = text.find(':');
    const auto second = first == std::string::npos ? first : text.find(':', first + 1);
    if (second == std::string::npos) {
        throw UsageError("range: expected start:stop:step, got '" + text + "'");
    }
    double start = 0, stop = 0, step = 0;
    try {
        start = std::stod(text.substr(0, first));
        stop = std::stod(text.substr(first + 1, second - first - 1));
        step = std::stod(text.substr(second + 1));
    } catch (const std::exception&) {
        throw UsageError("range: expected start:stop:step, got '" + text + "'");
    }
    if (!(std::isfinite(start) && std::isfinite(stop) && step > 0 && std::isfinite(step)) ||
        stop < start) {
        throw UsageError("range: need finite start <= stop and step > 0");
    }
    std::vector<double> values;
    for (std::size_t k = 0;; ++k) {
        const double v = start + static_cast<double>(k) * step;
        if (v > stop + 0.5 * step) break;
        values.push_back(v);
    }
    return values;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Occupation times of the Ornstein-Uhlenbeck process", "ouocc"};
    app.require_subcommand(1);

    SimulateArgs simulate;
    ExpectArgs expect;
    EstimateArgs estimate;
    GenerateArgs generate;
    TableArgs table;
    add_simulate(app, simulate);
    add_expect(app, expect);
    add_estimate(app, estimate);
    add_generate(app, generate);
    add_table(app, table);

    const auto args = join_negative_infinity(raw_args);
    std::vector<const char*> argv;
    for (const auto& s : args) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        const auto* cmd = app.get_subcommands().front();
        const std::string name = cmd->get_name();
        if (name == "simulate") return run_simulate(simulate, out);
        if (name == "expect") return run_expect(expect, out);
        if (name == "estimate") return run_estimate(estimate, out, err);
        if (name == "generate") return run_generate(generate, out, err);
        return run_table(table, out);
    } catch (const PrecisionGuardError& e) {
        err << "error: " << e.what() << '\n';
        return kPrecisionGuard;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

}  // namespace ouocc::cli
