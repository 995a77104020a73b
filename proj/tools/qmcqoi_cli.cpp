// Command-line front end: configure and run adaptive (Q)MC problems, emit
// bounds and estimates in machine-readable form.
//
// Exit codes: 0 all QOI converged, 1 usage or I/O error, 2 budget exhausted.

#include "qmcqoi/problems.hpp"
#include "qmcqoi/report_io.hpp"
#include "qmcqoi/study.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <fstream>
#include <sstream>

namespace {

using namespace qmcqoi;

struct RunConfig {
    std::string sequence = "lattice";
    std::string bounder = "replications";
    std::uint64_t seed = 0;
    double alpha = 0.05;
    double eps_abs = 1e-2;
    double eps_rel = 0.0;
    std::string metric = "abs-or-rel";
    unsigned m1 = 8;
    std::uint64_t max_samples = std::uint64_t(1) << 22;
    unsigned replications = 16;
    double inflation = 1.2;
    unsigned workers = 1;
    std::string format = "json";
    std::string output = "-";
};

SequenceKind parse_sequence(const std::string& s) {
    if (s == "iid") return SequenceKind::Iid;
    if (s == "lattice") return SequenceKind::Lattice;
    if (s == "digital-net-b2" || s == "net") return SequenceKind::DigitalNetB2;
    throw CLI::ValidationError("--sequence", "unknown sequence kind: " + s);
}

BounderKind parse_bounder(const std::string& s) {
    if (s == "clt-iid" || s == "clt") return BounderKind::CltIid;
    if (s == "replications" || s == "rep") return BounderKind::Replications;
    throw CLI::ValidationError("--bounder", "unknown bounder kind: " + s);
}

void add_common_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--sequence", cfg.sequence,
                    "sequence kind: iid | lattice | digital-net-b2");
    cmd->add_option("--bounder", cfg.bounder, "bounder kind: clt-iid | replications");
    cmd->add_option("--seed", cfg.seed, "randomization seed")->envname("QMCQOI_SEED");
    cmd->add_option("--alpha", cfg.alpha, "per-QOI uncertainty threshold in (0,1)");
    cmd->add_option("--eps-abs", cfg.eps_abs, "absolute error tolerance");
    cmd->add_option("--eps-rel", cfg.eps_rel, "relative error tolerance in [0,1)");
    cmd->add_option("--metric", cfg.metric, "error metric: abs-or-rel | abs-and-rel");
    cmd->add_option("--m1", cfg.m1, "2^m1 initial samples");
    cmd->add_option("--max-samples", cfg.max_samples, "sample budget per sequence");
    cmd->add_option("--replications", cfg.replications,
                    "replicate count (replications bounder)");
    cmd->add_option("--inflation", cfg.inflation, "deviation inflation factor >= 1");
    cmd->add_option("--workers", cfg.workers, "evaluation worker threads");
    cmd->add_option("--format", cfg.format, "output format: json | csv");
    cmd->add_option("--output", cfg.output, "output path, - for stdout");
}

ErrorMetric make_metric(const RunConfig& cfg) {
    if (cfg.metric == "abs-or-rel") return abs_or_rel(cfg.eps_abs, cfg.eps_rel);
    if (cfg.metric == "abs-and-rel") return abs_and_rel(cfg.eps_abs, cfg.eps_rel);
    throw CLI::ValidationError("--metric", "unknown metric kind: " + cfg.metric);
}

SequenceSpec make_sequence(const RunConfig& cfg, unsigned dim) {
    SequenceSpec seq;
    seq.kind = parse_sequence(cfg.sequence);
    seq.dimension = dim;
    seq.seed = cfg.seed;
    seq.randomization =
        seq.kind == SequenceKind::Iid ? Randomization::None : Randomization::Shift;
    return seq;
}

BounderConfig make_bounder(const RunConfig& cfg) {
    BounderConfig b;
    b.kind = parse_bounder(cfg.bounder);
    b.inflation = cfg.inflation;
    b.replications = cfg.replications;
    const SequenceKind kind = parse_sequence(cfg.sequence);
    if (b.kind == BounderKind::Replications && kind == SequenceKind::Iid)
        throw CLI::ValidationError(
            "--bounder",
            "the replications bounder needs a low-discrepancy sequence; use "
            "--bounder clt-iid with --sequence iid");
    if (b.kind == BounderKind::CltIid && kind != SequenceKind::Iid)
        throw CLI::ValidationError(
            "--bounder", "the clt-iid bounder requires --sequence iid");
    return b;
}

int run_and_emit(const ProblemSpec& problem, const RunConfig& cfg) {
    const RunReport report = run(problem, make_sequence(cfg, problem.dim),
                                 make_bounder(cfg), cfg.m1, cfg.max_samples,
                                 cfg.workers);
    const ReportFormat fmt =
        cfg.format == "csv" ? ReportFormat::Csv : ReportFormat::Json;
    if (cfg.format != "csv" && cfg.format != "json")
        throw CLI::ValidationError("--format", "unknown format: " + cfg.format);
    emit_report(cfg.output, report, fmt);
    return report_exit_code(report);
}

std::vector<std::vector<unsigned>> parse_subsets(const std::string& text,
                                                 unsigned nu) {
    // semicolon-separated subsets of comma-separated 1-based input indices
    std::vector<std::vector<unsigned>> subsets;
    std::istringstream groups(text);
    std::string group;
    while (std::getline(groups, group, ';')) {
        std::vector<unsigned> u;
        std::istringstream items(group);
        std::string item;
        while (std::getline(items, item, ',')) {
            const unsigned j = unsigned(std::stoul(item));
            if (j < 1 || j > nu)
                throw CLI::ValidationError("--subsets", "input index out of range");
            u.push_back(j - 1);
        }
        if (!u.empty()) subsets.push_back(std::move(u));
    }
    return subsets;
}

// built-in integrands for the generic command and the convergence study
std::function<double(std::span<const double>)> named_integrand(
    const std::string& name, unsigned dim, double value) {
    if (name == "constant")
        return [value](std::span<const double>) { return value; };
    if (name == "linear")
        return [](std::span<const double> x) { return x[0]; };
    if (name == "smooth-product")
        return [dim](std::span<const double> x) {
            double p = 1.0;
            for (unsigned j = 0; j < dim; ++j) p *= 1.0 + 0.7 * (x[j] - 0.5);
            return p;
        };
    throw CLI::ValidationError("--integrand", "unknown integrand: " + name);
}

double named_integrand_mean(const std::string& name, double value) {
    if (name == "constant") return value;
    if (name == "linear") return 0.5;
    if (name == "smooth-product") return 1.0;
    throw CLI::ValidationError("--integrand", "unknown integrand: " + name);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive (Quasi-)Monte Carlo bounds and estimates for array "
                 "quantities of interest"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value configuration file");
    app.allow_config_extras(false);

    RunConfig cfg;

    auto* cmd_int = app.add_subcommand("integrate", "mean of a named integrand");
    std::string int_name = "smooth-product";
    double int_value = 1.0;
    unsigned int_dim = 4;
    add_common_options(cmd_int, cfg);
    cmd_int->add_option("--integrand", int_name,
                        "constant | linear | smooth-product");
    cmd_int->add_option("--value", int_value, "constant integrand value");
    cmd_int->add_option("--dim", int_dim, "sampling dimension");

    auto* cmd_sens =
        app.add_subcommand("sensitivity", "closed/total sensitivity indices");
    std::string sens_preset = "ishigami";
    std::string sens_subsets;
    add_common_options(cmd_sens, cfg);
    cmd_sens->add_option("--preset", sens_preset, "ishigami | ishigami-all");
    cmd_sens->add_option("--subsets", sens_subsets,
                         "override subsets, e.g. \"1;2;3;1,2\" (1-based)");

    auto* cmd_post =
        app.add_subcommand("posterior-mean", "Bayesian posterior mean fixture");
    std::string post_preset = "conjugate-gaussian";
    add_common_options(cmd_post, cfg);
    cmd_post->add_option("--preset", post_preset, "conjugate-gaussian");

    auto* cmd_qei =
        app.add_subcommand("qei", "batch expected-improvement fixture");
    std::string qei_preset = "halfnormal";
    add_common_options(cmd_qei, cfg);
    cmd_qei->add_option("--preset", qei_preset, "halfnormal");

    auto* cmd_conv =
        app.add_subcommand("convergence", "fixed-n error decay per sequence kind");
    std::string conv_name = "smooth-product";
    unsigned conv_dim = 4, conv_seeds = 20, conv_mmin = 8, conv_mmax = 14;
    double conv_value = 1.0;
    add_common_options(cmd_conv, cfg);
    cmd_conv->add_option("--integrand", conv_name,
                         "constant | linear | smooth-product");
    cmd_conv->add_option("--value", conv_value, "constant integrand value");
    cmd_conv->add_option("--dim", conv_dim, "sampling dimension");
    cmd_conv->add_option("--study-seeds", conv_seeds, "randomization seeds per n");
    cmd_conv->add_option("--m-min", conv_mmin, "smallest n = 2^m");
    cmd_conv->add_option("--m-max", conv_mmax, "largest n = 2^m");

    try {
        app.parse(argc, argv);

        if (*cmd_int) {
            const Shape d_mu{1};
            auto f = named_integrand(int_name, int_dim, int_value);
            Integrand wrap = [f, int_dim](std::span<const double> x,
                                          const FlagArray& skip, MultiArray& out) {
                if (!skip.get(0)) out[0] = f(x.subspan(0, int_dim));
            };
            const ProblemSpec problem = make_mean_vector_problem(
                std::move(wrap), int_dim, d_mu, {make_metric(cfg)}, {cfg.alpha});
            return run_and_emit(problem, cfg);
        }
        if (*cmd_sens) {
            SensitivitySpec spec = sens_preset == "ishigami-all"
                                       ? ishigami_all_subsets_preset()
                                       : ishigami_singletons_preset();
            if (sens_preset != "ishigami" && sens_preset != "ishigami-all")
                throw CLI::ValidationError("--preset", "unknown preset: " + sens_preset);
            if (!sens_subsets.empty())
                spec.subsets = parse_subsets(sens_subsets, spec.nu);
            const std::size_t ns = 2 * spec.subsets.size();
            SensitivityProblem sp = make_sensitivity_problem(
                spec, std::vector<ErrorMetric>(ns, make_metric(cfg)),
                std::vector<double>(ns, cfg.alpha));
            return run_and_emit(sp.problem, cfg);
        }
        if (*cmd_post) {
            if (post_preset != "conjugate-gaussian")
                throw CLI::ValidationError("--preset", "unknown preset: " + post_preset);
            const ProblemSpec problem = make_posterior_mean_problem(
                conjugate_gaussian_preset(), {make_metric(cfg)}, {cfg.alpha});
            return run_and_emit(problem, cfg);
        }
        if (*cmd_qei) {
            if (qei_preset != "halfnormal")
                throw CLI::ValidationError("--preset", "unknown preset: " + qei_preset);
            const ProblemSpec problem = make_qei_problem(
                qei_halfnormal_preset(), {make_metric(cfg)}, {cfg.alpha});
            return run_and_emit(problem, cfg);
        }
        if (*cmd_conv) {
            StudyConfig sc;
            sc.m_min = conv_mmin;
            sc.m_max = conv_mmax;
            sc.seeds = conv_seeds;
            sc.base_seed = cfg.seed;
            const auto results = convergence_study(
                named_integrand(conv_name, conv_dim, conv_value), conv_dim,
                named_integrand_mean(conv_name, conv_value), sc);
            std::ostream* out = &std::cout;
            std::ofstream file;
            if (cfg.output != "-" && !cfg.output.empty()) {
                file.open(cfg.output);
                if (!file) throw std::runtime_error("cannot open " + cfg.output);
                out = &file;
            }
            if (cfg.format == "csv") {
                *out << "sequence,n,median_abs_error\n";
                for (const auto& r : results)
                    for (const auto& row : r.rows)
                        *out << to_string(r.kind) << ',' << row.n << ','
                             << row.median_abs_error << '\n';
                *out << "# slopes:";
                for (const auto& r : results)
                    *out << ' ' << to_string(r.kind) << '=' << r.slope_str();
                *out << '\n';
            } else {
                *out << "{\n";
                for (std::size_t i = 0; i < results.size(); ++i) {
                    const auto& r = results[i];
                    *out << "  \"" << to_string(r.kind) << "\": {\"slope\": "
                         << (r.slope_defined ? std::to_string(r.slope) : "null")
                         << ", \"errors\": [";
                    for (std::size_t k = 0; k < r.rows.size(); ++k)
                        *out << (k ? ", " : "") << r.rows[k].median_abs_error;
                    *out << "]}" << (i + 1 < results.size() ? "," : "") << "\n";
                }
                *out << "}\n";
            }
            return 0;
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
