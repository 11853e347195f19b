// Benchmark driver: convergence studies, stability maps, single integrations,
// and scheme comparisons, all emitting CSV.

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cxode/cxode.hpp"

namespace {

constexpr int kExitBadArguments = 3;
constexpr int kExitIntegrationFailure = 2;

struct CommonOptions {
    std::vector<std::string> params;
    std::string config_path;
    std::optional<double> rk2_alpha;
};

cxode::ParamMap collect_params(const CommonOptions& opts) {
    cxode::ParamMap map;
    if (!opts.config_path.empty()) map = cxode::load_param_file(opts.config_path);
    for (const std::string& kv : opts.params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw cxode::InvalidParameter("--param expects key=value, got '" + kv + "'");
        std::string key = kv.substr(0, eq);
        if (key.rfind("problem.", 0) == 0) key.erase(0, 8);
        map[key] = cxode::parse_double(kv.substr(eq + 1));
    }
    return map;
}

std::vector<double> parse_tau_list(const std::string& csv) {
    std::vector<double> out;
    for (const std::string& field : cxode::split_csv_line(csv))
        if (!field.empty()) out.push_back(cxode::parse_double(field));
    if (out.empty()) throw cxode::InvalidParameter("--taus: empty list");
    return out;
}

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--param", opts.params, "problem parameter override, key=value")
        ->take_all();
    cmd->add_option("--config", opts.config_path, "flat key=value parameter file");
    cmd->add_option("--rk2-alpha", opts.rk2_alpha, "alpha parameter of the rk2 tableau");
}

int run_converge(const std::string& scheme_token, bool composed, const std::string& problem,
                 const std::string& taus_csv, const std::string& out_path,
                 const CommonOptions& opts) {
    cxode::SchemeSpec scheme = cxode::parse_scheme(scheme_token, opts.rk2_alpha);
    if (composed) scheme.composed = true;
    const cxode::ProblemSpec spec = cxode::make_problem(problem, collect_params(opts));
    const cxode::ConvergenceReport report =
        cxode::run_convergence_study(scheme, spec, parse_tau_list(taus_csv));
    cxode::write_convergence_csv(out_path, report);
    return 0;
}

int run_stability(const std::string& scheme_token, const std::string& box, int nx, int ny,
                  const std::string& out_path, const CommonOptions& opts) {
    const cxode::SchemeSpec scheme = cxode::parse_scheme(scheme_token, opts.rk2_alpha);
    if (scheme.bpl)
        throw cxode::InvalidParameter("stability maps are defined for tableau schemes only");
    const auto fields = cxode::split_csv_line(box);
    if (fields.size() != 4)
        throw cxode::InvalidParameter("--box expects xmin,xmax,ymin,ymax");
    const double xmin = cxode::parse_double(fields[0]);
    const double xmax = cxode::parse_double(fields[1]);
    const double ymin = cxode::parse_double(fields[2]);
    const double ymax = cxode::parse_double(fields[3]);
    const cxode::ButcherTableau tab = cxode::make_tableau(scheme.tableau, opts.rk2_alpha);
    const cxode::CompositionCoefficients coeff = cxode::gamma_coefficients(tab.order);
    const cxode::StabilityGrid base = cxode::scan_region(
        [&tab](cxode::Complex z) { return cxode::stability_magnitude(tab, z); }, xmin, xmax,
        ymin, ymax, nx, ny);
    const cxode::StabilityGrid composed = cxode::scan_region(
        [&tab, &coeff](cxode::Complex z) {
            return cxode::composed_stability_magnitude(tab, coeff.gamma1, coeff.gamma2, z);
        },
        xmin, xmax, ymin, ymax, nx, ny);
    cxode::write_stability_csv(out_path, base, composed);
    return 0;
}

int run_integrate(const std::string& scheme_token, bool composed, const std::string& problem,
                  bool adaptive, std::optional<double> tau, std::optional<double> tol,
                  std::optional<double> tau0, std::optional<double> tau_min,
                  std::optional<double> tau_max, std::optional<double> safety,
                  const std::string& out_path, const CommonOptions& opts) {
    cxode::SchemeSpec scheme = cxode::parse_scheme(scheme_token, opts.rk2_alpha);
    if (composed) scheme.composed = true;
    cxode::ProblemSpec spec = cxode::make_problem(problem, collect_params(opts));
    cxode::IntegrationTrace trace;
    if (adaptive) {
        if (!tol || !tau0)
            throw cxode::InvalidParameter("--adaptive requires --tol and --tau0");
        cxode::AdaptiveConfig cfg;
        cfg.tol = *tol;
        cfg.tau0 = *tau0;
        if (tau_min) cfg.tau_min = *tau_min;
        if (tau_max) cfg.tau_max = *tau_max;
        if (safety) cfg.safety = *safety;
        trace = cxode::run_adaptive_scheme(scheme, spec, cfg, opts.rk2_alpha);
    } else {
        if (!tau) throw cxode::InvalidParameter("fixed-step integration requires --tau");
        trace = cxode::run_fixed_scheme(scheme, spec, *tau, opts.rk2_alpha);
    }
    if (spec.ode.exact_solution) cxode::annotate_errors(trace, spec);
    cxode::write_trace_csv(out_path, trace, spec.ode.dimension);
    return 0;
}

int run_compare(const std::string& schemes_csv, const std::string& problem,
                const std::string& taus_csv, bool adaptive, std::optional<double> tol,
                std::optional<double> tau0, const std::string& out_path,
                const CommonOptions& opts) {
    std::vector<cxode::SchemeSpec> schemes;
    for (const std::string& token : cxode::split_csv_line(schemes_csv))
        if (!token.empty()) schemes.push_back(cxode::parse_scheme(token, opts.rk2_alpha));
    if (schemes.empty()) throw cxode::InvalidParameter("--schemes: empty list");
    const cxode::ProblemSpec spec = cxode::make_problem(problem, collect_params(opts));
    cxode::ComparisonGrid grid;
    if (adaptive) {
        if (!tol || !tau0)
            throw cxode::InvalidParameter("--adaptive requires --tol and --tau0");
        cxode::AdaptiveConfig cfg;
        cfg.tol = *tol;
        cfg.tau0 = *tau0;
        grid = cfg;
    } else {
        if (taus_csv.empty())
            throw cxode::InvalidParameter("compare requires --taus or --adaptive");
        grid = parse_tau_list(taus_csv);
    }
    const std::vector<cxode::ComparisonRow> rows = cxode::run_comparison(schemes, spec, grid);
    cxode::write_comparison_csv(out_path, rows);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"composed one-step ODE integration benchmarks"};
    app.require_subcommand(1);

    // converge
    auto* converge = app.add_subcommand("converge", "global-error convergence study");
    std::string cv_scheme, cv_problem, cv_taus, cv_out;
    bool cv_composed = false;
    CommonOptions cv_opts;
    converge->add_option("--scheme", cv_scheme)->required();
    converge->add_flag("--composed", cv_composed);
    converge->add_option("--problem", cv_problem)->required();
    converge->add_option("--taus", cv_taus)->required();
    converge->add_option("--out", cv_out)->required();
    add_common(converge, cv_opts);

    // stability
    auto* stability = app.add_subcommand("stability", "stability-region magnitudes");
    std::string st_scheme, st_box, st_out;
    int st_nx = 200, st_ny = 200;
    CommonOptions st_opts;
    stability->add_option("--scheme", st_scheme)->required();
    stability->add_option("--box", st_box)->required();
    stability->add_option("--nx", st_nx)->required();
    stability->add_option("--ny", st_ny)->required();
    stability->add_option("--out", st_out)->required();
    add_common(stability, st_opts);

    // integrate
    auto* integrate = app.add_subcommand("integrate", "single integration trace");
    std::string in_scheme, in_problem, in_out;
    bool in_composed = false, in_adaptive = false;
    std::optional<double> in_tau, in_tol, in_tau0, in_tau_min, in_tau_max, in_safety;
    CommonOptions in_opts;
    integrate->add_option("--scheme", in_scheme)->required();
    integrate->add_flag("--composed", in_composed);
    integrate->add_option("--problem", in_problem)->required();
    integrate->add_flag("--adaptive", in_adaptive);
    integrate->add_option("--tau", in_tau);
    integrate->add_option("--tol", in_tol);
    integrate->add_option("--tau0", in_tau0);
    integrate->add_option("--tau-min", in_tau_min);
    integrate->add_option("--tau-max", in_tau_max);
    integrate->add_option("--safety", in_safety);
    integrate->add_option("--out", in_out)->required();
    add_common(integrate, in_opts);

    // compare
    auto* compare = app.add_subcommand("compare", "scheme comparison table");
    std::string cp_schemes, cp_problem, cp_taus, cp_out;
    bool cp_adaptive = false;
    std::optional<double> cp_tol, cp_tau0;
    CommonOptions cp_opts;
    compare->add_option("--schemes", cp_schemes)->required();
    compare->add_option("--problem", cp_problem)->required();
    compare->add_option("--taus", cp_taus);
    compare->add_flag("--adaptive", cp_adaptive);
    compare->add_option("--tol", cp_tol);
    compare->add_option("--tau0", cp_tau0);
    compare->add_option("--out", cp_out)->required();
    add_common(compare, cp_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : kExitBadArguments;
    }

    try {
        if (converge->parsed())
            return run_converge(cv_scheme, cv_composed, cv_problem, cv_taus, cv_out, cv_opts);
        if (stability->parsed())
            return run_stability(st_scheme, st_box, st_nx, st_ny, st_out, st_opts);
        if (integrate->parsed())
            return run_integrate(in_scheme, in_composed, in_problem, in_adaptive, in_tau,
                                 in_tol, in_tau0, in_tau_min, in_tau_max, in_safety, in_out,
                                 in_opts);
        if (compare->parsed())
            return run_compare(cp_schemes, cp_problem, cp_taus, cp_adaptive, cp_tol, cp_tau0,
                               cp_out, cp_opts);
    } catch (const cxode::UnknownScheme& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadArguments;
    } catch (const cxode::UnknownProblem& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadArguments;
    } catch (const cxode::InvalidParameter& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadArguments;
    } catch (const cxode::InvalidOrder& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadArguments;
    } catch (const std::exception& e) {
        std::cerr << "integration failed: " << e.what() << '\n';
        return kExitIntegrationFailure;
    }
    return kExitBadArguments;
}
