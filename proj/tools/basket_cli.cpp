// Command-line front end: energy sweeps, critical-strike location, density
// asymptotics, oracle cross-validation, surface geometry and Asian reduction.
//
// Exit codes: 0 success, 1 configuration error, 2 numeric failure,
// 3 validation failure.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "basket/expansion.hpp"
#include "basket/geometry.hpp"
#include "basket/io.hpp"
#include "basket/oracle.hpp"

namespace {

using namespace basket;

struct CommonOptions {
    std::string spec_text;
    std::string k_grid, t_grid, eps_grid;
    std::string out_path;
    std::string format = "csv";
    double tol = 1e-12;
    std::uint64_t seed = 42;
    long paths = 100000;
    int multistart = 48;
};

std::vector<double> parse_grid(const std::string& text, const char* field) {
    std::vector<double> grid;
    try {
        auto colon = text.find(':');
        if (colon != std::string::npos) {
            auto colon2 = text.find(':', colon + 1);
            if (colon2 == std::string::npos) throw ConfigError(field, "expected lo:hi:n");
            double lo = std::stod(text.substr(0, colon));
            double hi = std::stod(text.substr(colon + 1, colon2 - colon - 1));
            int n = std::stoi(text.substr(colon2 + 1));
            if (n < 1) throw ConfigError(field, "grid count must be >= 1");
            if (n == 1) {
                grid.push_back(lo);
            } else {
                for (int i = 0; i < n; ++i)
                    grid.push_back(lo + (hi - lo) * static_cast<double>(i) / (n - 1));
            }
        } else {
            std::size_t pos = 0;
            while (pos < text.size()) {
                auto comma = text.find(',', pos);
                if (comma == std::string::npos) comma = text.size();
                grid.push_back(std::stod(text.substr(pos, comma - pos)));
                pos = comma + 1;
            }
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError(field, "cannot parse grid '" + text + "'");
    }
    if (grid.empty()) throw ConfigError(field, "empty grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0)) throw ConfigError(field, "grid values must be positive");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw ConfigError(field, "grid must be strictly increasing");
    }
    return grid;
}

BasketSpec resolve_spec(const CommonOptions& opt) {
    if (opt.spec_text.empty()) return BasketSpec::symmetric(2);
    return spec_from_file_or_inline(opt.spec_text);
}

void write_output(const CommonOptions& opt, const std::string& payload) {
    if (opt.out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) throw ConfigError("out", "cannot open " + opt.out_path);
    out << payload;
}

void check_format(const CommonOptions& opt) {
    if (opt.format != "csv" && opt.format != "json")
        throw ConfigError("format", "expected csv or json");
}

// ------------------------------------------------------------------ energy

int cmd_energy(const CommonOptions& opt) {
    BasketSpec spec = resolve_spec(opt);
    HamiltonianSystem sys{spec, DriftMode::zero};
    std::vector<double> ks = parse_grid(opt.k_grid.empty() ? "2.5:8:23" : opt.k_grid, "K");

    std::string csv = "K,lambda,n_minimizers,residual\n";
    json rows = json::array();
    for (double K : ks) {
        EnergySolution sol = solve_bvp(sys, K, opt.multistart, opt.tol);
        double residual = 0.0;
        for (const auto& c : sol.candidates) residual = std::max(residual, c.residual);
        csv += format_double(K) + "," + format_double(sol.lambda) + "," +
               std::to_string(sol.candidates.size()) + "," + format_double(residual) + "\n";
        json r;
        r["K"] = K;
        r["lambda"] = sol.lambda;
        r["n_minimizers"] = sol.candidates.size();
        r["residual"] = residual;
        rows.push_back(std::move(r));
    }
    write_output(opt, opt.format == "csv" ? csv : rows.dump(2) + "\n");
    return 0;
}

// ---------------------------------------------------------------- critical

int cmd_critical(const CommonOptions& opt) {
    BasketSpec spec = resolve_spec(opt);
    HamiltonianSystem sys{spec, DriftMode::zero};

    double b0 = spec.basket_spot();
    double lo = 1.2 * b0, hi = 4.0 * b0;
    std::vector<double> sweep;
    if (!opt.k_grid.empty()) {
        sweep = parse_grid(opt.k_grid, "K");
        if (sweep.size() >= 2) {
            lo = sweep.front();
            hi = sweep.back();
        }
    }
    if (sweep.size() < 2) {
        sweep.clear();
        for (int i = 0; i < 50; ++i) sweep.push_back(lo + (hi - lo) * i / 49.0);
    }

    double k_star = critical_strike(sys, lo, hi);

    std::string csv = "# K_star = " + format_double(k_star) + "\nK,det,normalized_det,verdict\n";
    json curve = json::array();
    for (double K : sweep) {
        MinimizerCandidate cand = spec.fully_symmetric()
                                      ? symmetric_closed_form(sys, K)
                                      : solve_bvp(sys, K, opt.multistart, opt.tol).candidates.front();
        FocalityReport rep = focality_matrix(sys, cand);
        csv += format_double(K) + "," + format_double(rep.det) + "," +
               format_double(rep.normalized_det) + "," + to_string(rep.verdict) + "\n";
        json r = focality_report_to_json(rep);
        r.erase("M");
        curve.push_back(std::move(r));
    }
    if (opt.format == "csv") {
        write_output(opt, csv);
    } else {
        json j;
        j["K_star"] = k_star;
        j["curve"] = std::move(curve);
        write_output(opt, j.dump(2) + "\n");
    }
    return 0;
}

// ----------------------------------------------------------------- density

int cmd_density(const CommonOptions& opt) {
    BasketSpec spec = resolve_spec(opt);
    HamiltonianSystem sys{spec, spec.rate() != 0.0 ? DriftMode::scaled_rate : DriftMode::zero};

    const bool small_noise = !opt.eps_grid.empty();
    if (small_noise && !opt.t_grid.empty())
        throw ConfigError("T", "give either --T (short time) or --eps (small noise), not both");
    std::vector<double> ks = parse_grid(opt.k_grid.empty() ? "3:5:9" : opt.k_grid, "K");
    std::vector<double> scales =
        parse_grid(small_noise ? opt.eps_grid : (opt.t_grid.empty() ? "0.1" : opt.t_grid),
                   small_noise ? "eps" : "T");

    std::string csv = "K,T_or_eps,lambda,c2,power,regime,f_asymptotic\n";
    json rows = json::array();
    for (double K : ks) {
        for (double s : scales) {
            ExpansionResult r = small_noise ? small_noise_density(sys, K, s)
                                            : short_time_density(sys, K, s);
            csv += format_double(K) + "," + format_double(s) + "," + format_double(r.lambda) +
                   "," + format_double(r.c2) + "," + format_double(r.power) + "," +
                   to_string(r.regime) + "," + format_double(r.f_value) + "\n";
            json jr = expansion_result_to_json(r);
            jr["K"] = K;
            jr[small_noise ? "eps" : "T"] = s;
            rows.push_back(std::move(jr));
        }
    }
    write_output(opt, opt.format == "csv" ? csv : rows.dump(2) + "\n");
    return 0;
}

// ---------------------------------------------------------------- validate

struct Check {
    std::string name;
    double observed;
    double target;
    double tolerance;
    bool pass;
};

int cmd_validate(const CommonOptions& opt) {
    BasketSpec spec = resolve_spec(opt);
    if (spec.d() != 2 || !spec.corr().isIdentity(1e-14))
        throw ConfigError("spec", "validate requires two uncorrelated assets");
    HamiltonianSystem sys{spec, DriftMode::zero};

    std::vector<Check> checks;

    // Exponent law: slope of log f against 1/T equals -Lambda(K). The slope
    // is polluted by the -log(T)/2 prefactor, so sample densely at small T.
    std::vector<double> ks = opt.k_grid.empty() ? std::vector<double>{3.0, 4.0, 4.8}
                                                : parse_grid(opt.k_grid, "K");
    for (double K : ks) {
        double lambda = solve_bvp(sys, K, opt.multistart, opt.tol).lambda;
        const int n = 10;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (int i = 0; i < n; ++i) {
            double x = 160.0 + 40.0 * i / (n - 1);
            double y = log_convolution_density(spec, K, 1.0 / x);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        double rel = std::abs(-slope - lambda) / lambda;
        checks.push_back({"exponent_slope_K=" + format_double(K), -slope, lambda,
                          0.02 * lambda, rel <= 0.02});
    }

    const bool unit = spec.fully_symmetric() && std::abs(spec.spots()[0] - 1.0) < 1e-14 &&
                      std::abs(spec.vols()[0] - 1.0) < 1e-14;
    if (unit) {
        // Power laws at the degenerate family and at a generic strike.
        const int n = 10;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (int i = 0; i < n; ++i) {
            double T = 0.002 * std::pow(10.0, static_cast<double>(i) / (n - 1));
            double Kd = 2.0 * std::exp(1.0 - 0.5 * T);
            double y = log_convolution_density(spec, Kd, T) + 1.0 / T;
            double x = std::log(T);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        double slope_deg = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        checks.push_back({"power_slope_degenerate", slope_deg, -0.75, 0.05,
                          std::abs(slope_deg + 0.75) <= 0.05});

        sx = sy = sxx = sxy = 0;
        double lam4 = std::log(2.0) * std::log(2.0);
        for (int i = 0; i < n; ++i) {
            double T = 0.002 * std::pow(10.0, static_cast<double>(i) / (n - 1));
            double y = log_convolution_density(spec, 4.0, T) + lam4 / T;
            double x = std::log(T);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        double slope_gen = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        checks.push_back({"power_slope_K=4", slope_gen, -0.50, 0.05,
                          std::abs(slope_gen + 0.50) <= 0.05});
    }

    // Monte Carlo vs quadrature coverage at 3 standard errors.
    {
        double T = opt.t_grid.empty() ? 0.5 : parse_grid(opt.t_grid, "T").front();
        Vector grid = Vector::LinSpaced(40, 0.6 * spec.basket_spot(), 2.1 * spec.basket_spot());
        DensityCurve mc = mc_density(spec, grid, T, opt.paths, opt.seed);
        int within = 0;
        for (Eigen::Index i = 0; i < grid.size(); ++i) {
            double ref = convolution_density(spec, grid[i], T);
            if (std::abs(mc.values[i] - ref) <= 3.0 * mc.stderrs[i]) ++within;
        }
        double coverage = static_cast<double>(within) / static_cast<double>(grid.size());
        checks.push_back({"mc_quadrature_coverage", coverage, 0.95, 0.0, coverage >= 0.95});
    }

    bool all_pass = true;
    std::string csv = "check,observed,target,pass\n";
    json rows = json::array();
    for (const Check& c : checks) {
        all_pass = all_pass && c.pass;
        csv += c.name + "," + format_double(c.observed) + "," + format_double(c.target) + "," +
               (c.pass ? "true" : "false") + "\n";
        json r;
        r["check"] = c.name;
        r["observed"] = c.observed;
        r["target"] = c.target;
        r["pass"] = c.pass;
        rows.push_back(std::move(r));
    }
    write_output(opt, opt.format == "csv" ? csv : rows.dump(2) + "\n");
    return all_pass ? 0 : 3;
}

// ---------------------------------------------------------------- geometry

int cmd_geometry(const CommonOptions& opt, double qmin, double qmax, int qn) {
    BasketSpec spec = resolve_spec(opt);
    if (spec.d() != 2)
        throw ConfigError("spec", "geometry sweep supports two-asset baskets");
    double K = parse_grid(opt.k_grid.empty() ? format_double(2.0 * M_E) : opt.k_grid, "K").front();

    // Keep q inside the chart domain of the surface.
    double q_bound = std::log(K / (spec.weights()[0] * spec.spots()[0])) / spec.vols()[0];
    if (qmax >= q_bound) qmax = q_bound - 1e-6;
    if (!(qmin < qmax)) throw ConfigError("qmin", "empty q range after clipping to the domain");

    std::string csv = "q,phi1,phi2,N1,N2,kappa,f1,f2\n";
    json rows = json::array();
    for (int i = 0; i < qn; ++i) {
        Vector q(1);
        q[0] = qmin + (qmax - qmin) * i / std::max(1, qn - 1);
        WeingartenResult w = weingarten(spec, K, q);
        std::vector<FocalPoint> fps = focal_points(spec, K, q);
        Vector x = strike_surface(spec, K, q);
        double f1 = std::numeric_limits<double>::quiet_NaN();
        double f2 = std::numeric_limits<double>::quiet_NaN();
        if (!fps.empty()) {
            f1 = fps.front().f[0];
            f2 = fps.front().f[1];
        }
        csv += format_double(q[0]) + "," + format_double(x[0]) + "," + format_double(x[1]) +
               "," + format_double(w.normal[0]) + "," + format_double(w.normal[1]) + "," +
               format_double(w.curvatures[0]) + "," + format_double(f1) + "," +
               format_double(f2) + "\n";
        json r;
        r["q"] = q[0];
        r["phi"] = {x[0], x[1]};
        r["N"] = {w.normal[0], w.normal[1]};
        r["kappa"] = w.curvatures[0];
        r["f"] = {f1, f2};
        rows.push_back(std::move(r));
    }
    write_output(opt, opt.format == "csv" ? csv : rows.dump(2) + "\n");
    return 0;
}

// ------------------------------------------------------------------- asian

int cmd_asian(const CommonOptions& opt, double s0, double sigma, int n, double dt) {
    BasketSpec spec = asian_to_basket(s0, sigma, n, dt);
    write_output(opt, spec_to_json(spec).dump(2) + "\n");
    return 0;
}

// ---------------------------------------------------------------------- mc

int cmd_mc(const CommonOptions& opt, double bandwidth) {
    BasketSpec spec = resolve_spec(opt);
    double T = opt.t_grid.empty() ? spec.maturity() : parse_grid(opt.t_grid, "T").front();
    Vector grid;
    if (opt.k_grid.empty()) {
        grid = Vector::LinSpaced(40, 0.5 * spec.basket_spot(), 2.5 * spec.basket_spot());
    } else {
        std::vector<double> ks = parse_grid(opt.k_grid, "K");
        grid = Eigen::Map<Vector>(ks.data(), static_cast<Eigen::Index>(ks.size()));
    }
    DensityCurve curve = mc_density(spec, grid, T, opt.paths, opt.seed, bandwidth);
    write_output(opt, opt.format == "csv" ? density_curve_to_csv(curve)
                                          : density_curve_to_json(curve).dump(2) + "\n");
    return 0;
}

void add_common(CLI::App* app, CommonOptions& opt) {
    app->add_option("--spec", opt.spec_text, "basket spec: JSON file path or inline JSON");
    app->add_option("--K", opt.k_grid, "strike grid: lo:hi:n or comma list");
    app->add_option("--T", opt.t_grid, "maturity grid: lo:hi:n or comma list");
    app->add_option("--eps", opt.eps_grid, "noise grid: lo:hi:n or comma list");
    app->add_option("--seed", opt.seed, "Monte Carlo seed");
    app->add_option("--out", opt.out_path, "output path (default: stdout)");
    app->add_option("--format", opt.format, "output format: csv or json");
    app->add_option("--tol", opt.tol, "solver tolerance");
    app->add_option("--paths", opt.paths, "Monte Carlo path count");
    app->add_option("--multistart", opt.multistart, "shooting multistart count");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Short-time and small-noise density asymptotics of Black-Scholes baskets"};
    app.require_subcommand(1);

    CommonOptions opt;
    double qmin = -3.0, qmax = 3.0, bandwidth = 0.0;
    int qn = 200;
    double asian_s0 = 1.0, asian_sigma = 0.2, asian_dt = 0.1;
    int asian_n = 4;

    CLI::App* energy = app.add_subcommand("energy", "Lambda(K) from the shooting BVP");
    add_common(energy, opt);
    CLI::App* critical = app.add_subcommand("critical", "critical strike and det-M curve");
    add_common(critical, opt);
    CLI::App* density = app.add_subcommand("density", "density expansion sweep");
    add_common(density, opt);
    CLI::App* validate = app.add_subcommand("validate", "asymptotics vs quadrature vs MC");
    add_common(validate, opt);
    CLI::App* geometry = app.add_subcommand("geometry", "strike-surface geometry sweep");
    add_common(geometry, opt);
    geometry->add_option("--qmin", qmin, "lower q bound");
    geometry->add_option("--qmax", qmax, "upper q bound");
    geometry->add_option("--qn", qn, "q sample count");
    CLI::App* asian = app.add_subcommand("asian", "emit the basket spec of a discrete Asian");
    add_common(asian, opt);
    asian->add_option("--S0", asian_s0, "spot");
    asian->add_option("--sigma", asian_sigma, "volatility");
    asian->add_option("--N", asian_n, "number of fixings");
    asian->add_option("--dt", asian_dt, "fixing interval");
    CLI::App* mc = app.add_subcommand("mc", "Monte Carlo density curve");
    add_common(mc, opt);
    mc->add_option("--bandwidth", bandwidth, "kernel bandwidth (<= 0: Silverman)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        check_format(opt);
        if (energy->parsed()) return cmd_energy(opt);
        if (critical->parsed()) return cmd_critical(opt);
        if (density->parsed()) return cmd_density(opt);
        if (validate->parsed()) return cmd_validate(opt);
        if (geometry->parsed()) return cmd_geometry(opt, qmin, qmax, qn);
        if (asian->parsed()) return cmd_asian(opt, asian_s0, asian_sigma, asian_n, asian_dt);
        if (mc->parsed()) return cmd_mc(opt, bandwidth);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
