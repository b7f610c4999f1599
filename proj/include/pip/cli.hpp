#pragma once

// Command-line front end: nodes, solve, verify, bench, fit.
// Exit codes: 0 success, 1 usage or input-format error, 2 numerical or
// configuration failure.

#include "pip/bench.hpp"
#include "pip/error.hpp"
#include "pip/io.hpp"
#include "pip/pipsolver.hpp"
#include "pip/vandermonde.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace pip::cli {

struct GeometryFlags {
    std::string lambda = "2";
    double kappa = 1.0;
    std::string mu;
    bool rescale = false;

    void add_to(CLI::App* app) {
        app->add_option("--lambda", lambda, "hyperplane offset base (rational > 1, e.g. 2 or 21/20)")->capture_default_str();
        app->add_option("--kappa", kappa, "Chebyshev spread on line leaves")->capture_default_str();
        app->add_option("--mu", mu, "global translation, comma-separated m reals");
        app->add_flag("--rescale", rescale, "map the node bounding box onto [-1,1]^m");
    }

    NodeGenConfig config(int m) const {
        NodeGenConfig cfg;
        try {
            cfg.lambda = parse_rational(lambda);
        } catch (const std::exception&) {
            throw CLI::ValidationError("--lambda", "expected a rational number, got '" + lambda + "'");
        }
        cfg.kappa = kappa;
        cfg.rescale = rescale;
        if (!mu.empty()) {
            std::stringstream ss(mu);
            std::string cell;
            while (std::getline(ss, cell, ',')) {
                try {
                    cfg.mu.push_back(std::stod(cell));
                } catch (const std::exception&) {
                    throw CLI::ValidationError("--mu", "expected comma-separated reals, got '" + mu + "'");
                }
            }
            if (m > 0 && static_cast<int>(cfg.mu.size()) != m)
                throw CLI::ValidationError("--mu", "needs " + std::to_string(m) + " components");
        }
        return cfg;
    }
};

/// Output stream for -o/--output, stdout when empty or "-".
class OutputTarget {
public:
    explicit OutputTarget(const std::string& path, std::ostream& fallback) : out_(&fallback) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw FormatError("cannot open '" + path + "' for writing");
            out_ = file_.get();
        }
    }
    std::ostream& operator*() { return *out_; }

private:
    std::ostream* out_;
    std::unique_ptr<std::ofstream> file_;
};

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "'");
    return in;
}

using Builtin = std::function<double(std::span<const double>)>;

inline Builtin make_builtin(const std::string& name, int m, int n, std::uint64_t seed, std::ostream& err) {
    if (name == "runge")
        return [](std::span<const double> x) { return 1.0 / (1.0 + 25.0 * dot(x, x)); };
    if (name == "exp-sum")
        return [](std::span<const double> x) {
            double s = 0.0;
            for (double v : x) s += v;
            return std::exp(s);
        };
    if (name == "random-poly") {
        err << "seed: " << seed << '\n';
        auto rng = detail::substream(seed, m, n, 0);
        auto f = std::make_shared<MultiPoly>(m, n, detail::uniform_vector(rng, count_total(m, n)));
        return [f](std::span<const double> x) { return evaluate(*f, x); };
    }
    throw CLI::ValidationError("--builtin", "unknown builtin '" + name + "' (runge, exp-sum, random-poly)");
}

/// Reads a CSV with a header row into named columns.
inline std::map<std::string, std::vector<std::string>> read_csv_columns(std::istream& in, std::vector<std::string>& order) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("csv line 1: missing header");
    order = detail::split_csv(line);
    std::map<std::string, std::vector<std::string>> cols;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = detail::split_csv(line);
        if (cells.size() != order.size())
            throw FormatError("csv line " + std::to_string(lineno) + ": expected " + std::to_string(order.size()) + " fields");
        for (std::size_t k = 0; k < cells.size(); ++k) cols[order[k]].push_back(cells[k]);
    }
    return cols;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Multivariate polynomial interpolation on generic node sets"};
    app.require_subcommand(1);

    // nodes
    auto* nodes_cmd = app.add_subcommand("nodes", "emit the generic node set for (m, n)");
    int nodes_m = 0, nodes_n = 0;
    std::uint64_t nodes_seed = 0;
    bool random_frame = false;
    std::string nodes_out;
    GeometryFlags nodes_geo;
    nodes_cmd->add_option("--m", nodes_m, "dimension")->required()->check(CLI::PositiveNumber);
    nodes_cmd->add_option("--n", nodes_n, "degree")->required()->check(CLI::NonNegativeNumber);
    nodes_cmd->add_option("--seed", nodes_seed, "seed for --random-frame")->capture_default_str();
    nodes_cmd->add_flag("--random-frame", random_frame, "use a random orthonormal frame drawn from --seed");
    nodes_cmd->add_option("-o,--output", nodes_out, "node file (stdout when omitted)");
    nodes_geo.add_to(nodes_cmd);

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "interpolate a polynomial file or a builtin function");
    std::string poly_file, builtin, solve_out, solve_nodes_out;
    int solve_m = 0, solve_n = -1;
    std::uint64_t solve_seed = 42;
    GeometryFlags solve_geo;
    auto* poly_opt = solve_cmd->add_option("--poly", poly_file, "polynomial file");
    auto* builtin_opt = solve_cmd->add_option("--builtin", builtin, "runge | exp-sum | random-poly");
    poly_opt->excludes(builtin_opt);
    solve_cmd->add_option("--m", solve_m, "dimension (builtins)")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--n", solve_n, "degree (defaults to the file's degree)")->check(CLI::NonNegativeNumber);
    solve_cmd->add_option("--seed", solve_seed, "seed for random-poly")->capture_default_str();
    solve_cmd->add_option("-o,--output", solve_out, "result document (stdout when omitted)");
    solve_cmd->add_option("--nodes-out", solve_nodes_out, "also write the node file here");
    solve_geo.add_to(solve_cmd);

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "genericity report for a node file");
    std::string verify_in, verify_out;
    verify_cmd->add_option("input", verify_in, "node file")->required();
    verify_cmd->add_option("-o,--output", verify_out, "report (stdout when omitted)");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "run an experiment and write CSV");
    std::string experiment = "accuracy", dims = "2..8", degree = "3", bench_out;
    int reps = 10;
    std::uint64_t bench_seed = 42;
    std::vector<std::string> methods;
    GeometryFlags bench_geo;
    bench_cmd->add_option("--experiment", experiment, "accuracy | runtime | conditioning")->capture_default_str();
    bench_cmd->add_option("--dims", dims, "dimension range A..B")->capture_default_str();
    bench_cmd->add_option("--degree", degree, "degree or degree range A..B")->capture_default_str();
    bench_cmd->add_option("--reps", reps, "repetitions")->capture_default_str()->check(CLI::PositiveNumber);
    bench_cmd->add_option("--seed", bench_seed, "master seed")->capture_default_str();
    bench_cmd->add_option("--method", methods, "pip-solver | linsolve | inversion (repeatable; all when omitted)");
    bench_cmd->add_option("-o,--output", bench_out, "CSV file (stdout when omitted)");
    bench_geo.add_to(bench_cmd);

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "fit y = p x^q per group of a benchmark CSV");
    std::string fit_in, fit_x = "N", fit_y = "multiply_adds", fit_group = "method", fit_out;
    fit_cmd->add_option("input", fit_in, "CSV file")->required();
    fit_cmd->add_option("--x", fit_x, "x column")->capture_default_str();
    fit_cmd->add_option("--y", fit_y, "y column")->capture_default_str();
    fit_cmd->add_option("--group", fit_group, "grouping column (empty for none)")->capture_default_str();
    fit_cmd->add_option("-o,--output", fit_out, "output (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*nodes_cmd) {
            NodeGenConfig cfg = nodes_geo.config(nodes_m);
            if (random_frame) {
                err << "seed: " << nodes_seed << '\n';
                std::mt19937_64 rng(nodes_seed);
                cfg.frame = Frame::random(nodes_m, rng);
            }
            const Assembly a = assemble_generic(nodes_m, nodes_n, cfg);
            OutputTarget o(nodes_out, out);
            write_nodes(*o, a.nodes, nodes_n);
        } else if (*solve_cmd) {
            std::optional<MultiPoly> file_poly;
            Builtin f;
            int m = solve_m, n = solve_n;
            if (!poly_file.empty()) {
                auto in = open_input(poly_file);
                file_poly = read_polynomial(in);
                m = file_poly->dimension();
                if (n < 0) n = file_poly->degree_bound();
                f = [&](std::span<const double> x) { return evaluate(*file_poly, x); };
            } else if (!builtin.empty()) {
                if (m < 1 || n < 0) throw CLI::ValidationError("solve", "builtins need --m and --n");
                f = make_builtin(builtin, m, n, solve_seed, err);
            } else {
                throw CLI::ValidationError("solve", "one of --poly or --builtin is required");
            }
            SolverConfig cfg;
            static_cast<NodeGenConfig&>(cfg) = solve_geo.config(m);
            const SolveResult res = solve(f, m, n, cfg);
            if (!solve_nodes_out.empty()) {
                OutputTarget nf(solve_nodes_out, out);
                write_nodes(*nf, res.nodes, n);
            }
            OutputTarget o(solve_out, out);
            write_result(*o, res, solve_nodes_out);
        } else if (*verify_cmd) {
            auto in = open_input(verify_in);
            const NodeFile nf = read_nodes(in);
            if (nf.nodes.size() != count_total(nf.m, nf.n))
                throw FormatError("node file holds " + std::to_string(nf.nodes.size()) + " nodes; (m,n) = (" +
                                  std::to_string(nf.m) + "," + std::to_string(nf.n) + ") needs " +
                                  std::to_string(count_total(nf.m, nf.n)));
            const GenericityReport g = genericity_check(nf.nodes, nf.m, nf.n);
            auto real_or_null = [](double v) -> nlohmann::ordered_json {
                if (std::isnan(v)) return nullptr;
                if (std::isinf(v)) return "inf";
                return v;
            };
            nlohmann::ordered_json j;
            j["status"] = g.generic ? "generic" : "non-generic";
            j["m"] = nf.m;
            j["n"] = nf.n;
            j["count"] = nf.nodes.size();
            j["generic"] = g.generic;
            j["abs_det_log"] = real_or_null(g.abs_det_log);
            j["min_pivot_ratio"] = g.min_pivot_ratio;
            j["cond_1"] = real_or_null(g.cond_1);
            j["cond_2"] = real_or_null(g.cond_2);
            OutputTarget o(verify_out, out);
            *o << j.dump(2) << '\n';
        } else if (*bench_cmd) {
            ExperimentConfig cfg;
            try {
                cfg.kind = parse_experiment(experiment);
                cfg.dims = parse_range(dims);
                cfg.degrees = parse_range(degree);
                if (!methods.empty()) {
                    cfg.methods.clear();
                    for (const auto& s : methods) cfg.methods.push_back(parse_method(s));
                }
            } catch (const ConfigurationError& e) {
                throw CLI::ValidationError("bench", e.what());
            }
            cfg.reps = reps;
            cfg.seed = bench_seed;
            cfg.geometry = bench_geo.config(bench_geo.mu.empty() ? 0 : cfg.dims.lo);
            if (!cfg.geometry.mu.empty() && cfg.dims.lo != cfg.dims.hi)
                throw CLI::ValidationError("--mu", "a translation needs a single dimension (--dims A..A)");
            err << "seed: " << cfg.seed << '\n';
            OutputTarget o(bench_out, out);
            run_experiment(cfg, *o);
        } else if (*fit_cmd) {
            auto in = open_input(fit_in);
            std::vector<std::string> header;
            auto cols = read_csv_columns(in, header);
            for (const auto* name : {&fit_x, &fit_y})
                if (!cols.count(*name) && std::find(header.begin(), header.end(), *name) == header.end())
                    throw FormatError("csv: no column named '" + *name + "'");
            if (!fit_group.empty() && std::find(header.begin(), header.end(), fit_group) == header.end())
                throw FormatError("csv: no column named '" + fit_group + "'");
            std::map<std::string, std::vector<std::pair<double, double>>> groups;
            const auto& xs = cols[fit_x];
            const auto& ys = cols[fit_y];
            for (std::size_t i = 0; i < xs.size(); ++i) {
                double x = 0, y = 0;
                try {
                    x = std::stod(xs[i]);
                    y = std::stod(ys[i]);
                } catch (const std::exception&) {
                    throw FormatError("csv line " + std::to_string(i + 2) + ": non-numeric value in '" + fit_x + "' or '" + fit_y + "'");
                }
                if (!std::isfinite(x) || !std::isfinite(y) || x <= 0 || y <= 0) continue;
                groups[fit_group.empty() ? std::string() : cols[fit_group][i]].emplace_back(x, y);
            }
            OutputTarget o(fit_out, out);
            for (const auto& [name, pts] : groups) {
                const FitResult r = fit_power_law(pts);
                nlohmann::ordered_json j;
                if (!fit_group.empty()) j[fit_group] = name;
                j["x"] = fit_x;
                j["y"] = fit_y;
                j["points"] = pts.size();
                j["p"] = r.p;
                j["q"] = r.q;
                j["r_squared"] = r.r_squared;
                *o << j.dump() << '\n';
            }
        }
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const DimensionError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

} // namespace pip::cli
