#pragma once

// Experiment harness: coefficient accuracy, runtime scaling and
// conditioning of the tree solver against the dense Vandermonde baselines,
// plus log-log power-law fits.

#include "pip/error.hpp"
#include "pip/instrument.hpp"
#include "pip/io.hpp"
#include "pip/monomials.hpp"
#include "pip/nodegen.hpp"
#include "pip/pipsolver.hpp"
#include "pip/polynomial.hpp"
#include "pip/vandermonde.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

namespace pip {

enum class ExperimentKind { accuracy, runtime, conditioning };
enum class Method { pip_solver, linsolve, inversion };

inline const char* to_string(Method m) {
    switch (m) {
    case Method::pip_solver: return "pip-solver";
    case Method::linsolve: return "linsolve";
    case Method::inversion: return "inversion";
    }
    return "?";
}

inline const char* to_string(ExperimentKind k) {
    switch (k) {
    case ExperimentKind::accuracy: return "accuracy";
    case ExperimentKind::runtime: return "runtime";
    case ExperimentKind::conditioning: return "conditioning";
    }
    return "?";
}

inline Method parse_method(const std::string& s) {
    if (s == "pip-solver" || s == "pip") return Method::pip_solver;
    if (s == "linsolve") return Method::linsolve;
    if (s == "inversion") return Method::inversion;
    throw ConfigurationError("unknown method '" + s + "' (expected pip-solver, linsolve or inversion)");
}

inline ExperimentKind parse_experiment(const std::string& s) {
    if (s == "accuracy") return ExperimentKind::accuracy;
    if (s == "runtime") return ExperimentKind::runtime;
    if (s == "conditioning") return ExperimentKind::conditioning;
    throw ConfigurationError("unknown experiment '" + s + "' (expected accuracy, runtime or conditioning)");
}

struct IntRange {
    int lo = 0;
    int hi = 0;
};

/// "A..B" or a single integer "A".
inline IntRange parse_range(const std::string& s) {
    auto to_int = [&](const std::string& t) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(t, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != t.size()) throw ConfigurationError("malformed range '" + s + "' (expected A..B)");
        return v;
    };
    const auto dots = s.find("..");
    IntRange r;
    if (dots == std::string::npos) r.lo = r.hi = to_int(s);
    else {
        r.lo = to_int(s.substr(0, dots));
        r.hi = to_int(s.substr(dots + 2));
    }
    if (r.lo > r.hi) throw ConfigurationError("empty range '" + s + "'");
    return r;
}

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::accuracy;
    IntRange dims{2, 8};
    IntRange degrees{3, 3};
    int reps = 10;
    std::uint64_t seed = 42;
    std::vector<Method> methods{Method::pip_solver, Method::linsolve, Method::inversion};
    NodeGenConfig geometry;

    void validate() const {
        if (reps < 1) throw ConfigurationError("repetitions must be >= 1");
        if (dims.lo < 1 || dims.lo > dims.hi) throw ConfigurationError("dimension range must be non-empty and >= 1");
        if (degrees.lo < 0 || degrees.lo > degrees.hi) throw ConfigurationError("degree range must be non-empty and >= 0");
        if (methods.empty()) throw ConfigurationError("at least one method is required");
    }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Independent generator for one (m, n, rep) cell of an experiment.
inline std::mt19937_64 substream(std::uint64_t seed, int m, int n, int rep) {
    std::uint64_t s = seed;
    std::uint64_t key = splitmix64(s);
    for (std::uint64_t part : {std::uint64_t(m), std::uint64_t(n), std::uint64_t(rep)}) {
        s = key ^ part;
        key = splitmix64(s);
    }
    return std::mt19937_64(key);
}

inline Vector uniform_vector(std::mt19937_64& rng, std::size_t n) {
    // Drawn from raw 53-bit integers so the sequence does not depend on the
    // standard library's distribution implementation.
    Vector v(n);
    for (auto& x : v) x = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
    return v;
}

inline void fnv1a(std::uint64_t& h, const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ull;
    }
}

/// Hash of the node coordinates and the value vector shared by all methods.
inline std::string checksum(const NodeSet& nodes, std::span<const double> values) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    fnv1a(h, nodes.raw().data(), nodes.raw().size() * sizeof(double));
    fnv1a(h, values.data(), values.size() * sizeof(double));
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct PointHash {
    std::size_t operator()(const std::vector<double>& p) const {
        std::uint64_t h = 0xCBF29CE484222325ull;
        fnv1a(h, p.data(), p.size() * sizeof(double));
        return static_cast<std::size_t>(h);
    }
};

/// Function defined only on a node set, by exact coordinate lookup.
class NodeTable {
public:
    NodeTable(const NodeSet& nodes, std::span<const double> values) {
        for (std::size_t i = 0; i < nodes.size(); ++i) table_.emplace(std::vector<double>(nodes[i].begin(), nodes[i].end()), values[i]);
    }
    double operator()(std::span<const double> p) const {
        auto it = table_.find(std::vector<double>(p.begin(), p.end()));
        if (it == table_.end()) throw std::logic_error("NodeTable: point outside the node set");
        return it->second;
    }

private:
    std::unordered_map<std::vector<double>, double, PointHash> table_;
};

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
    return e;
}

inline Vector solve_by_inversion(const DenseMatrix& V, std::span<const double> rhs) {
    const DenseMatrix inv = invert(V);
    detail::count_madds(static_cast<std::int64_t>(V.rows() * V.rows()));
    return inv.multiply(rhs);
}

/// Coefficients from one method on a fixed node set and value vector.
template <class F>
Vector run_method(Method method, F&& f, const Assembly& a, std::span<const double> values) {
    if (method == Method::pip_solver) {
        MultiPoly q = solve_on_assembly(f, a).with_degree_bound(a.n);
        return Vector(q.coefficients().begin(), q.coefficients().end());
    }
    const DenseMatrix V = build_vandermonde(a.nodes, a.m, a.n);
    if (method == Method::linsolve) return lu_solve(V, values).x;
    return solve_by_inversion(V, values);
}

inline std::string csv_real(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    return format_real17(v);
}

} // namespace detail

/// CSV: m,n,N,method,rep,coeff_error_inf,checksum
inline void experiment_accuracy(const ExperimentConfig& cfg, std::ostream& os) {
    cfg.validate();
    os << "m,n,N,method,rep,coeff_error_inf,checksum\n";
    for (int m = cfg.dims.lo; m <= cfg.dims.hi; ++m)
        for (int n = cfg.degrees.lo; n <= cfg.degrees.hi; ++n) {
            const std::size_t N = count_total(m, n);
            const Assembly a = assemble_generic(m, n, cfg.geometry);
            for (int rep = 0; rep < cfg.reps; ++rep) {
                auto rng = detail::substream(cfg.seed, m, n, rep);
                const Vector c = detail::uniform_vector(rng, N);
                const MultiPoly f(m, n, c);
                Vector values(N);
                for (std::size_t i = 0; i < N; ++i) values[i] = evaluate(f, a.nodes[i]);
                const detail::NodeTable table(a.nodes, values);
                const std::string sum = detail::checksum(a.nodes, values);
                for (Method method : cfg.methods) {
                    double err = std::numeric_limits<double>::infinity();
                    try {
                        err = detail::max_abs_diff(c, detail::run_method(method, table, a, values));
                    } catch (const SingularMatrixError&) {
                    } catch (const IllPosedGeometryError&) {
                    }
                    os << m << ',' << n << ',' << N << ',' << to_string(method) << ',' << rep << ',' << detail::csv_real(err)
                       << ',' << sum << '\n';
                }
            }
        }
}

/// CSV: m,n,N,method,rep,seconds,multiply_adds. Seconds cover node
/// generation plus the solve; seconds is the only non-deterministic column.
inline void experiment_runtime(const ExperimentConfig& cfg, std::ostream& os) {
    cfg.validate();
    os << "m,n,N,method,rep,seconds,multiply_adds\n";
    for (int m = cfg.dims.lo; m <= cfg.dims.hi; ++m)
        for (int n = cfg.degrees.lo; n <= cfg.degrees.hi; ++n) {
            const std::size_t N = count_total(m, n);
            NodeGenConfig geometry = cfg.geometry;
            geometry.check_distinct = false;
            const Assembly reference = assemble_generic(m, n, geometry);
            for (int rep = 0; rep < cfg.reps; ++rep) {
                auto rng = detail::substream(cfg.seed, m, n, rep);
                const Vector values = detail::uniform_vector(rng, N);
                const detail::NodeTable table(reference.nodes, values);
                for (Method method : cfg.methods) {
                    std::int64_t madds = 0;
                    bool failed = false;
                    const auto t0 = std::chrono::steady_clock::now();
                    {
                        ScopedTally tally;
                        try {
                            const Assembly a = assemble_generic(m, n, geometry);
                            (void)detail::run_method(method, table, a, values);
                        } catch (const SingularMatrixError&) {
                            failed = true;
                        } catch (const IllPosedGeometryError&) {
                            failed = true;
                        }
                        madds = tally.report().multiply_adds;
                    }
                    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                    os << m << ',' << n << ',' << N << ',' << to_string(method) << ',' << rep << ','
                       << (failed ? std::string("inf") : format_real17(secs)) << ',' << madds << '\n';
                }
            }
        }
}

/// CSV: m,n,N,cond_1,cond_2_or_blank,bound_Nsq,within_bound
inline void experiment_conditioning(const ExperimentConfig& cfg, std::ostream& os, const GenericityOptions& opt = {}) {
    cfg.validate();
    os << "m,n,N,cond_1,cond_2_or_blank,bound_Nsq,within_bound\n";
    for (int m = cfg.dims.lo; m <= cfg.dims.hi; ++m)
        for (int n = cfg.degrees.lo; n <= cfg.degrees.hi; ++n) {
            const std::size_t N = count_total(m, n);
            if (N > opt.cond1_limit) continue;
            const Assembly a = assemble_generic(m, n, cfg.geometry);
            const auto g = genericity_check(a.nodes, m, n, opt);
            const double bound = static_cast<double>(N) * static_cast<double>(N);
            os << m << ',' << n << ',' << N << ',' << detail::csv_real(g.cond_1) << ','
               << (std::isnan(g.cond_2) ? std::string() : detail::csv_real(g.cond_2)) << ',' << format_real17(bound) << ','
               << (g.cond_1 <= bound ? "true" : "false") << '\n';
        }
}

inline void run_experiment(const ExperimentConfig& cfg, std::ostream& os) {
    switch (cfg.kind) {
    case ExperimentKind::accuracy: experiment_accuracy(cfg, os); break;
    case ExperimentKind::runtime: experiment_runtime(cfg, os); break;
    case ExperimentKind::conditioning: experiment_conditioning(cfg, os); break;
    }
}

struct FitResult {
    double p = 0.0;
    double q = 0.0;
    double r_squared = 0.0;
};

/// Least squares of log y on log x: y ~ p x^q.
inline FitResult fit_power_law(const std::vector<std::pair<double, double>>& pts) {
    if (pts.size() < 3) throw ConfigurationError("fit_power_law: need at least 3 points");
    double sx = 0, sy = 0;
    for (auto [x, y] : pts) {
        if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
            throw ConfigurationError("fit_power_law: data must be positive and finite");
        sx += std::log(x);
        sy += std::log(y);
    }
    const double k = static_cast<double>(pts.size());
    const double mx = sx / k, my = sy / k;
    double sxx = 0, sxy = 0, syy = 0;
    for (auto [x, y] : pts) {
        const double dx = std::log(x) - mx, dy = std::log(y) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw ConfigurationError("fit_power_law: all x values are equal");
    FitResult r;
    r.q = sxy / sxx;
    r.p = std::exp(my - r.q * mx);
    const double sse = std::max(0.0, syy - r.q * sxy);
    r.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
    return r;
}

} // namespace pip
