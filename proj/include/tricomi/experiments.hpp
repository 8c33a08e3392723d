#pragma once

// Experiment runners behind the CLI. Every runner writes a manifest JSON
// (config, config hash, seed, outcome) plus experiment-specific CSV tables;
// numbers are printed with %.17g so identical configs reproduce identical
// bytes regardless of the thread count (all parallel reductions are
// fixed-order).

#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tricomi/dyadic.hpp"
#include "tricomi/exponents.hpp"
#include "tricomi/linear.hpp"
#include "tricomi/ode45.hpp"
#include "tricomi/propagator.hpp"
#include "tricomi/semilinear.hpp"
#include "tricomi/serialize.hpp"
#include "tricomi/svg.hpp"

namespace tricomi {

inline std::atomic<bool> g_interrupted{false};

struct ExperimentConfig {
    std::string experiment;
    int m = 1;
    int n = 2;
    double kappa = 3.0;
    int sign = -1;
    double mu = 4.0;
    int grid = 128;
    double box = 16.0;
    double T = 1.0;
    int steps = 100;
    double amp = 0.01;
    double width = 1.5;
    std::uint64_t seed = 1;
    std::string out = "out";

    nlohmann::json to_json() const {
        return {{"experiment", experiment}, {"m", m}, {"n", n}, {"kappa", kappa},
                {"sign", sign}, {"mu", mu}, {"grid", grid}, {"box", box}, {"T", T},
                {"steps", steps}, {"amp", amp}, {"width", width}, {"seed", seed}};
    }

    ProblemParams params() const {
        ProblemParams p;
        p.m = m; p.n = n; p.kappa = kappa; p.sign = sign;
        return p;
    }

    Grid make_grid(int nt_override = 0, double T_override = 0.0) const {
        Grid g;
        g.dim = std::min(n, 3);
        g.points = grid;
        g.extent = box;
        int nt = nt_override > 0 ? nt_override : steps + 1;
        double TT = T_override > 0.0 ? T_override : T;
        g.times.resize(nt);
        for (int i = 0; i < nt; ++i) g.times[i] = TT * i / (nt - 1);
        g.validate();
        return g;
    }
};

namespace detail_exp {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::uint64_t config_hash(const ExperimentConfig& cfg) {
    std::string s = cfg.to_json().dump();
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hash_hex(const ExperimentConfig& cfg) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, config_hash(cfg));
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& header, const std::string& hash)
        : out_(path) {
        out_ << "# config_hash=" << hash << "\n" << header << "\n";
        out_.flush();
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            out_ << cells[i] << (i + 1 < cells.size() ? "," : "");
        out_ << "\n";
        out_.flush();  // partial results survive interrupts
    }

private:
    std::ofstream out_;
};

inline void write_manifest(const ExperimentConfig& cfg, nlohmann::json result) {
    nlohmann::json man;
    man["config"] = cfg.to_json();
    man["config_hash"] = hash_hex(cfg);
    man["interrupted"] = g_interrupted.load();
    man["result"] = std::move(result);
    std::ofstream(std::filesystem::path(cfg.out) / (cfg.experiment + "_manifest.json"))
        << man.dump(2) << "\n";
}

inline DataFamily gaussian_family(double amp, double sigma, int dim) {
    DataFamily f;
    f.phi = [amp, sigma, dim](const double* x) {
        double r2 = 0.0;
        for (int d = 0; d < dim; ++d) r2 += x[d] * x[d];
        return amp * std::exp(-0.5 * r2 / (sigma * sigma));
    };
    return f;
}

} // namespace detail_exp

// ---------------------------------------------------------------------------

inline int run_exponents(const ExperimentConfig& cfg, const std::vector<double>& kappas) {
    namespace de = detail_exp;
    std::filesystem::create_directories(cfg.out);
    de::CsvWriter csv((std::filesystem::path(cfg.out) / "exponents.csv").string(),
                      "m,n,kappa,regime,gamma,s,q,r,p,mu,scaling_defect", de::hash_hex(cfg));
    nlohmann::json rows = nlohmann::json::array();
    for (double k : kappas) {
        ProblemParams p = cfg.params();
        p.kappa = k;
        Regime reg = classify_regime(p);
        std::string gamma = "", s = "", q = "", r = "", pe = "", defect = "";
        if (reg != Regime::BelowKnown) {
            auto t = theorem_tuple(p);
            gamma = de::fmt(t.gamma);
            s = de::fmt(t.s);
            q = de::fmt(t.q);
            r = de::fmt(t.r);
            pe = de::fmt(t.p);
            defect = de::fmt(scaling_defect(t, p));
        }
        csv.row({std::to_string(p.m), std::to_string(p.n), de::fmt(k), regime_name(reg), gamma, s,
                 q, r, pe, de::fmt(mu_star(p.m, p.n)), defect});
        rows.push_back({{"kappa", k}, {"regime", regime_name(reg)}});
    }
    de::write_manifest(cfg, {{"rows", rows.size()}});
    return 0;
}

inline int run_propagator_check(const ExperimentConfig& cfg) {
    namespace de = detail_exp;
    std::filesystem::create_directories(cfg.out);
    de::CsvWriter csv((std::filesystem::path(cfg.out) / "propagator_check.csv").string(),
                      "m,t,xi_mag,re_v0,im_v0,re_v1,im_v1,wronskian_err,oracle_err",
                      de::hash_hex(cfg));
    std::vector<double> times;
    for (double t = 0.0; t <= cfg.T * 2.0 + 1e-12; t += cfg.T / 10.0) times.push_back(t);
    double max_err = 0.0;
    for (double xi = 0.5; xi <= 64.0; xi *= 2.0) {
        auto rhs = [xi, m = cfg.m](double t, OdeState<4> y) -> OdeState<4> {
            double w = std::pow(t, m) * xi * xi;
            return {y[1], -w * y[0], y[3], -w * y[2]};
        };
        auto oracle = ode45<4>(rhs, 0.0, times.back(), {1.0, 0.0, 0.0, 1.0}, times, 1e-10, 1e-13);
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (g_interrupted) break;
            auto s = propagator(times[i], xi, cfg.m);
            double werr = std::abs(s.wronskian() - 1.0);
            double oerr = std::max(std::abs(s.v0 - oracle.y[i][0]) /
                                       std::max(1.0, std::abs(oracle.y[i][0])),
                                   std::abs(s.v1 - oracle.y[i][2]) /
                                       std::max(1.0, std::abs(oracle.y[i][2])));
            max_err = std::max(max_err, oerr);
            csv.row({std::to_string(cfg.m), de::fmt(times[i]), de::fmt(xi), de::fmt(s.v0.real()),
                     de::fmt(s.v0.imag()), de::fmt(s.v1.real()), de::fmt(s.v1.imag()),
                     de::fmt(werr), de::fmt(oerr)});
        }
    }
    de::write_manifest(cfg, {{"max_oracle_err", max_err}, {"pass", max_err <= 1e-7}});
    return max_err <= 1e-7 ? 0 : 3;
}

inline int run_linear_demo(const ExperimentConfig& cfg) {
    namespace de = detail_exp;
    std::filesystem::create_directories(cfg.out);
    Grid g = cfg.make_grid();
    ProblemParams par = cfg.params();
    // wrap check: bump support + cone must fit
    double phiT = phase_phi(g.times.back(), par.m);
    if (4.0 * cfg.width + phiT > 0.5 * g.extent)
        throw std::invalid_argument("linear-demo: box too small for data support + cone");

    auto fam = de::gaussian_family(cfg.amp, cfg.width, g.dim);
    auto [phi_hat, psi_hat] = sample_family(g, fam);
    LinearProblem prob;
    prob.params = par;
    prob.grid = &g;
    prob.phi_hat = phi_hat;
    prob.psi_hat = psi_hat;
    auto table = PropagatorTable::build(g, par.m);
    auto u = solve_homogeneous(prob, table);

    double res = residual(u, prob);
    std::vector<double> center(3, 0.5 * g.extent);
    auto cone = cone_containment(u, par, 4.0 * cfg.width, 1e-8, center);

    de::CsvWriter csv((std::filesystem::path(cfg.out) / "linear_norms.csv").string(),
                      "t,l2,sobolev_gamma", de::hash_hex(cfg));
    double gam = 1.0 / (par.m + 2);
    for (std::size_t ti = 0; ti < g.times.size(); ++ti)
        csv.row({de::fmt(g.times[ti]), de::fmt(sobolev_norm(u.slices[ti], 0.0)),
                 de::fmt(sobolev_norm(u.slices[ti], gam))});
    save_field((std::filesystem::path(cfg.out) / "linear_solution.tric").string(), u,
               {{"experiment", "linear-demo"}});
    de::write_manifest(cfg, {{"residual", res},
                             {"cone_pass", cone.pass},
                             {"cone_worst_leakage", cone.worst_leakage}});
    return 0;
}

inline int run_strichartz_probe(const ExperimentConfig& cfg) {
    namespace de = detail_exp;
    std::filesystem::create_directories(cfg.out);
    ProblemParams par = cfg.params();
    auto tup = theorem_tuple(par);
    Grid g = cfg.make_grid();
    // ladder capped where the narrowest bump still spans ~3 grid cells
    std::vector<double> scales;
    for (int i = 0; i < 8; ++i) {
        double w = cfg.width / std::ldexp(1.0, i);
        if (w < 3.0 * g.dx() && i > 0) break;
        scales.push_back(std::ldexp(1.0, i));
    }
    auto rep = homogeneous_probe(g, par, tup, scales, cfg.width);

    de::CsvWriter csv((std::filesystem::path(cfg.out) / "strichartz_ratios.csv").string(),
                      "scale,ratio", de::hash_hex(cfg));
    for (auto& row : rep.rows) csv.row({de::fmt(row.scale), de::fmt(row.ratio)});
    de::write_manifest(cfg, {{"max_over_min", rep.max_over_min},
                             {"monotone_increasing", rep.monotone_increasing},
                             {"s", tup.s},
                             {"q", tup.q},
                             {"gamma", tup.gamma}});
    return 0;
}

inline int run_uniformity_probe(const ExperimentConfig& cfg, int trials = 3) {
    namespace de = detail_exp;
    std::filesystem::create_directories(cfg.out);
    ProblemParams par = cfg.params();
    Grid g = cfg.make_grid();
    FioKernelSpec spec;
    spec.kind = FioKernelSpec::Kind::Synthetic;
    spec.m = cfg.m;
    spec.mu = cfg.mu;
    // critical Re alpha at p = 2
    spec.alpha = cplx{-cfg.m / (cfg.mu * (cfg.m + 2.0)) - 2.0 / (cfg.m + 2.0), 0.0};
    auto [jlo, jhi] = admissible_j_range(g);
    std::vector<int> j_list;
    for (int j = jlo; j <= jhi; ++j) j_list.push_back(j);
    auto rep = uniformity_probe(g, par, spec, j_list, trials, cfg.seed);

    de::CsvWriter csv((std::filesystem::path(cfg.out) / "uniformity.csv").string(),
                      "j,trial,ratio,exponent,spread", de::hash_hex(cfg));
    for (auto& row : rep.rows)
        csv.row({std::to_string(row.j), std::to_string(row.trial), de::fmt(row.ratio),
                 de::fmt(rep.exponent), de::fmt(rep.spread)});
    de::write_manifest(cfg, {{"spread", rep.spread},
                             {"slope", rep.slope},
                             {"seed", cfg.seed},
                             {"j_lo", j_list.front()},
                             {"j_hi", j_list.back()}});
    return 0;
}

inline int run_picard(const ExperimentConfig& cfg) {
    namespace de = detail_exp;
    std::filesystem::create_directories(cfg.out);
    ProblemParams par = cfg.params();
    Grid g = cfg.make_grid();
    auto fam = de::gaussian_family(cfg.amp, cfg.width, g.dim);
    auto [phi_hat, psi_hat] = sample_family(g, fam);
    PicardOptions opts;
    auto res = picard_solve(par, g, phi_hat, psi_hat, opts);

    de::CsvWriter csv((std::filesystem::path(cfg.out) / "picard_contraction.csv").string(),
                      "j,H,N,ratio", de::hash_hex(cfg));
    for (std::size_t j = 0; j < res.report.N.size(); ++j) {
        double ratio = j > 0 ? res.report.N[j] / res.report.N[j - 1] : 0.0;
        csv.row({std::to_string(j), de::fmt(res.report.H[j]), de::fmt(res.report.N[j]),
                 de::fmt(ratio)});
    }
    de::write_manifest(cfg, {{"converged", res.report.converged},
                             {"diverged", res.report.diverged},
                             {"final_residual", res.report.final_residual},
                             {"smallness", res.report.smallness},
                             {"epsilon0", res.report.epsilon0},
                             {"tol", opts.tol},
                             {"iterations", res.report.N.size() - 1}});
    return res.report.converged ? 0 : 3;
}

inline int run_lifespan_scaling(const ExperimentConfig& cfg) {
    namespace de = detail_exp;
    std::filesystem::create_directories(cfg.out);
    ProblemParams par = cfg.params();
    par.sign = +1;  // focusing for finite lifespan
    GridSpec spec;
    spec.dim = std::min(cfg.n, 3);
    spec.points = cfg.grid;
    spec.extent = cfg.box;
    spec.steps = cfg.steps;
    auto base = de::gaussian_family(cfg.amp, cfg.width, spec.dim);
    PicardOptions opts;
    opts.tol = 1e-7;
    opts.max_iter = 30;
    opts.compute_residual = false;

    double gamma_probe = gamma_super(par.m, par.n, par.kappa) - 0.3;  // supercritical
    de::CsvWriter csv((std::filesystem::path(cfg.out) / "lifespan_scaling.csv").string(),
                      "eps,T_eps,T_eps_over_eps,norm_ratio,predicted_norm_ratio",
                      de::hash_hex(cfg));
    nlohmann::json rows = nlohmann::json::array();
    Grid norm_grid = cfg.make_grid(2, cfg.T);
    for (double eps : {1.0, 0.5, 0.25}) {
        if (g_interrupted) break;
        auto fam = scaling_family(base, eps, par);
        auto r = lifespan_search(par, spec, fam, cfg.T * eps * 0.05, cfg.T * eps * 3.0, opts);
        double nr = family_norm_ratio(norm_grid, base, eps, par, gamma_probe);
        double pr = std::pow(eps, data_norm_scaling_exponent(par, gamma_probe));
        csv.row({de::fmt(eps), de::fmt(r.estimate), de::fmt(r.estimate / eps), de::fmt(nr),
                 de::fmt(pr)});
        rows.push_back({{"eps", eps}, {"T_eps", r.estimate}, {"ratio", r.estimate / eps}});
    }
    de::write_manifest(cfg, {{"rows", rows}});
    return 0;
}

// ---------------------------------------------------------------------------
// Plotting (CSV -> SVG)

inline int run_plot(const std::string& csv_path, const std::string& kind,
                    const std::string& out_path) {
    std::ifstream in(csv_path);
    if (!in) throw std::invalid_argument("plot: cannot open " + csv_path);
    std::string line;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::size_t pos = 0;
        while (true) {
            std::size_t c = line.find(',', pos);
            cells.push_back(line.substr(pos, c == std::string::npos ? c : c - pos));
            if (c == std::string::npos) break;
            pos = c + 1;
        }
        if (header.empty()) header = cells;
        else rows.push_back(cells);
    }

    auto col = [&](const std::string& name) -> int {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    };

    PlotSeries s;
    AxisKind xk = AxisKind::Linear, yk = AxisKind::Linear;
    std::string title = kind;
    if (kind == "contraction") {
        int jc = col("j"), nc = col("N");
        if (jc < 0 || nc < 0) throw std::invalid_argument("plot: CSV schema mismatch for " + kind);
        for (auto& r : rows) {
            double N = std::atof(r[nc].c_str());
            if (N <= 0.0) continue;
            s.x.push_back(std::atof(r[jc].c_str()));
            s.y.push_back(N);
        }
        yk = AxisKind::Log10;
        title = "Picard difference norms N_j (semilog)";
        s.label = "N_j";
    } else if (kind == "ratio-sweep") {
        int sc = col("scale"), rc = col("ratio");
        if (sc < 0 || rc < 0) throw std::invalid_argument("plot: CSV schema mismatch for " + kind);
        for (auto& r : rows) {
            s.x.push_back(std::atof(r[sc].c_str()));
            s.y.push_back(std::atof(r[rc].c_str()));
        }
        xk = AxisKind::Log2;
        yk = AxisKind::Log10;
        title = "Strichartz ratio across the dilation ladder (log-log)";
        s.label = "ratio";
    } else if (kind == "uniformity") {
        int jc = col("j"), rc = col("ratio");
        if (jc < 0 || rc < 0) throw std::invalid_argument("plot: CSV schema mismatch for " + kind);
        for (auto& r : rows) {
            s.x.push_back(std::atof(r[jc].c_str()));
            s.y.push_back(std::atof(r[rc].c_str()));
        }
        yk = AxisKind::Log10;
        title = "Shell-uniformity ratios R_j";
        s.label = "R_j";
    } else {
        throw std::invalid_argument("plot: unknown kind '" + kind +
                                    "' (contraction|ratio-sweep|uniformity)");
    }
    write_svg_plot(out_path, {s}, title, xk, yk);
    return 0;
}

} // namespace tricomi
