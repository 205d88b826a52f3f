#pragma once

#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "strictlab/bounds.hpp"
#include "strictlab/manifest.hpp"
#include "strictlab/model.hpp"
#include "strictlab/observables.hpp"
#include "strictlab/oracle.hpp"
#include "strictlab/sampler.hpp"

namespace strictlab {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace runner {

// Exit codes: 0 success, 1 invalid input, 2 I/O failure, 3 resource cap.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitCap = 3;

struct Options {
    std::string manifest_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    int threads = 1;
};

// 17 significant digits: doubles round-trip exactly.
inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::ofstream open_output(const Options& opt, const std::string& name,
                                 const ExperimentManifest& manifest,
                                 std::uint64_t seed) {
    std::error_code ec;
    std::filesystem::create_directories(opt.out_dir, ec);
    const std::string path = opt.out_dir + "/" + name;
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    char head[96];
    std::snprintf(head, sizeof(head),
                  "# manifest_hash=%016" PRIx64 " seed=%" PRIu64 "\n",
                  manifest.hash(), seed);
    out << head;
    return out;
}

template <typename F>
void parallel_for(std::size_t n, int threads, F&& body) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int k = std::min<std::size_t>(threads, n);
    for (int t = 0; t < k; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                body(i);
        });
    }
    for (auto& th : pool) th.join();
}

inline std::uint64_t replica_seed(std::uint64_t base, std::size_t index) {
    return splitmix64(base + 0x9e3779b97f4a7c15ULL * (index + 1));
}

struct SummaryRow {
    double beta = 0.0;
    BinnedStats f_lt, f_mid, f_gt, m_abs, f_stagger;
    double energy_per_site = 0.0;
    double tau_int_max = 0.0;
    Phase phase = Phase::Undetermined;
    Acceptance acceptance;
};

inline SummaryRow summarize(double beta, const std::vector<ObservableRecord>& series,
                            const Acceptance& acc) {
    SummaryRow row;
    row.beta = beta;
    row.acceptance = acc;
    if (series.size() < 2) {
        if (series.size() == 1) {
            const auto& r = series.front();
            row.f_lt.mean = r.f_lt;
            row.f_mid.mean = r.f_mid;
            row.f_gt.mean = r.f_gt;
            row.m_abs.mean = std::fabs(r.m);
            row.f_stagger.mean = r.f_stagger;
            row.energy_per_site = r.energy_per_site;
        }
    } else {
        std::vector<double> lt, mid, gt, mabs, stag;
        double e = 0.0;
        for (const auto& r : series) {
            lt.push_back(r.f_lt);
            mid.push_back(r.f_mid);
            gt.push_back(r.f_gt);
            mabs.push_back(std::fabs(r.m));
            stag.push_back(r.f_stagger);
            e += r.energy_per_site;
        }
        row.f_lt = binned_stats(lt);
        row.f_mid = binned_stats(mid);
        row.f_gt = binned_stats(gt);
        row.m_abs = binned_stats(mabs);
        row.f_stagger = binned_stats(stag);
        row.energy_per_site = e / series.size();
        row.tau_int_max =
            std::max({row.f_lt.tau_int, row.f_mid.tau_int, row.f_gt.tau_int,
                      row.m_abs.tau_int, row.f_stagger.tau_int});
    }
    row.phase = classify_state(row.f_lt.mean, row.f_gt.mean);
    return row;
}

inline void write_summary_header(std::ofstream& out, bool with_direction) {
    out << "beta";
    if (with_direction) out << ",direction";
    out << ",f_lt,f_lt_err,f_mid,f_mid_err,f_gt,f_gt_err,m_abs,m_abs_err,"
           "f_stagger,f_stagger_err,energy_per_site,tau_int_max,phase,"
           "spin_accept,bond_accept\n";
}

inline void write_summary_row(std::ofstream& out, const SummaryRow& row,
                              const char* direction = nullptr) {
    out << fmt(row.beta);
    if (direction) out << ',' << direction;
    out << ',' << fmt(row.f_lt.mean) << ',' << fmt(row.f_lt.std_error) << ','
        << fmt(row.f_mid.mean) << ',' << fmt(row.f_mid.std_error) << ','
        << fmt(row.f_gt.mean) << ',' << fmt(row.f_gt.std_error) << ','
        << fmt(row.m_abs.mean) << ',' << fmt(row.m_abs.std_error) << ','
        << fmt(row.f_stagger.mean) << ',' << fmt(row.f_stagger.std_error) << ','
        << fmt(row.energy_per_site) << ',' << fmt(row.tau_int_max) << ','
        << phase_name(row.phase) << ',' << fmt(row.acceptance.spin_rate) << ','
        << fmt(row.acceptance.bond_rate) << '\n';
}

inline int cmd_simulate(const ExperimentManifest& manifest, const Options& opt) {
    const ModelParams params = manifest.build_params();
    const Lattice lattice(manifest.lattice_size());
    const SamplerConfig base_cfg = manifest.build_sampler(opt.seed);
    const std::vector<double> betas = manifest.betas();

    std::vector<RunResult> results(betas.size());
    parallel_for(betas.size(), opt.threads, [&](std::size_t i) {
        RunSpec spec;
        spec.beta = betas[i];
        spec.params = params;
        spec.lattice = lattice;
        spec.sampler = base_cfg;
        spec.sampler.seed = replica_seed(base_cfg.seed, i);
        results[i] = run(spec);
    });

    auto series_out = open_output(opt, "series.csv", manifest, base_cfg.seed);
    series_out << "beta,record,f_lt,f_mid,f_gt,m,f_stagger,energy_per_site\n";
    auto summary_out = open_output(opt, "summary.csv", manifest, base_cfg.seed);
    write_summary_header(summary_out, false);
    for (std::size_t i = 0; i < betas.size(); ++i) {
        const auto& res = results[i];
        for (std::size_t k = 0; k < res.series.size(); ++k) {
            const auto& r = res.series[k];
            series_out << fmt(betas[i]) << ',' << k << ',' << fmt(r.f_lt) << ','
                       << fmt(r.f_mid) << ',' << fmt(r.f_gt) << ',' << fmt(r.m)
                       << ',' << fmt(r.f_stagger) << ','
                       << fmt(r.energy_per_site) << '\n';
        }
        write_summary_row(summary_out,
                          summarize(betas[i], res.series,
                                    {res.spin_acceptance, res.bond_acceptance}));
    }
    return kExitOk;
}

inline int cmd_hysteresis(const ExperimentManifest& manifest, const Options& opt) {
    RunSpec spec;
    spec.params = manifest.build_params();
    spec.lattice = Lattice(manifest.lattice_size());
    spec.sampler = manifest.build_sampler(opt.seed);
    const std::vector<double> schedule = manifest.betas();
    spec.beta = schedule.front();

    const auto points = hysteresis_run(spec, schedule);

    auto series_out = open_output(opt, "series.csv", manifest, spec.sampler.seed);
    series_out << "beta,direction,record,f_lt,f_mid,f_gt,m,f_stagger,"
                  "energy_per_site\n";
    auto summary_out = open_output(opt, "summary.csv", manifest, spec.sampler.seed);
    write_summary_header(summary_out, true);
    for (const auto& pt : points) {
        const char* dir = pt.direction == RampDirection::Up ? "up" : "down";
        for (std::size_t k = 0; k < pt.series.size(); ++k) {
            const auto& r = pt.series[k];
            series_out << fmt(pt.beta) << ',' << dir << ',' << k << ','
                       << fmt(r.f_lt) << ',' << fmt(r.f_mid) << ',' << fmt(r.f_gt)
                       << ',' << fmt(r.m) << ',' << fmt(r.f_stagger) << ','
                       << fmt(r.energy_per_site) << '\n';
        }
        write_summary_row(summary_out, summarize(pt.beta, pt.series, pt.acceptance),
                          dir);
    }
    return kExitOk;
}

inline int cmd_bounds(const ExperimentManifest& manifest, const Options& opt) {
    const ModelParams params = manifest.build_params();
    const std::vector<double> betas = manifest.betas();
    const std::uint64_t seed = manifest.get_u64("seed", 1);

    auto out = open_output(opt, "bounds.csv", manifest, seed);
    out << "beta,p_gt_bound,cond_2_12,p_lt_bound,pair_low_t,pair_high_t,"
           "pair_bound,p0_bound,stagger_bound_a,stagger_bound_b,stagger_bound\n";
    for (double beta : betas) {
        const auto r = bounds::make_report(params, beta);
        out << fmt(r.beta) << ',' << fmt(r.p_gt_bound) << ','
            << (r.cond_2_12 ? 1 : 0) << ',' << fmt(r.p_lt_bound) << ','
            << fmt(r.pair_low_t) << ',' << fmt(r.pair_high_t) << ','
            << fmt(r.pair_bound) << ',' << fmt(r.p0_bound) << ','
            << fmt(r.stagger_bound_a) << ',' << fmt(r.stagger_bound_b) << ','
            << fmt(r.stagger_bound) << '\n';
    }

    auto regime = open_output(opt, "regime.txt", manifest, seed);
    if (manifest.is_preset()) {
        const auto rep = bounds::verify_regime(manifest.get_double("preset_R"),
                                               manifest.get_double("preset_delta"),
                                               betas);
        for (const auto& c : rep.checks)
            regime << (c.pass ? "PASS " : "FAIL ") << c.name
                   << " worst_margin=" << fmt(c.worst_margin) << '\n';
        regime << (rep.all_pass() ? "verdict: all pass\n"
                                  : "verdict: some checks fail\n");
    } else {
        regime << "verdict: regime chain is defined for preset parameters only\n";
    }
    return kExitOk;
}

inline int cmd_oracle(const ExperimentManifest& manifest, const Options& opt) {
    if (manifest.lattice_size() != 2)
        throw ManifestError("oracle requires L = 2");
    GridModel model;
    model.lattice = Lattice(2);
    model.params = manifest.build_params();
    const std::vector<double> betas = manifest.betas();
    const SamplerConfig cfg = manifest.build_sampler(opt.seed);
    const long g = manifest.get_count("grid_size", 4);

    auto out = open_output(opt, "oracle.csv", manifest, cfg.seed);
    out << "beta,Z,p_lt,p_mid,p_gt,m_abs,m_sq,pair_lt_gt,stagger,"
           "chessboard_gt_local,chessboard_gt_global,chessboard_gt_holds,"
           "chessboard_lt_local,chessboard_lt_global,chessboard_lt_holds\n";
    auto cmp_out = open_output(opt, "comparison.csv", manifest, cfg.seed);
    cmp_out << "beta,name,oracle,estimate,std_error,sigma,ok\n";

    for (std::size_t i = 0; i < betas.size(); ++i) {
        model.beta = betas[i];
        model.grid = manifest.has("grid") ? manifest.get_list("grid")
                                          : default_grid(model.params, model.beta,
                                                         static_cast<std::size_t>(g));
        const auto ex = exact_expectations(model);
        const auto cb = chessboard_check(model);
        out << fmt(model.beta) << ',' << fmt(ex.Z) << ',' << fmt(ex.p_lt) << ','
            << fmt(ex.p_mid) << ',' << fmt(ex.p_gt) << ',' << fmt(ex.m_abs) << ','
            << fmt(ex.m_sq) << ',' << fmt(ex.pair_lt_gt) << ',' << fmt(ex.stagger)
            << ',' << fmt(cb.local_gt) << ',' << fmt(cb.global_gt) << ','
            << (cb.gt_holds ? 1 : 0) << ',' << fmt(cb.local_lt) << ','
            << fmt(cb.global_lt) << ',' << (cb.lt_holds ? 1 : 0) << '\n';

        SamplerConfig rep_cfg = cfg;
        rep_cfg.seed = replica_seed(cfg.seed, i);
        const auto cmp = sampler_vs_oracle(model, rep_cfg);
        for (const auto& row : cmp.rows)
            cmp_out << fmt(model.beta) << ',' << row.name << ','
                    << fmt(row.oracle_value) << ',' << fmt(row.estimate) << ','
                    << fmt(row.std_error) << ',' << fmt(row.sigma) << ','
                    << (row.ok ? 1 : 0) << '\n';
    }
    return kExitOk;
}

inline int dispatch(const std::string& subcommand, const Options& opt) {
    try {
        const auto manifest = ExperimentManifest::parse_file(opt.manifest_path);
        if (subcommand == "simulate") return cmd_simulate(manifest, opt);
        if (subcommand == "hysteresis") return cmd_hysteresis(manifest, opt);
        if (subcommand == "bounds") return cmd_bounds(manifest, opt);
        if (subcommand == "oracle") return cmd_oracle(manifest, opt);
        std::fprintf(stderr, "unknown subcommand: %s\n", subcommand.c_str());
        return kExitInvalid;
    } catch (const ResourceCapError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitCap;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInvalid;
    }
}

}  // namespace runner
}  // namespace strictlab
