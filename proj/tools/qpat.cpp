// qpat: synthetic data generation, SQH reconstruction and figures of merit.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qpat/qpat.hpp"
#include "selftest.hpp"

namespace fs = std::filesystem;
using namespace qpat;

namespace {

struct CommonFlags {
    std::string config;
    std::optional<int> case_id;
    std::optional<double> noise;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config, "JSON run configuration");
    cmd->add_option("--case", f.case_id, "built-in test case (1..5)");
    cmd->add_option("--noise", f.noise, "relative noise level eta");
    cmd->add_option("--seed", f.seed, "noise seed");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--override", f.overrides, "dot-path assignment into the config, e.g. sqh.kappa=1e-4");
}

/// Layers, lowest first: `base`, the --config file, then the individual flags and overrides.
RunConfig load(const CommonFlags& f, json base = json::object()) {
    json patch = std::move(base);
    if (!f.config.empty()) patch.merge_patch(load_json_file(f.config));
    if (f.case_id) patch["case_id"] = *f.case_id;
    if (f.noise) patch["noise"]["eta"] = *f.noise;
    if (f.seed) patch["noise"]["seed"] = *f.seed;
    if (!f.out.empty()) patch["paths"]["out"] = f.out;
    for (const std::string& o : f.overrides) apply_override(patch, o);
    return resolve_config(patch);
}

/// Case, noise and problem settings recorded by `generate`, so reconstruct picks matching defaults.
json generation_settings(const fs::path& data) {
    const fs::path sidecar = data / "generate.json";
    if (!fs::exists(sidecar)) return json::object();
    const json cfg = load_json_file(sidecar).at("config");
    return json{{"case_id", cfg.at("case_id")}, {"noise", cfg.at("noise")}, {"problem", cfg.at("problem")}};
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ExitCode::missing_input, "cannot open " + path.string() + " for writing");
    os << text;
}

fs::path prepare_out(const RunConfig& cfg) {
    fs::path out(cfg.paths.out);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw Error(ExitCode::missing_input, "cannot create output directory " + out.string());
    return out;
}

/// Snapshot without paths so that runs in different directories stay byte-identical.
std::string snapshot(const RunConfig& cfg) {
    json doc = to_json(cfg);
    doc.erase("paths");
    return doc.dump(2) + "\n";
}

std::pair<double, double> range_of(const ScalarField& a, const ScalarField* b) {
    auto [lo, hi] = std::minmax_element(a.values().begin(), a.values().end());
    double l = *lo, h = *hi;
    if (b) {
        auto [lo2, hi2] = std::minmax_element(b->values().begin(), b->values().end());
        l = std::min(l, *lo2);
        h = std::max(h, *hi2);
    }
    if (!(h > l)) h = l + 1.0;
    return {l, h};
}

void write_preview(const ScalarField& f, const ScalarField* reference, const fs::path& path) {
    const auto [lo, hi] = range_of(f, reference);
    write_pgm(f, path, lo, hi);
}

int cmd_generate(const CommonFlags& flags) {
    const RunConfig cfg = load(flags);
    const fs::path out = prepare_out(cfg);
    const SyntheticCase sc = synthesize(cfg);

    write_qgrid(sc.exact.D, out / "D_exact.qgrid");
    write_qgrid(sc.exact.sigma, out / "sigma_exact.qgrid");
    write_qgrid(sc.data[0], out / "G1.qgrid");
    write_qgrid(sc.data[1], out / "G2.qgrid");
    write_preview(sc.exact.D, nullptr, out / "D_exact.pgm");
    write_preview(sigma_a_of(sc.exact.sigma, sc.exact.sigma_b), nullptr, out / "sigma_a_exact.pgm");

    json sidecar = {
        {"kind", "qpat-generate"},
        {"case", cfg.case_id},
        {"fineN", cfg.problem.N_fine},
        {"coarseN", cfg.problem.N_coarse},
        {"eta", cfg.noise.eta},
        {"seed", cfg.noise.seed},
        {"constants",
         {{"Gamma", cfg.problem.constants.Gamma}, {"sigma_b", cfg.problem.constants.sigma_b},
          {"c", cfg.problem.constants.c}, {"sigma_eps", cfg.problem.constants.sigma_eps}}},
        {"files", {"D_exact.qgrid", "sigma_exact.qgrid", "G1.qgrid", "G2.qgrid"}},
        {"sigma_exact_meaning", "deviation sigma = sigma_a - sigma_b"},
        {"illumination", {"exp(x)", "exp(y)"}},
        {"noise_applied", "before restriction to the coarse grid"},
        {"config", json::parse(snapshot(cfg))},
    };
    write_text(out / "generate.json", sidecar.dump(2) + "\n");
    std::cout << "case " << cfg.case_id << ": wrote data for N=" << cfg.problem.N_coarse << " (fine N="
              << cfg.problem.N_fine << ", eta=" << cfg.noise.eta << ") to " << out.string() << "\n";
    return 0;
}

int cmd_reconstruct(const CommonFlags& flags, const std::string& data_dir) {
    json base = generation_settings(data_dir);
    base["paths"]["data"] = data_dir;
    const RunConfig cfg = load(flags, std::move(base));
    const fs::path data(cfg.paths.data);
    std::array<ScalarField, 2> G{read_qgrid(data / "G1.qgrid"), read_qgrid(data / "G2.qgrid")};
    const ReducedProblem rp = reduced_problem(cfg, std::move(G));
    const fs::path out = prepare_out(cfg);

    const ReconstructionResult r = reconstruct(cfg, rp);
    write_qgrid(r.D_star, out / "D_rec.qgrid");
    write_qgrid(r.sigma_a_star, out / "sigma_a_rec.qgrid");
    write_text(out / "history.csv", history_csv(r.history));
    write_text(out / "config.json", snapshot(cfg));

    std::optional<Phantom> exact;
    if (fs::exists(data / "D_exact.qgrid") && fs::exists(data / "sigma_exact.qgrid")) {
        exact = Phantom{read_qgrid(data / "D_exact.qgrid"), read_qgrid(data / "sigma_exact.qgrid"),
                        cfg.problem.constants.sigma_b};
        require_conformable(exact->D, r.D_star, "metrics");
        require_conformable(exact->sigma, r.D_star, "metrics");
    }
    const ScalarField sa_exact = exact ? sigma_a_of(exact->sigma, exact->sigma_b) : r.sigma_a_star;
    write_preview(r.D_star, exact ? &exact->D : nullptr, out / "D_rec.pgm");
    write_preview(r.sigma_a_star, exact ? &sa_exact : nullptr, out / "sigma_a_rec.pgm");

    json summary = {{"termination", to_string(r.termination)},
                    {"accepted_steps", r.accepted_steps},
                    {"max_consecutive_rejections", r.max_consecutive_rejections},
                    {"J0", r.J0},
                    {"J_final", r.J_final},
                    {"J_strictly_decreasing", accepted_J_strictly_decreasing(r.J0, r.history)}};
    if (exact) {
        const MeritReport m = evaluate(cfg, r, *exact);
        write_text(out / "metrics.csv", metrics_csv_header() + metrics_csv_row(m));
        std::cout << metrics_table({m});
    } else {
        std::cerr << "note: no exact phantom in " << data.string() << ", metrics.csv not written\n";
    }
    write_text(out / "summary.json", summary.dump(2) + "\n");
    std::cout << "termination=" << to_string(r.termination) << " accepted=" << r.accepted_steps
              << " J0=" << format_double(r.J0) << " J=" << format_double(r.J_final) << "\n";
    return r.termination == Termination::eps_overflow ? static_cast<int>(ExitCode::numerical) : 0;
}

struct MetricsFlags {
    std::vector<std::string> dirs;
    std::string D_exact, sigma_a_exact, D_rec, sigma_a_rec;
    int case_id = 0;
    double noise = 0.0;
    std::string csv;
};

MeritReport metrics_for_dir(const fs::path& dir) {
    const json cfg = load_json_file(dir / "config.json");
    const double sigma_b = cfg.at("problem").at("sigma_b").get<double>();
    const ScalarField D_ex = read_qgrid(dir / "D_exact.qgrid");
    const ScalarField sa_ex = sigma_a_of(read_qgrid(dir / "sigma_exact.qgrid"), sigma_b);
    const ScalarField D_rec = read_qgrid(dir / "D_rec.qgrid");
    const ScalarField sa_rec = read_qgrid(dir / "sigma_a_rec.qgrid");
    return report(cfg.at("case_id").get<int>(), cfg.at("noise").at("eta").get<double>(), D_rec, sa_rec, D_ex, sa_ex);
}

int cmd_metrics(const MetricsFlags& f) {
    std::vector<MeritReport> rows;
    for (const std::string& d : f.dirs) rows.push_back(metrics_for_dir(d));
    const bool explicit_files = !f.D_exact.empty() || !f.sigma_a_exact.empty() || !f.D_rec.empty() ||
                                !f.sigma_a_rec.empty();
    if (explicit_files) {
        if (f.D_exact.empty() || f.sigma_a_exact.empty() || f.D_rec.empty() || f.sigma_a_rec.empty())
            throw ConfigError("metrics: --D-exact, --sigma-a-exact, --D-rec and --sigma-a-rec go together");
        rows.push_back(report(f.case_id, f.noise, read_qgrid(f.D_rec), read_qgrid(f.sigma_a_rec),
                              read_qgrid(f.D_exact), read_qgrid(f.sigma_a_exact)));
    }
    if (rows.empty()) throw ConfigError("metrics: give --dir or the four field files");

    std::string csv = metrics_csv_header();
    for (const MeritReport& r : rows) csv += metrics_csv_row(r);
    if (f.csv.empty()) {
        std::cout << csv;
    } else {
        write_text(f.csv, csv);
    }
    std::cout << metrics_table(rows);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantitative photoacoustic reconstruction with the sequential quadratic Hamiltonian method"};
    app.require_subcommand(1);

    CommonFlags gen_flags, rec_flags;
    std::string data_dir;
    MetricsFlags met;

    CLI::App* gen = app.add_subcommand("generate", "build a phantom and its interior data");
    add_common(gen, gen_flags);

    CLI::App* rec = app.add_subcommand("reconstruct", "run SQH on G1/G2 and write the reconstruction");
    add_common(rec, rec_flags);
    rec->add_option("--data", data_dir, "directory with G1.qgrid/G2.qgrid (default: --out)");

    CLI::App* metrics = app.add_subcommand("metrics", "RMSE% and PSNR of reconstructions");
    metrics->add_option("--dir", met.dirs, "reconstruction directory (repeatable)");
    metrics->add_option("--D-exact", met.D_exact);
    metrics->add_option("--sigma-a-exact", met.sigma_a_exact);
    metrics->add_option("--D-rec", met.D_rec);
    metrics->add_option("--sigma-a-rec", met.sigma_a_rec);
    metrics->add_option("--case", met.case_id, "label for the explicit-file row");
    metrics->add_option("--noise", met.noise, "label for the explicit-file row");
    metrics->add_option("--csv", met.csv, "write CSV here instead of stdout");

    CLI::App* self = app.add_subcommand("selftest", "run the built-in invariant checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(ExitCode::config);
    }

    try {
        if (*gen) return cmd_generate(gen_flags);
        if (*rec) {
            if (data_dir.empty()) data_dir = rec_flags.out.empty() ? "." : rec_flags.out;
            return cmd_reconstruct(rec_flags, data_dir);
        }
        if (*metrics) return cmd_metrics(met);
        if (*self) return run_selftest(std::cout) ? 0 : static_cast<int>(ExitCode::numerical);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.code());
    } catch (const ContractError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::config);
    } catch (const json::exception& e) {
        std::cerr << "error: malformed JSON: " << e.what() << "\n";
        return static_cast<int>(ExitCode::config);
    }
    return 0;
}
