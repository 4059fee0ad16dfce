#pragma once

#include "sspop/config.hpp"
#include "sspop/experiments.hpp"
#include "sspop/output.hpp"
#include "sspop/presets.hpp"
#include "sspop/schemes.hpp"

#include <filesystem>
#include <functional>
#include <string>
#include <system_error>
#include <vector>

namespace sspop {

/// Runs the configured command and writes its CSV files plus manifest.json into
/// cfg.output_dir (created if missing). Returns the file names written, in order.
inline std::vector<std::string> execute(const RunConfig& cfg,
                                        const std::function<void(const std::string&)>& on_warning = {}) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec || !fs::is_directory(cfg.output_dir))
        throw IoError("cannot create output directory '" + cfg.output_dir.string() + "'");

    std::vector<std::string> written;
    auto emit = [&](const std::string& name, const CsvTable& table) {
        table.write(cfg.output_dir / name);
        written.push_back(name);
    };

    ExperimentOptions xo;
    xo.cfl_policy = cfg.flags.cfl_policy;
    xo.on_warning = on_warning;
    const ExperimentParams& e = cfg.experiment;

    switch (cfg.command) {
    case Command::solve: {
        const Mesh& mesh = *cfg.mesh;
        SolveOptions so;
        so.cfl_policy = cfg.flags.cfl_policy;
        so.snapshot_stride = cfg.flags.snapshot_stride;
        so.on_warning = on_warning;
        const CoefficientSet coeffs = make_preset(*cfg.preset);
        const GridFunction p0 = GridFunction::sample(mesh, initial_condition(*cfg.preset));
        const Trajectory traj = solve(*cfg.scheme, coeffs, p0, mesh, so);
        emit("profile.csv", profile_csv(traj.final_level, mesh));
        emit("q_series.csv", q_series_csv(traj.q_series, mesh));
        emit("snapshots.csv", snapshots_csv(traj));
        emit("diagnostics.csv", diagnostics_csv(traj));
        break;
    }
    case Command::convergence:
        emit("convergence.csv", convergence_csv(run_validation(*cfg.mesh, e.refinements, xo)));
        break;
    case Command::discontinuity: {
        const auto results = run_discontinuity(e.m_values, *cfg.mesh, xo);
        for (const DiscontinuityResult& r : results)
            for (std::size_t s = 0; s < kValidationSchemes.size(); ++s)
                emit("profile_m" + format_label(r.m) + "_" + std::string(to_string(kValidationSchemes[s])) + ".csv",
                     profile_csv(r.profiles[s], *cfg.mesh));
        emit("fronts.csv", fronts_csv(results, cfg.mesh->horizon()));
        break;
    }
    case Command::weakstar: {
        const WeakStarStudy study = run_weakstar(e.a, e.b_values, *cfg.mesh, xo);
        emit("weakstar.csv", weakstar_csv(study));
        emit("profile_cssm.csv", profile_csv(study.cssm_profile, *cfg.mesh));
        for (const WeakStarResult& r : study.results)
            emit("profile_b" + format_label(r.b) + ".csv", profile_csv(r.profile, *cfg.mesh));
        break;
    }
    case Command::bifurcate:
        emit("bifurcation.csv", bifurcation_csv(run_bifurcation(e.a_values, *cfg.mesh, e.tail_fraction, xo)));
        break;
    case Command::charroots:
        emit("charroots.csv", charroots_csv(run_charroots(e.problem, e.guesses)));
        break;
    }

    nlohmann::json manifest;
    manifest["config"] = to_json(cfg);
    manifest["outputs"] = written;
    std::ofstream out(cfg.output_dir / "manifest.json", std::ios::binary | std::ios::trunc);
    out << manifest.dump(2) << '\n';
    if (!out) throw IoError("failed writing manifest.json");
    written.push_back("manifest.json");
    return written;
}

} // namespace sspop
