#pragma once

#include "sspop/analysis.hpp"
#include "sspop/error.hpp"
#include "sspop/experiments.hpp"
#include "sspop/grid.hpp"
#include "sspop/schemes.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace sspop {

/// 17 significant digits, enough to re-parse every double exactly.
inline std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Short form for file names: 1000 -> "1000", 1.01 -> "1.01".
inline std::string format_label(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

/// CSV text assembled in memory and written in one go.
class CsvTable {
public:
    explicit CsvTable(std::string header) : text_(std::move(header)) { text_ += '\n'; }

    template <class... Fields>
    void row(const Fields&... fields) {
        bool first = true;
        (append(fields, first), ...);
        text_ += '\n';
    }

    const std::string& text() const noexcept { return text_; }

    void write(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
        out << text_;
        out.flush();
        if (!out) throw IoError("failed writing '" + path.string() + "'");
    }

private:
    void separator(bool& first) {
        if (!first) text_ += ',';
        first = false;
    }
    void append(double v, bool& first) {
        separator(first);
        text_ += format_real(v);
    }
    void append(const std::optional<double>& v, bool& first) {
        separator(first);
        if (v) text_ += format_real(*v);
    }
    void append(std::size_t v, bool& first) {
        separator(first);
        text_ += std::to_string(v);
    }
    void append(const std::string& v, bool& first) {
        separator(first);
        text_ += v;
    }
    void append(const char* v, bool& first) { append(std::string(v), first); }

    std::string text_;
};

inline CsvTable profile_csv(const GridFunction& p, const Mesh& mesh) {
    require_on_mesh(p.values(), mesh);
    CsvTable t("s,p");
    for (std::size_t i = 0; i < p.size(); ++i) t.row(mesh.node(i), p[i]);
    return t;
}

inline CsvTable q_series_csv(const std::vector<double>& q, const Mesh& mesh) {
    CsvTable t("t,Q");
    for (std::size_t k = 0; k < q.size(); ++k) t.row(mesh.time(k), q[k]);
    return t;
}

inline CsvTable snapshots_csv(const Trajectory& traj) {
    CsvTable t("k,t,s,p");
    for (const Snapshot& snap : traj.snapshots)
        for (std::size_t i = 0; i < snap.level.size(); ++i) t.row(snap.step, snap.time, traj.mesh.node(i), snap.level[i]);
    return t;
}

inline CsvTable diagnostics_csv(const Trajectory& traj) {
    CsvTable t("k,t,l1,linf,tv");
    for (std::size_t k = 0; k < traj.diagnostics.size(); ++k) {
        const LevelDiagnostics& d = traj.diagnostics[k];
        t.row(k, traj.mesh.time(k), d.l1, d.linf, d.tv);
    }
    return t;
}

inline CsvTable convergence_csv(const std::vector<ConvergenceRow>& rows) {
    CsvTable t("N,L,foeu_err,foeu_order,soeu_err,soeu_order,soem_err,soem_order");
    for (const ConvergenceRow& r : rows)
        t.row(r.n_cells, r.n_steps, r.foeu.l1_error, r.foeu.order, r.soeu.l1_error, r.soeu.order, r.soem.l1_error,
              r.soem.order);
    return t;
}

inline CsvTable fronts_csv(const std::vector<DiscontinuityResult>& results, double horizon) {
    const auto centers = discontinuity_fronts(horizon);
    CsvTable t("m,scheme,front,width");
    for (const DiscontinuityResult& r : results)
        for (std::size_t s = 0; s < kValidationSchemes.size(); ++s)
            for (std::size_t f = 0; f < 2; ++f)
                t.row(r.m, std::string(to_string(kValidationSchemes[s])), centers[f], r.front_widths[s][f]);
    return t;
}

inline CsvTable weakstar_csv(const WeakStarStudy& study) {
    CsvTable t("b,l1_distance,q_distance,normalization");
    for (const WeakStarResult& r : study.results) t.row(r.b, r.l1_distance, r.q_distance, r.normalization);
    return t;
}

inline CsvTable bifurcation_csv(const std::vector<BifurcationPoint>& points) {
    CsvTable t("a,q_max,q_min");
    for (const BifurcationPoint& p : points) t.row(p.a, p.q_max, p.q_min);
    return t;
}

inline CsvTable charroots_csv(const std::vector<CharRoot>& roots) {
    CsvTable t("re_lambda,im_lambda,residual");
    for (const CharRoot& r : roots) t.row(r.lambda.real(), r.lambda.imag(), r.residual);
    return t;
}

} // namespace sspop
