#pragma once

#include "sspop/error.hpp"
#include "sspop/grid.hpp"
#include "sspop/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace sspop {

/// Rate depending on a size and the total population, e.g. gamma(s, Q).
using RateFunction = std::function<double(double, double)>;

/// A recruitment kernel bound to one mesh and one quadrature rule.
class DiscreteRecruitment {
public:
    virtual ~DiscreteRecruitment() = default;

    /// out[i] = quadrature over y of beta(s_i, y, q) p(y), for every node i.
    virtual void apply(std::span<const double> p, double q, std::span<double> out) const = 0;
};

/// Distributed recruitment beta(s, y, Q): offspring of size s per parent of size y.
class RecruitmentKernel {
public:
    virtual ~RecruitmentKernel() = default;

    virtual double operator()(double s, double y, double q) const = 0;

    /// What the quadrature makes of the integral of beta(s, ., q) over one cell.
    /// Default: the nodal rule beta(s, y_j, q) * w_j.
    virtual double cell_integral(double s, const QuadratureCell& cell, double q) const {
        return (*this)(s, cell.node, q) * cell.weight;
    }

    virtual std::unique_ptr<DiscreteRecruitment> discretize(const Mesh& mesh, Quadrature rule) const;
};

namespace detail {

// Dense evaluation through cell_integral; O(N^2) per application. Borrows the kernel.
class CellwiseRecruitment final : public DiscreteRecruitment {
public:
    CellwiseRecruitment(const RecruitmentKernel& kernel, const Mesh& mesh, Quadrature rule)
        : kernel_(kernel), cells_(quadrature_cells(mesh, rule)) {}

    void apply(std::span<const double> p, double q, std::span<double> out) const override {
        for (std::size_t i = 0; i < cells_.size(); ++i) {
            const double s = cells_[i].node;
            double sum = 0.0;
            for (std::size_t j = 0; j < cells_.size(); ++j) {
                if (cells_[j].weight == 0.0) continue;
                sum += kernel_.cell_integral(s, cells_[j], q) * p[j];
            }
            out[i] = sum;
        }
    }

private:
    const RecruitmentKernel& kernel_;
    std::vector<QuadratureCell> cells_;
};

} // namespace detail

inline std::unique_ptr<DiscreteRecruitment> RecruitmentKernel::discretize(const Mesh& mesh, Quadrature rule) const {
    return std::make_unique<detail::CellwiseRecruitment>(*this, mesh, rule);
}

/// Any callable beta(s, y, Q).
class FunctionKernel final : public RecruitmentKernel {
public:
    explicit FunctionKernel(std::function<double(double, double, double)> beta) : beta_(std::move(beta)) {}

    double operator()(double s, double y, double q) const override { return beta_(s, y, q); }

private:
    std::function<double(double, double, double)> beta_;
};

/// beta(s, y, Q) = sum_r offspring_r(s) * fertility_r(y, Q). Applying it costs O(N) per term.
class SeparableKernel final : public RecruitmentKernel {
public:
    struct Term {
        std::function<double(double)> offspring;
        RateFunction fertility;
    };

    explicit SeparableKernel(std::vector<Term> terms) : terms_(std::move(terms)) {}

    double operator()(double s, double y, double q) const override {
        double v = 0.0;
        for (const Term& t : terms_) v += t.offspring(s) * t.fertility(y, q);
        return v;
    }

    std::unique_ptr<DiscreteRecruitment> discretize(const Mesh& mesh, Quadrature rule) const override {
        return std::make_unique<Discrete>(terms_, mesh, rule);
    }

private:
    class Discrete final : public DiscreteRecruitment {
    public:
        Discrete(const std::vector<Term>& terms, const Mesh& mesh, Quadrature rule) : terms_(terms) {
            const std::size_t n = mesh.n_nodes();
            nodes_.resize(n);
            weights_.resize(n);
            for (std::size_t j = 0; j < n; ++j) {
                nodes_[j] = mesh.node(j);
                weights_[j] = quadrature_weight(rule, j, mesh.n_cells()) * mesh.ds();
            }
            shapes_.reserve(terms.size());
            for (const Term& t : terms) {
                std::vector<double> shape(n);
                for (std::size_t i = 0; i < n; ++i) shape[i] = t.offspring(nodes_[i]);
                shapes_.push_back(std::move(shape));
            }
        }

        void apply(std::span<const double> p, double q, std::span<double> out) const override {
            std::fill(out.begin(), out.end(), 0.0);
            for (std::size_t r = 0; r < terms_.size(); ++r) {
                double total = 0.0;
                for (std::size_t j = 0; j < nodes_.size(); ++j) {
                    if (weights_[j] == 0.0) continue;
                    total += terms_[r].fertility(nodes_[j], q) * weights_[j] * p[j];
                }
                const std::vector<double>& shape = shapes_[r];
                for (std::size_t i = 0; i < out.size(); ++i) out[i] += shape[i] * total;
            }
        }

    private:
        const std::vector<Term>& terms_;
        std::vector<double> nodes_;
        std::vector<double> weights_;
        std::vector<std::vector<double>> shapes_;
    };

    std::vector<Term> terms_;
};

/// Box of height m and width 1/m centred at the parent size, closed at both edges.
/// Cell integrals are exact overlaps, so the discrete kernel keeps mass m * |support|
/// even when the box is narrower than a cell.
class BoxKernel final : public RecruitmentKernel {
public:
    explicit BoxKernel(double m) : m_(m), half_width_(0.5 / m) {
        if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("box kernel height must be positive");
    }

    double height() const noexcept { return m_; }

    double operator()(double s, double y, double) const override {
        return std::abs(s - y) <= half_width_ ? m_ : 0.0;
    }

    double cell_integral(double s, const QuadratureCell& cell, double) const override {
        const double overlap = std::min(cell.hi, s + half_width_) - std::max(cell.lo, s - half_width_);
        return overlap > 0.0 ? m_ * overlap : 0.0;
    }

    std::unique_ptr<DiscreteRecruitment> discretize(const Mesh& mesh, Quadrature rule) const override {
        return std::make_unique<Banded>(*this, mesh, rule);
    }

private:
    // The box does not depend on Q, so its nonzero cell integrals are tabulated once.
    class Banded final : public DiscreteRecruitment {
    public:
        Banded(const BoxKernel& box, const Mesh& mesh, Quadrature rule) {
            const auto cells = quadrature_cells(mesh, rule);
            rows_.resize(cells.size());
            for (std::size_t i = 0; i < cells.size(); ++i)
                for (std::size_t j = 0; j < cells.size(); ++j) {
                    const double w = box.cell_integral(cells[i].node, cells[j], 0.0);
                    if (w != 0.0) rows_[i].push_back({j, w});
                }
        }

        void apply(std::span<const double> p, double, std::span<double> out) const override {
            for (std::size_t i = 0; i < rows_.size(); ++i) {
                double sum = 0.0;
                for (const Entry& e : rows_[i]) sum += e.weight * p[e.column];
                out[i] = sum;
            }
        }

    private:
        struct Entry {
            std::size_t column;
            double weight;
        };
        std::vector<std::vector<Entry>> rows_;
    };

    double m_;
    double half_width_;
};

/// CSSM recruitment: gamma(0, Q) p(0) = integral of beta_tilde(y, Q) p(y).
struct BoundaryFertility {
    RateFunction fertility;
};

using Recruitment = std::variant<std::shared_ptr<const RecruitmentKernel>, BoundaryFertility>;

struct CoefficientSet {
    std::string name;
    RateFunction growth;
    RateFunction mortality;
    Recruitment recruitment;
    /// Dominating constant for the growth, mortality and recruitment bounds, when known.
    std::optional<double> bound_c;
    /// Q range [0, q_range] that bound_c covers; also the range sampled when estimating c.
    double q_range = 10.0;
    bool gamma_vanishes_at_right = false;

    bool distributed() const noexcept { return recruitment.index() == 0; }

    const RecruitmentKernel& kernel() const {
        const auto* k = std::get_if<0>(&recruitment);
        if (k == nullptr || !*k) throw ConfigError(name + ": coefficient set has no distributed kernel");
        return **k;
    }

    const RateFunction& boundary_fertility() const {
        const auto* b = std::get_if<1>(&recruitment);
        if (b == nullptr) throw ConfigError(name + ": coefficient set has no boundary fertility");
        return b->fertility;
    }
};

namespace detail {

inline double checked(double v, const char* what, double s, double q) {
    if (!std::isfinite(v))
        throw CoefficientError(std::string(what) + " is not finite at s = " + std::to_string(s) +
                               ", Q = " + std::to_string(q));
    return v;
}

// Sup, Lipschitz-in-s, Lipschitz-of-the-s-derivative and Lipschitz-in-Q estimates of a rate
// sampled on a lattice; the largest of them.
inline double rate_bound(const RateFunction& f, const char* what, std::size_t n, double q_max) {
    const double h = 1.0 / static_cast<double>(n);
    const double hq = q_max / static_cast<double>(n);
    std::vector<double> prev_col(n + 1), col(n + 1);
    double bound = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        const double q = q_max * static_cast<double>(k) / static_cast<double>(n);
        for (std::size_t i = 0; i <= n; ++i) {
            const double s = static_cast<double>(i) / static_cast<double>(n);
            col[i] = checked(f(s, q), what, s, q);
            bound = std::max(bound, std::abs(col[i]));
        }
        for (std::size_t i = 0; i < n; ++i) bound = std::max(bound, std::abs(col[i + 1] - col[i]) / h);
        for (std::size_t i = 1; i < n; ++i)
            bound = std::max(bound, std::abs(col[i + 1] - 2.0 * col[i] + col[i - 1]) / (h * h));
        if (k > 0) {
            for (std::size_t i = 0; i <= n; ++i) bound = std::max(bound, std::abs(col[i] - prev_col[i]) / hq);
            for (std::size_t i = 0; i < n; ++i)
                bound = std::max(bound, std::abs((col[i + 1] - prev_col[i + 1]) - (col[i] - prev_col[i])) / (hq * h));
        }
        std::swap(prev_col, col);
    }
    return bound;
}

} // namespace detail

/// A constant c such that the sampled rates, their Lipschitz quotients and the
/// s-variation of the kernel stay below c on an n x n (x n) lattice with Q in [0, q_max].
inline double estimate_bound_constant(const CoefficientSet& coeffs, double q_max, std::size_t n = 100) {
    if (!(q_max > 0.0)) throw DomainError("q_max must be positive");
    if (n < 2) throw DomainError("lattice needs at least two intervals");
    double c = std::max(detail::rate_bound(coeffs.growth, "growth rate", n, q_max),
                        detail::rate_bound(coeffs.mortality, "mortality rate", n, q_max));

    const double hq = q_max / static_cast<double>(n);
    auto grid = [n](std::size_t i) { return static_cast<double>(i) / static_cast<double>(n); };

    if (coeffs.distributed()) {
        const RecruitmentKernel& beta = coeffs.kernel();
        std::vector<double> prev(n + 1), cur(n + 1);
        for (std::size_t jy = 0; jy <= n; ++jy) {
            const double y = grid(jy);
            for (std::size_t k = 0; k <= n; ++k) {
                const double q = q_max * grid(k);
                double variation = 0.0;
                for (std::size_t i = 0; i <= n; ++i) {
                    const double s = grid(i);
                    cur[i] = detail::checked(beta(s, y, q), "recruitment kernel", s, q);
                    c = std::max(c, std::abs(cur[i]));
                    if (i > 0) variation += std::abs(cur[i] - cur[i - 1]);
                    if (k > 0) c = std::max(c, std::abs(cur[i] - prev[i]) / hq);
                }
                c = std::max(c, variation);
                std::swap(prev, cur);
            }
        }
    } else {
        const RateFunction& fert = coeffs.boundary_fertility();
        for (std::size_t jy = 0; jy <= n; ++jy) {
            double last = 0.0;
            for (std::size_t k = 0; k <= n; ++k) {
                const double q = q_max * grid(k);
                const double v = detail::checked(fert(grid(jy), q), "boundary fertility", grid(jy), q);
                c = std::max(c, std::abs(v));
                if (k > 0) c = std::max(c, std::abs(v - last) / hq);
                last = v;
            }
        }
    }
    return c;
}

/// The step-size restriction c (3 dt / (2 ds)) + c dt <= 1.
inline bool cfl_check(double c, const Mesh& mesh) {
    if (!(c >= 0.0)) throw DomainError("bound constant must be nonnegative");
    return c * (3.0 * mesh.dt() / (2.0 * mesh.ds())) + c * mesh.dt() <= 1.0;
}

/// The constant a run is checked against: declared if present, estimated otherwise.
inline double effective_bound_constant(const CoefficientSet& coeffs) {
    return coeffs.bound_c ? *coeffs.bound_c : estimate_bound_constant(coeffs, coeffs.q_range);
}

} // namespace sspop
