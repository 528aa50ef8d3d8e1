#ifndef INFLOW_BACKGROUND_HPP
#define INFLOW_BACKGROUND_HPP

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "inflow/boundary_layer.hpp"
#include "inflow/gas.hpp"
#include "inflow/rarefaction.hpp"

namespace inflow {

struct Grid {
    int n = 16;          // cell count; nodes are j = 0..n
    double length = 1.0;
    double dx = 0.0;

    Grid() { dx = length / n; }
    Grid(int n_, double length_) : n(n_), length(length_) {
        if (n < 16) throw std::invalid_argument("Grid: need at least 16 cells");
        if (!(length > 0.0)) throw std::invalid_argument("Grid: length must be positive");
        dx = length / n;
    }

    std::size_t nodes() const { return static_cast<std::size_t>(n) + 1; }
    double xi(std::size_t j) const { return dx * static_cast<double>(j); }

    bool operator==(const Grid& o) const { return n == o.n && length == o.length; }
};

struct BackgroundFields {
    std::vector<double> V, U, V_xi, U_xi;
};

// Asymptotic state (V, U)(t, xi) sampled on a fixed grid.  Instances are
// immutable after construction and safe to share between runs.
class Background {
  public:
    explicit Background(const Grid& g) : grid_(g) {}
    virtual ~Background() = default;

    const Grid& grid() const { return grid_; }
    virtual bool time_dependent() const = 0;
    virtual BackgroundFields fields(double t) const = 0;
    virtual EndState boundary_state() const = 0;  // pinned at xi = 0
    virtual EndState far_state() const = 0;       // Dirichlet value at xi = L

  protected:
    Grid grid_;
};

// Stationary boundary-layer background: the profile mesh is resampled onto
// the uniform grid once (cubic Hermite in V, the other fields recovered
// from the reduced ODE so they stay consistent with V).
class BoundaryLayerBackground final : public Background {
  public:
    BoundaryLayerBackground(BoundaryLayerProfile profile, const Grid& g)
        : Background(g), profile_(std::move(profile)) {
        const double slope = profile_.minus.u / profile_.minus.v;
        const std::size_t m = g.nodes();
        cache_.V.resize(m);
        cache_.U.resize(m);
        cache_.V_xi.resize(m);
        cache_.U_xi.resize(m);
        for (std::size_t j = 0; j < m; ++j) {
            const double V = profile_.eval_V(g.xi(j));
            cache_.V[j] = V;
            cache_.U[j] = slope * V;
            cache_.U_xi[j] = profile_.delta == 0.0 ? 0.0
                                                   : V * profile_.flux(V) / profile_.gas.mu;
            cache_.V_xi[j] = cache_.U_xi[j] / slope;
        }
    }

    bool time_dependent() const override { return false; }
    BackgroundFields fields(double) const override { return cache_; }
    EndState boundary_state() const override { return profile_.minus; }
    EndState far_state() const override { return profile_.plus; }
    const BoundaryLayerProfile& profile() const { return profile_; }

  private:
    BoundaryLayerProfile profile_;
    BackgroundFields cache_;
};

class RarefactionBackground final : public Background {
  public:
    RarefactionBackground(RarefactionEvaluator ev, const Grid& g)
        : Background(g), ev_(std::move(ev)) {}

    bool time_dependent() const override { return true; }

    BackgroundFields fields(double t) const override {
        const std::size_t m = grid_.nodes();
        BackgroundFields out;
        out.V.resize(m);
        out.U.resize(m);
        out.V_xi.resize(m);
        out.U_xi.resize(m);
        for (std::size_t j = 0; j < m; ++j) {
            const ProfilePoint p = ev_.eval_full(t, grid_.xi(j));
            out.V[j] = p.V;
            out.U[j] = p.U;
            out.V_xi[j] = p.V_xi;
            out.U_xi[j] = p.U_xi;
        }
        return out;
    }

    EndState boundary_state() const override { return ev_.minus(); }
    EndState far_state() const override { return ev_.plus(); }
    const RarefactionEvaluator& evaluator() const { return ev_; }

  private:
    RarefactionEvaluator ev_;
};

}  // namespace inflow

#endif
