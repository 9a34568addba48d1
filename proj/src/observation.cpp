#include "vcsd/observation.hpp"

#include <algorithm>
#include <limits>

#include "vcsd/errors.hpp"

namespace vcsd {

double score(const CustomerState& c, const VehicleState& v) {
    const double tau = travel_time(c.loc, v.destination);
    const double servable = std::min(c.d_tilde(), v.capacity_left);
    if (tau == 0.0) return std::numeric_limits<double>::infinity();
    return servable / tau;
}

std::vector<int> select_targets(const GlobalState& state, int v, const ObservationConfig& cfg) {
    const VehicleState& veh = state.vehicles.at(v);
    std::vector<int> feasible = feasible_customers(state, v);

    struct Ranked {
        int id;
        double rho;
        double tau;
    };
    std::vector<Ranked> ranked;
    ranked.reserve(feasible.size());
    for (int id : feasible) {
        const CustomerState& c = state.customers[id];
        ranked.push_back({id, score(c, veh), travel_time(c.loc, veh.destination)});
    }
    std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
        if (a.rho != b.rho) return a.rho > b.rho;
        if (a.tau != b.tau) return a.tau < b.tau;
        return a.id < b.id;
    });
    const std::size_t keep = std::min<std::size_t>(cfg.n_tilde, ranked.size());
    std::vector<int> out;
    out.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) out.push_back(ranked[i].id);
    return out;
}

Heatmap build_heatmap(const GlobalState& state, const ObservationConfig& cfg) {
    Heatmap hm;
    hm.counts.assign(cfg.partition_count(), 0.0);
    hm.demand_sums.assign(cfg.partition_count(), 0.0);
    // Width/height of a partition derive from the nominal 100x100 area tiling;
    // states carry no area, so use the depot-centered convention of the instances.
    for (const CustomerState& c : state.customers) {
        const double d = c.d_tilde();
        if (c.h != 1 && !(c.dhat > 0.0)) continue;  // fully served or assigned-and-empty
        if (c.h == 0 && c.dhat == 0.0) continue;
        int px = static_cast<int>(c.loc.x / (100.0 / cfg.partitions_x));
        int py = static_cast<int>(c.loc.y / (100.0 / cfg.partitions_y));
        px = std::clamp(px, 0, cfg.partitions_x - 1);
        py = std::clamp(py, 0, cfg.partitions_y - 1);
        const int p = py * cfg.partitions_x + px;
        hm.counts[p] += 1.0;
        hm.demand_sums[p] += d;
    }
    return hm;
}

ObservationResult observe(const GlobalState& state, int v, const ObservationConfig& cfg,
                          const InstanceSpec& spec) {
    const VehicleState& veh = state.vehicles.at(v);
    if (veh.arrival != state.clock) throw UsageError("observation requires an active vehicle");

    ObservationResult res;
    res.targets = select_targets(state, v, cfg);
    const int m = static_cast<int>(state.vehicles.size());
    res.obs.values.assign(cfg.length(m), 0.0);
    double* out = res.obs.values.data();

    // F block: 6 scalars per target. The customer's distance to the depot is a
    // function of its coordinates, so the slot keeps (x, y, tau-to-vehicle,
    // d_tilde, servable, realized-flag).
    for (std::size_t i = 0; i < res.targets.size(); ++i) {
        const CustomerState& c = state.customers[res.targets[i]];
        double* f = out + 6 * i;
        f[0] = c.loc.x;
        f[1] = c.loc.y;
        f[2] = travel_time(c.loc, veh.destination);
        f[3] = c.d_tilde();
        f[4] = std::min(c.d_tilde(), veh.capacity_left);
        f[5] = c.dhat == kUnrealized ? 0.0 : 1.0;
    }
    out += 6 * cfg.n_tilde;

    const Heatmap hm = build_heatmap(state, cfg);
    for (int p = 0; p < cfg.partition_count(); ++p) {
        out[2 * p] = hm.counts[p];
        out[2 * p + 1] = hm.demand_sums[p];
    }
    out += 2 * cfg.partition_count();

    // G block: 3 scalars per vehicle (relative arrival, capacity, depot distance).
    for (int u = 0; u < m; ++u) {
        const VehicleState& other = state.vehicles[u];
        out[3 * u] = other.arrival - state.clock;
        out[3 * u + 1] = other.capacity_left;
        out[3 * u + 2] = travel_time(other.destination, state.depot);
    }
    out += 3 * m;

    *out++ = state.clock;

    for (ObservationExtra e : cfg.extras) {
        switch (e) {
            case ObservationExtra::DurationLimit:
                *out++ = spec.L;
                break;
            case ObservationExtra::Variability:
                *out++ = spec.variability == Variability::Low ? 0.0
                         : spec.variability == Variability::Moderate ? 0.5 : 1.0;
                break;
        }
    }
    return res;
}

}  // namespace vcsd
