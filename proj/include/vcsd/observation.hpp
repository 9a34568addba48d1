#pragma once

#include <vector>

#include "vcsd/env.hpp"

namespace vcsd {

enum class ObservationExtra { DurationLimit, Variability };

struct ObservationConfig {
    int n_tilde = 10;
    int partitions_x = 5;
    int partitions_y = 5;
    std::vector<ObservationExtra> extras;

    int partition_count() const { return partitions_x * partitions_y; }
    // [F | H | G | t | extras]
    int length(int m) const {
        return 6 * n_tilde + 2 * partition_count() + 3 * m + 1 + static_cast<int>(extras.size());
    }
};

struct Observation {
    std::vector<double> values;
};

struct Heatmap {
    std::vector<double> counts;       // xi_c per partition
    std::vector<double> demand_sums;  // xi_d per partition
};

// Score rho = min(d_tilde, q) / tau; co-located customers rank first.
double score(const CustomerState& c, const VehicleState& v);

// Top-n_tilde feasible customers by rho, ties by smaller tau then smaller id.
std::vector<int> select_targets(const GlobalState& state, int v, const ObservationConfig& cfg);

Heatmap build_heatmap(const GlobalState& state, const ObservationConfig& cfg);

struct ObservationResult {
    Observation obs;
    std::vector<int> targets;  // i-th F slot pairs with i-th entry here
};

ObservationResult observe(const GlobalState& state, int v, const ObservationConfig& cfg,
                          const InstanceSpec& spec);

}  // namespace vcsd
