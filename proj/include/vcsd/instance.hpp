#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vcsd/geometry.hpp"
#include "vcsd/rng.hpp"

namespace vcsd {

// Square service area partitioned into a grid of zones; customers may only
// appear inside active zones.
struct ServiceArea {
    double width = 100.0;
    double height = 100.0;
    Point depot{50.0, 50.0};
    int zones_x = 5;
    int zones_y = 5;
    std::vector<int> active_zones;  // zone index = zy * zones_x + zx

    int zone_count() const { return zones_x * zones_y; }
    double zone_width() const { return width / zones_x; }
    double zone_height() const { return height / zones_y; }

    // Bounding square [x0,x1) x [y0,y1) of a zone.
    void zone_bounds(int zone, double& x0, double& y0, double& x1, double& y1) const;
    int zone_of(const Point& p) const;

    // Seeded uniform choice of n_active zones out of the grid.
    static ServiceArea make_default(int n_active = 15, std::uint64_t layout_seed = 0);
};

enum class DensityLevel { VeryLow, Low, Moderate, High, VeryHigh };

// Per-zone customer-count distribution plus the fleet/duration defaults tied to it.
struct DensityClass {
    DensityLevel level = DensityLevel::Moderate;
    std::vector<int> support;
    std::vector<double> probs;
    double L_default = 0.0;
    int m_default = 0;

    double nbar_z() const;
    double nbar(int active_zone_count) const { return active_zone_count * nbar_z(); }
};

DensityClass density_class(DensityLevel level);
const char* density_name(DensityLevel level);
std::optional<DensityLevel> parse_density(const std::string& name);

enum class Variability { Low, Moderate, High };
const char* variability_name(Variability u);
std::optional<Variability> parse_variability(const std::string& name);

enum class InstanceKind { VcsdGenerated, VrpsdFixed };

struct FixedCustomer {
    Point loc;
    double dbar = 0.0;
};

struct InstanceSpec {
    ServiceArea area;
    InstanceKind kind = InstanceKind::VcsdGenerated;
    DensityClass density;             // Vcsd only
    double Q = 50.0;
    int m = 1;
    double L = 0.0;
    Variability variability = Variability::Moderate;  // Vrpsd only
    std::vector<FixedCustomer> fixed_customers;       // Vrpsd only
    std::uint64_t seed = 0;

    void validate() const;  // throws UsageError on an inconsistent spec
};

struct Customer {
    int id = 0;
    Point loc;
    double dbar = 0.0;
};

struct CustomerRealization {
    std::vector<Customer> customers;
};

// Realized demand per customer id, in realization order.
struct DemandScenario {
    std::vector<double> realized;
};

CustomerRealization sample_customers(const InstanceSpec& spec, Rng& rng);
double sample_demand(double dbar, const InstanceSpec& spec, Rng& rng);
DemandScenario sample_demands(const CustomerRealization& realization, const InstanceSpec& spec, Rng& rng);

// Fixed customer list of a VRPSD spec as a realization (demands still stochastic).
CustomerRealization fixed_realization(const InstanceSpec& spec);

// Fleet size from the filling-rate identity; paper defaults give ceil(2 * nbar_z).
int vehicles_for_density(double nbar_z, double filling_rate = 1.0, double Q_ref = 75.0,
                         int zone_count = 15, double mean_expected_demand = 10.0);

// 0.75 x mean per-vehicle travel time under GP with L = inf, Q = 75.
double calibrate_duration_limit(const InstanceSpec& spec, int n_samples, Rng& rng);

// Solomon text format; node 0 is the depot, demands become expected demands.
std::pair<CustomerRealization, Point> load_solomon(const std::string& path, int n);

// VRPSD demand support/probabilities for a given variability class.
void vrpsd_demand_distribution(double dbar, Variability u,
                               std::vector<double>& values, std::vector<double>& probs);

void save_instance(const InstanceSpec& spec, const std::string& path);
InstanceSpec load_instance(const std::string& path);

// A scenario set pairs customer realizations with demand maps, replayable as a grid.
struct ScenarioSet {
    std::vector<CustomerRealization> realizations;
    // (realization index, demand map)
    std::vector<std::pair<int, DemandScenario>> scenarios;
};

void save_scenarios(const ScenarioSet& set, const std::string& path);
ScenarioSet load_scenarios(const std::string& path);

// Sample an R x S grid of customer and demand realizations with position-derived streams.
ScenarioSet sample_scenario_grid(const InstanceSpec& spec, int n_realizations,
                                 int n_demands, const Rng& base);

bool instance_equal(const InstanceSpec& a, const InstanceSpec& b);

}  // namespace vcsd
