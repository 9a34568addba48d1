#pragma once

#include <vector>

#include "vcsd/instance.hpp"

namespace vcsd {

constexpr double kUnrealized = -1.0;

struct CustomerState {
    int id = 0;
    Point loc;
    int h = 1;               // 1 while available; 0 once assigned or fully served
    double dbar = 0.0;
    double dhat = kUnrealized;

    // Remaining demand if realized, expected demand otherwise.
    double d_tilde() const { return dhat == kUnrealized ? dbar : dhat; }
};

struct VehicleState {
    int id = 0;
    Point destination;
    double arrival = 0.0;    // clock value at which the vehicle next becomes active
    double capacity_left = 0.0;
    bool arrived = true;     // arrival event already processed by reveal_and_advance
};

struct GlobalState {
    std::vector<CustomerState> customers;
    std::vector<VehicleState> vehicles;
    double clock = 0.0;
    double Q = 0.0;
    double L = 0.0;
    Point depot;
};

// target >= 0 is a customer id; kDepot sends the vehicle home.
struct Action {
    static constexpr int kDepot = -1;
    int target = kDepot;

    bool is_depot() const { return target == kDepot; }
    friend bool operator==(const Action& a, const Action& b) { return a.target == b.target; }
};

struct EpochRecord {
    int epoch = 0;
    int vehicle = 0;
    Action action;
    double served = 0.0;   // demand volume realized at this vehicle's arrival
    double clock = 0.0;
};

struct EpisodeLog {
    std::vector<EpochRecord> records;
    double total_served = 0.0;
    std::vector<double> vehicle_travel;  // total travel time per vehicle
};

struct ServedAmount {
    int vehicle = 0;
    double amount = 0.0;
};

GlobalState initial_state(const CustomerRealization& realization, const InstanceSpec& spec);

// Eq-8 feasibility: available and reachable with the return trip inside L - t.
std::vector<int> feasible_customers(const GlobalState& state, int v);

// Action space of the active vehicle restricted to a candidate target set.
std::vector<Action> decentralized_action_space(const GlobalState& state, int v,
                                               const std::vector<int>& targets);

// Joint enumeration for small instances; testing aid only.
std::vector<std::vector<Action>> centralized_action_space(const GlobalState& state,
                                                          int enumeration_cap = 8);

GlobalState apply_action(const GlobalState& state, int v, const Action& a);

// Second transition step: realize demands on first visit, serve, restock at depot.
GlobalState reveal_and_advance(const GlobalState& state, const DemandScenario& scenario,
                               std::vector<ServedAmount>* served = nullptr);

int select_active_vehicle(const GlobalState& state, Rng& rng);
std::vector<int> active_vehicles(const GlobalState& state);

bool is_terminal(const GlobalState& state);

bool at_depot(const GlobalState& state, const VehicleState& v);

void write_episode_log(const EpisodeLog& log, const std::string& path);

}  // namespace vcsd
