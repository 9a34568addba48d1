#include "vcsd/env.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <limits>

#include "vcsd/errors.hpp"

namespace vcsd {

bool at_depot(const GlobalState& state, const VehicleState& v) {
    return v.destination == state.depot;
}

GlobalState initial_state(const CustomerRealization& realization, const InstanceSpec& spec) {
    if (spec.m < 1) throw UsageError("fleet must have at least one vehicle");
    GlobalState s;
    s.Q = spec.Q;
    s.L = spec.L;
    s.depot = spec.area.depot;
    s.clock = 0.0;
    s.customers.reserve(realization.customers.size());
    for (const Customer& c : realization.customers)
        s.customers.push_back({c.id, c.loc, 1, c.dbar, kUnrealized});
    s.vehicles.reserve(spec.m);
    for (int v = 0; v < spec.m; ++v) s.vehicles.push_back({v, s.depot, 0.0, spec.Q, true});
    return s;
}

std::vector<int> feasible_customers(const GlobalState& state, int v) {
    const VehicleState& veh = state.vehicles.at(v);
    std::vector<int> out;
    const double budget = state.L - state.clock;
    for (const CustomerState& c : state.customers) {
        if (c.h != 1) continue;
        if (travel_time(veh.destination, c.loc) + travel_time(c.loc, state.depot) <= budget)
            out.push_back(c.id);
    }
    return out;
}

std::vector<Action> decentralized_action_space(const GlobalState& state, int v,
                                               const std::vector<int>& targets) {
    const VehicleState& veh = state.vehicles.at(v);
    if (veh.arrival != state.clock) throw UsageError("vehicle is not active");
    if (veh.capacity_left == 0.0) return {Action{Action::kDepot}};

    std::vector<Action> out;
    const double budget = state.L - state.clock;
    for (int id : targets) {
        const CustomerState& c = state.customers.at(id);
        if (c.h != 1) continue;
        if (travel_time(veh.destination, c.loc) + travel_time(c.loc, state.depot) <= budget)
            out.push_back(Action{id});
    }
    // Waiting at the depot is only allowed when no target is reachable.
    if (!(at_depot(state, veh) && !out.empty())) out.push_back(Action{Action::kDepot});
    return out;
}

namespace {

bool joint_action_valid(const GlobalState& state, const std::vector<int>& actives,
                        const std::vector<Action>& joint) {
    // No two vehicles may pick the same customer.
    for (std::size_t a = 0; a < actives.size(); ++a)
        for (std::size_t b = a + 1; b < actives.size(); ++b)
            if (!joint[actives[a]].is_depot() && joint[actives[a]] == joint[actives[b]])
                return false;
    for (int v : actives) {
        const VehicleState& veh = state.vehicles[v];
        const Action& act = joint[v];
        if (veh.capacity_left == 0.0 && !act.is_depot()) return false;
        if (act.is_depot() && at_depot(state, veh)) {
            // Depot wait is allowed only when every reachable customer is claimed by others.
            for (int c : feasible_customers(state, v)) {
                bool claimed = false;
                for (int u : actives)
                    if (u != v && joint[u].target == c) claimed = true;
                if (!claimed) return false;
            }
        }
        if (!act.is_depot()) {
            const CustomerState& c = state.customers.at(act.target);
            if (c.h != 1) return false;
            if (travel_time(veh.destination, c.loc) + travel_time(c.loc, state.depot) >
                state.L - state.clock)
                return false;
        }
    }
    return true;
}

}  // namespace

std::vector<std::vector<Action>> centralized_action_space(const GlobalState& state,
                                                          int enumeration_cap) {
    if (static_cast<int>(state.customers.size()) > enumeration_cap)
        throw UsageError("instance exceeds the joint enumeration cap");

    std::vector<int> actives = active_vehicles(state);
    std::vector<std::vector<Action>> per_vehicle(state.vehicles.size());
    for (const VehicleState& veh : state.vehicles) {
        if (veh.arrival == state.clock) {
            per_vehicle[veh.id].push_back(Action{Action::kDepot});
            for (int c : feasible_customers(state, veh.id)) per_vehicle[veh.id].push_back(Action{c});
        } else {
            per_vehicle[veh.id].push_back(Action{Action::kDepot});  // placeholder, kept destination
        }
    }

    std::vector<std::vector<Action>> result;
    std::vector<Action> joint(state.vehicles.size(), Action{Action::kDepot});
    std::vector<std::size_t> pick(state.vehicles.size(), 0);
    while (true) {
        for (std::size_t v = 0; v < joint.size(); ++v) joint[v] = per_vehicle[v][pick[v]];
        if (joint_action_valid(state, actives, joint)) {
            std::vector<Action> entry = joint;
            // Inactive vehicles keep their destination; mark them explicitly.
            for (const VehicleState& veh : state.vehicles)
                if (veh.arrival != state.clock) entry[veh.id] = Action{Action::kDepot};
            result.push_back(std::move(entry));
        }
        std::size_t v = 0;
        while (v < pick.size()) {
            if (++pick[v] < per_vehicle[v].size()) break;
            pick[v] = 0;
            ++v;
        }
        if (v == pick.size()) break;
    }
    return result;
}

GlobalState apply_action(const GlobalState& state, int v, const Action& a) {
    GlobalState next = state;
    VehicleState& veh = next.vehicles.at(v);
    if (veh.arrival != state.clock) throw UsageError("vehicle is not active");
    if (veh.capacity_left == 0.0 && !a.is_depot())
        throw UsageError("empty vehicle must return to the depot");

    if (a.is_depot()) {
        const double tau = travel_time(veh.destination, state.depot);
        veh.destination = state.depot;
        if (tau > 0.0) {
            veh.arrival = state.clock + tau;
        } else {
            // Depot wait: hold the vehicle until the next event so the clock can advance.
            double next_event = std::numeric_limits<double>::infinity();
            for (const VehicleState& other : next.vehicles)
                if (other.id != v && other.arrival > state.clock)
                    next_event = std::min(next_event, other.arrival);
            veh.arrival = std::isfinite(next_event) ? next_event : state.clock;
        }
        veh.arrived = false;
    } else {
        CustomerState& c = next.customers.at(a.target);
        if (c.h != 1) throw UsageError("customer is not available");
        const double tau = travel_time(veh.destination, c.loc);
        if (tau + travel_time(c.loc, state.depot) > state.L - state.clock)
            throw UsageError("customer not reachable within the duration limit");
        c.h = 0;
        veh.destination = c.loc;
        veh.arrival = state.clock + tau;
        veh.arrived = false;
    }

    double min_arrival = std::numeric_limits<double>::infinity();
    for (const VehicleState& u : next.vehicles) min_arrival = std::min(min_arrival, u.arrival);
    next.clock = min_arrival;
    return next;
}

GlobalState reveal_and_advance(const GlobalState& state, const DemandScenario& scenario,
                               std::vector<ServedAmount>* served) {
    GlobalState next = state;
    for (VehicleState& veh : next.vehicles) {
        if (veh.arrived || veh.arrival > next.clock) continue;
        veh.arrived = true;
        if (veh.destination == next.depot) {
            veh.capacity_left = next.Q;
            if (served) served->push_back({veh.id, 0.0});
            continue;
        }
        // Locate the customer at this vehicle's destination.
        CustomerState* cust = nullptr;
        for (CustomerState& c : next.customers)
            if (c.loc == veh.destination) { cust = &c; break; }
        if (!cust) throw DataError("vehicle arrived at a location with no customer");
        if (cust->dhat == kUnrealized) {
            if (cust->id >= static_cast<int>(scenario.realized.size()))
                throw DataError("scenario has no demand for customer " +
                                std::to_string(cust->id));
            cust->dhat = scenario.realized[cust->id];
        }
        const double eta = std::min(cust->dhat, veh.capacity_left);
        cust->dhat -= eta;
        veh.capacity_left -= eta;
        cust->h = cust->dhat > 0.0 ? 1 : 0;
        if (served) served->push_back({veh.id, eta});
    }
    return next;
}

std::vector<int> active_vehicles(const GlobalState& state) {
    std::vector<int> out;
    for (const VehicleState& v : state.vehicles)
        if (v.arrival == state.clock) out.push_back(v.id);
    return out;
}

int select_active_vehicle(const GlobalState& state, Rng& rng) {
    std::vector<int> actives = active_vehicles(state);
    if (actives.empty()) throw UsageError("no vehicle is active at the current clock");
    return actives[rng.index(actives.size())];
}

bool is_terminal(const GlobalState& state) {
    for (const VehicleState& v : state.vehicles) {
        if (!at_depot(state, v) || v.arrival > state.clock) return false;
        if (!feasible_customers(state, v.id).empty()) return false;
    }
    return true;
}

void write_episode_log(const EpisodeLog& log, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot write file: " + path);
    os << std::setprecision(17);
    for (const EpochRecord& r : log.records) {
        os << r.epoch << ' ' << r.vehicle << ' '
           << (r.action.is_depot() ? std::string("depot") : std::to_string(r.action.target))
           << ' ' << r.served << ' ' << r.clock << '\n';
    }
}

}  // namespace vcsd
