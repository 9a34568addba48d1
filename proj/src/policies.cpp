#include "vcsd/policies.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "vcsd/errors.hpp"

namespace vcsd {

std::vector<Route> load_routes(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot read file: " + path);
    std::string magic;
    int version = 0;
    if (!(is >> magic >> version) || magic != "vcsd-routes" || version != 1)
        throw ParseError("not a routes file", 1);
    std::size_t n = 0;
    if (!(is >> n)) throw ParseError("missing route count", 2);
    std::vector<Route> routes(n);
    for (Route& r : routes) {
        std::size_t len = 0;
        if (!(is >> len)) throw ParseError("truncated routes file", 0);
        r.customers.resize(len);
        for (int& c : r.customers)
            if (!(is >> c)) throw ParseError("truncated routes file", 0);
    }
    return routes;
}

void save_routes(const std::vector<Route>& routes, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot write file: " + path);
    os << "vcsd-routes 1\n" << routes.size() << '\n';
    for (const Route& r : routes) {
        os << r.customers.size();
        for (int c : r.customers) os << ' ' << c;
        os << '\n';
    }
    if (!os) throw IoError("write failed: " + path);
}

std::vector<Action> non_preemptive_actions(const GlobalState& state, int v) {
    const VehicleState& veh = state.vehicles.at(v);
    std::vector<int> feasible = feasible_customers(state, v);
    if (veh.capacity_left == 0.0 || feasible.empty()) return {Action{Action::kDepot}};
    std::vector<Action> out;
    out.reserve(feasible.size());
    for (int c : feasible) out.push_back(Action{c});
    return out;
}

Action RandomPolicy::decide(const GlobalState& state, int v, Rng& rng) {
    std::vector<Action> actions = non_preemptive_actions(state, v);
    return actions[rng.index(actions.size())];
}

Action greedy_decide(const GlobalState& state, int v) {
    std::vector<Action> actions = non_preemptive_actions(state, v);
    const VehicleState& veh = state.vehicles.at(v);
    Action best = actions.front();
    double best_d = -1.0, best_tau = 0.0;
    for (const Action& a : actions) {
        if (a.is_depot()) return a;
        const CustomerState& c = state.customers[a.target];
        const double d = c.d_tilde();
        const double tau = travel_time(veh.destination, c.loc);
        if (d > best_d || (d == best_d && tau < best_tau) ||
            (d == best_d && tau == best_tau && a.target < best.target)) {
            best = a;
            best_d = d;
            best_tau = tau;
        }
    }
    return best;
}

Action GreedyPolicy::decide(const GlobalState& state, int v, Rng&) {
    return greedy_decide(state, v);
}

namespace {

int action_slot(const Action& a, const std::vector<int>& targets, const ObservationConfig& cfg) {
    if (a.is_depot()) return cfg.n_tilde;
    for (std::size_t i = 0; i < targets.size(); ++i)
        if (targets[i] == a.target) return static_cast<int>(i);
    return -1;
}

// Argmax of the network outputs over the admissible actions; first slot wins ties.
Action best_q_action(const GlobalState& state, int v, const MlpParams& params,
                     const ObservationConfig& cfg, const InstanceSpec& spec,
                     double* best_value = nullptr) {
    const ObservationResult res = observe(state, v, cfg, spec);
    const std::vector<double> q = forward(params, res.obs.values);
    const std::vector<Action> actions = decentralized_action_space(state, v, res.targets);
    Action best = actions.front();
    double bv = -std::numeric_limits<double>::infinity();
    for (const Action& a : actions) {
        const int slot = action_slot(a, res.targets, cfg);
        if (slot < 0) continue;
        if (q[slot] > bv) {
            bv = q[slot];
            best = a;
        }
    }
    if (best_value) *best_value = bv;
    return best;
}

}  // namespace

Action q_decide(const GlobalState& state, int v, const MlpParams& params,
                const ObservationConfig& cfg, const InstanceSpec& spec) {
    return best_q_action(state, v, params, cfg, spec);
}

Action QPolicy::decide(const GlobalState& state, int v, Rng&) {
    return q_decide(state, v, params_, cfg_, spec_);
}

namespace {

int first_active(const GlobalState& state) {
    for (const VehicleState& veh : state.vehicles)
        if (veh.arrival == state.clock) return veh.id;
    return -1;
}

double reward_estimate(const GlobalState& state, const Action& a) {
    if (a.is_depot()) return 0.0;
    return state.customers[a.target].d_tilde();
}

// Two-step lookahead value of taking `a` at (state, v) under one scenario, with
// the base policy driving the intermediate epoch and the network closing the tail.
double lookahead_value(const GlobalState& state, int v, const Action& a,
                       const MlpParams& params, const ObservationConfig& cfg,
                       const InstanceSpec& spec, const DemandScenario& scenario, double gamma) {
    const double r0 = reward_estimate(state, a);
    GlobalState s1 = reveal_and_advance(apply_action(state, v, a), scenario);
    if (is_terminal(s1)) return r0;
    const int v1 = first_active(s1);
    if (v1 < 0) return r0;
    const Action a1 = q_decide(s1, v1, params, cfg, spec);
    const double r1 = reward_estimate(s1, a1);
    GlobalState s2 = reveal_and_advance(apply_action(s1, v1, a1), scenario);
    if (is_terminal(s2)) return r0 + gamma * r1;
    const int v2 = first_active(s2);
    if (v2 < 0) return r0 + gamma * r1;
    double qmax = 0.0;
    best_q_action(s2, v2, params, cfg, spec, &qmax);
    return r0 + gamma * r1 + gamma * gamma * qmax;
}

}  // namespace

Action rollout_decide(const GlobalState& state, int v, const MlpParams& params,
                      const ObservationConfig& cfg, const InstanceSpec& spec,
                      const std::vector<DemandScenario>& scenarios, double gamma,
                      double* chosen_value, double* base_action_value) {
    const ObservationResult res = observe(state, v, cfg, spec);
    const std::vector<Action> actions = decentralized_action_space(state, v, res.targets);
    const Action base = q_decide(state, v, params, cfg, spec);

    Action best = actions.front();
    double best_f = -std::numeric_limits<double>::infinity();
    double base_f = 0.0;
    for (const Action& a : actions) {
        double total = 0.0;
        for (const DemandScenario& w : scenarios)
            total += lookahead_value(state, v, a, params, cfg, spec, w, gamma);
        const double f = scenarios.empty() ? 0.0 : total / static_cast<double>(scenarios.size());
        if (f > best_f) {
            best_f = f;
            best = a;
        }
        if (a == base) base_f = f;
    }
    if (chosen_value) *chosen_value = best_f;
    if (base_action_value) *base_action_value = base_f;
    return best;
}

Action RolloutPolicy::decide(const GlobalState& state, int v, Rng& rng) {
    // Common random numbers: the same scenario set scores every candidate action.
    std::vector<DemandScenario> scenarios(n_scenarios_);
    for (int w = 0; w < n_scenarios_; ++w) {
        Rng stream = rng.split(0x5ce0u, static_cast<std::uint64_t>(w));
        DemandScenario sc;
        sc.realized.reserve(state.customers.size());
        for (const CustomerState& c : state.customers) {
            if (c.dhat != kUnrealized) {
                sc.realized.push_back(c.dhat);
            } else {
                Rng cs = stream.split(0xd340u, static_cast<std::uint64_t>(c.id));
                sc.realized.push_back(sample_demand(c.dbar, spec_, cs));
            }
        }
        scenarios[w] = std::move(sc);
    }
    rng.next_u64();  // advance the caller's stream across decisions
    return rollout_decide(state, v, params_, cfg_, spec_, scenarios, gamma_);
}

void FixedRoutesPolicy::reset(const GlobalState&) {
    progress_.assign(routes_.size(), 0);
}

Action FixedRoutesPolicy::decide(const GlobalState& state, int v, Rng&) {
    if (progress_.empty()) progress_.assign(routes_.size(), 0);
    if (v >= static_cast<int>(routes_.size())) return Action{Action::kDepot};
    const VehicleState& veh = state.vehicles.at(v);
    if (veh.capacity_left == 0.0) return Action{Action::kDepot};

    const Route& route = routes_[v];
    std::size_t& i = progress_[v];
    while (i < route.customers.size()) {
        const CustomerState& c = state.customers.at(route.customers[i]);
        if (c.dhat == 0.0) {  // realized and exhausted
            ++i;
            continue;
        }
        if (c.h != 1) return Action{Action::kDepot};  // in service by this vehicle's own trip
        if (travel_time(veh.destination, c.loc) + travel_time(c.loc, state.depot) >
            state.L - state.clock) {
            i = route.customers.size();  // out of time: abandon the rest of the route
            return Action{Action::kDepot};
        }
        return Action{route.customers[i]};
    }
    return Action{Action::kDepot};
}

double simulate_fixed_routes(const std::vector<Route>& routes,
                             const CustomerRealization& realization,
                             const DemandScenario& scenario, const InstanceSpec& spec) {
    double total = 0.0;
    const Point depot = spec.area.depot;
    for (const Route& route : routes) {
        double t = 0.0, q = spec.Q;
        Point loc = depot;
        std::size_t i = 0;
        while (i < route.customers.size()) {
            const int id = route.customers[i];
            const Customer& c = realization.customers.at(id);
            double d = scenario.realized.at(id);
            // Serve this customer to exhaustion, restocking as needed.
            while (d > 0.0) {
                if (q == 0.0) {
                    t += travel_time(loc, depot);
                    loc = depot;
                    q = spec.Q;
                }
                if (t + travel_time(loc, c.loc) + travel_time(c.loc, depot) > spec.L) {
                    d = -1.0;  // out of time: head home
                    break;
                }
                t += travel_time(loc, c.loc);
                loc = c.loc;
                const double eta = std::min(d, q);
                d -= eta;
                q -= eta;
                total += eta;
            }
            if (d < 0.0) break;
            ++i;
        }
    }
    return total;
}

EpisodeLog run_episode(Policy& policy, const CustomerRealization& realization,
                       const DemandScenario& scenario, const InstanceSpec& spec, Rng& rng) {
    GlobalState state = initial_state(realization, spec);
    policy.reset(state);

    EpisodeLog log;
    log.vehicle_travel.assign(spec.m, 0.0);
    std::vector<double> last_eta(spec.m, 0.0);
    std::set<int> parked;
    double parked_clock = state.clock;
    int epoch = 0;

    while (!is_terminal(state)) {
        if (state.clock != parked_clock) {
            parked.clear();
            parked_clock = state.clock;
        }
        std::vector<int> candidates;
        for (int v : active_vehicles(state))
            if (!parked.count(v)) candidates.push_back(v);
        if (candidates.empty()) break;  // only depot-waiters remain at this clock

        const int v = candidates[rng.index(candidates.size())];
        const Action a = policy.decide(state, v, rng);
        log.records.push_back({epoch, v, a, last_eta[v], state.clock});

        const Point from = state.vehicles[v].destination;
        GlobalState post = apply_action(state, v, a);
        log.vehicle_travel[v] += travel_time(from, post.vehicles[v].destination);
        if (a.is_depot() && post.vehicles[v].arrival == state.clock) parked.insert(v);

        std::vector<ServedAmount> served;
        state = reveal_and_advance(post, scenario, &served);
        for (const ServedAmount& s : served) {
            last_eta[s.vehicle] = s.amount;
            log.total_served += s.amount;
        }
        ++epoch;
    }
    return log;
}

}  // namespace vcsd
