#pragma once

#include <memory>
#include <vector>

#include "vcsd/env.hpp"
#include "vcsd/neuralnet.hpp"
#include "vcsd/observation.hpp"

namespace vcsd {

// One customer-id sequence per vehicle; depot implicit at both ends.
struct Route {
    std::vector<int> customers;
};

std::vector<Route> load_routes(const std::string& path);
void save_routes(const std::vector<Route>& routes, const std::string& path);

// Decision policies driving the MDP. decide() may consult per-episode state
// (fixed routes track progress); reset() starts a fresh episode.
class Policy {
public:
    virtual ~Policy() = default;
    virtual void reset(const GlobalState&) {}
    virtual Action decide(const GlobalState& state, int v, Rng& rng) = 0;
};

// Non-preemptive action set shared by RP and GP: depot iff q = 0 or J empty.
std::vector<Action> non_preemptive_actions(const GlobalState& state, int v);

class RandomPolicy : public Policy {
public:
    Action decide(const GlobalState& state, int v, Rng& rng) override;
};

class GreedyPolicy : public Policy {
public:
    Action decide(const GlobalState& state, int v, Rng& rng) override;
};

Action greedy_decide(const GlobalState& state, int v);

// Argmax of the Q-network over the decentralized action space (preemptive depot allowed).
class QPolicy : public Policy {
public:
    QPolicy(MlpParams params, ObservationConfig cfg, InstanceSpec spec)
        : params_(std::move(params)), cfg_(std::move(cfg)), spec_(std::move(spec)) {}
    Action decide(const GlobalState& state, int v, Rng& rng) override;

    const MlpParams& params() const { return params_; }
    const ObservationConfig& obs_config() const { return cfg_; }

private:
    MlpParams params_;
    ObservationConfig cfg_;
    InstanceSpec spec_;
};

Action q_decide(const GlobalState& state, int v, const MlpParams& params,
                const ObservationConfig& cfg, const InstanceSpec& spec);

// Two-step rollout on top of q_decide, expectation over a common scenario set W.
class RolloutPolicy : public Policy {
public:
    RolloutPolicy(MlpParams params, ObservationConfig cfg, InstanceSpec spec, int n_scenarios,
                  double gamma = 0.999)
        : params_(std::move(params)), cfg_(std::move(cfg)), spec_(std::move(spec)),
          n_scenarios_(n_scenarios), gamma_(gamma) {}
    Action decide(const GlobalState& state, int v, Rng& rng) override;

private:
    MlpParams params_;
    ObservationConfig cfg_;
    InstanceSpec spec_;
    int n_scenarios_;
    double gamma_;
};

Action rollout_decide(const GlobalState& state, int v, const MlpParams& params,
                      const ObservationConfig& cfg, const InstanceSpec& spec,
                      const std::vector<DemandScenario>& scenarios, double gamma,
                      double* chosen_value = nullptr, double* base_action_value = nullptr);

// Classical recourse over fixed routes inside the MDP.
class FixedRoutesPolicy : public Policy {
public:
    explicit FixedRoutesPolicy(std::vector<Route> routes) : routes_(std::move(routes)) {}
    void reset(const GlobalState& state) override;
    Action decide(const GlobalState& state, int v, Rng& rng) override;

private:
    std::vector<Route> routes_;
    std::vector<std::size_t> progress_;
};

// Stand-alone recourse simulation: serve route in order, restock on exhaustion,
// return home once the remaining time cannot cover next-leg plus return.
double simulate_fixed_routes(const std::vector<Route>& routes,
                             const CustomerRealization& realization,
                             const DemandScenario& scenario, const InstanceSpec& spec);

EpisodeLog run_episode(Policy& policy, const CustomerRealization& realization,
                       const DemandScenario& scenario, const InstanceSpec& spec, Rng& rng);

}  // namespace vcsd
