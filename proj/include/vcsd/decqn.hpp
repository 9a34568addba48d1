#pragma once

#include <deque>
#include <string>
#include <vector>

#include "vcsd/env.hpp"
#include "vcsd/neuralnet.hpp"
#include "vcsd/observation.hpp"

namespace vcsd {

struct Experience {
    GlobalState state;
    int vehicle = 0;
    Action action;
    double reward = 0.0;  // demand served at the vehicle's arrival (delayed)
    GlobalState next_state;
    int next_vehicle = 0;
};

class ReplayMemory {
public:
    explicit ReplayMemory(std::size_t capacity = 50000) : capacity_(capacity) {}

    void push(Experience exp) {
        if (buffer_.size() == capacity_) buffer_.pop_front();
        buffer_.push_back(std::move(exp));
    }
    std::size_t size() const { return buffer_.size(); }
    std::size_t capacity() const { return capacity_; }
    const Experience& at(std::size_t i) const { return buffer_[i]; }

private:
    std::size_t capacity_;
    std::deque<Experience> buffer_;
};

struct LinearSchedule {
    double start = 1.0;
    double end = 0.1;
    long decay_trials = 1;

    double at(long trial) const {
        if (trial >= decay_trials) return end;
        return start + (end - start) * static_cast<double>(trial) / static_cast<double>(decay_trials);
    }
};

struct TrainConfig {
    long trials_max = 0;
    int batch_size = 32;
    double beta_t = 0.05;     // per-epoch update probability
    long beta_d = 1000;       // target-sync period in trials
    double gamma = 0.999;
    LinearSchedule epsilon{1.0, 0.1, 1};
    LinearSchedule alpha{1e-3, 1e-4, 1};
    std::uint64_t seed = 0;
    ObservationConfig obs;
    LossConfig loss;
    long checkpoint_every = 0;        // 0 disables
    std::string checkpoint_path;
    int probe_realizations = 0;       // probe grid at checkpoints; 0 disables
    int probe_demands = 0;
    bool double_q = false;            // action by theta, value by target net
};

struct TrainStats {
    struct Point {
        long trial = 0;
        double probe_mean = 0.0;
        double loss_avg = 0.0;
        double epsilon = 0.0;
        double alpha = 0.0;
    };
    std::vector<Point> points;
};

void write_stats_csv(const TrainStats& stats, const std::string& path);

// Eq-28 TD target against the frozen network; r alone when the next position is
// terminal for the buffered vehicle.
double td_target(const Experience& exp, const MlpParams& target_params, const TrainConfig& cfg,
                 const InstanceSpec& spec);

// True when, at exp.next_state, the next vehicle sits at the depot with nothing reachable.
bool next_is_terminal(const Experience& exp);

Action epsilon_greedy(const Observation& obs, const std::vector<int>& targets,
                      const MlpParams& params, const GlobalState& state, int v, double epsilon,
                      Rng& rng);

// Distinct uniform indices; empty result signals an underfull memory.
std::vector<std::size_t> sample_batch_indices(const ReplayMemory& memory, int batch_size,
                                              Rng& rng);

struct TrainResult {
    MlpParams params;
    TrainStats stats;
};

TrainResult train(const InstanceSpec& spec, const TrainConfig& cfg, Rng& rng);

}  // namespace vcsd
