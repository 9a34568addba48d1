#pragma once

#include <string>
#include <vector>

#include "vcsd/rng.hpp"

namespace vcsd {

// Dense two-hidden-layer ReLU network, 64-bit floats throughout.
struct MlpParams {
    int h_in = 0, h1 = 0, h2 = 0, h_out = 0;
    // Row-major weights: w1[h1][h_in], w2[h2][h1], w3[h_out][h2].
    std::vector<double> w1, b1, w2, b2, w3, b3;

    std::size_t parameter_count() const;
    friend bool operator==(const MlpParams& a, const MlpParams& b) = default;
};

// Hidden sizes from the sizing rule floor(f * (h_in - h_out)) + h_out.
int hidden1_size(int h_in, int h_out);
int hidden2_size(int h_in, int h_out);

MlpParams init_mlp(int h_in, int h_out, Rng& rng);

std::vector<double> forward(const MlpParams& params, const std::vector<double>& x);

struct LossConfig {
    double delta = 5.0;
};

double huber(double delta_err, const LossConfig& cfg);
double huber_derivative(double delta_err, const LossConfig& cfg);

struct BatchSample {
    std::vector<double> x;
    int action_index = 0;
    double target = 0.0;
};

// Gradients of the mean Huber loss, flowing only through selected outputs.
struct Gradients {
    std::vector<double> w1, b1, w2, b2, w3, b3;
};

Gradients backward(const MlpParams& params, const std::vector<BatchSample>& batch,
                   const LossConfig& cfg);

// Mean Huber loss over the batch, for monitoring.
double batch_loss(const MlpParams& params, const std::vector<BatchSample>& batch,
                  const LossConfig& cfg);

struct AdamState {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long step = 0;
    std::vector<double> m;  // flat, sized to parameter_count
    std::vector<double> v;
};

AdamState make_adam_state(const MlpParams& params);
void adam_step(MlpParams& params, AdamState& state, const Gradients& grad, double lr);

void save_params(const MlpParams& params, const std::string& path);
MlpParams load_params(const std::string& path);
void save_params(const MlpParams& params, const AdamState& adam, const std::string& path);
MlpParams load_params(const std::string& path, AdamState& adam);

}  // namespace vcsd
