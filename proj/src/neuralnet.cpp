#include "vcsd/neuralnet.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "vcsd/errors.hpp"

namespace vcsd {

std::size_t MlpParams::parameter_count() const {
    return w1.size() + b1.size() + w2.size() + b2.size() + w3.size() + b3.size();
}

int hidden1_size(int h_in, int h_out) {
    return static_cast<int>(std::floor(2.0 / 3.0 * (h_in - h_out))) + h_out;
}

int hidden2_size(int h_in, int h_out) {
    return static_cast<int>(std::floor(1.0 / 3.0 * (h_in - h_out))) + h_out;
}

namespace {

// He-uniform: U(-sqrt(6/fan_in), sqrt(6/fan_in)).
void he_uniform(std::vector<double>& w, int fan_in, Rng& rng) {
    const double limit = std::sqrt(6.0 / fan_in);
    for (double& x : w) x = (2.0 * rng.uniform() - 1.0) * limit;
}

}  // namespace

MlpParams init_mlp(int h_in, int h_out, Rng& rng) {
    if (h_in < 1 || h_out < 1) throw UsageError("network sizes must be positive");
    MlpParams p;
    p.h_in = h_in;
    p.h_out = h_out;
    p.h1 = hidden1_size(h_in, h_out);
    p.h2 = hidden2_size(h_in, h_out);
    p.w1.resize(static_cast<std::size_t>(p.h1) * h_in);
    p.b1.assign(p.h1, 0.0);
    p.w2.resize(static_cast<std::size_t>(p.h2) * p.h1);
    p.b2.assign(p.h2, 0.0);
    p.w3.resize(static_cast<std::size_t>(h_out) * p.h2);
    p.b3.assign(h_out, 0.0);
    he_uniform(p.w1, h_in, rng);
    he_uniform(p.w2, p.h1, rng);
    he_uniform(p.w3, p.h2, rng);
    return p;
}

namespace {

struct ForwardPass {
    std::vector<double> z1, a1, z2, a2, out;
};

ForwardPass run_forward(const MlpParams& p, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != p.h_in) throw UsageError("input size mismatch");
    ForwardPass f;
    f.z1.assign(p.h1, 0.0);
    for (int i = 0; i < p.h1; ++i) {
        double s = p.b1[i];
        const double* row = &p.w1[static_cast<std::size_t>(i) * p.h_in];
        for (int j = 0; j < p.h_in; ++j) s += row[j] * x[j];
        f.z1[i] = s;
    }
    f.a1 = f.z1;
    for (double& v : f.a1) v = v > 0.0 ? v : 0.0;

    f.z2.assign(p.h2, 0.0);
    for (int i = 0; i < p.h2; ++i) {
        double s = p.b2[i];
        const double* row = &p.w2[static_cast<std::size_t>(i) * p.h1];
        for (int j = 0; j < p.h1; ++j) s += row[j] * f.a1[j];
        f.z2[i] = s;
    }
    f.a2 = f.z2;
    for (double& v : f.a2) v = v > 0.0 ? v : 0.0;

    f.out.assign(p.h_out, 0.0);
    for (int i = 0; i < p.h_out; ++i) {
        double s = p.b3[i];
        const double* row = &p.w3[static_cast<std::size_t>(i) * p.h2];
        for (int j = 0; j < p.h2; ++j) s += row[j] * f.a2[j];
        f.out[i] = s;
    }
    return f;
}

}  // namespace

std::vector<double> forward(const MlpParams& params, const std::vector<double>& x) {
    return run_forward(params, x).out;
}

double huber(double delta_err, const LossConfig& cfg) {
    const double a = std::abs(delta_err);
    if (a <= cfg.delta) return 0.5 * delta_err * delta_err;
    return cfg.delta * (a - 0.5 * cfg.delta);
}

double huber_derivative(double delta_err, const LossConfig& cfg) {
    if (std::abs(delta_err) <= cfg.delta) return delta_err;
    return delta_err > 0.0 ? cfg.delta : -cfg.delta;
}

Gradients backward(const MlpParams& p, const std::vector<BatchSample>& batch,
                   const LossConfig& cfg) {
    Gradients g;
    g.w1.assign(p.w1.size(), 0.0);
    g.b1.assign(p.b1.size(), 0.0);
    g.w2.assign(p.w2.size(), 0.0);
    g.b2.assign(p.b2.size(), 0.0);
    g.w3.assign(p.w3.size(), 0.0);
    g.b3.assign(p.b3.size(), 0.0);
    if (batch.empty()) return g;

    const double scale = 1.0 / static_cast<double>(batch.size());
    for (const BatchSample& s : batch) {
        if (s.action_index < 0 || s.action_index >= p.h_out)
            throw UsageError("action index out of range");
        const ForwardPass f = run_forward(p, s.x);
        const double err = f.out[s.action_index] - s.target;
        const double dout = huber_derivative(err, cfg) * scale;

        // Only the selected output carries gradient.
        std::vector<double> da2(p.h2, 0.0);
        const double* w3row = &p.w3[static_cast<std::size_t>(s.action_index) * p.h2];
        double* gw3row = &g.w3[static_cast<std::size_t>(s.action_index) * p.h2];
        for (int j = 0; j < p.h2; ++j) {
            gw3row[j] += dout * f.a2[j];
            da2[j] = dout * w3row[j];
        }
        g.b3[s.action_index] += dout;

        std::vector<double> da1(p.h1, 0.0);
        for (int i = 0; i < p.h2; ++i) {
            if (f.z2[i] <= 0.0) continue;
            const double dz = da2[i];
            const double* w2row = &p.w2[static_cast<std::size_t>(i) * p.h1];
            double* gw2row = &g.w2[static_cast<std::size_t>(i) * p.h1];
            for (int j = 0; j < p.h1; ++j) {
                gw2row[j] += dz * f.a1[j];
                da1[j] += dz * w2row[j];
            }
            g.b2[i] += dz;
        }

        for (int i = 0; i < p.h1; ++i) {
            if (f.z1[i] <= 0.0) continue;
            const double dz = da1[i];
            double* gw1row = &g.w1[static_cast<std::size_t>(i) * p.h_in];
            for (int j = 0; j < p.h_in; ++j) gw1row[j] += dz * s.x[j];
            g.b1[i] += dz;
        }
    }
    return g;
}

double batch_loss(const MlpParams& params, const std::vector<BatchSample>& batch,
                  const LossConfig& cfg) {
    if (batch.empty()) return 0.0;
    double total = 0.0;
    for (const BatchSample& s : batch) {
        const std::vector<double> out = forward(params, s.x);
        total += huber(out.at(s.action_index) - s.target, cfg);
    }
    return total / static_cast<double>(batch.size());
}

AdamState make_adam_state(const MlpParams& params) {
    AdamState st;
    st.m.assign(params.parameter_count(), 0.0);
    st.v.assign(params.parameter_count(), 0.0);
    return st;
}

namespace {

void adam_block(std::vector<double>& w, const std::vector<double>& g, AdamState& st,
                std::size_t& off, double lr, double bc1, double bc2) {
    for (std::size_t i = 0; i < w.size(); ++i, ++off) {
        st.m[off] = st.beta1 * st.m[off] + (1.0 - st.beta1) * g[i];
        st.v[off] = st.beta2 * st.v[off] + (1.0 - st.beta2) * g[i] * g[i];
        const double mhat = st.m[off] / bc1;
        const double vhat = st.v[off] / bc2;
        w[i] -= lr * mhat / (std::sqrt(vhat) + st.eps);
    }
}

}  // namespace

void adam_step(MlpParams& params, AdamState& st, const Gradients& grad, double lr) {
    if (st.m.size() != params.parameter_count())
        throw UsageError("optimizer state does not match the network");
    ++st.step;
    const double bc1 = 1.0 - std::pow(st.beta1, st.step);
    const double bc2 = 1.0 - std::pow(st.beta2, st.step);
    std::size_t off = 0;
    adam_block(params.w1, grad.w1, st, off, lr, bc1, bc2);
    adam_block(params.b1, grad.b1, st, off, lr, bc1, bc2);
    adam_block(params.w2, grad.w2, st, off, lr, bc1, bc2);
    adam_block(params.b2, grad.b2, st, off, lr, bc1, bc2);
    adam_block(params.w3, grad.w3, st, off, lr, bc1, bc2);
    adam_block(params.b3, grad.b3, st, off, lr, bc1, bc2);
}

namespace {

void write_vec(std::ostream& os, const char* name, const std::vector<double>& v) {
    os << name << ' ' << v.size();
    for (double x : v) os << ' ' << x;
    os << '\n';
}

std::vector<double> read_vec(std::istream& is, const std::string& expect) {
    std::string name;
    std::size_t n = 0;
    if (!(is >> name >> n) || name != expect)
        throw ParseError("bad parameter block, expected " + expect, 0);
    std::vector<double> v(n);
    for (double& x : v)
        if (!(is >> x)) throw ParseError("truncated parameter block " + expect, 0);
    return v;
}

void write_header(std::ostream& os, const MlpParams& p) {
    os << "vcsd-mlp 1\n";
    os << "sizes " << p.h_in << ' ' << p.h1 << ' ' << p.h2 << ' ' << p.h_out << '\n';
}

MlpParams read_body(std::istream& is) {
    std::string magic;
    int version = 0;
    if (!(is >> magic >> version) || magic != "vcsd-mlp" || version != 1)
        throw ParseError("not a network parameter file", 1);
    std::string tag;
    MlpParams p;
    if (!(is >> tag >> p.h_in >> p.h1 >> p.h2 >> p.h_out) || tag != "sizes")
        throw ParseError("missing network sizes", 2);
    p.w1 = read_vec(is, "w1");
    p.b1 = read_vec(is, "b1");
    p.w2 = read_vec(is, "w2");
    p.b2 = read_vec(is, "b2");
    p.w3 = read_vec(is, "w3");
    p.b3 = read_vec(is, "b3");
    if (p.w1.size() != static_cast<std::size_t>(p.h1) * p.h_in ||
        p.w2.size() != static_cast<std::size_t>(p.h2) * p.h1 ||
        p.w3.size() != static_cast<std::size_t>(p.h_out) * p.h2 ||
        p.b1.size() != static_cast<std::size_t>(p.h1) ||
        p.b2.size() != static_cast<std::size_t>(p.h2) ||
        p.b3.size() != static_cast<std::size_t>(p.h_out))
        throw DataError("network parameter sizes are inconsistent");
    return p;
}

}  // namespace

void save_params(const MlpParams& params, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot write file: " + path);
    os << std::setprecision(17);
    write_header(os, params);
    write_vec(os, "w1", params.w1);
    write_vec(os, "b1", params.b1);
    write_vec(os, "w2", params.w2);
    write_vec(os, "b2", params.b2);
    write_vec(os, "w3", params.w3);
    write_vec(os, "b3", params.b3);
    if (!os) throw IoError("write failed: " + path);
}

MlpParams load_params(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot read file: " + path);
    return read_body(is);
}

void save_params(const MlpParams& params, const AdamState& adam, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot write file: " + path);
    os << std::setprecision(17);
    write_header(os, params);
    write_vec(os, "w1", params.w1);
    write_vec(os, "b1", params.b1);
    write_vec(os, "w2", params.w2);
    write_vec(os, "b2", params.b2);
    write_vec(os, "w3", params.w3);
    write_vec(os, "b3", params.b3);
    os << "adam " << adam.step << '\n';
    write_vec(os, "m", adam.m);
    write_vec(os, "v", adam.v);
    if (!os) throw IoError("write failed: " + path);
}

MlpParams load_params(const std::string& path, AdamState& adam) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot read file: " + path);
    MlpParams p = read_body(is);
    std::string tag;
    if (!(is >> tag >> adam.step) || tag != "adam")
        throw ParseError("missing optimizer state", 0);
    adam.m = read_vec(is, "m");
    adam.v = read_vec(is, "v");
    if (adam.m.size() != p.parameter_count() || adam.v.size() != p.parameter_count())
        throw DataError("optimizer state does not match the network");
    return p;
}

}  // namespace vcsd
