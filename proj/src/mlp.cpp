#include "gsoftmax/mlp.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace gsoftmax {

void MlpConfig::validate() const {
    if (input_dim < 1 || output_dim < 1) {
        throw std::domain_error("MlpConfig: input/output dims must be >= 1");
    }
    for (int h : hidden_dims) {
        if (h < 1) {
            throw std::domain_error("MlpConfig: hidden dims must be >= 1");
        }
    }
}

void MlpGradients::zero() {
    for (auto& w : d_weights) std::fill(w.begin(), w.end(), 0.0);
    for (auto& b : d_bias) std::fill(b.begin(), b.end(), 0.0);
}

void MlpGradients::scale(double factor) {
    for (auto& w : d_weights) {
        for (double& v : w) v *= factor;
    }
    for (auto& b : d_bias) {
        for (double& v : b) v *= factor;
    }
}

Mlp::Mlp(const MlpConfig& config) : config_(config) {
    config_.validate();
    std::vector<int> dims;
    dims.push_back(config_.input_dim);
    dims.insert(dims.end(), config_.hidden_dims.begin(), config_.hidden_dims.end());
    dims.push_back(config_.output_dim);

    std::mt19937_64 rng(config_.seed);
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        DenseLayer layer;
        layer.in = dims[l];
        layer.out = dims[l + 1];
        layer.weights.resize(static_cast<std::size_t>(layer.in) * layer.out);
        layer.bias.assign(layer.out, 0.0);
        // He-style uniform fan-in init for the ReLU stack.
        const double limit = std::sqrt(6.0 / layer.in);
        std::uniform_real_distribution<double> dist(-limit, limit);
        for (double& w : layer.weights) w = dist(rng);
        layers_.push_back(std::move(layer));
    }
}

void Mlp::forward(std::span<const double> input,
                  std::vector<std::vector<double>>& activations) const {
    if (input.size() != static_cast<std::size_t>(config_.input_dim)) {
        throw std::invalid_argument("Mlp::forward: input dimension mismatch");
    }
    activations.assign(1, std::vector<double>(input.begin(), input.end()));
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const DenseLayer& layer = layers_[l];
        const std::vector<double>& prev = activations.back();
        std::vector<double> next(layer.out);
        for (int o = 0; o < layer.out; ++o) {
            double acc = layer.bias[o];
            const double* wrow = &layer.weights[static_cast<std::size_t>(o) * layer.in];
            for (int i = 0; i < layer.in; ++i) acc += wrow[i] * prev[i];
            next[o] = acc;
        }
        const bool is_last = l + 1 == layers_.size();
        if (!is_last) {
            for (double& v : next) v = v > 0.0 ? v : 0.0; // ReLU
        }
        activations.push_back(std::move(next));
    }
}

std::vector<double> Mlp::predict_logits(std::span<const double> input) const {
    std::vector<std::vector<double>> acts;
    forward(input, acts);
    return acts.back();
}

MlpGradients Mlp::zero_gradients() const {
    MlpGradients g;
    for (const DenseLayer& layer : layers_) {
        g.d_weights.emplace_back(layer.weights.size(), 0.0);
        g.d_bias.emplace_back(layer.bias.size(), 0.0);
    }
    return g;
}

void Mlp::backward(const std::vector<std::vector<double>>& activations,
                   std::span<const double> d_logits, MlpGradients& grads) const {
    if (activations.size() != layers_.size() + 1) {
        throw std::invalid_argument("Mlp::backward: bad activation stack");
    }
    if (d_logits.size() != static_cast<std::size_t>(config_.output_dim)) {
        throw std::invalid_argument("Mlp::backward: logit gradient dimension mismatch");
    }
    std::vector<double> delta(d_logits.begin(), d_logits.end());
    for (std::size_t l = layers_.size(); l-- > 0;) {
        const DenseLayer& layer = layers_[l];
        const std::vector<double>& prev = activations[l];
        auto& dW = grads.d_weights[l];
        auto& db = grads.d_bias[l];
        for (int o = 0; o < layer.out; ++o) {
            const double d = delta[o];
            db[o] += d;
            double* drow = &dW[static_cast<std::size_t>(o) * layer.in];
            for (int i = 0; i < layer.in; ++i) drow[i] += d * prev[i];
        }
        if (l == 0) break;
        std::vector<double> prev_delta(layer.in, 0.0);
        for (int o = 0; o < layer.out; ++o) {
            const double d = delta[o];
            const double* wrow = &layer.weights[static_cast<std::size_t>(o) * layer.in];
            for (int i = 0; i < layer.in; ++i) prev_delta[i] += d * wrow[i];
        }
        // ReLU mask of the layer below (activations[l] are its outputs).
        for (int i = 0; i < layer.in; ++i) {
            if (prev[i] <= 0.0) prev_delta[i] = 0.0;
        }
        delta = std::move(prev_delta);
    }
}

} // namespace gsoftmax
