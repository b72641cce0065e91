#ifndef GSOFTMAX_MLP_HPP
#define GSOFTMAX_MLP_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gsoftmax {

enum class Activation { relu };

struct MlpConfig {
    int input_dim = 0;
    std::vector<int> hidden_dims;
    int output_dim = 0;
    Activation activation = Activation::relu;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Fully connected layer, weights stored row-major (out x in).
struct DenseLayer {
    int in = 0;
    int out = 0;
    std::vector<double> weights;
    std::vector<double> bias;
};

struct MlpGradients {
    std::vector<std::vector<double>> d_weights;
    std::vector<std::vector<double>> d_bias;

    void zero();
    void scale(double factor);
};

/// Small feed-forward ReLU network with explicit forward/backward passes.
/// Hidden layers apply ReLU; the final layer is linear so its outputs can be
/// fed to any of the loss heads.
class Mlp {
public:
    explicit Mlp(const MlpConfig& config);

    const MlpConfig& config() const { return config_; }
    std::vector<DenseLayer>& layers() { return layers_; }
    const std::vector<DenseLayer>& layers() const { return layers_; }

    /// Forward pass keeping every layer's post-activation output.
    /// activations[0] is the input copy; activations.back() are the logits.
    void forward(std::span<const double> input,
                 std::vector<std::vector<double>>& activations) const;

    std::vector<double> predict_logits(std::span<const double> input) const;

    /// Accumulate parameter gradients for one sample into `grads` given the
    /// loss gradient at the logits. `activations` must come from forward().
    void backward(const std::vector<std::vector<double>>& activations,
                  std::span<const double> d_logits, MlpGradients& grads) const;

    MlpGradients zero_gradients() const;

private:
    MlpConfig config_;
    std::vector<DenseLayer> layers_;
};

} // namespace gsoftmax

#endif
