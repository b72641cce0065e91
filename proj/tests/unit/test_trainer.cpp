#include <doctest.h>

#include <cmath>

#include "gsoftmax/errors.hpp"
#include "gsoftmax/trainer.hpp"

using namespace gsoftmax;

namespace {

SyntheticBlobSpec separable_spec(std::uint64_t seed, std::size_t per_class = 50) {
    SyntheticBlobSpec spec;
    spec.num_classes = 2;
    spec.dim = 2;
    spec.centers = {{-3.0, -3.0}, {3.0, 3.0}};
    spec.spreads = {1.0, 1.0};
    spec.samples_per_class = per_class;
    spec.seed = seed;
    return spec;
}

MlpConfig small_mlp(int input_dim, int output_dim, std::uint64_t seed) {
    MlpConfig cfg;
    cfg.input_dim = input_dim;
    cfg.hidden_dims = {8};
    cfg.output_dim = output_dim;
    cfg.seed = seed;
    return cfg;
}

TrainOptions base_options(LossMode mode, int epochs, double rate = 0.05) {
    TrainOptions options;
    options.loss_mode = mode;
    options.epochs = epochs;
    options.batch_size = 16;
    options.schedule = LinspaceSpec{1.0, 1.0, rate};
    options.shuffle_seed = 17;
    return options;
}

bool same_weights(const Mlp& a, const Mlp& b) {
    for (std::size_t l = 0; l < a.layers().size(); ++l) {
        if (a.layers()[l].weights != b.layers()[l].weights) return false;
        if (a.layers()[l].bias != b.layers()[l].bias) return false;
    }
    return true;
}

} // namespace

TEST_CASE("one SGD step matches the hand-computed update rule") {
    // One input, one class, linear model, one sample: everything is scalar.
    Dataset data;
    data.feature_dim = 1;
    data.num_classes = 1;
    data.features = {{1.0}};
    data.labels = {0};

    MlpConfig cfg;
    cfg.input_dim = 1;
    cfg.output_dim = 1;
    cfg.seed = 3;

    TrainOptions options = base_options(LossMode::msml, 1, 0.25);
    options.batch_size = 1;
    options.optimizer.momentum = 0.9;
    options.optimizer.weight_decay = 5e-4;

    const Mlp init(cfg); // same seed, same initial weights
    const double w0 = init.layers()[0].weights[0];
    const double z = w0 * 1.0; // bias starts at 0
    const double sig = 1.0 / (1.0 + std::exp(-z));
    const double grad_w = (sig - 1.0) * 1.0;
    const double grad_b = sig - 1.0;
    const double vw = 0.9 * 0.0 - 0.25 * (grad_w + 5e-4 * w0);
    const double vb = 0.9 * 0.0 - 0.25 * (grad_b + 5e-4 * 0.0);

    const TrainResult result = train(cfg, options, data, data);
    CHECK(result.model.layers()[0].weights[0] == w0 + vw);
    CHECK(result.model.layers()[0].bias[0] == 0.0 + vb);
}

TEST_CASE("lambda-zero and softmax trainings produce bit-identical trajectories") {
    const Dataset train_data = generate_blobs(separable_spec(100));
    const Dataset test_data = generate_blobs(separable_spec(101));
    const MlpConfig cfg = small_mlp(2, 2, 5);

    TrainOptions softmax_options = base_options(LossMode::softmax, 6);
    TrainOptions gsoftmax_options = base_options(LossMode::gsoftmax, 6);
    gsoftmax_options.predictor.lambda = 0.0;

    const TrainResult a = train(cfg, softmax_options, train_data, test_data);
    const TrainResult b = train(cfg, gsoftmax_options, train_data, test_data);

    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t e = 0; e < a.history.size(); ++e) {
        CHECK(a.history[e].train_loss == b.history[e].train_loss);
        CHECK(a.history[e].train_metric == b.history[e].train_metric);
        CHECK(a.history[e].test_metric == b.history[e].test_metric);
        CHECK(a.history[e].lr == b.history[e].lr);
    }
    CHECK(same_weights(a.model, b.model));
    // With lambda = 0 the distribution parameters receive zero gradient and,
    // starting from (mu, log sigma) = (0, 0), zero weight decay.
    for (const ClassGaussian& c : b.predictor->classes) {
        CHECK(c.mu() == 0.0);
        CHECK(c.sigma() == 1.0);
    }
}

TEST_CASE("training is deterministic given a seed") {
    const Dataset train_data = generate_blobs(separable_spec(200));
    const Dataset test_data = generate_blobs(separable_spec(201));
    const MlpConfig cfg = small_mlp(2, 2, 11);
    TrainOptions options = base_options(LossMode::gsoftmax, 4);

    const TrainResult a = train(cfg, options, train_data, test_data);
    const TrainResult b = train(cfg, options, train_data, test_data);
    for (std::size_t e = 0; e < a.history.size(); ++e) {
        CHECK(a.history[e].train_loss == b.history[e].train_loss);
        CHECK(a.history[e].test_metric == b.history[e].test_metric);
    }
    CHECK(same_weights(a.model, b.model));
}

TEST_CASE("both losses learn well-separated blobs") {
    const Dataset train_data = generate_blobs(separable_spec(300));
    const Dataset test_data = generate_blobs(separable_spec(301));
    const MlpConfig cfg = small_mlp(2, 2, 21);
    for (LossMode mode : {LossMode::softmax, LossMode::gsoftmax}) {
        const TrainResult result =
            train(cfg, base_options(mode, 50), train_data, test_data);
        CHECK(result.history.back().test_metric >= 0.99);
    }
}

TEST_CASE("distribution parameters move when lambda is positive") {
    const Dataset train_data = generate_blobs(separable_spec(400));
    const Dataset test_data = generate_blobs(separable_spec(401));
    const MlpConfig cfg = small_mlp(2, 2, 31);
    TrainOptions options = base_options(LossMode::gsoftmax, 5);
    options.predictor.lambda = 1.0;

    const TrainResult result = train(cfg, options, train_data, test_data);
    bool mu_moved = false;
    bool sigma_moved = false;
    for (const ClassGaussian& c : result.predictor->classes) {
        CHECK(c.sigma() > 0.0);
        mu_moved = mu_moved || c.mu() != 0.0;
        sigma_moved = sigma_moved || c.sigma() != 1.0;
    }
    CHECK(mu_moved);
    CHECK(sigma_moved);
}

TEST_CASE("final train loss drops on the blob fixture across seeds") {
    for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
        const Dataset train_data = generate_blobs(separable_spec(500 + seed));
        const Dataset test_data = generate_blobs(separable_spec(600 + seed));
        TrainOptions options = base_options(LossMode::gsoftmax, 10);
        options.shuffle_seed = seed;
        const TrainResult result =
            train(small_mlp(2, 2, seed), options, train_data, test_data);
        CHECK(result.history.back().train_loss < result.history.front().train_loss);
    }
}

TEST_CASE("divergent training aborts with a diagnostic") {
    const Dataset train_data = generate_blobs(separable_spec(700));
    TrainOptions options = base_options(LossMode::softmax, 3, 1e18);
    CHECK_THROWS_AS(train(small_mlp(2, 2, 41), options, train_data, train_data),
                    NumericError);
}

TEST_CASE("shape validation") {
    const Dataset train_data = generate_blobs(separable_spec(800));
    SUBCASE("output dim must match the class count") {
        CHECK_THROWS_AS(train(small_mlp(2, 3, 1), base_options(LossMode::softmax, 1),
                              train_data, train_data),
                        std::domain_error);
    }
    SUBCASE("dual modes need 2m outputs") {
        CHECK_THROWS_AS(train(small_mlp(2, 2, 1),
                              base_options(LossMode::dual_sigmoid, 1), train_data,
                              train_data),
                        std::domain_error);
        CHECK_NOTHROW(train(small_mlp(2, 4, 1), base_options(LossMode::dual_sigmoid, 1),
                            train_data, train_data));
    }
    SUBCASE("input dim must match the dataset") {
        CHECK_THROWS_AS(train(small_mlp(3, 2, 1), base_options(LossMode::softmax, 1),
                              train_data, train_data),
                        std::domain_error);
    }
}

TEST_CASE("multi-label modes train and report mAP") {
    const Dataset train_data = generate_blobs(separable_spec(900));
    const Dataset test_data = generate_blobs(separable_spec(901));
    for (LossMode mode :
         {LossMode::msml, LossMode::dual_sigmoid, LossMode::gsoftmax_multilabel}) {
        const int outputs = loss_mode_is_dual(mode) ? 4 : 2;
        const TrainResult result = train(small_mlp(2, outputs, 51),
                                         base_options(mode, 8), train_data, test_data);
        CHECK(result.metric_name == "map");
        CHECK(result.history.back().test_metric > 0.9);
        CHECK(result.history.back().test_metric <= 1.0);
        CHECK(std::isfinite(result.history.back().train_loss));
    }
}

TEST_CASE("learnable lambda stays non-negative and moves") {
    const Dataset train_data = generate_blobs(separable_spec(950));
    TrainOptions options = base_options(LossMode::gsoftmax, 5);
    options.predictor.learn_lambda = true;
    const TrainResult result =
        train(small_mlp(2, 2, 61), options, train_data, train_data);
    CHECK(result.predictor->lambda >= 0.0);
    CHECK(result.predictor->lambda != 1.0);
}

TEST_CASE("export_features") {
    SUBCASE("identity network reproduces its input") {
        MlpConfig cfg;
        cfg.input_dim = 2;
        cfg.output_dim = 2;
        cfg.seed = 0;
        Mlp model(cfg);
        model.layers()[0].weights = {1.0, 0.0, 0.0, 1.0};
        model.layers()[0].bias = {0.0, 0.0};
        Dataset data;
        data.feature_dim = 2;
        data.num_classes = 2;
        data.features = {{0.25, -1.5}, {2.0, 0.125}};
        data.labels = {0, 1};
        const FeatureDump dump = export_features(model, data);
        REQUIRE(dump.rows.size() == 2);
        CHECK(dump.num_outputs == 2);
        CHECK(dump.rows[0].first == 0);
        CHECK(dump.rows[0].second == data.features[0]);
        CHECK(dump.rows[1].second == data.features[1]);
    }
    SUBCASE("zeroed network emits zero features") {
        MlpConfig cfg;
        cfg.input_dim = 2;
        cfg.output_dim = 2;
        cfg.seed = 0;
        Mlp model(cfg);
        std::fill(model.layers()[0].weights.begin(), model.layers()[0].weights.end(),
                  0.0);
        Dataset data;
        data.feature_dim = 2;
        data.num_classes = 2;
        data.features = {{1.0, 2.0}};
        data.labels = {1};
        const FeatureDump dump = export_features(model, data);
        CHECK(dump.rows[0].second == std::vector<double>{0.0, 0.0});
    }
}
