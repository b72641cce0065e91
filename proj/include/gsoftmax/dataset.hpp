#ifndef GSOFTMAX_DATASET_HPP
#define GSOFTMAX_DATASET_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace gsoftmax {

/// Labeled feature vectors for single-label classification.
struct Dataset {
    std::size_t feature_dim = 0;
    std::size_t num_classes = 0;
    std::vector<std::vector<double>> features;
    std::vector<int> labels;

    std::size_t size() const { return features.size(); }
};

/// Isotropic Gaussian clusters, one per class.
struct SyntheticBlobSpec {
    std::size_t num_classes = 0;
    std::size_t dim = 0;
    std::vector<std::vector<double>> centers; // one per class, length dim
    std::vector<double> spreads;              // one per class, > 0
    std::size_t samples_per_class = 0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Draw samples_per_class points per class. Deterministic for a fixed seed.
Dataset generate_blobs(const SyntheticBlobSpec& spec);

/// Read a CIFAR-10 binary batch file: records of 3073 bytes, one label byte
/// (0..9) followed by 3072 channel-major pixel bytes. Pixels are scaled to
/// [0, 1]. Throws DataError if the file is missing, its size is not a
/// multiple of 3073, or a label byte exceeds 9.
Dataset load_cifar10_binary(const std::string& path);

} // namespace gsoftmax

#endif
