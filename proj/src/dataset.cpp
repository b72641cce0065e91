#include "gsoftmax/dataset.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "gsoftmax/errors.hpp"

namespace gsoftmax {

namespace {
constexpr std::size_t kCifarRecordBytes = 3073; // 1 label byte + 32*32*3 pixels
constexpr std::size_t kCifarPixels = 3072;
} // namespace

void SyntheticBlobSpec::validate() const {
    if (num_classes == 0 || dim == 0 || samples_per_class == 0) {
        throw std::domain_error("SyntheticBlobSpec: counts must be positive");
    }
    if (centers.size() != num_classes || spreads.size() != num_classes) {
        throw std::domain_error("SyntheticBlobSpec: need one center and spread per class");
    }
    for (const auto& c : centers) {
        if (c.size() != dim) {
            throw std::domain_error("SyntheticBlobSpec: center dimension mismatch");
        }
        for (double v : c) {
            if (!std::isfinite(v)) {
                throw std::domain_error("SyntheticBlobSpec: non-finite center");
            }
        }
    }
    for (double s : spreads) {
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw std::domain_error("SyntheticBlobSpec: spreads must be > 0");
        }
    }
}

Dataset generate_blobs(const SyntheticBlobSpec& spec) {
    spec.validate();
    Dataset ds;
    ds.feature_dim = spec.dim;
    ds.num_classes = spec.num_classes;
    ds.features.reserve(spec.num_classes * spec.samples_per_class);
    ds.labels.reserve(spec.num_classes * spec.samples_per_class);

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> unit(0.0, 1.0);
    for (std::size_t c = 0; c < spec.num_classes; ++c) {
        for (std::size_t s = 0; s < spec.samples_per_class; ++s) {
            std::vector<double> x(spec.dim);
            for (std::size_t d = 0; d < spec.dim; ++d) {
                x[d] = spec.centers[c][d] + spec.spreads[c] * unit(rng);
            }
            ds.features.push_back(std::move(x));
            ds.labels.push_back(static_cast<int>(c));
        }
    }
    return ds;
}

Dataset load_cifar10_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("load_cifar10_binary: cannot open " + path);
    }
    in.seekg(0, std::ios::end);
    const auto size = static_cast<std::size_t>(in.tellg());
    in.seekg(0, std::ios::beg);
    if (size % kCifarRecordBytes != 0) {
        throw DataError("load_cifar10_binary: file size " + std::to_string(size) +
                        " is not a multiple of " + std::to_string(kCifarRecordBytes));
    }
    const std::size_t records = size / kCifarRecordBytes;

    Dataset ds;
    ds.feature_dim = kCifarPixels;
    ds.num_classes = 10;
    ds.features.reserve(records);
    ds.labels.reserve(records);

    std::vector<unsigned char> record(kCifarRecordBytes);
    for (std::size_t r = 0; r < records; ++r) {
        if (!in.read(reinterpret_cast<char*>(record.data()),
                     static_cast<std::streamsize>(record.size()))) {
            throw DataError("load_cifar10_binary: short read at record " + std::to_string(r));
        }
        const unsigned char label = record[0];
        if (label > 9) {
            throw DataError("load_cifar10_binary: label byte " + std::to_string(label) +
                            " out of range at record " + std::to_string(r));
        }
        std::vector<double> pixels(kCifarPixels);
        for (std::size_t i = 0; i < kCifarPixels; ++i) {
            pixels[i] = static_cast<double>(record[i + 1]) / 255.0;
        }
        ds.features.push_back(std::move(pixels));
        ds.labels.push_back(label);
    }
    return ds;
}

} // namespace gsoftmax
