#ifndef GSOFTMAX_GRADCHECK_HPP
#define GSOFTMAX_GRADCHECK_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace gsoftmax {

/// Worst-case finite-difference disagreement for one gradient block.
struct GradBlockReport {
    std::string name;
    double tolerance = 1e-5;
    double max_rel_err = 0.0;
    std::uint64_t worst_seed = 0; // per-trial RNG seed of the worst case
    std::size_t worst_index = 0;  // parameter index within the block

    bool passed() const { return max_rel_err <= tolerance; }
};

struct GradCheckReport {
    std::vector<GradBlockReport> blocks;

    bool passed() const;
    const GradBlockReport* find(const std::string& name) const;
};

/// Check every analytic gradient of the single-label head (d_x, d_mu,
/// d_sigma) against central finite differences (step 1e-5) of the scalar
/// loss on random configurations covering m in {2, 10, 100}, sigma in
/// [0.1, 10] and lambda in {0, 0.5, 1}. The disagreement measure is
/// |analytic - numeric| / max(1, |analytic|, |numeric|), i.e. relative error
/// with an absolute floor for small gradients where the difference quotient
/// itself carries round-off of order 1e-10.
GradCheckReport check_single_label_gradients(int trials, std::uint64_t seed);

/// Same for the multi-label losses: the per-class soft-margin gradient, the
/// two-bank sigmoid gradients (both at tolerance 1e-6), and all six blocks of
/// the Gaussian-augmented loss (tolerance 1e-5).
GradCheckReport check_multilabel_gradients(int trials, std::uint64_t seed);

/// Both suites combined; what the gradcheck CLI command runs.
GradCheckReport run_full_gradcheck(int trials, std::uint64_t seed);

} // namespace gsoftmax

#endif
