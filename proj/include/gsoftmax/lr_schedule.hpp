#ifndef GSOFTMAX_LR_SCHEDULE_HPP
#define GSOFTMAX_LR_SCHEDULE_HPP

#include <cstddef>
#include <vector>

namespace gsoftmax {

/// One piece of a malleable schedule: the ramp's nominal exponent endpoints
/// (exp_start, exp_end) and the last epoch the piece covers.
struct SchedulePiece {
    int end_epoch = 0;
    double exp_start = 0.0;
    double exp_end = 0.0;
};

/// Piecewise log-linear learning-rate schedule. Within piece i the log-rate
/// advances with slope (exp_end_i - exp_start_i) / (max_epoch - 1) per epoch;
/// each piece starts where the previous one left off, so the curve is
/// continuous at piece boundaries. The first piece is anchored at exp_start_1,
/// making the single-piece case exactly the logspace schedule
/// exp(a + (b - a) * (epoch - 1) / (M - 1)) * base_rate.
struct ScheduleSpec {
    double base_rate = 0.1;
    int max_epoch = 1;
    std::vector<SchedulePiece> pieces;

    /// Throws std::domain_error unless base_rate > 0, end epochs are strictly
    /// increasing and finish at max_epoch, exponents are finite, and
    /// consecutive pieces hand off (exp_start_{i+1} == exp_end_i).
    void validate() const;
};

/// Learning rate at the given epoch (1-based). Always > 0.
/// Throws std::domain_error for epochs outside [1, max_epoch].
double rate_at(const ScheduleSpec& spec, int epoch);

/// The ramp of one specific piece evaluated at an epoch, ignoring which piece
/// actually contains it. Piece i+1 evaluated at piece i's end epoch equals
/// piece i's value there, which is the boundary-continuity property tests
/// exercise.
double piece_rate(const ScheduleSpec& spec, std::size_t piece_index, int epoch);

/// Linear interpolation (a + (b - a) * (epoch - 1) / (M - 1)) * base.
/// Requires M >= 2 and epoch in [1, M].
double linspace_rate(double a, double b, double base, int max_epoch, int epoch);

struct StairStep {
    int end_epoch = 0;
    double rate = 0.0;
};

/// Rate of the first step whose end_epoch covers the epoch. Steps must be
/// sorted by end_epoch; epochs beyond the last step are a domain error.
double staircase_rate(const std::vector<StairStep>& steps, int epoch);

} // namespace gsoftmax

#endif
