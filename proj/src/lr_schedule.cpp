#include "gsoftmax/lr_schedule.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gsoftmax {
namespace {

// Exponent offset accumulated by all pieces before piece_index, i.e. the
// log-rate (relative to exp_start_1) at the end epoch of the previous piece.
double piece_anchor(const ScheduleSpec& spec, std::size_t piece_index) {
    const double span = spec.max_epoch > 1 ? static_cast<double>(spec.max_epoch - 1) : 1.0;
    double anchor = spec.pieces.front().exp_start;
    int start_epoch = 1;
    for (std::size_t k = 0; k < piece_index; ++k) {
        const SchedulePiece& pc = spec.pieces[k];
        const double slope = (pc.exp_end - pc.exp_start) / span;
        anchor += slope * (pc.end_epoch - start_epoch);
        start_epoch = pc.end_epoch;
    }
    return anchor;
}

std::size_t piece_containing(const ScheduleSpec& spec, int epoch) {
    for (std::size_t i = 0; i < spec.pieces.size(); ++i) {
        if (epoch <= spec.pieces[i].end_epoch) return i;
    }
    throw std::domain_error("rate_at: epoch beyond schedule");
}

} // namespace

void ScheduleSpec::validate() const {
    if (!(base_rate > 0.0) || !std::isfinite(base_rate)) {
        throw std::domain_error("ScheduleSpec: base_rate must be > 0");
    }
    if (max_epoch < 1) {
        throw std::domain_error("ScheduleSpec: max_epoch must be >= 1");
    }
    if (pieces.empty()) {
        throw std::domain_error("ScheduleSpec: need at least one piece");
    }
    int prev_end = 0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const SchedulePiece& pc = pieces[i];
        if (!std::isfinite(pc.exp_start) || !std::isfinite(pc.exp_end)) {
            throw std::domain_error("ScheduleSpec: non-finite exponent");
        }
        if (pc.end_epoch <= prev_end) {
            throw std::domain_error("ScheduleSpec: end epochs must be strictly increasing");
        }
        if (i > 0 && pieces[i - 1].exp_end != pc.exp_start) {
            throw std::domain_error(
                "ScheduleSpec: piece " + std::to_string(i + 1) +
                " must start at the previous piece's end exponent");
        }
        prev_end = pc.end_epoch;
    }
    if (prev_end != max_epoch) {
        throw std::domain_error("ScheduleSpec: last piece must end at max_epoch");
    }
}

double piece_rate(const ScheduleSpec& spec, std::size_t piece_index, int epoch) {
    spec.validate();
    if (piece_index >= spec.pieces.size()) {
        throw std::domain_error("piece_rate: no such piece");
    }
    const SchedulePiece& pc = spec.pieces[piece_index];
    const double span = spec.max_epoch > 1 ? static_cast<double>(spec.max_epoch - 1) : 1.0;
    const double slope = (pc.exp_end - pc.exp_start) / span;
    const int start_epoch = piece_index == 0 ? 1 : spec.pieces[piece_index - 1].end_epoch;
    const double exponent = piece_anchor(spec, piece_index) + slope * (epoch - start_epoch);
    return std::exp(exponent) * spec.base_rate;
}

double rate_at(const ScheduleSpec& spec, int epoch) {
    spec.validate();
    if (epoch < 1 || epoch > spec.max_epoch) {
        throw std::domain_error("rate_at: epoch out of range");
    }
    return piece_rate(spec, piece_containing(spec, epoch), epoch);
}

double linspace_rate(double a, double b, double base, int max_epoch, int epoch) {
    if (max_epoch < 2) {
        throw std::domain_error("linspace_rate: need max_epoch >= 2");
    }
    if (epoch < 1 || epoch > max_epoch) {
        throw std::domain_error("linspace_rate: epoch out of range");
    }
    return (a + (b - a) / (max_epoch - 1) * (epoch - 1)) * base;
}

double staircase_rate(const std::vector<StairStep>& steps, int epoch) {
    if (steps.empty()) {
        throw std::domain_error("staircase_rate: no steps");
    }
    int prev_end = 0;
    for (const StairStep& s : steps) {
        if (s.end_epoch <= prev_end) {
            throw std::domain_error("staircase_rate: end epochs must be strictly increasing");
        }
        prev_end = s.end_epoch;
    }
    if (epoch < 1 || epoch > steps.back().end_epoch) {
        throw std::domain_error("staircase_rate: epoch not covered");
    }
    for (const StairStep& s : steps) {
        if (epoch <= s.end_epoch) return s.rate;
    }
    return steps.back().rate; // unreachable
}

} // namespace gsoftmax
