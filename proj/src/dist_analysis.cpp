#include "gsoftmax/dist_analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gsoftmax/errors.hpp"

namespace gsoftmax {
namespace {

constexpr double kSigmaFloor = 1e-9;

void check_fit(const EmpiricalGaussian& g, const char* who) {
    if (!(g.sigma > 0.0) || !std::isfinite(g.sigma) || !std::isfinite(g.mu)) {
        throw std::domain_error(std::string(who) + ": invalid Gaussian fit");
    }
}

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Continued fraction for the regularized incomplete beta (Lentz's method).
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = std::numeric_limits<double>::epsilon();
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 10.0 * kEps) break;
    }
    return h;
}

std::vector<int> sorted_keys(const std::map<int, std::vector<double>>& m) {
    std::vector<int> keys;
    keys.reserve(m.size());
    for (const auto& [k, v] : m) {
        (void)v;
        keys.push_back(k);
    }
    return keys;
}

} // namespace

EmpiricalGaussian fit_gaussian(std::span<const double> samples, StdDevMode mode) {
    if (samples.size() < 2) {
        throw std::domain_error("fit_gaussian: need at least 2 samples");
    }
    for (double v : samples) {
        if (!std::isfinite(v)) {
            throw std::domain_error("fit_gaussian: non-finite sample");
        }
    }
    EmpiricalGaussian g;
    g.n = static_cast<int>(samples.size());
    g.mu = mean_of(samples);
    double ss = 0.0;
    for (double v : samples) {
        const double d = v - g.mu;
        ss += d * d;
    }
    const double divisor = mode == StdDevMode::unbiased
                               ? static_cast<double>(g.n - 1)
                               : static_cast<double>(g.n);
    g.sigma = std::sqrt(ss / divisor);
    if (g.sigma < kSigmaFloor) g.sigma = kSigmaFloor;
    return g;
}

double kl_gaussian(const EmpiricalGaussian& a, const EmpiricalGaussian& b) {
    check_fit(a, "kl_gaussian");
    check_fit(b, "kl_gaussian");
    const double dmu = a.mu - b.mu;
    const double var_b2 = 2.0 * b.sigma * b.sigma;
    return std::log(b.sigma / a.sigma) +
           (a.sigma * a.sigma + dmu * dmu) / var_b2 - 0.5;
}

double mean_symmetric_kld(std::span<const EmpiricalGaussian> fits, std::size_t i) {
    const std::size_t m = fits.size();
    if (m < 2) {
        throw std::domain_error("mean_symmetric_kld: need at least 2 classes");
    }
    if (i >= m) {
        throw std::domain_error("mean_symmetric_kld: class index out of range");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        if (j == i) continue;
        sum += kl_gaussian(fits[i], fits[j]) + kl_gaussian(fits[j], fits[i]);
    }
    return sum / (2.0 * static_cast<double>(m - 1));
}

double SeparabilityReport::mean_compactness() const {
    double s = 0.0;
    for (const auto& c : per_class) s += c.compactness;
    return per_class.empty() ? 0.0 : s / static_cast<double>(per_class.size());
}

double SeparabilityReport::mean_separability() const {
    double s = 0.0;
    for (const auto& c : per_class) s += c.separability;
    return per_class.empty() ? 0.0 : s / static_cast<double>(per_class.size());
}

double SeparabilityReport::mean_ratio() const {
    double s = 0.0;
    for (const auto& c : per_class) s += c.ratio;
    return per_class.empty() ? 0.0 : s / static_cast<double>(per_class.size());
}

SeparabilityReport separability_report(
    const std::map<int, std::vector<double>>& features_by_class, StdDevMode mode) {
    if (features_by_class.size() < 2) {
        throw std::domain_error("separability_report: need at least 2 classes");
    }
    SeparabilityReport rep;
    std::vector<int> keys = sorted_keys(features_by_class);
    for (int k : keys) {
        try {
            rep.fitted.push_back(fit_gaussian(features_by_class.at(k), mode));
        } catch (const std::domain_error& e) {
            throw std::domain_error("separability_report: class " + std::to_string(k) +
                                    ": " + e.what());
        }
    }
    for (std::size_t i = 0; i < keys.size(); ++i) {
        ClassSeparability cs;
        cs.class_id = keys[i];
        cs.compactness = 1.0 / rep.fitted[i].sigma;
        cs.separability = mean_symmetric_kld(rep.fitted, i);
        cs.ratio = cs.separability * cs.compactness;
        rep.per_class.push_back(cs);
    }
    return rep;
}

SeparabilityReport separability_report_pooled(
    const std::map<int, std::vector<double>>& own_by_class,
    const std::map<int, std::vector<double>>& impostor_by_class, StdDevMode mode) {
    if (own_by_class.size() != impostor_by_class.size()) {
        throw std::domain_error("separability_report_pooled: class sets differ");
    }
    SeparabilityReport rep;
    for (const auto& [class_id, own] : own_by_class) {
        auto it = impostor_by_class.find(class_id);
        if (it == impostor_by_class.end()) {
            throw std::domain_error("separability_report_pooled: missing impostor class " +
                                    std::to_string(class_id));
        }
        const EmpiricalGaussian own_fit = fit_gaussian(own, mode);
        const EmpiricalGaussian imp_fit = fit_gaussian(it->second, mode);
        ClassSeparability cs;
        cs.class_id = class_id;
        cs.compactness = 1.0 / own_fit.sigma;
        cs.separability =
            0.5 * (kl_gaussian(own_fit, imp_fit) + kl_gaussian(imp_fit, own_fit));
        cs.ratio = cs.separability * cs.compactness;
        rep.per_class.push_back(cs);
        rep.fitted.push_back(own_fit);
    }
    return rep;
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("paired_t_test: length mismatch");
    }
    const std::size_t n = a.size();
    if (n < 2) {
        throw std::domain_error("paired_t_test: need at least 2 pairs");
    }
    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = a[i] - b[i];
    const double md = mean_of(diff);
    double ss = 0.0;
    for (double d : diff) ss += (d - md) * (d - md);
    if (ss == 0.0) {
        throw DegenerateDataError("paired_t_test: all differences identical");
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    TTestResult r;
    r.t_stat = md / (sd / std::sqrt(static_cast<double>(n)));
    r.p_val = students_t_two_sided_p(r.t_stat, static_cast<double>(n - 1));
    return r;
}

PearsonResult pearson_correlation(std::span<const double> a,
                                  std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("pearson_correlation: length mismatch");
    }
    const std::size_t n = a.size();
    if (n < 3) {
        throw std::domain_error("pearson_correlation: need at least 3 pairs");
    }
    const double ma = mean_of(a);
    const double mb = mean_of(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) {
        throw std::domain_error("pearson_correlation: constant input");
    }
    PearsonResult r;
    r.rho = sab / std::sqrt(saa * sbb);
    if (r.rho > 1.0) r.rho = 1.0;
    if (r.rho < -1.0) r.rho = -1.0;
    const double denom = 1.0 - r.rho * r.rho;
    if (denom <= 0.0) {
        r.p_val = 0.0;
    } else {
        const double t = r.rho * std::sqrt(static_cast<double>(n - 2) / denom);
        r.p_val = students_t_two_sided_p(t, static_cast<double>(n - 2));
    }
    return r;
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::domain_error("regularized_incomplete_beta: a, b must be > 0");
    }
    if (x < 0.0 || x > 1.0 || !std::isfinite(x)) {
        throw std::domain_error("regularized_incomplete_beta: x must be in [0, 1]");
    }
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double students_t_two_sided_p(double t, double df) {
    if (!(df > 0.0)) {
        throw std::domain_error("students_t_two_sided_p: df must be > 0");
    }
    if (!std::isfinite(t)) {
        return 0.0;
    }
    const double x = df / (df + t * t);
    return regularized_incomplete_beta(0.5 * df, 0.5, x);
}

} // namespace gsoftmax
