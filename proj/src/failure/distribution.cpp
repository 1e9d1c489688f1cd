#include "resample/failure/distribution.hpp"

#include <algorithm>
#include <cmath>

#include "resample/core/csv.hpp"
#include "resample/core/error.hpp"
#include "resample/core/numeric.hpp"

namespace resample::failure {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

/// Integral of the triangular CDF over [min, t] for t >= min.
double triangular_cdf_integral(const Triangular& tri, double t)
{
    const double a = tri.min;
    const double c = tri.mode;
    const double b = tri.max;
    const double width = b - a;
    double total = 0.0;
    if (t <= a) {
        return 0.0;
    }
    // Rising piece on [a, c]: F = (x - a)^2 / ((b - a)(c - a)).
    if (c > a) {
        const double hi = std::min(t, c);
        total += std::pow(hi - a, 3) / (3.0 * width * (c - a));
    }
    if (t <= c) {
        return total;
    }
    // Falling piece on [c, b]: F = 1 - (b - x)^2 / ((b - a)(b - c)).
    if (b > c) {
        const double hi = std::min(t, b);
        total += (hi - c) - (std::pow(b - c, 3) - std::pow(b - hi, 3)) / (3.0 * width * (b - c));
    }
    if (t > b) {
        total += t - b;
    }
    return total;
}

}  // namespace

DegenerationDistribution::DegenerationDistribution(Kind kind) : kind_(std::move(kind))
{
    std::visit(overloaded{
                   [](const Exponential& e) {
                       if (!(e.rate > 0.0) || !std::isfinite(e.rate)) {
                           fail(ErrorKind::invalid_input, "exponential rate must be positive");
                       }
                   },
                   [](const Triangular& t) {
                       if (!(t.min <= t.mode && t.mode <= t.max && t.min < t.max)
                           || !std::isfinite(t.min) || !std::isfinite(t.max)) {
                           fail(ErrorKind::invalid_input,
                                "triangular parameters need min <= mode <= max and min < max");
                       }
                       if (t.min < 0.0) {
                           fail(ErrorKind::invalid_input, "degeneration times cannot be negative");
                       }
                   },
                   [](const Empirical& e) {
                       if (e.sample.min() < 0.0) {
                           fail(ErrorKind::invalid_input, "degeneration times cannot be negative");
                       }
                   },
               },
               kind_);
}

double DegenerationDistribution::cdf(double x) const
{
    return std::visit(
        overloaded{
            [x](const Exponential& e) { return x <= 0.0 ? 0.0 : -std::expm1(-e.rate * x); },
            [x](const Triangular& t) {
                if (x <= t.min) {
                    return 0.0;
                }
                if (x >= t.max) {
                    return 1.0;
                }
                const double width = t.max - t.min;
                if (x <= t.mode) {
                    return (x - t.min) * (x - t.min) / (width * (t.mode - t.min));
                }
                return 1.0 - (t.max - x) * (t.max - x) / (width * (t.max - t.mode));
            },
            [x](const Empirical& e) {
                const auto v = e.sample.values();
                const auto below = std::count_if(v.begin(), v.end(), [x](double b) { return b <= x; });
                return static_cast<double>(below) / static_cast<double>(v.size());
            },
        },
        kind_);
}

double DegenerationDistribution::integrated_cdf(double t) const
{
    if (t <= 0.0) {
        return 0.0;
    }
    return std::visit(overloaded{
                          [t](const Exponential& e) { return t + std::expm1(-e.rate * t) / e.rate; },
                          [t](const Triangular& tri) { return triangular_cdf_integral(tri, t); },
                          [t](const Empirical& e) {
                              // F_hat is a step function: integral = mean of max(0, t - B_i).
                              NeumaierSum acc;
                              for (double b : e.sample.values()) {
                                  acc.add(std::max(0.0, t - b));
                              }
                              return acc.value() / static_cast<double>(e.sample.size());
                          },
                      },
                      kind_);
}

double DegenerationDistribution::integrated_survival(double t) const
{
    if (t <= 0.0) {
        return 0.0;
    }
    return std::visit(overloaded{
                          [t](const Exponential& e) { return -std::expm1(-e.rate * t) / e.rate; },
                          [t](const Triangular& tri) { return t - triangular_cdf_integral(tri, t); },
                          [t](const Empirical& e) {
                              NeumaierSum acc;
                              for (double b : e.sample.values()) {
                                  acc.add(std::min(b, t));
                              }
                              return acc.value() / static_cast<double>(e.sample.size());
                          },
                      },
                      kind_);
}

double DegenerationDistribution::mean() const
{
    return std::visit(overloaded{
                          [](const Exponential& e) { return 1.0 / e.rate; },
                          [](const Triangular& t) { return (t.min + t.mode + t.max) / 3.0; },
                          [](const Empirical& e) { return e.sample.mean(); },
                      },
                      kind_);
}

std::string DegenerationDistribution::describe() const
{
    return std::visit(overloaded{
                          [](const Exponential& e) { return "exponential:" + format_number(e.rate); },
                          [](const Triangular& t) {
                              return "triangular:" + format_number(t.min) + ","
                                     + format_number(t.mode) + "," + format_number(t.max);
                          },
                          [](const Empirical& e) {
                              return "empirical:" + e.sample.label() + "("
                                     + std::to_string(e.sample.size()) + ")";
                          },
                      },
                      kind_);
}

}  // namespace resample::failure
