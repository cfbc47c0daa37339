#include <array>
#include <cmath>

#include "srk/errors.hpp"
#include "srk/harness.hpp"

namespace srk {

namespace {

struct NoiseCoefficient {
    double c;
    double a;
};

// Ten diffusions c_k sqrt(x^2 + a_k).
constexpr std::array<NoiseCoefficient, 10> kTenNoise = {{
    {1.0 / 10, 1.0 / 2},
    {1.0 / 15, 1.0 / 4},
    {1.0 / 20, 1.0 / 5},
    {1.0 / 25, 1.0 / 10},
    {1.0 / 40, 1.0 / 20},
    {1.0 / 25, 1.0 / 2},
    {1.0 / 20, 1.0 / 4},
    {1.0 / 15, 1.0 / 5},
    {1.0 / 20, 1.0 / 10},
    {1.0 / 25, 1.0 / 20},
}};

double tennoise_fourth_moment(double t) {
    return 4625768169.0 / 73570420483600.0 -
           2998776077847.0 / 113706563209000.0 * std::exp(731453.0 / 360000.0 * t) +
           80235120932849.0 / 78178246418000.0 * std::exp(251453.0 / 60000.0 * t);
}

BenchmarkProblem sinh1d(Calculus calculus) {
    BenchmarkProblem p;
    p.name = "sinh1d";
    p.sde.d = 1;
    p.sde.m = 1;
    p.sde.calculus = calculus;
    p.sde.label = "dX = (X/2 + sqrt(X^2+1)) dt + sqrt(X^2+1) dW";
    if (calculus == Calculus::Ito) {
        p.sde.fields.emplace_back([](std::span<const double> x, std::span<double> out) {
            out[0] = 0.5 * x[0] + std::sqrt(x[0] * x[0] + 1.0);
        });
    } else {
        p.sde.fields.emplace_back(
            [](std::span<const double> x, std::span<double> out) { out[0] = std::sqrt(x[0] * x[0] + 1.0); });
    }
    p.sde.fields.emplace_back(
        [](std::span<const double> x, std::span<double> out) { out[0] = std::sqrt(x[0] * x[0] + 1.0); });
    p.observable.phi = [](std::span<const double> x) {
        const double z = std::asinh(x[0]);
        return z * z * z - 6.0 * z * z + 8.0 * z;
    };
    p.observable.exact_expectation = [](double t) { return t * t * t - 3.0 * t * t + 2.0 * t; };
    p.x0 = {0.0};
    p.T = 2.0;
    return p;
}

BenchmarkProblem tennoise(Calculus calculus) {
    BenchmarkProblem p;
    p.name = "tennoise";
    p.sde.d = 1;
    p.sde.m = kTenNoise.size();
    p.sde.calculus = calculus;
    p.sde.label = "dX = X dt + sum_k c_k sqrt(X^2 + a_k) dW^k";
    double drift_rate = 1.0;
    if (calculus == Calculus::Stratonovich) {
        for (const auto& k : kTenNoise) drift_rate -= 0.5 * k.c * k.c;
    }
    p.sde.fields.emplace_back([drift_rate](std::span<const double> x, std::span<double> out) { out[0] = drift_rate * x[0]; });
    for (const auto& k : kTenNoise) {
        p.sde.fields.emplace_back([k](std::span<const double> x, std::span<double> out) {
            out[0] = k.c * std::sqrt(x[0] * x[0] + k.a);
        });
    }
    p.observable.phi = [](std::span<const double> x) { return x[0] * x[0] * x[0] * x[0]; };
    p.observable.exact_expectation = tennoise_fourth_moment;
    p.x0 = {1.0};
    p.T = 1.0;
    return p;
}

BenchmarkProblem det_exponential(Calculus calculus) {
    BenchmarkProblem p;
    p.name = "det_exponential";
    p.sde.d = 1;
    p.sde.m = 1;
    p.sde.calculus = calculus;
    p.sde.label = "dX = X dt";
    p.sde.fields.emplace_back([](std::span<const double> x, std::span<double> out) { out[0] = x[0]; });
    p.sde.fields.emplace_back([](std::span<const double>, std::span<double> out) { out[0] = 0.0; });
    p.observable.phi = [](std::span<const double> x) { return x[0]; };
    p.observable.exact_expectation = [](double t) { return std::exp(t); };
    p.x0 = {1.0};
    p.T = 1.0;
    return p;
}

BenchmarkProblem ou_langevin(Calculus calculus) {
    BenchmarkProblem p;
    p.name = "ou_langevin";
    p.sde.d = 1;
    p.sde.m = 1;
    p.sde.calculus = calculus;
    p.sde.label = "dX = -X dt + sqrt2 dW";
    p.sde.fields.emplace_back([](std::span<const double> x, std::span<double> out) { out[0] = -x[0]; });
    p.sde.fields.emplace_back([](std::span<const double>, std::span<double> out) { out[0] = std::sqrt(2.0); });
    p.observable.phi = [](std::span<const double> x) { return x[0] * x[0]; };
    p.observable.exact_expectation = [](double t) { return 1.0 + 3.0 * std::exp(-2.0 * t); };
    p.x0 = {2.0};
    p.T = 1.0;
    return p;
}

BenchmarkProblem doublewell_langevin(Calculus calculus) {
    BenchmarkProblem p;
    p.name = "doublewell_langevin";
    p.sde.d = 1;
    p.sde.m = 1;
    p.sde.calculus = calculus;
    p.sde.label = "dX = -4X(X^2-1) dt + sqrt2 dW";
    p.sde.fields.emplace_back(
        [](std::span<const double> x, std::span<double> out) { out[0] = -4.0 * x[0] * (x[0] * x[0] - 1.0); });
    p.sde.fields.emplace_back([](std::span<const double>, std::span<double> out) { out[0] = std::sqrt(2.0); });
    p.observable.phi = [](std::span<const double> x) { return x[0] * x[0]; };
    p.x0 = {0.0};
    p.T = 1.0;
    return p;
}

}  // namespace

const std::vector<std::string>& problem_names() {
    static const std::vector<std::string> names = {"sinh1d", "tennoise", "ou_langevin", "doublewell_langevin",
                                                   "det_exponential"};
    return names;
}

BenchmarkProblem make_problem(std::string_view name, Calculus calculus) {
    if (name == "sinh1d") return sinh1d(calculus);
    if (name == "tennoise") return tennoise(calculus);
    if (name == "det_exponential") return det_exponential(calculus);
    if (name == "ou_langevin") return ou_langevin(calculus);
    if (name == "doublewell_langevin") return doublewell_langevin(calculus);
    std::string valid;
    for (const auto& n : problem_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw LookupError("unknown problem '" + std::string(name) + "'; valid names: " + valid);
}

}  // namespace srk
