#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srk/randvars.hpp"
#include "srk/stepper.hpp"
#include "srk/tableau.hpp"

namespace srk {

/// Test function phi and, when known, t -> E[phi(X(t))].
struct Observable {
    std::function<double(std::span<const double>)> phi;
    std::function<double(double)> exact_expectation;  // empty when unknown
};

struct BenchmarkProblem {
    std::string name;
    SdeProblem sde;
    Observable observable;
    State x0;
    double T = 1.0;
};

const std::vector<std::string>& problem_names();

/// sinh1d, tennoise, ou_langevin, doublewell_langevin, det_exponential, with
/// the drift written for `calculus` (the same law either way). Throws
/// LookupError for unknown names.
BenchmarkProblem make_problem(std::string_view name, Calculus calculus = Calculus::Ito);

/// Seed of batch `batch` derived from the master seed by a splitmix64 mix.
std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t batch);

struct SamplingOptions {
    std::size_t n_batches = 100;
    std::size_t n_per_batch = 10000;
    std::uint64_t seed = 1;
    unsigned workers = 0;  // 0: hardware concurrency
};

struct ConvergenceRecord {
    double h = 0.0;
    std::size_t n_steps = 0;
    double estimate = 0.0;
    double std_error = 0.0;  // batch-mean standard deviation / sqrt(n_batches)
    double exact = 0.0;
    double abs_error = 0.0;
    std::size_t n_batches = 0;
    std::size_t n_per_batch = 0;
    std::uint64_t effort_per_step = 0;
};

struct ConvergenceTable {
    std::string method;
    std::string problem;
    std::vector<ConvergenceRecord> records;
    double slope = 0.0;  // least-squares slope of log2(abs_error) against log2(h)
};

/// Monte Carlo estimate of E[phi(X_N)] at t = T with T/h steps. Batch b
/// simulates its paths sequentially on the substream of (seed, b); the result
/// does not depend on the worker count.
ConvergenceRecord estimate_weak_error(const BenchmarkProblem& problem, const MethodTableau& method, double h,
                                      const SamplingOptions& sampling);

ConvergenceTable run_convergence(const BenchmarkProblem& problem, const MethodTableau& method,
                                 const std::vector<double>& h_list, const SamplingOptions& sampling);

/// Least-squares slope of log2(y) against log2(x).
double regression_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Columns: method, problem, h, estimate, stderr, exact, abs_error, effort.
std::string to_csv(const ConvergenceTable& table, bool header = true);
std::string to_json(const ConvergenceTable& table);

struct EffortCounts {
    std::uint64_t drift_evals = 0;      // N_d
    std::uint64_t diffusion_evals = 0;  // N_s, per noise
    std::uint64_t random_variables = 0; // N_r
    std::uint64_t total = 0;            // N_d + m N_s + N_r
};

/// Per-step effort measured with instrumented counters on a probe problem
/// with m noises. For methods with implicit blocks the counts are the number
/// of stages whose fields are evaluated (iteration counts are excluded).
EffortCounts effort(const MethodTableau& method, std::size_t m);

/// Potential V with its overdamped Langevin force and diffusion matrix.
struct Potential {
    std::string name;
    std::size_t d = 1;
    std::function<double(std::span<const double>)> V;
    VectorField force;      // -D^2 grad V
    MatrixField diffusion;  // D, d x d
    /// Reference E[x_i^2] under exp(-V), when available.
    std::optional<std::vector<double>> second_moment;
};

/// "ou" (V = |x|^2/2, D = I) and "doublewell" (V = (x^2-1)^2, d = 1, D = 1).
Potential make_potential(std::string_view name);

struct MomentReport {
    std::string potential;
    double h = 0.0;
    std::size_t n_steps = 0;
    std::size_t burn_in = 0;
    std::vector<double> mean;
    std::vector<double> mean_stderr;
    std::vector<double> second_moment;
    std::vector<double> second_stderr;
    std::optional<std::vector<double>> exact_second_moment;
    /// max_i |E[x_i^2] estimate - exact| when the exact value is known.
    std::optional<double> variance_error;
    std::uint64_t force_evaluations = 0;
    std::uint64_t diffusion_evaluations = 0;
};

/// Time averages of x and x^2 over the postprocessed outputs Xbar_n after
/// burn-in; standard errors from 100 batch means. Throws OverflowError with
/// the step index when the chain leaves the finite range.
MomentReport run_invariant_measure(const Potential& potential, double h, std::size_t n_steps, std::size_t burn_in,
                                   std::uint64_t seed, const State& x0 = {});

}  // namespace srk
