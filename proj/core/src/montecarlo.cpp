#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "srk/errors.hpp"
#include "srk/harness.hpp"

namespace srk {

std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t batch) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(master_seed) ^ (batch * 0xd1342543de82ef95ULL + 1));
}

namespace {

std::size_t step_count(double T, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw PreconditionError("step size must be positive, got " + std::to_string(h));
    const double n = T / h;
    const double rounded = std::round(n);
    if (rounded < 1.0 || std::abs(n - rounded) > 1e-9 * std::max(1.0, n)) {
        throw PreconditionError("T/h must be a positive integer, got T=" + std::to_string(T) + " h=" + std::to_string(h));
    }
    return static_cast<std::size_t>(rounded);
}

double batch_mean(const BenchmarkProblem& problem, const MethodTableau& method, double h, std::size_t n_steps,
                  std::size_t n_paths, std::uint64_t seed) {
    Rng rng(seed);
    Stepper stepper(problem.sde, method);
    const RvFamily& family = stepper.family();
    NoiseDraw draw(problem.sde.m);
    State x(problem.x0.size());
    double sum = 0.0;
    for (std::size_t path = 0; path < n_paths; ++path) {
        std::copy(problem.x0.begin(), problem.x0.end(), x.begin());
        for (std::size_t n = 0; n < n_steps; ++n) {
            sample_draw(family, problem.sde.m, rng, draw);
            stepper.step(x, h, draw, x);
        }
        sum += problem.observable.phi(x);
    }
    return sum / static_cast<double>(n_paths);
}

}  // namespace

ConvergenceRecord estimate_weak_error(const BenchmarkProblem& problem, const MethodTableau& method, double h,
                                      const SamplingOptions& sampling) {
    const std::size_t n_steps = step_count(problem.T, h);
    if (sampling.n_batches < 2) throw PreconditionError("n_batches must be at least 2");
    if (sampling.n_per_batch < 1) throw PreconditionError("n_per_batch must be at least 1");

    std::vector<double> means(sampling.n_batches, 0.0);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&]() {
        for (std::size_t b = next++; b < sampling.n_batches; b = next++) {
            try {
                means[b] = batch_mean(problem, method, h, n_steps, sampling.n_per_batch,
                                      substream_seed(sampling.seed, b));
            } catch (...) {
                const std::string context = "batch " + std::to_string(b) + " of " + method.name + " on " + problem.name;
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    try {
                        throw;
                    } catch (const DivergenceError& e) {
                        failure = std::make_exception_ptr(DivergenceError(context + ": " + e.what()));
                    } catch (const OverflowError& e) {
                        failure = std::make_exception_ptr(OverflowError(context + ": " + e.what()));
                    } catch (...) {
                        failure = std::current_exception();
                    }
                }
                next = sampling.n_batches;
                return;
            }
        }
    };

    unsigned workers = sampling.workers != 0 ? sampling.workers : std::max(1U, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, sampling.n_batches));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    // Shifted by the first batch so identical batches give exactly zero spread.
    const double shift = means.front();
    double offset = 0.0;
    for (double v : means) offset += v - shift;
    offset /= static_cast<double>(means.size());
    const double mean = shift + offset;
    double ss = 0.0;
    for (double v : means) ss += (v - shift - offset) * (v - shift - offset);
    const double sd = std::sqrt(ss / static_cast<double>(means.size() - 1));

    ConvergenceRecord r;
    r.h = h;
    r.n_steps = n_steps;
    r.estimate = mean;
    r.std_error = sd / std::sqrt(static_cast<double>(means.size()));
    r.exact = problem.observable.exact_expectation ? problem.observable.exact_expectation(problem.T)
                                                   : std::numeric_limits<double>::quiet_NaN();
    r.abs_error = std::abs(r.estimate - r.exact);
    r.n_batches = sampling.n_batches;
    r.n_per_batch = sampling.n_per_batch;
    r.effort_per_step = effort(method, problem.sde.m).total;
    return r;
}

ConvergenceTable run_convergence(const BenchmarkProblem& problem, const MethodTableau& method,
                                 const std::vector<double>& h_list, const SamplingOptions& sampling) {
    ConvergenceTable table;
    table.method = method.name;
    table.problem = problem.name;
    std::vector<double> hs;
    std::vector<double> errors;
    for (double h : h_list) {
        table.records.push_back(estimate_weak_error(problem, method, h, sampling));
        hs.push_back(h);
        errors.push_back(table.records.back().abs_error);
    }
    table.slope = regression_slope(hs, errors);
    return table;
}

double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        lx.push_back(std::log2(x[i]));
        ly.push_back(std::log2(y[i]));
    }
    const double n = static_cast<double>(lx.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (sxx == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return sxy / sxx;
}

std::string to_csv(const ConvergenceTable& table, bool header) {
    std::ostringstream out;
    out << std::setprecision(17);
    if (header) out << "method,problem,h,estimate,stderr,exact,abs_error,effort\n";
    for (const auto& r : table.records) {
        out << table.method << ',' << table.problem << ',' << r.h << ',' << r.estimate << ',' << r.std_error << ','
            << r.exact << ',' << r.abs_error << ',' << r.effort_per_step << '\n';
    }
    return out.str();
}

std::string to_json(const ConvergenceTable& table) {
    nlohmann::json j;
    j["method"] = table.method;
    j["problem"] = table.problem;
    j["slope"] = std::isfinite(table.slope) ? nlohmann::json(table.slope) : nlohmann::json(nullptr);
    j["records"] = nlohmann::json::array();
    for (const auto& r : table.records) {
        j["records"].push_back({{"h", r.h},
                                {"n_steps", r.n_steps},
                                {"estimate", r.estimate},
                                {"stderr", r.std_error},
                                {"exact", std::isfinite(r.exact) ? nlohmann::json(r.exact) : nlohmann::json(nullptr)},
                                {"abs_error", std::isfinite(r.abs_error) ? nlohmann::json(r.abs_error)
                                                                         : nlohmann::json(nullptr)},
                                {"n_batches", r.n_batches},
                                {"n_per_batch", r.n_per_batch},
                                {"effort", r.effort_per_step}});
    }
    return j.dump(2);
}

EffortCounts effort(const MethodTableau& method, std::size_t m) {
    if (m == 0) throw PreconditionError("effort: m must be at least 1");
    SdeProblem probe;
    probe.d = 1;
    probe.m = m;
    probe.calculus = method.calculus;
    probe.label = "effort probe";
    probe.fields.emplace_back([](std::span<const double> x, std::span<double> out) { out[0] = 0.5 * x[0]; });
    for (std::size_t p = 1; p <= m; ++p) {
        const double scale = 0.1 * static_cast<double>(p);
        probe.fields.emplace_back([scale](std::span<const double> x, std::span<double> out) {
            out[0] = scale * (1.0 + 0.1 * x[0]);
        });
    }
    Stepper stepper(probe, method);
    Rng rng(7);
    const NoiseDraw draw = sample_draw(stepper.family(), m, rng);
    State x{1.0};
    stepper.reset_counts();
    (void)stepper.step(x, 0.01, draw);

    EffortCounts e;
    e.drift_evals = stepper.counts().drift;
    e.diffusion_evals = *std::max_element(stepper.counts().diffusion.begin(), stepper.counts().diffusion.end());
    e.random_variables = stepper.family().random_count(m);
    e.total = e.drift_evals + m * e.diffusion_evals + e.random_variables;
    return e;
}

}  // namespace srk
