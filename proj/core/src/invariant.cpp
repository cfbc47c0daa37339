#include <cmath>

#include "srk/errors.hpp"
#include "srk/harness.hpp"

namespace srk {

namespace {

// E[x^2] under exp(-(x^2-1)^2), composite Simpson on [-4, 4].
double doublewell_second_moment() {
    const int n = 4000;
    const double a = -4.0;
    const double b = 4.0;
    const double dx = (b - a) / n;
    double z = 0.0;
    double m2 = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = a + i * dx;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        const double rho = std::exp(-(x * x - 1.0) * (x * x - 1.0));
        z += w * rho;
        m2 += w * x * x * rho;
    }
    return m2 / z;
}

}  // namespace

Potential make_potential(std::string_view name) {
    Potential p;
    p.name = std::string(name);
    p.d = 1;
    p.diffusion = [](std::span<const double>, std::span<double> out) { out[0] = 1.0; };
    if (name == "ou") {
        p.V = [](std::span<const double> x) { return 0.5 * x[0] * x[0]; };
        p.force = [](std::span<const double> x, std::span<double> out) { out[0] = -x[0]; };
        p.second_moment = std::vector<double>{1.0};
        return p;
    }
    if (name == "doublewell") {
        p.V = [](std::span<const double> x) { return (x[0] * x[0] - 1.0) * (x[0] * x[0] - 1.0); };
        p.force = [](std::span<const double> x, std::span<double> out) { out[0] = -4.0 * x[0] * (x[0] * x[0] - 1.0); };
        p.second_moment = std::vector<double>{doublewell_second_moment()};
        return p;
    }
    throw LookupError("unknown potential '" + std::string(name) + "'; valid names: ou, doublewell");
}

MomentReport run_invariant_measure(const Potential& potential, double h, std::size_t n_steps, std::size_t burn_in,
                                   std::uint64_t seed, const State& x0) {
    if (!(h > 0.0)) throw PreconditionError("run_invariant_measure: h must be positive");
    if (n_steps <= burn_in) throw PreconditionError("run_invariant_measure: n_steps must exceed burn_in");
    constexpr std::size_t kBatches = 100;
    const std::size_t d = potential.d;
    const std::size_t m = d;
    const State start = x0.empty() ? State(d, 0.0) : x0;
    if (start.size() != d) throw PreconditionError("run_invariant_measure: x0 has wrong dimension");

    PostprocessedLangevin sampler(d, m, potential.force, potential.diffusion);
    LangevinState state = sampler.initial_state(start);
    const RvFamily family(Calculus::Ito, 0.5, true);
    Rng rng(substream_seed(seed, 0));
    NoiseDraw draw(m);

    const std::size_t kept = n_steps - burn_in;
    const std::size_t per_batch = std::max<std::size_t>(1, kept / kBatches);
    std::vector<std::vector<double>> batch_m1;
    std::vector<std::vector<double>> batch_m2;
    std::vector<double> acc1(d, 0.0);
    std::vector<double> acc2(d, 0.0);
    std::size_t in_batch = 0;

    for (std::size_t n = 0; n < n_steps; ++n) {
        sample_draw(family, m, rng, draw);
        try {
            sampler.step(state, h, draw);
        } catch (const OverflowError& e) {
            throw OverflowError("invariant measure chain diverged at step " + std::to_string(n) + ": " + e.what());
        }
        if (n < burn_in) continue;
        for (std::size_t r = 0; r < d; ++r) {
            acc1[r] += state.xbar[r];
            acc2[r] += state.xbar[r] * state.xbar[r];
        }
        if (++in_batch == per_batch && batch_m1.size() < kBatches) {
            for (std::size_t r = 0; r < d; ++r) {
                acc1[r] /= static_cast<double>(per_batch);
                acc2[r] /= static_cast<double>(per_batch);
            }
            batch_m1.push_back(acc1);
            batch_m2.push_back(acc2);
            std::fill(acc1.begin(), acc1.end(), 0.0);
            std::fill(acc2.begin(), acc2.end(), 0.0);
            in_batch = 0;
        }
    }

    MomentReport report;
    report.potential = potential.name;
    report.h = h;
    report.n_steps = n_steps;
    report.burn_in = burn_in;
    auto summarize = [&](const std::vector<std::vector<double>>& batches, std::vector<double>& mean,
                         std::vector<double>& se) {
        const double nb = static_cast<double>(batches.size());
        mean.assign(d, 0.0);
        se.assign(d, 0.0);
        for (const auto& b : batches) {
            for (std::size_t r = 0; r < d; ++r) mean[r] += b[r] / nb;
        }
        if (batches.size() < 2) return;
        for (std::size_t r = 0; r < d; ++r) {
            double ss = 0.0;
            for (const auto& b : batches) ss += (b[r] - mean[r]) * (b[r] - mean[r]);
            se[r] = std::sqrt(ss / (nb - 1.0) / nb);
        }
    };
    summarize(batch_m1, report.mean, report.mean_stderr);
    summarize(batch_m2, report.second_moment, report.second_stderr);
    report.exact_second_moment = potential.second_moment;
    if (potential.second_moment) {
        double worst = 0.0;
        for (std::size_t r = 0; r < d; ++r) {
            worst = std::max(worst, std::abs(report.second_moment[r] - (*potential.second_moment)[r]));
        }
        report.variance_error = worst;
    }
    report.force_evaluations = sampler.force_evaluations();
    report.diffusion_evaluations = sampler.diffusion_evaluations();
    return report;
}

}  // namespace srk
