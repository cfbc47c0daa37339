#include "srk/stepper.hpp"

#include <algorithm>
#include <cmath>

#include "srk/errors.hpp"

namespace srk {

void EvalCounts::reset(std::size_t m) {
    drift = 0;
    steps = 0;
    diffusion.assign(m, 0);
}

EvalCounts& EvalCounts::operator+=(const EvalCounts& other) {
    drift += other.drift;
    steps += other.steps;
    if (diffusion.size() < other.diffusion.size()) diffusion.resize(other.diffusion.size(), 0);
    for (std::size_t p = 0; p < other.diffusion.size(); ++p) diffusion[p] += other.diffusion[p];
    return *this;
}

Stepper::Stepper(const SdeProblem& problem, const MethodTableau& tableau, FixedPointOptions options)
    : problem_(&problem),
      tableau_(&tableau),
      options_(options),
      schedule_(compute_schedule(tableau)),
      family_(RvFamily::for_method(tableau)),
      d_(problem.d),
      m_(problem.m) {
    if (problem.fields.size() != problem.m + 1) {
        throw PreconditionError("Stepper: problem must provide f^0..f^m (" + std::to_string(problem.m + 1) +
                                " fields), got " + std::to_string(problem.fields.size()));
    }
    if (problem.calculus != tableau.calculus) {
        throw PreconditionError("Stepper: method '" + tableau.name + "' is " +
                                std::string(to_string(tableau.calculus)) + " but the problem is " +
                                std::string(to_string(problem.calculus)));
    }
    drift_stages_.assign(tableau.s1 * d_, 0.0);
    drift_values_.assign(tableau.s1 * d_, 0.0);
    stoch_stages_.assign(tableau.s2 * m_ * d_, 0.0);
    diff_values_.assign(tableau.s2 * m_ * d_, 0.0);
    scratch_.assign(d_, 0.0);
    previous_.assign(d_, 0.0);
    counts_.reset(m_);
}

std::span<double> Stepper::drift_stage(std::size_t i) { return {drift_stages_.data() + i * d_, d_}; }

std::span<double> Stepper::stoch_stage(std::size_t j, std::size_t p) {
    return {stoch_stages_.data() + (j * m_ + (p - 1)) * d_, d_};
}

std::span<double> Stepper::drift_value(std::size_t i) { return {drift_values_.data() + i * d_, d_}; }

std::span<double> Stepper::diffusion_value(std::size_t j, std::size_t q) {
    return {diff_values_.data() + (j * m_ + (q - 1)) * d_, d_};
}

void Stepper::compute_drift_stage(std::size_t i, std::span<const double> x, double h, const NoiseDraw& draw,
                                  std::span<double> out) const {
    const MethodTableau& t = *tableau_;
    const double sqh = std::sqrt(h);
    std::copy(x.begin(), x.end(), out.begin());
    for (std::size_t j = 0; j < t.s1; ++j) {
        const double a = t.A0(i, j);
        if (a == 0.0) continue;
        const double* f = drift_values_.data() + j * d_;
        for (std::size_t r = 0; r < d_; ++r) out[r] += h * a * f[r];
    }
    for (std::size_t j = 0; j < t.s2; ++j) {
        const double b = t.B0(i, j);
        if (b == 0.0) continue;
        for (std::size_t q = 1; q <= m_; ++q) {
            const double w = sqh * b * draw.Theta_at(0, q);
            if (w == 0.0) continue;
            const double* g = diff_values_.data() + (j * m_ + (q - 1)) * d_;
            for (std::size_t r = 0; r < d_; ++r) out[r] += w * g[r];
        }
    }
}

void Stepper::compute_stochastic_stage(std::size_t j, std::size_t p, std::span<const double> x, double h,
                                       const NoiseDraw& draw, std::span<double> out) const {
    const MethodTableau& t = *tableau_;
    const double sqh = std::sqrt(h);
    std::copy(x.begin(), x.end(), out.begin());
    const double tp0 = draw.Theta_at(p, 0);
    for (std::size_t k = 0; k < t.s1; ++k) {
        const double a = t.A1(j, k);
        if (a == 0.0) continue;
        const double w = h * a * tp0;
        const double* f = drift_values_.data() + k * d_;
        for (std::size_t r = 0; r < d_; ++r) out[r] += w * f[r];
    }
    for (std::size_t q = 1; q <= m_; ++q) {
        const Matrix& block = t.stochastic_block(q == p);
        const double tpq = draw.Theta_at(p, q);
        if (tpq == 0.0) continue;
        for (std::size_t k = 0; k < t.s2; ++k) {
            const double b = block(j, k);
            if (b == 0.0) continue;
            const double w = sqh * b * tpq;
            const double* g = diff_values_.data() + (k * m_ + (q - 1)) * d_;
            for (std::size_t r = 0; r < d_; ++r) out[r] += w * g[r];
        }
    }
}

void Stepper::check_finite(std::span<const double> v, const char* what, std::size_t index) const {
    for (double e : v) {
        if (!std::isfinite(e)) {
            throw OverflowError(std::string("non-finite value in ") + what + " " + std::to_string(index) +
                                " of method '" + tableau_->name + "'");
        }
    }
}

void Stepper::evaluate_stage(const StageRef& s) {
    if (s.kind == StageKind::Drift) {
        problem_->fields[0](drift_stage(s.index), drift_value(s.index));
        check_finite(drift_value(s.index), "drift value at stage", s.index);
    } else {
        for (std::size_t p = 1; p <= m_; ++p) {
            problem_->fields[p](stoch_stage(s.index, p), diffusion_value(s.index, p));
            check_finite(diffusion_value(s.index, p), "diffusion value at stage", s.index);
        }
    }
}

void Stepper::solve_implicit(const StageBlock& block, std::span<const double> x, double h, const NoiseDraw& draw) {
    double xmax = 0.0;
    for (double v : x) xmax = std::max(xmax, std::abs(v));
    const double tol = options_.tolerance * (1.0 + xmax);

    for (const auto& s : block.stages) {
        if (s.kind == StageKind::Drift) {
            std::copy(x.begin(), x.end(), drift_stage(s.index).begin());
        } else {
            for (std::size_t p = 1; p <= m_; ++p) std::copy(x.begin(), x.end(), stoch_stage(s.index, p).begin());
        }
        evaluate_stage(s);
    }

    auto update = [&](std::span<double> stage, double& change) {
        for (std::size_t r = 0; r < d_; ++r) {
            change = std::max(change, std::abs(scratch_[r] - stage[r]));
            stage[r] = scratch_[r];
        }
    };
    for (int it = 0; it < options_.max_iterations; ++it) {
        double change = 0.0;
        // Jacobi sweep: all new stage values from the previous field values.
        for (const auto& s : block.stages) {
            if (s.kind == StageKind::Drift) {
                compute_drift_stage(s.index, x, h, draw, scratch_);
                check_finite(scratch_, "implicit drift stage", s.index);
                update(drift_stage(s.index), change);
            } else {
                for (std::size_t p = 1; p <= m_; ++p) {
                    compute_stochastic_stage(s.index, p, x, h, draw, scratch_);
                    check_finite(scratch_, "implicit stochastic stage", s.index);
                    update(stoch_stage(s.index, p), change);
                }
            }
        }
        for (const auto& s : block.stages) evaluate_stage(s);
        if (change <= tol) return;
    }
    throw DivergenceError("fixed-point iteration for an implicit stage block of method '" + tableau_->name +
                          "' did not converge in " + std::to_string(options_.max_iterations) +
                          " iterations (h=" + std::to_string(h) + ")");
}

void Stepper::step(std::span<const double> x, double h, const NoiseDraw& draw, std::span<double> out) {
    if (x.size() != d_ || out.size() != d_) throw PreconditionError("Stepper::step: state dimension mismatch");
    if (draw.m < m_) throw PreconditionError("Stepper::step: draw has fewer noises than the problem");
    if (!(h > 0.0)) throw PreconditionError("Stepper::step: h must be positive");
    std::copy(x.begin(), x.end(), previous_.begin());
    const std::span<const double> x0(previous_);
    const MethodTableau& t = *tableau_;

    for (const auto& block : schedule_.blocks) {
        if (block.implicit) {
            solve_implicit(block, x0, h, draw);
        } else {
            const StageRef& s = block.stages.front();
            if (s.kind == StageKind::Drift) {
                compute_drift_stage(s.index, x0, h, draw, drift_stage(s.index));
                check_finite(drift_stage(s.index), "drift stage", s.index);
            } else {
                for (std::size_t p = 1; p <= m_; ++p) {
                    compute_stochastic_stage(s.index, p, x0, h, draw, stoch_stage(s.index, p));
                    check_finite(stoch_stage(s.index, p), "stochastic stage", s.index);
                }
            }
            evaluate_stage(s);
        }
        for (const auto& s : block.stages) {
            if (s.kind == StageKind::Drift) {
                ++counts_.drift;
            } else {
                for (std::size_t p = 0; p < m_; ++p) ++counts_.diffusion[p];
            }
        }
    }

    const double sqh = std::sqrt(h);
    std::copy(x0.begin(), x0.end(), out.begin());
    for (std::size_t i = 0; i < t.s1; ++i) {
        if (t.alpha[i] == 0.0) continue;
        const double w = h * t.alpha[i];
        const double* f = drift_values_.data() + i * d_;
        for (std::size_t r = 0; r < d_; ++r) out[r] += w * f[r];
    }
    for (std::size_t j = 0; j < t.s2; ++j) {
        if (t.beta[j] == 0.0) continue;
        for (std::size_t p = 1; p <= m_; ++p) {
            const double w = sqh * t.beta[j] * draw.theta[p];
            if (w == 0.0) continue;
            const double* g = diff_values_.data() + (j * m_ + (p - 1)) * d_;
            for (std::size_t r = 0; r < d_; ++r) out[r] += w * g[r];
        }
    }
    check_finite(out, "update of step", counts_.steps);
    ++counts_.steps;
}

State Stepper::step(const State& x, double h, const NoiseDraw& draw) {
    State out(x.size());
    step(std::span<const double>(x), h, draw, std::span<double>(out));
    return out;
}

State step(const SdeProblem& problem, const MethodTableau& tableau, const State& x, double h,
           const NoiseDraw& draw) {
    Stepper stepper(problem, tableau);
    return stepper.step(x, h, draw);
}

State integrate_path(const SdeProblem& problem, const MethodTableau& tableau, const State& x0, double h,
                     std::size_t n_steps, Rng& rng, EvalCounts* counts) {
    Stepper stepper(problem, tableau);
    State x = x0;
    NoiseDraw draw(problem.m);
    for (std::size_t n = 0; n < n_steps; ++n) {
        sample_draw(stepper.family(), problem.m, rng, draw);
        stepper.step(x, h, draw, x);
    }
    if (counts != nullptr) *counts += stepper.counts();
    return x;
}

}  // namespace srk
