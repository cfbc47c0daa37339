#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "srk/randvars.hpp"
#include "srk/tableau.hpp"

namespace srk {

using State = std::vector<double>;

/// out = f(x); both spans have the problem dimension.
using VectorField = std::function<void(std::span<const double> x, std::span<double> out)>;

/// dX = f^0(X) dt + sum_p f^p(X) dW^p (Ito) or  ∘ dW^p (Stratonovich).
struct SdeProblem {
    std::size_t d = 1;
    std::size_t m = 1;
    Calculus calculus = Calculus::Ito;
    std::vector<VectorField> fields;  // f^0 .. f^m
    std::string label;
};

/// Per-field evaluation counters. diffusion[p-1] counts f^p.
struct EvalCounts {
    std::uint64_t drift = 0;
    std::vector<std::uint64_t> diffusion;
    std::uint64_t steps = 0;

    void reset(std::size_t m);
    EvalCounts& operator+=(const EvalCounts& other);
};

struct FixedPointOptions {
    double tolerance = 1e-13;  // scaled by (1 + |x|_max)
    int max_iterations = 200;
};

/// Executes steps of one method on one problem. Holds the stage workspace and
/// evaluation counters, so one Stepper per concurrent path.
///
/// The problem and tableau are referenced, not copied, and must outlive the
/// stepper.
class Stepper {
public:
    Stepper(const SdeProblem& problem, const MethodTableau& tableau, FixedPointOptions options = {});

    /// Writes X_{n+1} into `out` (may alias `x`).
    void step(std::span<const double> x, double h, const NoiseDraw& draw, std::span<double> out);
    [[nodiscard]] State step(const State& x, double h, const NoiseDraw& draw);

    [[nodiscard]] const EvalCounts& counts() const { return counts_; }
    void reset_counts() { counts_.reset(problem_->m); }

    [[nodiscard]] const StageSchedule& schedule() const { return schedule_; }
    [[nodiscard]] const RvFamily& family() const { return family_; }

private:
    void compute_drift_stage(std::size_t i, std::span<const double> x, double h, const NoiseDraw& draw,
                             std::span<double> out) const;
    void compute_stochastic_stage(std::size_t j, std::size_t p, std::span<const double> x, double h,
                                  const NoiseDraw& draw, std::span<double> out) const;
    void evaluate_stage(const StageRef& s);
    void solve_implicit(const StageBlock& block, std::span<const double> x, double h, const NoiseDraw& draw);
    void check_finite(std::span<const double> v, const char* what, std::size_t index) const;

    [[nodiscard]] std::span<double> drift_stage(std::size_t i);
    [[nodiscard]] std::span<double> stoch_stage(std::size_t j, std::size_t p);  // p in 1..m
    [[nodiscard]] std::span<double> drift_value(std::size_t i);
    [[nodiscard]] std::span<double> diffusion_value(std::size_t j, std::size_t q);  // q in 1..m

    const SdeProblem* problem_;
    const MethodTableau* tableau_;
    FixedPointOptions options_;
    StageSchedule schedule_;
    RvFamily family_;
    std::size_t d_;
    std::size_t m_;

    std::vector<double> drift_stages_;  // s1 * d
    std::vector<double> stoch_stages_;  // s2 * m * d
    std::vector<double> drift_values_;  // s1 * d : f^0(H_i^0)
    std::vector<double> diff_values_;   // s2 * m * d : f^q(H_j^q)
    std::vector<double> scratch_;
    std::vector<double> previous_;
    EvalCounts counts_;
};

/// One step as a pure function of its inputs.
State step(const SdeProblem& problem, const MethodTableau& tableau, const State& x, double h,
           const NoiseDraw& draw);

/// n-fold composition of step with a fresh draw per step. Counts accumulate
/// into `counts` when given.
State integrate_path(const SdeProblem& problem, const MethodTableau& tableau, const State& x0, double h,
                     std::size_t n_steps, Rng& rng, EvalCounts* counts = nullptr);

/// out = D(x), d x m column-major (column p at out[p*d .. p*d+d)).
using MatrixField = std::function<void(std::span<const double> x, std::span<double> out)>;

/// Chain state of the postprocessed overdamped Langevin sampler: X_n, the last
/// postprocessed output Xbar_{n-1} and the cached F(Xbar_{n-1}).
struct LangevinState {
    State x;
    State xbar;
    State force_at_xbar;
};

/// Postprocessed sampler for dX = F dt + div(D^2) dt + sqrt2 D dW:
///
///   H_n     = X_n + h/4 F(Xbar_{n-1})
///   Xbar_n  = X_n + sqrt(h/2) sum_p D_p(H_n) theta_p
///   X_{n+1} = X_n + h F(Xbar_n) + sqrt(2h) sum_p D_p(H_n + sqrt(h/2) sum_q D_q(H_n) Theta_{p,q}) theta_p
///
/// One F evaluation per step (F(Xbar_n) is reused by the next step) and
/// 1 + m evaluations of D.
class PostprocessedLangevin {
public:
    PostprocessedLangevin(std::size_t d, std::size_t m, VectorField force, MatrixField diffusion);

    /// Xbar_{-1} = X_0.
    [[nodiscard]] LangevinState initial_state(const State& x0);

    /// Advances (X_n, Xbar_{n-1}) to (X_{n+1}, Xbar_n).
    void step(LangevinState& state, double h, const NoiseDraw& draw);

    [[nodiscard]] std::uint64_t force_evaluations() const { return force_evals_; }
    [[nodiscard]] std::uint64_t diffusion_evaluations() const { return diffusion_evals_; }
    [[nodiscard]] std::size_t dimension() const { return d_; }
    [[nodiscard]] std::size_t noises() const { return m_; }

private:
    std::size_t d_;
    std::size_t m_;
    VectorField force_;
    MatrixField diffusion_;
    std::vector<double> h_point_;
    std::vector<double> d_at_h_;
    std::vector<double> shifted_;
    std::vector<double> d_shifted_;
    std::vector<double> next_x_;
    std::uint64_t force_evals_ = 0;
    std::uint64_t diffusion_evals_ = 0;
};

/// Stateless form of PostprocessedLangevin::step returning (X_{n+1}, Xbar_n).
std::pair<State, State> langevin_postprocessed_step(const VectorField& force, const MatrixField& diffusion,
                                                    std::size_t m, const State& x, const State& xbar_prev,
                                                    double h, const NoiseDraw& draw);

}  // namespace srk
