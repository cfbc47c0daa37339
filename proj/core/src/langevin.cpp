#include <cmath>

#include "srk/errors.hpp"
#include "srk/stepper.hpp"

namespace srk {

PostprocessedLangevin::PostprocessedLangevin(std::size_t d, std::size_t m, VectorField force, MatrixField diffusion)
    : d_(d),
      m_(m),
      force_(std::move(force)),
      diffusion_(std::move(diffusion)),
      h_point_(d),
      d_at_h_(d * m),
      shifted_(d),
      d_shifted_(d * m),
      next_x_(d) {}

LangevinState PostprocessedLangevin::initial_state(const State& x0) {
    if (x0.size() != d_) throw PreconditionError("PostprocessedLangevin: initial state has wrong dimension");
    LangevinState s{x0, x0, State(d_)};
    force_(s.xbar, s.force_at_xbar);
    ++force_evals_;
    return s;
}

void PostprocessedLangevin::step(LangevinState& state, double h, const NoiseDraw& draw) {
    if (state.x.size() != d_ || state.xbar.size() != d_ || state.force_at_xbar.size() != d_) {
        throw PreconditionError("PostprocessedLangevin::step: state has wrong dimension");
    }
    if (draw.m < m_) throw PreconditionError("PostprocessedLangevin::step: draw has fewer noises than D columns");
    const double a = std::sqrt(h / 2.0);
    const double b = std::sqrt(2.0 * h);

    for (std::size_t r = 0; r < d_; ++r) h_point_[r] = state.x[r] + 0.25 * h * state.force_at_xbar[r];
    diffusion_(h_point_, d_at_h_);
    ++diffusion_evals_;

    for (std::size_t r = 0; r < d_; ++r) {
        next_x_[r] = state.x[r];
        state.xbar[r] = state.x[r];
    }
    for (std::size_t p = 1; p <= m_; ++p) {
        const double w = a * draw.theta[p];
        for (std::size_t r = 0; r < d_; ++r) state.xbar[r] += w * d_at_h_[(p - 1) * d_ + r];
    }

    for (std::size_t p = 1; p <= m_; ++p) {
        for (std::size_t r = 0; r < d_; ++r) {
            double s = h_point_[r];
            for (std::size_t q = 1; q <= m_; ++q) s += a * d_at_h_[(q - 1) * d_ + r] * draw.Theta_at(p, q);
            shifted_[r] = s;
        }
        diffusion_(shifted_, d_shifted_);
        ++diffusion_evals_;
        const double w = b * draw.theta[p];
        for (std::size_t r = 0; r < d_; ++r) next_x_[r] += w * d_shifted_[(p - 1) * d_ + r];
    }

    force_(state.xbar, state.force_at_xbar);
    ++force_evals_;
    for (std::size_t r = 0; r < d_; ++r) {
        next_x_[r] += h * state.force_at_xbar[r];
        if (!std::isfinite(next_x_[r]) || !std::isfinite(state.xbar[r])) {
            throw OverflowError("postprocessed Langevin chain left the finite range (h=" + std::to_string(h) + ")");
        }
    }
    state.x.swap(next_x_);
}

std::pair<State, State> langevin_postprocessed_step(const VectorField& force, const MatrixField& diffusion,
                                                    std::size_t m, const State& x, const State& xbar_prev,
                                                    double h, const NoiseDraw& draw) {
    PostprocessedLangevin scheme(x.size(), m, force, diffusion);
    LangevinState state{x, xbar_prev, State(x.size())};
    force(state.xbar, state.force_at_xbar);
    scheme.step(state, h, draw);
    return {state.x, state.xbar};
}

}  // namespace srk
