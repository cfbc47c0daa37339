#include "srk/randvars.hpp"

#include <cmath>

#include "srk/errors.hpp"

namespace srk {

RvFamily::RvFamily(Calculus calculus, double c, bool half_variant)
    : calculus_(calculus), c_(c), half_(half_variant) {
    if (!(c > 0.0 && c <= 0.5)) {
        throw PreconditionError("RvFamily: c must lie in (0, 1/2], got " + std::to_string(c));
    }
    if (half_variant != (c == 0.5)) {
        throw PreconditionError("RvFamily: the half variant is used exactly when c = 1/2");
    }
    if (!half_) {
        shift0p_ = std::sqrt(1.0 / (2.0 * c) - 1.0);
        shiftp0_ = std::sqrt(2.0 * c / (1.0 - 2.0 * c));
    }
    if (calculus == Calculus::Ito) {
        const double s3 = std::sqrt(3.0);
        const double big = std::sqrt(2.0 + s3);
        const double small = std::sqrt(2.0 - s3);
        const double p_big = (3.0 - s3) / 12.0;
        const double p_small = (3.0 + s3) / 12.0;
        support_ = {big, -big, small, -small};
        probs_ = {p_big, p_big, p_small, p_small};
    } else {
        const double s3 = std::sqrt(3.0);
        support_ = {s3, -s3, 0.0};
        probs_ = {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0};
    }
}

RvFamily RvFamily::for_method(const MethodTableau& t) { return RvFamily(t.calculus, t.c, t.c == 0.5); }

std::size_t RvFamily::random_count(std::size_t m) const {
    std::size_t n = m;
    if (!half_) n += m;
    if (m > 1) n += 1;
    return n;
}

void derive_Theta(const RvFamily& family, const std::vector<double>& eta, NoiseDraw& draw) {
    const std::size_t m = draw.m;
    if (eta.size() != m + 1 || draw.theta.size() != m + 1) {
        throw PreconditionError("derive_Theta: eta and theta must have m+1 entries");
    }
    draw.theta[0] = 1.0;
    draw.Theta_at(0, 0) = 1.0;
    const bool ito = family.calculus() == Calculus::Ito;
    for (std::size_t p = 1; p <= m; ++p) {
        const double th = draw.theta[p];
        if (family.half_variant()) {
            draw.Theta_at(0, p) = th;
            draw.Theta_at(p, 0) = 1.0;
        } else {
            draw.Theta_at(0, p) = th + eta[p] * family.drift_shift();
            draw.Theta_at(p, 0) = 1.0 - eta[p] * th * family.noise_shift();
        }
        for (std::size_t q = 1; q <= m; ++q) {
            if (q == p) {
                draw.Theta_at(p, p) = ito ? -3.0 * th + th * th * th : th;
            } else if (q > p) {
                draw.Theta_at(p, q) = draw.theta[q] * (1.0 + eta[0]);
            } else {
                draw.Theta_at(p, q) = draw.theta[q] * (1.0 - eta[0]);
            }
        }
    }
}

namespace {

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double rademacher(Rng& rng) { return (rng() >> 63) != 0 ? 1.0 : -1.0; }

double sample_theta(const RvFamily& family, Rng& rng) {
    const auto& support = family.theta_support();
    const auto& probs = family.theta_probabilities();
    double u = uniform01(rng);
    for (std::size_t k = 0; k + 1 < support.size(); ++k) {
        if (u < probs[k]) return support[k];
        u -= probs[k];
    }
    return support.back();
}

}  // namespace

void sample_draw(const RvFamily& family, std::size_t m, Rng& rng, NoiseDraw& draw) {
    if (draw.m != m || draw.theta.size() != m + 1) draw = NoiseDraw(m);
    thread_local std::vector<double> eta;
    eta.assign(m + 1, 1.0);
    eta[0] = m > 1 ? rademacher(rng) : 1.0;
    for (std::size_t p = 1; p <= m; ++p) {
        draw.theta[p] = sample_theta(family, rng);
        if (!family.half_variant()) eta[p] = rademacher(rng);
    }
    derive_Theta(family, eta, draw);
}

NoiseDraw sample_draw(const RvFamily& family, std::size_t m, Rng& rng) {
    NoiseDraw draw(m);
    sample_draw(family, m, rng, draw);
    return draw;
}

AtomTable enumerate_atoms(const RvFamily& family, std::size_t m) {
    if (m > kMaxAtomNoises) {
        throw CapacityError("enumerate_atoms: at most " + std::to_string(kMaxAtomNoises) + " noises, got " +
                            std::to_string(m));
    }
    const auto& support = family.theta_support();
    const auto& probs = family.theta_probabilities();
    const std::size_t k = support.size();

    AtomTable table;
    table.m = m;
    std::size_t theta_combos = 1;
    for (std::size_t p = 0; p < m; ++p) theta_combos *= k;
    const std::size_t eta_combos = std::size_t{1} << (m + 1);

    std::vector<double> eta(m + 1);
    for (std::size_t e = 0; e < eta_combos; ++e) {
        for (std::size_t p = 0; p <= m; ++p) eta[p] = ((e >> p) & 1U) != 0 ? -1.0 : 1.0;
        for (std::size_t t = 0; t < theta_combos; ++t) {
            NoiseDraw draw(m);
            double prob = 1.0 / static_cast<double>(eta_combos);
            std::size_t code = t;
            for (std::size_t p = 1; p <= m; ++p) {
                draw.theta[p] = support[code % k];
                prob *= probs[code % k];
                code /= k;
            }
            derive_Theta(family, eta, draw);
            table.atoms.push_back({prob, std::move(draw)});
        }
    }
    return table;
}

double evaluate_monomial(const Monomial& monomial, const NoiseDraw& draw) {
    double v = 1.0;
    for (const auto& f : monomial) {
        if (f.p > draw.m || (f.kind == MonomialFactor::Kind::Theta && f.q > draw.m)) {
            throw PreconditionError("evaluate_monomial: noise index exceeds m");
        }
        const double base = f.kind == MonomialFactor::Kind::theta ? draw.theta[f.p] : draw.Theta_at(f.p, f.q);
        for (unsigned e = 0; e < f.exponent; ++e) v *= base;
    }
    return v;
}

double moment(const AtomTable& table, const Monomial& monomial) {
    double s = 0.0;
    for (const auto& atom : table.atoms) s += atom.probability * evaluate_monomial(monomial, atom.draw);
    return s;
}

double moment(const RvFamily& family, std::size_t m, const Monomial& monomial) {
    return moment(enumerate_atoms(family, m), monomial);
}

}  // namespace srk
