#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "srk/tableau.hpp"

namespace srk {

using Rng = std::mt19937_64;

/// Law of the per-step random coefficients.
///
/// Ito:   P(theta = ±sqrt(2+sqrt3)) = (3-sqrt3)/12, P(theta = ±sqrt(2-sqrt3)) = (3+sqrt3)/12
/// Strat: P(theta = ±sqrt3) = 1/6, P(theta = 0) = 2/3
/// and independent Rademacher eta_0..eta_m. The c = 1/2 variant sets
/// Theta_{0,p} = theta_p and Theta_{p,0} = 1.
class RvFamily {
public:
    /// Throws PreconditionError unless c is in (0, 1/2]; half_variant must be
    /// true exactly when c = 1/2.
    RvFamily(Calculus calculus, double c, bool half_variant);

    static RvFamily for_method(const MethodTableau& t);

    [[nodiscard]] Calculus calculus() const { return calculus_; }
    [[nodiscard]] double c() const { return c_; }
    [[nodiscard]] bool half_variant() const { return half_; }

    /// sqrt(1/(2c) - 1) and sqrt(2c/(1-2c)); zero for the half variant.
    [[nodiscard]] double drift_shift() const { return shift0p_; }
    [[nodiscard]] double noise_shift() const { return shiftp0_; }

    /// Support points and probabilities of theta_p.
    [[nodiscard]] const std::vector<double>& theta_support() const { return support_; }
    [[nodiscard]] const std::vector<double>& theta_probabilities() const { return probs_; }

    /// Number of scalar random variables drawn per step (N_r).
    [[nodiscard]] std::size_t random_count(std::size_t m) const;

    friend bool operator==(const RvFamily& a, const RvFamily& b) {
        return a.calculus_ == b.calculus_ && a.c_ == b.c_ && a.half_ == b.half_;
    }

private:
    Calculus calculus_;
    double c_;
    bool half_;
    double shift0p_ = 0.0;
    double shiftp0_ = 0.0;
    std::vector<double> support_;
    std::vector<double> probs_;
};

/// One step's realization of theta_0..theta_m and Theta_{p,q}, 0 <= p,q <= m.
struct NoiseDraw {
    std::size_t m = 0;
    std::vector<double> theta;  // size m+1, theta[0] = 1
    std::vector<double> Theta;  // (m+1)^2 row-major, Theta(0,0) = 1

    NoiseDraw() = default;
    explicit NoiseDraw(std::size_t noises)
        : m(noises), theta(noises + 1, 0.0), Theta((noises + 1) * (noises + 1), 0.0) {}

    [[nodiscard]] double Theta_at(std::size_t p, std::size_t q) const { return Theta[p * (m + 1) + q]; }
    double& Theta_at(std::size_t p, std::size_t q) { return Theta[p * (m + 1) + q]; }
};

/// Fills Theta from theta and eta (eta indexed 0..m) with the family's rules.
void derive_Theta(const RvFamily& family, const std::vector<double>& eta, NoiseDraw& draw);

/// Draws a fresh step realization; `draw` is resized as needed.
void sample_draw(const RvFamily& family, std::size_t m, Rng& rng, NoiseDraw& draw);
NoiseDraw sample_draw(const RvFamily& family, std::size_t m, Rng& rng);

struct Atom {
    double probability;
    NoiseDraw draw;
};

/// Every joint outcome of (eta_0..eta_m, theta_1..theta_m) with its probability.
struct AtomTable {
    std::size_t m = 0;
    std::vector<Atom> atoms;
};

inline constexpr std::size_t kMaxAtomNoises = 3;

/// Throws CapacityError when m > 3.
AtomTable enumerate_atoms(const RvFamily& family, std::size_t m);

/// Factor of a monomial in the random coefficients: theta[p] (q ignored) or
/// Theta[p][q], raised to `exponent`.
struct MonomialFactor {
    enum class Kind { Theta, theta };
    Kind kind;
    std::size_t p;
    std::size_t q;
    unsigned exponent = 1;

    static MonomialFactor small_theta(std::size_t p, unsigned e = 1) { return {Kind::theta, p, 0, e}; }
    static MonomialFactor big_Theta(std::size_t p, std::size_t q, unsigned e = 1) { return {Kind::Theta, p, q, e}; }
};

using Monomial = std::vector<MonomialFactor>;

double evaluate_monomial(const Monomial& monomial, const NoiseDraw& draw);

/// Exact expectation over the atom table.
double moment(const AtomTable& table, const Monomial& monomial);
double moment(const RvFamily& family, std::size_t m, const Monomial& monomial);

}  // namespace srk
