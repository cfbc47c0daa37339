#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace oracle {

std::uint64_t brute_symmetry(const srk::DecoratedForest& f) {
    const auto& nodes = f.nodes();
    const std::size_t n = nodes.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t count = 0;
    do {
        bool ok = true;
        std::map<int, int> class_map;
        std::map<int, int> inverse;
        for (std::size_t v = 0; v < n && ok; ++v) {
            const int p = nodes[v].parent;
            const int image_parent = p < 0 ? -1 : static_cast<int>(perm[static_cast<std::size_t>(p)]);
            if (nodes[perm[v]].parent != image_parent) ok = false;
            const int a = nodes[v].decoration;
            const int b = nodes[perm[v]].decoration;
            if ((a == 0) != (b == 0)) ok = false;
            if (ok && a != 0) {
                auto [it, fresh] = class_map.emplace(a, b);
                if (!fresh && it->second != b) ok = false;
                auto [jt, fresh2] = inverse.emplace(b, a);
                if (!fresh2 && jt->second != a) ok = false;
            }
        }
        if (ok) ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

std::vector<double> solve(std::vector<double> A, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(A[r * n + col]) > std::abs(A[piv * n + col])) piv = r;
        }
        if (A[piv * n + col] == 0.0) throw std::runtime_error("singular");
        if (piv != col) {
            for (std::size_t k = 0; k < n; ++k) std::swap(A[col * n + k], A[piv * n + k]);
            std::swap(b[col], b[piv]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = A[r * n + col] / A[col * n + col];
            for (std::size_t k = col; k < n; ++k) A[r * n + k] -= f * A[col * n + k];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= A[i * n + k] * x[k];
        x[i] = s / A[i * n + i];
    }
    return x;
}

double linear_step(const srk::MethodTableau& t, double lambda, const std::vector<double>& mu, double x, double h,
                   const srk::NoiseDraw& draw) {
    const std::size_t s1 = t.s1;
    const std::size_t s2 = t.s2;
    const std::size_t m = mu.size();
    const std::size_t n = s1 + s2 * m;
    auto drift = [&](std::size_t i) { return i; };
    auto stoch = [&](std::size_t j, std::size_t p) { return s1 + (p - 1) * s2 + j; };
    const double sh = std::sqrt(h);
    std::vector<double> K(n * n, 0.0);
    for (std::size_t i = 0; i < s1; ++i) {
        for (std::size_t j = 0; j < s1; ++j) K[drift(i) * n + drift(j)] += h * t.A0(i, j) * lambda;
        for (std::size_t j = 0; j < s2; ++j) {
            for (std::size_t q = 1; q <= m; ++q) {
                K[drift(i) * n + stoch(j, q)] += sh * t.B0(i, j) * draw.Theta_at(0, q) * mu[q - 1];
            }
        }
    }
    for (std::size_t p = 1; p <= m; ++p) {
        for (std::size_t j = 0; j < s2; ++j) {
            for (std::size_t k = 0; k < s1; ++k) {
                K[stoch(j, p) * n + drift(k)] += h * draw.Theta_at(p, 0) * t.A1(j, k) * lambda;
            }
            for (std::size_t k = 0; k < s2; ++k) {
                for (std::size_t q = 1; q <= m; ++q) {
                    const bool hat = t.calculus == srk::Calculus::Stratonovich && q == p;
                    const double coeff = hat ? (*t.Bhat1)(j, k) : t.B1(j, k);
                    K[stoch(j, p) * n + stoch(k, q)] += sh * coeff * draw.Theta_at(p, q) * mu[q - 1];
                }
            }
        }
    }
    std::vector<double> A(n * n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) A[r * n + c] = (r == c ? 1.0 : 0.0) - K[r * n + c];
    }
    const std::vector<double> H = solve(A, std::vector<double>(n, x));
    double out = x;
    for (std::size_t i = 0; i < s1; ++i) out += h * t.alpha[i] * lambda * H[drift(i)];
    for (std::size_t p = 1; p <= m; ++p) {
        for (std::size_t j = 0; j < s2; ++j) out += sh * t.beta[j] * draw.theta[p] * mu[p - 1] * H[stoch(j, p)];
    }
    return out;
}

double tennoise_fourth_moment(double t) {
    const double c[10] = {1.0 / 10, 1.0 / 15, 1.0 / 20, 1.0 / 25, 1.0 / 40, 1.0 / 25, 1.0 / 20, 1.0 / 15, 1.0 / 20, 1.0 / 25};
    const double a[10] = {1.0 / 2, 1.0 / 4, 1.0 / 5, 1.0 / 10, 1.0 / 20, 1.0 / 2, 1.0 / 4, 1.0 / 5, 1.0 / 10, 1.0 / 20};
    double s1 = 0.0;
    double s2 = 0.0;
    for (int k = 0; k < 10; ++k) {
        s1 += c[k] * c[k];
        s2 += c[k] * c[k] * a[k];
    }
    // Ito: d E[X^2] = (2 + s1) E[X^2] + s2,  d E[X^4] = (4 + 6 s1) E[X^4] + 6 s2 E[X^2].
    auto rhs = [&](const std::array<double, 2>& y) {
        return std::array<double, 2>{(2 + s1) * y[0] + s2, (4 + 6 * s1) * y[1] + 6 * s2 * y[0]};
    };
    std::array<double, 2> y{1.0, 1.0};
    const int n = 20000;
    const double dt = t / n;
    for (int i = 0; i < n; ++i) {
        auto k1 = rhs(y);
        auto k2 = rhs({y[0] + dt / 2 * k1[0], y[1] + dt / 2 * k1[1]});
        auto k3 = rhs({y[0] + dt / 2 * k2[0], y[1] + dt / 2 * k2[1]});
        auto k4 = rhs({y[0] + dt * k3[0], y[1] + dt * k3[1]});
        for (int r = 0; r < 2; ++r) y[r] += dt / 6 * (k1[r] + 2 * k2[r] + 2 * k3[r] + k4[r]);
    }
    return y[1];
}

}  // namespace oracle
