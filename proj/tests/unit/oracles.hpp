#pragma once

#include <cstdint>
#include <vector>

#include "srk/srk.hpp"

namespace oracle {

// Automorphisms by trying every node permutation.
std::uint64_t brute_symmetry(const srk::DecoratedForest& f);

// One step on the scalar linear SDE dX = lambda X dt + sum_p mu_p X dW^p,
// solving the full stage system (I - K) H = x 1 by Gaussian elimination.
double linear_step(const srk::MethodTableau& t, double lambda, const std::vector<double>& mu, double x, double h,
                   const srk::NoiseDraw& draw);

// E[X^2], E[X^4] at time t for dX = X dt + sum_k c_k sqrt(X^2 + a_k) dW^k, X0 = 1,
// by RK4 on the moment equations.
double tennoise_fourth_moment(double t);

// Dense solve of A x = b, row-major n x n.
std::vector<double> solve(std::vector<double> A, std::vector<double> b);

}  // namespace oracle
