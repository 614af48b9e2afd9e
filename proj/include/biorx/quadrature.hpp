#pragma once

#include <functional>
#include <vector>

#include "biorx/kinetics.hpp"

namespace biorx {

/// Nodes and weights for integrals against exp(-x^2).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Golub-Welsch construction; n >= 1.
GaussHermiteRule gauss_hermite(int n);

/// E[g(c)] for c log-normal per `model`, integrated in log space.
double lognormal_expectation(const InterfererModel& model, const std::function<double(double)>& g,
                             const GaussHermiteRule& rule);

}  // namespace biorx
