#pragma once

// Gauss-Hermite quadrature for expectations against the standard normal law,
// with a node-doubling convergence control (start at 64 nodes, double until
// the relative change drops below tol or 1024 nodes are reached).

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace lmsv::quad {

// Raised on hard numerical failures (quadrature, root finding, embeddings).
// The CLI maps it to exit code 2.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Nodes/weights for weight exp(-x^2) on n points (physicists' convention);
// rules are computed once and cached, immutable afterwards.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussHermiteRule& gauss_hermite(int n);

// E[f(X)], X ~ N(0,1), on a fixed n-node rule.
double expect_fixed(const std::function<double(double)>& f, int n);

struct QuadPolicy {
  int start_nodes = 64;
  int max_nodes = 1024;
  double rel_tol = 1e-10;
  // Throw NumericError when the doubling loop ends above rel_tol.  Integrands
  // with a kink (clamped survival functions) stall around 1e-6..1e-9; callers
  // that can live with that set this to false and read `converged`.
  bool require_convergence = true;
};

struct QuadResult {
  double value = 0.0;
  bool converged = false;
  double rel_change = 0.0;
  int nodes = 0;
};

QuadResult expect_adaptive(const std::function<double(double)>& f,
                           const QuadPolicy& policy = {});

// Root finding ------------------------------------------------------------

// Solves f(x) = 0 for decreasing or increasing continuous f on [lo, hi]
// (f(lo), f(hi) of opposite sign) by bisection with an Illinois step;
// converges to relative tolerance rel_tol on x.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double rel_tol = 1e-13, int max_iter = 200);

// Gaussian integral identities ---------------------------------------------

double normal_pdf(double x);
double normal_cdf(double x);
double normal_sf(double x);  // 1 - cdf, accurate in the upper tail

// I_m(b, cut) = integral over (-inf, cut] of He_m(x) e^{bx} phi(x) dx for
// m = 0..max_order, where He_m are probabilists' Hermite polynomials.
// Closed recurrence: I_0 = e^{b^2/2} Phi(cut - b),
// I_m = b I_{m-1} - He_{m-1}(cut) e^{b^2/2} phi(cut - b).
std::vector<double> hermite_exp_integrals(double b, double cut, int max_order);

}  // namespace lmsv::quad
