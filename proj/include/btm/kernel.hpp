#pragma once
// Exact finite-window computation of the quenched semigroup. Transition
// probabilities come from uniformization: with every tau_x >= 1 the total
// jump rate 1/tau_x is bounded by Lambda = 1, so
//   P_x(X_t = .) = sum_k e^{-t} t^k / k! * Q^k(x, .),
// where Q = I + L is a genuine jump matrix. The Poisson tail is truncated
// with a Chernoff bound, which gives a hard error budget per row.

#include <cstdint>
#include <vector>

#include "btm/env.hpp"
#include "btm/table.hpp"

namespace btm {

enum class Boundary { absorbing, reflecting };

struct Generator {
    long lo = 0, hi = 0;
    Boundary boundary = Boundary::absorbing;
    std::vector<double> tau;   // window copy of trap depths
    std::vector<double> stay;  // uniformized stay probability per site
    std::vector<double> hop;   // per-side jump probability 1/(2 tau)

    static constexpr double uniformization_rate = 1.0;  // valid since tau >= 1

    std::size_t size() const { return tau.size(); }
    bool contains(long x) const { return x >= lo && x <= hi; }
    double tau_at(long x) const;
    // Generator entry L(x -> y): 1/(2 tau_x) for in-window neighbours,
    // -1/tau_x on the diagonal, 0 otherwise.
    double rate(long x, long y) const;
};

Generator build_generator(const Environment& env, long lo, long hi, Boundary boundary);

struct KernelRow {
    long x = 0;        // base point
    double t = 0.0;    // time
    long lo = 0, hi = 0;
    std::vector<double> prob;  // P_x(X_t = y), y in [lo, hi]
    double leak = 0.0;         // mass absorbed at the window boundary
    double tol = 0.0;          // Poisson truncation tolerance used

    double prob_at(long y) const;  // range-checked
    double mass() const;           // compensated sum of prob entries
};

// Smallest truncation order K with Poisson(t) tail beyond K at most tol.
uint64_t poisson_truncation_order(double t, double tol);

// Window half-width that keeps the absorbed mass of a time-t row below
// tol/10 (sub-Gaussian bound on the uniformized jump count).
long default_window_halfwidth(double t, double tol);

// P_x(X_t = .) with truncation tail <= tol (plus a fraction of tol for
// skipped negligible weights). Throws window_error if leak > 10 tol.
KernelRow transition_row(const Generator& gen, long x, double t, double tol);

// p_t(x,y) = P_x(X_t = y) / tau_y.
double heat_kernel(const Generator& gen, long x, long y, double t, double tol);

// Generator on the default window for a time-t computation centred at x,
// clipped to the environment.
Generator window_generator(const Environment& env, long center, double t, double tol,
                           Boundary boundary = Boundary::absorbing);

// Occupation density of the walk killed on exiting B(x,n) = {|w-x| < n}:
//   g(y,z) = E_y[time at z before exit] / tau_z,
// computed from the tridiagonal linear solve (the defining oracle).
// Returns 0 if y or z lies outside the ball.
double green_function(const Environment& env, long x, long n, long y, long z);

// Closed form for the same quantity (tau-independent); verified against the
// linear solve, usable as a fast path.
double green_closed_form(long x, long n, long y, long z);

// E_y[T_{B(x,n)}] from the same linear system; 0 if y is outside the ball.
double expected_exit_time(const Environment& env, long x, long n, long y);

// Effective resistance between x and the complement of B(x,n) on the
// unit-resistor line: n/2 by the parallel law.
double effective_resistance(long x, long n);

// On-diagonal bounds at volume-matched times: an upper bound at
// t = 2 n V(x,n) against 2 / V(x,n-1), and a lower bound at
// t = (n/2) V(x,n) against V(x,n)^2 / (16 V(x,2n)^3).
struct Prop31Report {
    long x = 0, n = 0;
    double t_upper = 0.0, lhs_upper = 0.0, rhs_upper = 0.0, slack_upper = 0.0;
    bool holds_upper = false;
    double t_lower = 0.0, lhs_lower = 0.0, rhs_lower = 0.0, slack_lower = 0.0;
    bool holds_lower = false;
    bool holds() const { return holds_upper && holds_lower; }
};
Prop31Report check_prop31(const Environment& env, long x, long n, double tol,
                          double numerical_slack = 1e-8);

// Empirical Hoelder constant: max over site pairs |x|,|y| <= radius of
// |p_t(0,x) - p_t(0,y)|^2 / (|x-y| t^{-3/2}).
double check_holder(const Environment& env, double t, long radius, double tol);

// On-diagonal trace: t, p_t(0,0), p_t(0,0)/phi_alpha(t), and for alpha > 1
// additionally p_t(0,0)/phi_alpha(E[tau_0] t).
ResultTable ondiagonal_trace(const Environment& env, double alpha, const std::vector<double>& t_grid,
                             double tol);

}  // namespace btm
