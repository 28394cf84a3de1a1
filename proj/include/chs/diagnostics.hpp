#pragma once

#include "chs/state.hpp"

#include <span>

namespace chs {

/// x ln x, continuous at 0. Throws DomainViolation for x < 0.
double xlogx(double x);

/// Flory-Huggins density (1+phi)ln(1+phi) + (1-phi)ln(1-phi) - theta0/2 phi^2.
double flory_huggins_density(double phi, double theta0);

/// F_h(phi): the Flory-Huggins bulk term summed over cells plus
/// eps^2/2 ||grad_h phi||^2. Neumann fill is applied internally.
/// Throws DomainViolation if any |phi| > 1.
double discrete_energy(const CellField& phi, const PhysParams& params);

/// Convex part only: logarithms plus the gradient term (theta0 dropped).
double convex_energy(const CellField& phi, const PhysParams& params);

/// F(next) - F(prev) + eps^2/2 ||grad(dphi)||^2 + dt ||grad mu||^2
///   + dt/gamma (||u||^2 + ||grad u||^2),
/// nonpositive for an exact step. Summed with compensation so that small
/// differences of O(1) energies keep their digits.
double dissipation_residual(const CellField& prev_phi, const StepState& next,
                            const PhysParams& params, double dt);
double dissipation_residual(const StepState& prev, const StepState& next,
                            const PhysParams& params, double dt);

/// The per-step acceptance bound on dissipation_residual: 1e-8 max(1, |F|).
double dissipation_tolerance(double energy);

/// Energy, mass, and extrema of a state; solver counters left at zero.
StepDiagnostics observe(const StepState& state, const PhysParams& params);

/// max_n |mean(phi^n) - mean(phi^0)|.
double mass_drift(std::span<const StepState> states);
double mass_drift(std::span<const StepDiagnostics> rows);

}  // namespace chs
