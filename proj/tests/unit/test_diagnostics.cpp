#include "chs/diagnostics.hpp"
#include "chs/errors.hpp"
#include "chs/harness.hpp"
#include "chs/operators.hpp"
#include "chs/scheme.hpp"

#include "fields.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace chs;
using testing_support::random_cells;

namespace {

const PhysParams kParams{0.05, 3.0, 1.0};

// Bulk sum plus gradient energy written out over the face differences.
double energy_by_loops(const CellField& phi, const PhysParams& p) {
    const int n = phi.n();
    const double h = phi.grid().h();
    double bulk = 0.0, grad = 0.0;
    for (int j = 1; j <= n; ++j)
        for (int i = 1; i <= n; ++i) {
            const double v = phi(i, j);
            bulk += (1 + v) * std::log(1 + v) + (1 - v) * std::log(1 - v) - 0.5 * p.theta0 * v * v;
            if (i < n) grad += std::pow((phi(i + 1, j) - v) / h, 2);
            if (j < n) grad += std::pow((phi(i, j + 1) - v) / h, 2);
        }
    return h * h * (bulk + 0.5 * p.epsilon * p.epsilon * grad);
}

}  // namespace

TEST(XLogX, Values) {
    EXPECT_EQ(xlogx(0.0), 0.0);
    EXPECT_EQ(xlogx(1.0), 0.0);
    EXPECT_NEAR(xlogx(2.0), 2.0 * std::log(2.0), 1e-16);
    EXPECT_NEAR(xlogx(1e-300), 1e-300 * std::log(1e-300), 1e-310);
    EXPECT_THROW(xlogx(-1e-12), DomainViolation);
}

TEST(FloryHuggins, EndpointsAndSymmetry) {
    EXPECT_EQ(flory_huggins_density(0.0, 3.0), 0.0);
    EXPECT_NEAR(flory_huggins_density(1.0, 3.0), 2.0 * std::log(2.0) - 1.5, 1e-15);
    EXPECT_EQ(flory_huggins_density(0.4, 3.0), flory_huggins_density(-0.4, 3.0));
    EXPECT_THROW(flory_huggins_density(1.0 + 1e-12, 3.0), DomainViolation);
}

TEST(Energy, ZeroFieldHasZeroEnergy) {
    EXPECT_EQ(discrete_energy(CellField(GridSpec(16)), kParams), 0.0);
}

TEST(Energy, ConstantFieldClosedForm) {
    const double c = 0.3;
    for (double length : {1.0, 2.5}) {
        const GridSpec g(8, length);
        const double expect = g.area() * ((1 + c) * std::log(1 + c) + (1 - c) * std::log(1 - c) -
                                          1.5 * c * c);
        EXPECT_NEAR(discrete_energy(CellField(g, c), kParams), expect, 1e-14 * g.area());
    }
}

TEST(Energy, MatchesIndependentLoop) {
    const GridSpec g(16);
    const CellField phi = random_cells(g, 1, -0.99, 0.99);
    const double expect = energy_by_loops(phi, kParams);
    EXPECT_NEAR(discrete_energy(phi, kParams), expect, 1e-13 * std::abs(expect));
}

TEST(Energy, IgnoresStaleGhosts) {
    const GridSpec g(8);
    CellField phi = random_cells(g, 2, -0.5, 0.5);
    const double e = discrete_energy(phi, kParams);
    phi(0, 3) = 0.9;
    phi(9, 1) = -0.9;
    EXPECT_EQ(discrete_energy(phi, kParams), e);
}

TEST(Energy, AcceptsPureStatesRejectsBeyond) {
    const GridSpec g(4);
    CellField phi(g, 0.0);
    phi(1, 1) = 1.0;
    EXPECT_NO_THROW(discrete_energy(phi, kParams));
    phi(1, 1) = 1.01;
    EXPECT_THROW(discrete_energy(phi, kParams), DomainViolation);
}

TEST(Energy, ConvexPartIsMidpointConvex) {
    const GridSpec g(16);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const CellField a = random_cells(g, 10 + seed, -0.99, 0.99);
        const CellField b = random_cells(g, 20 + seed, -0.99, 0.99);
        CellField m = a + b;
        m *= 0.5;
        EXPECT_LE(convex_energy(m, kParams),
                  0.5 * (convex_energy(a, kParams) + convex_energy(b, kParams)) + 1e-14);
    }
}

TEST(Dissipation, ZeroForAConstantStep) {
    const GridSpec g(8);
    const CellField phi(g, 0.25);
    const StepResult r = chs_step(phi, kParams, 1e-3, 0.0, SolverSettings{});
    EXPECT_EQ(dissipation_residual(phi, r.state, kParams, 1e-3), 0.0);
    EXPECT_EQ(r.diagnostics.dissipation_residual, 0.0);
}

TEST(Dissipation, MatchesTermByTermDefinition) {
    const GridSpec g(16);
    const CellField prev = random_cells(g, 3, -0.5, 0.5);
    const double dt = 1e-3;
    const StepResult r = chs_step(prev, kParams, dt, 0.0, SolverSettings{});
    const CellField dphi = fill_neumann_ghost(r.state.phi - prev);
    MacVector u = r.state.u;
    fill_velocity_inplace(u);
    const double gd = grad_norm(dphi);
    const double gm = grad_norm(r.state.mu);
    const double expect = discrete_energy(r.state.phi, kParams) - discrete_energy(prev, kParams) +
                          0.5 * kParams.epsilon * kParams.epsilon * gd * gd + dt * gm * gm +
                          dt / kParams.gamma * (inner_face(u, u) + velocity_grad_norm_sq(u));
    const double got = dissipation_residual(prev, r.state, kParams, dt);
    EXPECT_NEAR(got, expect, 1e-12 * std::abs(discrete_energy(prev, kParams)));
    EXPECT_LE(got, dissipation_tolerance(r.diagnostics.energy));
}

TEST(Dissipation, ToleranceFloor) {
    EXPECT_EQ(dissipation_tolerance(0.0), 1e-8);
    EXPECT_EQ(dissipation_tolerance(-0.5), 1e-8);
    EXPECT_EQ(dissipation_tolerance(-40.0), 4e-7);
}

TEST(Dissipation, RandomRunStaysWithinTolerance) {
    RunConfig cfg;
    cfg.grid = GridSpec(64);
    cfg.phys = PhysParams{0.01, 3.0, 1.0};
    cfg.time = TimeParams{2e-5, 100 * 2e-5};
    std::vector<double> energies;
    long rows = 0;
    const RunResult r = run_simulation(cfg, [&](long, const StepState&, const StepDiagnostics& d) {
        ++rows;
        energies.push_back(d.energy);
        EXPECT_LE(d.dissipation_residual, dissipation_tolerance(d.energy));
    });
    EXPECT_EQ(rows, 101);
    for (std::size_t k = 1; k < energies.size(); ++k)
        EXPECT_LE(energies[k], energies[k - 1] + dissipation_tolerance(energies[k]));
    EXPECT_LE(mass_drift(std::span<const StepDiagnostics>(r.diagnostics)), 1e-11);
}

TEST(Observe, FillsStateSummaries) {
    const GridSpec g(8);
    CellField phi(g, 0.1);
    phi(2, 2) = 0.7;
    phi(5, 6) = -0.4;
    const StepDiagnostics d = observe(StepState::at_rest(phi, 0.25), kParams);
    EXPECT_EQ(d.t, 0.25);
    EXPECT_EQ(d.max_phi, 0.7);
    EXPECT_EQ(d.min_phi, -0.4);
    EXPECT_NEAR(d.separation, 0.3, 1e-15);
    EXPECT_NEAR(d.mass, (62 * 0.1 + 0.7 - 0.4) / 64, 1e-15);
    EXPECT_EQ(d.energy, discrete_energy(phi, kParams));
    EXPECT_EQ(d.newton_iters, 0);
}

TEST(MassDrift, LargestDeviationFromFirst) {
    const GridSpec g(4);
    std::vector<StepState> states;
    for (double c : {0.1, 0.1 + 1e-12, 0.1 - 3e-12, 0.1})
        states.push_back(StepState::at_rest(CellField(g, c)));
    EXPECT_NEAR(mass_drift(std::span<const StepState>(states)), 3e-12, 1e-16);
    std::vector<StepDiagnostics> rows(3);
    rows[0].mass = 1.0;
    rows[1].mass = 1.5;
    rows[2].mass = 0.0;
    EXPECT_EQ(mass_drift(std::span<const StepDiagnostics>(rows)), 1.0);
    EXPECT_EQ(mass_drift(std::span<const StepDiagnostics>()), 0.0);
}
