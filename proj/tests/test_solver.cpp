#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "lgt/ed.hpp"
#include "lgt/model.hpp"
#include "lgt/solver.hpp"

using namespace lgt;

namespace {

ModelSpec make_spec(Variant v, int n, int d) {
  ModelSpec s;
  s.variant = v;
  s.num_sites = n;
  s.link_dim = d;
  s.gauss_penalty = 1000.0;
  s.charge_penalty = 1000.0;
  return s;
}

SolverOptions quick_opts(int d_max) {
  SolverOptions o;
  o.max_bond = d_max;
  o.rel_tol = 1e-10;
  return o;
}

}  // namespace

TEST_CASE("two-site search reproduces the analytic two-state ground state") {
  for (Variant v : {Variant::Zd, Variant::TruncatedCQED}) {
    const ModelSpec spec = make_spec(v, 2, 3);
    const HamiltonianRep h = build_hamiltonian(spec, 1.0);
    const GroundStateResult res = find_ground_state(h, quick_opts(8));
    CHECK(res.converged);
    const double golden = 0.5 * (1.0 - std::sqrt(5.0));
    CHECK(res.energy == doctest::Approx(golden).epsilon(1e-8));
    CHECK(expectation(res.state, penalty_observable(spec)) < 1e-8);
  }
}

TEST_CASE("x = 0 ground state is the strong-coupling product state") {
  for (Variant v : {Variant::Zd, Variant::TruncatedCQED}) {
    const ModelSpec spec = make_spec(v, 6, 3);
    const HamiltonianRep h = build_hamiltonian(spec, 0.0);
    const GroundStateResult res = find_ground_state(h, quick_opts(8));
    CHECK(res.converged);
    CHECK(std::abs(res.energy) < 1e-10);
    CHECK(std::abs(overlap(res.state, strong_coupling_state(spec))) >= 1.0 - 1e-10);
  }
}

TEST_CASE("matches exact sector diagonalization on N = 6 instances") {
  for (Variant v : {Variant::Zd, Variant::TruncatedCQED}) {
    const ModelSpec spec = make_spec(v, 6, 3);
    const double x = 5.0;
    const DenseModel model(spec, x);
    auto [vals, vecs] = exact_eigs(model, 1, true);
    const HamiltonianRep h = build_hamiltonian(spec, x);
    const GroundStateResult res = find_ground_state(h, quick_opts(20));
    CHECK(res.converged);
    CHECK(res.energy == doctest::Approx(vals(0)).epsilon(1e-8));
    // variational upper bound
    CHECK(res.energy >= vals(0) - 1e-10);
  }
}

TEST_CASE("sweep energies are non-increasing and larger D never hurts") {
  const ModelSpec spec = make_spec(Variant::Zd, 6, 3);
  const HamiltonianRep h = build_hamiltonian(spec, 3.0);
  const GroundStateResult res = find_ground_state(h, quick_opts(16));
  for (std::size_t k = 1; k < res.trace.energies.size(); ++k)
    CHECK(res.trace.energies[k] <=
          res.trace.energies[k - 1] + 1e-9 * (1.0 + std::abs(res.trace.energies[k])));

  const GroundStateResult res8 = find_ground_state(h, quick_opts(8));
  CHECK(res.energy <= res8.energy + 1e-10);
  // converged energy equals the exact expectation value of the state
  CHECK(res.energy == doctest::Approx(expectation(res.state, h.mpo)).epsilon(1e-10));
}

TEST_CASE("warm starts converge in fewer sweeps") {
  const ModelSpec spec = make_spec(Variant::Zd, 8, 3);
  const HamiltonianRep h = build_hamiltonian(spec, 2.0);
  const GroundStateResult cold = find_ground_state(h, quick_opts(12));
  SolverOptions warm = quick_opts(12);
  warm.warm_start = &cold.state;
  const GroundStateResult res = find_ground_state(h, warm);
  CHECK(res.converged);
  CHECK(res.trace.sweeps <= 4);
  CHECK(res.energy == doctest::Approx(cold.energy).epsilon(1e-9));
}

TEST_CASE("first excited state and gap on the analytic instance") {
  for (Variant v : {Variant::Zd, Variant::TruncatedCQED}) {
    const ModelSpec spec = make_spec(v, 2, 3);
    const HamiltonianRep h = build_hamiltonian(spec, 1.0);
    const GroundStateResult g = find_ground_state(h, quick_opts(8));
    const GroundStateResult e = find_first_excited(h, g, quick_opts(8));
    CHECK(e.energy - g.energy == doctest::Approx(std::sqrt(5.0)).epsilon(1e-6));
    CHECK(std::abs(overlap(g.state, e.state)) < 1e-6);
    CHECK(expectation(e.state, penalty_observable(spec)) < 1e-8);
  }
}

TEST_CASE("first excited matches sector diagonalization on N = 6") {
  const ModelSpec spec = make_spec(Variant::Zd, 6, 3);
  const double x = 2.0;
  const DenseModel model(spec, x);
  auto [vals, vecs] = exact_eigs(model, 2, true);
  const HamiltonianRep h = build_hamiltonian(spec, x);
  const GroundStateResult g = find_ground_state(h, quick_opts(16));
  const GroundStateResult e = find_first_excited(h, g, quick_opts(16));
  CHECK(e.energy == doctest::Approx(vals(1)).epsilon(1e-6));
}

TEST_CASE("gap curve on the two-site instance") {
  const ModelSpec spec = make_spec(Variant::Zd, 2, 3);
  const auto curve = compute_gap_curve(spec, {0.5, 1.0, 2.0}, quick_opts(8));
  REQUIRE(curve.size() == 3);
  // analytic: E = (1 -+ sqrt(1 + 4 x^2)) / 2, gap = sqrt(1 + 4 x^2)
  for (const GapPoint& p : curve)
    CHECK(p.gap == doctest::Approx(std::sqrt(1.0 + 4.0 * p.x * p.x)).epsilon(1e-6));
}

TEST_CASE("bond-dimension extrapolation") {
  CHECK_THROWS_AS(extrapolate_bond_dimension({{10, -1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(extrapolate_bond_dimension({{10, -1.0}, {10, -1.1}}),
                  std::invalid_argument);

  auto [e_flat, err_flat] = extrapolate_bond_dimension({{10, -1.5}, {20, -1.5}});
  CHECK(e_flat == doctest::Approx(-1.5).epsilon(1e-14));
  CHECK(err_flat == doctest::Approx(0.0).epsilon(1e-14));

  auto [e_line, err_line] = extrapolate_bond_dimension({{10, -1.00}, {20, -1.01}});
  CHECK(e_line == doctest::Approx(-1.02).epsilon(1e-12));
  CHECK(err_line == doctest::Approx(0.01).epsilon(1e-12));

  // synthetic E(D) = a + b / D is recovered exactly from any two points,
  // and extra smaller-D points are ignored by construction
  auto [e_model, err_model] = extrapolate_bond_dimension(
      {{8, -2.0 + 3.0 / 8}, {16, -2.0 + 3.0 / 16}, {32, -2.0 + 3.0 / 32}});
  CHECK(e_model == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(err_model == doctest::Approx(3.0 / 32).epsilon(1e-9));
}

TEST_CASE("restart seeds are deterministic and parameter-sensitive") {
  const ModelSpec spec = make_spec(Variant::Zd, 4, 3);
  CHECK(restart_seed(spec, 1.0, 16, 0) == restart_seed(spec, 1.0, 16, 0));
  CHECK(restart_seed(spec, 1.0, 16, 0) != restart_seed(spec, 1.0, 16, 1));
  CHECK(restart_seed(spec, 1.0, 16, 0) != restart_seed(spec, 2.0, 16, 0));
}

TEST_CASE("convergence trace CSV") {
  ConvergenceTrace trace;
  trace.energies = {-0.5, -0.61, -0.618};
  trace.sweeps = 3;
  const auto path = std::filesystem::temp_directory_path() / "lgt_trace.csv";
  write_trace_csv(trace, path.string());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "sweep,energy,rel_change");
  int rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 3);
  std::filesystem::remove(path);
}
