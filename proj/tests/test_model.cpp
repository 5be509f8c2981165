#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "lgt/ed.hpp"
#include "lgt/model.hpp"
#include "support.hpp"

using namespace lgt;
using test::embed_window;
using test::max_abs;

namespace {

ModelSpec make_spec(Variant v, int n, int d, double mu = 0.0) {
  ModelSpec s;
  s.variant = v;
  s.num_sites = n;
  s.link_dim = d;
  s.mass_mu = mu;
  return s;
}

}  // namespace

TEST_CASE("link operators reject invalid dimensions") {
  CHECK_THROWS_AS(build_link_operators(Variant::Zd, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_link_operators(Variant::Zd, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_link_operators(Variant::TruncatedCQED, 2), std::invalid_argument);
}

TEST_CASE("Zd link operators: cyclic shift with wraparound") {
  const LinkOperatorSet ops = build_link_operators(Variant::Zd, 3);
  CHECK(ops.l_z(0, 0) == cplx(-1.0, 0.0));
  CHECK(ops.l_z(1, 1) == cplx(0.0, 0.0));
  CHECK(ops.l_z(2, 2) == cplx(1.0, 0.0));
  // |-1> -> |0> -> |1> -> |-1> with unit amplitude
  CHECK(ops.l_plus(1, 0) == cplx(1.0, 0.0));
  CHECK(ops.l_plus(2, 1) == cplx(1.0, 0.0));
  CHECK(ops.l_plus(0, 2) == cplx(1.0, 0.0));
  CHECK(max_abs(ops.l_minus - ops.l_plus.adjoint()) == 0.0);

  for (int d : {3, 5, 7, 9}) {
    const LinkOperatorSet o = build_link_operators(Variant::Zd, d);
    // unitary, and L+^d = identity
    CHECK(max_abs(o.l_plus * o.l_plus.adjoint() - Mat::Identity(d, d)) < 1e-14);
    Mat power = Mat::Identity(d, d);
    for (int k = 0; k < d; ++k) power = o.l_plus * power;
    CHECK(max_abs(power - Mat::Identity(d, d)) < 1e-14);
  }
}

TEST_CASE("cQED link operators: normalized angular momentum ladder") {
  const LinkOperatorSet ops = build_link_operators(Variant::TruncatedCQED, 3);
  // l = 1 ladder elements sqrt(2) are normalized by sqrt(l(l+1)) = sqrt(2),
  // leaving two superdiagonal entries of magnitude 1 with phase i.
  CHECK(std::abs(ops.l_plus(1, 0) - iu) < 1e-15);
  CHECK(std::abs(ops.l_plus(2, 1) - iu) < 1e-15);
  CHECK(std::abs(ops.l_plus(0, 2)) == 0.0);

  for (int d : {3, 5, 9}) {
    const LinkOperatorSet o = build_link_operators(Variant::TruncatedCQED, d);
    CHECK(max_abs(o.l_minus - o.l_plus.adjoint()) == 0.0);
    // truncation: L+ L- != identity at finite d
    CHECK(max_abs(o.l_plus * o.l_minus - Mat::Identity(d, d)) > 0.1);
    // exact ladder commutation [lz, L+] = L+
    CHECK(max_abs(o.l_z * o.l_plus - o.l_plus * o.l_z - o.l_plus) < 1e-14);
    // spectral norm never exceeds 1
    Eigen::JacobiSVD<Mat> svd(o.l_plus);
    CHECK(svd.singularValues()(0) <= 1.0 + 1e-12);
  }

  // Entries at fixed flux approach magnitude 1 from below as d grows.
  double prev = 0.0;
  for (int d : {5, 7, 9, 11}) {
    const LinkOperatorSet o = build_link_operators(Variant::TruncatedCQED, d);
    const int j2 = (d - 1) / 2;
    const double amp = std::abs(o.l_plus(j2 + 2, j2 + 1));  // m = 1 -> 2
    CHECK(amp < 1.0);
    CHECK(amp > prev);
    prev = amp;
  }
}

TEST_CASE("two-site Zd Hamiltonian reproduces the analytic two-state problem") {
  const ModelSpec spec = make_spec(Variant::Zd, 2, 3);
  const DenseModel model(spec, 1.0);
  REQUIRE(model.sector().dimension() == 2);
  const Mat h = model.sector_matrix(1.0);
  // Basis sorted by global index: the flux -1 state comes first, the
  // strong-coupling state second.
  CHECK(std::abs(h(0, 0) - 1.0) < 1e-14);
  CHECK(std::abs(h(1, 1) - 0.0) < 1e-14);
  CHECK(std::abs(std::abs(h(0, 1)) - 1.0) < 1e-14);
  Eigen::SelfAdjointEigenSolver<Mat> eig(h);
  const double golden = 0.5 * (1.0 - std::sqrt(5.0));
  CHECK(eig.eigenvalues()(0) == doctest::Approx(golden).epsilon(1e-12));
  CHECK(eig.eigenvalues()(1) == doctest::Approx(0.5 * (1.0 + std::sqrt(5.0))).epsilon(1e-12));
}

TEST_CASE("x = 0 Hamiltonian is the diagonal electric energy") {
  for (Variant v : {Variant::Zd, Variant::TruncatedCQED}) {
    const ModelSpec spec = make_spec(v, 3, 3);
    const Mat w = hamiltonian_mpo(spec, 0.0, false).to_dense_matrix();
    CHECK(max_abs(w - Mat(w.diagonal().asDiagonal())) < 1e-14);
    const DenseModel model(spec, 0.0);
    const Mat dense = model.dense_matrix(false);
    CHECK(max_abs(w - dense) < 1e-13);
  }
}

TEST_CASE("gate blocks sum to the bare Hamiltonian MPO") {
  for (Variant v : {Variant::Zd, Variant::TruncatedCQED}) {
    const ModelSpec spec = make_spec(v, 4, 3, 0.7);  // nonzero mass stresses the split
    const double x = 5.0;
    const HamiltonianRep h = build_hamiltonian(spec, x);
    const auto dims = spec.phys_dims();
    Mat sum = Mat::Zero(432, 432);
    for (const GateBlock& b : h.blocks)
      sum += embed_window(dims, b.window_start(), b.h);
    const Mat w = hamiltonian_mpo(spec, x, false).to_dense_matrix();
    CHECK(max_abs(sum - w) < 1e-12);
    // blocks are Hermitian and the layers act on disjoint positions
    for (const GateBlock& b : h.blocks) CHECK(max_abs(b.h - b.h.adjoint()) < 1e-14);
  }
}

TEST_CASE("Hamiltonian MPO matches the independent dense construction") {
  for (Variant v : {Variant::Zd, Variant::TruncatedCQED}) {
    for (double x : {0.0, 1.0, 5.0}) {
      const ModelSpec spec = make_spec(v, 3, 5);
      const DenseModel model(spec, x);
      const Mat w = hamiltonian_mpo(spec, x, false).to_dense_matrix();
      CHECK(max_abs(w - model.dense_matrix(false)) < 1e-12);
      CHECK(max_abs(w - w.adjoint()) < 1e-13);
    }
  }
}

TEST_CASE("penalty MPOs match the diagonal observables and are PSD") {
  for (Variant v : {Variant::Zd, Variant::TruncatedCQED}) {
    const ModelSpec spec = make_spec(v, 3, 3);
    const DenseModel model(spec, 1.0);
    const Mat p = penalty_observable(spec).mpo.to_dense_matrix();
    const Mat expected = model.penalty_diagonal().cast<cplx>().asDiagonal();
    CHECK(max_abs(p - expected) < 1e-12);
    Eigen::SelfAdjointEigenSolver<Mat> eig(p);
    CHECK(eig.eigenvalues()(0) > -1e-12);

    // Kernel dimension = number of Gauss-satisfying configurations, counted
    // independently from the generator definition.
    int zero_count = 0;
    for (Eigen::Index i = 0; i < model.dim(); ++i)
      if (model.penalty_diagonal()(i) < 1e-12) ++zero_count;
    int eig_zero = 0;
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
      if (eig.eigenvalues()(i) < 1e-9) ++eig_zero;
    CHECK(zero_count == eig_zero);

    const Mat q = total_charge_observable(spec).mpo.to_dense_matrix();
    CHECK(max_abs(q - Mat(model.charge_diagonal().cast<cplx>().asDiagonal())) < 1e-12);
  }
}

TEST_CASE("penalty-augmented MPO equals W + gauss_penalty P + charge_penalty Q^2") {
  ModelSpec spec = make_spec(Variant::Zd, 3, 3);
  spec.gauss_penalty = 1000.0;
  spec.charge_penalty = 500.0;
  const double x = 2.0;
  const Mat full = hamiltonian_mpo(spec, x, true).to_dense_matrix();
  const Mat bare = hamiltonian_mpo(spec, x, false).to_dense_matrix();
  const Mat p = penalty_observable(spec).mpo.to_dense_matrix();
  const Mat q = total_charge_observable(spec).mpo.to_dense_matrix();
  CHECK(max_abs(full - (bare + 1000.0 * p + 500.0 * (q * q))) < 1e-9);
}

TEST_CASE("Hamiltonian commutes with every Gauss operator") {
  for (Variant v : {Variant::Zd, Variant::TruncatedCQED}) {
    for (double x : {1.0, 5.0}) {
      const ModelSpec spec = make_spec(v, 4, 3);
      const DenseModel model(spec, x);
      const Mat w = model.dense_matrix(false);
      for (int n = 1; n <= spec.num_sites; ++n) {
        const Mat g = model.dense_gauss_matrix(n);
        CHECK(max_abs(w * g - g * w) < 1e-12);
      }
    }
  }
}

TEST_CASE("gauss_operators windows match the dense diagonal operators") {
  for (Variant v : {Variant::Zd, Variant::TruncatedCQED}) {
    const ModelSpec spec = make_spec(v, 3, 3);
    const DenseModel model(spec, 1.0);
    const auto gs = gauss_operators(spec);
    REQUIRE(static_cast<int>(gs.size()) == spec.num_sites);
    const auto dims = spec.phys_dims();
    for (const GaussOperator& g : gs) {
      const Mat dense = embed_window(dims, g.window_start, g.op);
      CHECK(max_abs(dense - model.dense_gauss_matrix(g.site)) < 1e-12);
    }
  }
}

TEST_CASE("Zd Gauss operators have order d") {
  const ModelSpec spec = make_spec(Variant::Zd, 3, 3);
  for (const GaussOperator& g : gauss_operators(spec)) {
    Mat power = Mat::Identity(g.op.rows(), g.op.cols());
    for (int k = 0; k < 3; ++k) power = g.op * power;
    CHECK(max_abs(power - Mat::Identity(g.op.rows(), g.op.cols())) < 1e-13);
  }
}

TEST_CASE("noise term: structure and non-invariance") {
  const ModelSpec spec = make_spec(Variant::Zd, 2, 3);
  CHECK(max_abs(noise_term(spec, 0.0, 5.0).link_op) == 0.0);

  // single Zd link: cyclic shift plus its inverse times lambda x
  const NoiseTerm t = noise_term(spec, 0.5, 2.0);
  const LinkOperatorSet ops = build_link_operators(Variant::Zd, 3);
  CHECK(max_abs(t.link_op - 1.0 * (ops.l_plus + ops.l_minus)) < 1e-14);
  CHECK(max_abs(t.link_op - t.link_op.adjoint()) == 0.0);

  for (Variant v : {Variant::Zd, Variant::TruncatedCQED}) {
    const ModelSpec s = make_spec(v, 2, 3);
    const DenseModel model(s, 1.0);
    const Mat noise = model.dense_noise_matrix();
    const Mat mpo_noise = noise_term(s, 1.0, 1.0).mpo.to_dense_matrix();
    CHECK(max_abs(noise - mpo_noise) < 1e-12);
    bool commutes_with_all = true;
    for (int n = 1; n <= s.num_sites; ++n) {
      const Mat g = model.dense_gauss_matrix(n);
      if (max_abs(noise * g - g * noise) > 1e-6) commutes_with_all = false;
    }
    CHECK_FALSE(commutes_with_all);
  }
}

TEST_CASE("cQED noise equals the rescaled anti-Hermitian ladder combination") {
  const ModelSpec spec = make_spec(Variant::TruncatedCQED, 2, 5);
  const LinkOperatorSet ops = build_link_operators(Variant::TruncatedCQED, 5);
  const double l = 2.0;
  const Mat expected = std::sqrt(l * (l + 1.0)) * (-iu * ops.l_plus + iu * ops.l_minus);
  CHECK(max_abs(noise_link_matrix(spec) - expected) < 1e-14);
  // which is the bare real ladder matrix
  CHECK(max_abs(Mat(expected.imag().cast<cplx>())) < 1e-14);
}

TEST_CASE("strong-coupling state satisfies every defining property") {
  for (Variant v : {Variant::Zd, Variant::TruncatedCQED}) {
    const ModelSpec spec = make_spec(v, 4, 3);
    MpsState psi = strong_coupling_state(spec);
    CHECK(psi.max_bond_dim() == 1);
    CHECK(std::abs(psi.norm() - 1.0) < 1e-14);
    CHECK(expectation(psi, energy_observable(spec, 0.0)) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(expectation(psi, penalty_observable(spec)) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(expectation(psi, total_charge_observable(spec)) == doctest::Approx(0.0).epsilon(1e-13));

    const auto occ = expectation_profile(psi, observable(spec, ObservableKind::SiteOccupationProfile));
    for (int n = 1; n <= spec.num_sites; ++n)
      CHECK(occ[n - 1] == doctest::Approx(n % 2 == 1 ? 1.0 : 0.0).epsilon(1e-13));
    const auto flux = expectation_profile(psi, observable(spec, ObservableKind::LinkFluxProfile));
    for (double f : flux) CHECK(std::abs(f) < 1e-13);
  }
}

TEST_CASE("strong-coupling state for N = 2 is the expected basis vector") {
  const ModelSpec spec = make_spec(Variant::Zd, 2, 3);
  const Vec dense = mps_to_dense(strong_coupling_state(spec));
  const DenseModel model(spec, 0.0);
  // occupied site 1, zero flux, empty site 2
  for (Eigen::Index i = 0; i < dense.size(); ++i) {
    const double expected = (i == model.strong_coupling_index()) ? 1.0 : 0.0;
    CHECK(std::abs(dense(i) - cplx(expected, 0.0)) < 1e-14);
  }
}

TEST_CASE("raising one link flux breaks the Gauss law") {
  const ModelSpec spec = make_spec(Variant::Zd, 3, 3);
  MpsState psi = strong_coupling_state(spec);
  // apply L+ on link 1 by hand: shift the product-state link index
  const int pos = ModelSpec::link_pos(1);
  MpsTensor& t = psi.tensors[pos];
  std::rotate(t.m.begin(), t.m.begin() + 2, t.m.end());  // flux 0 -> +1 state
  CHECK(expectation(psi, penalty_observable(spec)) > 0.5);
}
