#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lgt/model.hpp"
#include "lgt/mpo.hpp"
#include "support.hpp"

using namespace lgt;
using test::embed_window;
using test::max_abs;

TEST_CASE("identity MPO") {
  const std::vector<int> dims{2, 3, 2};
  const Mat m = Mpo::identity(dims).to_dense_matrix();
  CHECK(max_abs(m - Mat::Identity(12, 12)) == 0.0);
}

TEST_CASE("builder assembles a two-term sum") {
  // A = sz(0) + sp(0) lz(1) sm(2) on dims (2, 3, 2)
  const std::vector<int> dims{2, 3, 2};
  const LinkOperatorSet ops = build_link_operators(Variant::Zd, 3);
  MpoBuilder b(dims, 3);
  b.add(0, 0, 0, site_identity());
  b.add(0, 2, 2, site_identity());
  b.add(0, 0, 2, site_sz());
  b.add(0, 0, 1, site_sp());
  b.add(1, 0, 0, Mat::Identity(3, 3));
  b.add(1, 2, 2, Mat::Identity(3, 3));
  b.add(1, 1, 1, ops.l_z);
  b.add(2, 1, 2, site_sm());
  b.add(2, 2, 2, site_identity());
  const Mat m = b.build().to_dense_matrix();

  Mat expected = embed_window(dims, 0, site_sz());
  Mat term = Eigen::kroneckerProduct(
                 site_sp(), Eigen::kroneckerProduct(ops.l_z, site_sm()).eval())
                 .eval();
  expected += term;
  CHECK(max_abs(m - expected) < 1e-14);
}

TEST_CASE("direct sums and scalar multiples") {
  const std::vector<int> dims{2, 3, 2, 3, 2};
  ModelSpec spec;
  spec.variant = Variant::Zd;
  spec.num_sites = 3;
  spec.link_dim = 3;
  const Mpo w = hamiltonian_mpo(spec, 1.5, false);
  const Mpo p = penalty_observable(spec).mpo;
  const Mat sum = (w + p).to_dense_matrix();
  CHECK(max_abs(sum - (w.to_dense_matrix() + p.to_dense_matrix())) < 1e-13);

  Mpo scaled = w;
  scaled *= cplx(-2.5, 0.0);
  CHECK(max_abs(scaled.to_dense_matrix() + 2.5 * w.to_dense_matrix()) < 1e-13);

  ModelSpec wrong = spec;
  wrong.num_sites = 2;
  CHECK_THROWS_AS(w + hamiltonian_mpo(wrong, 1.0, false), std::invalid_argument);
}

TEST_CASE("matrix elements between different states match dense algebra") {
  const std::vector<int> dims{2, 3, 2, 3, 2};
  ModelSpec spec;
  spec.variant = Variant::TruncatedCQED;
  spec.num_sites = 3;
  spec.link_dim = 3;
  const Mpo w = hamiltonian_mpo(spec, 2.0, false);
  const MpsState a = MpsState::random_state(dims, 4, 5);
  const MpsState b = MpsState::random_state(dims, 3, 6);
  const cplx got = mpo_matrix_element(a, w, b);
  const cplx expect =
      (to_dense_vector(a).adjoint() * w.to_dense_matrix() * to_dense_vector(b))(0);
  CHECK(std::abs(got - expect) < 1e-12);
}

TEST_CASE("expectation rejects large imaginary residue") {
  // A deliberately non-Hermitian operator: sp on the middle site.
  const std::vector<int> dims{2, 3, 2};
  MpoBuilder b(dims, 2);
  b.add(0, 0, 1, site_sp());
  b.add(0, 1, 1, site_identity());
  b.add(1, 1, 1, Mat::Identity(3, 3));
  b.add(2, 1, 1, site_identity());
  const Mpo op = b.build();
  const MpsState psi = MpsState::random_state(dims, 4, 9);
  CHECK_THROWS_AS(expectation(psi, op), std::runtime_error);
}
