#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "lgt/ed.hpp"
#include "lgt/model.hpp"
#include "lgt/mps.hpp"
#include "support.hpp"

using namespace lgt;
using test::embed_window;
using test::expm_hermitian;
using test::max_abs;
using test::random_unitary;

namespace {

const std::vector<int> kDims{2, 3, 2, 3, 2};  // N = 3, d = 3 chain

double state_distance(const MpsState& a, const MpsState& b) {
  const Vec va = to_dense_vector(a);
  const Vec vb = to_dense_vector(b);
  return 1.0 - std::abs(va.dot(vb)) / (va.norm() * vb.norm());
}

}  // namespace

TEST_CASE("canonicalization preserves the state and satisfies isometries") {
  MpsState psi = MpsState::random_state(kDims, 8, 42);
  const Vec before = to_dense_vector(psi);
  for (int center : {0, 2, 4}) {
    MpsState canon = canonicalize(psi, center);
    CHECK(canon.center == center);
    CHECK(canon.isometry_violation() < 1e-12);
    const Vec after = to_dense_vector(canon);
    CHECK(std::abs(std::abs(before.dot(after)) / before.squaredNorm() - 1.0) < 1e-12);

    // idempotent
    MpsState twice = canonicalize(canon, center);
    CHECK(state_distance(canon, twice) < 1e-12);
  }
}

TEST_CASE("canonicalizing a product state is an identity up to phases") {
  MpsState psi = MpsState::product_state(kDims, {1, 0, 0, 2, 1});
  MpsState canon = canonicalize(psi, 3);
  CHECK(canon.max_bond_dim() == 1);
  CHECK(state_distance(psi, canon) < 1e-14);
}

TEST_CASE("overlap agrees with the dense inner product") {
  const MpsState a = MpsState::random_state(kDims, 6, 1);
  const MpsState b = MpsState::random_state(kDims, 5, 2);
  const cplx mps_val = overlap(a, b);
  const cplx dense_val = to_dense_vector(a).dot(to_dense_vector(b));
  CHECK(std::abs(mps_val - dense_val) < 1e-12);
  // conjugate symmetry and norm consistency
  CHECK(std::abs(overlap(b, a) - std::conj(mps_val)) < 1e-13);
  CHECK(std::abs(overlap(a, a).real() - 1.0) < 1e-12);  // random_state normalizes
  CHECK(std::abs(overlap(a, a).imag()) < 1e-13);

  MpsState c = MpsState::random_state({2, 5, 2}, 4, 3);
  CHECK_THROWS_AS(overlap(a, c), std::invalid_argument);
}

TEST_CASE("orthogonal product states have zero overlap") {
  const MpsState a = MpsState::product_state(kDims, {1, 0, 0, 0, 1});
  const MpsState b = MpsState::product_state(kDims, {1, 0, 1, 0, 1});
  CHECK(std::abs(overlap(a, b)) == 0.0);
}

TEST_CASE("identity gate with unbounded bond leaves the state unchanged") {
  MpsState psi = MpsState::random_state(kDims, 6, 7);
  psi.canonicalize_at(0);
  MpsState copy = psi;
  TruncOptions opts;  // unbounded, tight cutoff
  const Mat id = Mat::Identity(12, 12);
  const TruncationReport rep = apply_three_site_gate(psi, id, 0, opts);
  CHECK(state_distance(psi, copy) < 1e-12);
  CHECK(rep.total() < 1e-12);
}

TEST_CASE("unitary gates preserve the norm at unbounded bond dimension") {
  MpsState psi = MpsState::random_state(kDims, 4, 11);
  psi.canonicalize_at(2);
  TruncOptions opts;
  const Mat u = random_unitary(12, 5);
  apply_three_site_gate(psi, u, 2, opts);
  CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
}

TEST_CASE("gate application errors") {
  MpsState psi = MpsState::random_state(kDims, 4, 13);
  psi.canonicalize_at(0);
  TruncOptions opts;
  const Mat u = random_unitary(12, 1);
  CHECK_THROWS_AS(apply_three_site_gate(psi, u, 3, opts), std::out_of_range);
  CHECK_THROWS_AS(apply_three_site_gate(psi, u, -1, opts), std::out_of_range);
  CHECK_THROWS_AS(apply_three_site_gate(psi, Mat::Identity(6, 6), 0, opts),
                  std::invalid_argument);
  psi.canonicalize_at(4);
  CHECK_THROWS_AS(apply_three_site_gate(psi, u, 0, opts), std::logic_error);
}

TEST_CASE("three-site gate evolution matches the dense matrix exponential") {
  // N = 3 chain evolved by exp(-i dt h) on the full window
  const ModelSpec spec = [] {
    ModelSpec s;
    s.variant = Variant::Zd;
    s.num_sites = 3;
    s.link_dim = 3;
    return s;
  }();
  for (bool gram : {false, true}) {
    MpsState psi = MpsState::random_state(kDims, 4, 17);
    psi.canonicalize_at(0);
    Vec dense = to_dense_vector(psi);
    const auto blocks = gate_blocks(spec, 2.0, 0.0);
    TruncOptions opts;
    opts.use_gram = gram;
    const double dt = 0.05;
    for (int rep = 0; rep < 3; ++rep) {
      for (const GateBlock& b : blocks) {
        const Mat u = expm_hermitian(b.h, -iu * dt);
        psi.move_center_to(b.window_start());
        apply_three_site_gate(psi, u, b.window_start(), opts);
        dense = embed_window(kDims, b.window_start(), u) * dense;
      }
    }
    const Vec evolved = to_dense_vector(psi);
    CHECK((evolved - dense).norm() < 1e-10);
  }
}

TEST_CASE("truncated gate application bounds the fidelity loss") {
  MpsState psi = MpsState::random_state(kDims, 6, 23);
  psi.canonicalize_at(1);
  MpsState exact = psi;
  TruncOptions opts;
  opts.max_bond = 3;
  const Mat u = random_unitary(18, 9);  // window (link, site, link)
  const TruncationReport rep = apply_three_site_gate(psi, u, 1, opts);
  const Vec truncated = to_dense_vector(psi).normalized();
  const Vec full = embed_window(kDims, 1, u) * to_dense_vector(exact);
  const double fidelity = std::abs(truncated.dot(full.normalized()));
  CHECK(1.0 - fidelity * fidelity <= rep.total() + 1e-12);
  CHECK(psi.max_bond_dim() <= 3);
  for (double w : rep.discarded_weights) CHECK(w >= 0.0);
}

TEST_CASE("compress to the current bond dimension is an identity") {
  MpsState psi = MpsState::random_state(kDims, 4, 29);
  MpsState copy = psi;
  TruncOptions opts;
  opts.max_bond = 16;
  compress(psi, opts);
  CHECK(state_distance(psi, copy) < 1e-12);
}

TEST_CASE("compressing a bond-2 state to a product state matches dense Schmidt") {
  // Build a two-term superposition with known Schmidt weights across each cut.
  const MpsState a = MpsState::product_state(kDims, {1, 0, 0, 0, 1});
  const MpsState b = MpsState::product_state(kDims, {0, 1, 1, 1, 0});
  const double ca = 0.9, cb = std::sqrt(1.0 - 0.81);
  // direct sum of the two product states
  MpsState sum;
  sum.phys_dims = kDims;
  sum.tensors.resize(5);
  for (int i = 0; i < 5; ++i) {
    const int dl = i == 0 ? 1 : 2, dr = i == 4 ? 1 : 2;
    sum.tensors[i].m.assign(kDims[i], Mat::Zero(dl, dr));
    for (int p = 0; p < kDims[i]; ++p) {
      if (i == 0) {
        sum.tensors[i].m[p](0, 0) = ca * a.tensors[i].m[p](0, 0);
        sum.tensors[i].m[p](0, 1) = cb * b.tensors[i].m[p](0, 0);
      } else if (i == 4) {
        sum.tensors[i].m[p](0, 0) = a.tensors[i].m[p](0, 0);
        sum.tensors[i].m[p](1, 0) = b.tensors[i].m[p](0, 0);
      } else {
        sum.tensors[i].m[p](0, 0) = a.tensors[i].m[p](0, 0);
        sum.tensors[i].m[p](1, 1) = b.tensors[i].m[p](0, 0);
      }
    }
  }
  TruncOptions opts;
  opts.max_bond = 1;
  const TruncationReport rep = compress(sum, opts);
  sum.normalize();
  // best product approximation keeps the dominant Schmidt vector |a>; the
  // first truncated cut removes the whole subdominant component, so later
  // cuts discard nothing.
  CHECK(std::abs(std::abs(overlap(sum, a)) - 1.0) < 1e-12);
  CHECK(rep.total() == doctest::Approx(cb * cb).epsilon(1e-9));
}

TEST_CASE("unbounded gate sequences reproduce dense evolution exactly") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    MpsState psi = MpsState::random_state(kDims, 2, seed);
    psi.canonicalize_at(0);
    Vec dense = to_dense_vector(psi);
    TruncOptions opts;
    std::mt19937_64 rng(seed * 77);
    for (int k = 0; k < 5; ++k) {
      const int w = static_cast<int>(rng() % 3);
      const Mat u = random_unitary(kDims[w] * kDims[w + 1] * kDims[w + 2], rng());
      psi.move_center_to(w);
      apply_three_site_gate(psi, u, w, opts, (k % 2) == 0);
      dense = embed_window(kDims, w, u) * dense;
    }
    CHECK((to_dense_vector(psi) - dense).norm() < 1e-11);
  }
}

TEST_CASE("snapshot round trip") {
  MpsState psi = MpsState::random_state(kDims, 5, 31);
  psi.canonicalize_at(2);
  psi.cumulative_truncation = 0.125;
  const std::string path = (std::filesystem::temp_directory_path() / "lgt_mps_test.bin").string();
  save_mps(psi, path, 5);
  const MpsState loaded = load_mps(path);
  REQUIRE(loaded.length() == psi.length());
  CHECK(loaded.phys_dims == psi.phys_dims);
  CHECK(loaded.center == psi.center);
  CHECK(loaded.cumulative_truncation == psi.cumulative_truncation);
  for (int i = 0; i < psi.length(); ++i)
    for (int p = 0; p < kDims[i]; ++p)
      CHECK(max_abs(loaded.tensors[i].m[p] - psi.tensors[i].m[p]) == 0.0);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_mps("/nonexistent/lgt.bin"), std::runtime_error);
}

TEST_CASE("expectation guards") {
  const ModelSpec spec = [] {
    ModelSpec s;
    s.variant = Variant::Zd;
    s.num_sites = 3;
    s.link_dim = 3;
    return s;
  }();
  MpsState psi = strong_coupling_state(spec);
  for (Mat& m : psi.tensors[0].m) m *= 2.0;  // denormalize
  CHECK_THROWS_AS(expectation(psi, energy_observable(spec, 1.0)), std::invalid_argument);
}

TEST_CASE("expectation matches dense quadratic form on random states") {
  const ModelSpec spec = [] {
    ModelSpec s;
    s.variant = Variant::TruncatedCQED;
    s.num_sites = 3;
    s.link_dim = 3;
    return s;
  }();
  MpsState psi = MpsState::random_state(kDims, 5, 37);
  const Vec dense = to_dense_vector(psi);
  const DenseModel model(spec, 3.0);
  const double via_mpo = expectation(psi, energy_observable(spec, 3.0));
  const double via_dense = (dense.adjoint() * model.dense_matrix(false) * dense)(0).real();
  CHECK(via_mpo == doctest::Approx(via_dense).epsilon(1e-12));
}
