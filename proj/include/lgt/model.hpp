#pragma once

#include <vector>

#include "lgt/mpo.hpp"
#include "lgt/mps.hpp"
#include "lgt/types.hpp"

namespace lgt {

/// Ladder and flux operators of a single d-dimensional link, in the flux
/// basis ordered -J..J with J = (d-1)/2.
struct LinkOperatorSet {
  Variant variant;
  int dim = 0;
  Mat l_plus;   // raising operator
  Mat l_minus;  // = l_plus^H
  Mat l_z;      // real diagonal, spectrum -J..J
};

/// Builds the link operators for the chosen variant: the truncated-cQED
/// set uses the two-boson angular momentum representation normalized by
/// sqrt(l(l+1)); the Zd set is the cyclic shift wrapping the top flux state
/// around to the bottom.
LinkOperatorSet build_link_operators(Variant variant, int d);

/// One three-body Hermitian block of the Hamiltonian acting on
/// (site n, link n, site n+1); `index` is the 1-based n, the chain window
/// starts at position 2(n-1). Blocks with odd index form one mutually
/// commuting layer, even index the other.
struct GateBlock {
  int index = 0;
  Mat h;  // (2 d 2) x (2 d 2), row-major over (site, link, site)

  int window_start() const { return 2 * (index - 1); }
};

/// Hamiltonian at fixed coupling x: an MPO (including penalty terms when
/// the spec carries nonzero penalty coefficients) and the three-body gate
/// splitting of the bare Hamiltonian used for time evolution.
struct HamiltonianRep {
  ModelSpec spec;
  double x = 0.0;
  Mpo mpo;
  std::vector<GateBlock> blocks;
};

HamiltonianRep build_hamiltonian(const ModelSpec& spec, double x);

/// Gate blocks only, with an optional gauge-breaking noise term of strength
/// lambda*x folded into each link.
std::vector<GateBlock> gate_blocks(const ModelSpec& spec, double x, double lambda = 0.0);

/// Local Gauss operator at site n: for the truncated cQED model the
/// generator G_n itself, for the Zd model the unitary U_n = exp(i 2pi/d G_n).
/// `window_start`/`window_dims` describe the consecutive chain positions the
/// dense matrix acts on (link n-1, site n, link n, clipped at the ends).
struct GaussOperator {
  int site = 0;        // 1-based n
  int window_start = 0;
  std::vector<int> window_dims;
  Mat op;
};

std::vector<GaussOperator> gauss_operators(const ModelSpec& spec);

/// Scalar observables represented as MPOs plus per-position profiles.
enum class ObservableKind {
  Energy,
  GaussPenalty,
  TotalCharge,
  LinkFluxProfile,
  SiteOccupationProfile,
};

struct ObservableRep {
  ObservableKind kind;
  Mpo mpo;                    // scalar kinds
  std::vector<Mat> site_ops;  // profile kinds: operator per site or link
};

/// The positive Gauss-violation observable: sum_n G_n^H G_n (cQED) or
/// sum_n (U_n - 1)^H (U_n - 1) (Zd). Zero exactly on physical states.
ObservableRep penalty_observable(const ModelSpec& spec);
ObservableRep total_charge_observable(const ModelSpec& spec);
ObservableRep energy_observable(const ModelSpec& spec, double x);
ObservableRep observable(const ModelSpec& spec, ObservableKind kind, double x = 0.0);

double expectation(const MpsState& state, const ObservableRep& obs);
std::vector<double> expectation_profile(const MpsState& state, const ObservableRep& obs);

/// Gauge-breaking noise term sum_n lambda*x*(Lbar+_n + Lbar-_n); for the
/// truncated cQED model the bare two-boson exchange is used, which equals
/// sqrt(l(l+1)) (-i L+ + i L-).
struct NoiseTerm {
  double lambda = 0.0;
  double x = 0.0;
  Mat link_op;  // Hermitian single-link matrix, strength included
  Mpo mpo;
};

NoiseTerm noise_term(const ModelSpec& spec, double lambda, double x);

/// Single-link noise matrix of unit strength (lambda*x = 1).
Mat noise_link_matrix(const ModelSpec& spec);

/// The physical strong-coupling product state: odd sites occupied, even
/// sites empty, links at zero flux. Ground state of the x = 0 Hamiltonian
/// in the physical zero-charge sector.
MpsState strong_coupling_state(const ModelSpec& spec);

/// Bare Hamiltonian MPO (no penalty terms) and penalty-augmented MPO.
Mpo hamiltonian_mpo(const ModelSpec& spec, double x, bool include_penalties);

// Elementary site matrices shared across modules.
Mat site_identity();
Mat site_sz();
Mat site_sp();
Mat site_sm();
Mat site_occupation();
/// Staggered charge of site n: occupation - [n odd].
Mat site_charge(int n);

}  // namespace lgt
