#ifndef RIGA_MODELS_HPP
#define RIGA_MODELS_HPP

#include "riga/problem.hpp"

namespace riga {

// All frequencies are angular (rad per time unit); the *_defaults factories
// take the tabulated f/2pi values and scale by 2pi. Transmon-pair quantities
// are in rad/ns (drives in GHz), cavity-transmon in rad/us (drives in MHz).

struct TransmonPairParams {
  double omega1;  // first transmon frequency
  double omega2;  // second transmon frequency
  double alpha1;  // anharmonicities (negative)
  double alpha2;
  double coupling;        // J
  double drive_strength;  // beta
  int levels = 7;         // n_c per transmon

  static TransmonPairParams defaults(int levels = 7);
};

struct CavityTransmonParams {
  double kerr;               // kappa
  double anharmonicity;      // alpha (transmon)
  double dispersive;         // chi
  double dispersive_second;  // chi'
  double coherent_amplitude = 1.0;  // alpha_coh of the logical cat states
  int cavity_levels = 20;           // n_c
  int transmon_levels = 4;          // n_T

  static CavityTransmonParams defaults(int cavity_levels = 20, int transmon_levels = 4);
};

struct QubitChainParams {
  int qubits;       // N
  double j_zz;      // J_0
  double j_drive;   // J
  double j_global;  // J_g

  static QubitChainParams defaults(int qubits);
};

struct TransmonPairSystem {
  SystemModel system;
  GateSpec cnot;        // encoded C-NOT on the two lowest levels
  GateSpec state_prep;  // |00> to (|10>+|01>)/sqrt(2)
  Matrix forbidden;     // isometry onto states touching the top level
};

// Two coupled transmons with exchange coupling, three drives and a global
// phase channel (m = 4), truncated to `levels` states each.
TransmonPairSystem build_transmon_pair(const TransmonPairParams& p);

struct CavityTransmonSystem {
  SystemModel system;  // rotating frame: Kerr, anharmonic and dispersive terms only
  GateSpec hadamard;   // encoded Hadamard onto the cat-code logical states
  Matrix forbidden;    // isometry onto top cavity/transmon levels
};

CavityTransmonSystem build_cavity_transmon(const CavityTransmonParams& p);

struct QubitChainSystem {
  SystemModel system;
  GateSpec gate;  // E = F = I, target below
  Matrix target;  // Hadamard on every qubit
};

// Ising-coupled chain with x/y drives per qubit plus a global phase channel
// (m = 2N + 1); the target is the N-fold tensor power of the Hadamard gate.
QubitChainSystem build_qubit_chain(const QubitChainParams& p);

// Truncated ladder operator: b|k> = sqrt(k)|k-1>, cut at `levels` states.
Matrix ladder_operator(int levels);

// Kronecker product helper.
Matrix kron(const Matrix& a, const Matrix& b);

// Largest column norm of forb forb^dag X E: weight the gate columns leak into
// the forbidden subspace.
double forbidden_population(const Matrix& x, const Matrix& e, const Matrix& forb);

// Smallest |diagonal entry| of F^dag X E.
double good_population(const Matrix& x, const GateSpec& spec);

}  // namespace riga

#endif
