#include "riga/models.hpp"

#include <cmath>

namespace riga {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
const Complex kImag(0.0, 1.0);

Matrix hermitian_to_generator(const Matrix& h) { return -kImag * h; }

Matrix pauli_x() {
  Matrix p(2, 2);
  p << 0, 1, 1, 0;
  return p;
}

Matrix pauli_y() {
  Matrix p(2, 2);
  p << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return p;
}

Matrix pauli_z() {
  Matrix p(2, 2);
  p << 1, 0, 0, -1;
  return p;
}

Matrix hadamard_gate() {
  Matrix h(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  return h;
}

// Single-site operator embedded at position `site` of an N-fold chain.
Matrix chain_operator(const Matrix& op, int site, int qubits) {
  Matrix out = Matrix::Identity(1, 1);
  for (int q = 0; q < qubits; ++q) {
    out = kron(out, q == site ? op : Matrix::Identity(2, 2));
  }
  return out;
}

Vector basis_state(Index dim, Index index) {
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return v;
}

}  // namespace

Matrix ladder_operator(int levels) {
  if (levels < 2) throw ConfigError("ladder_operator: need at least two levels");
  Matrix b = Matrix::Zero(levels, levels);
  for (int k = 1; k < levels; ++k) {
    b(k - 1, k) = std::sqrt(static_cast<double>(k));
  }
  return b;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

TransmonPairParams TransmonPairParams::defaults(int levels) {
  TransmonPairParams p;
  p.omega1 = kTwoPi * 3.5;
  p.omega2 = kTwoPi * 3.9;
  p.alpha1 = kTwoPi * -0.225;
  p.alpha2 = kTwoPi * -0.225;
  p.coupling = kTwoPi * 0.1;
  p.drive_strength = kTwoPi * 1.0;
  p.levels = levels;
  return p;
}

TransmonPairSystem build_transmon_pair(const TransmonPairParams& p) {
  if (p.levels < 2) throw ConfigError("transmon pair: need n_c >= 2");
  const int nc = p.levels;
  const Index n = static_cast<Index>(nc) * nc;
  const Matrix b = ladder_operator(nc);
  const Matrix id = Matrix::Identity(nc, nc);
  const Matrix b1 = kron(b, id);
  const Matrix b2 = kron(id, b);
  const Matrix n1 = b1.adjoint() * b1;
  const Matrix n2 = b2.adjoint() * b2;

  Matrix h0 = p.coupling * (b1 + b1.adjoint()) * (b2 + b2.adjoint());
  h0 += p.omega1 * n1 + 0.5 * p.alpha1 * n1 * (n1 - Matrix::Identity(n, n));
  h0 += p.omega2 * n2 + 0.5 * p.alpha2 * n2 * (n2 - Matrix::Identity(n, n));

  TransmonPairSystem out;
  out.system.s0 = hermitian_to_generator(h0);
  out.system.s.push_back(hermitian_to_generator(p.drive_strength * (b1 + b1.adjoint())));
  out.system.s.push_back(hermitian_to_generator(p.drive_strength * (b2 + b2.adjoint())));
  out.system.s.push_back(hermitian_to_generator(p.drive_strength * n2));
  out.system.s.push_back(hermitian_to_generator(Matrix::Identity(n, n)));

  auto ket = [&](int i, int j) { return basis_state(n, static_cast<Index>(i) * nc + j); };
  Matrix e(n, 4), f(n, 4);
  e.col(0) = ket(0, 0);
  e.col(1) = ket(0, 1);
  e.col(2) = ket(1, 0);
  e.col(3) = ket(1, 1);
  f.col(0) = ket(0, 0);
  f.col(1) = ket(0, 1);
  f.col(2) = ket(1, 1);
  f.col(3) = ket(1, 0);
  out.cnot = GateSpec{e, f};

  Matrix e_prep(n, 1), f_prep(n, 1);
  e_prep.col(0) = ket(0, 0);
  f_prep.col(0) = (ket(1, 0) + ket(0, 1)) / std::sqrt(2.0);
  out.state_prep = GateSpec{e_prep, f_prep};

  Matrix forb(n, 2 * nc - 1);
  Index col = 0;
  for (int i = 0; i < nc; ++i) {
    for (int j = 0; j < nc; ++j) {
      if (i == nc - 1 || j == nc - 1) forb.col(col++) = ket(i, j);
    }
  }
  out.forbidden = forb;
  return out;
}

CavityTransmonParams CavityTransmonParams::defaults(int cavity_levels, int transmon_levels) {
  CavityTransmonParams p;
  p.kerr = kTwoPi * -3.7e-3;
  p.anharmonicity = kTwoPi * -236.0;
  p.dispersive = kTwoPi * 2.194;
  p.dispersive_second = kTwoPi * 19.0e-3;
  p.coherent_amplitude = 1.0;
  p.cavity_levels = cavity_levels;
  p.transmon_levels = transmon_levels;
  return p;
}

namespace {

// Truncated, renormalized logical cat component over Fock states
// {offset, offset+4, offset+8, ...}: amplitudes alpha^k / sqrt(k!).
Vector logical_cavity_state(int levels, int offset, double alpha_coh) {
  Vector v = Vector::Zero(levels);
  for (int k = offset; k < levels; k += 4) {
    double amp = 1.0;
    for (int j = 1; j <= k; ++j) amp *= alpha_coh / std::sqrt(static_cast<double>(j));
    v(k) = amp;
  }
  const double norm = v.norm();
  if (norm <= 0.0) throw ConfigError("cavity transmon: logical state truncated to zero");
  return v / norm;
}

}  // namespace

CavityTransmonSystem build_cavity_transmon(const CavityTransmonParams& p) {
  if (p.cavity_levels < 3 || p.transmon_levels < 2) {
    throw ConfigError("cavity transmon: need n_c >= 3 and n_T >= 2");
  }
  const int nc = p.cavity_levels;
  const int nt = p.transmon_levels;
  const Index n = static_cast<Index>(nc) * nt;
  const Matrix a = kron(ladder_operator(nc), Matrix::Identity(nt, nt));
  const Matrix b = kron(Matrix::Identity(nc, nc), ladder_operator(nt));
  const Matrix na = a.adjoint() * a;
  const Matrix nb = b.adjoint() * b;
  const Matrix a2 = a.adjoint() * a.adjoint() * a * a;
  const Matrix b2 = b.adjoint() * b.adjoint() * b * b;

  // Rotating frame: the bare cavity/transmon frequency terms are dropped.
  Matrix h0 = 0.5 * p.kerr * a2 + 0.5 * p.anharmonicity * b2;
  h0 += p.dispersive * na * nb + 0.5 * p.dispersive_second * a2 * b2;

  CavityTransmonSystem out;
  out.system.s0 = hermitian_to_generator(h0);
  out.system.s.push_back(hermitian_to_generator(a + a.adjoint()));
  out.system.s.push_back(hermitian_to_generator(kImag * (a.adjoint() - a)));
  out.system.s.push_back(hermitian_to_generator(b + b.adjoint()));
  out.system.s.push_back(hermitian_to_generator(kImag * (b.adjoint() - b)));
  out.system.s.push_back(hermitian_to_generator(Matrix::Identity(n, n)));

  const Vector plus_z = logical_cavity_state(nc, 0, p.coherent_amplitude);
  const Vector minus_z = logical_cavity_state(nc, 2, p.coherent_amplitude);
  const Vector ground = basis_state(nt, 0);
  const Vector excited = basis_state(nt, 1);
  auto tensor = [&](const Vector& cav, const Vector& trans) {
    Vector v(n);
    for (int k = 0; k < nc; ++k) {
      for (int t = 0; t < nt; ++t) v(static_cast<Index>(k) * nt + t) = cav(k) * trans(t);
    }
    return v;
  };

  Matrix e(n, 2), f(n, 2);
  e.col(0) = tensor(basis_state(nc, 0), ground);
  e.col(1) = tensor(basis_state(nc, 0), excited);
  const Vector f1 = tensor(plus_z, ground);
  const Vector f2 = tensor(minus_z, ground);
  const Matrix h = hadamard_gate();
  f.col(0) = h(0, 0) * f1 + h(1, 0) * f2;
  f.col(1) = h(0, 1) * f1 + h(1, 1) * f2;
  out.hadamard = GateSpec{e, f};

  Matrix forb(n, nt + nc - 1);
  Index col = 0;
  for (int k = 0; k < nc; ++k) {
    for (int t = 0; t < nt; ++t) {
      if (k == nc - 1 || t == nt - 1) forb.col(col++) = basis_state(n, static_cast<Index>(k) * nt + t);
    }
  }
  out.forbidden = forb;
  return out;
}

QubitChainParams QubitChainParams::defaults(int qubits) {
  QubitChainParams p;
  p.qubits = qubits;
  p.j_zz = kTwoPi * 0.1;
  p.j_drive = kTwoPi * 0.1;
  p.j_global = kTwoPi * 0.1;
  return p;
}

QubitChainSystem build_qubit_chain(const QubitChainParams& p) {
  if (p.qubits < 2) throw ConfigError("qubit chain: need N >= 2");
  if (p.qubits > 10) {
    throw ConfigError("qubit chain: memory budget exceeded above N = 10 (2N + 1 dense 2^N x 2^N generators)");
  }
  const int nq = p.qubits;
  const Index n = Index(1) << nq;

  Matrix h0 = Matrix::Zero(n, n);
  for (int s = 0; s + 1 < nq; ++s) {
    h0 += p.j_zz * chain_operator(pauli_z(), s, nq) * chain_operator(pauli_z(), s + 1, nq);
  }

  QubitChainSystem out;
  out.system.s0 = hermitian_to_generator(h0);
  for (int q = 0; q < nq; ++q) {
    out.system.s.push_back(hermitian_to_generator(p.j_drive * chain_operator(pauli_x(), q, nq)));
  }
  for (int q = 0; q < nq; ++q) {
    out.system.s.push_back(hermitian_to_generator(p.j_drive * chain_operator(pauli_y(), q, nq)));
  }
  out.system.s.push_back(hermitian_to_generator(p.j_global * Matrix::Identity(n, n)));

  Matrix target = Matrix::Identity(1, 1);
  for (int q = 0; q < nq; ++q) target = kron(target, hadamard_gate());
  out.target = target;
  out.gate = GateSpec{Matrix::Identity(n, n), target};
  return out;
}

double forbidden_population(const Matrix& x, const Matrix& e, const Matrix& forb) {
  require(forb.rows() == x.rows(), "forbidden_population: projector dimension mismatch");
  const Matrix leak = forb.adjoint() * (x * e);
  double worst = 0.0;
  for (Index j = 0; j < leak.cols(); ++j) worst = std::max(worst, leak.col(j).norm());
  return worst;
}

double good_population(const Matrix& x, const GateSpec& spec) {
  const Matrix g = spec.f.adjoint() * (x * spec.e);
  double smallest = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < g.rows(); ++i) smallest = std::min(smallest, std::abs(g(i, i)));
  return smallest;
}

}  // namespace riga
