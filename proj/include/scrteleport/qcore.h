// Copyright 2026 The scrteleport Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SCRTELEPORT_QCORE_H
#define SCRTELEPORT_QCORE_H

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace scrteleport {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Tolerance used when validating normalization, hermiticity and unitarity.
inline constexpr double kValidityTolerance = 1e-10;

/// Dense pure state over n qubits.
///
/// Amplitude index i is read as the bitstring |q0 q1 ... q_{n-1}>, with qubit 0
/// the most significant bit. Every instance is normalized to within
/// kValidityTolerance and holds only finite amplitudes.
class StateVector {
   public:
    /// Validates length (2^n), finiteness and norm. Throws std::invalid_argument.
    static StateVector from_amplitudes(std::size_t n_qubits, std::vector<Complex> amplitudes);
    /// Like from_amplitudes, but rescales to unit norm first. Rejects the zero vector.
    static StateVector normalized(std::size_t n_qubits, std::vector<Complex> amplitudes);
    static StateVector basis(std::size_t n_qubits, std::size_t index);

    std::size_t n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const { return amplitudes_; }
    const Complex &operator[](std::size_t i) const { return amplitudes_[i]; }

    double norm() const;
    /// <this|other>
    Complex inner(const StateVector &other) const;
    /// this ⊗ other; this supplies the more significant qubits.
    StateVector tensor(const StateVector &other) const;

    friend bool operator==(const StateVector &, const StateVector &) = default;

   private:
    StateVector(std::size_t n_qubits, std::vector<Complex> amplitudes);

    std::size_t n_qubits_;
    std::vector<Complex> amplitudes_;
};

/// Hermitian, positive semidefinite, unit-trace matrix of power-of-two dimension.
class DensityMatrix {
   public:
    explicit DensityMatrix(Matrix entries);
    static DensityMatrix from_pure(const StateVector &state);
    static DensityMatrix maximally_mixed(std::size_t dim);

    std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
    const Matrix &matrix() const { return entries_; }
    double purity() const;

   private:
    Matrix entries_;
};

/// Unitary acting on k qubits; row/column index uses the same MSB-first
/// convention as StateVector, restricted to the gate's own wires.
class UnitaryGate {
   public:
    explicit UnitaryGate(Matrix matrix);

    static UnitaryGate identity(std::size_t k_qubits);
    static UnitaryGate pauli_x();
    static UnitaryGate pauli_y();
    static UnitaryGate pauli_z();
    static UnitaryGate hadamard();
    /// Control is the first wire.
    static UnitaryGate cnot();
    static UnitaryGate swap();

    std::size_t k_qubits() const { return k_qubits_; }
    std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
    const Matrix &matrix() const { return matrix_; }

    UnitaryGate adjoint() const;
    /// Entrywise complex conjugate (U*), not the adjoint.
    UnitaryGate conjugate() const;
    /// Gate product; the result applies `rhs` first, then `*this`.
    UnitaryGate operator*(const UnitaryGate &rhs) const;

   private:
    std::size_t k_qubits_;
    Matrix matrix_;
};

struct BlochVector {
    double s1 = 0;
    double s2 = 0;
    double s3 = 0;

    double length() const;
};

/// Bell state |β_index>: β0=(|00>+|11>)/√2, β1=(|01>+|10>)/√2,
/// β2=(|00>-|11>)/√2, β3=(|01>-|10>)/√2.
StateVector bell_state(int index);

/// Applies `gate` to `wires`; wires[0] is the gate's most significant qubit.
StateVector apply_gate(const StateVector &state, const UnitaryGate &gate, std::span<const std::size_t> wires);
StateVector apply_gate(const StateVector &state, const UnitaryGate &gate, std::initializer_list<std::size_t> wires);

/// Reduced density matrix on `keep`, in the listed order.
DensityMatrix partial_trace(const StateVector &state, std::span<const std::size_t> keep);
DensityMatrix partial_trace(const StateVector &state, std::initializer_list<std::size_t> keep);

/// Uhlmann fidelity F = Tr sqrt(sqrt(rho) sigma sqrt(rho)) (not squared).
double fidelity(const DensityMatrix &rho, const DensityMatrix &sigma);

BlochVector bloch_vector(const DensityMatrix &rho);
DensityMatrix from_bloch(const BlochVector &s);

/// Single-qubit conjugation G rho G†.
DensityMatrix conjugate_by(const UnitaryGate &gate, const DensityMatrix &rho);

struct PairProjection {
    double probability = 0;
    /// Empty when the branch has (numerically) zero probability.
    std::optional<StateVector> post_state;

    bool is_null() const { return !post_state.has_value(); }
};

/// Probabilities below this are reported as a null branch by project_pair.
inline constexpr double kNullBranchProbability = 1e-14;

/// Projects qubits (pair[0], pair[1]) onto |β_outcome>. The post-measurement
/// state keeps all n qubits, with the measured pair left in |β_outcome>.
PairProjection project_pair(const StateVector &state, std::array<std::size_t, 2> pair, int outcome);

}  // namespace scrteleport

#endif
