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

#include "scrteleport/qcore.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace scrteleport {

namespace {

constexpr double kNegativeEigenvalueClamp = 1e-10;

bool all_finite(const Matrix &m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        const Complex &z = m.data()[i];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            return false;
        }
    }
    return true;
}

bool is_power_of_two(std::size_t v) {
    return v != 0 && std::has_single_bit(v);
}

std::size_t log2_exact(std::size_t v) {
    return static_cast<std::size_t>(std::countr_zero(v));
}

// Bit mask of qubit q inside an n-qubit index (qubit 0 is the MSB).
std::size_t qubit_mask(std::size_t n_qubits, std::size_t q) {
    return std::size_t{1} << (n_qubits - 1 - q);
}

void check_wires(std::size_t n_qubits, std::span<const std::size_t> wires, const char *what) {
    for (std::size_t i = 0; i < wires.size(); ++i) {
        if (wires[i] >= n_qubits) {
            throw std::invalid_argument(std::string(what) + ": wire " + std::to_string(wires[i]) +
                                        " out of range for " + std::to_string(n_qubits) + " qubits");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (wires[i] == wires[j]) {
                throw std::invalid_argument(std::string(what) + ": duplicate wire " + std::to_string(wires[i]));
            }
        }
    }
}

// Scatters the bits of `sub` (k bits, MSB = wires[0]) into an n-qubit index.
std::size_t scatter_bits(std::size_t sub, std::span<const std::size_t> masks) {
    std::size_t out = 0;
    const std::size_t k = masks.size();
    for (std::size_t b = 0; b < k; ++b) {
        if (sub & (std::size_t{1} << (k - 1 - b))) {
            out |= masks[b];
        }
    }
    return out;
}

// Eigenvalues of a Hermitian matrix with tiny negative values clamped to zero.
Eigen::VectorXd clamped_eigenvalues(const Matrix &m, const char *what) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    Eigen::VectorXd values = solver.eigenvalues();
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (values[i] < -kNegativeEigenvalueClamp) {
            throw std::invalid_argument(std::string(what) + ": negative eigenvalue " + std::to_string(values[i]));
        }
        values[i] = std::max(values[i], 0.0);
    }
    return values;
}

}  // namespace

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(std::size_t n_qubits, std::vector<Complex> amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
}

StateVector StateVector::from_amplitudes(std::size_t n_qubits, std::vector<Complex> amplitudes) {
    if (n_qubits == 0 || n_qubits > 25) {
        throw std::invalid_argument("StateVector: qubit count must be in [1, 25]");
    }
    if (amplitudes.size() != (std::size_t{1} << n_qubits)) {
        throw std::invalid_argument("StateVector: expected 2^n amplitudes");
    }
    double norm2 = 0;
    for (const auto &a : amplitudes) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw std::invalid_argument("StateVector: non-finite amplitude");
        }
        norm2 += std::norm(a);
    }
    if (std::abs(norm2 - 1.0) > kValidityTolerance) {
        throw std::invalid_argument("StateVector: amplitudes not normalized (|psi|^2 = " + std::to_string(norm2) + ")");
    }
    return StateVector(n_qubits, std::move(amplitudes));
}

StateVector StateVector::normalized(std::size_t n_qubits, std::vector<Complex> amplitudes) {
    double norm2 = 0;
    for (const auto &a : amplitudes) {
        norm2 += std::norm(a);
    }
    if (!(norm2 > 0) || !std::isfinite(norm2)) {
        throw std::invalid_argument("StateVector: cannot normalize a zero or non-finite vector");
    }
    const double scale = 1.0 / std::sqrt(norm2);
    for (auto &a : amplitudes) {
        a *= scale;
    }
    return from_amplitudes(n_qubits, std::move(amplitudes));
}

StateVector StateVector::basis(std::size_t n_qubits, std::size_t index) {
    if (n_qubits == 0 || n_qubits > 25 || index >= (std::size_t{1} << n_qubits)) {
        throw std::invalid_argument("StateVector::basis: index out of range");
    }
    std::vector<Complex> amps(std::size_t{1} << n_qubits);
    amps[index] = 1.0;
    return StateVector(n_qubits, std::move(amps));
}

double StateVector::norm() const {
    double norm2 = 0;
    for (const auto &a : amplitudes_) {
        norm2 += std::norm(a);
    }
    return std::sqrt(norm2);
}

Complex StateVector::inner(const StateVector &other) const {
    if (other.n_qubits_ != n_qubits_) {
        throw std::invalid_argument("StateVector::inner: qubit count mismatch");
    }
    Complex acc = 0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        acc += std::conj(amplitudes_[i]) * other.amplitudes_[i];
    }
    return acc;
}

StateVector StateVector::tensor(const StateVector &other) const {
    std::vector<Complex> out;
    out.reserve(dim() * other.dim());
    for (const auto &a : amplitudes_) {
        for (const auto &b : other.amplitudes_) {
            out.push_back(a * b);
        }
    }
    return StateVector::from_amplitudes(n_qubits_ + other.n_qubits_, std::move(out));
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || !is_power_of_two(static_cast<std::size_t>(entries_.rows()))) {
        throw std::invalid_argument("DensityMatrix: must be square with power-of-two dimension");
    }
    if (!all_finite(entries_)) {
        throw std::invalid_argument("DensityMatrix: non-finite entry");
    }
    if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > kValidityTolerance) {
        throw std::invalid_argument("DensityMatrix: not Hermitian");
    }
    const Complex tr = entries_.trace();
    if (std::abs(tr - Complex(1.0)) > kValidityTolerance) {
        throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr.real()) + " != 1");
    }
    // Symmetrize so downstream eigensolvers see an exactly Hermitian matrix.
    entries_ = 0.5 * (entries_ + entries_.adjoint()).eval();
    clamped_eigenvalues(entries_, "DensityMatrix");
}

DensityMatrix DensityMatrix::from_pure(const StateVector &state) {
    const auto amps = state.amplitudes();
    const Eigen::Map<const Eigen::VectorXcd> v(amps.data(), static_cast<Eigen::Index>(amps.size()));
    return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(dim));
}

double DensityMatrix::purity() const {
    return (entries_ * entries_).trace().real();
}

// ---------------------------------------------------------------------------
// UnitaryGate

UnitaryGate::UnitaryGate(Matrix matrix) : matrix_(std::move(matrix)) {
    const auto rows = static_cast<std::size_t>(matrix_.rows());
    if (matrix_.rows() != matrix_.cols() || rows < 2 || !is_power_of_two(rows)) {
        throw std::invalid_argument("UnitaryGate: must be square with dimension 2^k, k >= 1");
    }
    if (!all_finite(matrix_)) {
        throw std::invalid_argument("UnitaryGate: non-finite entry");
    }
    const Matrix defect = matrix_ * matrix_.adjoint() - Matrix::Identity(matrix_.rows(), matrix_.cols());
    if (defect.cwiseAbs().maxCoeff() > kValidityTolerance) {
        throw std::invalid_argument("UnitaryGate: matrix is not unitary");
    }
    k_qubits_ = log2_exact(rows);
}

UnitaryGate UnitaryGate::identity(std::size_t k_qubits) {
    const auto d = static_cast<Eigen::Index>(std::size_t{1} << k_qubits);
    return UnitaryGate(Matrix::Identity(d, d));
}

UnitaryGate UnitaryGate::pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return UnitaryGate(m);
}

UnitaryGate UnitaryGate::pauli_y() {
    const Complex i(0, 1);
    Matrix m(2, 2);
    m << 0, -i, i, 0;
    return UnitaryGate(m);
}

UnitaryGate UnitaryGate::pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return UnitaryGate(m);
}

UnitaryGate UnitaryGate::hadamard() {
    const double h = 1.0 / std::sqrt(2.0);
    Matrix m(2, 2);
    m << h, h, h, -h;
    return UnitaryGate(m);
}

UnitaryGate UnitaryGate::cnot() {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
    return UnitaryGate(m);
}

UnitaryGate UnitaryGate::swap() {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
    return UnitaryGate(m);
}

UnitaryGate UnitaryGate::adjoint() const {
    return UnitaryGate(matrix_.adjoint());
}

UnitaryGate UnitaryGate::conjugate() const {
    return UnitaryGate(matrix_.conjugate());
}

UnitaryGate UnitaryGate::operator*(const UnitaryGate &rhs) const {
    if (rhs.dim() != dim()) {
        throw std::invalid_argument("UnitaryGate: product of gates with different sizes");
    }
    return UnitaryGate(matrix_ * rhs.matrix_);
}

double BlochVector::length() const {
    return std::sqrt(s1 * s1 + s2 * s2 + s3 * s3);
}

// ---------------------------------------------------------------------------
// Operations

StateVector bell_state(int index) {
    const double h = 1.0 / std::sqrt(2.0);
    switch (index) {
        case 0:
            return StateVector::from_amplitudes(2, {h, 0, 0, h});
        case 1:
            return StateVector::from_amplitudes(2, {0, h, h, 0});
        case 2:
            return StateVector::from_amplitudes(2, {h, 0, 0, -h});
        case 3:
            return StateVector::from_amplitudes(2, {0, h, -h, 0});
        default:
            throw std::invalid_argument("bell_state: index must be in 0..3, got " + std::to_string(index));
    }
}

StateVector apply_gate(const StateVector &state, const UnitaryGate &gate, std::span<const std::size_t> wires) {
    const std::size_t n = state.n_qubits();
    const std::size_t k = gate.k_qubits();
    if (wires.size() != k) {
        throw std::invalid_argument("apply_gate: gate acts on " + std::to_string(k) + " qubits but " +
                                    std::to_string(wires.size()) + " wires were given");
    }
    check_wires(n, wires, "apply_gate");

    std::vector<std::size_t> masks(k);
    std::size_t wire_bits = 0;
    for (std::size_t b = 0; b < k; ++b) {
        masks[b] = qubit_mask(n, wires[b]);
        wire_bits |= masks[b];
    }
    const std::size_t sub_dim = std::size_t{1} << k;
    std::vector<std::size_t> offsets(sub_dim);
    for (std::size_t s = 0; s < sub_dim; ++s) {
        offsets[s] = scatter_bits(s, masks);
    }

    const Matrix &u = gate.matrix();
    const auto in = state.amplitudes();
    std::vector<Complex> out(in.size());
    std::vector<Complex> local(sub_dim);
    for (std::size_t base = 0; base < in.size(); ++base) {
        if (base & wire_bits) {
            continue;
        }
        for (std::size_t s = 0; s < sub_dim; ++s) {
            local[s] = in[base | offsets[s]];
        }
        for (std::size_t r = 0; r < sub_dim; ++r) {
            Complex acc = 0;
            for (std::size_t c = 0; c < sub_dim; ++c) {
                acc += u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * local[c];
            }
            out[base | offsets[r]] = acc;
        }
    }
    return StateVector::normalized(n, std::move(out));
}

StateVector apply_gate(const StateVector &state, const UnitaryGate &gate, std::initializer_list<std::size_t> wires) {
    return apply_gate(state, gate, std::span<const std::size_t>(wires.begin(), wires.size()));
}

DensityMatrix partial_trace(const StateVector &state, std::span<const std::size_t> keep) {
    const std::size_t n = state.n_qubits();
    if (keep.empty()) {
        throw std::invalid_argument("partial_trace: keep list is empty");
    }
    check_wires(n, keep, "partial_trace");

    std::vector<std::size_t> keep_masks(keep.size());
    std::size_t keep_bits = 0;
    for (std::size_t b = 0; b < keep.size(); ++b) {
        keep_masks[b] = qubit_mask(n, keep[b]);
        keep_bits |= keep_masks[b];
    }
    const std::size_t kept_dim = std::size_t{1} << keep.size();
    std::vector<std::size_t> offsets(kept_dim);
    for (std::size_t s = 0; s < kept_dim; ++s) {
        offsets[s] = scatter_bits(s, keep_masks);
    }

    const auto amps = state.amplitudes();
    const auto d = static_cast<Eigen::Index>(kept_dim);
    Matrix rho = Matrix::Zero(d, d);
    for (std::size_t env = 0; env < amps.size(); ++env) {
        if (env & keep_bits) {
            continue;
        }
        for (std::size_t a = 0; a < kept_dim; ++a) {
            const Complex va = amps[env | offsets[a]];
            if (va == Complex(0)) {
                continue;
            }
            for (std::size_t b = 0; b < kept_dim; ++b) {
                rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
                    va * std::conj(amps[env | offsets[b]]);
            }
        }
    }
    return DensityMatrix(rho / rho.trace().real());
}

DensityMatrix partial_trace(const StateVector &state, std::initializer_list<std::size_t> keep) {
    return partial_trace(state, std::span<const std::size_t>(keep.begin(), keep.size()));
}

namespace {

// sqrt(<psi|sigma|psi>) where psi is the dominant eigenvector of a pure rho.
double pure_fidelity(const DensityMatrix &pure, const DensityMatrix &other) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(pure.matrix());
    const Eigen::VectorXcd psi = solver.eigenvectors().col(solver.eigenvalues().size() - 1);
    const double overlap = (psi.adjoint() * other.matrix() * psi)(0, 0).real();
    return std::sqrt(std::clamp(overlap, 0.0, 1.0));
}

Matrix hermitian_sqrt(const Matrix &m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    Eigen::VectorXd values = solver.eigenvalues();
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (values[i] < -kNegativeEigenvalueClamp) {
            throw std::invalid_argument("fidelity: matrix is not positive semidefinite");
        }
        values[i] = std::sqrt(std::max(values[i], 0.0));
    }
    const Matrix &v = solver.eigenvectors();
    return v * values.cast<Complex>().asDiagonal() * v.adjoint();
}

}  // namespace

double fidelity(const DensityMatrix &rho, const DensityMatrix &sigma) {
    if (rho.dim() != sigma.dim()) {
        throw std::invalid_argument("fidelity: dimension mismatch (" + std::to_string(rho.dim()) + " vs " +
                                    std::to_string(sigma.dim()) + ")");
    }
    constexpr double kPureThreshold = 1 - 1e-10;
    if (rho.purity() > kPureThreshold) {
        return pure_fidelity(rho, sigma);
    }
    if (sigma.purity() > kPureThreshold) {
        return pure_fidelity(sigma, rho);
    }
    const Matrix root = hermitian_sqrt(rho.matrix());
    Matrix inner = root * sigma.matrix() * root;
    inner = 0.5 * (inner + inner.adjoint()).eval();
    const Eigen::VectorXd values = clamped_eigenvalues(inner, "fidelity");
    double f = 0;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        f += std::sqrt(values[i]);
    }
    return std::clamp(f, 0.0, 1.0);
}

BlochVector bloch_vector(const DensityMatrix &rho) {
    if (rho.dim() != 2) {
        throw std::invalid_argument("bloch_vector: expected a single-qubit density matrix");
    }
    const Matrix &m = rho.matrix();
    // Tr(rho X) = 2 Re rho10, Tr(rho Y) = 2 Im rho10, Tr(rho Z) = rho00 - rho11.
    return BlochVector{
        2.0 * m(1, 0).real(),
        2.0 * m(1, 0).imag(),
        (m(0, 0) - m(1, 1)).real(),
    };
}

DensityMatrix from_bloch(const BlochVector &s) {
    if (s.length() > 1 + 1e-9) {
        throw std::invalid_argument("from_bloch: Bloch vector longer than 1");
    }
    const Complex i(0, 1);
    Matrix m(2, 2);
    m << 1 + s.s3, s.s1 - i * s.s2, s.s1 + i * s.s2, 1 - s.s3;
    return DensityMatrix(0.5 * m);
}

DensityMatrix conjugate_by(const UnitaryGate &gate, const DensityMatrix &rho) {
    if (gate.dim() != rho.dim()) {
        throw std::invalid_argument("conjugate_by: dimension mismatch");
    }
    return DensityMatrix(gate.matrix() * rho.matrix() * gate.matrix().adjoint());
}

PairProjection project_pair(const StateVector &state, std::array<std::size_t, 2> pair, int outcome) {
    const std::size_t n = state.n_qubits();
    check_wires(n, pair, "project_pair");
    const StateVector bell = bell_state(outcome);

    const std::size_t mask_a = qubit_mask(n, pair[0]);
    const std::size_t mask_b = qubit_mask(n, pair[1]);
    const std::array<std::size_t, 4> offsets{0, mask_b, mask_a, mask_a | mask_b};

    const auto amps = state.amplitudes();
    std::vector<Complex> out(amps.size());
    double probability = 0;
    for (std::size_t base = 0; base < amps.size(); ++base) {
        if (base & (mask_a | mask_b)) {
            continue;
        }
        Complex overlap = 0;
        for (std::size_t s = 0; s < 4; ++s) {
            overlap += std::conj(bell[s]) * amps[base | offsets[s]];
        }
        probability += std::norm(overlap);
        for (std::size_t s = 0; s < 4; ++s) {
            out[base | offsets[s]] = bell[s] * overlap;
        }
    }
    PairProjection result;
    result.probability = probability;
    if (probability >= kNullBranchProbability) {
        result.post_state = StateVector::normalized(n, std::move(out));
    }
    return result;
}

}  // namespace scrteleport
