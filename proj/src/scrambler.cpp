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

#include "scrteleport/scrambler.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace scrteleport {

char pauli_char(Pauli p) {
    return "IXYZ"[static_cast<int>(p)];
}

UnitaryGate pauli_gate(Pauli p) {
    switch (p) {
        case Pauli::I:
            return UnitaryGate::identity(1);
        case Pauli::X:
            return UnitaryGate::pauli_x();
        case Pauli::Y:
            return UnitaryGate::pauli_y();
        case Pauli::Z:
            return UnitaryGate::pauli_z();
    }
    throw std::invalid_argument("pauli_gate: bad Pauli");
}

PauliString::PauliString(std::vector<Pauli> ops) : ops_(std::move(ops)) {
    if (ops_.empty()) {
        throw std::invalid_argument("PauliString: needs at least one site");
    }
}

PauliString PauliString::parse(std::string_view text) {
    std::vector<Pauli> ops;
    ops.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case 'I':
            case '_':
                ops.push_back(Pauli::I);
                break;
            case 'X':
                ops.push_back(Pauli::X);
                break;
            case 'Y':
                ops.push_back(Pauli::Y);
                break;
            case 'Z':
                ops.push_back(Pauli::Z);
                break;
            default:
                throw std::invalid_argument("PauliString::parse: unexpected character in '" + std::string(text) + "'");
        }
    }
    return PauliString(std::move(ops));
}

PauliString PauliString::from_index(std::size_t k, std::size_t index) {
    std::vector<Pauli> ops(k);
    for (std::size_t i = 0; i < k; ++i) {
        ops[k - 1 - i] = static_cast<Pauli>(index & 3);
        index >>= 2;
    }
    if (index != 0) {
        throw std::invalid_argument("PauliString::from_index: index out of range");
    }
    return PauliString(std::move(ops));
}

std::size_t PauliString::weight() const {
    std::size_t w = 0;
    for (Pauli p : ops_) {
        w += p != Pauli::I;
    }
    return w;
}

std::string PauliString::str() const {
    std::string out;
    out.reserve(ops_.size());
    for (Pauli p : ops_) {
        out.push_back(pauli_char(p));
    }
    return out;
}

Matrix PauliString::matrix() const {
    Matrix out = Matrix::Identity(1, 1);
    for (Pauli p : ops_) {
        const Matrix site = pauli_gate(p).matrix();
        Matrix next(out.rows() * 2, out.cols() * 2);
        for (Eigen::Index r = 0; r < out.rows(); ++r) {
            for (Eigen::Index c = 0; c < out.cols(); ++c) {
                next.block<2, 2>(2 * r, 2 * c) = out(r, c) * site;
            }
        }
        out = std::move(next);
    }
    return out;
}

PauliExpansion::PauliExpansion(std::size_t k_qubits, std::map<PauliString, Complex> terms)
    : k_qubits_(k_qubits), terms_(std::move(terms)) {
    for (const auto &[p, c] : terms_) {
        if (p.size() != k_qubits_) {
            throw std::invalid_argument("PauliExpansion: term " + p.str() + " has the wrong number of sites");
        }
    }
}

PauliExpansion PauliExpansion::of_operator(const Matrix &op) {
    const auto dim = static_cast<std::size_t>(op.rows());
    if (op.rows() != op.cols() || dim < 2 || (dim & (dim - 1)) != 0) {
        throw std::invalid_argument("PauliExpansion::of_operator: operator must be 2^k x 2^k");
    }
    std::size_t k = 0;
    while ((std::size_t{1} << k) < dim) {
        ++k;
    }
    std::map<PauliString, Complex> terms;
    const std::size_t n_strings = std::size_t{1} << (2 * k);
    for (std::size_t idx = 0; idx < n_strings; ++idx) {
        PauliString q = PauliString::from_index(k, idx);
        const Complex c = (q.matrix() * op).trace() / static_cast<double>(dim);
        if (std::abs(c) >= kZeroCoefficient) {
            terms.emplace(std::move(q), c);
        }
    }
    return PauliExpansion(k, std::move(terms));
}

Complex PauliExpansion::coefficient(const PauliString &p) const {
    auto it = terms_.find(p);
    return it == terms_.end() ? Complex(0) : it->second;
}

double PauliExpansion::total_weight() const {
    double w = 0;
    for (const auto &[p, c] : terms_) {
        w += std::norm(c);
    }
    return w;
}

Matrix PauliExpansion::reconstruct() const {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << k_qubits_);
    Matrix out = Matrix::Zero(dim, dim);
    for (const auto &[p, c] : terms_) {
        out += c * p.matrix();
    }
    return out;
}

ScramblerParams::ScramblerParams(double theta) : theta(theta) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi / 2)) {
        throw std::invalid_argument("theta must lie in [0, pi/2], got " + std::to_string(theta));
    }
}

UnitaryGate max_scrambler() {
    Matrix m(8, 8);
    // clang-format off
    m << -1,  0,  0, -1,  0, -1, -1,  0,
          0,  1, -1,  0, -1,  0,  0,  1,
          0, -1,  1,  0, -1,  0,  0,  1,
          1,  0,  0,  1,  0, -1, -1,  0,
          0, -1, -1,  0,  1,  0,  0,  1,
          1,  0,  0, -1,  0,  1, -1,  0,
          1,  0,  0, -1,  0, -1,  1,  0,
          0, -1, -1,  0, -1,  0,  0, -1;
    // clang-format on
    return UnitaryGate(0.5 * m);
}

UnitaryGate partial_scrambler(const ScramblerParams &params) {
    const Complex e_plus = std::polar(1.0, 2 * params.theta);
    const Complex e_minus = std::conj(e_plus);
    const Complex m1p = 1.0 - e_plus, m1m = 1.0 - e_minus;
    const Complex m2p = 1.0 + 3.0 * e_plus, m2m = 1.0 + 3.0 * e_minus;
    const Complex m3p = 3.0 + e_plus, m3m = 3.0 + e_minus;
    const Complex o = 0;

    Matrix m(8, 8);
    // clang-format off
    m << m2p,    o,    o, -m1p,    o, -m1p, -m1p,    o,
           o,  m3p, -m1p,    o, -m1p,    o,    o,  m1p,
           o, -m1p,  m3p,    o, -m1p,    o,    o,  m1p,
         m1m,    o,    o,  m3m,    o, -m1m, -m1m,    o,
           o, -m1p, -m1p,    o,  m3p,    o,    o,  m1p,
         m1m,    o,    o, -m1m,    o,  m3m, -m1m,    o,
         m1m,    o,    o, -m1m,    o, -m1m,  m3m,    o,
           o, -m1m, -m1m,    o, -m1m,    o,    o,  m2m;
    // clang-format on
    return UnitaryGate(0.25 * m);
}

PauliExpansion conjugate_pauli(const UnitaryGate &u, const PauliString &p) {
    if (p.size() != u.k_qubits()) {
        throw std::invalid_argument("conjugate_pauli: " + std::to_string(p.size()) + "-site Pauli string vs " +
                                    std::to_string(u.k_qubits()) + "-qubit unitary");
    }
    const Matrix &m = u.matrix();
    return PauliExpansion::of_operator(m.adjoint() * p.matrix() * m);
}

ScramblingReport scrambling_report(const UnitaryGate &u, double theta) {
    if (u.k_qubits() != 3) {
        throw std::invalid_argument("scrambling_report: expected a 3-qubit unitary");
    }
    ScramblingReport report{theta, {}};
    for (std::size_t site = 0; site < 3; ++site) {
        for (Pauli local : {Pauli::X, Pauli::Y, Pauli::Z}) {
            std::vector<Pauli> ops(3, Pauli::I);
            ops[site] = local;
            PauliString pauli(std::move(ops));
            PauliExpansion expansion = conjugate_pauli(u, pauli);
            double local_weight = 0;
            for (const auto &[q, c] : expansion.terms()) {
                if (q.weight() == 1) {
                    local_weight += std::norm(c);
                }
            }
            report.rows.push_back({std::move(pauli), std::move(expansion), std::max(0.0, 1.0 - local_weight)});
        }
    }
    return report;
}

ScramblingReport scrambling_report(double theta) {
    return scrambling_report(partial_scrambler(ScramblerParams(theta)), theta);
}

nlohmann::json to_json(const ScramblingReport &report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &row : report.rows) {
        nlohmann::json terms = nlohmann::json::array();
        for (const auto &[q, c] : row.expansion.terms()) {
            terms.push_back({{"string", q.str()}, {"re", c.real()}, {"im", c.imag()}});
        }
        rows.push_back({{"pauli", row.pauli.str()}, {"terms", std::move(terms)}, {"delocalization", row.delocalization}});
    }
    return {{"theta", report.theta}, {"rows", std::move(rows)}};
}

}  // namespace scrteleport
