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

#ifndef SCRTELEPORT_SCRAMBLER_H
#define SCRTELEPORT_SCRAMBLER_H

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "scrteleport/qcore.h"

namespace scrteleport {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_char(Pauli p);
UnitaryGate pauli_gate(Pauli p);

/// Tensor product of single-qubit Paulis; ops[0] acts on the gate's first wire.
class PauliString {
   public:
    explicit PauliString(std::vector<Pauli> ops);
    /// Parses a word over the letters I, X, Y, Z, e.g. "XZZ".
    static PauliString parse(std::string_view text);
    /// The `index`-th string in lexicographic I<X<Y<Z order over k sites.
    static PauliString from_index(std::size_t k, std::size_t index);

    std::size_t size() const { return ops_.size(); }
    Pauli operator[](std::size_t i) const { return ops_[i]; }
    /// Number of non-identity sites.
    std::size_t weight() const;
    std::string str() const;
    Matrix matrix() const;

    auto operator<=>(const PauliString &) const = default;

   private:
    std::vector<Pauli> ops_;
};

/// Expansion of an operator over the 4^k Pauli strings. Terms whose magnitude
/// falls below kZeroCoefficient are dropped.
class PauliExpansion {
   public:
    static constexpr double kZeroCoefficient = 1e-12;

    PauliExpansion(std::size_t k_qubits, std::map<PauliString, Complex> terms);
    /// Hilbert-Schmidt projection c_Q = Tr(Q M) / 2^k.
    static PauliExpansion of_operator(const Matrix &op);

    std::size_t k_qubits() const { return k_qubits_; }
    const std::map<PauliString, Complex> &terms() const { return terms_; }
    Complex coefficient(const PauliString &p) const;
    /// Σ |c_P|^2
    double total_weight() const;
    /// Σ c_P P
    Matrix reconstruct() const;

   private:
    std::size_t k_qubits_;
    std::map<PauliString, Complex> terms_;
};

struct ScramblerParams {
    /// Throws std::invalid_argument unless theta ∈ [0, π/2].
    explicit ScramblerParams(double theta);
    double theta;
};

/// The 3-qubit maximally scrambling unitary (entries in {0, ±1/2}).
UnitaryGate max_scrambler();
/// The θ-family interpolating identity (θ=0) and max_scrambler() (θ=π/2).
UnitaryGate partial_scrambler(const ScramblerParams &params);

/// Expansion of U† P U.
PauliExpansion conjugate_pauli(const UnitaryGate &u, const PauliString &p);

struct ScramblingRow {
    PauliString pauli;
    PauliExpansion expansion;
    /// 1 - Σ |c_P|^2 over weight-1 strings P.
    double delocalization;
};

struct ScramblingReport {
    double theta;
    std::vector<ScramblingRow> rows;
};

/// Conjugates each of the nine single-site Paulis by U(theta), ordered
/// X,Y,Z on site 0, then site 1, then site 2.
ScramblingReport scrambling_report(double theta);
/// Same, for an arbitrary 3-qubit unitary.
ScramblingReport scrambling_report(const UnitaryGate &u, double theta);

/// {theta, rows: [{pauli, terms: [{string, re, im}], delocalization}]}
nlohmann::json to_json(const ScramblingReport &report);

}  // namespace scrteleport

#endif
