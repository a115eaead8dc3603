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

// Closed forms transcribed term by term. These are cross-checks
// for the numerical code paths and are not used to compute anything the
// library returns.

#ifndef SCRTELEPORT_REFERENCE_H
#define SCRTELEPORT_REFERENCE_H

#include <map>
#include <string_view>
#include <utility>
#include <vector>

#include "scrteleport/qcore.h"
#include "scrteleport/scrambler.h"
#include "scrteleport/teleport.h"

namespace scrteleport::reference {

/// The nine identities U†PU = -P' for the maximal scrambler, as (P, P').
std::vector<std::pair<PauliString, PauliString>> max_scrambler_images();

/// Trigonometric expansion of U(θ)† P U(θ) for a single-site Pauli P on
/// three qubits ("XII", "IYI", ...). Only nonzero terms are present.
std::map<PauliString, double> partial_scrambler_image(std::string_view pauli, double theta);

/// |b_ijk> ⊗ |bob>, where b_ijk = |β_i>_{0,5} |β_j>_{1,4} |β_k>_{2,3}. Unnormalized
/// when |bob| is.
std::vector<Complex> bell_product(int i, int j, int k, std::array<Complex, 2> bob);

/// The 7-qubit state after both scramblers, built as a Bell-basis expansion.
StateVector protocol_state_expansion(const SecretState &secret, double theta);

}  // namespace scrteleport::reference

#endif
