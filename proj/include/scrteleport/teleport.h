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

#ifndef SCRTELEPORT_TELEPORT_H
#define SCRTELEPORT_TELEPORT_H

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "scrteleport/qcore.h"

namespace scrteleport {

/// Qubit layout of the 7-qubit circuit:
///   0      Alice's secret qubit
///   1, 2   Charlie (scrambled together with qubit 0 by U)
///   3, 4   Daniel (scrambled by U* together with qubit 5)
///   5      Bob's ancilla
///   6      Bob's output qubit
/// Bell pairs |β0> are prepared on (1,4), (2,3) and (5,6).
inline constexpr std::size_t kProtocolQubits = 7;
inline constexpr std::size_t kBobQubit = 6;

/// α|0> + β|1> with real α ∈ [0,1] and β = sqrt(1-α²) e^{iφ}.
struct SecretState {
    SecretState(double alpha, double phi);

    double alpha;
    double phi;

    Complex beta() const;
    StateVector ket() const;
    DensityMatrix density() const;
};

enum class MeasurementPair : std::uint8_t { Pair23, Pair14, Pair05 };

inline constexpr std::array<MeasurementPair, 3> kAllPairs{MeasurementPair::Pair23, MeasurementPair::Pair14,
                                                          MeasurementPair::Pair05};

std::array<std::size_t, 2> pair_qubits(MeasurementPair pair);
/// "23", "14" or "05".
std::string to_string(MeasurementPair pair);
/// Accepts "23", "14", "05" (also "{2,3}"-style with braces/commas).
MeasurementPair parse_pair(std::string_view text);

/// Bob's Pauli correction for a Bell outcome (0..3 = bit pairs 00,01,10,11).
/// Pairs {2,3}/{1,4}: I, Z, ZX, X. Pair {0,5}: I, X, Z, ZX. "ZX" means X is
/// applied first, then Z.
UnitaryGate correction(MeasurementPair pair, int outcome);

struct MeasurementRecord {
    MeasurementPair pair;
    int outcome;
    double probability;
    /// The following are empty when the branch has zero probability.
    std::optional<StateVector> post_state;
    std::optional<DensityMatrix> bob_raw;
    std::optional<DensityMatrix> bob_corrected;

    bool is_null() const { return !post_state.has_value(); }
};

/// Trigonometric coefficients of Bob's reduced state. The first block
/// describes pairs {2,3}/{1,4}, the second pair {0,5}.
struct AnalyticCoefficients {
    double theta;
    double a, a_plus, a_minus, b1, b2, c, d1, d2;
    double x1, x2, x3, y1, y3, z1, z3;
};

enum class ReportSource : std::uint8_t { Analytic, Circuit, Shots };
std::string to_string(ReportSource source);

struct FidelityReport {
    double theta = 0;
    double alpha = 0;
    double phi = 0;
    MeasurementPair pair = MeasurementPair::Pair23;
    ReportSource source = ReportSource::Analytic;
    std::array<double, 4> probability{};
    /// F² of Bob's uncorrected state; empty for zero-probability outcomes.
    std::array<std::optional<double>, 4> fsq_raw{};
    /// F² after the outcome's Pauli correction; empty for zero-probability outcomes.
    std::array<std::optional<double>, 4> fsq_corrected{};
    /// Σ_j P_j F̃_j², with the identity correction for outcome 0.
    double favg_sq = 0;
    std::optional<std::int64_t> shots;
    std::optional<std::uint64_t> seed;
};

/// |ψ>_0 ⊗ |β0>_{1,4} ⊗ |β0>_{2,3} ⊗ |β0>_{5,6}.
StateVector build_initial_state(const SecretState &secret);

/// Initial state, then U(θ) on wires (0,1,2) and U(θ)* on wires (5,4,3).
StateVector run_protocol(const SecretState &secret, double theta);
/// As above with an explicit 3-qubit scrambler.
StateVector run_protocol(const SecretState &secret, const UnitaryGate &scrambler);

MeasurementRecord measure(const StateVector &state, MeasurementPair pair, int outcome);

AnalyticCoefficients analytic_coefficients(double theta);
/// Closed-form outcome probabilities (P_j for {2,3}/{1,4}, Q_j for {0,5}).
std::array<double, 4> analytic_probabilities(double theta, MeasurementPair pair);
/// Closed-form Bloch vector of Bob's uncorrected qubit for one outcome.
/// Throws std::domain_error for zero-probability outcomes.
BlochVector analytic_bloch(const SecretState &secret, double theta, MeasurementPair pair, int outcome);

FidelityReport analytic_fidelities(const SecretState &secret, double theta, MeasurementPair pair);
FidelityReport circuit_fidelities(const SecretState &secret, double theta, MeasurementPair pair);
/// Samples `shots` outcomes from the exact distribution with a seeded
/// std::mt19937_64; shot noise enters only through the outcome frequencies.
FidelityReport shot_experiment(const SecretState &secret, double theta, MeasurementPair pair, std::int64_t shots,
                               std::uint64_t seed);

struct TeleportBranch {
    int outcome;
    double probability;
    StateVector bob_corrected;
};

/// Textbook 3-qubit teleportation: Bell measurement on (0,1), Bob holds qubit 2.
std::vector<TeleportBranch> standard_teleportation(const SecretState &secret);

nlohmann::json to_json(const FidelityReport &report);
/// theta,alpha,phi,pair,source,p0,p1,p2,p3,fsq0,fsq1,fsq2,fsq3,favg_sq,shots,seed
std::string csv_header();
std::string to_csv_row(const FidelityReport &report);
/// Fixed 6-decimal formatting shared by all CSV output; "nan" for empty values.
std::string format_number(std::optional<double> v);

}  // namespace scrteleport

#endif
