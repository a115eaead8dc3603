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

#include "scrteleport/teleport.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "scrteleport/scrambler.h"

namespace scrteleport {

namespace {

double sq(double x) {
    return x * x;
}

void check_outcome(int outcome) {
    if (outcome < 0 || outcome > 3) {
        throw std::invalid_argument("Bell outcome must be in 0..3, got " + std::to_string(outcome));
    }
}

// Scalars of ρ_A that every closed-form fidelity is written in.
struct SecretMoments {
    double quartic;    // |α|⁴ + |β|⁴
    double cross;      // |α|²|β|²
    double re_square;  // (αβ*)² + (α*β)²
    Complex sym;       // αβ* + α*β
    Complex antisym;   // αβ* - α*β
    double diff;       // |α|² - |β|²
};

SecretMoments moments(const SecretState &secret) {
    const Complex a = secret.alpha;
    const Complex b = secret.beta();
    const Complex ab = a * std::conj(b);
    return SecretMoments{
        std::norm(a) * std::norm(a) + std::norm(b) * std::norm(b),
        std::norm(a) * std::norm(b),
        2.0 * (ab * ab).real(),
        ab + std::conj(ab),
        ab - std::conj(ab),
        std::norm(a) - std::norm(b),
    };
}

// Real part of a Bloch component that is real by construction.
double real_part(Complex z) {
    return z.real();
}

}  // namespace

// ---------------------------------------------------------------------------
// Basic types

SecretState::SecretState(double alpha, double phi) : alpha(alpha), phi(phi) {
    if (!(alpha >= 0.0 && alpha <= 1.0) || !std::isfinite(phi)) {
        throw std::invalid_argument("SecretState: alpha must lie in [0,1] and phi must be finite");
    }
}

Complex SecretState::beta() const {
    return std::polar(std::sqrt(std::max(0.0, 1.0 - alpha * alpha)), phi);
}

StateVector SecretState::ket() const {
    return StateVector::normalized(1, {alpha, beta()});
}

DensityMatrix SecretState::density() const {
    return DensityMatrix::from_pure(ket());
}

std::array<std::size_t, 2> pair_qubits(MeasurementPair pair) {
    switch (pair) {
        case MeasurementPair::Pair23:
            return {2, 3};
        case MeasurementPair::Pair14:
            return {1, 4};
        case MeasurementPair::Pair05:
            return {0, 5};
    }
    throw std::invalid_argument("bad MeasurementPair");
}

std::string to_string(MeasurementPair pair) {
    const auto q = pair_qubits(pair);
    return std::to_string(q[0]) + std::to_string(q[1]);
}

MeasurementPair parse_pair(std::string_view text) {
    std::string digits;
    for (char c : text) {
        if (c >= '0' && c <= '9') {
            digits.push_back(c);
        } else if (c != '{' && c != '}' && c != ',' && c != ' ') {
            digits = "?";
            break;
        }
    }
    if (digits == "23") {
        return MeasurementPair::Pair23;
    }
    if (digits == "14") {
        return MeasurementPair::Pair14;
    }
    if (digits == "05") {
        return MeasurementPair::Pair05;
    }
    throw std::invalid_argument("measurement pair must be one of 23, 14, 05; got '" + std::string(text) + "'");
}

UnitaryGate correction(MeasurementPair pair, int outcome) {
    check_outcome(outcome);
    const UnitaryGate x = UnitaryGate::pauli_x();
    const UnitaryGate z = UnitaryGate::pauli_z();
    if (pair == MeasurementPair::Pair05) {
        switch (outcome) {
            case 1:
                return x;
            case 2:
                return z;
            case 3:
                return z * x;
            default:
                return UnitaryGate::identity(1);
        }
    }
    switch (outcome) {
        case 1:
            return z;
        case 2:
            return z * x;
        case 3:
            return x;
        default:
            return UnitaryGate::identity(1);
    }
}

std::string to_string(ReportSource source) {
    switch (source) {
        case ReportSource::Analytic:
            return "ANALYTIC";
        case ReportSource::Circuit:
            return "CIRCUIT";
        case ReportSource::Shots:
            return "SHOTS";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Circuit

StateVector build_initial_state(const SecretState &secret) {
    const StateVector secret_ket = secret.ket();
    const StateVector pair = bell_state(0);
    std::vector<Complex> amps(std::size_t{1} << kProtocolQubits);
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        auto bit = [idx](std::size_t q) { return (idx >> (kProtocolQubits - 1 - q)) & 1; };
        amps[idx] = secret_ket[bit(0)] * pair[2 * bit(1) + bit(4)] * pair[2 * bit(2) + bit(3)] *
                    pair[2 * bit(5) + bit(6)];
    }
    return StateVector::from_amplitudes(kProtocolQubits, std::move(amps));
}

StateVector run_protocol(const SecretState &secret, const UnitaryGate &scrambler) {
    if (scrambler.k_qubits() != 3) {
        throw std::invalid_argument("run_protocol: scrambler must act on 3 qubits");
    }
    StateVector state = build_initial_state(secret);
    state = apply_gate(state, scrambler, {0, 1, 2});
    // Mirrored wiring: wire 5 takes U*'s first slot.
    state = apply_gate(state, scrambler.conjugate(), {5, 4, 3});
    return state;
}

StateVector run_protocol(const SecretState &secret, double theta) {
    return run_protocol(secret, partial_scrambler(ScramblerParams(theta)));
}

MeasurementRecord measure(const StateVector &state, MeasurementPair pair, int outcome) {
    check_outcome(outcome);
    if (state.n_qubits() != kProtocolQubits) {
        throw std::invalid_argument("measure: expected a 7-qubit protocol state");
    }
    PairProjection projection = project_pair(state, pair_qubits(pair), outcome);
    MeasurementRecord record{pair, outcome, projection.probability, std::nullopt, std::nullopt, std::nullopt};
    if (projection.is_null()) {
        return record;
    }
    record.bob_raw = partial_trace(*projection.post_state, {kBobQubit});
    record.bob_corrected = conjugate_by(correction(pair, outcome), *record.bob_raw);
    record.post_state = std::move(projection.post_state);
    return record;
}

// ---------------------------------------------------------------------------
// Closed forms

AnalyticCoefficients analytic_coefficients(double theta) {
    ScramblerParams checked(theta);
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    AnalyticCoefficients k{};
    k.theta = checked.theta;
    k.a = 0.5 * sq(s) * std::pow(c, 4);
    k.a_plus = 0.25 * (1 + std::pow(c, 4));
    k.a_minus = 0.25 * (1 - std::pow(c, 4));
    k.b1 = sq(s) / 16 * (3 + std::cos(4 * theta));
    k.b2 = sq(std::sin(4 * theta)) / 64;
    k.c = sq(std::sin(2 * theta)) / 16;
    k.d1 = 0.5 * std::pow(s, 4) * sq(c);
    k.d2 = std::pow(s, 4) / 8 * (1 + 4 * std::cos(2 * theta) + std::cos(4 * theta));
    k.x1 = 0.5 * std::pow(s, 4) * sq(c);
    k.x2 = 0.5 * sq(s) * std::pow(c, 4);
    k.x3 = k.x2;
    k.y1 = sq(3 + std::cos(4 * theta)) / 64;
    k.y3 = -(11 + 20 * std::cos(4 * theta) + std::cos(8 * theta)) / 128;
    k.z1 = std::pow(c, 3) / 4 * (s - std::sin(3 * theta));
    k.z3 = std::sin(4 * theta) * sq(c) / 8;
    return k;
}

std::array<double, 4> analytic_probabilities(double theta, MeasurementPair pair) {
    ScramblerParams checked(theta);
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    if (pair == MeasurementPair::Pair05) {
        return {
            (1 + 2 * std::pow(s, 4) * sq(c)) / 4,
            (33 - 2 * std::cos(2 * theta) + 2 * std::cos(6 * theta) - std::cos(8 * theta)) / 128,
            (std::pow(c, 4) + std::pow(s, 8) + 2 * sq(s) * sq(c) - std::pow(s, 4) * std::pow(c, 4)) / 4,
            (31 + 2 * std::cos(2 * theta) - 2 * std::cos(6 * theta) + std::cos(8 * theta)) / 128,
        };
    }
    return {
        (36 + 23 * std::cos(2 * theta) + 4 * std::cos(4 * theta) + std::cos(6 * theta)) / 64,
        sq(s) / 32 * (16 + 11 * std::cos(2 * theta) + 4 * std::cos(4 * theta) + std::cos(6 * theta)),
        sq(s) / 16 * (5 + 2 * std::cos(2 * theta) + std::cos(4 * theta)),
        std::pow(s, 4) / 8 * (7 + 6 * std::cos(2 * theta) + std::cos(4 * theta)),
    };
}

BlochVector analytic_bloch(const SecretState &secret, double theta, MeasurementPair pair, int outcome) {
    check_outcome(outcome);
    const AnalyticCoefficients k = analytic_coefficients(theta);
    const auto p = analytic_probabilities(theta, pair);
    const double pj = p[static_cast<std::size_t>(outcome)];
    if (pj < kNullBranchProbability) {
        throw std::domain_error("analytic_bloch: outcome has zero probability");
    }
    const SecretMoments m = moments(secret);
    const Complex i(0, 1);
    const Complex u = m.sym;
    const Complex w = m.antisym;
    const double d = m.diff;

    if (pair != MeasurementPair::Pair05) {
        switch (outcome) {
            case 0:
                return {real_part((k.a + k.a_minus) / pj * u), real_part(i * (k.a_minus - k.a) / pj * w),
                        (2 * k.a_plus - pj) / pj * d};
            case 1:
                return {real_part(-(k.b1 + k.b2) / pj * u), real_part(-i * (k.b1 - k.b2) / pj * w),
                        (2 * k.b1 - pj) / pj * d};
            case 2:
                return {real_part(-u), real_part(-i * (2 * k.c - pj) / pj * w), (2 * k.c - pj) / pj * d};
            default:
                return {real_part(-(k.d1 + k.d2) / pj * u), real_part(-i * (k.d1 - k.d2) / pj * w),
                        (2 * k.d1 - pj) / pj * d};
        }
    }
    switch (outcome) {
        case 0:
            return {real_part((1 - 2 * pj) / (2 * pj) * u), real_part(i * w), (1 - 2 * pj) / (2 * pj) * d};
        case 1:
            return {real_part(((k.y1 - k.x1) * u - i * k.z1 * w) / pj),
                    real_part(-i / pj * ((k.y1 + k.x1) * w - i * k.z1 * u)), (2 * k.x1 - pj) / pj * d};
        case 2:
            return {real_part(-u), real_part(-i * (pj - 2 * k.x2) / pj * w), -(2 * k.x2 - pj) / pj * d};
        default:
            return {real_part(((k.y3 - k.x3) * u - i * k.z3 * w) / pj),
                    real_part(-i / pj * ((k.y3 + k.x3) * w - i * k.z3 * u)), (2 * k.x3 - pj) / pj * d};
    }
}

FidelityReport analytic_fidelities(const SecretState &secret, double theta, MeasurementPair pair) {
    const AnalyticCoefficients k = analytic_coefficients(theta);
    const auto p = analytic_probabilities(theta, pair);
    const SecretMoments m = moments(secret);

    FidelityReport r;
    r.theta = theta;
    r.alpha = secret.alpha;
    r.phi = secret.phi;
    r.pair = pair;
    r.source = ReportSource::Analytic;
    r.probability = p;

    auto live = [&](std::size_t j) { return p[j] >= kNullBranchProbability; };
    // F² = [q4 (|α|⁴+|β|⁴) + 2 q2 |α|²|β|² + qr ((αβ*)² + (α*β)²)] / norm
    auto form = [&](double q4, double q2, double qr, double norm) {
        return (q4 * m.quartic + 2 * q2 * m.cross + qr * m.re_square) / norm;
    };

    if (pair != MeasurementPair::Pair05) {
        if (live(0)) {
            r.fsq_raw[0] = form(k.a_plus, p[0] + k.a_minus - k.a_plus, k.a, p[0]);
            r.fsq_corrected[0] = r.fsq_raw[0];
        }
        if (live(1)) {
            r.fsq_raw[1] = form(k.b1, p[1] - 2 * k.b1, -k.b2, p[1]);
            r.fsq_corrected[1] = form(k.b1, p[1], k.b2, p[1]);
        }
        if (live(2)) {
            r.fsq_raw[2] = form(k.c, p[2] - 2 * k.c, -(p[2] - k.c), p[2]);
            r.fsq_corrected[2] = form(p[2] - k.c, p[2], k.c, p[2]);
        }
        if (live(3)) {
            r.fsq_raw[3] = form(k.d1, p[3] - 2 * k.d1, -k.d2, p[3]);
            r.fsq_corrected[3] = form(p[3] - k.d1, k.d1 - k.d2, -k.d1, p[3]);
        }
    } else {
        if (live(0)) {
            r.fsq_raw[0] = form(1, 4 * p[0], 1 - 4 * p[0], 4 * p[0]);
            r.fsq_corrected[0] = r.fsq_raw[0];
        }
        if (live(1)) {
            r.fsq_corrected[1] = form(p[1] - k.x1, k.x1 + k.y1, -k.x1, p[1]);
        }
        if (live(2)) {
            r.fsq_corrected[2] = form(p[2] - k.x2, p[2], k.x2, p[2]);
        }
        if (live(3)) {
            r.fsq_corrected[3] = form(p[3] - k.x3, k.x3 - k.y3, k.x3, p[3]);
        }
        // No closed form is given for the uncorrected states; use the Bloch
        // vector route F² = (1 + r_A · s_B) / 2 for pure ρ_A.
        const BlochVector ra = bloch_vector(secret.density());
        for (int j = 1; j < 4; ++j) {
            if (live(static_cast<std::size_t>(j))) {
                const BlochVector s = analytic_bloch(secret, theta, pair, j);
                r.fsq_raw[static_cast<std::size_t>(j)] = 0.5 * (1 + ra.s1 * s.s1 + ra.s2 * s.s2 + ra.s3 * s.s3);
            }
        }
    }

    for (std::size_t j = 0; j < 4; ++j) {
        if (r.fsq_corrected[j]) {
            r.favg_sq += p[j] * *r.fsq_corrected[j];
        }
    }
    return r;
}

FidelityReport circuit_fidelities(const SecretState &secret, double theta, MeasurementPair pair) {
    const StateVector state = run_protocol(secret, theta);
    const DensityMatrix rho_a = secret.density();

    FidelityReport r;
    r.theta = theta;
    r.alpha = secret.alpha;
    r.phi = secret.phi;
    r.pair = pair;
    r.source = ReportSource::Circuit;
    for (int j = 0; j < 4; ++j) {
        const auto idx = static_cast<std::size_t>(j);
        const MeasurementRecord rec = measure(state, pair, j);
        r.probability[idx] = rec.probability;
        if (rec.is_null()) {
            continue;
        }
        r.fsq_raw[idx] = sq(fidelity(rho_a, *rec.bob_raw));
        r.fsq_corrected[idx] = sq(fidelity(rho_a, *rec.bob_corrected));
        r.favg_sq += rec.probability * *r.fsq_corrected[idx];
    }
    return r;
}

FidelityReport shot_experiment(const SecretState &secret, double theta, MeasurementPair pair, std::int64_t shots,
                               std::uint64_t seed) {
    if (shots < 1) {
        throw std::invalid_argument("shot_experiment: shots must be >= 1");
    }
    FidelityReport exact = circuit_fidelities(secret, theta, pair);

    std::mt19937_64 rng(seed);
    std::discrete_distribution<int> outcome_dist(exact.probability.begin(), exact.probability.end());
    std::array<std::int64_t, 4> counts{};
    for (std::int64_t s = 0; s < shots; ++s) {
        ++counts[static_cast<std::size_t>(outcome_dist(rng))];
    }

    FidelityReport r = exact;
    r.source = ReportSource::Shots;
    r.shots = shots;
    r.seed = seed;
    r.favg_sq = 0;
    for (std::size_t j = 0; j < 4; ++j) {
        r.probability[j] = static_cast<double>(counts[j]) / static_cast<double>(shots);
        if (counts[j] > 0 && r.fsq_corrected[j]) {
            r.favg_sq += r.probability[j] * *r.fsq_corrected[j];
        }
    }
    return r;
}

std::vector<TeleportBranch> standard_teleportation(const SecretState &secret) {
    StateVector state = secret.ket().tensor(bell_state(0));
    state = apply_gate(state, UnitaryGate::cnot(), {0, 1});
    state = apply_gate(state, UnitaryGate::hadamard(), {0});

    std::vector<TeleportBranch> branches;
    for (int outcome = 0; outcome < 4; ++outcome) {
        // Alice reads (m0, m1) from qubits (0, 1); Bob's qubit is the low bit.
        const auto base = static_cast<std::size_t>(outcome) << 1;
        std::vector<Complex> bob{state[base], state[base | 1]};
        const double probability = std::norm(bob[0]) + std::norm(bob[1]);
        StateVector bob_state = StateVector::normalized(1, std::move(bob));
        if (outcome & 1) {
            bob_state = apply_gate(bob_state, UnitaryGate::pauli_x(), {0});
        }
        if (outcome & 2) {
            bob_state = apply_gate(bob_state, UnitaryGate::pauli_z(), {0});
        }
        branches.push_back({outcome, probability, std::move(bob_state)});
    }
    return branches;
}

// ---------------------------------------------------------------------------
// Serialization

std::string format_number(std::optional<double> v) {
    if (!v || !std::isfinite(*v)) {
        return "nan";
    }
    std::string out = fmt::format("{:.6f}", *v);
    if (out == "-0.000000") {
        out = "0.000000";
    }
    return out;
}

nlohmann::json to_json(const FidelityReport &report) {
    nlohmann::json j;
    j["theta"] = report.theta;
    j["alpha"] = report.alpha;
    j["phi"] = report.phi;
    j["pair"] = to_string(report.pair);
    j["source"] = to_string(report.source);
    for (std::size_t i = 0; i < 4; ++i) {
        j["p" + std::to_string(i)] = report.probability[i];
    }
    for (std::size_t i = 0; i < 4; ++i) {
        j["fsq" + std::to_string(i)] = report.fsq_raw[i] ? nlohmann::json(*report.fsq_raw[i]) : nlohmann::json();
    }
    for (std::size_t i = 0; i < 4; ++i) {
        j["fsq_corr" + std::to_string(i)] =
            report.fsq_corrected[i] ? nlohmann::json(*report.fsq_corrected[i]) : nlohmann::json();
    }
    j["favg_sq"] = report.favg_sq;
    j["shots"] = report.shots ? nlohmann::json(*report.shots) : nlohmann::json();
    j["seed"] = report.seed ? nlohmann::json(*report.seed) : nlohmann::json();
    return j;
}

std::string csv_header() {
    return "theta,alpha,phi,pair,source,p0,p1,p2,p3,fsq0,fsq1,fsq2,fsq3,favg_sq,shots,seed";
}

std::string to_csv_row(const FidelityReport &r) {
    std::string row = fmt::format("{},{},{},{},{}", format_number(r.theta), format_number(r.alpha),
                                  format_number(r.phi), to_string(r.pair), to_string(r.source));
    for (double p : r.probability) {
        row += "," + format_number(p);
    }
    for (const auto &f : r.fsq_raw) {
        row += "," + format_number(f);
    }
    row += "," + format_number(r.favg_sq);
    row += "," + (r.shots ? std::to_string(*r.shots) : std::string());
    row += "," + (r.seed ? std::to_string(*r.seed) : std::string());
    return row;
}

}  // namespace scrteleport
