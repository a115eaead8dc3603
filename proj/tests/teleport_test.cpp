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
#include <numbers>
#include <random>

#include <fmt/format.h>
#include <gtest/gtest.h>

#include "scrteleport/reference.h"
#include "scrteleport/scrambler.h"

using namespace scrteleport;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;
const double kAlpha = 1 / std::sqrt(3.0);

void expect_reports_near(const FidelityReport &a, const FidelityReport &b, double tol, const std::string &label) {
    EXPECT_NEAR(a.favg_sq, b.favg_sq, tol) << label;
    for (int j = 0; j < 4; ++j) {
        EXPECT_NEAR(a.probability[j], b.probability[j], tol) << label << " outcome " << j;
        ASSERT_EQ(a.fsq_raw[j].has_value(), b.fsq_raw[j].has_value()) << label << " outcome " << j;
        ASSERT_EQ(a.fsq_corrected[j].has_value(), b.fsq_corrected[j].has_value()) << label << " outcome " << j;
        if (a.fsq_raw[j]) {
            EXPECT_NEAR(*a.fsq_raw[j], *b.fsq_raw[j], tol) << label << " outcome " << j;
            EXPECT_NEAR(*a.fsq_corrected[j], *b.fsq_corrected[j], tol) << label << " outcome " << j;
        }
    }
}

struct Triple {
    double theta, alpha, phi;
};

std::vector<Triple> oracle_grid() {
    std::vector<Triple> out{{0, kAlpha, 0}, {kHalfPi, kAlpha, 0}, {0, 1, 0}, {kHalfPi, 0, 0.3}, {0.8, kAlpha, 0}};
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> u(0, 1);
    while (out.size() < 60) {
        out.push_back({u(rng) * kHalfPi, u(rng), u(rng) * 2 * std::numbers::pi});
    }
    return out;
}

}  // namespace

TEST(secret_state, normalized_and_validated) {
    const SecretState s(kAlpha, 0.7);
    EXPECT_NEAR(s.ket().norm(), 1.0, 1e-15);
    EXPECT_NEAR(std::norm(s.beta()), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(std::arg(s.beta()), 0.7, 1e-15);
    EXPECT_THROW(SecretState(1.1, 0), std::invalid_argument);
    EXPECT_THROW(SecretState(-0.1, 0), std::invalid_argument);
}

TEST(measurement_pair, parse_and_print) {
    EXPECT_EQ(parse_pair("23"), MeasurementPair::Pair23);
    EXPECT_EQ(parse_pair("{1,4}"), MeasurementPair::Pair14);
    EXPECT_EQ(parse_pair("05"), MeasurementPair::Pair05);
    EXPECT_EQ(to_string(MeasurementPair::Pair05), "05");
    EXPECT_THROW(parse_pair("12"), std::invalid_argument);
}

TEST(build_initial_state, product_of_bell_pairs) {
    const auto s = build_initial_state(SecretState(1, 0));
    EXPECT_NEAR(s[0].real(), std::pow(1 / std::sqrt(2.0), 3), 1e-15);
    EXPECT_NEAR(s.norm(), 1.0, 1e-15);
}

TEST(run_protocol, identity_at_zero) {
    const SecretState secret(kAlpha, 0.4);
    const auto initial = build_initial_state(secret);
    const auto s = run_protocol(secret, 0.0);
    for (std::size_t i = 0; i < s.dim(); ++i) {
        EXPECT_NEAR(std::abs(s[i] - initial[i]), 0.0, 1e-15);
    }
    EXPECT_THROW(run_protocol(secret, 1.6), std::invalid_argument);
}

TEST(run_protocol, matches_bell_basis_expansion) {
    for (const auto &t : oracle_grid()) {
        const SecretState secret(t.alpha, t.phi);
        const auto sim = run_protocol(secret, t.theta);
        const auto ref = reference::protocol_state_expansion(secret, t.theta);
        for (std::size_t i = 0; i < sim.dim(); ++i) {
            ASSERT_NEAR(std::abs(sim[i] - ref[i]), 0.0, 1e-10) << "theta=" << t.theta << " index " << i;
        }
    }
}

TEST(run_protocol, mirrored_and_direct_conjugate_wiring_agree) {
    const SecretState secret(kAlpha, 0);
    const auto u = partial_scrambler(ScramblerParams(0.8));
    auto direct = apply_gate(build_initial_state(secret), u, {0, 1, 2});
    direct = apply_gate(direct, u.conjugate(), {3, 4, 5});
    const auto mirrored = run_protocol(secret, 0.8);
    const auto ref = reference::protocol_state_expansion(secret, 0.8);
    for (std::size_t i = 0; i < mirrored.dim(); ++i) {
        EXPECT_NEAR(std::abs(mirrored[i] - direct[i]), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(direct[i] - ref[i]), 0.0, 1e-10);
    }
}

TEST(measure, no_scrambling_leaves_pairs_in_beta0) {
    const auto s = run_protocol(SecretState(kAlpha, 0), 0.0);
    EXPECT_NEAR(measure(s, MeasurementPair::Pair23, 0).probability, 1.0, 1e-14);
    const auto rec = measure(s, MeasurementPair::Pair23, 1);
    EXPECT_TRUE(rec.is_null());
    EXPECT_FALSE(rec.bob_raw.has_value());
}

TEST(correction, outcome_mapping) {
    const auto x = UnitaryGate::pauli_x().matrix();
    const auto z = UnitaryGate::pauli_z().matrix();
    auto same = [](const UnitaryGate &g, const Matrix &m) { return (g.matrix() - m).norm() < 1e-15; };
    EXPECT_TRUE(same(correction(MeasurementPair::Pair23, 0), Matrix::Identity(2, 2)));
    EXPECT_TRUE(same(correction(MeasurementPair::Pair23, 1), z));
    EXPECT_TRUE(same(correction(MeasurementPair::Pair23, 2), z * x));
    EXPECT_TRUE(same(correction(MeasurementPair::Pair14, 3), x));
    EXPECT_TRUE(same(correction(MeasurementPair::Pair05, 1), x));
    EXPECT_TRUE(same(correction(MeasurementPair::Pair05, 2), z));
    EXPECT_TRUE(same(correction(MeasurementPair::Pair05, 3), z * x));
    EXPECT_THROW(correction(MeasurementPair::Pair05, 4), std::invalid_argument);
}

TEST(correction, every_outcome_perfect_at_maximal_scrambling) {
    const SecretState secret(0.3, 1.9);
    const auto s = run_protocol(secret, kHalfPi);
    for (MeasurementPair pair : kAllPairs) {
        for (int j = 0; j < 4; ++j) {
            const auto rec = measure(s, pair, j);
            ASSERT_FALSE(rec.is_null());
            EXPECT_NEAR(fidelity(secret.density(), *rec.bob_corrected), 1.0, 1e-9)
                << to_string(pair) << " outcome " << j;
        }
    }
}

TEST(analytic_coefficients, endpoint_values) {
    const auto c0 = analytic_coefficients(0);
    EXPECT_NEAR(c0.a, 0, 1e-15);
    EXPECT_NEAR(c0.a_plus, 0.5, 1e-15);
    EXPECT_NEAR(c0.a_minus, 0, 1e-15);
    EXPECT_NEAR(c0.b1, 0, 1e-15);
    EXPECT_NEAR(c0.b2, 0, 1e-15);
    EXPECT_NEAR(c0.c, 0, 1e-15);
    EXPECT_NEAR(c0.d1, 0, 1e-15);
    EXPECT_NEAR(c0.d2, 0, 1e-15);

    const auto c1 = analytic_coefficients(kHalfPi);
    EXPECT_NEAR(c1.a_plus, 0.25, 1e-15);
    EXPECT_NEAR(c1.a_minus, 0.25, 1e-15);
    EXPECT_NEAR(c1.d1, 0, 1e-15);
    EXPECT_NEAR(c1.x1, 0, 1e-15);

    EXPECT_NEAR(analytic_coefficients(std::numbers::pi / 4).c, 1.0 / 16, 1e-15);
}

TEST(analytic_probabilities, complete_on_fine_grid) {
    for (int i = 0; i < 200; ++i) {
        const double theta = kHalfPi * (i / 199.0);
        for (MeasurementPair pair : kAllPairs) {
            const auto p = analytic_probabilities(theta, pair);
            EXPECT_NEAR(p[0] + p[1] + p[2] + p[3], 1.0, 1e-12);
            for (double v : p) {
                EXPECT_GE(v, -1e-15);
            }
        }
    }
}

TEST(analytic_probabilities, match_circuit) {
    for (double theta : {0.2, std::numbers::pi / 3, 1.1}) {
        const auto s = run_protocol(SecretState(kAlpha, 0), theta);
        for (MeasurementPair pair : kAllPairs) {
            const auto p = analytic_probabilities(theta, pair);
            for (int j = 0; j < 4; ++j) {
                EXPECT_NEAR(p[j], measure(s, pair, j).probability, 1e-12) << to_string(pair) << " " << j;
            }
        }
    }
}

TEST(analytic_bloch, matches_circuit_reduced_state) {
    for (const auto &t : oracle_grid()) {
        const SecretState secret(t.alpha, t.phi);
        const auto s = run_protocol(secret, t.theta);
        for (MeasurementPair pair : kAllPairs) {
            for (int j = 0; j < 4; ++j) {
                const auto rec = measure(s, pair, j);
                if (rec.is_null()) {
                    EXPECT_THROW(analytic_bloch(secret, t.theta, pair, j), std::domain_error);
                    continue;
                }
                const auto got = bloch_vector(*rec.bob_raw);
                const auto want = analytic_bloch(secret, t.theta, pair, j);
                EXPECT_NEAR(got.s1, want.s1, 1e-9);
                EXPECT_NEAR(got.s2, want.s2, 1e-9);
                EXPECT_NEAR(got.s3, want.s3, 1e-9);
            }
        }
    }
}

TEST(analytic_fidelities, reference_values) {
    EXPECT_NEAR(analytic_fidelities(SecretState(kAlpha, 0), 1.5, MeasurementPair::Pair23).favg_sq, 0.99446, 5e-5);
    EXPECT_NEAR(
        analytic_fidelities(SecretState(kAlpha, 0.5), std::numbers::pi / 4, MeasurementPair::Pair23).favg_sq,
        0.66084, 5e-5);
    EXPECT_NEAR(analytic_fidelities(SecretState(kAlpha, 0), 0.9, MeasurementPair::Pair05).favg_sq, 0.683556, 5e-6);
    EXPECT_NEAR(
        analytic_fidelities(SecretState(kAlpha, 1.5), std::numbers::pi / 3, MeasurementPair::Pair05).favg_sq,
        0.801666, 5e-6);
}

TEST(analytic_fidelities, equal_circuit_reports) {
    for (const auto &t : oracle_grid()) {
        const SecretState secret(t.alpha, t.phi);
        for (MeasurementPair pair : kAllPairs) {
            const auto a = analytic_fidelities(secret, t.theta, pair);
            const auto c = circuit_fidelities(secret, t.theta, pair);
            EXPECT_EQ(a.source, ReportSource::Analytic);
            EXPECT_EQ(c.source, ReportSource::Circuit);
            expect_reports_near(a, c, 1e-9, fmt::format("theta={} pair={}", t.theta, to_string(pair)));
        }
    }
}

TEST(circuit_fidelities, pair_23_and_14_are_identical) {
    for (const auto &t : oracle_grid()) {
        const SecretState secret(t.alpha, t.phi);
        expect_reports_near(circuit_fidelities(secret, t.theta, MeasurementPair::Pair23),
                            circuit_fidelities(secret, t.theta, MeasurementPair::Pair14), 1e-10,
                            fmt::format("theta={}", t.theta));
    }
}

TEST(circuit_fidelities, endpoints) {
    const SecretState secret(kAlpha, 0);
    for (MeasurementPair pair : kAllPairs) {
        EXPECT_NEAR(circuit_fidelities(secret, kHalfPi, pair).favg_sq, 1.0, 1e-9);
    }
    EXPECT_NEAR(circuit_fidelities(secret, 0, MeasurementPair::Pair05).favg_sq, 1.0, 1e-9);
    EXPECT_NEAR(circuit_fidelities(secret, 0, MeasurementPair::Pair23).favg_sq, 0.5, 1e-9);
}

TEST(fidelity_report, zero_probability_outcomes_are_undefined) {
    const auto r = analytic_fidelities(SecretState(kAlpha, 0), 0, MeasurementPair::Pair23);
    EXPECT_TRUE(r.fsq_raw[0].has_value());
    for (int j = 1; j < 4; ++j) {
        EXPECT_FALSE(r.fsq_raw[j].has_value());
        EXPECT_FALSE(r.fsq_corrected[j].has_value());
        EXPECT_EQ(r.probability[j], 0.0);
    }
}

TEST(fidelity_report, pair_23_is_monotone_in_theta) {
    const SecretState secret(kAlpha, 0);
    double previous = 0;
    for (int i = 0; i < 100; ++i) {
        const double theta = kHalfPi * (i / 99.0);
        const double f = analytic_fidelities(secret, theta, MeasurementPair::Pair23).favg_sq;
        if (i == 0) {
            EXPECT_NEAR(f, 0.5, 1e-9);
        } else {
            EXPECT_GE(f, previous - 1e-12) << "theta=" << theta;
        }
        previous = f;
    }
    EXPECT_NEAR(previous, 1.0, 1e-9);
}

TEST(fidelity_report, pair_05_dips_in_the_middle) {
    const SecretState secret(kAlpha, 0);
    double lowest = 1;
    for (int i = 0; i < 100; ++i) {
        lowest = std::min(
            lowest, analytic_fidelities(secret, kHalfPi * (i / 99.0), MeasurementPair::Pair05).favg_sq);
    }
    EXPECT_LT(lowest, 0.70);
}

TEST(fidelity_report, period_pi_in_phi) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 30; ++trial) {
        const double theta = u(rng) * kHalfPi;
        const double alpha = u(rng);
        const double phi = u(rng) * 2 * std::numbers::pi;
        for (MeasurementPair pair : kAllPairs) {
            EXPECT_NEAR(analytic_fidelities(SecretState(alpha, phi), theta, pair).favg_sq,
                        analytic_fidelities(SecretState(alpha, phi + std::numbers::pi), theta, pair).favg_sq, 1e-12);
        }
    }
}

TEST(fidelity_report, values_in_unit_interval) {
    for (const auto &t : oracle_grid()) {
        for (MeasurementPair pair : kAllPairs) {
            const auto r = analytic_fidelities(SecretState(t.alpha, t.phi), t.theta, pair);
            EXPECT_GE(r.favg_sq, -1e-12);
            EXPECT_LE(r.favg_sq, 1 + 1e-12);
            for (int j = 0; j < 4; ++j) {
                if (r.fsq_corrected[j]) {
                    EXPECT_GE(*r.fsq_corrected[j], -1e-12);
                    EXPECT_LE(*r.fsq_corrected[j], 1 + 1e-12);
                }
            }
        }
    }
}

TEST(shot_experiment, deterministic_for_fixed_seed) {
    const SecretState secret(kAlpha, 0);
    const auto a = shot_experiment(secret, 1.0, MeasurementPair::Pair05, 1000, 7);
    const auto b = shot_experiment(secret, 1.0, MeasurementPair::Pair05, 1000, 7);
    EXPECT_EQ(to_csv_row(a), to_csv_row(b));
    EXPECT_EQ(a.probability, b.probability);
    EXPECT_EQ(a.favg_sq, b.favg_sq);
    EXPECT_EQ(a.source, ReportSource::Shots);
    EXPECT_EQ(a.shots, 1000);
    EXPECT_EQ(a.seed, 7u);
    const auto c = shot_experiment(secret, 1.0, MeasurementPair::Pair05, 1000, 8);
    EXPECT_NE(a.probability, c.probability);
}

TEST(shot_experiment, frequencies_converge) {
    const SecretState secret(kAlpha, 0.3);
    for (MeasurementPair pair : kAllPairs) {
        const auto exact = analytic_probabilities(0.9, pair);
        const auto r = shot_experiment(secret, 0.9, pair, 1'000'000, 99);
        double total = 0;
        for (int j = 0; j < 4; ++j) {
            EXPECT_NEAR(r.probability[j], exact[j], 0.005);
            total += r.probability[j];
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(shot_experiment, rejects_nonpositive_shots) {
    EXPECT_THROW(shot_experiment(SecretState(kAlpha, 0), 1.0, MeasurementPair::Pair23, 0, 1), std::invalid_argument);
}

TEST(standard_teleportation, every_branch_recovers_the_secret) {
    const SecretState secret(kAlpha, 0.5);
    const auto branches = standard_teleportation(secret);
    ASSERT_EQ(branches.size(), 4u);
    for (const auto &b : branches) {
        EXPECT_NEAR(b.probability, 0.25, 1e-12);
        EXPECT_NEAR(fidelity(secret.density(), DensityMatrix::from_pure(b.bob_corrected)), 1.0, 1e-12);
    }
    for (const auto &b : standard_teleportation(SecretState(1, 0))) {
        EXPECT_NEAR(std::abs(b.bob_corrected[0]), 1.0, 1e-12);
    }
}

TEST(serialization, csv_and_json_shapes) {
    const auto r = analytic_fidelities(SecretState(kAlpha, 0), 0, MeasurementPair::Pair23);
    EXPECT_EQ(csv_header(), "theta,alpha,phi,pair,source,p0,p1,p2,p3,fsq0,fsq1,fsq2,fsq3,favg_sq,shots,seed");
    const std::string row = to_csv_row(r);
    EXPECT_EQ(row, "0.000000,0.577350,0.000000,23,ANALYTIC,1.000000,0.000000,0.000000,0.000000,"
                   "0.500000,nan,nan,nan,0.500000,,");
    const auto j = to_json(r);
    EXPECT_EQ(j.at("pair"), "23");
    EXPECT_EQ(j.at("source"), "ANALYTIC");
    EXPECT_TRUE(j.at("fsq1").is_null());
    EXPECT_EQ(format_number(-0.0), "0.000000");
    EXPECT_EQ(format_number(std::nullopt), "nan");
}
