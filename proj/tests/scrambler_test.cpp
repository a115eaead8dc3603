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

#include <gtest/gtest.h>

#include "scrteleport/reference.h"

using namespace scrteleport;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

const char *const kSitePaulis[] = {"XII", "YII", "ZII", "IXI", "IYI", "IZI", "IIX", "IIY", "IIZ"};

double max_entry(const Matrix &m) {
    return m.cwiseAbs().maxCoeff();
}

}  // namespace

TEST(pauli_string, parse_and_print) {
    const auto p = PauliString::parse("XZ_Y");
    EXPECT_EQ(p.str(), "XZIY");
    EXPECT_EQ(p.weight(), 3u);
    EXPECT_EQ(p.size(), 4u);
    EXPECT_THROW(PauliString::parse("XQ"), std::invalid_argument);
    EXPECT_THROW(PauliString::parse(""), std::invalid_argument);
}

TEST(pauli_string, index_order) {
    EXPECT_EQ(PauliString::from_index(3, 0).str(), "III");
    EXPECT_EQ(PauliString::from_index(3, 1).str(), "IIX");
    EXPECT_EQ(PauliString::from_index(3, 63).str(), "ZZZ");
    EXPECT_EQ(PauliString::from_index(2, 6).str(), "XY");
    EXPECT_THROW(PauliString::from_index(1, 4), std::invalid_argument);
}

TEST(pauli_string, matrix_is_kronecker_product) {
    const Matrix xz = PauliString::parse("XZ").matrix();
    Matrix expected(4, 4);
    expected << 0, 0, 1, 0,  //
        0, 0, 0, -1,         //
        1, 0, 0, 0,          //
        0, -1, 0, 0;
    EXPECT_EQ(max_entry(xz - expected), 0.0);
}

TEST(pauli_expansion, reconstructs_operator) {
    Matrix op(4, 4);
    op << 1, Complex(0, 2), 0, 3,  //
        0, 1, 5, 0,               //
        Complex(1, -1), 0, 2, 0,  //
        0, 0, 0, -7;
    const auto e = PauliExpansion::of_operator(op);
    EXPECT_LT(max_entry(e.reconstruct() - op), 1e-12);
    EXPECT_THROW(PauliExpansion::of_operator(Matrix::Identity(3, 3)), std::invalid_argument);
}

TEST(scrambler_params, range) {
    EXPECT_NO_THROW(ScramblerParams{0.0});
    EXPECT_NO_THROW(ScramblerParams{kHalfPi});
    EXPECT_THROW(ScramblerParams{-1e-9}, std::invalid_argument);
    EXPECT_THROW(ScramblerParams{1.6}, std::invalid_argument);
    EXPECT_THROW(ScramblerParams{std::nan("")}, std::invalid_argument);
}

TEST(partial_scrambler, unitary_over_range) {
    for (int i = 0; i < 100; ++i) {
        const double theta = kHalfPi * (i / 99.0);
        const Matrix u = partial_scrambler(ScramblerParams(theta)).matrix();
        EXPECT_LT(max_entry(u.adjoint() * u - Matrix::Identity(8, 8)), 1e-12) << "theta=" << theta;
    }
}

TEST(partial_scrambler, endpoints) {
    EXPECT_LT(max_entry(partial_scrambler(ScramblerParams(0)).matrix() - Matrix::Identity(8, 8)), 1e-12);
    EXPECT_LT(max_entry(partial_scrambler(ScramblerParams(kHalfPi)).matrix() - max_scrambler().matrix()), 1e-12);
}

TEST(partial_scrambler, symmetric_under_outer_swap) {
    // U commutes with SWAP of qubits 0 and 2, which makes the mirrored and
    // direct wirings of U* equivalent.
    const Matrix s = [] {
        Matrix m = Matrix::Zero(8, 8);
        for (int i = 0; i < 8; ++i) {
            const int j = ((i & 1) << 2) | (i & 2) | ((i >> 2) & 1);
            m(j, i) = 1;
        }
        return m;
    }();
    for (double theta : {0.2, 0.9, 1.4}) {
        const Matrix u = partial_scrambler(ScramblerParams(theta)).matrix();
        EXPECT_LT(max_entry(s * u * s - u), 1e-14);
    }
}

TEST(max_scrambler, single_site_paulis_map_to_weight_three) {
    const auto u = max_scrambler();
    for (const auto &[p, image] : reference::max_scrambler_images()) {
        const auto e = conjugate_pauli(u, p);
        ASSERT_EQ(e.terms().size(), 1u) << p.str();
        EXPECT_EQ(e.terms().begin()->first, image) << p.str();
        EXPECT_LT(std::abs(e.coefficient(image) - Complex(-1)), 1e-12) << p.str();
        EXPECT_EQ(image.weight(), 3u);
    }
}

TEST(partial_scrambler, matches_closed_form_expansions) {
    for (double theta : {0.1, 0.3, 0.7, 1.2, kHalfPi}) {
        const auto u = partial_scrambler(ScramblerParams(theta));
        for (const char *word : kSitePaulis) {
            const auto e = conjugate_pauli(u, PauliString::parse(word));
            const auto expected = reference::partial_scrambler_image(word, theta);
            for (const auto &[q, c] : e.terms()) {
                const auto it = expected.find(q);
                const double want = it == expected.end() ? 0.0 : it->second;
                EXPECT_NEAR(c.real(), want, 1e-10) << word << " -> " << q.str() << " theta=" << theta;
                EXPECT_NEAR(c.imag(), 0.0, 1e-10);
            }
            for (const auto &[q, c] : expected) {
                if (std::abs(c) >= PauliExpansion::kZeroCoefficient) {
                    EXPECT_NEAR(e.coefficient(q).real(), c, 1e-10) << word << " -> " << q.str();
                }
            }
        }
    }
}

TEST(partial_scrambler, coefficient_weights_sum_to_one) {
    for (double theta : {0.0, 0.25, 0.8, 1.3, kHalfPi}) {
        const auto u = partial_scrambler(ScramblerParams(theta));
        for (const char *word : kSitePaulis) {
            EXPECT_NEAR(conjugate_pauli(u, PauliString::parse(word)).total_weight(), 1.0, 1e-10);
        }
    }
}

TEST(scrambling_report, x_on_first_site_at_0_7_has_ten_terms) {
    const auto r = scrambling_report(0.7);
    ASSERT_EQ(r.rows.size(), 9u);
    EXPECT_EQ(r.rows[0].pauli.str(), "XII");
    EXPECT_EQ(r.rows[0].expansion.terms().size(), 10u);
}

TEST(scrambling_report, maximal_endpoint_rows_are_single_term) {
    const auto r = scrambling_report(kHalfPi);
    for (const auto &row : r.rows) {
        EXPECT_EQ(row.expansion.terms().size(), 1u) << row.pauli.str();
        EXPECT_NEAR(row.delocalization, 1.0, 1e-12);
    }
}

TEST(scrambling_report, identity_endpoint_has_no_delocalization) {
    const auto r = scrambling_report(0.0);
    ASSERT_EQ(r.rows.size(), 9u);
    for (const auto &row : r.rows) {
        EXPECT_EQ(row.expansion.terms().size(), 1u);
        EXPECT_NEAR(row.delocalization, 0.0, 1e-12);
    }
}

TEST(scrambling_report, delocalization_grows_with_theta) {
    double previous = -1;
    for (int i = 0; i <= 20; ++i) {
        const double theta = kHalfPi * (i / 20.0);
        const double d = scrambling_report(theta).rows[0].delocalization;
        EXPECT_GE(d, previous - 1e-12);
        previous = d;
    }
}

TEST(scrambling_report, json_shape) {
    const auto j = to_json(scrambling_report(kHalfPi));
    ASSERT_EQ(j.at("rows").size(), 9u);
    const auto &row = j.at("rows").at(0);
    EXPECT_EQ(row.at("pauli"), "XII");
    ASSERT_EQ(row.at("terms").size(), 1u);
    EXPECT_EQ(row.at("terms").at(0).at("string"), "XZZ");
    EXPECT_NEAR(row.at("terms").at(0).at("re").get<double>(), -1.0, 1e-12);
    EXPECT_NEAR(row.at("delocalization").get<double>(), 1.0, 1e-12);
}
