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

#include "scrteleport/reference.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace scrteleport::reference {

std::vector<std::pair<PauliString, PauliString>> max_scrambler_images() {
    const std::vector<std::pair<const char *, const char *>> table{
        {"XII", "XZZ"}, {"IXI", "ZXZ"}, {"IIX", "ZZX"},  //
        {"YII", "YXX"}, {"IYI", "XYX"}, {"IIY", "XXY"},  //
        {"ZII", "ZYY"}, {"IZI", "YZY"}, {"IIZ", "YYZ"},
    };
    std::vector<std::pair<PauliString, PauliString>> out;
    for (const auto &[in, image] : table) {
        out.emplace_back(PauliString::parse(in), PauliString::parse(image));
    }
    return out;
}

namespace {

class TermSum {
   public:
    void add(double coeff, std::initializer_list<const char *> words) {
        for (const char *w : words) {
            terms_[PauliString::parse(w)] += coeff;
        }
    }
    std::map<PauliString, double> take() {
        std::map<PauliString, double> out;
        for (auto &[p, c] : terms_) {
            if (std::abs(c) > 0) {
                out.emplace(p, c);
            }
        }
        return out;
    }

   private:
    std::map<PauliString, double> terms_;
};

}  // namespace

std::map<PauliString, double> partial_scrambler_image(std::string_view pauli, double theta) {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double s2c2 = s * s * c * c;
    const double s3c = s * s * s * c;
    const double sc3 = s * c * c * c;
    TermSum t;
    if (pauli == "XII") {
        t.add(-s3c, {"IIY", "IYI", "YYY"});
        t.add(s2c2, {"ZXZ", "ZZX"});
        t.add(-s2c2, {"XXX"});
        t.add(sc3, {"YII"});
        t.add(-std::pow(s, 4), {"XZZ"});
        t.add(s * c, {"YXX"});
        t.add(c * c, {"XII"});
    } else if (pauli == "IXI") {
        t.add(-s3c, {"IIY", "YII", "YYY"});
        t.add(s2c2, {"XZZ", "ZZX"});
        t.add(-s2c2, {"XXX"});
        t.add(sc3, {"IYI"});
        t.add(-std::pow(s, 4), {"ZXZ"});
        t.add(s * c, {"XYX"});
        t.add(c * c, {"IXI"});
    } else if (pauli == "IIX") {
        t.add(-s3c, {"IYI", "YII", "YYY"});
        t.add(s2c2, {"XZZ", "ZXZ"});
        t.add(-s2c2, {"XXX"});
        t.add(sc3, {"IIY"});
        t.add(-std::pow(s, 4), {"ZZX"});
        t.add(s * c, {"XXY"});
        t.add(c * c, {"IIX"});
    } else if (pauli == "YII") {
        t.add(-s2c2, {"IIY", "IYI", "YYY"});
        t.add(sc3, {"ZXZ", "ZZX"});
        t.add(-sc3, {"XXX"});
        t.add(-s3c, {"XZZ"});
        t.add(std::pow(c, 4), {"YII"});
        t.add(-s * c, {"XII"});
        t.add(-s * s, {"YXX"});
    } else if (pauli == "IYI") {
        t.add(-s2c2, {"IIY", "YII", "YYY"});
        t.add(sc3, {"XZZ", "ZZX"});
        t.add(-sc3, {"XXX"});
        t.add(-s3c, {"ZXZ"});
        t.add(std::pow(c, 4), {"IYI"});
        t.add(-s * c, {"IXI"});
        t.add(-s * s, {"XYX"});
    } else if (pauli == "IIY") {
        t.add(-s2c2, {"IYI", "YII", "YYY"});
        t.add(sc3, {"XZZ", "ZXZ"});
        t.add(-sc3, {"XXX"});
        t.add(-s3c, {"ZZX"});
        t.add(std::pow(c, 4), {"IIY"});
        t.add(-s * c, {"IIX"});
        t.add(-s * s, {"XXY"});
    } else if (pauli == "ZII") {
        t.add(c * c, {"ZII"});
        t.add(-s * s, {"ZYY"});
        t.add(-s * c, {"YXZ", "YZX"});
    } else if (pauli == "IZI") {
        t.add(c * c, {"IZI"});
        t.add(-s * s, {"YZY"});
        t.add(-s * c, {"XYZ", "ZYX"});
    } else if (pauli == "IIZ") {
        t.add(c * c, {"IIZ"});
        t.add(-s * s, {"YYZ"});
        t.add(-s * c, {"XZY", "ZXY"});
    } else {
        throw std::invalid_argument("partial_scrambler_image: not a single-site Pauli: " + std::string(pauli));
    }
    return t.take();
}

std::vector<Complex> bell_product(int i, int j, int k, std::array<Complex, 2> bob) {
    const StateVector b05 = bell_state(i);
    const StateVector b14 = bell_state(j);
    const StateVector b23 = bell_state(k);
    std::vector<Complex> out(std::size_t{1} << kProtocolQubits);
    for (std::size_t idx = 0; idx < out.size(); ++idx) {
        auto bit = [idx](std::size_t q) { return (idx >> (kProtocolQubits - 1 - q)) & 1; };
        out[idx] = b05[2 * bit(0) + bit(5)] * b14[2 * bit(1) + bit(4)] * b23[2 * bit(2) + bit(3)] * bob[bit(6)];
    }
    return out;
}

StateVector protocol_state_expansion(const SecretState &secret, double theta) {
    const Complex a = secret.alpha;
    const Complex b = secret.beta();
    const Complex i(0, 1);
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double s2_2t = std::pow(std::sin(2 * theta), 2);

    // Bob's four conditional states.
    const std::array<Complex, 2> psi{a, b};
    const std::array<Complex, 2> z_psi{a, -b};
    const std::array<Complex, 2> x_psi{b, a};
    const std::array<Complex, 2> xz_psi{-b, a};

    std::vector<Complex> acc(std::size_t{1} << kProtocolQubits);
    auto add = [&](Complex coeff, const char *ijk, const std::array<Complex, 2> &bob) {
        const auto term = bell_product(ijk[0] - '0', ijk[1] - '0', ijk[2] - '0', bob);
        for (std::size_t n = 0; n < acc.size(); ++n) {
            acc[n] += coeff / 8.0 * term[n];
        }
    };

    add(4, "000", psi);

    for (const char *w : {"112", "121", "233", "323", "332"}) {
        add(s2_2t, w, z_psi);
    }
    add(4 * c * c, "200", z_psi);
    add(-4 * std::pow(s, 4), "211", z_psi);
    for (const char *w : {"123", "132", "213", "231"}) {
        add(4.0 * i * std::pow(s, 3) * c, w, z_psi);
    }
    for (const char *w : {"312", "321"}) {
        add(-4.0 * i * s * std::pow(c, 3), w, z_psi);
    }

    add(4 * c * c, "100", x_psi);
    for (const char *w : {"111", "313", "331"}) {
        add(-s2_2t, w, x_psi);
    }
    add(4.0 * i * s * std::pow(c, 3), "311", x_psi);
    add(4 * std::pow(s, 4), "133", x_psi);
    for (const char *w : {"113", "131", "333"}) {
        add(-4.0 * i * std::pow(s, 3) * c, w, x_psi);
    }
    add(2.0 * i * std::sin(2 * theta), "300", x_psi);

    add(4 * std::pow(c, 4), "300", xz_psi);
    add(4.0 * i * s * std::pow(c, 3), "100", xz_psi);
    for (const char *w : {"212", "221"}) {
        add(-4.0 * i * s * std::pow(c, 3), w, xz_psi);
    }
    for (const char *w : {"001", "010"}) {
        add(-4.0 * i * std::pow(s, 3) * c, w, xz_psi);
    }
    add(4.0 * i * std::pow(s, 3) * c, "122", xz_psi);
    add(-4 * std::pow(s, 4), "322", xz_psi);
    for (const char *w : {"003", "030", "113", "131", "311"}) {
        add(-s2_2t, w, xz_psi);
    }
    for (const char *w : {"223", "232", "333"}) {
        add(s2_2t, w, xz_psi);
    }
    add(i * std::sin(4 * theta), "111", xz_psi);

    return StateVector::from_amplitudes(kProtocolQubits, std::move(acc));
}

}  // namespace scrteleport::reference
