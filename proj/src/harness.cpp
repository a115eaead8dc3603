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

#include "scrteleport/harness.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "scrteleport/reference.h"
#include "scrteleport/scrambler.h"

namespace scrteleport {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;
const double kDefaultAlpha = 1 / std::sqrt(3.0);

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::optional<double> parse_real(const std::string &text) {
    const std::string t = trim(text);
    if (t.empty()) {
        return std::nullopt;
    }
    try {
        std::size_t used = 0;
        const double v = std::stod(t, &used);
        if (used != t.size()) {
            return std::nullopt;
        }
        return v;
    } catch (const std::exception &) {
        return std::nullopt;
    }
}

std::vector<std::string> split(const std::string &text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep)) {
        out.push_back(cur);
    }
    if (!text.empty() && text.back() == sep) {
        out.emplace_back();
    }
    return out;
}

void check_theta(double theta, const char *what) {
    if (!(theta >= 0 && theta <= kHalfPi)) {
        throw UsageError(fmt::format("{} = {} is outside [0, pi/2]", what, theta));
    }
}

void check_alpha(double alpha) {
    if (!(alpha >= 0 && alpha <= 1)) {
        throw UsageError(fmt::format("alpha = {} is outside [0, 1]", alpha));
    }
}

}  // namespace

unsigned default_jobs() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

double parse_angle(const std::string &text) {
    if (auto v = parse_real(text)) {
        return *v;
    }
    static const std::regex kPiForm(R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)?)\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$)");
    std::smatch m;
    if (!std::regex_match(text, m, kPiForm)) {
        throw UsageError("not a number: '" + text + "'");
    }
    double factor = 1;
    const std::string lead = m[1].str();
    if (lead == "-") {
        factor = -1;
    } else if (!lead.empty() && lead != "+") {
        factor = std::stod(lead);
    }
    double divisor = 1;
    if (m[2].matched) {
        divisor = std::stod(m[2].str());
        if (divisor == 0) {
            throw UsageError("division by zero in '" + text + "'");
        }
    }
    return factor * std::numbers::pi / divisor;
}

// ---------------------------------------------------------------------------
// Sweeps

void SweepSpec::validate() const {
    if (!std::isfinite(start) || !std::isfinite(stop) || !(start < stop)) {
        throw UsageError(fmt::format("sweep range needs start < stop (got {} .. {})", start, stop));
    }
    if (points < 2) {
        throw UsageError(fmt::format("sweep needs at least 2 points (got {})", points));
    }
    check_alpha(alpha);
    if (variable == SweepVariable::Theta) {
        check_theta(start, "theta start");
        check_theta(stop, "theta stop");
        if (!std::isfinite(phi)) {
            throw UsageError("phi must be finite");
        }
    } else {
        check_theta(theta, "theta");
    }
    if (shots && *shots <= 0) {
        throw UsageError(fmt::format("shots must be positive (got {})", *shots));
    }
}

std::vector<double> SweepSpec::grid() const {
    std::vector<double> out(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        out[i] = start + (stop - start) * i / (points - 1);
    }
    out.back() = stop;
    return out;
}

std::vector<SweepRow> run_sweep(const SweepSpec &spec, unsigned jobs) {
    spec.validate();
    const auto grid = spec.grid();
    return parallel_map<SweepRow>(grid.size(), jobs, [&](std::size_t i) {
        const double theta = spec.variable == SweepVariable::Theta ? grid[i] : spec.theta;
        const double phi = spec.variable == SweepVariable::Phi ? grid[i] : spec.phi;
        const SecretState secret(spec.alpha, phi);
        SweepRow row{analytic_fidelities(secret, theta, spec.pair), std::nullopt};
        if (spec.shots) {
            row.shots = shot_experiment(secret, theta, spec.pair, *spec.shots, spec.seed.value_or(0) + i);
        }
        return row;
    });
}

std::string sweep_csv_header(bool with_shots) {
    std::string h = csv_header() + ",fsq_corr0,fsq_corr1,fsq_corr2,fsq_corr3";
    if (with_shots) {
        h += ",shot_p0,shot_p1,shot_p2,shot_p3,shot_favg_sq";
    }
    return h;
}

void write_sweep_csv(std::ostream &out, const std::vector<SweepRow> &rows) {
    const bool with_shots = !rows.empty() && rows.front().shots.has_value();
    out << sweep_csv_header(with_shots) << '\n';
    for (const auto &row : rows) {
        FidelityReport head = row.analytic;
        if (row.shots) {
            head.shots = row.shots->shots;
            head.seed = row.shots->seed;
        }
        std::string line = to_csv_row(head);
        for (const auto &f : row.analytic.fsq_corrected) {
            line += "," + format_number(f);
        }
        if (with_shots) {
            for (double p : row.shots->probability) {
                line += "," + format_number(p);
            }
            line += "," + format_number(row.shots->favg_sq);
        }
        out << line << '\n';
    }
}

// ---------------------------------------------------------------------------
// Table reproduction

std::vector<TableSpec> reference_tables() {
    const std::vector<double> thetas{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3, 1.4, 1.5};
    const std::vector<double> phis{0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5};
    return {
        {"table4", SweepVariable::Theta, thetas, kDefaultAlpha, 0.0, MeasurementPair::Pair23},
        {"table5", SweepVariable::Phi, phis, kDefaultAlpha, std::numbers::pi / 4, MeasurementPair::Pair23},
        {"table6", SweepVariable::Theta, thetas, kDefaultAlpha, 0.0, MeasurementPair::Pair05},
        {"table7", SweepVariable::Phi, phis, kDefaultAlpha, std::numbers::pi / 3, MeasurementPair::Pair05},
    };
}

std::vector<std::pair<double, double>> evaluate_table(const TableSpec &table) {
    std::vector<std::pair<double, double>> out;
    for (double key : table.keys) {
        const bool theta_key = table.variable == SweepVariable::Theta;
        const double theta = theta_key ? key : table.fixed;
        const double phi = theta_key ? table.fixed : key;
        out.emplace_back(key, analytic_fidelities(SecretState(table.alpha, phi), theta, table.pair).favg_sq);
    }
    return out;
}

namespace {

std::ofstream open_output(const std::filesystem::path &path) {
    std::ofstream f(path);
    if (!f) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    return f;
}

void finish_output(std::ofstream &f, const std::filesystem::path &path) {
    f.flush();
    if (!f) {
        throw IoError("write failed: " + path.string());
    }
}

}  // namespace

std::vector<std::filesystem::path> write_tables(const std::filesystem::path &dir, unsigned jobs) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create " + dir.string() + ": " + ec.message());
    }
    const auto tables = reference_tables();
    const auto values = parallel_map<std::vector<std::pair<double, double>>>(
        tables.size(), jobs, [&](std::size_t i) { return evaluate_table(tables[i]); });

    std::vector<std::filesystem::path> written;
    for (std::size_t t = 0; t < tables.size(); ++t) {
        const auto path = dir / (tables[t].name + ".csv");
        auto f = open_output(path);
        f << "key,theory\n";
        for (const auto &[key, value] : values[t]) {
            f << fmt::format("{},{}\n", key, format_number(value));
        }
        finish_output(f, path);
        written.push_back(path);
    }

    const auto path = dir / "endpoints.csv";
    auto f = open_output(path);
    f << "pair,theta,favg_sq\n";
    const SecretState secret(kDefaultAlpha, 0);
    for (MeasurementPair pair : kAllPairs) {
        for (double theta : {0.0, kHalfPi}) {
            f << fmt::format("{},{},{}\n", to_string(pair), format_number(theta),
                             format_number(analytic_fidelities(secret, theta, pair).favg_sq));
        }
    }
    finish_output(f, path);
    written.push_back(path);
    return written;
}

// ---------------------------------------------------------------------------
// CSV and the error metric

std::optional<std::size_t> CsvTable::column(const std::string &name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    return std::nullopt;
}

CsvTable parse_csv(std::istream &in) {
    CsvTable t;
    std::string line;
    bool have_header = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        auto cells = split(line, ',');
        for (auto &c : cells) {
            c = trim(c);
        }
        if (!have_header) {
            t.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != t.header.size()) {
            throw UsageError(fmt::format("line {}: {} fields, header has {}", line_no, cells.size(), t.header.size()));
        }
        t.rows.push_back(std::move(cells));
    }
    if (!have_header) {
        throw UsageError("empty CSV input");
    }
    return t;
}

CsvTable read_csv(const std::filesystem::path &path) {
    std::ifstream f(path);
    if (!f) {
        throw IoError("cannot open " + path.string());
    }
    try {
        return parse_csv(f);
    } catch (const UsageError &e) {
        throw UsageError(path.string() + ": " + e.what());
    }
}

KeyMismatchError::KeyMismatchError(std::vector<std::string> only_theory_keys,
                                   std::vector<std::string> only_experiment_keys)
    : UsageError([&] {
          std::string msg = "row keys differ;";
          auto list = [&](const char *label, const std::vector<std::string> &keys) {
              if (keys.empty()) {
                  return;
              }
              msg += fmt::format(" only in {}:", label);
              for (const auto &k : keys) {
                  msg += " " + k;
              }
              msg += ";";
          };
          list("theory", only_theory_keys);
          list("experiment", only_experiment_keys);
          msg.pop_back();
          return msg;
      }()),
      only_theory(std::move(only_theory_keys)),
      only_experiment(std::move(only_experiment_keys)) {}

namespace {

std::string resolve_key_column(const CsvTable &t, const std::string &requested) {
    if (!requested.empty()) {
        return requested;
    }
    if (t.column("key")) {
        return "key";
    }
    for (const char *candidate : {"theta", "phi"}) {
        if (auto c = t.column(candidate)) {
            std::set<std::string> distinct;
            for (const auto &row : t.rows) {
                distinct.insert(row[*c]);
            }
            if (distinct.size() > 1 || t.rows.size() == 1) {
                return candidate;
            }
        }
    }
    throw UsageError("cannot find a key column (key, theta or phi)");
}

std::string resolve_column(const CsvTable &t, const std::string &requested, std::initializer_list<const char *> fallbacks,
                           const char *role) {
    if (!requested.empty()) {
        return requested;
    }
    for (const char *c : fallbacks) {
        if (t.column(c)) {
            return c;
        }
    }
    throw UsageError(fmt::format("cannot find the {} column", role));
}

/// Numeric keys compare at the shared 6-decimal precision, so "0.1" matches "0.100000".
std::string normalize_key(const std::string &key) {
    if (auto v = parse_real(key)) {
        return format_number(*v);
    }
    return key;
}

std::map<std::string, double> keyed_values(const CsvTable &t, const std::string &key_col,
                                           const std::string &value_col, const char *label) {
    const auto k = t.column(key_col);
    const auto v = t.column(value_col);
    if (!k) {
        throw UsageError(fmt::format("{} table has no column '{}'", label, key_col));
    }
    if (!v) {
        throw UsageError(fmt::format("{} table has no column '{}'", label, value_col));
    }
    std::map<std::string, double> out;
    for (const auto &row : t.rows) {
        const auto value = parse_real(row[*v]);
        if (!value || !std::isfinite(*value)) {
            throw UsageError(fmt::format("{} table: '{}' is not a number", label, row[*v]));
        }
        if (!out.emplace(normalize_key(row[*k]), *value).second) {
            throw UsageError(fmt::format("{} table: duplicate key '{}'", label, row[*k]));
        }
    }
    return out;
}

}  // namespace

ErrorSummary compute_error(const CsvTable &theory, const CsvTable &experiment, const ErrorColumns &columns) {
    const std::string theory_key = resolve_key_column(theory, columns.key);
    const std::string experiment_key = resolve_key_column(experiment, columns.key);
    const std::string theory_col = resolve_column(theory, columns.theory, {"theory", "favg_sq"}, "theory");
    const std::string experiment_col =
        resolve_column(experiment, columns.experiment, {"favg_sq", "qiskit"}, "experiment");

    const auto th = keyed_values(theory, theory_key, theory_col, "theory");
    const auto ex = keyed_values(experiment, experiment_key, experiment_col, "experiment");

    std::vector<std::string> only_theory;
    std::vector<std::string> only_experiment;
    for (const auto &[k, _] : th) {
        if (!ex.contains(k)) {
            only_theory.push_back(k);
        }
    }
    for (const auto &[k, _] : ex) {
        if (!th.contains(k)) {
            only_experiment.push_back(k);
        }
    }
    if (!only_theory.empty() || !only_experiment.empty()) {
        throw KeyMismatchError(std::move(only_theory), std::move(only_experiment));
    }
    if (th.empty()) {
        throw UsageError("no rows to compare");
    }

    ErrorSummary s;
    s.n = th.size();
    double sum = 0;
    double sum_abs = 0;
    for (const auto &[k, t] : th) {
        const double d = t - ex.at(k);
        sum += d;
        sum_abs += std::abs(d);
    }
    s.signed_mean_pct = sum / static_cast<double>(s.n) * 100;
    s.mean_abs_pct = sum_abs / static_cast<double>(s.n) * 100;
    return s;
}

// ---------------------------------------------------------------------------
// Verification

bool VerifyReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult &c) { return c.passed; });
}

std::vector<double> default_verify_grid() {
    return {0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.2, 1.4, kHalfPi};
}

namespace {

class Check {
   public:
    Check(std::string name, double tolerance) {
        result_.name = std::move(name);
        result_.tolerance = tolerance;
    }

    void observe(double deviation, const std::string &where) {
        if (std::isnan(deviation)) {
            deviation = std::numeric_limits<double>::infinity();
        }
        if (deviation > result_.max_deviation) {
            result_.max_deviation = deviation;
            result_.detail = where;
        }
    }

    CheckResult finish() {
        result_.passed = result_.max_deviation <= result_.tolerance;
        if (result_.passed) {
            result_.detail.clear();
        }
        return result_;
    }

   private:
    CheckResult result_;
};

double max_abs_diff(const Matrix &a, const Matrix &b) {
    return (a - b).cwiseAbs().maxCoeff();
}

double optional_diff(const std::optional<double> &a, const std::optional<double> &b) {
    if (a.has_value() != b.has_value()) {
        return std::numeric_limits<double>::infinity();
    }
    return a ? std::abs(*a - *b) : 0.0;
}

double report_diff(const FidelityReport &a, const FidelityReport &b) {
    double d = std::abs(a.favg_sq - b.favg_sq);
    for (int j = 0; j < 4; ++j) {
        d = std::max(d, std::abs(a.probability[j] - b.probability[j]));
        d = std::max(d, optional_diff(a.fsq_raw[j], b.fsq_raw[j]));
        d = std::max(d, optional_diff(a.fsq_corrected[j], b.fsq_corrected[j]));
    }
    return d;
}

double expansion_diff(const PauliExpansion &e, const std::map<PauliString, Complex> &expected) {
    double d = 0;
    for (const auto &[p, c] : e.terms()) {
        const auto it = expected.find(p);
        d = std::max(d, std::abs(c - (it == expected.end() ? Complex{} : it->second)));
    }
    for (const auto &[p, c] : expected) {
        d = std::max(d, std::abs(e.coefficient(p) - c));
    }
    return d;
}

struct Triple {
    double theta;
    double alpha;
    double phi;
};

std::vector<Triple> oracle_triples(const VerifyOptions &options) {
    std::vector<Triple> out;
    const std::vector<std::pair<double, double>> secrets{
        {kDefaultAlpha, 0.0}, {0.3, 1.1}, {0.9, 2.5}, {1.0, 0.0}, {0.0, 0.0}};
    for (double theta : options.theta_grid) {
        for (const auto &[alpha, phi] : secrets) {
            out.push_back({theta, alpha, phi});
        }
    }
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> u01(0, 1);
    for (std::size_t i = 0; i < options.random_triples; ++i) {
        const double theta = u01(rng) * kHalfPi;
        const double alpha = u01(rng);
        const double phi = u01(rng) * 2 * std::numbers::pi;
        out.push_back({theta, alpha, phi});
    }
    return out;
}

std::string where(const Triple &t) {
    return fmt::format("theta={} alpha={} phi={}", t.theta, t.alpha, t.phi);
}

}  // namespace

VerifyReport run_verify(const VerifyOptions &options) {
    for (double theta : options.theta_grid) {
        check_theta(theta, "theta");
    }
    VerifyReport report;
    const std::string site_paulis[] = {"XII", "YII", "ZII", "IXI", "IYI", "IZI", "IIX", "IIY", "IIZ"};

    Matrix faulted = max_scrambler().matrix();
    if (options.inject_fault) {
        faulted.row(0) *= -1;
    }
    const UnitaryGate max_under_test(faulted);

    {
        Check c("scrambler-unitarity", 1e-12);
        std::vector<double> thetas = options.theta_grid;
        for (int i = 0; i < 100; ++i) {
            thetas.push_back(kHalfPi * (i / 99.0));
        }
        for (double theta : thetas) {
            const Matrix u = partial_scrambler(ScramblerParams(theta)).matrix();
            c.observe(max_abs_diff(u.adjoint() * u, Matrix::Identity(8, 8)), fmt::format("theta={}", theta));
        }
        report.checks.push_back(c.finish());
    }
    {
        Check c("endpoint-identity", 1e-12);
        c.observe(max_abs_diff(partial_scrambler(ScramblerParams(0)).matrix(), Matrix::Identity(8, 8)), "theta=0");
        report.checks.push_back(c.finish());
    }
    {
        Check c("endpoint-max-scrambler", 1e-12);
        c.observe(max_abs_diff(partial_scrambler(ScramblerParams(kHalfPi)).matrix(), max_under_test.matrix()),
                  "theta=pi/2");
        report.checks.push_back(c.finish());
    }
    {
        Check c("eq3-pauli-conjugation", 1e-12);
        for (const auto &[p, image] : reference::max_scrambler_images()) {
            const auto e = conjugate_pauli(max_under_test, p);
            c.observe(expansion_diff(e, {{image, Complex(-1, 0)}}), p.str());
        }
        report.checks.push_back(c.finish());
    }
    {
        Check expansion("pauli-expansion-partial", 1e-10);
        Check weight("pauli-weight-normalization", 1e-10);
        for (double theta : options.theta_grid) {
            const UnitaryGate u = partial_scrambler(ScramblerParams(theta));
            for (const auto &word : site_paulis) {
                const auto e = conjugate_pauli(u, PauliString::parse(word));
                std::map<PauliString, Complex> expected;
                for (const auto &[q, v] : reference::partial_scrambler_image(word, theta)) {
                    expected.emplace(q, Complex(v, 0));
                }
                const auto label = fmt::format("theta={} {}", theta, word);
                expansion.observe(expansion_diff(e, expected), label);
                weight.observe(std::abs(e.total_weight() - 1), label);
            }
        }
        report.checks.push_back(expansion.finish());
        report.checks.push_back(weight.finish());
    }

    const auto triples = oracle_triples(options);
    {
        Check completeness("probability-completeness", 1e-12);
        Check oracle("oracle-equivalence", 1e-9);
        Check pairs("pair-equivalence", 1e-10);
        Check bloch("bloch-formulas", 1e-9);
        for (const auto &t : triples) {
            const SecretState secret(t.alpha, t.phi);
            const StateVector state = run_protocol(secret, t.theta);
            std::array<FidelityReport, 3> circuit;
            for (std::size_t k = 0; k < kAllPairs.size(); ++k) {
                const MeasurementPair pair = kAllPairs[k];
                const auto label = fmt::format("{} pair={}", where(t), to_string(pair));
                const FidelityReport a = analytic_fidelities(secret, t.theta, pair);
                circuit[k] = circuit_fidelities(secret, t.theta, pair);
                oracle.observe(report_diff(a, circuit[k]), label);

                double sum_a = 0;
                double sum_c = 0;
                for (int j = 0; j < 4; ++j) {
                    sum_a += a.probability[j];
                    sum_c += circuit[k].probability[j];
                    const MeasurementRecord rec = measure(state, pair, j);
                    if (rec.is_null()) {
                        continue;
                    }
                    const BlochVector got = bloch_vector(*rec.bob_raw);
                    const BlochVector want = analytic_bloch(secret, t.theta, pair, j);
                    const double d = std::max({std::abs(got.s1 - want.s1), std::abs(got.s2 - want.s2),
                                               std::abs(got.s3 - want.s3)});
                    bloch.observe(d, fmt::format("{} outcome={}", label, j));
                }
                completeness.observe(std::max(std::abs(sum_a - 1), std::abs(sum_c - 1)), label);
            }
            pairs.observe(report_diff(circuit[0], circuit[1]), where(t));
        }
        report.checks.push_back(completeness.finish());
        report.checks.push_back(oracle.finish());
        report.checks.push_back(pairs.finish());
        report.checks.push_back(bloch.finish());
    }
    {
        Check c("bell-expansion-amplitudes", 1e-10);
        for (const auto &t : triples) {
            const SecretState secret(t.alpha, t.phi);
            const StateVector sim = run_protocol(secret, t.theta);
            const StateVector ref = reference::protocol_state_expansion(secret, t.theta);
            double d = 0;
            for (std::size_t i = 0; i < sim.dim(); ++i) {
                d = std::max(d, std::abs(sim[i] - ref[i]));
            }
            c.observe(d, where(t));
        }
        report.checks.push_back(c.finish());
    }
    {
        Check c("perfect-teleportation", 1e-9);
        for (const auto &t : triples) {
            const SecretState secret(t.alpha, t.phi);
            for (MeasurementPair pair : kAllPairs) {
                c.observe(std::abs(circuit_fidelities(secret, kHalfPi, pair).favg_sq - 1),
                          fmt::format("alpha={} phi={} pair={}", t.alpha, t.phi, to_string(pair)));
            }
        }
        report.checks.push_back(c.finish());
    }
    return report;
}

nlohmann::json to_json(const VerifyReport &report) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto &c : report.checks) {
        nlohmann::json j{{"name", c.name},
                         {"max_deviation", c.max_deviation},
                         {"tolerance", c.tolerance},
                         {"passed", c.passed}};
        if (!c.detail.empty()) {
            j["worst_case"] = c.detail;
        }
        checks.push_back(std::move(j));
    }
    return {{"passed", report.passed()}, {"checks", std::move(checks)}};
}

}  // namespace scrteleport
