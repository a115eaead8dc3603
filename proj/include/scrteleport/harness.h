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

#ifndef SCRTELEPORT_HARNESS_H
#define SCRTELEPORT_HARNESS_H

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "scrteleport/teleport.h"

namespace scrteleport {

enum ExitCode : int {
    kExitOk = 0,
    kExitInvariantFailure = 1,
    kExitUsage = 2,
    kExitIo = 3,
};

/// Bad user input (maps to kExitUsage).
class UsageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// File system failure (maps to kExitIo).
class IoError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Runs fn(0..count-1) on up to `jobs` threads and returns results by index.
template <typename T>
std::vector<T> parallel_map(std::size_t count, unsigned jobs, const std::function<T(std::size_t)> &fn);

unsigned default_jobs();

/// Parses a real number or a multiple of pi: "0.5", "pi", "pi/2", "2pi/3", "3*pi/4".
double parse_angle(const std::string &text);

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepVariable { Theta, Phi };

struct SweepSpec {
    SweepVariable variable = SweepVariable::Theta;
    double start = 0;
    double stop = 0;
    int points = 2;
    double alpha = 0;
    /// Fixed θ for φ sweeps, fixed φ for θ sweeps.
    double theta = 0;
    double phi = 0;
    MeasurementPair pair = MeasurementPair::Pair23;
    std::optional<std::int64_t> shots;
    std::optional<std::uint64_t> seed;

    /// Throws UsageError on start >= stop, points < 2, or out-of-range fixed values.
    void validate() const;
    /// Evenly spaced grid, both ends included.
    std::vector<double> grid() const;
};

struct SweepRow {
    FidelityReport analytic;
    std::optional<FidelityReport> shots;
};

/// Shot experiments at grid point i use seed + i.
std::vector<SweepRow> run_sweep(const SweepSpec &spec, unsigned jobs);
std::string sweep_csv_header(bool with_shots);
void write_sweep_csv(std::ostream &out, const std::vector<SweepRow> &rows);

// ---------------------------------------------------------------------------
// Table reproduction

struct TableSpec {
    std::string name;  // "table4" ...
    SweepVariable variable;
    std::vector<double> keys;
    double alpha;
    double fixed;  // θ for φ tables, φ for θ tables
    MeasurementPair pair;
};

/// The four fixed sweeps written by `tables` (table4 .. table7).
std::vector<TableSpec> reference_tables();
/// (key, F²_avg) rows of one table.
std::vector<std::pair<double, double>> evaluate_table(const TableSpec &table);
/// Writes table4.csv .. table7.csv (key,theory) and endpoints.csv into `dir`.
/// Throws IoError.
std::vector<std::filesystem::path> write_tables(const std::filesystem::path &dir, unsigned jobs);

// ---------------------------------------------------------------------------
// CSV and the error metric

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of `name` in the header, or nullopt.
    std::optional<std::size_t> column(const std::string &name) const;
};

CsvTable parse_csv(std::istream &in);
CsvTable read_csv(const std::filesystem::path &path);

struct ErrorSummary {
    std::size_t n = 0;
    /// mean(theory - experiment) * 100
    double signed_mean_pct = 0;
    /// mean|theory - experiment| * 100
    double mean_abs_pct = 0;
};

/// Raised when the two tables do not share the same key set.
class KeyMismatchError : public UsageError {
   public:
    KeyMismatchError(std::vector<std::string> only_theory, std::vector<std::string> only_experiment);
    std::vector<std::string> only_theory;
    std::vector<std::string> only_experiment;
};

struct ErrorColumns {
    /// Empty: "key" if present, else the first of theta/phi that varies across rows.
    std::string key;
    /// Empty: "theory" if present, else "favg_sq".
    std::string theory;
    /// Empty: "favg_sq" if present, else "qiskit".
    std::string experiment;
};

ErrorSummary compute_error(const CsvTable &theory, const CsvTable &experiment, const ErrorColumns &columns = {});

// ---------------------------------------------------------------------------
// Verification

struct VerifyOptions {
    std::vector<double> theta_grid;
    /// Negates row 0 of the maximal scrambler before checking it.
    bool inject_fault = false;
    /// (θ, α, φ) triples for the oracle and pair-equivalence checks.
    std::size_t random_triples = 50;
    std::uint64_t seed = 2023;
};

struct CheckResult {
    std::string name;
    double max_deviation = 0;
    double tolerance = 0;
    bool passed = true;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool passed() const;
};

std::vector<double> default_verify_grid();
VerifyReport run_verify(const VerifyOptions &options);
nlohmann::json to_json(const VerifyReport &report);

// ---------------------------------------------------------------------------

/// Full command line entry point: `scrteleport <command> [flags]`.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

// ---------------------------------------------------------------------------

template <typename T>
std::vector<T> parallel_map(std::size_t count, unsigned jobs, const std::function<T(std::size_t)> &fn) {
    std::vector<std::optional<T>> slots(count);
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(jobs == 0 ? 1 : jobs, count));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        slots[i].emplace(fn(i));
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) {
                            failure = std::current_exception();
                        }
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    std::vector<T> out;
    out.reserve(count);
    for (auto &slot : slots) {
        out.push_back(std::move(*slot));
    }
    return out;
}

}  // namespace scrteleport

#endif
