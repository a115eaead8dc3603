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

#include <cmath>
#include <fstream>
#include <ostream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "scrteleport/harness.h"
#include "scrteleport/scrambler.h"

namespace scrteleport {

namespace {

/// Reads `--config FILE` (or `--config=FILE`) and appends every key of the
/// JSON object as a flag, unless that flag is already on the command line.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
        } else if (args[i].starts_with("--config=")) {
            path = args[i].substr(9);
        }
    }
    if (!path) {
        return args;
    }
    std::ifstream f(*path);
    if (!f) {
        throw IoError("cannot open config file " + *path);
    }
    nlohmann::json cfg;
    try {
        f >> cfg;
    } catch (const nlohmann::json::exception &e) {
        throw UsageError(fmt::format("config file {}: {}", *path, e.what()));
    }
    if (!cfg.is_object()) {
        throw UsageError("config file must hold a JSON object");
    }
    auto on_command_line = [&](const std::string &flag) {
        for (const auto &a : args) {
            if (a == flag || a.starts_with(flag + "=")) {
                return true;
            }
        }
        return false;
    };
    auto scalar = [](const nlohmann::json &v) {
        if (v.is_string()) {
            return v.get<std::string>();
        }
        if (v.is_number_integer()) {
            return std::to_string(v.get<std::int64_t>());
        }
        if (v.is_number()) {
            return fmt::format("{}", v.get<double>());
        }
        throw UsageError("config values must be strings, numbers, booleans or arrays: " + v.dump());
    };
    for (const auto &[key, value] : cfg.items()) {
        if (key == "config") {
            continue;
        }
        const std::string flag = "--" + key;
        if (on_command_line(flag)) {
            continue;
        }
        if (value.is_boolean()) {
            if (value.get<bool>()) {
                args.push_back(flag);
            }
        } else if (value.is_array()) {
            std::string joined;
            for (const auto &item : value) {
                joined += (joined.empty() ? "" : ",") + scalar(item);
            }
            args.push_back(flag);
            args.push_back(joined);
        } else {
            args.push_back(flag);
            args.push_back(scalar(value));
        }
    }
    return args;
}

struct Range {
    double start;
    double stop;
};

/// "a:b" is a range, anything else a single value.
std::optional<Range> parse_range(const std::string &text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        return std::nullopt;
    }
    return Range{parse_angle(text.substr(0, colon)), parse_angle(text.substr(colon + 1))};
}

std::vector<double> parse_angle_list(const std::string &text) {
    std::vector<double> out;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        const auto end = std::min(text.find(',', begin), text.size());
        out.push_back(parse_angle(text.substr(begin, end - begin)));
        begin = end + 1;
    }
    return out;
}

std::string format_pauli_terms(const PauliExpansion &e) {
    std::string out;
    for (const auto &[p, c] : e.terms()) {
        std::string coeff = std::abs(c.imag()) > PauliExpansion::kZeroCoefficient
                                ? fmt::format("({:+.6f}{:+.6f}i)", c.real(), c.imag())
                                : fmt::format("{:+.6f}", c.real());
        out += fmt::format(" {} {}", coeff, p.str());
    }
    return out;
}

class OutputTarget {
   public:
    OutputTarget(const std::string &path, std::ostream &fallback) : path_(path), stream_(&fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) {
                throw IoError("cannot open " + path + " for writing");
            }
            stream_ = &file_;
        }
    }
    std::ostream &stream() { return *stream_; }
    void finish() {
        stream_->flush();
        if (!*stream_) {
            throw IoError("write failed: " + (path_.empty() ? std::string("stdout") : path_));
        }
    }

   private:
    std::string path_;
    std::ofstream file_;
    std::ostream *stream_;
};

}  // namespace

int run_cli(const std::vector<std::string> &raw_args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Scrambling-assisted teleportation simulator", "scrteleport"};
    app.require_subcommand(1, 1);

    std::string config;
    std::string theta_text;
    std::string phi_text = "0";
    std::string alpha_text;
    std::string pair_text = "23";
    int points = 15;
    std::optional<std::int64_t> shots;
    std::optional<std::uint64_t> seed;
    unsigned jobs = default_jobs();
    std::string out_path;
    bool json = false;
    bool inject_fault = false;
    std::string theory_path;
    std::string experiment_path;
    ErrorColumns columns;

    auto add_config = [&](CLI::App *cmd) {
        cmd->add_option("--config", config, "JSON file whose keys mirror the flags; explicit flags win");
    };
    auto add_jobs = [&](CLI::App *cmd) {
        cmd->add_option("--jobs", jobs, "Worker threads (default: available parallelism)")->check(CLI::PositiveNumber);
    };

    auto *verify = app.add_subcommand("verify", "Run the scrambler and oracle invariant suite");
    verify->add_option("--theta", theta_text, "Comma-separated theta grid (accepts pi/2 style values)");
    verify->add_option("--seed", seed, "Seed for the random (theta, alpha, phi) triples");
    verify->add_flag("--json", json, "Emit the JSON report (default)");
    verify->add_flag("--inject-fault", inject_fault)->group("");
    add_config(verify);

    auto *sweep = app.add_subcommand("sweep", "Sweep theta or phi and emit one CSV row per point");
    sweep->add_option("--theta", theta_text, "Scrambling angle, or START:STOP to sweep it")->required();
    sweep->add_option("--phi", phi_text, "Secret phase, or START:STOP to sweep it");
    sweep->add_option("--alpha", alpha_text, "Secret amplitude alpha (default 1/sqrt(3))");
    sweep->add_option("--pair", pair_text, "Measured pair: 23, 14 or 05");
    sweep->add_option("--points", points, "Grid points, ends included");
    sweep->add_option("--shots", shots, "Also run a sampled experiment with this many shots per point");
    sweep->add_option("--seed", seed, "Base seed; point i uses seed + i");
    sweep->add_option("--out", out_path, "Output file (default stdout)");
    sweep->add_flag("--json", json, "Emit JSON instead of CSV");
    add_jobs(sweep);
    add_config(sweep);

    auto *tables = app.add_subcommand("tables", "Write table4.csv .. table7.csv and endpoints.csv");
    tables->add_option("--out", out_path, "Output directory (default: current directory)");
    add_jobs(tables);
    add_config(tables);

    auto *error = app.add_subcommand("error", "Mean (theory - experiment) x 100 over matching keys");
    error->add_option("theory", theory_path, "Theory CSV")->required();
    error->add_option("experiment", experiment_path, "Experiment CSV")->required();
    error->add_option("--key", columns.key, "Key column (default: key, else the varying theta/phi)");
    error->add_option("--theory-column", columns.theory, "Theory column (default: theory, else favg_sq)");
    error->add_option("--experiment-column", columns.experiment,
                      "Experiment column (default: favg_sq, else qiskit)");
    error->add_flag("--json", json, "Emit JSON");
    add_config(error);

    auto *report = app.add_subcommand("scramble-report", "Pauli expansions of U(theta)^dagger P U(theta)");
    report->add_option("--theta", theta_text, "Scrambling angle in [0, pi/2]")->required();
    report->add_flag("--json", json, "Emit JSON");
    add_config(report);

    try {
        std::vector<std::string> args = expand_config(raw_args);
        std::reverse(args.begin(), args.end());
        try {
            app.parse(args);
        } catch (const CLI::ParseError &e) {
            const int code = app.exit(e, out, err);
            return code == 0 ? kExitOk : kExitUsage;
        }

        if (verify->parsed()) {
            VerifyOptions options;
            options.theta_grid = theta_text.empty() ? default_verify_grid() : parse_angle_list(theta_text);
            options.inject_fault = inject_fault;
            if (seed) {
                options.seed = *seed;
            }
            const VerifyReport result = run_verify(options);
            out << to_json(result).dump(2) << '\n';
            if (!result.passed()) {
                std::string names;
                for (const auto &c : result.checks) {
                    if (!c.passed) {
                        names += (names.empty() ? "" : ", ") + c.name;
                    }
                }
                err << "verify: failed checks: " << names << '\n';
                return kExitInvariantFailure;
            }
            return kExitOk;
        }

        if (sweep->parsed()) {
            SweepSpec spec;
            spec.alpha = alpha_text.empty() ? 1 / std::sqrt(3.0) : parse_angle(alpha_text);
            spec.pair = [&] {
                try {
                    return parse_pair(pair_text);
                } catch (const std::invalid_argument &e) {
                    throw UsageError(e.what());
                }
            }();
            spec.points = points;
            spec.shots = shots;
            spec.seed = seed;
            const auto theta_range = parse_range(theta_text);
            const auto phi_range = parse_range(phi_text);
            if (theta_range.has_value() == phi_range.has_value()) {
                throw UsageError("give exactly one of --theta/--phi as a START:STOP range");
            }
            if (theta_range) {
                spec.variable = SweepVariable::Theta;
                spec.start = theta_range->start;
                spec.stop = theta_range->stop;
                spec.phi = parse_angle(phi_text);
            } else {
                spec.variable = SweepVariable::Phi;
                spec.start = phi_range->start;
                spec.stop = phi_range->stop;
                spec.theta = parse_angle(theta_text);
            }
            spec.validate();
            const auto rows = run_sweep(spec, jobs);
            OutputTarget target(out_path, out);
            if (json) {
                nlohmann::json arr = nlohmann::json::array();
                for (const auto &row : rows) {
                    nlohmann::json j{{"analytic", to_json(row.analytic)}};
                    if (row.shots) {
                        j["shots"] = to_json(*row.shots);
                    }
                    arr.push_back(std::move(j));
                }
                target.stream() << arr.dump(2) << '\n';
            } else {
                write_sweep_csv(target.stream(), rows);
            }
            target.finish();
            return kExitOk;
        }

        if (tables->parsed()) {
            for (const auto &path : write_tables(out_path.empty() ? "." : out_path, jobs)) {
                out << path.string() << '\n';
            }
            return kExitOk;
        }

        if (error->parsed()) {
            const ErrorSummary s = compute_error(read_csv(theory_path), read_csv(experiment_path), columns);
            if (json) {
                out << nlohmann::json{{"n", s.n}, {"signed_mean_pct", s.signed_mean_pct}, {"mean_abs_pct", s.mean_abs_pct}}
                           .dump(2)
                    << '\n';
            } else {
                out << fmt::format("n={} signed_mean_pct={:.6f} mean_abs_pct={:.6f}\n", s.n, s.signed_mean_pct,
                                   s.mean_abs_pct);
            }
            return kExitOk;
        }

        if (report->parsed()) {
            const double theta = parse_angle(theta_text);
            const ScramblingReport r = [&] {
                try {
                    return scrambling_report(theta);
                } catch (const std::invalid_argument &e) {
                    throw UsageError(e.what());
                }
            }();
            if (json) {
                out << to_json(r).dump(2) << '\n';
            } else {
                out << fmt::format("theta={:.6f}\n", r.theta);
                for (const auto &row : r.rows) {
                    out << fmt::format("{} -> [{} terms, delocalization {:.6f}]{}\n", row.pauli.str(),
                                       row.expansion.terms().size(), row.delocalization,
                                       format_pauli_terms(row.expansion));
                }
            }
            return kExitOk;
        }
    } catch (const KeyMismatchError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UsageError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError &e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace scrteleport
