// Copyright 2026 The causim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "causim/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "causim/causal_queries.hpp"
#include "causim/error.hpp"
#include "causim/io.hpp"

namespace causim::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

// ------------------------------------------------------------ check-causal

using SetQuery = std::function<Region(const CausalSite &, const Region &)>;

const std::map<std::string, SetQuery> &set_queries() {
    static const std::map<std::string, SetQuery> table{
        {"causal_future", causal_future},
        {"causal_past", causal_past},
        {"strict_causal_future", strict_causal_future},
        {"strict_causal_past", strict_causal_past},
        {"chronological_future", chronological_future},
        {"chronological_past", chronological_past},
        {"dependence_future",
         [](const CausalSite &s, const Region &r) {
             return domain_of_dependence(s, r, Direction::Future);
         }},
        {"dependence_past",
         [](const CausalSite &s, const Region &r) {
             return domain_of_dependence(s, r, Direction::Past);
         }},
        {"dependence",
         [](const CausalSite &s, const Region &r) {
             return domain_of_dependence(s, r, Direction::Both);
         }},
        {"future_boundary", future_boundary},
        {"past_boundary", past_boundary},
    };
    return table;
}

VerificationReport evaluate_query(const CausalSite &site, const json &q, std::size_t index,
                                  const std::string &source) {
    const std::string where = "/queries/" + std::to_string(index);
    if (!q.is_object() || !q.contains("op") || !q["op"].is_string()) {
        throw Error(ErrorCode::InvalidScenario, "at " + where + ": missing 'op'");
    }
    const std::string op = q["op"].get<std::string>();
    VerificationReport rep;
    rep.scenario = source;
    rep.check = "query[" + std::to_string(index) + "]:" + op;
    const auto region = [&](const char *key) {
        if (!q.contains(key)) {
            throw Error(ErrorCode::InvalidScenario, "at " + where + ": missing '" + key + "'");
        }
        return io::region_from_json(site, q[key], where + "/" + key);
    };

    json result;
    if (auto it = set_queries().find(op); it != set_queries().end()) {
        const Region r = it->second(site, region("region"));
        result = io::region_to_json(site, r);
        rep.evidence["result_size"] = static_cast<double>(r.size());
        if (q.contains("expect")) {
            const Region expected = io::region_from_json(site, q["expect"], where + "/expect");
            rep.pass = expected == r;
        } else {
            rep.pass = true;
        }
    } else {
        bool value = false;
        if (op == "spacelike") value = is_spacelike_separated(site, region("a"), region("b"));
        else if (op == "acausal") value = is_acausal(site, region("region"));
        else if (op == "cauchy") value = is_cauchy_slice(site, region("region"));
        else if (op == "maximal_antichain") value = is_maximal_antichain(site, region("region"));
        else throw Error(ErrorCode::InvalidScenario, "at " + where + "/op: unknown query '" + op + "'");
        result = value;
        rep.evidence["result"] = value ? 1.0 : 0.0;
        if (q.contains("expect")) {
            if (!q["expect"].is_boolean()) {
                throw Error(ErrorCode::InvalidScenario, "at " + where + "/expect: expected a boolean");
            }
            rep.pass = q["expect"].get<bool>() == value;
        } else {
            rep.pass = true;
        }
    }
    rep.notes["result"] = result.dump();
    if (q.contains("expect")) rep.notes["expect"] = q["expect"].dump();
    return rep;
}

void emit(const std::string &text, const std::string &path, std::ostream &out) {
    if (path.empty() || path == "-") out << text;
    else io::write_text_file(path, text);
}

std::vector<std::string> expand_inputs(const std::vector<std::string> &inputs) {
    std::vector<std::string> files;
    for (const auto &in : inputs) {
        if (fs::is_directory(in)) {
            std::vector<std::string> found;
            for (const auto &entry : fs::directory_iterator(in)) {
                if (entry.is_regular_file() && entry.path().extension() == ".json") {
                    found.push_back(entry.path().string());
                }
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            files.push_back(in);
        }
    }
    return files;
}

} // namespace

std::string default_output_dir() {
    if (const char *env = std::getenv("CAUSIM_OUTPUT_DIR"); env && *env) return env;
    return "causim-out";
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Causal-site measurement scenarios: build sites, query them, run checks."};
    app.name("causim");
    app.require_subcommand(1);

    int t_extent = 0, l_extent = 0, slope = 2;
    std::string lattice_out;
    auto *lattice = app.add_subcommand("lattice", "Write a diamond lattice site file");
    lattice->add_option("-T,--time-extent", t_extent, "Time extent T")->required();
    lattice->add_option("-L,--spatial-extent", l_extent, "Spatial extent L")->required();
    lattice->add_option("--slope", slope, "Cone slope")->capture_default_str();
    lattice->add_option("-o,--output", lattice_out, "Output path (stdout if absent)");

    std::string site_file, query_file, causal_out;
    auto *check = app.add_subcommand("check-causal", "Evaluate causal queries against a site");
    check->add_option("site", site_file, "Site file")->required();
    check->add_option("queries", query_file, "Query file")->required();
    check->add_option("-o,--output", causal_out, "Report path (stdout if absent)");

    std::vector<std::string> scenario_inputs;
    std::optional<std::uint64_t> seed;
    double tolerance_scale = 1.0;
    std::string run_out;
    bool timing = false;
    auto *runner = app.add_subcommand("run", "Run the checks of scenario files");
    runner->add_option("scenarios", scenario_inputs, "Scenario files or directories")->required();
    runner->add_option("--seed", seed, "Override every scenario seed");
    runner->add_option("--tolerance-scale", tolerance_scale, "Scale all tolerances")
        ->capture_default_str();
    runner->add_option("-o,--output", run_out, "Output directory (default $CAUSIM_OUTPUT_DIR or ./causim-out)");
    runner->add_flag("--timing", timing, "Record wall-clock runtime per check");

    std::string report_file, format = "table", report_out;
    auto *report = app.add_subcommand("report", "Render a report file");
    report->add_option("report", report_file, "JSON-lines report")->required();
    report->add_option("--format", format, "table, csv or plotdata")->capture_default_str();
    report->add_option("-o,--output", report_out, "Output path (stdout if absent)");

    std::vector<const char *> argv{"causim"};
    for (const auto &a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*lattice) {
            const auto site = CausalSite::diamond_lattice(t_extent, l_extent, slope);
            emit(io::site_to_json(site).dump(2) + "\n", lattice_out, out);
            return 0;
        }

        if (*check) {
            const auto site = io::site_from_json(io::read_json_file(site_file));
            const auto doc = io::read_json_file(query_file);
            const json queries = doc.is_object() ? doc.value("queries", json::array()) : doc;
            if (!queries.is_array()) {
                throw Error(ErrorCode::InvalidScenario, "at /queries: expected a list");
            }
            std::vector<VerificationReport> reports;
            for (std::size_t i = 0; i < queries.size(); ++i) {
                reports.push_back(evaluate_query(site, queries[i], i, fs::path(query_file).filename().string()));
            }
            emit(io::reports_to_jsonl(reports, {}), causal_out, out);
            for (const auto &r : reports) {
                if (!r.pass) return 1;
            }
            return 0;
        }

        if (*runner) {
            // Every file is parsed and compiled before any check runs.
            std::vector<io::CompiledScenario> compiled;
            for (const auto &path : expand_inputs(scenario_inputs)) {
                try {
                    compiled.push_back(io::compile_scenario(
                        io::scenario_file_from_json(io::read_json_file(path)), seed, tolerance_scale));
                } catch (const Error &e) {
                    throw Error(e.code(), path + ": " + e.what());
                }
            }
            std::vector<VerificationReport> reports;
            std::vector<double> runtimes;
            for (const auto &c : compiled) {
                for (const auto &spec : c.checks) {
                    const auto start = std::chrono::steady_clock::now();
                    reports.push_back(io::run_check(c, spec));
                    const std::chrono::duration<double, std::milli> took =
                        std::chrono::steady_clock::now() - start;
                    runtimes.push_back(timing ? took.count() : 0.0);
                }
            }
            const fs::path dir = run_out.empty() ? fs::path(default_output_dir()) : fs::path(run_out);
            std::error_code ec;
            fs::create_directories(dir, ec);
            if (ec) throw Error(ErrorCode::IoError, "cannot create '" + dir.string() + "': " + ec.message());
            io::write_text_file((dir / "report.jsonl").string(), io::reports_to_jsonl(reports, runtimes));
            io::write_text_file((dir / "summary.csv").string(), io::render_csv(reports, runtimes));
            out << io::render_table(reports);
            for (const auto &r : reports) {
                if (!r.as_expected()) return 1;
            }
            return 0;
        }

        if (*report) {
            std::vector<double> runtimes;
            const auto reports = io::reports_from_jsonl(io::read_text_file(report_file), &runtimes);
            std::string text;
            if (format == "table") text = io::render_table(reports);
            else if (format == "csv") text = io::render_csv(reports, runtimes);
            else if (format == "plotdata") text = io::render_plotdata(reports);
            else throw Error(ErrorCode::InvalidArgument, "unknown format '" + format + "'");
            emit(text, report_out, out);
            return 0;
        }
    } catch (const Error &e) {
        err << "causim: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        err << "causim: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace causim::cli
