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

#include "causim/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "causim/causal_queries.hpp"
#include "causim/error.hpp"
#include "causim/foliation.hpp"
#include "causim/operators.hpp"

namespace causim::io {

namespace {

[[noreturn]] void schema(const std::string &where, const std::string &what) {
    throw Error(ErrorCode::InvalidScenario, "at " + where + ": " + what);
}

const json &need(const json &obj, const char *key, const std::string &where) {
    if (!obj.is_object()) schema(where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) schema(where, std::string("missing '") + key + "'");
    return *it;
}

template <class T>
T as(const json &v, const std::string &where, const char *what) {
    try {
        return v.get<T>();
    } catch (const json::exception &) {
        schema(where, std::string("expected ") + what);
    }
}

int as_int(const json &v, const std::string &where) {
    if (!v.is_number_integer()) schema(where, "expected an integer");
    return v.get<int>();
}

std::string as_string(const json &v, const std::string &where) {
    if (!v.is_string()) schema(where, "expected a string");
    return v.get<std::string>();
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

cd entry(const json &v, const std::string &where) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    if (v.is_string()) {
        try {
            return ops::evaluate_scalar(v.get<std::string>());
        } catch (const Error &e) {
            schema(where, e.what());
        }
    }
    schema(where, "expected a number, [re, im] or a scalar expression");
}

Matrix matrix_from_json(const json &v, const std::string &where) {
    if (!v.is_array() || v.empty() || !v[0].is_array()) schema(where, "expected a matrix");
    const auto rows = static_cast<Eigen::Index>(v.size());
    const auto cols = static_cast<Eigen::Index>(v[0].size());
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto &row = v[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            schema(where, "ragged matrix");
        }
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = entry(row[static_cast<std::size_t>(j)],
                            where + "/" + std::to_string(i) + "/" + std::to_string(j));
        }
    }
    return m;
}

Vector vector_from_json(const json &v, const std::string &where) {
    if (!v.is_array() || v.empty()) schema(where, "expected a vector");
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = entry(v[i], where + "/" + std::to_string(i));
    }
    return out;
}

Matrix expression(const std::string &text, const std::string &where) {
    try {
        return ops::evaluate(text);
    } catch (const Error &e) {
        schema(where, e.what());
    }
}

// Replaces the identifier `theta` with a numeric literal.
std::string bind_theta(const std::string &text, double theta) {
    std::string out;
    const std::string name = "theta";
    const auto ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    for (std::size_t i = 0; i < text.size();) {
        if (text.compare(i, name.size(), name) == 0 && (i == 0 || !ident(text[i - 1])) &&
            (i + name.size() == text.size() || !ident(text[i + name.size()]))) {
            out += "(" + fmt(theta) + ")";
            i += name.size();
        } else {
            out += text[i++];
        }
    }
    return out;
}

LatticeCoord coord_from_json(const json &v, const std::string &where) {
    if (!v.is_array() || v.size() != 2) schema(where, "expected [t, x]");
    return {as_int(v[0], where + "/0"), as_int(v[1], where + "/1")};
}

const std::map<std::string, std::vector<std::string>> &check_params() {
    static const std::map<std::string, std::vector<std::string>> table{
        {"spacelike_commutation", {"U", "V"}},
        {"povm_bosonic", {"U", "V"}},
        {"no_signalling", {"sender", "probe"}},
        {"detect_signalling", {"sender", "probe"}},
        {"sorkin", {"kick", "mediator", "probe"}},
        {"sorkin_sweep", {"kick", "mediator", "probe"}},
        {"sorkin_dichotomy", {}},
        {"boundary_properties", {"region"}},
        {"boundary_covariance", {"region"}},
        {"two_foliations", {"U", "V"}},
    };
    return table;
}

// Checks whose region parameters must carry an assignment.
bool needs_assignment(const std::string &check) {
    return check != "boundary_properties" && check != "boundary_covariance" &&
           check != "two_foliations" && check != "sorkin_dichotomy";
}

} // namespace

// ------------------------------------------------------------------- files

json parse_json(const std::string &text, const std::string &source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::string what = e.what();
        if (auto p = what.find("syntax error"); p != std::string::npos) what = what.substr(p);
        throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line) + ":" +
                                               std::to_string(column) + ": " + what);
    }
}

std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json_file(const std::string &path) { return parse_json(read_text_file(path), path); }

void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

// ------------------------------------------------------------------- sites

json site_to_json(const CausalSite &site) {
    json events = json::array();
    for (const auto &e : site.events()) {
        json ev{{"id", e.id}};
        if (e.coords) {
            ev["t"] = e.coords->t;
            ev["x"] = e.coords->x;
        }
        events.push_back(ev);
    }
    json covers = json::array();
    for (auto [a, b] : site.cover_pairs()) covers.push_back({a, b});
    json doc{{"format", "causim-site"}, {"version", 1}, {"events", events}, {"covers", covers}};
    doc["cone_slope"] = site.cone_slope() ? json(*site.cone_slope()) : json(nullptr);
    return doc;
}

CausalSite site_from_json(const json &doc) {
    if (doc.contains("lattice")) {
        const auto &l = doc["lattice"];
        return CausalSite::diamond_lattice(as_int(need(l, "T", "/lattice"), "/lattice/T"),
                                           as_int(need(l, "L", "/lattice"), "/lattice/L"),
                                           l.contains("cone_slope")
                                               ? as_int(l["cone_slope"], "/lattice/cone_slope")
                                               : 2);
    }
    const auto &evs = need(doc, "events", "/");
    if (!evs.is_array()) schema("/events", "expected an array");
    std::vector<Event> events;
    for (std::size_t i = 0; i < evs.size(); ++i) {
        const std::string where = "/events/" + std::to_string(i);
        Event e;
        e.id = static_cast<EventId>(as_int(need(evs[i], "id", where), where + "/id"));
        if (evs[i].contains("t") || evs[i].contains("x")) {
            e.coords = LatticeCoord{as_int(need(evs[i], "t", where), where + "/t"),
                                    as_int(need(evs[i], "x", where), where + "/x")};
        }
        events.push_back(e);
    }
    std::vector<std::pair<EventId, EventId>> covers;
    const auto &cs = need(doc, "covers", "/");
    if (!cs.is_array()) schema("/covers", "expected an array");
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const std::string where = "/covers/" + std::to_string(i);
        if (!cs[i].is_array() || cs[i].size() != 2) schema(where, "expected [a, b]");
        covers.emplace_back(as_int(cs[i][0], where), as_int(cs[i][1], where));
    }
    std::optional<int> slope;
    if (doc.contains("cone_slope") && !doc["cone_slope"].is_null()) {
        slope = as_int(doc["cone_slope"], "/cone_slope");
    }
    return CausalSite::from_parts(std::move(events), covers, slope);
}

Region region_from_json(const CausalSite &site, const json &spec, const std::string &where) {
    if (!spec.is_array()) schema(where, "expected a list of events");
    std::vector<EventId> ids;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const std::string w = where + "/" + std::to_string(i);
        if (spec[i].is_array()) {
            const auto c = coord_from_json(spec[i], w);
            const auto id = site.find(c);
            if (!id) {
                schema(w, "no event at (" + std::to_string(c.t) + ", " + std::to_string(c.x) + ")");
            }
            ids.push_back(*id);
        } else {
            const int id = as_int(spec[i], w);
            if (id < 0 || static_cast<std::size_t>(id) >= site.size()) schema(w, "no such event");
            ids.push_back(static_cast<EventId>(id));
        }
    }
    return site.region(ids);
}

json region_to_json(const CausalSite &site, const Region &r) {
    json out = json::array();
    for (EventId id : r.ids()) {
        if (const auto &c = site.coords(id)) out.push_back({c->t, c->x});
        else out.push_back(id);
    }
    return out;
}

// --------------------------------------------------------------- scenarios

ScenarioFile scenario_file_from_json(const json &doc) {
    ScenarioFile f;
    if (!doc.is_object()) schema("/", "expected an object");
    f.id = as_string(need(doc, "id", "/"), "/id");
    const auto &seed = need(doc, "seed", "/");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
        schema("/seed", "expected a non-negative integer");
    }
    f.seed = seed.get<std::uint64_t>();

    const auto &lat = need(doc, "lattice", "/");
    f.lattice.time_extent = as_int(need(lat, "T", "/lattice"), "/lattice/T");
    f.lattice.spatial_extent = as_int(need(lat, "L", "/lattice"), "/lattice/L");
    if (lat.contains("cone_slope")) f.lattice.cone_slope = as_int(lat["cone_slope"], "/lattice/cone_slope");

    const auto &factors = need(doc, "factors", "/");
    if (!factors.is_array() || factors.empty()) schema("/factors", "expected a nonempty list");
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const int d = as_int(factors[i], "/factors/" + std::to_string(i));
        if (d < 1) schema("/factors/" + std::to_string(i), "dimension must be positive");
        f.factors.push_back(d);
    }

    const auto &regions = need(doc, "regions", "/");
    if (!regions.is_array()) schema("/regions", "expected a list");
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const std::string where = "/regions/" + std::to_string(i);
        const auto &r = regions[i];
        RegionSpec spec;
        spec.name = as_string(need(r, "name", where), where + "/name");
        if (r.contains("rectangle")) {
            const auto &rect = r["rectangle"];
            const std::string w = where + "/rectangle";
            spec.rectangle = std::array<int, 4>{as_int(need(rect, "t0", w), w + "/t0"),
                                                as_int(need(rect, "t1", w), w + "/t1"),
                                                as_int(need(rect, "x0", w), w + "/x0"),
                                                as_int(need(rect, "x1", w), w + "/x1")};
        } else {
            const auto &evs = need(r, "events", where);
            if (!evs.is_array()) schema(where + "/events", "expected a list");
            for (std::size_t k = 0; k < evs.size(); ++k) {
                spec.events.push_back(coord_from_json(evs[k], where + "/events/" + std::to_string(k)));
            }
        }
        if (r.contains("factor")) {
            const int fac = as_int(r["factor"], where + "/factor");
            if (fac < 0) schema(where + "/factor", "negative factor");
            spec.factor = static_cast<std::size_t>(fac);
        }
        f.regions.push_back(std::move(spec));
    }

    const auto &assignments = need(doc, "assignments", "/");
    if (!assignments.is_array()) schema("/assignments", "expected a list");
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        const std::string where = "/assignments/" + std::to_string(i);
        const auto &a = assignments[i];
        AssignmentSpec spec;
        spec.region = as_string(need(a, "region", where), where + "/region");
        spec.family = need(a, "family", where);
        if (!spec.family.is_object()) schema(where + "/family", "expected an object");
        const std::string mode = as_string(need(a, "mode", where), where + "/mode");
        if (mode == "selective") {
            const auto &o = need(a, "outcome", where);
            if (!o.is_number_integer() && !o.is_string()) {
                schema(where + "/outcome", "expected an index or a label");
            }
            spec.outcome = o;
        } else if (mode != "nonselective") {
            schema(where + "/mode", "expected 'selective' or 'nonselective'");
        }
        f.assignments.push_back(std::move(spec));
    }

    if (doc.contains("dynamics")) {
        const auto &dyn = doc["dynamics"];
        if (!dyn.is_array()) schema("/dynamics", "expected a list");
        for (std::size_t i = 0; i < dyn.size(); ++i) {
            const std::string where = "/dynamics/" + std::to_string(i);
            DynamicsSpec spec;
            spec.from_level = as_int(need(dyn[i], "from_level", where), where + "/from_level");
            if (dyn[i].contains("to_level")) {
                spec.to_level = as_int(dyn[i]["to_level"], where + "/to_level");
            }
            spec.unitary = as_string(need(dyn[i], "unitary", where), where + "/unitary");
            f.dynamics.push_back(std::move(spec));
        }
    }

    f.initial_state = need(doc, "initial_state", "/");
    if (!f.initial_state.is_object()) schema("/initial_state", "expected an object");

    const auto &checks = need(doc, "checks", "/");
    if (!checks.is_array()) schema("/checks", "expected a list");
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const std::string where = "/checks/" + std::to_string(i);
        CheckSpec c;
        c.name = as_string(need(checks[i], "name", where), where + "/name");
        if (!check_params().count(c.name)) schema(where + "/name", "unknown check '" + c.name + "'");
        for (const auto &[key, value] : checks[i].items()) {
            if (key == "name") continue;
            if (key == "expect") {
                const auto e = as_string(value, where + "/expect");
                if (e != "pass" && e != "fail") schema(where + "/expect", "expected 'pass' or 'fail'");
                c.expect_pass = e == "pass";
                continue;
            }
            c.params[key] = value;
        }
        f.checks.push_back(std::move(c));
    }
    return f;
}

json scenario_file_to_json(const ScenarioFile &f) {
    json doc;
    doc["id"] = f.id;
    doc["seed"] = f.seed;
    doc["lattice"] = {{"T", f.lattice.time_extent},
                      {"L", f.lattice.spatial_extent},
                      {"cone_slope", f.lattice.cone_slope}};
    doc["factors"] = f.factors;
    doc["regions"] = json::array();
    for (const auto &r : f.regions) {
        json j{{"name", r.name}, {"factor", r.factor}};
        if (r.rectangle) {
            const auto &q = *r.rectangle;
            j["rectangle"] = {{"t0", q[0]}, {"t1", q[1]}, {"x0", q[2]}, {"x1", q[3]}};
        } else {
            j["events"] = json::array();
            for (const auto &c : r.events) j["events"].push_back({c.t, c.x});
        }
        doc["regions"].push_back(j);
    }
    doc["assignments"] = json::array();
    for (const auto &a : f.assignments) {
        json j{{"region", a.region}, {"family", a.family}};
        j["mode"] = a.outcome ? "selective" : "nonselective";
        if (a.outcome) j["outcome"] = *a.outcome;
        doc["assignments"].push_back(j);
    }
    doc["dynamics"] = json::array();
    for (const auto &d : f.dynamics) {
        json j{{"from_level", d.from_level}, {"unitary", d.unitary}};
        if (d.to_level) j["to_level"] = *d.to_level;
        doc["dynamics"].push_back(j);
    }
    doc["initial_state"] = f.initial_state;
    doc["checks"] = json::array();
    for (const auto &c : f.checks) {
        json j = c.params;
        j["name"] = c.name;
        j["expect"] = c.expect_pass ? "pass" : "fail";
        doc["checks"].push_back(j);
    }
    return doc;
}

namespace {

MeasurementFamily compile_family(const json &spec, Eigen::Index local_dim, std::size_t factor,
                                 const std::vector<Eigen::Index> &dims, std::mt19937_64 &rng,
                                 const std::string &where) {
    Eigen::Index total = 1;
    for (auto d : dims) total *= d;
    MeasurementFamily family = [&]() -> MeasurementFamily {
        try {
            if (spec.contains("projective")) {
                const auto b = as_string(spec["projective"], where + "/projective");
                if (b != "z" && b != "x") schema(where + "/projective", "basis must be 'z' or 'x'");
                return ops::projective(b[0], local_dim);
            }
            if (spec.contains("weak")) {
                const auto axis = as_string(spec["weak"], where + "/weak");
                if (axis != "z" && axis != "x") schema(where + "/weak", "axis must be 'z' or 'x'");
                const double eps = as<double>(need(spec, "epsilon", where), where + "/epsilon", "a number");
                return ops::weak(axis[0], eps);
            }
            if (spec.contains("unitary")) {
                const auto text = as_string(spec["unitary"], where + "/unitary");
                return ops::single_unitary(expression(text, where + "/unitary"));
            }
            std::vector<std::string> labels;
            if (spec.contains("labels")) {
                labels = as<std::vector<std::string>>(spec["labels"], where + "/labels", "a list of strings");
            }
            if (spec.contains("kraus")) {
                const auto &list = spec["kraus"];
                if (!list.is_array() || list.empty()) schema(where + "/kraus", "expected a nonempty list");
                std::vector<Matrix> ops_;
                for (std::size_t k = 0; k < list.size(); ++k) {
                    const std::string w = where + "/kraus/" + std::to_string(k);
                    ops_.push_back(expression(as_string(list[k], w), w));
                }
                return MeasurementFamily::make(ops_, labels);
            }
            if (spec.contains("dense")) {
                const auto &list = spec["dense"];
                if (!list.is_array() || list.empty()) schema(where + "/dense", "expected a nonempty list");
                std::vector<Matrix> ops_;
                for (std::size_t k = 0; k < list.size(); ++k) {
                    ops_.push_back(matrix_from_json(list[k], where + "/dense/" + std::to_string(k)));
                }
                return MeasurementFamily::make(ops_, labels);
            }
            if (spec.contains("random")) {
                const int k = as_int(need(spec["random"], "outcomes", where + "/random"),
                                     where + "/random/outcomes");
                if (k < 1) schema(where + "/random/outcomes", "must be positive");
                return random_family(local_dim, static_cast<std::size_t>(k), rng);
            }
        } catch (const Error &e) {
            if (e.code() == ErrorCode::InvalidScenario) throw;
            schema(where, e.what());
        }
        schema(where, "unknown family kind");
    }();
    if (family.dim() == total) return family;
    if (family.dim() != local_dim) {
        schema(where, "family dimension " + std::to_string(family.dim()) + " fits neither factor (" +
                          std::to_string(local_dim) + ") nor layout (" + std::to_string(total) + ")");
    }
    std::vector<Matrix> embedded;
    for (const auto &m : family.kraus()) embedded.push_back(embed_local({m, factor, dims}));
    return MeasurementFamily::make(embedded, family.labels(), Tolerances{}.scaled(1e3));
}

State compile_state(const json &spec, Eigen::Index total, std::mt19937_64 &rng) {
    const std::string where = "/initial_state";
    const std::string kind = spec.contains("kind") ? as_string(spec["kind"], where + "/kind") : "pure";
    if (kind != "pure" && kind != "density") schema(where + "/kind", "expected 'pure' or 'density'");
    std::optional<PureState> pure;
    if (spec.contains("named")) {
        const auto name = as_string(spec["named"], where + "/named");
        if (name == "bell_phi_plus") {
            if (total != 4) schema(where, "bell_phi_plus needs a 4-dimensional layout");
            pure = PureState::normalized(Vector{{1, 0, 0, 1}});
        } else if (name == "plus_n") {
            pure = PureState::normalized(Vector::Ones(total));
        } else if (name == "random") {
            if (kind == "density") return random_density(total, rng);
            pure = random_state(total, rng);
        } else if (name.rfind("basis(", 0) == 0 && name.back() == ')') {
            long k = -1;
            try {
                std::size_t used = 0;
                k = std::stol(name.substr(6, name.size() - 7), &used);
                if (used != name.size() - 7) k = -1;
            } catch (const std::exception &) {
            }
            if (k < 0 || k >= total) schema(where + "/named", "basis index out of range");
            pure = PureState::basis(total, k);
        } else {
            schema(where + "/named", "unknown state '" + name + "'");
        }
    } else {
        const auto &data = need(spec, "data", where);
        try {
            if (kind == "pure") {
                pure = PureState::make(vector_from_json(data, where + "/data"));
            } else {
                return DensityOperator::make(matrix_from_json(data, where + "/data"));
            }
        } catch (const Error &e) {
            if (e.code() == ErrorCode::InvalidScenario) throw;
            schema(where + "/data", e.what());
        }
    }
    if (pure->dim() != total) {
        schema(where, "state dimension " + std::to_string(pure->dim()) + " differs from layout " +
                          std::to_string(total));
    }
    if (kind == "density") return DensityOperator::from_pure(*pure);
    return *pure;
}

double theta_value(const json &v, const std::string &where) {
    if (v.is_number()) return v.get<double>();
    const cd z = entry(v, where);
    if (std::abs(z.imag()) > 0) schema(where, "expected a real angle");
    return z.real();
}

} // namespace

CompiledScenario compile_scenario(const ScenarioFile &f, std::optional<std::uint64_t> seed_override,
                                  double tolerance_scale) {
    if (!(tolerance_scale > 0.0) || !std::isfinite(tolerance_scale)) {
        throw Error(ErrorCode::InvalidArgument, "tolerance scale must be positive");
    }
    CompiledScenario out{Scenario{f.id, nullptr, f.factors, {}, {}, PureState::basis(1, 0),
                                  seed_override.value_or(f.seed), Tolerances{}.scaled(tolerance_scale)},
                         f.checks,
                         {}};
    Scenario &s = out.scenario;
    try {
        s.site = std::make_shared<const CausalSite>(CausalSite::diamond_lattice(
            f.lattice.time_extent, f.lattice.spatial_extent, f.lattice.cone_slope));
    } catch (const Error &e) {
        schema("/lattice", e.what());
    }
    std::mt19937_64 rng(s.seed);
    const Eigen::Index total = s.dim();

    std::map<std::string, std::size_t> region_index;
    for (std::size_t i = 0; i < f.regions.size(); ++i) {
        const auto &r = f.regions[i];
        const std::string where = "/regions/" + std::to_string(i);
        if (!region_index.emplace(r.name, i).second) schema(where, "region '" + r.name + "' defined twice");
        if (r.factor >= f.factors.size()) schema(where + "/factor", "no such factor");
        try {
            Region region = r.rectangle ? s.site->rectangle((*r.rectangle)[0], (*r.rectangle)[1],
                                                            (*r.rectangle)[2], (*r.rectangle)[3])
                                        : s.site->region_at(r.events);
            if (region.empty()) schema(where, "region '" + r.name + "' is empty");
            out.regions.emplace(r.name, std::move(region));
        } catch (const Error &e) {
            if (e.code() == ErrorCode::InvalidScenario) throw;
            schema(where, e.what());
        }
    }

    for (std::size_t i = 0; i < f.assignments.size(); ++i) {
        const auto &a = f.assignments[i];
        const std::string where = "/assignments/" + std::to_string(i);
        auto it = region_index.find(a.region);
        if (it == region_index.end()) schema(where + "/region", "unknown region '" + a.region + "'");
        const auto &rs = f.regions[it->second];
        auto family = compile_family(a.family, f.factors[rs.factor], rs.factor, f.factors, rng,
                                     where + "/family");
        std::optional<std::size_t> outcome;
        if (a.outcome) {
            if (a.outcome->is_string()) {
                try {
                    outcome = family.outcome(a.outcome->get<std::string>());
                } catch (const Error &e) {
                    schema(where + "/outcome", e.what());
                }
            } else {
                const int k = a.outcome->get<int>();
                if (k < 0 || static_cast<std::size_t>(k) >= family.size()) {
                    schema(where + "/outcome", "outcome " + std::to_string(k) + " not in family");
                }
                outcome = static_cast<std::size_t>(k);
            }
        }
        s.assignments.push_back({a.region, out.regions.at(a.region), std::move(family), outcome});
    }

    for (std::size_t i = 0; i < f.dynamics.size(); ++i) {
        const auto &d = f.dynamics[i];
        const std::string where = "/dynamics/" + std::to_string(i);
        if (d.to_level && d.from_level >= 0 && *d.to_level != d.from_level + 1) {
            schema(where, "to_level must be from_level + 1");
        }
        Matrix u = d.unitary == "haar" ? haar_unitary(total, rng) : expression(d.unitary, where + "/unitary");
        try {
            s.dynamics.push_back({d.from_level, Unitary::make(u)});
        } catch (const Error &e) {
            schema(where + "/unitary", e.what());
        }
    }

    s.initial = compile_state(f.initial_state, total, rng);
    try {
        s.validate();
    } catch (const Error &e) {
        schema("/", e.what());
    }

    std::set<std::string> assigned;
    for (const auto &a : s.assignments) assigned.insert(a.name);
    for (std::size_t i = 0; i < f.checks.size(); ++i) {
        const auto &c = f.checks[i];
        const std::string where = "/checks/" + std::to_string(i);
        for (const auto &key : check_params().at(c.name)) {
            const auto name = as_string(need(c.params, key.c_str(), where), where + "/" + key);
            const bool known = needs_assignment(c.name) ? assigned.count(name) > 0
                                                        : out.regions.count(name) > 0;
            if (!known) schema(where + "/" + key, "unresolved region '" + name + "'");
        }
        if (c.name == "sorkin_sweep") {
            (void)as_string(need(c.params, "mediator_at", where), where + "/mediator_at");
            const auto &th = need(c.params, "thetas", where);
            if (!th.is_array() || th.empty()) schema(where + "/thetas", "expected a nonempty list");
            for (std::size_t k = 0; k < th.size(); ++k) {
                (void)theta_value(th[k], where + "/thetas/" + std::to_string(k));
            }
        }
        if (c.name == "sorkin_dichotomy") {
            for (const char *key : {"m1", "m2", "m3"}) {
                (void)expression(as_string(need(c.params, key, where), where + "/" + key),
                                 where + "/" + key);
            }
        }
        if (c.name == "boundary_covariance" && c.params.contains("isometry") &&
            c.params["isometry"] != "spatial_reflection") {
            schema(where + "/isometry", "only 'spatial_reflection' is supported");
        }
    }
    return out;
}

VerificationReport run_check(const CompiledScenario &compiled, const CheckSpec &check) {
    const Scenario &s = compiled.scenario;
    const auto &p = check.params;
    const auto idx = [&](const char *key) { return s.find(p.at(key).get<std::string>()); };
    const auto region = [&](const char *key) -> const Region & {
        return compiled.regions.at(p.at(key).get<std::string>());
    };
    VerificationReport rep;
    try {
        const std::string &n = check.name;
        if (n == "spacelike_commutation") {
            rep = verify_spacelike_commutation(s, idx("U"), idx("V"));
        } else if (n == "povm_bosonic") {
            rep = verify_povm_bosonic(s, idx("U"), idx("V"));
        } else if (n == "no_signalling") {
            rep = verify_no_signalling(s, idx("sender"), idx("probe"));
        } else if (n == "detect_signalling") {
            rep = detect_signalling_report(s, idx("sender"), idx("probe"));
        } else if (n == "sorkin") {
            rep = run_sorkin(s, idx("kick"), idx("mediator"), idx("probe"));
        } else if (n == "sorkin_sweep") {
            const std::string tmpl = p.at("mediator_at").get<std::string>();
            std::vector<double> thetas;
            for (const auto &t : p.at("thetas")) thetas.push_back(theta_value(t, "/thetas"));
            rep = run_sorkin_sweep(
                s, idx("kick"), idx("mediator"), idx("probe"),
                [&](double theta) { return ops::evaluate(bind_theta(tmpl, theta)); }, thetas);
        } else if (n == "sorkin_dichotomy") {
            rep = test_sorkin_dichotomy(ops::evaluate(p.at("m1").get<std::string>()),
                                        ops::evaluate(p.at("m2").get<std::string>()),
                                        ops::evaluate(p.at("m3").get<std::string>()), s.tol);
        } else if (n == "boundary_properties") {
            rep = verify_boundary_properties(*s.site, region("region"));
        } else if (n == "boundary_covariance") {
            rep = verify_boundary_covariance(*s.site, spatial_reflection(*s.site), region("region"));
        } else if (n == "two_foliations") {
            const auto pair = build_two_foliations(*s.site, region("U"), region("V"));
            const auto chk = check_two_foliations(*s.site, pair, region("U"), region("V"));
            rep.evidence["shared_bottom"] = chk.shared_bottom;
            rep.evidence["shared_top"] = chk.shared_top;
            rep.evidence["bounds_enclose"] = chk.bounds_enclose;
            rep.evidence["middles_cauchy"] = chk.middles_cauchy;
            rep.evidence["first_levels"] = pair.first.level_count();
            rep.evidence["second_levels"] = pair.second.level_count();
            rep.pass = chk.all();
        }
    } catch (const Error &e) {
        rep = VerificationReport{};
        rep.pass = false;
        rep.notes["error"] = e.what();
    }
    rep.scenario = s.id;
    rep.check = check.name;
    rep.expected_failure = !check.expect_pass;
    return rep;
}

// ----------------------------------------------------------------- reports

json report_to_json(const VerificationReport &rep, double runtime_ms) {
    json evidence = json::object(), tolerances = json::object(), notes = json::object();
    for (const auto &[k, v] : rep.evidence) evidence[k] = v;
    for (const auto &[k, v] : rep.tolerances) tolerances[k] = v;
    for (const auto &[k, v] : rep.notes) notes[k] = v;
    json series = json::array();
    for (const auto &[x, y] : rep.series) series.push_back({x, y});
    return {{"scenario", rep.scenario},   {"check", rep.check},
            {"pass", rep.pass},           {"expected_failure", rep.expected_failure},
            {"evidence", evidence},       {"tolerances", tolerances},
            {"notes", notes},             {"series", series},
            {"runtime_ms", runtime_ms}};
}

VerificationReport report_from_json(const json &r) {
    VerificationReport rep;
    try {
        rep.scenario = r.at("scenario").get<std::string>();
        rep.check = r.at("check").get<std::string>();
        rep.pass = r.at("pass").get<bool>();
        rep.expected_failure = r.value("expected_failure", false);
        const json evidence = r.value("evidence", json::object());
        const json tolerances = r.value("tolerances", json::object());
        const json notes = r.value("notes", json::object());
        const json series = r.value("series", json::array());
        for (const auto &[k, v] : evidence.items()) {
            rep.evidence[k] = v.is_null() ? std::nan("") : v.get<double>();
        }
        for (const auto &[k, v] : tolerances.items()) rep.tolerances[k] = v.get<double>();
        for (const auto &[k, v] : notes.items()) rep.notes[k] = v.get<std::string>();
        for (const auto &pt : series) {
            rep.series.emplace_back(pt.at(0).get<double>(), pt.at(1).get<double>());
        }
    } catch (const json::exception &e) {
        throw Error(ErrorCode::ParseError, std::string("malformed report record: ") + e.what());
    }
    return rep;
}

std::string reports_to_jsonl(const std::vector<VerificationReport> &reports,
                             const std::vector<double> &runtime_ms) {
    std::string out;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        out += report_to_json(reports[i], i < runtime_ms.size() ? runtime_ms[i] : 0.0).dump();
        out += '\n';
    }
    return out;
}

std::vector<VerificationReport> reports_from_jsonl(const std::string &text,
                                                   std::vector<double> *runtime_ms) {
    std::vector<VerificationReport> out;
    std::istringstream in(text);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error &e) {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(n) + ": " + e.what());
        }
        out.push_back(report_from_json(record));
        if (runtime_ms) runtime_ms->push_back(record.value("runtime_ms", 0.0));
    }
    return out;
}

namespace {

std::string status_of(const VerificationReport &r) {
    if (!r.as_expected()) return "UNEXPECTED";
    return r.expected_failure ? "expected-failure" : "ok";
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

} // namespace

std::string render_table(const std::vector<VerificationReport> &reports) {
    std::vector<std::array<std::string, 4>> rows{{"scenario", "check", "result", "status"}};
    for (const auto &r : reports) {
        rows.push_back({r.scenario, r.check, r.pass ? "pass" : "fail", status_of(r)});
    }
    std::array<std::size_t, 4> width{};
    for (const auto &row : rows) {
        for (std::size_t c = 0; c < 4; ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::ostringstream out;
    for (const auto &row : rows) {
        for (std::size_t c = 0; c < 4; ++c) {
            out << row[c];
            if (c + 1 < 4) out << std::string(width[c] - row[c].size() + 2, ' ');
        }
        out << '\n';
    }
    return out.str();
}

std::string render_csv(const std::vector<VerificationReport> &reports,
                       const std::vector<double> &runtime_ms) {
    std::string out = "scenario,check,pass,expected_failure,as_expected,runtime_ms\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto &r = reports[i];
        out += csv_field(r.scenario) + "," + csv_field(r.check) + "," + (r.pass ? "true" : "false") +
               "," + (r.expected_failure ? "true" : "false") + "," +
               (r.as_expected() ? "true" : "false") + "," +
               fmt(i < runtime_ms.size() ? runtime_ms[i] : 0.0) + "\n";
    }
    return out;
}

std::string render_plotdata(const std::vector<VerificationReport> &reports) {
    std::string out;
    for (const auto &r : reports) {
        if (r.series.empty()) continue;
        if (!out.empty()) out += "\n";
        out += "# " + r.scenario + " " + r.check + "\n";
        for (const auto &[x, y] : r.series) out += fmt(x) + " " + fmt(y) + "\n";
    }
    return out;
}

} // namespace causim::io
