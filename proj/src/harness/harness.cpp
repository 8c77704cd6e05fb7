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

#include "causim/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <string>

#include <Eigen/SVD>

#include "causim/causal_queries.hpp"
#include "causim/error.hpp"

namespace causim {

namespace {

Matrix density_of(const State &s) {
    if (const auto *p = std::get_if<PureState>(&s)) {
        return p->amplitudes() * p->amplitudes().adjoint();
    }
    return std::get<DensityOperator>(s).matrix();
}

Eigen::Index dim_of(const State &s) {
    return std::visit([](const auto &x) { return x.dim(); }, s);
}

std::vector<double> distribution(const MeasurementFamily &family, const Matrix &rho) {
    std::vector<double> out;
    out.reserve(family.size());
    for (const auto &m : family.kraus()) {
        out.push_back(std::max(0.0, (m * rho * m.adjoint()).trace().real()));
    }
    return out;
}

State apply_unitary(const State &s, const Matrix &u) {
    if (const auto *p = std::get_if<PureState>(&s)) {
        return PureState::normalized(u * p->amplitudes());
    }
    const Matrix &rho = std::get<DensityOperator>(s).matrix();
    const Matrix out = u * rho * u.adjoint();
    return DensityOperator::make(0.5 * (out + out.adjoint()), Tolerances{}.scaled(1e4));
}

const Matrix &selected(const Assignment &a) { return a.family[*a.outcome]; }

// Operators that take part in a firing: the selected Kraus operator, or the
// whole family for a non-selective measurement.
std::vector<Matrix> firing_ops(const Assignment &a) {
    if (a.outcome) return {selected(a)};
    return a.family.kraus();
}

bool order_matters(const Assignment &a, const Assignment &b, const Tolerances &tol) {
    for (const auto &x : firing_ops(a)) {
        for (const auto &y : firing_ops(b)) {
            try {
                if (!extract_phase(x, y, tol).proportional) return true;
            } catch (const Error &e) {
                if (e.code() != ErrorCode::ZeroProduct) throw;
                if ((x * y).norm() > tol.zero_product || (y * x).norm() > tol.zero_product) {
                    return true;
                }
            }
        }
    }
    return false;
}

double total_variation(const std::vector<double> &p, const std::vector<double> &q) {
    double tv = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) tv += std::abs(p[k] - q[k]);
    return 0.5 * tv;
}

double max_gap(const std::vector<double> &p, const std::vector<double> &q) {
    double g = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) g = std::max(g, std::abs(p[k] - q[k]));
    return g;
}

const FiringRecord &firing_of(const FoliationRun &run, std::size_t assignment) {
    for (const auto &f : run.firings) {
        if (f.assignment == assignment) return f;
    }
    throw Error(ErrorCode::InvalidScenario, "assignment never fired");
}

Assignment identity_like(const Assignment &a) {
    const auto d = a.family.dim();
    return {a.name, a.region, MeasurementFamily::make({Matrix::Identity(d, d)}), std::nullopt};
}

// Foliation in which `first` is measured before `second`.
Foliation ordering_foliation(const Scenario &s, std::size_t first, std::size_t second) {
    const auto &site = *s.site;
    const auto &a = s.assignments[first].region;
    const auto &b = s.assignments[second].region;
    if (is_spacelike_separated(site, a, b)) return build_two_foliations(site, a, b).first;
    return rank_foliation(site);
}

struct ProbeComparison {
    std::vector<double> with_sender;
    std::vector<double> without_sender;
    int sender_level = 0;
    int probe_level = 0;
};

ProbeComparison compare_probe(const Scenario &scenario, std::size_t sender,
                              std::size_t probe, const Foliation &foliation) {
    const auto on = run_foliation(scenario, foliation);
    Scenario off_scenario = scenario;
    off_scenario.assignments[sender] = identity_like(scenario.assignments[sender]);
    const auto off = run_foliation(off_scenario, foliation);
    return {firing_of(on, probe).distribution, firing_of(off, probe).distribution,
            on.firing_level[sender], on.firing_level[probe]};
}

void require_index(const Scenario &s, std::size_t i) {
    if (i >= s.assignments.size()) {
        throw Error(ErrorCode::InvalidScenario, "assignment index out of range");
    }
}

} // namespace

// ------------------------------------------------------------------ scenario

Eigen::Index Scenario::dim() const {
    if (dims.empty()) return dim_of(initial);
    Eigen::Index d = 1;
    for (auto f : dims) d *= f;
    return d;
}

std::size_t Scenario::find(const std::string &name) const {
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (assignments[i].name == name) return i;
    }
    throw Error(ErrorCode::InvalidScenario, "no assignment for region '" + name + "'");
}

void Scenario::validate() const {
    if (!site) throw Error(ErrorCode::InvalidScenario, "scenario has no causal site");
    const Eigen::Index d = dim();
    if (dim_of(initial) != d) {
        throw Error(ErrorCode::InvalidScenario, "initial state dimension " +
                                                    std::to_string(dim_of(initial)) +
                                                    " differs from layout " + std::to_string(d));
    }
    std::set<std::string> names;
    for (const auto &a : assignments) {
        if (!names.insert(a.name).second) {
            throw Error(ErrorCode::InvalidScenario, "region '" + a.name + "' assigned twice");
        }
        site->require(a.region);
        if (a.region.empty()) {
            throw Error(ErrorCode::InvalidScenario, "region '" + a.name + "' is empty");
        }
        if (a.family.dim() != d) {
            throw Error(ErrorCode::InvalidScenario,
                        "family at '" + a.name + "' acts on dimension " +
                            std::to_string(a.family.dim()) + ", layout has " + std::to_string(d));
        }
        if (a.outcome && *a.outcome >= a.family.size()) {
            throw Error(ErrorCode::InvalidScenario, "outcome at '" + a.name + "' out of range");
        }
    }
    for (const auto &step : dynamics) {
        if (step.unitary.dim() != d) {
            throw Error(ErrorCode::InvalidScenario, "dynamics unitary has wrong dimension");
        }
    }
}

// --------------------------------------------------------------------- runs

FoliationRun run_foliation(const Scenario &scenario, const Foliation &foliation) {
    scenario.validate();
    const CausalSite &site = *scenario.site;
    foliation.require_site(site);
    const int n = foliation.level_count();

    std::map<int, Matrix> steps;
    for (const auto &step : scenario.dynamics) {
        const int from = step.from_level < 0 ? n - 1 + step.from_level : step.from_level;
        if (from < 0 || from >= n - 1) {
            throw Error(ErrorCode::InvalidScenario,
                        "dynamics step " + std::to_string(step.from_level) +
                            " outside a foliation with " + std::to_string(n) + " levels");
        }
        auto [it, fresh] = steps.emplace(from, step.unitary.matrix());
        if (!fresh) it->second = step.unitary.matrix() * it->second;
    }

    FoliationRun run{{}, {}, {}, 1.0, false, scenario.initial};
    const auto &as = scenario.assignments;
    std::vector<EventId> first_event(as.size());
    for (std::size_t i = 0; i < as.size(); ++i) {
        const auto boundary = future_boundary(site, as[i].region).ids();
        int level = 0;
        for (EventId p : boundary) level = std::max(level, foliation.level(p));
        run.firing_level.push_back(level);
        first_event[i] = boundary.front();
    }
    std::vector<std::size_t> order(as.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (run.firing_level[a] != run.firing_level[b]) {
            return run.firing_level[a] < run.firing_level[b];
        }
        return first_event[a] < first_event[b];
    });

    State state = scenario.initial;
    std::size_t next = 0;
    for (int k = 0; k < n; ++k) {
        const std::size_t begin = next;
        while (next < order.size() && run.firing_level[order[next]] == k) ++next;
        for (std::size_t i = begin; i < next; ++i) {
            for (std::size_t j = i + 1; j < next; ++j) {
                if (order_matters(as[order[i]], as[order[j]], scenario.tol)) {
                    run.order_sensitive_tie = true;
                }
            }
        }
        for (std::size_t i = begin; i < next; ++i) {
            const Assignment &a = as[order[i]];
            FiringRecord rec;
            rec.assignment = order[i];
            rec.level = k;
            rec.before = density_of(state);
            rec.distribution = distribution(a.family, rec.before);
            try {
                if (a.outcome) {
                    run.probability *= rec.distribution[*a.outcome];
                    if (const auto *p = std::get_if<PureState>(&state)) {
                        state = selective_update(a.family, *a.outcome, *p, scenario.tol);
                    } else {
                        state = selective_update(a.family, *a.outcome,
                                                 std::get<DensityOperator>(state), scenario.tol);
                    }
                } else {
                    const auto rho = DensityOperator::make(rec.before, Tolerances{}.scaled(1e4));
                    state = nonselective_update(a.family, rho);
                }
            } catch (const Error &e) {
                if (e.code() != ErrorCode::ZeroProbabilityBranch) throw;
                throw Error(ErrorCode::ZeroProbabilityBranch,
                            "at region '" + a.name + "': " + e.what());
            }
            run.firings.push_back(std::move(rec));
        }
        run.trajectory.emplace_back(k, state);
        if (auto it = steps.find(k); it != steps.end()) state = apply_unitary(state, it->second);
    }
    run.final_state = state;
    return run;
}

// ---------------------------------------------------------------- verifiers

VerificationReport verify_spacelike_commutation(const Scenario &scenario, std::size_t u,
                                                std::size_t v) {
    scenario.validate();
    require_index(scenario, u);
    require_index(scenario, v);
    const auto &a = scenario.assignments[u];
    const auto &b = scenario.assignments[v];
    if (!a.outcome || !b.outcome) {
        throw Error(ErrorCode::InvalidScenario, "spacelike commutation needs selective outcomes");
    }
    if (!std::holds_alternative<PureState>(scenario.initial)) {
        throw Error(ErrorCode::InvalidScenario, "spacelike commutation needs a pure initial state");
    }
    const CausalSite &site = *scenario.site;
    if (!is_spacelike_separated(site, a.region, b.region)) {
        throw Error(ErrorCode::NotSpacelike, "'" + a.name + "' and '" + b.name + "' are related");
    }
    const auto pair = build_two_foliations(site, a.region, b.region);
    const Tolerances &tol = scenario.tol;

    VerificationReport rep;
    rep.scenario = scenario.id;
    rep.check = "spacelike_commutation";
    rep.tolerances["fidelity"] = tol.fidelity;
    rep.tolerances["phase_match"] = tol.phase_match;
    rep.tolerances["phase_fit"] = tol.phase_fit;
    rep.tolerances["unimodular"] = tol.unimodular;

    PhaseFit fit;
    try {
        fit = extract_phase(selected(a), selected(b), tol);
    } catch (const Error &e) {
        if (e.code() != ErrorCode::ZeroProduct) throw;
        rep.pass = false;
        rep.notes["finding"] = "zero_product";
        return rep;
    }
    rep.evidence["expected_phase"] = fit.phase;
    rep.evidence["fit_residual"] = fit.fit_residual;
    rep.evidence["modulus_deviation"] = fit.modulus_deviation;
    if (!fit.proportional) rep.notes["finding"] = "not_proportional";

    Scenario sub = scenario;
    sub.assignments = {a, b};
    sub.dynamics.clear();

    struct Comparison {
        bool ok = false;
        double fidelity = 0.0;
        double phase = 0.0;
        double k_ratio = 0.0;
        bool tie = false;
    };
    const auto compare = [&](const Scenario &s) {
        Comparison c;
        try {
            const auto r1 = run_foliation(s, pair.first);
            const auto r2 = run_foliation(s, pair.second);
            const cd overlap = std::get<PureState>(r1.final_state).amplitudes().dot(
                std::get<PureState>(r2.final_state).amplitudes());
            c.ok = true;
            c.fidelity = std::abs(overlap);
            c.phase = wrap_angle(std::arg(overlap));
            c.k_ratio = std::sqrt(r2.probability / r1.probability);
            c.tie = r1.order_sensitive_tie || r2.order_sensitive_tie;
        } catch (const Error &e) {
            if (e.code() != ErrorCode::ZeroProbabilityBranch) throw;
        }
        return c;
    };

    const Comparison main = compare(sub);
    rep.evidence["initial_state_skipped"] = main.ok ? 0.0 : 1.0;
    rep.evidence["ray_fidelity"] = main.fidelity;
    rep.evidence["relative_phase"] = main.phase;
    rep.evidence["phase_error"] = main.ok ? angle_distance(main.phase, fit.phase) : 0.0;

    // Battery: computational basis and the uniform superposition.
    const Eigen::Index d = scenario.dim();
    std::vector<PureState> battery;
    for (Eigen::Index j = 0; j < d; ++j) battery.push_back(PureState::basis(d, j));
    battery.push_back(PureState::normalized(Vector::Ones(d)));
    double spread = 0.0, k_dev = 0.0, min_fid = 1.0;
    int used = 0, skipped = 0;
    for (const auto &psi : battery) {
        Scenario s = sub;
        s.initial = psi;
        const auto c = compare(s);
        if (!c.ok) {
            ++skipped;
            continue;
        }
        ++used;
        spread = std::max(spread, angle_distance(c.phase, fit.phase));
        k_dev = std::max(k_dev, std::abs(c.k_ratio - 1.0));
        min_fid = std::min(min_fid, c.fidelity);
    }
    rep.evidence["battery_states"] = used;
    rep.evidence["battery_skipped"] = skipped;
    rep.evidence["battery_max_phase_error"] = spread;
    rep.evidence["battery_min_fidelity"] = used ? min_fid : 0.0;
    rep.evidence["k_ratio_max_deviation"] = k_dev;

    // Shared random dynamics after the bottom slice and before the top one.
    std::mt19937_64 rng(scenario.seed);
    Scenario dyn = sub;
    dyn.dynamics = {{0, Unitary::make(haar_unitary(d, rng), tol.scaled(1e2))},
                    {-1, Unitary::make(haar_unitary(d, rng), tol.scaled(1e2))}};
    const auto cd_ = compare(dyn);
    rep.evidence["dynamics_ray_fidelity"] = cd_.fidelity;
    rep.evidence["dynamics_phase_error"] = cd_.ok ? angle_distance(cd_.phase, fit.phase) : 0.0;
    rep.evidence["order_sensitive_tie"] = (main.tie || cd_.tie) ? 1.0 : 0.0;
    rep.evidence["first_middle_level"] = pair.first_middle;
    rep.evidence["second_middle_level"] = pair.second_middle;

    rep.pass = fit.proportional && main.ok && cd_.ok && used > 0 &&
               main.fidelity >= 1.0 - tol.fidelity &&
               rep.evidence["phase_error"] <= tol.phase_match &&
               min_fid >= 1.0 - tol.fidelity && spread <= tol.phase_match &&
               k_dev <= tol.fidelity && cd_.fidelity >= 1.0 - tol.fidelity &&
               rep.evidence["dynamics_phase_error"] <= tol.phase_match;
    return rep;
}

VerificationReport verify_povm_bosonic(const Scenario &scenario, std::size_t u,
                                       std::size_t v) {
    scenario.validate();
    require_index(scenario, u);
    require_index(scenario, v);
    const auto &a = scenario.assignments[u];
    const auto &b = scenario.assignments[v];
    if (!a.outcome || !b.outcome) {
        throw Error(ErrorCode::InvalidScenario, "POVM check needs selective outcomes");
    }
    if (!is_spacelike_separated(*scenario.site, a.region, b.region)) {
        throw Error(ErrorCode::NotSpacelike, "'" + a.name + "' and '" + b.name + "' are related");
    }
    const Tolerances &tol = scenario.tol;
    const Matrix eu = selected(a).adjoint() * selected(a);
    const Matrix ev = selected(b).adjoint() * selected(b);

    VerificationReport rep;
    rep.scenario = scenario.id;
    rep.check = "povm_bosonic";
    rep.tolerances["commutator"] = tol.commutator;
    rep.tolerances["phase_match"] = tol.phase_match;
    const double comm = (eu * ev - ev * eu).norm();
    rep.evidence["effect_commutator_norm"] = comm;

    bool linkage_ok = true;
    try {
        const auto eta = extract_phase(psd_sqrt(eu, tol), psd_sqrt(ev, tol), tol);
        const auto phi = extract_phase(eu, ev, tol);
        const double err = angle_distance(phi.phase, wrap_angle(4.0 * eta.phase));
        rep.evidence["linkage_checked"] = 1.0;
        rep.evidence["sqrt_phase"] = eta.phase;
        rep.evidence["effect_phase"] = phi.phase;
        rep.evidence["linkage_error"] = err;
        linkage_ok = eta.proportional && phi.proportional && err <= tol.phase_match;
    } catch (const Error &e) {
        if (e.code() != ErrorCode::ZeroProduct) throw;
        rep.evidence["linkage_checked"] = 0.0;
        rep.notes["linkage"] = "inconclusive: effect product vanishes";
    }
    try {
        const auto kraus = extract_phase(selected(a), selected(b), tol);
        if (kraus.proportional) rep.evidence["kraus_phase"] = kraus.phase;
        else rep.notes["kraus_phase"] = "not proportional";
    } catch (const Error &e) {
        if (e.code() != ErrorCode::ZeroProduct) throw;
        rep.notes["kraus_phase"] = "zero product";
    }
    rep.pass = comm < tol.commutator && linkage_ok;
    return rep;
}

VerificationReport verify_no_signalling(const Scenario &scenario, std::size_t sender,
                                        std::size_t probe) {
    scenario.validate();
    require_index(scenario, sender);
    require_index(scenario, probe);
    const auto &a = scenario.assignments[sender];
    const auto &b = scenario.assignments[probe];
    if (a.outcome) {
        throw Error(ErrorCode::InvalidScenario, "sender '" + a.name + "' must be non-selective");
    }
    if (!is_spacelike_separated(*scenario.site, a.region, b.region)) {
        throw Error(ErrorCode::NotSpacelike, "'" + a.name + "' and '" + b.name + "' are related");
    }
    const auto cmp = compare_probe(scenario, sender, probe,
                                   build_two_foliations(*scenario.site, a.region, b.region).first);
    VerificationReport rep;
    rep.scenario = scenario.id;
    rep.check = "no_signalling";
    rep.tolerances["signalling"] = scenario.tol.signalling;
    rep.evidence["max_gap"] = max_gap(cmp.with_sender, cmp.without_sender);
    rep.evidence["tv_distance"] = total_variation(cmp.with_sender, cmp.without_sender);
    rep.evidence["sender_level"] = cmp.sender_level;
    rep.evidence["probe_level"] = cmp.probe_level;
    for (std::size_t k = 0; k < cmp.with_sender.size() && k < 8; ++k) {
        rep.evidence["with_sender_p" + std::to_string(k)] = cmp.with_sender[k];
        rep.evidence["without_sender_p" + std::to_string(k)] = cmp.without_sender[k];
    }
    rep.pass = rep.evidence["max_gap"] < scenario.tol.signalling;
    return rep;
}

double detect_signalling(const Scenario &scenario, std::size_t sender, std::size_t probe) {
    scenario.validate();
    require_index(scenario, sender);
    require_index(scenario, probe);
    const auto cmp = compare_probe(scenario, sender, probe,
                                   ordering_foliation(scenario, sender, probe));
    return total_variation(cmp.with_sender, cmp.without_sender);
}

VerificationReport detect_signalling_report(const Scenario &scenario, std::size_t sender,
                                            std::size_t probe) {
    VerificationReport rep;
    rep.scenario = scenario.id;
    rep.check = "detect_signalling";
    rep.evidence["tv_distance"] = detect_signalling(scenario, sender, probe);
    rep.tolerances["signalling"] = scenario.tol.signalling;
    rep.pass = rep.evidence["tv_distance"] <= scenario.tol.signalling;
    return rep;
}

namespace {

void check_sorkin_placement(const Scenario &s, std::size_t kick, std::size_t mediator,
                            std::size_t probe) {
    const CausalSite &site = *s.site;
    const Region &u = s.assignments[kick].region;
    const Region &w = s.assignments[mediator].region;
    const Region &v = s.assignments[probe].region;
    if (!is_spacelike_separated(site, u, v)) {
        throw Error(ErrorCode::BadCausalPlacement, "kick and probe regions are causally related");
    }
    if (!w.intersects(strict_causal_future(site, u))) {
        throw Error(ErrorCode::BadCausalPlacement,
                    "mediator does not reach the strict causal future of the kick");
    }
    if (!w.intersects(strict_causal_past(site, v))) {
        throw Error(ErrorCode::BadCausalPlacement,
                    "mediator does not reach the strict causal past of the probe");
    }
    if (w.intersects(u) || w.intersects(v)) {
        throw Error(ErrorCode::BadCausalPlacement, "mediator overlaps the kick or probe region");
    }
}

// Kick, mediator, probe applied in that order with no foliation machinery.
std::vector<double> direct_chase(const Scenario &s, std::size_t kick, std::size_t mediator,
                                 std::size_t probe, bool with_kick) {
    Matrix rho = density_of(s.initial);
    const auto apply = [&](const Assignment &a) {
        Matrix out = Matrix::Zero(rho.rows(), rho.cols());
        if (a.outcome) {
            const Matrix &m = selected(a);
            out = m * rho * m.adjoint();
            out /= out.trace().real();
        } else {
            for (const auto &m : a.family.kraus()) out += m * rho * m.adjoint();
        }
        rho = out;
    };
    if (with_kick) apply(s.assignments[kick]);
    apply(s.assignments[mediator]);
    return distribution(s.assignments[probe].family, rho);
}

} // namespace

VerificationReport run_sorkin(const Scenario &scenario, std::size_t kick,
                              std::size_t mediator, std::size_t probe) {
    scenario.validate();
    for (auto i : {kick, mediator, probe}) require_index(scenario, i);
    check_sorkin_placement(scenario, kick, mediator, probe);
    const auto foliation = rank_foliation(*scenario.site);
    const auto cmp = compare_probe(scenario, kick, probe, foliation);
    const auto on = run_foliation(scenario, foliation);
    const int lu = on.firing_level[kick], lw = on.firing_level[mediator],
              lv = on.firing_level[probe];
    if (!(lu < lw && lw < lv)) {
        throw Error(ErrorCode::BadCausalPlacement,
                    "firing order kick < mediator < probe fails in the rank foliation");
    }
    VerificationReport rep;
    rep.scenario = scenario.id;
    rep.check = "sorkin";
    rep.evidence["tv_distance"] = total_variation(cmp.with_sender, cmp.without_sender);
    rep.evidence["kick_level"] = lu;
    rep.evidence["mediator_level"] = lw;
    rep.evidence["probe_level"] = lv;
    for (std::size_t k = 0; k < cmp.with_sender.size() && k < 8; ++k) {
        rep.evidence["with_kick_p" + std::to_string(k)] = cmp.with_sender[k];
        rep.evidence["without_kick_p" + std::to_string(k)] = cmp.without_sender[k];
    }
    rep.tolerances["signalling"] = scenario.tol.signalling;
    rep.pass = rep.evidence["tv_distance"] <= scenario.tol.signalling;
    if (!rep.pass) rep.notes["finding"] = "signal reaches the probe through the mediator";
    return rep;
}

VerificationReport run_sorkin_sweep(const Scenario &scenario, std::size_t kick,
                                    std::size_t mediator, std::size_t probe,
                                    const std::function<Matrix(double)> &mediator_at,
                                    const std::vector<double> &thetas) {
    VerificationReport rep;
    rep.scenario = scenario.id;
    rep.check = "sorkin_sweep";
    double worst = 0.0;
    double previous = -1.0;
    bool monotone = true;
    for (double theta : thetas) {
        Scenario s = scenario;
        auto &m = s.assignments.at(mediator);
        m.family = MeasurementFamily::make({Unitary::make(mediator_at(theta)).matrix()});
        m.outcome = std::nullopt;
        const double tv = run_sorkin(s, kick, mediator, probe).evidence.at("tv_distance");
        const double direct = total_variation(direct_chase(s, kick, mediator, probe, true),
                                              direct_chase(s, kick, mediator, probe, false));
        worst = std::max(worst, std::abs(tv - direct));
        if (tv < previous - scenario.tol.signalling) monotone = false;
        previous = tv;
        rep.series.emplace_back(theta, tv);
    }
    rep.evidence["points"] = static_cast<double>(thetas.size());
    rep.evidence["max_direct_deviation"] = worst;
    rep.evidence["monotone"] = monotone ? 1.0 : 0.0;
    if (!rep.series.empty()) {
        rep.evidence["tv_first"] = rep.series.front().second;
        rep.evidence["tv_last"] = rep.series.back().second;
    }
    rep.tolerances["direct"] = 1e-12;
    rep.pass = worst <= 1e-12 && monotone;
    return rep;
}

// ---------------------------------------------------------------- dichotomy

namespace {

bool proportional(const Matrix &x, const Matrix &y, const Tolerances &tol) {
    return extract_phase(x, y, tol).proportional;
}

struct ChainCheck {
    bool holds = false;
    PhaseFit p12;
    PhaseFit p23;
};

ChainCheck chain(const Matrix &m1, const Matrix &m2, const Matrix &m3, const Tolerances &tol) {
    const Matrix p1 = m2 * m3 * m1;
    const Matrix p2 = m3 * m2 * m1;
    const Matrix p3 = m3 * m1 * m2;
    ChainCheck c;
    c.p12 = extract_phase(p1, p2, tol);
    c.p23 = extract_phase(p2, p3, tol);
    c.holds = c.p12.proportional && c.p23.proportional;
    return c;
}

// Whether (m2, m3) satisfy the chain with m1 yet fail to commute up to a phase.
bool is_counterexample(const Matrix &m1, const Matrix &m2, const Matrix &m3,
                       const Tolerances &tol) {
    try {
        if (!chain(m1, m2, m3, tol).holds) return false;
        return !proportional(m3, m2, tol);
    } catch (const Error &e) {
        if (e.code() != ErrorCode::ZeroProduct) throw;
        return false;
    }
}

std::vector<Matrix> candidate_library(const Matrix &m1) {
    const Eigen::Index d = m1.rows();
    std::vector<Matrix> out;
    const Matrix id = Matrix::Identity(d, d);
    out.push_back(m1);
    Eigen::JacobiSVD<Matrix> svd(m1, Eigen::ComputeFullU | Eigen::ComputeFullV);
    // Projectors onto the range and kernel directions of m1.
    for (Eigen::Index j = 0; j < d; ++j) {
        out.push_back(svd.matrixU().col(j) * svd.matrixU().col(j).adjoint());
        out.push_back(svd.matrixV().col(j) * svd.matrixV().col(j).adjoint());
    }
    for (Eigen::Index a = 0; a < d; ++a) {
        Matrix p = Matrix::Zero(d, d);
        p(a, a) = 1.0;
        out.push_back(p);
        for (Eigen::Index b = 0; b < d; ++b) {
            if (a == b) continue;
            Matrix shear = id;
            shear(a, b) = 1.0;
            out.push_back(shear);
        }
    }
    Matrix f(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = 0; k < d; ++k) {
            f(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(d)),
                                 2.0 * std::numbers::pi * static_cast<double>(j * k) /
                                     static_cast<double>(d));
        }
    }
    out.push_back(f);
    return out;
}

} // namespace

VerificationReport test_sorkin_dichotomy(const Matrix &m1, const Matrix &m2, const Matrix &m3,
                                         const Tolerances &tol) {
    for (const Matrix *m : {&m1, &m2, &m3}) {
        if (m->rows() != m->cols() || m->rows() != m1.rows() || m->rows() == 0) {
            throw Error(ErrorCode::DimensionMismatch, "dichotomy needs three square operators of one size");
        }
    }
    VerificationReport rep;
    rep.check = "sorkin_dichotomy";
    rep.tolerances["phase_fit"] = tol.phase_fit;
    rep.tolerances["condition_number"] = 1e8;

    const auto c = chain(m1, m2, m3, tol);
    rep.evidence["chain_holds"] = c.holds ? 1.0 : 0.0;
    rep.evidence["chain_fit_residual"] = std::max(c.p12.fit_residual, c.p23.fit_residual);

    Eigen::JacobiSVD<Matrix> svd(m1);
    const auto &sv = svd.singularValues();
    const double smax = sv(0), smin = sv(sv.size() - 1);
    const bool invertible = smin > 0.0 && smax / smin < 1e8;
    rep.evidence["m1_invertible"] = invertible ? 1.0 : 0.0;
    rep.evidence["m1_condition_log10"] = smin > 0.0 ? std::log10(smax / smin) : 300.0;

    if (!c.holds) {
        rep.pass = false;
        rep.notes["finding"] = "chain relations do not hold";
        return rep;
    }
    if (invertible) {
        // M2 M3 M1 = λ M3 M2 M1 and M1 invertible give M2 M3 = λ M3 M2.
        bool forced = false;
        try {
            const auto fit = extract_phase(m3, m2, tol);
            forced = fit.proportional;
            rep.evidence["forced_phase"] = fit.phase;
            rep.evidence["forced_fit_residual"] = fit.fit_residual;
        } catch (const Error &e) {
            if (e.code() != ErrorCode::ZeroProduct) throw;
            rep.notes["forced"] = "zero product";
        }
        rep.evidence["forced_commutation"] = forced ? 1.0 : 0.0;
        rep.notes["branch"] = "invertible";
        rep.pass = forced;
        return rep;
    }

    rep.notes["branch"] = "singular";
    if (is_counterexample(m1, m2, m3, tol)) {
        rep.evidence["counterexample_found"] = 1.0;
        rep.evidence["counterexample_from_input"] = 1.0;
        rep.pass = true;
        return rep;
    }
    const auto library = candidate_library(m1);
    for (std::size_t i = 0; i < library.size(); ++i) {
        for (std::size_t j = 0; j < library.size(); ++j) {
            if (is_counterexample(m1, library[i], library[j], tol)) {
                rep.evidence["counterexample_found"] = 1.0;
                rep.evidence["counterexample_from_input"] = 0.0;
                rep.evidence["counterexample_m2_index"] = static_cast<double>(i);
                rep.evidence["counterexample_m3_index"] = static_cast<double>(j);
                rep.pass = true;
                return rep;
            }
        }
    }
    rep.evidence["counterexample_found"] = 0.0;
    rep.pass = false;
    return rep;
}

} // namespace causim
