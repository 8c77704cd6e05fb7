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

#include <catch_amalgamated.hpp>

#include <random>

#include "causal_oracle.hpp"
#include "causim/causal_queries.hpp"
#include "causim/error.hpp"
#include "causim/foliation.hpp"

using namespace causim;

namespace {

std::optional<ErrorCode> build_status(const CausalSite &site, const Region &u,
                                      const Region &v) {
    try {
        auto pair = build_two_foliations(site, u, v);
        REQUIRE(check_two_foliations(site, pair, u, v).all());
        return std::nullopt;
    } catch (const Error &e) {
        return e.code();
    }
}

// Existence of both separating slices, decided by the oracle.
bool oracle_expects_success(const CausalSite &site, const Region &u, const Region &v) {
    oracle::Poset ref(site);
    const auto iu = oracle::to_ids(u);
    const auto iv = oracle::to_ids(v);
    for (const auto &ends : {ref.minimal(), ref.maximal()}) {
        for (EventId p : ends) {
            if (iu.count(p) || iv.count(p)) return false;
        }
    }
    return ref.separating_slice_exists(iu, iv) && ref.separating_slice_exists(iv, iu);
}

void check_monotone(const CausalSite &site, const Foliation &f) {
    for (EventId a = 0; a < site.size(); ++a) {
        for (EventId b = 0; b < site.size(); ++b) {
            if (site.precedes(a, b)) REQUIRE(f.level(a) < f.level(b));
        }
    }
    std::size_t total = 0;
    for (int k = 0; k < f.level_count(); ++k) {
        auto s = f.slice(site, k);
        REQUIRE_FALSE(s.empty());
        REQUIRE(is_acausal(site, s));
        total += s.size();
    }
    REQUIRE(total == site.size());
}

} // namespace

TEST_CASE("rank foliation of a lattice is the time coordinate") {
    auto site = CausalSite::diamond_lattice(6, 4, 2);
    auto f = rank_foliation(site);
    for (const auto &e : site.events()) CHECK(f.level(e.id) == e.coords->t);
    check_monotone(site, f);
}

TEST_CASE("foliation validation") {
    auto site = CausalSite::from_relations(3, {{0, 1}, {1, 2}});
    CHECK_NOTHROW(Foliation::make(site, {0, 1, 2}));
    CHECK_THROWS_AS(Foliation::make(site, {0, 0, 1}), Error);
    CHECK_THROWS_AS(Foliation::make(site, {0, 2, 3}), Error);
    CHECK_THROWS_AS(Foliation::make(site, {0, 1}), Error);
    auto other = CausalSite::from_relations(3, {{0, 1}, {1, 2}});
    auto f = Foliation::make(site, {0, 1, 2});
    CHECK_THROWS_AS(f.slice(other, 0), Error);
}

TEST_CASE("two foliations around side-by-side regions") {
    auto site = CausalSite::diamond_lattice(8, 4, 2);
    auto u = site.region_at({{3, 0}, {4, 0}});
    auto v = site.region_at({{3, 4}, {4, 4}});
    auto pair = build_two_foliations(site, u, v);
    auto check = check_two_foliations(site, pair, u, v);
    CHECK(check.all());
    check_monotone(site, pair.first);
    check_monotone(site, pair.second);
    CHECK(oracle_expects_success(site, u, v));
}

TEST_CASE("causally related regions are rejected") {
    auto site = CausalSite::diamond_lattice(8, 4, 2);
    CHECK(build_status(site, site.region_at({{2, 1}}), site.region_at({{5, 1}})) ==
          ErrorCode::NotSpacelike);
    auto column = CausalSite::diamond_lattice(6, 0, 2);
    auto status = build_status(column, column.region_at({{2, 0}}), column.region_at({{4, 0}}));
    CHECK((status == ErrorCode::NotSpacelike || status == ErrorCode::NoFoliationFound));
}

TEST_CASE("near-null pair has no separating slice") {
    auto site = CausalSite::diamond_lattice(6, 3, 2);
    auto u = site.region_at({{4, 0}});
    auto v = site.region_at({{1, 2}});
    REQUIRE(is_spacelike_separated(site, u, v));
    CHECK_FALSE(oracle_expects_success(site, u, v));
    CHECK(build_status(site, u, v) == ErrorCode::NoFoliationFound);
}

TEST_CASE("construction succeeds exactly when the oracle finds slices") {
    std::mt19937_64 rng(314);
    int successes = 0, failures = 0;
    auto try_pair = [&](const CausalSite &site, const Region &u, const Region &v) {
        if (u.empty() || v.empty() || !is_spacelike_separated(site, u, v)) return;
        const bool expected = oracle_expects_success(site, u, v);
        const auto status = build_status(site, u, v);
        REQUIRE(expected == !status.has_value());
        if (status) {
            REQUIRE(*status == ErrorCode::NoFoliationFound);
            ++failures;
        } else {
            ++successes;
        }
    };
    for (int i = 0; i < 60; ++i) {
        auto site = oracle::random_site(8 + i % 7, 0.3, rng);
        try_pair(site, oracle::random_region(site, 0.15, rng),
                 oracle::random_region(site, 0.15, rng));
    }
    auto lattice = CausalSite::diamond_lattice(8, 4, 2);
    std::uniform_int_distribution<int> t(0, 8), x(0, 4);
    for (int i = 0; i < 80; ++i) {
        try_pair(lattice, lattice.region_at({{t(rng), x(rng)}}),
                 lattice.region_at({{t(rng), x(rng)}}));
    }
    CHECK(successes > 5);
    CHECK(failures > 5);
}
