/*
 * Copyright 2026 The metric_pairs Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <gtest/gtest.h>

#include <filesystem>

#include "metric_pairs/io.hpp"
#include "test_support.hpp"

using namespace mp_test;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / "metric_pairs_test_io";
    fs::create_directories(dir);
    return dir / name;
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::UnknownVerb;  // sentinel: nothing thrown
}

}  // namespace

TEST(Io, SpaceRoundTripJsonAndCsv) {
    std::mt19937_64 rng(70);
    auto s = plane(rng, 5);
    EXPECT_EQ(io::space_from_json(io::to_json(s)), s);
    auto csv = io::space_to_csv(s);
    auto back = io::space_from_raw(io::raw_space_from_csv(csv, "mem"));
    ASSERT_EQ(back.size(), 5u);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(back(i, j), s(i, j));
    auto p = scratch("space.csv");
    io::write_text(p, csv);
    EXPECT_EQ(io::load_space(p).matrix(), s.matrix());
}

TEST(Io, PairTupleRoundTrip) {
    auto s = FiniteMetricSpace::from_matrix({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}, {"a", "b", "c"});
    MetricPair p{s, SubsetRef({0, 2})};
    auto j = io::to_json(p);
    EXPECT_EQ(j["subset"], json({"a", "c"}));
    EXPECT_EQ(io::pair_from_json(j), p);
    MetricTuple t{s, {SubsetRef({1}), SubsetRef({0, 1})}};
    EXPECT_EQ(io::tuple_from_json(io::to_json(t)), t);
    auto path = scratch("pair.json");
    io::write_text(path, j.dump());
    EXPECT_EQ(io::load_tuple(path), MetricTuple(p));
}

TEST(Io, SpaceByRelativePath) {
    auto s = line(3);
    io::write_text(scratch("line3.csv"), io::space_to_csv(s));
    json pair{{"space", "line3.csv"}, {"subset", {"1"}}};
    io::write_text(scratch("by_path.json"), pair.dump());
    auto p = io::load_pair(scratch("by_path.json"));
    EXPECT_EQ(p.space.matrix(), s.matrix());
    EXPECT_EQ(p.subset, SubsetRef({1}));
}

TEST(Io, GluingBracketRoundTrip) {
    MetricPair p{line(2), SubsetRef({0})}, q{line(3), SubsetRef({0})};
    auto b = gh_compact_pair(p, q, 1e-2);
    auto back = io::bracket_from_json(io::to_json(b));
    EXPECT_EQ(back.lo, b.lo);
    EXPECT_EQ(back.hi, b.hi);
    EXPECT_EQ(back.lo_exclusive, b.lo_exclusive);
    ASSERT_TRUE(back.certificate);
    EXPECT_EQ(*back.certificate, *b.certificate);
    auto m = min_approx_eps(p, q, 1e-2);
    EXPECT_EQ(io::bracket_from_json(io::to_json(m)).witness, m.witness);
    PartialMap f{0, std::nullopt, 2};
    EXPECT_EQ(io::partial_map_from_json(io::partial_map_to_json(f)), f);
}

TEST(Io, ProfileRoundTrip) {
    auto prof = counting_profile(line(4), SubsetRef::full(4), CountKind::N, {0.5, 1.5, 2.5});
    EXPECT_EQ(io::profile_from_json(io::to_json(prof)), prof);
    EXPECT_EQ(io::profile_from_csv(io::profile_to_csv(prof)), prof);
    auto [pi, nu] = family_certificate({MetricPair{line(3), SubsetRef({0})}}, {0.5});
    EXPECT_EQ(io::to_json(pi)["kind"], "pi");
    EXPECT_EQ(io::profile_from_json(io::to_json(nu)), nu);
}

TEST(Io, ChainRoundTrip) {
    MetricPair p{line(3), SubsetRef({0})};
    auto g = glue_from_approximation(p.space, p.space, {0, 1, 2}, 0.2);
    auto c = build_chain({p, p, p}, {g, g}, {0.5, 0.25});
    auto back = io::chain_from_json(io::to_json(c));
    EXPECT_EQ(back.members(), 3u);
    EXPECT_EQ(back.eps_budget(), c.eps_budget());
    EXPECT_EQ(back.glues()[1], c.glues()[1]);
}

TEST(Io, ParseErrors) {
    EXPECT_EQ(code_of([] { io::parse_json("{\"dist\": [", "x"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { io::space_from_json(json{{"dist", "nope"}}); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { io::raw_space_from_csv("a,b\n0,zz\nzz,0\n", "m"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { io::raw_space_from_csv("", "m"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { io::read_text("/nonexistent/file.json"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { io::profile_from_csv("eps,Q\n1,2\n"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { io::profile_from_csv("eps,M\n1,2.5\n"); }), ErrorCode::ParseError);
    auto s = line(2);
    EXPECT_EQ(code_of([&] { io::subset_from_json(s, json({"7"}), "w"); }), ErrorCode::InvalidSubset);
    // a CSV that parses but is not a metric reports the metric error
    EXPECT_EQ(code_of([] { io::space_from_raw(io::raw_space_from_csv("a,b\n0,1\n2,0\n", "m")); }),
              ErrorCode::AsymmetricMatrix);
    try {
        io::raw_space_from_csv("a,b\n0,1\n1,x\n", "file.csv");
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("file.csv:3:2"), std::string::npos);
    }
}
