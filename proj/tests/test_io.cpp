// Copyright 2026 The rydanneal Authors
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


#include <cstdio>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "rydanneal/io.hpp"
#include "rydanneal/manifest.hpp"
#include "rydanneal/problems.hpp"

using namespace rydanneal;

namespace {

Json through_text(const Json& j) { return Json::parse(j.dump()); }

}  // namespace

TEST_SUITE("io") {

TEST_CASE("number formatting") {
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(27.2503289757) == "27.2503289757");
}

TEST_CASE("QUBO models round-trip through text with metadata") {
  std::mt19937_64 rng(91);
  const QuboModel q = oracle::random_qubo(6, rng);
  const Json j = through_text(to_json(q, {{"family", "random"}}));
  Metadata meta;
  const QuboModel back = model_from_json(j, &meta);
  CHECK(meta.at("family") == "random");
  for (Bitstring b = 0; b < 64; ++b) CHECK(back.energy(b) == q.energy(b));
}

TEST_CASE("Ising input is converted to the same energies") {
  std::mt19937_64 rng(92);
  const QuboModel q = oracle::random_qubo(5, rng);
  const IsingModel m = qubo_to_ising(q);
  const QuboModel back = model_from_json(through_text(to_json(m)));
  for (Bitstring b = 0; b < 32; ++b) CHECK(back.energy(b) == doctest::Approx(q.energy(b)));
}

TEST_CASE("malformed models are rejected") {
  CHECK_THROWS_AS(model_from_json(Json::parse(R"({"linear":[1]})")), InvalidArgument);
  CHECK_THROWS_AS(model_from_json(Json::parse(R"({"n":2,"linear":[1]})")), InvalidArgument);
  CHECK_THROWS_AS(model_from_json(Json::parse(R"({"n":2,"quadratic":[[0,0,1]]})")), InvalidArgument);
  CHECK_THROWS_AS(model_from_json(Json::parse(R"({"n":2,"quadratic":[[0,5,1]]})")), InvalidArgument);
  CHECK_THROWS_AS(model_from_json(Json::parse(R"({"n":2,"convention":"pubo"})")), InvalidArgument);
  CHECK_THROWS_AS(model_from_json(Json::parse("[1,2]")), InvalidArgument);
}

TEST_CASE("schedules round-trip") {
  Schedule s;
  s.duration = 42.0;
  s.basis = PulseBasis::Spline;
  s.delta_initial = -2.5;
  s.delta_coefficients = Eigen::Vector3d(0.1, -0.2, 0.3);
  s.omega_coefficients = Eigen::Vector2d(4.0, 5.0);
  s.omega_max = 9.0;
  s.omega_nonnegative = true;
  s.sample_count = 17;
  const Schedule t = schedule_from_json(through_text(to_json(s)));
  CHECK(t.duration == s.duration);
  CHECK(t.basis == s.basis);
  CHECK(t.delta_initial == s.delta_initial);
  CHECK(t.parameters() == s.parameters());
  CHECK(t.omega_max == s.omega_max);
  CHECK(t.omega_nonnegative);
  CHECK(t.sample_count == 17);
}

TEST_CASE("layouts, limits, targets and plans round-trip") {
  AtomLayout l;
  l.positions = (Eigen::MatrixXd(2, 3) << 0, 0, 0, 1.5, 2.5, -3).finished();
  const AtomLayout l2 = layout_from_json(through_text(to_json(l)));
  CHECK(l2.positions == l.positions);
  CHECK(l2.c6 == l.c6);

  HardwareLimits h;
  h.r_far = 15.0;
  CHECK(limits_from_json(through_text(to_json(h))).r_far == 15.0);

  const EncodedTarget t = encode(qubo_to_ising(paper_instance("two_sat").model));
  const EncodedTarget t2 = encoded_from_json(through_text(to_json(t)));
  CHECK(t2.interactions == t.interactions);
  CHECK(t2.detunings == t.detunings);
  CHECK(t2.offset == t.offset);
  CHECK(t2.gauge == t.gauge);

  const StagePlan p = plan_from_json(through_text(to_json(StagePlan::default_plan())));
  CHECK(p.total_budget() == 800);
  CHECK(p.stages[1].kind == StageKind::Simplex);
  CHECK_THROWS_AS(plan_from_json(Json::parse(R"({"stages":[{"kind":"adam","max_evals":3}]})")),
                  InvalidArgument);
}

TEST_CASE("hardness rows round-trip") {
  const HardnessReport r =
      hardness_report("xor", paper_instance("xor_sat").model, EnergyConvention::Spin, 0.0);
  const HardnessReport b = hardness_from_json(through_text(to_json(r)));
  CHECK(b.name == "xor");
  CHECK(b.hp == r.hp);
  CHECK(b.d_opt == r.d_opt);
  CHECK(b.subspaces.size() == r.subspaces.size());
}

TEST_CASE("trajectory CSV layout") {
  EncodedTarget t;
  t.detunings = Eigen::Vector2d(1.0, 3.0);
  t.interactions = Eigen::MatrixXd::Zero(2, 2);
  Trajectory traj;
  traj.samples.push_back({0.0, 0.0, -1.0, 0.0, 0.0, 1.0});
  traj.samples.push_back({1.0, 0.5, 0.5, -1.0, 0.25, 1.0});
  const std::string csv = trajectory_csv(traj, t, "0123456789abcdef");
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "# manifest 0123456789abcdef");
  std::getline(in, line);
  CHECK(line == "t_us,omega,delta_G,delta_1,delta_2,E,F");
  std::getline(in, line);
  CHECK(line == "0,0,-1,-1,-3,0,0");
  std::getline(in, line);
  CHECK(line == "1,0.5,0.5,0.5,1.5,-1,0.25");
  CHECK(trajectory_csv(traj, t).rfind("t_us", 0) == 0);
}

TEST_CASE("manifest hashing") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  RunManifest m;
  m.command = "pipeline";
  m.instance = "two_sat";
  m.seed = 3;
  m.created = "2026-01-01T00:00:00Z";
  RunManifest later = m;
  later.created = "2027-01-01T00:00:00Z";
  CHECK(m.hash() == later.hash());
  CHECK(m.hash().size() == 16);
  RunManifest other = m;
  other.seed = 4;
  CHECK(other.hash() != m.hash());
  const Json j = m.to_json();
  CHECK(j["hash"] == m.hash());
  CHECK(j["created"] == m.created);
  CHECK(utc_timestamp().size() == 20);
}

TEST_CASE("file helpers") {
  CHECK_THROWS_AS(read_json_file("/nonexistent/file.json"), InvalidArgument);
  const std::string path = "io_test_scratch.json";
  write_text_file(path, "{\"a\": 1}");
  CHECK(read_json_file(path)["a"] == 1);
  write_text_file(path, "{oops");
  CHECK_THROWS_AS(read_json_file(path), InvalidArgument);
  std::remove(path.c_str());
}

}
