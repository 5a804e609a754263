#include <doctest.h>

#include <cstring>
#include <sstream>

#include <json.hpp>

#include "monferm/config.hpp"
#include "monferm/errors.hpp"
#include "monferm/output.hpp"
#include "support.hpp"

using namespace monferm;

namespace {

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string l;
  while (std::getline(ss, l)) out.push_back(l);
  return out;
}

RunMeta sample_meta() {
  RunMeta m;
  m.run_id = "r1";
  m.engine = "gaussian";
  m.params.L = 16;
  m.params.gamma = 0.1;
  m.params.J2 = cplx(0.25, -0.5);
  m.params.boundary = Boundary::Periodic;
  m.seed = 42;
  return m;
}

}  // namespace

TEST_CASE("csv header is fixed") {
  std::ostringstream os;
  write_csv_header(os, {"extra"});
  const auto l = lines_of(os.str());
  REQUIRE(l.size() == 4);
  CHECK(l[0] ==
        "# units: J1 = 1; energies and V in J1, gamma in J1, t in 1/J1, lengths in lattice sites; entropies in nats");
  CHECK(l[1].rfind("# build: ", 0) == 0);
  CHECK(l[2] == "# extra");
  CHECK(l[3] == "run_id,engine,L,gamma,V,J1,J2_re,J2_im,n0,boundary,seed,observable,region,t,mean,stderr,n_traj");
}

TEST_CASE("csv record fields") {
  std::ostringstream os;
  write_csv_record(os, sample_meta(), {"S1", "A", 2.5, 0.1, 0.01, 8});
  write_csv_record(os, sample_meta(), {"S1", "A", std::nullopt, 0.1, 0.01, 8});
  const auto l = lines_of(os.str());
  CHECK(l[0] == "r1,gaussian,16,0.10000000000000001,0,1,0.25,-0.5,0.5,periodic,42,S1,A,2.5,0.10000000000000001,"
                "0.01,8");
  CHECK(l[1].find(",steady,") != std::string::npos);
}

TEST_CASE("format_double round trips") {
  CounterRng r(5);
  for (int k = 0; k < 2000; ++k) {
    double v;
    const std::uint64_t bits = r();
    std::memcpy(&v, &bits, sizeof v);
    if (!std::isfinite(v)) continue;
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("jsonl record parses") {
  std::ostringstream os;
  write_jsonl_record(os, sample_meta(), {"covG", "B|C", 1.0 / 3.0, -0.25, 1e-300, 3});
  write_jsonl_record(os, sample_meta(), {"S1", "A", std::nullopt, 0.0, 0.0, 1});
  const auto l = lines_of(os.str());
  const auto j = nlohmann::json::parse(l[0]);
  CHECK(j.at("observable") == "covG");
  CHECK(j.at("region") == "B|C");
  CHECK(j.at("t").get<double>() == 1.0 / 3.0);
  CHECK(j.at("stderr").get<double>() == 1e-300);
  CHECK(j.at("J2_im").get<double>() == -0.5);
  CHECK(j.at("boundary") == "periodic");
  CHECK(nlohmann::json::parse(l[1]).at("t") == "steady");
}

TEST_CASE("config text round trip") {
  RunConfig c;
  c.params.L = 24;
  c.params.gamma = 0.3;
  c.params.J2 = cplx(0.1, 0.2);
  c.params.n0 = 0.05;
  c.params.boundary = Boundary::Periodic;
  c.protocol.n_traj = 7;
  c.protocol.master_seed = 123456789012345ULL;
  c.observables = {ObservableId::parse("S2"), ObservableId::parse("Cx"), ObservableId::parse("SN:3")};
  c.run_id = "abc";
  c.write_events = true;
  const std::string text = to_config_text(c);
  const RunConfig d = parse_config(text);
  CHECK(to_config_text(d) == text);
  CHECK(d.params.J2 == c.params.J2);
  CHECK(d.protocol.master_seed == c.protocol.master_seed);
  CHECK(d.observables.size() == 3);

  // Every written key is a known key, in order.
  std::vector<std::string> keys;
  for (const auto& l : lines_of(text)) keys.push_back(l.substr(0, l.find(' ')));
  CHECK(keys == config_keys());
}

TEST_CASE("config parser errors") {
  CHECK_THROWS_AS(parse_config("L = 8\nfoo = 1\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("L = 8\nL = 9\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("gamma = 0.1x\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("L = 8.5\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("L 8\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("seed = -1\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("observables = S1,bogus\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("events = maybe\n"), InvalidArgument);
  const RunConfig c = parse_config("# comment\n  L = 12   # trailing\n\ngamma=0.25\n");
  CHECK(c.params.L == 12);
  CHECK(c.params.gamma == 0.25);
}

TEST_CASE("config validation") {
  RunConfig c;
  c.params.L = 8;
  CHECK_NOTHROW(c.validate());
  c.params.V = 1.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c.protocol.trajectory.engine = Engine::Tdhf;
  CHECK_NOTHROW(c.validate());

  RunConfig o;
  o.params.L = 8;
  o.params.boundary = Boundary::Open;
  o.observables = {ObservableId::parse("Cx")};
  CHECK_THROWS_AS(o.validate(), InvalidArgument);
  o.params.boundary = Boundary::Periodic;
  CHECK_NOTHROW(o.validate());

  RunConfig f;
  f.format = "xml";
  CHECK_THROWS_AS(f.validate(), InvalidArgument);
  f.format = "csv";
  f.run_id = "a/b";
  CHECK_THROWS_AS(f.validate(), InvalidArgument);
}

TEST_CASE("correlator snapshots round trip") {
  RunMeta m = sample_meta();
  m.params.L = 4;
  TrajectoryRecord a, b;
  a.probe_times = {1.0, 2.0};
  a.correlator = {{0.25, -0.1, 0.0, -0.15}, {0.2, -0.1, 0.0, -0.1}};
  b.probe_times = {1.0};
  b.correlator = {{1.0 / 3.0, 0.0, 0.0, -1.0 / 3.0}};
  std::stringstream ss;
  write_correlator_jsonl(ss, m, 0, a);
  write_correlator_jsonl(ss, m, 1, b);
  const CorrelatorSnapshots s = read_correlator_jsonl(ss);
  CHECK(s.meta.run_id == "r1");
  CHECK(s.meta.params.L == 4);
  CHECK(s.meta.params.gamma == m.params.gamma);
  CHECK(s.meta.params.boundary == Boundary::Periodic);
  REQUIRE(s.cx.size() == 3);
  CHECK(s.traj == std::vector<int>{0, 0, 1});
  CHECK(s.cx[2] == b.correlator[0]);

  std::stringstream mixed;
  write_correlator_jsonl(mixed, m, 0, a);
  RunMeta other = m;
  other.run_id = "r2";
  write_correlator_jsonl(mixed, other, 0, a);
  CHECK_THROWS_AS(read_correlator_jsonl(mixed), InvalidArgument);

  std::stringstream empty;
  CHECK_THROWS_AS(read_correlator_jsonl(empty), InvalidArgument);
  std::stringstream junk("{\"run_id\": 3}\n");
  CHECK_THROWS_AS(read_correlator_jsonl(junk), InvalidArgument);
}

TEST_CASE("events and profile writers") {
  TrajectoryRecord r;
  r.events.push_back({0.5, 3, Outcome::Click, 0.25});
  std::ostringstream os;
  write_events_jsonl(os, "r", 2, r);
  const auto j = nlohmann::json::parse(os.str());
  CHECK(j.at("traj") == 2);
  CHECK(j.at("events")[0][1] == 3);
  CHECK(j.at("events")[0][3].get<double>() == 0.25);

  std::ostringstream p;
  write_profile_csv(p, {0.0, 1.0}, {0.5, 3.0});
  CHECK(p.str() == "y,phi\n0,0.5\n1,3\n");
}
