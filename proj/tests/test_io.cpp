#include "centrelat/generate.hpp"
#include "centrelat/suites.hpp"

#include <doctest.h>

#include <set>

using namespace centrelat;
using io::json;

TEST_CASE("complex and vector round trips") {
  CHECK(io::to_json(Complex(1.5, -2)).dump() == "[1.5,-2]");
  CHECK(io::to_json(Complex(-0.0, 0.0)).dump() == "[0,0]");
  CHECK(io::complex_from(json::parse("[0.25,3]")) == Complex(0.25, 3));
  CHECK(io::complex_from(json(2.0)) == Complex(2.0));
  CHECK_THROWS_AS(io::complex_from(json::parse("[1,2,3]")), StructuralError);
  CHECK_THROWS_AS(io::complex_from(json("x")), StructuralError);

  Rng rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const LatticePtr l = gen::random_lattice(rng, 1 + rng.index(12));
    const LatticePtr back = io::lattice_from(json::parse(io::to_json(*l).dump()));
    CHECK(io::to_json(*back) == io::to_json(*l));
    const ComplexElement z = gen::random_element(rng, l);
    CHECK(io::element_from(json::parse(io::to_json(z).dump())).values() == z.values());
    const CentralOperator t = gen::random_central(rng, l);
    CHECK(io::central_from(io::to_json(t), l) == t);
    const RegularOperator x(l, gen::random_dense(rng, l->dim()));
    CHECK(io::regular_from(json::parse(io::to_json(x).dump()), l).entries() == x.entries());
  }
}

TEST_CASE("malformed input") {
  const LatticePtr l = CoordinateLattice::max_norm(2);
  CHECK_THROWS_AS(io::lattice_from(json::parse(R"({"dim":0})")), StructuralError);
  CHECK_THROWS_AS(io::lattice_from(json::parse(R"({"dim":2,"norm":{"kind":"weighted_p","weights":[1],"p":2}})")),
                  StructuralError);
  CHECK_THROWS_AS(io::central_from(json::parse(R"({"symbol":[[1,0]]})"), l), StructuralError);
  CHECK_THROWS_AS(io::sequence_from(json::parse(R"({"rule":{"name":"reciprocal"}})")), StructuralError);
}

TEST_CASE("sequence specs round trip") {
  for (const std::string& rule : gen::sequence_rule_names()) {
    const SequenceSpec s = gen::canonical_sequence(rule);
    const json j = io::to_json(s);
    CHECK(io::to_json(io::sequence_from(json::parse(j.dump()))) == j);
  }
  const json r = io::to_json(gen::canonical_sequence("reciprocal"));
  CHECK(r["sup"].dump() == "1");
  CHECK(r["tail"]["c"].dump() == "1");
}

TEST_CASE("spectral measure files") {
  const LatticePtr l = CoordinateLattice::max_norm(3);
  ComplexVector sym(3);
  sym << 1.0, 1.0, 2.0;
  const OperatorSpectralMeasure mu_t = build_mu_T(CentralOperator(l, sym));
  const json j = io::to_json(mu_t);
  CHECK(j.dump() == R"({"projections":[[1,1,0],[0,0,1]],"spectrum":[[1,0],[2,0]]})");
  std::vector<Complex> values;
  const LatticeValuedMeasure stored = io::stored_spectral_measure(j, 3, values);
  CHECK(values == std::vector<Complex>{1.0, 2.0});
  CHECK(stored.total() == RealVector::Ones(3));
}

TEST_CASE("generation is deterministic") {
  gen::GenOptions o;
  o.seed = 42;
  o.dim_lo = 2;
  o.dim_hi = 16;
  o.count = 100;
  const auto a = gen::generate(o);
  const auto b = gen::generate(o);
  REQUIRE(a.size() == 100);
  std::set<std::size_t> dims;
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].dump() == b[k].dump());
    CHECK(gen::generate_instance(o, k).dump() == a[k].dump());
    const std::size_t d = a[k]["lattice"]["dim"].get<std::size_t>();
    CHECK(d >= 2);
    CHECK(d <= 16);
    dims.insert(d);
  }
  CHECK(dims.size() >= 10);

  gen::GenOptions other = o;
  other.seed = 43;
  CHECK(gen::generate(other).front().dump() != a.front().dump());

  gen::GenOptions seq;
  seq.mode = "sequence";
  seq.count = 8;
  std::set<std::string> rules;
  for (const json& j : gen::generate(seq)) {
    CHECK(j["kind"] == "sequence");
    rules.insert(j["rule_family"].get<std::string>());
  }
  CHECK(rules.size() == gen::sequence_rule_names().size());

  gen::GenOptions bad = o;
  bad.dim_lo = 0;
  CHECK_THROWS_AS(gen::generate(bad), DomainError);
}

TEST_CASE("instance digests") {
  CHECK(suites::digest(json::object()) == "08f44b07b5901a25");
  CHECK(suites::digest(json::parse(R"({"b":[1,2],"a":1})")) == "33f5506b9080afce");
  gen::GenOptions o;
  o.count = 20;
  std::set<std::string> seen;
  for (const json& j : gen::generate(o)) seen.insert(suites::digest(j));
  CHECK(seen.size() == 20);
}

TEST_CASE("suite reports do not depend on the thread count") {
  gen::GenOptions o;
  o.seed = 7;
  o.dim_lo = 1;
  o.dim_hi = 8;
  o.count = 24;
  auto instances = gen::generate(o);
  gen::GenOptions s;
  s.mode = "sequence";
  s.count = 4;
  for (json& j : gen::generate(s)) instances.push_back(std::move(j));

  const suites::SuiteConfig config;
  const auto one = suites::run_suites(instances, suites::suite_names(), config, 1);
  const auto four = suites::run_suites(instances, suites::suite_names(), config, 4);
  CHECK(one.pass);
  REQUIRE(one.records.size() == four.records.size());
  for (std::size_t k = 0; k < one.records.size(); ++k) {
    json a = suites::to_json(one.records[k]), b = suites::to_json(four.records[k]);
    CHECK(a.dump() == b.dump());
  }
  for (std::size_t k = 1; k < one.records.size(); ++k) CHECK(one.records[k - 1].instance <= one.records[k].instance);
  const json summary = suites::summary_json(one)["summary"];
  CHECK(summary["failed"] == 0);
  CHECK(summary["aggregate"] == "pass");
}

TEST_CASE("suite selection and bad instances") {
  CHECK(suites::is_suite("cstar"));
  CHECK_FALSE(suites::is_suite("none"));
  CHECK_FALSE(suites::is_suite("bogus"));
  const auto empty = suites::run_suites(gen::generate({}), {}, {}, 1);
  CHECK(empty.records.empty());
  CHECK(empty.pass);

  const auto broken = suites::run_suite("cstar", json::parse(R"({"kind":"atomic","lattice":{"dim":-1}})"), {});
  REQUIRE(broken.size() == 1);
  CHECK(broken.front().tag == "load");
  CHECK_FALSE(broken.front().pass);

  gen::GenOptions seq;
  seq.mode = "sequence";
  CHECK(suites::run_suite("polar", gen::generate(seq).front(), {}).empty());
}
