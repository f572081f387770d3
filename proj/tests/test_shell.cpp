#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "falsilab/cli.hpp"
#include "falsilab/corpus.hpp"
#include "falsilab/eval.hpp"
#include "support.hpp"

using namespace falsilab;
using namespace testing;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json cli_json(std::vector<std::string> args) {
  args.insert(args.begin(), "--json");
  Outcome o = cli(args);
  return nlohmann::json::parse(o.out);
}

std::vector<ParticleObservation> observations(std::initializer_list<std::array<int, 4>> rows) {
  std::vector<ParticleObservation> v;
  for (const auto& r : rows) v.push_back({r[0], {r[1], r[2], r[3]}});
  return v;
}

}  // namespace

TEST_CASE("G_n") {
  Structure g1 = make_gn(1);
  CHECK(g1.size() == 3);
  CHECK(g1.tuples(0).size() == 1);
  Structure g2 = make_gn(2);
  CHECK(g2.size() == 6);
  CHECK(g2.tuples(0).size() == 4);
  CHECK(g2.find_element("S_12"));
  CHECK(g2.holds(0, std::vector<int>{*g2.find_element("2"), *g2.find_element("S_2")}));
  CHECK_FALSE(g2.holds(0, std::vector<int>{*g2.find_element("1"), *g2.find_element("S_2")}));
  for (int n = 1; n <= 4; ++n) {
    Structure g = make_gn(n);
    CHECK(g.size() == n + (1 << n));
    CHECK(static_cast<int>(g.tuples(0).size()) == n * (1 << (n - 1)));
    bool loop = false;
    for (int a = 0; a < g.size(); ++a) loop = loop || g.holds(0, std::vector<int>{a, a});
    CHECK_FALSE(loop);
  }
  CHECK_THROWS_AS(make_gn(6), Error);
  CHECK_THROWS_AS(make_gn(0), Error);
}

TEST_CASE("free particle") {
  ParticleReport line = free_particle_refute(observations({{2, 2, 2, 2}, {0, 0, 0, 0}, {1, 1, 1, 1}, {3, 3, 3, 3}}));
  CHECK_FALSE(line.refuted);
  CHECK(line.ordered.front().time == 0);

  ParticleReport bent = free_particle_refute(observations({{0, 0, 0, 0}, {1, 1, 0, 0}, {2, 2, 1, 0}, {3, 3, 0, 0}}));
  CHECK(bent.refuted);
  REQUIRE(bent.witness);
  CHECK(*bent.witness == 2);
  CHECK(*bent.line == std::array<std::size_t, 2>{0, 1});

  // Repeated positions do not fix the line.
  ParticleReport rest = free_particle_refute(observations({{0, 1, 1, 1}, {1, 1, 1, 1}, {2, 2, 3, 4}, {3, 3, 5, 7}}));
  CHECK_FALSE(rest.refuted);
  CHECK(*rest.line == std::array<std::size_t, 2>{0, 2});

  CHECK_THROWS_AS(free_particle_refute(observations({{0, 0, 0, 0}, {0, 1, 1, 1}})), Error);
  auto parsed = parse_particle_csv("0, 0, 0, 0\n1/2, 1, 2, 3\n");
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[1].time == mpq_class(1, 2));
  CHECK_THROWS_AS(parse_particle_csv("0, 1, 2\n"), Error);
}

TEST_CASE("exit codes") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"gn", "-n", "6"}).code == kExitBudget);
  CHECK(cli({"classify", "--phi", "forall x. ("}).code == kExitUsage);
  std::string acyclic = corpus_path("acyclic.fot");
  std::string cycle = corpus_path("cycle_obs.txt");
  CHECK(cli({"refute", "-T", acyclic, "-O", cycle}).code == kExitOk);
  CHECK(cli({"--fail-on-refuted", "refute", "-T", acyclic, "-O", cycle}).code == kExitNegative);
  CHECK(cli({"--fail-on-refuted", "refute", "-T", acyclic, "-O", corpus_path("chain_obs.txt")}).code == kExitOk);
  CHECK(cli({"refute", "-T", corpus_path("missing.fot"), "-O", cycle}).code == kExitUsage);
}

TEST_CASE("single-dash long options") {
  auto a = cli_json({"classify", "-phi", "forall x. P(x)"});
  CHECK(a["universal"] == true);
  CHECK(a["command"] == "classify");
}

TEST_CASE("json reports") {
  auto r = cli_json({"refute", "-T", corpus_path("acyclic.fot"), "-O", corpus_path("cycle_obs.txt")});
  CHECK(r["verdict"] == "refuted");
  CHECK(r["sentence_index"] == 1);
  auto v = cli_json({"vc", "-M", corpus_path("gn2.struct"), "--phi", "R(x; y)"});
  CHECK(v["dimension"] == 2);
  auto m = cli_json({"markov", "stationary", "-c", corpus_path("lazy.json")});
  CHECK(m["stationary"] == nlohmann::json::array({"1/3", "2/3"}));
  auto e = cli_json({"gn", "-n", "9"});
  CHECK(e.contains("error"));
}

TEST_CASE("corpus verification") {
  Outcome o = cli({"--json", "--fail-on-refuted", "corpus", "verify"});
  CHECK(o.code == kExitOk);
  auto report = nlohmann::json::parse(o.out);
  CHECK(report["failed"] == 0);
  CHECK(report["passed"].get<int>() >= 30);
}

TEST_CASE("golden classify output") {
  struct Case {
    const char* file;
    const char* phi;
  };
  for (const Case& c : {Case{"classify_acyclic.txt", "forall x1,x2,x3. !(edge(x1,x2) & edge(x2,x3) & edge(x3,x1))"},
                        Case{"classify_swan.txt", "forall x. !(S(x) & !W(x))"},
                        Case{"classify_completeness.txt", "forall x,y. weak(x,y) | weak(y,x)"}}) {
    CAPTURE(c.file);
    Outcome o = cli({"classify", "--phi", c.phi});
    CHECK(o.code == kExitOk);
    CHECK(o.out == read_file(golden_path(c.file)));
  }
}
