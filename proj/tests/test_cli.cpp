#include "doctest.h"
#include "malcev/io.hpp"
#include "malcev/models.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sys/wait.h>

using namespace malcev;
using io::json;

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(MALCEV_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const std::string& rel) { return std::string(MALCEV_DATA) + "/" + rel; }

std::map<std::string, Complex> series(const json& j) {
  std::map<std::string, Complex> m;
  for (const auto& t : j) m[t["monomial"]] = {t["value"][0].get<double>(), t["value"][1].get<double>()};
  return m;
}

}  // namespace

TEST_CASE("bar-h0 tables") {
  Run r = run("bar-h0 --dga " + data("models/circle.json") + " --cap 6");
  CHECK(r.status == 0);
  CHECK(r.out.find("dimension table (1,1,1,1,1,1,1)") != std::string::npos);
  Run w = run("bar-h0 --dga " + data("models/wedge2.json") + " --cap 3 --json");
  json j = json::parse(w.out);
  CHECK(j["new_dims"] == json::array({1, 2, 4, 8}));
  CHECK(j["dual_lie_dims"] == json::array({2, 1, 2}));
  Run c = run("bar-h0 --dga " + data("models/circle_sigma2.json") + " --cap 3 --json");
  CHECK(json::parse(c.out)["new_dims"] == json::array({2, 2, 2, 2}));
}

TEST_CASE("braid relation through the command line") {
  Run a = run("braid --n 3 --word \"s1 s2 s1\" --trunc 3 --json");
  Run b = run("braid --n 3 --word \"s2 s1 s2\" --trunc 3 --json");
  REQUIRE(a.status == 0);
  REQUIRE(b.status == 0);
  auto sa = series(json::parse(a.out)["series"]), sb = series(json::parse(b.out)["series"]);
  double err = 0;
  for (const auto& [k, v] : sa) err = std::max(err, std::abs(v - (sb.count(k) ? sb[k] : Complex(0))));
  for (const auto& [k, v] : sb) err = std::max(err, std::abs(v - (sa.count(k) ? sa[k] : Complex(0))));
  CHECK(err < 1e-7);
  CHECK(json::parse(a.out)["permutation"] == json::parse(b.out)["permutation"]);
}

TEST_CASE("verify suites, determinism and exit codes") {
  Run v = run("verify --suite shuffle --seed 7");
  CHECK(v.status == 0);
  CHECK(v.out.find("50/50 passed") != std::string::npos);
  CHECK(run("verify --suite shuffle --seed 7").out == v.out);
  Run t1 = run("transport --path " + data("paths/unit_circle.json") + " --form " + data("forms/dlog_origin.json") +
               " --lie " + data("lie/line.json") + " --json");
  CHECK(t1.status == 0);
  auto s = series(json::parse(t1.out)["series"]);
  CHECK(std::abs(s["X"] - Complex(0, 2 * std::acos(-1.0))) < 1e-9);
  CHECK(run("transport --path " + data("paths/unit_circle.json") + " --form " + data("forms/dlog_origin.json") +
            " --lie " + data("lie/line.json") + " --json")
            .out == t1.out);
  CHECK(run("verify --suite nosuch").status == 3);
  CHECK(run("bar-h0 --dga /no/such/file.json").status == 3);
  CHECK(run("braid --n 3 --word s3").status == 3);
  CHECK(run("lie-quotient --lie " + data("models/circle.json")).status == 3);
  Run lq = run("lie-quotient --lie " + data("lie/p3.json") + " --json");
  CHECK(json::parse(lq.out)["dims"] == json::array({3, 1, 2, 3}));
}

TEST_CASE("corpus files match the built-in models") {
  std::size_t seen = 0;
  for (const auto& e : std::filesystem::directory_iterator(data("models"))) {
    std::string name = e.path().stem().string();
    auto doc = io::dga_from_json(io::read_file(e.path().string()), e.path().string());
    auto builtin = models::by_name(name);
    CHECK(io::dga_to_json(*doc.model) == io::dga_to_json(*builtin));
    Run r = run("validate-dga --dga " + e.path().string());
    CHECK(r.status == 0);
    ++seen;
  }
  CHECK(seen == models::names().size());
}
