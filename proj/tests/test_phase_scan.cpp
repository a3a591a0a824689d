#include "doctest.h"

#include "srcomb/phase_scan.hpp"
#include "srcomb/stability.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace srcomb;

namespace {

std::string read_body(const std::string& path) {
  std::ifstream is(path);
  std::string line, body;
  std::getline(is, line);  // header carries a timestamp
  while (std::getline(is, line)) body += line + "\n";
  return body;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("srcomb_" + name)).string();
}

bool consistent(const PhasePoint& p, double z2_threshold = 0.01) {
  switch (p.label) {
    case PhaseLabel::Z2_LIMIT_CYCLE:
      return p.diag.periodic && p.diag.asymmetry <= z2_threshold;
    case PhaseLabel::ASYM_LIMIT_CYCLE:
      return p.diag.periodic && p.diag.asymmetry > z2_threshold;
    case PhaseLabel::NONPERIODIC:
      return !p.diag.periodic;
    case PhaseLabel::TSS:
    case PhaseLabel::NTSS:
      return !p.diag.periodic && p.diag.dynamic_probes == 0;
    case PhaseLabel::COEXIST_NTSS:
      return p.diag.dynamic_probes > 0;
  }
  return false;
}

}  // namespace

TEST_CASE("labels round-trip") {
  for (auto l : {PhaseLabel::TSS, PhaseLabel::NTSS, PhaseLabel::Z2_LIMIT_CYCLE, PhaseLabel::ASYM_LIMIT_CYCLE,
                 PhaseLabel::NONPERIODIC, PhaseLabel::COEXIST_NTSS})
    CHECK(parse_label(to_string(l)) == l);
  CHECK_FALSE(parse_label("PHASE_IV"));
}

TEST_CASE("point classification") {
  ClassifyOptions dyn;
  dyn.analytic_shortcut = false;
  SUBCASE("fixed points") {
    CHECK(classify_point(0.5, 2.2, dyn).label == PhaseLabel::TSS);
    CHECK(classify_point(0.5, 1.5, dyn).label == PhaseLabel::NTSS);
    const PhasePoint a = classify_point(0.5, 2.2);
    CHECK(a.label == PhaseLabel::TSS);
    CHECK(a.diag.analytic);
  }
  SUBCASE("cycles") {
    const PhasePoint z = classify_point(1.5, 0.5, dyn);
    CHECK(z.label == PhaseLabel::Z2_LIMIT_CYCLE);
    CHECK(consistent(z));
    CHECK(z.diag.f0 == doctest::Approx(1 / 8.367).epsilon(1e-3));
    const PhasePoint s = classify_point(0.42, 0.056, dyn);
    CHECK(s.label == PhaseLabel::ASYM_LIMIT_CYCLE);
    CHECK(consistent(s));
  }
  SUBCASE("just past the subcritical Hopf point") {
    CHECK(std::abs(delta_minus(0.8) - 0.888) < 1e-3);
    const PhasePoint p = classify_point(0.890, 0.800, dyn);
    CHECK(p.diag.dynamic_probes == dyn.probes);
    CHECK(consistent(p));
  }
  SUBCASE("coexistence band") {
    const PhasePoint p = classify_point(0.97, 0.95);
    CHECK(p.label == PhaseLabel::COEXIST_NTSS);
    CHECK(consistent(p));
  }
  SUBCASE("domain") {
    CHECK_THROWS_AS(classify_point(-0.1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(classify_point(0.1, -0.5), std::invalid_argument);
  }
}

TEST_CASE("dynamics agree with the analytic regions away from boundaries") {
  ClassifyOptions dyn;
  dyn.analytic_shortcut = false;
  dyn.probes = 3;
  int checked = 0;
  for (double d = 0.05; d < 2.0; d += 0.15) {
    for (double W = 0.05; W < 2.0; W += 0.15) {
      const auto a = analytic_label(d, W);
      if (!a) continue;
      // margin 0.02 from the I/II semicircle and the II/III Hopf line
      const double circle = std::abs(std::hypot(d, W - 1) - 1);
      const bool near_hopf = W < 1 && std::abs(d - delta_minus(W)) < 0.02;
      if (circle < 0.02 || near_hopf) continue;
      ++checked;
      const PhasePoint p = classify_point(d, W, dyn);
      if (*a == PhaseLabel::TSS) {
        CHECK(p.label == PhaseLabel::TSS);
      } else {
        CHECK((p.label == PhaseLabel::NTSS || p.label == PhaseLabel::COEXIST_NTSS));
      }
    }
  }
  CHECK(checked > 40);
}

TEST_CASE("scan output is deterministic and resumable") {
  GridSpec g{0.4, 1.6, 0.3, 1.8, 4, 3};
  ScanOptions o;
  o.classify.probes = 2;
  o.classify.horizon = 4e3;
  o.classify.transient = 2e3;
  o.classify.seed = 17;

  const std::string a = temp_path("scan_a.ndjson"), b = temp_path("scan_b.ndjson");
  std::filesystem::remove(a);
  std::filesystem::remove(b);
  o.out = a;
  const auto ra = scan(g, o);
  REQUIRE(ra.size() == g.size());
  o.out = b;
  o.parallel = false;
  scan(g, o);
  CHECK(read_body(a) == read_body(b));

  // drop the last records and resume
  {
    std::ifstream is(b);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(is, line)) lines.push_back(line);
    std::ofstream os(b, std::ios::trunc);
    for (std::size_t i = 0; i + 5 < lines.size(); ++i) os << lines[i] << '\n';
    os << lines[lines.size() - 5].substr(0, 20);  // truncated record
  }
  o.resume = true;
  const auto rb = scan(g, o);
  CHECK(rb.size() == g.size());
  CHECK(read_body(a) == read_body(b));

  const auto back = read_phase_map(a);
  REQUIRE(back.size() == g.size());
  for (std::size_t k = 0; k < back.size(); ++k) {
    CHECK(back[k].index == k);
    CHECK(back[k].point.label == ra[k].point.label);
    CHECK(back[k].point.delta == ra[k].point.delta);
  }
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST_CASE("serial and parallel grid walks agree") {
  GridSpec g{0.2, 1.4, 0.2, 1.4, 3, 3};
  ClassifyOptions o;
  o.probes = 2;
  o.horizon = 3e3;
  o.transient = 1e3;
  const auto s = scan_serial(g, o);
  const auto p = scan_parallel(g, o, 2);
  REQUIRE(s.size() == p.size());
  for (std::size_t k = 0; k < s.size(); ++k) CHECK(to_ndjson(s[k]) == to_ndjson(p[k]));
}

TEST_CASE("record format") {
  ScanRecord r;
  r.index = 3;
  r.i = 1;
  r.j = 2;
  r.point.delta = 0.1 + 0.2;
  r.point.W = 1.0 / 3;
  r.point.label = PhaseLabel::Z2_LIMIT_CYCLE;
  r.point.diag.periodic = true;
  r.point.diag.f0 = 0.04522;
  r.point.diag.multipliers = {cplx(1, 0), cplx(0.5, -0.25)};
  const std::string line = to_ndjson(r);
  CHECK(line.find("\"schema_version\":1") != std::string::npos);
  CHECK(line.find("\"omega_q\":null") != std::string::npos);
  const auto back = parse_ndjson(line);
  REQUIRE(back);
  CHECK(back->point.delta == r.point.delta);  // full precision
  CHECK(back->point.W == r.point.W);
  CHECK(std::isnan(back->point.diag.omega_q));
  CHECK(back->point.diag.multipliers[1] == cplx(0.5, -0.25));
  CHECK_FALSE(parse_ndjson("{\"kind\":\"header\"}"));
  CHECK_FALSE(parse_ndjson("{\"index\": 1"));
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(scan_serial(GridSpec{0, 1, 0, 1, 0, 2}, {}), std::invalid_argument);
  CHECK_THROWS_AS(scan_serial(GridSpec{-1, 1, 0, 1, 2, 2}, {}), std::invalid_argument);
}
