#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ekrlab/experiments.hpp"
#include "ekrlab/family_io.hpp"

using namespace ekrlab;

namespace {

std::string strip_generated(const std::string& text) {
  std::istringstream is(text);
  std::ostringstream os;
  std::string line;
  while (std::getline(is, line))
    if (line.rfind("# generated", 0) != 0 && line.find("\"generated\"") == std::string::npos)
      os << line << "\n";
  return os.str();
}

}  // namespace

TEST_CASE("ekr sweep rows: p = 1 is certain") {
  EkrAnalyzer an(5, 2);
  SweepConfig cfg;
  cfg.p_grid = {0.9, 1.0};
  cfg.trials = 300;
  cfg.seed = 21;
  auto rows = run_ekr_sweep(an, cfg);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].strong_freq == doctest::Approx(1.0));
  CHECK(rows[1].weak_freq == doctest::Approx(1.0));
  CHECK(rows[0].wilson_lo <= rows[0].strong_freq);
  CHECK(rows[0].strong_freq <= rows[0].wilson_hi);
}

TEST_CASE("sweep output reproducibility modulo the generated line") {
  EkrAnalyzer an(5, 2);
  SweepConfig cfg;
  cfg.p_grid = {0.8, 0.95};
  cfg.trials = 150;
  cfg.seed = 5;
  auto rows = run_ekr_sweep(an, cfg);
  std::ostringstream a, b;
  write_sweep_csv(a, cfg, rows, "2026-01-01T00:00:00Z");
  auto rows2 = run_ekr_sweep(an, cfg);
  write_sweep_csv(b, cfg, rows2, "2099-12-31T23:59:59Z");
  CHECK(a.str() != b.str());
  CHECK(strip_generated(a.str()) == strip_generated(b.str()));

  std::ostringstream ja, jb;
  write_sweep_json(ja, cfg, rows, "t1");
  write_sweep_json(jb, cfg, rows2, "t2");
  CHECK(strip_generated(ja.str()) == strip_generated(jb.str()));
}

TEST_CASE("sweep frequencies match the exact oracle within the intervals") {
  EkrAnalyzer an(5, 2);
  auto u = an.universe();
  SweepConfig cfg;
  cfg.p_grid = {0.5, 0.75, 0.95};
  cfg.trials = 10000;
  cfg.seed = 424242;
  auto rows = run_ekr_sweep(an, cfg);
  for (const auto& row : rows) {
    double exact = exact_prob(u, row.p, [&](const RankedFamily& f) {
      return an.verdict(SampleX(u, f.members(), row.p, 0)).strong;
    });
    double half = (row.wilson_hi - row.wilson_lo) / 2;
    CHECK(std::abs(row.strong_freq - exact) <= 3 * half);
  }
}

TEST_CASE("sweep determinism across thread counts") {
  EkrAnalyzer an(5, 2);
  SweepConfig cfg;
  cfg.p_grid = {0.85};
  cfg.trials = 2000;
  cfg.seed = 99;
  cfg.threads = 1;
  auto serial = run_ekr_sweep(an, cfg);
  cfg.threads = 4;
  auto parallel = run_ekr_sweep(an, cfg);
  CHECK(serial[0].strong_freq == parallel[0].strong_freq);
  CHECK(serial[0].weak_freq == parallel[0].weak_freq);
}

TEST_CASE("sperner sweep: p = 1 always satisfies the identity") {
  SpernerConfig cfg;
  cfg.n = 4;
  cfg.p_grid = {1.0};
  cfg.trials = 50;
  cfg.seed = 3;
  auto rows = run_sperner_sweep(cfg);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].wwxx_freq == doctest::Approx(1.0));
  CHECK(rows[0].mean_width == doctest::Approx(6.0));  // C(4,2)

  std::ostringstream os;
  write_sperner_csv(os, cfg, rows, "now");
  CHECK(os.str().find("wwxx_freq") != std::string::npos);
}

TEST_CASE("enumerate summary at (5,2) and file round trip") {
  MCorrespondence corr(5, 2);
  std::ostringstream os;
  auto sum = enumerate_to_stream(corr, os);
  CHECK(sum.count == 10);
  CHECK(sum.max_size == 3);
  CHECK(sum.star_size == 4);
  CHECK(os.str().find("# n=5 k=2") == 0);
  std::istringstream is(os.str());
  auto fams = read_families(is);
  REQUIRE(fams.size() == 10);
  for (const auto& f : fams) {
    CHECK(f.size() == 3);
    CHECK(is_maximal_intersecting(f));
  }
}

TEST_CASE("containers runner produces clean records") {
  ContainersConfig cfg;
  cfg.k = 2;
  cfg.samples = 20;
  cfg.seed = 9;
  std::ostringstream os;
  auto sum = run_containers(cfg, os, "t");
  CHECK(sum.records == 20);
  CHECK(sum.check_failures == 0);
  CHECK(os.str().find("\"records\"") != std::string::npos);
}

TEST_CASE("gnuplot companion mentions the csv") {
  std::ostringstream os;
  write_gnuplot_script(os, "out.csv", {"strong", "weak"});
  CHECK(os.str().find("out.csv") != std::string::npos);
}
