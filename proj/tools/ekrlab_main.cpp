// ekrlab: enumeration, verification suites and Monte Carlo sweeps for
// intersecting-family and Sperner experiments on random set systems.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or guard error.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ekrlab/combinat.hpp"
#include "ekrlab/containers.hpp"
#include "ekrlab/ekr.hpp"
#include "ekrlab/experiments.hpp"
#include "ekrlab/families.hpp"
#include "ekrlab/family_io.hpp"
#include "ekrlab/graph.hpp"
#include "ekrlab/rng.hpp"
#include "ekrlab/sperner.hpp"
#include "ekrlab/version.hpp"

namespace {

using namespace ekrlab;

std::string now_string() {
  std::time_t t = std::time(nullptr);
  char buf[64];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

int default_threads() {
  if (const char* env = std::getenv("EKRLAB_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

std::vector<double> parse_grid(const std::string& spec) {
  // "a:step:b" or a comma-separated list.
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    double a, step, b;
    char c1, c2;
    std::istringstream ss(spec);
    if (!(ss >> a >> c1 >> step >> c2 >> b) || c1 != ':' || c2 != ':' || step <= 0)
      throw CLI::ValidationError("--p-grid", "expected a:step:b with step > 0");
    for (double p = a; p <= b + 1e-12; p += step) out.push_back(std::min(p, 1.0));
  } else {
    std::istringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  }
  if (out.empty()) throw CLI::ValidationError("--p-grid", "empty grid");
  for (double p : out)
    if (p < 0 || p > 1) throw CLI::ValidationError("--p-grid", "p outside [0,1]");
  return out;
}

struct CheckPrinter {
  int failures = 0;
  void operator()(const std::string& name, bool ok, double ms) {
    std::cout << (ok ? "[pass] " : "[FAIL] ") << name << "  (" << ms << " ms)\n";
    if (!ok) ++failures;
  }
};

template <typename F>
bool timed(CheckPrinter& pr, const std::string& name, F&& body) {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = body();
  auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0);
  pr(name, ok, ms.count());
  return ok;
}

// --- verify suites -------------------------------------------------------

bool verify_kk(CheckPrinter& pr, int k) {
  LayerGraph lg(2 * k, k);
  return timed(pr, "kruskal-katona sweep k=" + std::to_string(k), [&] {
    const std::size_t n_lo = lg.lower_count();
    if (k <= 3) {
      // Exhaustive over every nonempty family with |A| <= N/2.
      const uint64_t total = uint64_t{1} << n_lo;
      for (uint64_t mask = 1; mask < total; ++mask) {
        if (static_cast<uint64_t>(std::popcount(mask)) > n_lo / 2) continue;
        Bitset a(n_lo);
        for (std::size_t i = 0; i < n_lo; ++i)
          if (mask >> i & 1) a.set(i);
        auto chk = lg.verify_kk(a);
        if (!(chk.kk_ok && chk.lovasz_ok)) return false;
      }
      return true;
    }
    SplitRng rng(7, 0);
    for (int trial = 0; trial < 20000; ++trial) {
      Bitset a = rng.bernoulli_mask(n_lo, rng.next_double() * 0.5);
      if (a.none() || 2 * a.count() > n_lo) continue;
      auto chk = lg.verify_kk(a);
      if (!(chk.kk_ok && chk.lovasz_ok)) return false;
    }
    return true;
  });
}

bool verify_degree(CheckPrinter& pr, int k) {
  LayerGraph lg(2 * k, k);
  return timed(pr, "degree identity over closed sets k=" + std::to_string(k), [&] {
    bool ok = true;
    if (k <= 3) {
      lg.for_each_closed(1, [&](const Bitset& a) {
        uint64_t g = lg.upper_shadow(a).count();
        if (lg.boundary_edges(a) != (k + 1) * g - static_cast<uint64_t>(k) * a.count()) ok = false;
      });
    } else {
      SplitRng rng(11, 0);
      for (int i = 0; i < 1000 && ok; ++i) {
        Bitset a = sample_closed_two_linked(lg, rng);
        uint64_t g = lg.upper_shadow(a).count();
        if (lg.boundary_edges(a) != (k + 1) * g - static_cast<uint64_t>(k) * a.count()) ok = false;
      }
    }
    return ok;
  });
}

bool verify_bijection(CheckPrinter& pr, int k) {
  MCorrespondence corr(2 * k + 1, k);
  return timed(pr, "catalog round trip n=" + std::to_string(2 * k + 1), [&] {
    bool ok = true;
    uint64_t count = 0;
    corr.for_each_m([&](MaximalFamily&& m) {
      ++count;
      if (!is_intersecting(m.members) || is_principal(m.members)) ok = false;
      if (corr.decompose(m.members, corr.n()) != m.layer_a) ok = false;
      if (!(corr.from_closed(corr.n(), m.layer_a) == m.members)) ok = false;
    });
    return ok && count > 0;
  });
}

bool verify_frankl(CheckPrinter& pr, int n, int k, int i) {
  MCorrespondence corr(n, k);
  auto catalog = corr.all_m();
  return timed(pr, "frankl comparison i=" + std::to_string(i), [&] {
    return check_frankl(corr, catalog, i).pass;
  });
}

bool verify_containers(CheckPrinter& pr, int k, uint64_t seed) {
  LayerGraph lg(2 * k, k);
  ContainerParams params;
  ContainerBuilder builder(lg, params);
  return timed(pr, "container record identities k=" + std::to_string(k), [&] {
    bool ok = true;
    uint64_t n = 0;
    if (k <= 3) {
      lg.for_each_closed(1, [&](const Bitset& a) {
        if (!lg.is_linked(a, 2)) return;
        ContainerRecord rec = builder.build(a, seed + n++);
        if (!check_record(lg, rec, params).all()) ok = false;
      });
    } else {
      SplitRng rng(seed, 1);
      for (int i = 0; i < 200 && ok; ++i) {
        Bitset a = sample_closed_two_linked(lg, rng);
        ContainerRecord rec = builder.build(a, seed + i);
        if (!check_record(lg, rec, params).all()) ok = false;
      }
    }
    return ok;
  });
}

bool verify_linkprop(CheckPrinter& pr, uint64_t seed) {
  return timed(pr, "link propagation randomized", [&] {
    SplitRng rng(seed, 2);
    int applicable = 0;
    for (int trial = 0; trial < 2000 || applicable < 500; ++trial) {
      if (trial > 100000) return applicable > 0;
      std::size_t n = 6 + rng.below(7);
      SimpleGraph g(n);
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
          if (rng.bernoulli(0.35)) g.add_edge(u, v);
      Bitset seed_set = rng.bernoulli_mask(n, 0.4);
      if (seed_set.none()) continue;
      int j = 1 + static_cast<int>(rng.below(2));
      auto comps = g.linked_components(seed_set, j);
      const Bitset& a = comps[rng.below(comps.size())];
      // T: at least one neighbor per member, plus random extras from N(A).
      Bitset t(n);
      bool degenerate = false;
      a.for_each([&](std::size_t v) {
        const auto& nb = g.neighbors(static_cast<uint32_t>(v));
        if (nb.empty()) {
          degenerate = true;
          return;
        }
        t.set(nb[rng.below(nb.size())]);
      });
      if (degenerate) continue;
      Bitset na = g.neighborhood(a);
      na.for_each([&](std::size_t v) {
        if (rng.bernoulli(0.3)) t.set(v);
      });
      auto res = check_link_propagation(g, a, t, j);
      if (res == LinkCheck::NotApplicable) continue;
      ++applicable;
      if (res == LinkCheck::Fail) return false;
    }
    return true;
  });
}

bool verify_trees(CheckPrinter& pr) {
  return timed(pr, "rooted subtree bound", [&] {
    SplitRng rng(13, 3);
    for (int trial = 0; trial < 40; ++trial) {
      std::size_t n = 4 + rng.below(9);
      SimpleGraph g(n);
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
          if (rng.bernoulli(0.4)) g.add_edge(u, v);
      for (int u = 1; u <= 5; ++u)
        if (!verify_tree_bound(g, u)) return false;
    }
    return true;
  });
}

bool verify_dilworth(CheckPrinter& pr, uint64_t seed) {
  return timed(pr, "dilworth certificates", [&] {
    for (int n = 3; n <= 7; ++n)
      for (int t = 0; t < 50; ++t) {
        CubeSample x = CubeSample::draw(n, 0.4, seed, 1000 * n + t);
        WidthResult w = width(x);
        if (!w.certified) return false;
        if (w.width < w.layer_max) return false;
      }
    return true;
  });
}

int cmd_verify(const std::string& suite, int n, int k, int i, uint64_t seed) {
  CheckPrinter pr;
  bool ran = false;
  auto want = [&](const char* name) { return suite == name || suite == "all"; };
  if (want("kk")) ran = true, verify_kk(pr, k);
  if (want("degree")) ran = true, verify_degree(pr, k);
  if (want("bijection")) ran = true, verify_bijection(pr, k);
  if (want("frankl")) ran = true, verify_frankl(pr, n, k, i);
  if (want("containers")) ran = true, verify_containers(pr, k, seed);
  if (want("linkprop")) ran = true, verify_linkprop(pr, seed);
  if (want("trees")) ran = true, verify_trees(pr);
  if (want("dilworth")) ran = true, verify_dilworth(pr, seed);
  if (!ran) {
    std::cerr << "unknown suite '" << suite
              << "' (try: kk degree bijection frankl containers linkprop trees dilworth all)\n";
    return 2;
  }
  std::cout << (pr.failures ? "FAILED" : "OK") << " (" << pr.failures << " failures)\n";
  return pr.failures ? 1 : 0;
}

int cmd_enumerate(int n, int k, const std::string& out) {
  if (k > 4) {
    std::cerr << "enumerate: guarded to k <= 4\n";
    return 2;
  }
  if (n != 2 * k + 1)
    std::cerr << "note: the catalog correspondence assumes n = 2k+1; got n=" << n << "\n";
  MCorrespondence corr(2 * k + 1, k);
  std::ofstream os(out);
  if (!os) {
    std::cerr << "cannot open " << out << "\n";
    return 2;
  }
  EnumerateSummary sum = enumerate_to_stream(corr, os);
  std::cout << "families: " << sum.count << "\n";
  std::cout << "max size: " << sum.max_size << " vs star size " << sum.star_size << "\n";
  std::cout << "size histogram:";
  for (auto& [sz, c] : sum.size_histogram) std::cout << " " << sz << ":" << c;
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("ekrlab v") + kVersion +
               " — intersecting-family and Sperner experiments on random set systems"};
  app.require_subcommand(1);

  // enumerate
  auto* enumerate = app.add_subcommand("enumerate", "write the nonprincipal catalog to a file");
  int en_n = 5, en_k = 2;
  std::string en_out = "families.txt";
  enumerate->add_option("--n", en_n, "ground size (n = 2k+1)");
  enumerate->add_option("--k", en_k, "set size")->required();
  enumerate->add_option("--out", en_out, "output family file");

  // verify
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  std::string suite;
  int v_n = 7, v_k = 3, v_i = 3;
  uint64_t v_seed = 7;
  verify->add_option("suite", suite, "kk|degree|bijection|frankl|containers|linkprop|trees|dilworth|all")
      ->required();
  verify->add_option("--n", v_n, "ground size");
  verify->add_option("--k", v_k, "set size");
  verify->add_option("--i", v_i, "frankl index");
  verify->add_option("--seed", v_seed, "seed");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo EKR frequency sweep over p");
  SweepConfig sw;
  std::string sw_grid = "0.5:0.05:1.0", sw_out = "sweep.csv", sw_format = "csv";
  bool sw_gnuplot = false;
  sweep->add_option("--n", sw.n, "ground size (n = 2k+1)");
  sweep->add_option("--k", sw.k, "set size")->required();
  sweep->add_option("--p-grid", sw_grid, "a:step:b or comma list");
  sweep->add_option("--trials", sw.trials, "trials per p");
  sweep->add_option("--seed", sw.seed, "master seed");
  sweep->add_option("--threads", sw.threads, "worker threads");
  sweep->add_option("--out", sw_out, "output CSV/JSON path");
  sweep->add_option("--format", sw_format, "csv|json");
  sweep->add_flag("--gnuplot", sw_gnuplot, "emit a companion gnuplot script");

  // sperner
  auto* sperner = app.add_subcommand("sperner", "Monte Carlo width sweep on the cube");
  SpernerConfig sp;
  std::string sp_grid = "0.5:0.05:1.0", sp_out = "sperner.csv", sp_format = "csv";
  bool sp_gnuplot = false;
  sperner->add_option("--n", sp.n, "cube dimension (exact width guarded to n <= 12)");
  sperner->add_option("--p-grid", sp_grid, "a:step:b or comma list");
  sperner->add_option("--trials", sp.trials, "trials per p");
  sperner->add_option("--seed", sp.seed, "master seed");
  sperner->add_option("--threads", sp.threads, "worker threads");
  sperner->add_option("--out", sp_out, "output CSV/JSON path");
  sperner->add_option("--format", sp_format, "csv|json");
  sperner->add_flag("--gnuplot", sp_gnuplot, "emit a companion gnuplot script");

  // containers
  auto* containers = app.add_subcommand("containers", "build container records and dump JSON");
  ContainersConfig ct;
  std::string ct_out = "records.json";
  containers->add_option("--k", ct.k, "middle-layer parameter")->required();
  containers->add_option("--zeta", ct.zeta, "zeta");
  containers->add_option("--eta", ct.eta, "eta");
  containers->add_option("--seed", ct.seed, "seed");
  containers->add_option("--samples", ct.samples, "number of sampled closed 2-linked inputs");
  containers->add_flag("--exhaustive", ct.exhaustive, "walk every closed 2-linked set");
  containers->add_option("--out", ct_out, "output JSON path");

  sw.threads = default_threads();
  sp.threads = default_threads();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*enumerate) {
      if (enumerate->count("--n") == 0) en_n = 2 * en_k + 1;
      return cmd_enumerate(en_n, en_k, en_out);
    }
    if (*verify) return cmd_verify(suite, v_n, v_k, v_i, v_seed);
    if (*sweep) {
      if (sweep->count("--n") == 0) sw.n = 2 * sw.k + 1;
      if (sw.n != 2 * sw.k + 1) {
        std::cerr << "sweep: the sampling surfaces require n = 2k+1; got n=" << sw.n << "\n";
        return 2;
      }
      sw.p_grid = parse_grid(sw_grid);
      EkrAnalyzer an(2 * sw.k + 1, sw.k);
      auto rows = run_ekr_sweep(an, sw);
      std::ofstream os(sw_out);
      if (!os) {
        std::cerr << "cannot open " << sw_out << "\n";
        return 2;
      }
      if (sw_format == "json")
        write_sweep_json(os, sw, rows, now_string());
      else
        write_sweep_csv(os, sw, rows, now_string());
      if (sw_gnuplot) {
        std::ofstream gs(sw_out + ".gp");
        write_gnuplot_script(gs, sw_out, {"strong", "weak"});
      }
      std::cout << "wrote " << rows.size() << " rows to " << sw_out << "\n";
      return 0;
    }
    if (*sperner) {
      sp.p_grid = parse_grid(sp_grid);
      if (sp.n > 12) {
        std::cerr << "sperner: exact width sweeps are guarded to n <= 12\n";
        return 2;
      }
      auto rows = run_sperner_sweep(sp);
      std::ofstream os(sp_out);
      if (!os) {
        std::cerr << "cannot open " << sp_out << "\n";
        return 2;
      }
      if (sp_format == "json")
        write_sperner_json(os, sp, rows, now_string());
      else
        write_sperner_csv(os, sp, rows, now_string());
      if (sp_gnuplot) {
        std::ofstream gs(sp_out + ".gp");
        write_gnuplot_script(gs, sp_out, {"wwxx"});
      }
      std::cout << "wrote " << rows.size() << " rows to " << sp_out << "\n";
      return 0;
    }
    if (*containers) {
      std::ofstream os(ct_out);
      if (!os) {
        std::cerr << "cannot open " << ct_out << "\n";
        return 2;
      }
      ContainersSummary sum = run_containers(ct, os, now_string());
      std::cout << "records: " << sum.records << "  check failures: " << sum.check_failures
                << "  fallbacks: T=" << sum.t_fallbacks << " U=" << sum.u_fallbacks << "\n";
      return sum.check_failures ? 1 : 0;
    }
  } catch (const std::domain_error& e) {
    std::cerr << "guard: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
