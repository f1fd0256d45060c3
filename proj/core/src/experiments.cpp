#include "ekrlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "ekrlab/family_io.hpp"
#include "ekrlab/version.hpp"

namespace ekrlab {

namespace {

std::string fmt_double(double v) {
  std::ostringstream ss;
  ss.precision(12);
  ss << v;
  return ss.str();
}

std::string grid_to_string(const std::vector<double>& grid) {
  std::ostringstream ss;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i) ss << ',';
    ss << fmt_double(grid[i]);
  }
  return ss.str();
}

}  // namespace

void write_csv_header(std::ostream& os, const OutputHeader& h,
                      const std::vector<std::string>& columns) {
  os << "# ekrlab v" << kVersion << " " << h.tool << "\n";
  if (!h.generated.empty()) os << "# generated: " << h.generated << "\n";
  os << "# config:";
  for (const auto& [key, value] : h.config) os << ' ' << key << '=' << value;
  os << "\n# columns:";
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : " ") << columns[i];
  os << "\n";
}

std::vector<SweepRow> run_ekr_sweep(const EkrAnalyzer& an, const SweepConfig& cfg) {
  std::vector<SweepRow> rows;
  const auto& u = an.universe();
  for (double p : cfg.p_grid) {
    std::atomic<uint64_t> strong{0}, weak{0};
    auto run_range = [&](uint64_t lo, uint64_t hi) {
      uint64_t s = 0, w = 0;
      for (uint64_t t = lo; t < hi; ++t) {
        EkrVerdict v = an.verdict(SampleX::draw(u, p, cfg.seed, t));
        s += v.strong;
        w += v.weak;
      }
      strong += s;
      weak += w;
    };
    int threads = std::max(1, cfg.threads);
    if (threads == 1 || cfg.trials < 64) {
      run_range(0, cfg.trials);
    } else {
      std::vector<std::thread> pool;
      uint64_t chunk = (cfg.trials + threads - 1) / threads;
      for (int i = 0; i < threads; ++i) {
        uint64_t lo = std::min<uint64_t>(cfg.trials, i * chunk);
        uint64_t hi = std::min<uint64_t>(cfg.trials, lo + chunk);
        pool.emplace_back(run_range, lo, hi);
      }
      for (auto& th : pool) th.join();
    }
    SweepRow row;
    row.p = p;
    row.trials = cfg.trials;
    row.strong_freq = static_cast<double>(strong.load()) / cfg.trials;
    row.weak_freq = static_cast<double>(weak.load()) / cfg.trials;
    auto iv = wilson_interval(strong.load(), cfg.trials);
    row.wilson_lo = iv.lo;
    row.wilson_hi = iv.hi;
    row.seed = cfg.seed;
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const SweepConfig& cfg, const std::vector<SweepRow>& rows,
                     const std::string& generated) {
  OutputHeader h;
  h.tool = "sweep";
  h.generated = generated;
  h.config = {{"n", std::to_string(cfg.n)},
              {"k", std::to_string(cfg.k)},
              {"p_grid", grid_to_string(cfg.p_grid)},
              {"trials", std::to_string(cfg.trials)},
              {"seed", std::to_string(cfg.seed)},
              {"threads", std::to_string(cfg.threads)}};
  write_csv_header(os, h,
                   {"p", "trials", "ekr_strong_freq", "ekr_weak_freq", "wilson_lo", "wilson_hi",
                    "seed"});
  os.precision(12);
  for (const auto& r : rows)
    os << r.p << ',' << r.trials << ',' << r.strong_freq << ',' << r.weak_freq << ','
       << r.wilson_lo << ',' << r.wilson_hi << ',' << r.seed << "\n";
}

namespace {

nlohmann::json config_json(const std::vector<std::pair<std::string, std::string>>& kv) {
  nlohmann::json j;
  for (const auto& [k, v] : kv) j[k] = v;
  return j;
}

}  // namespace

void write_sweep_json(std::ostream& os, const SweepConfig& cfg, const std::vector<SweepRow>& rows,
                      const std::string& generated) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["tool"] = "sweep";
  j["generated"] = generated;
  j["config"] = config_json({{"n", std::to_string(cfg.n)},
                             {"k", std::to_string(cfg.k)},
                             {"p_grid", grid_to_string(cfg.p_grid)},
                             {"trials", std::to_string(cfg.trials)},
                             {"seed", std::to_string(cfg.seed)},
                             {"threads", std::to_string(cfg.threads)}});
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows)
    arr.push_back({{"p", r.p},
                   {"trials", r.trials},
                   {"ekr_strong_freq", r.strong_freq},
                   {"ekr_weak_freq", r.weak_freq},
                   {"wilson_lo", r.wilson_lo},
                   {"wilson_hi", r.wilson_hi},
                   {"seed", r.seed}});
  j["rows"] = arr;
  os << j.dump(2) << "\n";
}

std::vector<SpernerRow> run_sperner_sweep(const SpernerConfig& cfg) {
  std::vector<SpernerRow> rows;
  for (double p : cfg.p_grid) {
    uint64_t hits = 0;
    double width_sum = 0, layer_sum = 0;
    for (uint64_t t = 0; t < cfg.trials; ++t) {
      CubeSample x = CubeSample::draw(cfg.n, p, cfg.seed, t);
      WidthResult w = width(x);
      if (w.width == w.layer_max) ++hits;
      width_sum += static_cast<double>(w.width);
      layer_sum += static_cast<double>(w.layer_max);
    }
    SpernerRow row;
    row.p = p;
    row.trials = cfg.trials;
    row.wwxx_freq = static_cast<double>(hits) / cfg.trials;
    auto iv = wilson_interval(hits, cfg.trials);
    row.wilson_lo = iv.lo;
    row.wilson_hi = iv.hi;
    row.mean_width = width_sum / cfg.trials;
    row.mean_layer_max = layer_sum / cfg.trials;
    row.seed = cfg.seed;
    rows.push_back(row);
  }
  return rows;
}

void write_sperner_csv(std::ostream& os, const SpernerConfig& cfg,
                       const std::vector<SpernerRow>& rows, const std::string& generated) {
  OutputHeader h;
  h.tool = "sperner";
  h.generated = generated;
  h.config = {{"n", std::to_string(cfg.n)},
              {"p_grid", grid_to_string(cfg.p_grid)},
              {"trials", std::to_string(cfg.trials)},
              {"seed", std::to_string(cfg.seed)},
              {"threads", std::to_string(cfg.threads)}};
  write_csv_header(os, h,
                   {"p", "trials", "wwxx_freq", "wilson_lo", "wilson_hi", "mean_width",
                    "layer_max_mean", "seed"});
  os.precision(12);
  for (const auto& r : rows)
    os << r.p << ',' << r.trials << ',' << r.wwxx_freq << ',' << r.wilson_lo << ','
       << r.wilson_hi << ',' << r.mean_width << ',' << r.mean_layer_max << ',' << r.seed << "\n";
}

void write_sperner_json(std::ostream& os, const SpernerConfig& cfg,
                        const std::vector<SpernerRow>& rows, const std::string& generated) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["tool"] = "sperner";
  j["generated"] = generated;
  j["config"] = config_json({{"n", std::to_string(cfg.n)},
                             {"p_grid", grid_to_string(cfg.p_grid)},
                             {"trials", std::to_string(cfg.trials)},
                             {"seed", std::to_string(cfg.seed)},
                             {"threads", std::to_string(cfg.threads)}});
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows)
    arr.push_back({{"p", r.p},
                   {"trials", r.trials},
                   {"wwxx_freq", r.wwxx_freq},
                   {"wilson_lo", r.wilson_lo},
                   {"wilson_hi", r.wilson_hi},
                   {"mean_width", r.mean_width},
                   {"layer_max_mean", r.mean_layer_max},
                   {"seed", r.seed}});
  j["rows"] = arr;
  os << j.dump(2) << "\n";
}

EnumerateSummary enumerate_to_stream(const MCorrespondence& corr, std::ostream& family_out) {
  EnumerateSummary sum;
  sum.star_size = corr.universe()->choose(corr.n() - 1, corr.k() - 1);
  std::map<uint64_t, uint64_t> hist;
  std::vector<RankedFamily> families;
  corr.for_each_m([&](MaximalFamily&& m) {
    ++sum.count;
    ++hist[m.members.size()];
    sum.max_size = std::max(sum.max_size, m.members.size());
    families.push_back(std::move(m.members));
  });
  write_families(family_out, families);
  for (const auto& [sz, c] : hist) sum.size_histogram.push_back({sz, c});
  return sum;
}

Bitset sample_closed_two_linked(const LayerGraph& lg, SplitRng& rng) {
  for (;;) {
    uint64_t seed_size = 1 + rng.below(std::max<uint64_t>(1, lg.lower_count() / 4));
    Bitset seed(lg.lower_count());
    for (uint64_t i = 0; i < seed_size; ++i) seed.set(rng.below(lg.lower_count()));
    Bitset closed = lg.closure(seed);
    if (closed.none()) continue;
    auto parts = lg.linked_components(closed, 2);
    const Bitset& pick = parts.blocks[rng.below(parts.blocks.size())];
    return pick;
  }
}

ContainersSummary run_containers(const ContainersConfig& cfg, std::ostream& json_out,
                                 const std::string& generated) {
  ContainersSummary sum;
  LayerGraph lg(2 * cfg.k, cfg.k);
  ContainerParams params;
  params.zeta = cfg.zeta;
  params.eta = cfg.eta;
  ContainerBuilder builder(lg, params);

  json_out << "{\n  \"version\": \"" << kVersion << "\",\n  \"tool\": \"containers\",\n"
           << "  \"generated\": \"" << generated << "\",\n  \"config\": {\"k\": " << cfg.k
           << ", \"zeta\": " << cfg.zeta << ", \"eta\": " << cfg.eta << ", \"seed\": " << cfg.seed
           << ", \"samples\": " << cfg.samples << ", \"exhaustive\": "
           << (cfg.exhaustive ? "true" : "false") << "},\n  \"records\": [\n";

  bool first = true;
  auto handle = [&](const Bitset& a, uint64_t seed) {
    ContainerRecord rec = builder.build(a, seed);
    RecordCheck check = check_record(lg, rec, params);
    if (!check.all()) ++sum.check_failures;
    if (rec.t_fallback) ++sum.t_fallbacks;
    if (rec.u_fallback) ++sum.u_fallbacks;
    if (!first) json_out << ",\n";
    first = false;
    json_out << "    " << record_to_json(rec, params, cfg.k, true);
    ++sum.records;
  };

  if (cfg.exhaustive) {
    lg.for_each_closed(1, [&](const Bitset& a) {
      if (lg.is_linked(a, 2)) handle(a, cfg.seed + sum.records);
    });
  } else {
    SplitRng rng(cfg.seed, 0xC0FFEE);
    for (uint64_t i = 0; i < cfg.samples; ++i)
      handle(sample_closed_two_linked(lg, rng), cfg.seed + i);
  }
  json_out << "\n  ]\n}\n";
  return sum;
}

void write_gnuplot_script(std::ostream& os, const std::string& csv_path,
                          const std::vector<std::string>& y_columns) {
  os << "# gnuplot companion for " << csv_path << "\n";
  os << "set datafile separator ','\n";
  os << "set key outside\nset xlabel 'p'\nset yrange [0:1.05]\n";
  os << "plot ";
  for (std::size_t i = 0; i < y_columns.size(); ++i) {
    if (i) os << ", ";
    os << "'" << csv_path << "' using 1:" << (i + 3) << " with linespoints title '"
       << y_columns[i] << "'";
  }
  os << "\n";
}

}  // namespace ekrlab
