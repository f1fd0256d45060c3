#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ekrlab/containers.hpp"
#include "ekrlab/ekr.hpp"
#include "ekrlab/families.hpp"
#include "ekrlab/rand_model.hpp"
#include "ekrlab/sperner.hpp"

namespace ekrlab {

/// Key=value pairs serialized into every output header; identical config and
/// seed reproduce the output byte for byte apart from the generated line.
struct OutputHeader {
  std::string tool;                  // subcommand name
  std::vector<std::pair<std::string, std::string>> config;
  std::string generated;             // timestamp, excluded from reproducibility
};

void write_csv_header(std::ostream& os, const OutputHeader& h,
                      const std::vector<std::string>& columns);

// --- EKR sweep ---

struct SweepConfig {
  int n = 5, k = 2;
  std::vector<double> p_grid;
  uint64_t trials = 1000;
  uint64_t seed = 1;
  int threads = 1;
};

struct SweepRow {
  double p = 0;
  uint64_t trials = 0;
  double strong_freq = 0, weak_freq = 0;
  double wilson_lo = 0, wilson_hi = 0;  // for the strong frequency
  uint64_t seed = 0;
};

std::vector<SweepRow> run_ekr_sweep(const EkrAnalyzer& an, const SweepConfig& cfg);
void write_sweep_csv(std::ostream& os, const SweepConfig& cfg, const std::vector<SweepRow>& rows,
                     const std::string& generated);
void write_sweep_json(std::ostream& os, const SweepConfig& cfg, const std::vector<SweepRow>& rows,
                      const std::string& generated);

// --- Sperner sweep ---

struct SpernerConfig {
  int n = 6;
  std::vector<double> p_grid;
  uint64_t trials = 1000;
  uint64_t seed = 1;
  int threads = 1;
};

struct SpernerRow {
  double p = 0;
  uint64_t trials = 0;
  double wwxx_freq = 0;
  double wilson_lo = 0, wilson_hi = 0;
  double mean_width = 0, mean_layer_max = 0;
  uint64_t seed = 0;
};

std::vector<SpernerRow> run_sperner_sweep(const SpernerConfig& cfg);
void write_sperner_csv(std::ostream& os, const SpernerConfig& cfg,
                       const std::vector<SpernerRow>& rows, const std::string& generated);
void write_sperner_json(std::ostream& os, const SpernerConfig& cfg,
                        const std::vector<SpernerRow>& rows, const std::string& generated);

// --- Catalog enumeration ---

struct EnumerateSummary {
  uint64_t count = 0;
  uint64_t max_size = 0;
  uint64_t star_size = 0;  // C(n-1, k-1)
  std::vector<std::pair<uint64_t, uint64_t>> size_histogram;  // (size, count)
};

EnumerateSummary enumerate_to_stream(const MCorrespondence& corr, std::ostream& family_out);

// --- Container record dumps ---

struct ContainersConfig {
  int k = 3;
  double zeta = 0.2;
  double eta = 0.08;
  uint64_t seed = 1;
  uint64_t samples = 100;   // sampled closed 2-linked inputs when not exhaustive
  bool exhaustive = false;  // every closed 2-linked set (k <= 3 advisable)
};

struct ContainersSummary {
  uint64_t records = 0;
  uint64_t check_failures = 0;
  uint64_t t_fallbacks = 0, u_fallbacks = 0;
};

ContainersSummary run_containers(const ContainersConfig& cfg, std::ostream& json_out,
                                 const std::string& generated);

/// Random closed 2-linked set: closure of a random seed family, then one
/// 2-linked component (components of closed sets are closed).
Bitset sample_closed_two_linked(const LayerGraph& lg, SplitRng& rng);

/// Gnuplot companion script referencing a written CSV.
void write_gnuplot_script(std::ostream& os, const std::string& csv_path,
                          const std::vector<std::string>& y_columns);

}  // namespace ekrlab
