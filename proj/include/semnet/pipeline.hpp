#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "semnet/infomet.hpp"
#include "semnet/topics.hpp"

namespace semnet {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PipelineConfig {
  std::filesystem::path corpus_root;
  std::filesystem::path output_dir;
  int year_start = 1970;
  int year_end = 2014;
  std::uint64_t seed = 42;
  double threshold = 0.8;
  int threads = 0;  // 0 = hardware concurrency; SEMNET_THREADS overrides

  int min_term_count = 10;
  int min_doc_count = 5;
  std::filesystem::path stopwords_file;  // empty = built-in list
  bool stemming = true;

  LdaConfig lda;  // lda.seed is ignored; per-year seeds derive from `seed`
  NmiConfig nmi;
  int smoothing_window = 10;
  int infomap_trials = 10;

  void validate() const;  // throws ConfigError naming the offending key
};

// Line-oriented `key = value` with [corpus], [lda], [nmi] and [smoothing]
// sections. Unknown keys and out-of-range values are rejected by name.
PipelineConfig parse_config(const std::string& text);
PipelineConfig validate_config(const std::filesystem::path& file);

// Stable hex fingerprint over every parameter that influences the outputs.
std::string config_fingerprint(const PipelineConfig& config);

struct RunManifest {
  std::string config_hash;
  std::vector<std::string> warnings;
  struct YearEntry {
    int year = 0;
    bool ok = false;
    double seconds = 0;
    std::vector<std::string> artifacts;  // relative to output_dir
  };
  std::vector<YearEntry> years;
  std::vector<std::string> global_artifacts;

  bool all_ok() const;
};

// Runs corpus -> topics -> network -> metrics -> communities for every year
// in range with at least two documents. A year that fails is recorded and the
// remaining years still run. Throws only on unusable input or configuration.
RunManifest run_pipeline(const PipelineConfig& config);

void write_manifest(const std::filesystem::path& file, const RunManifest& m);

// Minimal hand-emitted SVG polyline chart.
void write_line_chart_svg(const std::filesystem::path& file,
                          const std::string& title, int start_year,
                          const std::vector<double>& values);

}  // namespace semnet
