#include "semnet/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "semnet/corpus.hpp"
#include "semnet/graph.hpp"
#include "semnet/infomap.hpp"
#include "semnet/rng.hpp"
#include "semnet/stopwords.hpp"

namespace semnet {
namespace {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

long parse_long(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    long v = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' expects an integer, got '" + value + "'");
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' expects a number, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "on" || value == "1") return true;
  if (value == "false" || value == "off" || value == "0") return false;
  throw ConfigError("key '" + key + "' expects a boolean, got '" + value + "'");
}

int resolve_threads(int configured) {
  if (const char* env = std::getenv("SEMNET_THREADS")) {
    try {
      int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  if (configured > 0) return configured;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(int n, int n_threads, const std::function<void(int)>& body) {
  n_threads = std::min(n_threads, n);
  if (n_threads <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < n_threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n) return;
        body(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

void PipelineConfig::validate() const {
  if (corpus_root.empty()) throw ConfigError("missing required key 'corpus_root'");
  if (output_dir.empty()) throw ConfigError("missing required key 'output_dir'");
  if (year_start > year_end)
    throw ConfigError("key 'year_start' exceeds 'year_end': empty year range");
  if (threshold < 0.0 || threshold > 1.0)
    throw ConfigError("key 'threshold' out of range [0,1]: " + format_real(threshold));
  if (threads < 0) throw ConfigError("key 'threads' must be >= 0");
  if (min_term_count < 1) throw ConfigError("key 'min_term_count' must be >= 1");
  if (min_doc_count < 1) throw ConfigError("key 'min_doc_count' must be >= 1");
  if (lda.n_topics < 2) throw ConfigError("key 'n_topics' must be >= 2");
  if (lda.alpha < 0) throw ConfigError("key 'alpha' must be > 0");
  if (lda.beta <= 0) throw ConfigError("key 'beta' must be > 0");
  if (lda.n_iterations < 1) throw ConfigError("key 'n_iterations' must be >= 1");
  if (lda.burn_in < 0 || lda.burn_in >= lda.n_iterations)
    throw ConfigError("key 'burn_in' must be in [0, n_iterations)");
  if (nmi.bins < 2) throw ConfigError("key 'bins' must be >= 2");
  if (smoothing_window < 1) throw ConfigError("key 'window' must be >= 1");
  if (infomap_trials < 1) throw ConfigError("key 'trials' must be >= 1");
}

PipelineConfig parse_config(const std::string& text) {
  PipelineConfig cfg;
  bool alpha_set = false;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = trim(t.substr(1, t.size() - 2));
      if (section != "corpus" && section != "lda" && section != "nmi" &&
          section != "smoothing" && section != "infomap")
        throw ConfigError("unknown section '[" + section + "]'");
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        " is not 'key = value': " + t);
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    std::string qualified = section.empty() ? key : section + "." + key;

    if (qualified == "corpus_root") cfg.corpus_root = value;
    else if (qualified == "output_dir") cfg.output_dir = value;
    else if (qualified == "year_start") cfg.year_start = static_cast<int>(parse_long(key, value));
    else if (qualified == "year_end") cfg.year_end = static_cast<int>(parse_long(key, value));
    else if (qualified == "seed") cfg.seed = static_cast<std::uint64_t>(parse_long(key, value));
    else if (qualified == "threshold") cfg.threshold = parse_double(key, value);
    else if (qualified == "threads") cfg.threads = static_cast<int>(parse_long(key, value));
    else if (qualified == "corpus.min_term_count") cfg.min_term_count = static_cast<int>(parse_long(key, value));
    else if (qualified == "corpus.min_doc_count") cfg.min_doc_count = static_cast<int>(parse_long(key, value));
    else if (qualified == "corpus.stopwords") cfg.stopwords_file = value;
    else if (qualified == "corpus.stemming") cfg.stemming = parse_bool(key, value);
    else if (qualified == "lda.n_topics") cfg.lda.n_topics = static_cast<int>(parse_long(key, value));
    else if (qualified == "lda.alpha") { cfg.lda.alpha = parse_double(key, value); alpha_set = true; }
    else if (qualified == "lda.beta") cfg.lda.beta = parse_double(key, value);
    else if (qualified == "lda.n_iterations") cfg.lda.n_iterations = static_cast<int>(parse_long(key, value));
    else if (qualified == "lda.burn_in") cfg.lda.burn_in = static_cast<int>(parse_long(key, value));
    else if (qualified == "lda.average_theta") cfg.lda.average_theta = parse_bool(key, value);
    else if (qualified == "nmi.bins") cfg.nmi.bins = static_cast<int>(parse_long(key, value));
    else if (qualified == "nmi.mode") {
      if (value == "paired") cfg.nmi.mode = NmiMode::kPairedBinning;
      else if (value == "mixture") cfg.nmi.mode = NmiMode::kMixture;
      else throw ConfigError("key 'mode' expects paired or mixture, got '" + value + "'");
    }
    else if (qualified == "smoothing.window") cfg.smoothing_window = static_cast<int>(parse_long(key, value));
    else if (qualified == "infomap.trials") cfg.infomap_trials = static_cast<int>(parse_long(key, value));
    else throw ConfigError("unknown key '" + qualified + "'");
  }
  if (!alpha_set) cfg.lda.alpha = 0;  // resolves to 50/K
  cfg.validate();
  return cfg;
}

PipelineConfig validate_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file: " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_fingerprint(const PipelineConfig& c) {
  std::ostringstream s;
  s << "corpus_root=" << c.corpus_root.string() << '\n'
    << "year_start=" << c.year_start << '\n'
    << "year_end=" << c.year_end << '\n'
    << "seed=" << c.seed << '\n'
    << "threshold=" << format_real(c.threshold) << '\n'
    << "min_term_count=" << c.min_term_count << '\n'
    << "min_doc_count=" << c.min_doc_count << '\n'
    << "stopwords=" << c.stopwords_file.string() << '\n'
    << "stemming=" << c.stemming << '\n'
    << "n_topics=" << c.lda.n_topics << '\n'
    << "alpha=" << format_real(c.lda.resolved_alpha()) << '\n'
    << "beta=" << format_real(c.lda.beta) << '\n'
    << "n_iterations=" << c.lda.n_iterations << '\n'
    << "burn_in=" << c.lda.burn_in << '\n'
    << "average_theta=" << c.lda.average_theta << '\n'
    << "bins=" << c.nmi.bins << '\n'
    << "mode=" << (c.nmi.mode == NmiMode::kPairedBinning ? "paired" : "mixture") << '\n'
    << "window=" << c.smoothing_window << '\n'
    << "trials=" << c.infomap_trials << '\n';
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(s.str())));
  return buf;
}

bool RunManifest::all_ok() const {
  return std::all_of(years.begin(), years.end(),
                     [](const YearEntry& y) { return y.ok; });
}

namespace {

struct YearTask {
  int year = 0;
  std::vector<int> doc_rows;  // rows in the global matrix
};

// Everything a single year writes and reports; merged in year order later.
struct YearOutcome {
  RunManifest::YearEntry entry;
  std::vector<std::string> warnings;
  MetricsRow metrics;
  bool has_metrics = false;
};

DocTermMatrix slice_rows(const DocTermMatrix& m, const std::vector<int>& rows) {
  DocTermMatrix out;
  out.n_docs = static_cast<int>(rows.size());
  out.n_terms = m.n_terms;
  std::map<int, int> local;
  for (std::size_t i = 0; i < rows.size(); ++i) local[rows[i]] = static_cast<int>(i);
  for (const auto& e : m.entries) {
    auto it = local.find(e.doc);
    if (it != local.end()) out.entries.push_back({it->second, e.term, e.count});
  }
  return out;
}

YearOutcome run_year(const PipelineConfig& cfg, const YearTask& task,
                     const std::vector<SpeechDoc>& docs,
                     const DocTermMatrix& matrix) {
  YearOutcome out;
  out.entry.year = task.year;
  auto t0 = std::chrono::steady_clock::now();
  const std::string ystr = std::to_string(task.year);
  const std::filesystem::path ydir = cfg.output_dir / ystr;

  try {
    std::filesystem::create_directories(ydir);

    std::vector<std::string> countries;
    for (int row : task.doc_rows) countries.push_back(docs[row].country);
    {
      std::set<std::string> seen;
      for (const auto& c : countries)
        if (!seen.insert(c).second)
          throw std::runtime_error("duplicate country label within year: " + c);
    }

    DocTermMatrix year_matrix = slice_rows(matrix, task.doc_rows);
    LdaConfig lda = cfg.lda;
    lda.seed = hash_key(cfg.seed, static_cast<std::uint64_t>(task.year), 1);

    LdaModel model = fit_lda(year_matrix, lda);
    TopicMatrix theta = topic_prevalences(model, year_matrix, lda, countries);

    auto emit = [&](const std::filesystem::path& p) {
      out.entry.artifacts.push_back(ystr + "/" + p.filename().string());
      return p;
    };

    write_theta_csv(emit(ydir / ("theta_" + ystr + ".csv")), theta);

    Graph g = build_network(theta, cfg.threshold, cfg.nmi);
    write_edge_list_csv(emit(ydir / ("edges_" + ystr + ".csv")), g);
    write_graphml(emit(ydir / ("network_" + ystr + ".graphml")), g);
    write_dot(emit(ydir / ("network_" + ystr + ".dot")), g);

    out.metrics.year = task.year;
    out.metrics.density = density(g);
    out.metrics.avg_path_length = avg_path_length(g);
    out.metrics.global_clustering = global_clustering(g);
    out.metrics.diameter = diameter(g);
    out.has_metrics = true;

    auto [part, score] = infomap_search(
        g, hash_key(cfg.seed, static_cast<std::uint64_t>(task.year), 2),
        cfg.infomap_trials);
    auto rows = communities_table(part, g.labels());
    write_communities_csv(emit(ydir / ("communities_" + ystr + ".csv")),
                          task.year, rows);
    write_tree(emit(ydir / ("communities_" + ystr + ".tree")), g, part);

    out.entry.ok = true;
  } catch (const std::exception& e) {
    out.entry.ok = false;
    out.entry.artifacts.clear();
    out.warnings.push_back("year " + ystr + " failed: " + e.what());
  }
  out.entry.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace

RunManifest run_pipeline(const PipelineConfig& config) {
  config.validate();
  RunManifest manifest;
  manifest.config_hash = config_fingerprint(config);

  LoadResult loaded =
      load_corpus(config.corpus_root, {config.year_start, config.year_end});
  for (const auto& w : loaded.warnings) manifest.warnings.push_back(w);
  if (loaded.docs.empty())
    throw std::runtime_error("empty corpus: no usable documents under " +
                             config.corpus_root.string());

  PreprocessConfig pre;
  pre.stopwords = config.stopwords_file.empty()
                      ? default_stopword_set()
                      : load_stopwords(config.stopwords_file);
  pre.stem = config.stemming;

  const int n_threads = resolve_threads(config.threads);
  std::vector<TokenizedDoc> tokenized(loaded.docs.size());
  parallel_for(static_cast<int>(loaded.docs.size()), n_threads,
               [&](int i) { tokenized[i] = preprocess(loaded.docs[i], pre); });

  TrimResult trimmed =
      trim_vocabulary(tokenized, config.min_term_count, config.min_doc_count);
  for (std::size_t d = 0; d < trimmed.empty_doc.size(); ++d)
    if (trimmed.empty_doc[d])
      manifest.warnings.push_back("document reduced to zero retained tokens: " +
                                  tokenized[d].doc_id);

  std::filesystem::create_directories(config.output_dir);
  {
    std::vector<std::string> ids;
    for (const auto& d : loaded.docs) ids.push_back(d.doc_id());
    write_vocabulary(config.output_dir / "vocabulary.txt", trimmed.vocab);
    write_doc_term_matrix(config.output_dir / "doc_term_matrix.csv",
                          trimmed.matrix, ids);
    manifest.global_artifacts.push_back("vocabulary.txt");
    manifest.global_artifacts.push_back("doc_term_matrix.csv");
  }

  std::map<int, std::vector<int>> by_year;
  for (std::size_t i = 0; i < loaded.docs.size(); ++i)
    by_year[loaded.docs[i].year].push_back(static_cast<int>(i));

  std::vector<YearTask> tasks;
  for (const auto& [year, rows] : by_year) {
    if (rows.size() < 2) {
      manifest.warnings.push_back("year " + std::to_string(year) +
                                  " skipped: fewer than 2 documents");
      continue;
    }
    tasks.push_back({year, rows});
  }

  std::vector<YearOutcome> outcomes(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), n_threads, [&](int i) {
    outcomes[i] = run_year(config, tasks[i], loaded.docs, trimmed.matrix);
  });

  std::vector<MetricsRow> metrics;
  for (auto& oc : outcomes) {
    for (auto& w : oc.warnings) manifest.warnings.push_back(std::move(w));
    if (oc.entry.ok && oc.has_metrics) metrics.push_back(oc.metrics);
    manifest.years.push_back(std::move(oc.entry));
  }

  if (!metrics.empty()) {
    write_metrics_csv(config.output_dir / "metrics.csv", metrics);
    manifest.global_artifacts.push_back("metrics.csv");

    bool contiguous = true;
    for (std::size_t i = 1; i < metrics.size(); ++i)
      contiguous &= metrics[i].year == metrics[i - 1].year + 1;
    if (contiguous &&
        static_cast<int>(metrics.size()) >= config.smoothing_window) {
      struct Series {
        const char* name;
        std::vector<double> values;
      };
      Series series[4] = {{"density", {}},
                          {"avg_path_length", {}},
                          {"global_clustering", {}},
                          {"diameter", {}}};
      for (const auto& r : metrics) {
        series[0].values.push_back(r.density);
        series[1].values.push_back(r.avg_path_length);
        series[2].values.push_back(r.global_clustering);
        series[3].values.push_back(static_cast<double>(r.diameter));
      }
      for (const auto& s : series) {
        SmoothedSeries sm = moving_average(s.values, metrics.front().year,
                                           config.smoothing_window);
        std::string base = std::string("smoothed_") + s.name;
        write_smoothed_csv(config.output_dir / (base + ".csv"), sm, s.name);
        write_line_chart_svg(config.output_dir / ("chart_" + std::string(s.name) + ".svg"),
                             s.name, sm.start_year, sm.values);
        manifest.global_artifacts.push_back(base + ".csv");
        manifest.global_artifacts.push_back("chart_" + std::string(s.name) + ".svg");
      }
    } else {
      manifest.warnings.push_back(
          "smoothing skipped: need a contiguous run of at least " +
          std::to_string(config.smoothing_window) + " successful years");
    }
  }

  write_manifest(config.output_dir / "manifest.txt", manifest);
  return manifest;
}

void write_manifest(const std::filesystem::path& file, const RunManifest& m) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + file.string());
  out << "config_hash = " << m.config_hash << '\n';
  out << "status = " << (m.all_ok() ? "ok" : "partial") << '\n';
  for (const auto& w : m.warnings) out << "warning = " << w << '\n';
  for (const auto& y : m.years) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3f", y.seconds);
    out << "year = " << y.year << ' ' << (y.ok ? "ok" : "failed") << ' ' << buf
        << "s\n";
    for (const auto& a : y.artifacts) out << "artifact = " << a << '\n';
  }
  for (const auto& a : m.global_artifacts) out << "artifact = " << a << '\n';
}

void write_line_chart_svg(const std::filesystem::path& file,
                          const std::string& title, int start_year,
                          const std::vector<double>& values) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + file.string());
  const double width = 640, height = 360;
  const double left = 60, right = 20, top = 30, bottom = 40;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  double lo = values.front(), hi = values.front();
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double span = hi - lo;
  if (span <= 0) span = hi != 0 ? std::abs(hi) : 1.0;

  auto x_at = [&](std::size_t i) {
    return values.size() > 1 ? left + plot_w * static_cast<double>(i) /
                                          static_cast<double>(values.size() - 1)
                             : left + plot_w / 2;
  };
  auto y_at = [&](double v) { return top + plot_h * (1.0 - (v - lo) / span); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width
      << ' ' << height << "\">\n";
  out << "  <text x=\"" << width / 2 << "\" y=\"18\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"14\">"
      << title << "</text>\n";
  out << "  <line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\""
      << left + plot_w << "\" y2=\"" << top + plot_h
      << "\" stroke=\"black\"/>\n";
  out << "  <line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
      << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";

  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", hi);
  out << "  <text x=\"" << left - 6 << "\" y=\"" << y_at(hi) + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << buf << "</text>\n";
  std::snprintf(buf, sizeof buf, "%.6g", lo);
  out << "  <text x=\"" << left - 6 << "\" y=\"" << y_at(lo) + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << buf << "</text>\n";
  out << "  <text x=\"" << left << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
      << start_year << "</text>\n";
  out << "  <text x=\"" << left + plot_w << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
      << start_year + static_cast<int>(values.size()) - 1 << "</text>\n";

  if (values.size() == 1) {
    out << "  <circle cx=\"" << x_at(0) << "\" cy=\"" << y_at(values[0])
        << "\" r=\"3\" fill=\"steelblue\"/>\n";
  } else {
    out << "  <polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out << ' ';
      std::snprintf(buf, sizeof buf, "%.2f,%.2f", x_at(i), y_at(values[i]));
      out << buf;
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace semnet
