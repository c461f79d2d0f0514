/*
 * Copyright 2026 The corpuskit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "corpuskit/analysis.hpp"
#include "corpuskit/cleaner.hpp"
#include "corpuskit/corpus.hpp"
#include "corpuskit/enlarge.hpp"
#include "corpuskit/error.hpp"
#include "corpuskit/isoforest.hpp"
#include "corpuskit/noising.hpp"
#include "corpuskit/page_features.hpp"
#include "corpuskit/parallel.hpp"
#include "corpuskit/pipeline.hpp"
#include "corpuskit/tokenizer.hpp"
#include "corpuskit/unicode.hpp"

namespace corpuskit::cli {

namespace {

namespace fs = std::filesystem;

// Output written next to its destination and renamed into place on commit,
// so failed runs leave no partial files behind.
class OutputFile {
 public:
  explicit OutputFile(std::string path, bool binary = false)
      : path_(std::move(path)), tmp_(path_ + ".tmp") {
    stream_.open(tmp_, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
    if (!stream_) throw Error(ErrorCode::kIo, "cannot write " + path_);
  }
  OutputFile(const OutputFile&) = delete;
  OutputFile& operator=(const OutputFile&) = delete;
  ~OutputFile() {
    if (!committed_) {
      stream_.close();
      std::error_code ec;
      fs::remove(tmp_, ec);
    }
  }

  std::ostream& stream() { return stream_; }

  void commit() {
    stream_.flush();
    if (!stream_) throw Error(ErrorCode::kIo, "write failed for " + path_);
    stream_.close();
    std::error_code ec;
    fs::rename(tmp_, path_, ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot rename into " + path_ + ": " + ec.message());
    committed_ = true;
  }

 private:
  std::string path_;
  std::string tmp_;
  std::ofstream stream_;
  bool committed_ = false;
};

std::ifstream open_input(const std::string& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return in;
}

std::string dump(const nlohmann::ordered_json& j) {
  return j.dump(2, ' ', false, nlohmann::ordered_json::error_handler_t::replace) + "\n";
}

void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  OutputFile out(path);
  out.stream() << text;
  out.commit();
}

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::kInvalidConfig, message);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (unicode::trim(line).empty()) continue;
    lines.push_back(line);
  }
  return lines;
}

struct Common {
  uint64_t seed = 0;
  int workers = 1;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Seed for all randomness")->capture_default_str();
  sub->add_option("--workers", c.workers, "Worker threads (never changes outputs)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

// ---- clean -----------------------------------------------------------------

struct CleanArgs {
  Common common;
  std::string in, out, report, abbreviations_file;
  PipelineConfig pipeline;
};

void setup_clean(CLI::App& app, CleanArgs& a, std::function<void()>& action) {
  auto* sub = app.add_subcommand("clean", "Full page and sentence cleaning pipeline");
  add_common(sub, a.common);
  CleaningConfig& c = a.pipeline.cleaning;
  ForestConfig& f = a.pipeline.forest;
  sub->add_option("--in", a.in, "Input JSON-lines corpus")->required();
  sub->add_option("--out", a.out, "Cleaned JSON-lines corpus")->required();
  sub->add_option("--report", a.report, "Report JSON (stdout when omitted)");
  sub->add_option("--blocklist", c.blocklist_path, "Bad-word list, one term per line");
  sub->add_option("--abbreviations", a.abbreviations_file, "Abbreviation list replacing the defaults");
  sub->add_option("--anomaly-filter", c.anomaly_filter, "Apply the isolation-forest page filter")
      ->capture_default_str();
  sub->add_option("--anomaly-threshold", c.anomaly_threshold)->capture_default_str();
  sub->add_option("--lang-prob-threshold", c.lang_prob_threshold)->capture_default_str();
  sub->add_option("--min-sentences", c.min_sentences_per_page)->capture_default_str();
  sub->add_option("--min-words", c.min_words)->capture_default_str();
  sub->add_option("--max-words", c.max_words)->capture_default_str();
  sub->add_option("--max-word-len", c.max_word_len)->capture_default_str();
  sub->add_option("--uppercase-frac-limit", c.uppercase_frac_limit)->capture_default_str();
  sub->add_option("--numeric-frac-limit", c.numeric_frac_limit)->capture_default_str();
  sub->add_option("--duplicate-word-limit", c.duplicate_word_limit)->capture_default_str();
  sub->add_option("--n-trees", f.n_trees)->capture_default_str();
  sub->add_option("--subsample-size", f.subsample_size)->capture_default_str();
  action = [&a]() {
    a.pipeline.forest.seed = a.common.seed;
    a.pipeline.workers = a.common.workers;
    a.pipeline.forest.workers = a.common.workers;
    if (!a.abbreviations_file.empty()) {
      a.pipeline.abbreviations.clear();
      for (const auto& l : read_lines(a.abbreviations_file)) {
        a.pipeline.abbreviations.emplace_back(unicode::trim(l));
      }
    }
    a.pipeline.validate();
    Blocklist blocklist;
    if (!a.pipeline.cleaning.blocklist_path.empty()) {
      blocklist = Blocklist::load(a.pipeline.cleaning.blocklist_path);
    }
    std::ifstream in = open_input(a.in);
    OutputFile out(a.out);
    const CleaningReport report = run_pipeline(in, out.stream(), a.pipeline, blocklist);
    // The echoed config leaves out the worker count so reports stay
    // byte-identical across worker counts.
    nlohmann::ordered_json j = report.to_json();
    j["config"] = a.pipeline.to_json();
    out.commit();
    write_text(a.report, dump(j), std::cout);
  };
}

// ---- features / fit-forest / score ------------------------------------------

struct FeaturesArgs {
  Common common;
  std::string in, out;
};

void setup_features(CLI::App& app, FeaturesArgs& a, std::function<void()>& action) {
  auto* sub = app.add_subcommand("features", "Per-page anomaly features as TSV");
  add_common(sub, a.common);
  sub->add_option("--in", a.in, "Input JSON-lines corpus")->required();
  sub->add_option("--out", a.out, "Output TSV: page_id, five features")->required();
  action = [&a]() {
    std::ifstream in = open_input(a.in);
    OutputFile out(a.out);
    for (const FeatureRecord& r : extract_features(in, SentenceSplitter(), a.common.workers)) {
      write_feature_row(out.stream(), r);
    }
    out.commit();
  };
}

struct FitArgs {
  Common common;
  std::string features, out;
  ForestConfig forest;
};

void setup_fit(CLI::App& app, FitArgs& a, std::function<void()>& action) {
  auto* sub = app.add_subcommand("fit-forest", "Fit an isolation forest on a feature TSV");
  add_common(sub, a.common);
  sub->add_option("--features", a.features, "Feature TSV")->required();
  sub->add_option("--out", a.out, "Forest file")->required();
  sub->add_option("--n-trees", a.forest.n_trees)->capture_default_str();
  sub->add_option("--subsample-size", a.forest.subsample_size)->capture_default_str();
  action = [&a]() {
    a.forest.seed = a.common.seed;
    a.forest.workers = a.common.workers;
    a.forest.validate();
    std::ifstream in = open_input(a.features);
    std::vector<FeatureVector> points;
    for (const FeatureRecord& r : read_feature_tsv(in)) points.push_back(r.features.as_array());
    const IsolationForest forest = fit(points, a.forest);
    OutputFile out(a.out);
    save_forest(out.stream(), forest);
    out.commit();
  };
}

struct ScoreArgs {
  Common common;
  std::string forest, features, out;
};

void setup_score(CLI::App& app, ScoreArgs& a, std::function<void()>& action) {
  auto* sub = app.add_subcommand("score", "Score feature rows against a fitted forest");
  add_common(sub, a.common);
  sub->add_option("--forest", a.forest, "Forest file")->required();
  sub->add_option("--features", a.features, "Feature TSV")->required();
  sub->add_option("--out", a.out, "Output TSV: page_id, anomaly_score, decision_score")->required();
  action = [&a]() {
    std::ifstream forest_in = open_input(a.forest);
    const IsolationForest forest = load_forest(forest_in);
    std::ifstream in = open_input(a.features);
    const std::vector<FeatureRecord> rows = read_feature_tsv(in);
    OutputFile out(a.out);
    for (const FeatureRecord& r : rows) {
      const double s = anomaly_score(forest, r.features.as_array());
      out.stream() << r.page_id << '\t' << format_double(s) << '\t' << format_double(0.5 - s)
                   << '\n';
    }
    out.commit();
  };
}

// ---- tokenize / noise -------------------------------------------------------

SentenceEncoder make_encoder(const std::string& vocab_path, std::shared_ptr<const Vocab>& holder) {
  if (vocab_path.empty()) return [](std::string_view s) { return encode_whitespace(s); };
  holder = std::make_shared<const Vocab>(Vocab::load(vocab_path));
  const Vocab* v = holder.get();
  return [v](std::string_view s) { return encode_unigram(*v, s); };
}

struct TokenizeArgs {
  Common common;
  std::string in, out, vocab;
};

void setup_tokenize(CLI::App& app, TokenizeArgs& a, std::function<void()>& action) {
  auto* sub = app.add_subcommand("tokenize", "Per-page token counts as JSON-lines");
  add_common(sub, a.common);
  sub->add_option("--in", a.in, "Input JSON-lines corpus")->required();
  sub->add_option("--out", a.out, "Output JSON-lines {id, n_tokens}")->required();
  sub->add_option("--vocab", a.vocab, "Unigram vocab TSV (whitespace tokenizer when omitted)");
  action = [&a]() {
    std::shared_ptr<const Vocab> holder;
    const SentenceEncoder encode = make_encoder(a.vocab, holder);
    std::ifstream in = open_input(a.in);
    OutputFile out(a.out);
    JsonlReader reader(in);
    std::vector<RawRecord> batch;
    while (reader.next_batch(1024, batch)) {
      std::vector<std::string> lines(batch.size());
      parallel_for(batch.size(), a.common.workers, [&](size_t i) {
        const Page page = parse_page(batch[i].line, batch[i].line_no);
        nlohmann::ordered_json j;
        j["id"] = page.id;
        j["n_tokens"] = encode(page.text).size();
        lines[i] = j.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
      });
      for (const auto& l : lines) out.stream() << l << '\n';
    }
    out.commit();
  };
}

struct NoiseArgs {
  Common common;
  std::string in, out, vocab, stats;
  uint64_t epoch = 0;
  NoisingConfig config;
};

void setup_noise(CLI::App& app, NoiseArgs& a, std::function<void()>& action) {
  auto* sub = app.add_subcommand("noise", "Generate denoising training examples");
  add_common(sub, a.common);
  sub->add_option("--in", a.in, "Cleaned JSON-lines corpus")->required();
  sub->add_option("--out", a.out, "Example JSON-lines")->required();
  sub->add_option("--vocab", a.vocab, "Unigram vocab TSV (whitespace tokenizer when omitted)");
  sub->add_option("--stats", a.stats, "Masking telemetry JSON");
  sub->add_option("--epoch", a.epoch)->capture_default_str();
  sub->add_option("--mask-ratio", a.config.mask_ratio)->capture_default_str();
  sub->add_option("--poisson-lambda", a.config.poisson_lambda)->capture_default_str();
  sub->add_option("--encoder-len", a.config.encoder_len)->capture_default_str();
  sub->add_option("--decoder-len", a.config.decoder_len)->capture_default_str();
  action = [&a]() {
    a.config.global_seed = a.common.seed;
    a.config.validate();
    std::shared_ptr<const Vocab> holder;
    const SentenceEncoder encode = make_encoder(a.vocab, holder);
    std::ifstream in = open_input(a.in);
    OutputFile out(a.out);
    const NoisingTelemetry t = run_noising(in, out.stream(), encode, a.epoch, a.config, a.common.workers);
    out.commit();
    if (!a.stats.empty()) write_text(a.stats, dump(t.to_json()), std::cout);
  };
}

// ---- analyze-tokenizers / budget / intersections ----------------------------

struct AnalyzeArgs {
  Common common;
  std::string counts, corpus, vocab, vocab_name = "unigram", reference, out, table;
};

void setup_analyze(CLI::App& app, AnalyzeArgs& a, std::function<void()>& action) {
  auto* sub = app.add_subcommand("analyze-tokenizers", "Relative token counts and representation power");
  add_common(sub, a.common);
  sub->add_option("--counts", a.counts, "TSV: name, vocab_size, total_tokens");
  sub->add_option("--corpus", a.corpus, "JSON-lines corpus counted with the built-in tokenizers");
  sub->add_option("--vocab", a.vocab, "Unigram vocab TSV for the built-in count");
  sub->add_option("--vocab-name", a.vocab_name, "Report name for the unigram vocab")->capture_default_str();
  sub->add_option("--reference", a.reference, "Reference tokenizer (first row when omitted)");
  sub->add_option("--out", a.out, "Report JSON (stdout when omitted)");
  sub->add_option("--table", a.table, "Aligned text table");
  action = [&a]() {
    require(!a.counts.empty() || !a.corpus.empty(), "one of --counts or --corpus is required");
    std::vector<TokenizerCount> counts;
    if (!a.counts.empty()) {
      std::ifstream in = open_input(a.counts);
      counts = read_counts_tsv(in);
    }
    if (!a.corpus.empty()) {
      std::optional<Vocab> vocab;
      if (!a.vocab.empty()) vocab = Vocab::load(a.vocab);
      std::ifstream in = open_input(a.corpus);
      JsonlReader reader(in);
      std::vector<RawRecord> batch;
      uint64_t unigram_total = 0;
      uint64_t whitespace_total = 0;
      while (reader.next_batch(1024, batch)) {
        std::vector<std::pair<uint64_t, uint64_t>> per_page(batch.size());
        parallel_for(batch.size(), a.common.workers, [&](size_t i) {
          const Page page = parse_page(batch[i].line, batch[i].line_no);
          per_page[i].first = vocab ? encode_unigram(*vocab, page.text).size() : 0;
          per_page[i].second = encode_whitespace(page.text).size();
        });
        for (const auto& [u, w] : per_page) {
          unigram_total += u;
          whitespace_total += w;
        }
      }
      if (vocab) counts.push_back({a.vocab_name, vocab->size(), unigram_total});
      counts.push_back({"whitespace", static_cast<uint64_t>(kNumSpecialIds) + kWhitespaceIdSpace,
                        whitespace_total});
    }
    require(!counts.empty(), "no tokenizer counts");
    const std::string reference = a.reference.empty() ? counts.front().name : a.reference;
    const auto reports = compare_tokenizers(counts, reference);
    nlohmann::ordered_json j;
    j["reference"] = reference;
    j["tokenizers"] = to_json(reports);
    write_text(a.out, dump(j), std::cout);
    if (!a.table.empty()) write_text(a.table, format_table(reports), std::cout);
  };
}

struct BudgetArgs {
  Common common;
  uint64_t params = 0, steps = 0, batch = 0, ctx = 0, corpus_tokens = 0;
  std::string out;
};

void setup_budget(CLI::App& app, BudgetArgs& a, std::function<void()>& action) {
  auto* sub = app.add_subcommand("budget", "Tokens seen, epochs, Chinchilla ratio, optimal steps");
  add_common(sub, a.common);
  sub->add_option("--params", a.params)->required()->check(CLI::PositiveNumber);
  sub->add_option("--steps", a.steps)->required()->check(CLI::PositiveNumber);
  sub->add_option("--batch", a.batch)->required()->check(CLI::PositiveNumber);
  sub->add_option("--ctx", a.ctx)->required()->check(CLI::PositiveNumber);
  sub->add_option("--corpus-tokens", a.corpus_tokens)->required()->check(CLI::PositiveNumber);
  sub->add_option("--out", a.out, "Report JSON (stdout when omitted)");
  action = [&a]() {
    const BudgetReport r = make_budget_report(a.params, a.steps, a.batch, a.ctx, a.corpus_tokens);
    write_text(a.out, dump(r.to_json()), std::cout);
  };
}

struct IntersectArgs {
  Common common;
  std::vector<std::string> datasets;
  std::string out, table;
};

void setup_intersections(CLI::App& app, IntersectArgs& a, std::function<void()>& action) {
  auto* sub = app.add_subcommand("intersections", "Pairwise record overlap between dataset splits");
  add_common(sub, a.common);
  sub->add_option("--dataset", a.datasets, "name=path, one record per line (repeatable)")
      ->required()
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  sub->add_option("--out", a.out, "Matrix JSON (stdout when omitted)");
  sub->add_option("--table", a.table, "Aligned text table");
  action = [&a]() {
    std::vector<std::pair<std::string, std::string>> specs;
    for (const std::string& d : a.datasets) {
      const size_t eq = d.find('=');
      require(eq != std::string::npos && eq > 0 && eq + 1 < d.size(),
              "--dataset expects name=path, got '" + d + "'");
      specs.emplace_back(d.substr(0, eq), d.substr(eq + 1));
    }
    std::vector<Dataset> datasets;
    for (const auto& [name, path] : specs) datasets.push_back({name, read_lines(path)});
    const IntersectionMatrix m = split_intersections(datasets);
    write_text(a.out, dump(m.to_json()), std::cout);
    if (!a.table.empty()) write_text(a.table, m.format_table(), std::cout);
  };
}

// ---- enlarge ----------------------------------------------------------------

struct EnlargeArgs {
  Common common;
  std::string donor, out;
  int src_layers = 12, tgt_layers = 24;
  double init_std = 0.02;
  bool dry_run = false;
};

void setup_enlarge(CLI::App& app, EnlargeArgs& a, std::function<void()>& action) {
  auto* sub = app.add_subcommand("enlarge", "Double encoder/decoder depth by layer interleaving");
  add_common(sub, a.common);
  sub->add_option("--donor", a.donor, "Donor tensor manifest")->required();
  sub->add_option("--out", a.out, "Output manifest (plan JSON with --dry-run)");
  sub->add_option("--src-layers", a.src_layers)->capture_default_str();
  sub->add_option("--tgt-layers", a.tgt_layers)->capture_default_str();
  sub->add_option("--init-std", a.init_std)->capture_default_str();
  sub->add_flag("--dry-run", a.dry_run, "Print the plan as JSON without writing weights");
  action = [&a]() {
    require(a.dry_run || !a.out.empty(), "--out is required unless --dry-run is given");
    const TensorManifest donor = load_manifest(a.donor);
    std::vector<std::string> names;
    for (const TensorEntry& e : donor.entries()) names.push_back(e.name);
    const EnlargePlan plan = plan_enlargement(a.src_layers, a.tgt_layers, names, a.init_std);
    if (a.dry_run) {
      write_text(a.out, dump(plan.to_json()), std::cout);
      return;
    }
    const TensorManifest enlarged = apply_enlargement(donor, plan, a.common.seed);
    OutputFile out(a.out, true);
    write_manifest(out.stream(), enlarged);
    out.commit();
  };
}

std::vector<std::string> with_config_args(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::vector<std::string> config_paths;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_paths.push_back(args[++i]);
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_paths.push_back(args[i].substr(9));
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config_paths.empty() || rest.empty()) return rest;
  // Config values go right after the subcommand so explicit flags, which
  // come later, win.
  std::vector<std::string> out = {rest.front()};
  for (const auto& path : config_paths) {
    const auto extra = config_file_args(path);
    out.insert(out.end(), extra.begin(), extra.end());
  }
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

}  // namespace

std::vector<std::string> config_file_args(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<std::string> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view t = unicode::trim(line);
    if (t.empty() || t.front() == '#' || t.front() == ';' || t.front() == '[') continue;
    const size_t eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidConfig,
                  path + ":" + std::to_string(line_no) + ": expected key = value");
    }
    std::string key(unicode::trim(t.substr(0, eq)));
    std::string value(unicode::trim(t.substr(eq + 1)));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "dry-run") {
      if (value == "true" || value == "1") out.push_back("--dry-run");
      continue;
    }
    out.push_back("--" + key + "=" + value);
  }
  return out;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"corpuskit: corpus cleaning and denoising pre-training data tools", "corpuskit"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::function<void()> clean, features, fit_forest, score, tokenize, noise, analyze, budget,
      intersections, enlarge;
  CleanArgs clean_args;
  FeaturesArgs features_args;
  FitArgs fit_args;
  ScoreArgs score_args;
  TokenizeArgs tokenize_args;
  NoiseArgs noise_args;
  AnalyzeArgs analyze_args;
  BudgetArgs budget_args;
  IntersectArgs intersect_args;
  EnlargeArgs enlarge_args;
  setup_clean(app, clean_args, clean);
  setup_features(app, features_args, features);
  setup_fit(app, fit_args, fit_forest);
  setup_score(app, score_args, score);
  setup_tokenize(app, tokenize_args, tokenize);
  setup_noise(app, noise_args, noise);
  setup_analyze(app, analyze_args, analyze);
  setup_budget(app, budget_args, budget);
  setup_intersections(app, intersect_args, intersections);
  setup_enlarge(app, enlarge_args, enlarge);

  // Reports written to "stdout" go to `out`; swap std::cout's buffer for the
  // duration of the call.
  struct CoutRedirect {
    std::streambuf* saved;
    explicit CoutRedirect(std::ostream& target) : saved(std::cout.rdbuf(target.rdbuf())) {}
    ~CoutRedirect() { std::cout.rdbuf(saved); }
  };

  try {
    std::vector<std::string> args = with_config_args(raw_args);
    std::reverse(args.begin(), args.end());
    try {
      app.parse(args);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kExitOk : kExitValidation;
    }
    CoutRedirect redirect(out);
    const std::pair<const char*, std::function<void()>*> table[] = {
        {"clean", &clean},       {"features", &features},
        {"fit-forest", &fit_forest}, {"score", &score},
        {"tokenize", &tokenize}, {"noise", &noise},
        {"analyze-tokenizers", &analyze}, {"budget", &budget},
        {"intersections", &intersections}, {"enlarge", &enlarge},
    };
    for (const auto& [name, fn] : table) {
      if (app.got_subcommand(name)) (*fn)();
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::kIo ? kExitIo : kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace corpuskit::cli
