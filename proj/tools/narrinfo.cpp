// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end for the narrative information pipeline.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "narrinfo/config.hpp"
#include "narrinfo/corpus.hpp"
#include "narrinfo/csv.hpp"
#include "narrinfo/error.hpp"
#include "narrinfo/infocalc.hpp"
#include "narrinfo/lm_backend.hpp"
#include "narrinfo/parallel.hpp"
#include "narrinfo/predictability.hpp"
#include "narrinfo/rephrase.hpp"
#include "narrinfo/report.hpp"
#include "narrinfo/synthworld.hpp"

namespace fs = std::filesystem;
using namespace narrinfo;

namespace {

struct Globals {
  std::string backend;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::string variant = "plain";
  unsigned threads = 0;
};

Settings settings(const Globals& g) {
  return load_settings(g.config.empty() ? std::nullopt
                                        : std::optional<fs::path>(g.config));
}

unsigned thread_count(const Globals& g, const Settings& s) {
  if (g.threads > 0) return g.threads;
  if (auto v = setting(s, "threads")) return static_cast<unsigned>(parse_int(*v));
  return std::max(1u, std::thread::hardware_concurrency());
}

std::uint64_t seed_of(const Globals& g, const Settings& s) {
  if (g.seed) return *g.seed;
  if (auto v = setting(s, "seed")) return static_cast<std::uint64_t>(parse_int(*v));
  return 0;
}

fs::path out_path(const Globals& g, std::string_view name) {
  return fs::path(g.out_dir) / std::string(name);
}

std::unique_ptr<Backend> make_scorer(const Globals& g, const Settings& s,
                                     const CorpusManifest& corpus) {
  BackendConfig cfg = backend_config(s, "scorer");
  if (g.backend == "remote") {
    cfg.kind = BackendKind::remote;
  } else if (g.backend == "ngram") {
    cfg.kind = BackendKind::ngram;
  } else if (!g.backend.empty()) {
    fail(ErrorKind::Config, "--backend must be remote or ngram");
  }
  if (cfg.kind == BackendKind::ngram && cfg.ngram_training_path.empty() &&
      cfg.ngram_training_text.empty()) {
    // Without training data the model is fitted on the corpus itself.
    for (const auto& n : corpus.narratives) {
      cfg.ngram_training_text += canonical_text(n, TextStyle::plain).text;
      cfg.ngram_training_text += '\n';
    }
    for (const auto& n : corpus.narratives) {
      cfg.ngram_extra_alphabet += scoring_prefix(n);
    }
    cfg.ngram_extra_alphabet += '\n';
    for (char c = 0x20; c < 0x7f; ++c) cfg.ngram_extra_alphabet += c;
  }
  return make_backend(cfg);
}

std::unique_ptr<Backend> make_role(const Settings& s, std::string_view role) {
  const std::string prefix(role);
  const bool configured = setting(s, prefix + ".kind") || setting(s, prefix + ".model_name");
  if (role == "judge" && !configured) return make_role(s, "generator");
  BackendConfig cfg = backend_config(s, prefix);
  if (!setting(s, prefix + ".kind")) cfg.kind = BackendKind::remote;
  return make_backend(cfg);
}

CorpusManifest load_with_contexts(const std::string& corpus_path,
                                  const std::string& contexts_path) {
  auto corpus = load_corpus(corpus_path);
  if (!contexts_path.empty()) {
    apply_initial_contexts(corpus, load_initial_contexts(contexts_path));
  }
  return corpus;
}

Variant variant_of(const Globals& g) { return parse_variant(g.variant); }

std::map<std::string, RephrasingBundle> bundles_by_id(const std::string& path,
                                                      const std::string& id,
                                                      const CorpusManifest& corpus) {
  std::map<std::string, RephrasingBundle> out;
  for (auto& b : load_rephrasings(path, id, corpus)) out.emplace(b.narrative_id, std::move(b));
  return out;
}

const RephrasingBundle& bundle_for(const std::map<std::string, RephrasingBundle>& bundles,
                                   const std::string& id) {
  auto it = bundles.find(id);
  if (it == bundles.end()) fail(ErrorKind::SchemaError, "no rephrasing for '" + id + "'");
  return it->second;
}

std::string bits_csv(std::span<const std::pair<std::string, ClauseBits>> rows,
                     std::string_view column, std::string_view variant,
                     std::string_view backend_id, std::string_view rephrasing_id) {
  csv::Table t;
  t.header = {"narrative_id", "clause_num", std::string(column), "variant", "backend_id"};
  if (!rephrasing_id.empty()) t.header.push_back("rephrasing_id");
  for (const auto& [id, b] : rows) {
    std::vector<std::string> row = {id, std::to_string(b.clause_index),
                                    format_double(b.bits), std::string(variant),
                                    std::string(backend_id)};
    if (!rephrasing_id.empty()) row.emplace_back(rephrasing_id);
    t.rows.push_back(std::move(row));
  }
  return csv::format(t);
}

void print_stats(std::string_view label, const std::optional<DeviationStats>& s) {
  std::cout << label << ": ";
  if (!s) {
    std::cout << "n=0\n";
    return;
  }
  std::cout << "n=" << s->n << " mean=" << format_double(s->mean)
            << " std=" << format_double(s->std)
            << (s->mode == DeviationMode::absolute_bits ? " bits" : " %") << "\n";
}

std::vector<ClauseRef> predictable_refs(const std::string& path) {
  const auto table = csv::read(path);
  if (table.find_column("correct_gpt")) {
    std::vector<ClauseRef> out;
    for (const auto& t : read_trials(path)) {
      if (t.machine_predicted()) out.push_back({t.narrative_id, t.clause_index});
    }
    return out;
  }
  return read_sample(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semantic information of narrative clauses"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--backend", g.backend, "Scoring backend kind (remote|ngram)");
  app.add_option("--config", g.config, "Settings file (key = value)");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--out-dir", g.out_dir, "Output directory");
  app.add_option("--variant", g.variant,
                 "plain | with_initial_context | partial_rephrasing");
  app.add_option("--threads", g.threads, "Narratives processed in parallel");

  std::string corpus_path, contexts_path, rephrasings_path, rephrasing_id = "r1";
  std::string records_path, sample_path, trials_path, human_path;
  std::string r1_path, r2_path, a_path, b_path, predictable_path, world_path, from_path;
  double split = 0.0;
  int per_bin = 40, n_narratives = 20, length = 10, chunk_limit = 50, max_pos = 0;
  bool rejudge = false, no_plots = false, run_pipeline = false;

  auto* ingest = app.add_subcommand("ingest", "Validate a corpus CSV");
  ingest->add_option("--corpus", corpus_path)->required();
  ingest->add_option("--contexts", contexts_path);

  auto* score = app.add_subcommand("score", "Total information per clause");
  score->add_option("--corpus", corpus_path)->required();
  score->add_option("--contexts", contexts_path);

  auto* rephrase = app.add_subcommand("rephrase", "Generate clause-aligned rephrasings");
  rephrase->add_option("--corpus", corpus_path)->required();
  rephrase->add_option("--id", rephrasing_id);
  rephrase->add_option("--from", from_path, "Rephrase an existing rephrasing again");
  rephrase->add_option("--chunk-limit", chunk_limit);

  auto* wording = app.add_subcommand("wording", "Wording information per clause");
  wording->add_option("--corpus", corpus_path)->required();
  wording->add_option("--rephrasings", rephrasings_path)->required();
  wording->add_option("--rephrasing-id", rephrasing_id);

  auto* semantic = app.add_subcommand("semantic", "Semantic information per clause");
  semantic->add_option("--corpus", corpus_path)->required();
  semantic->add_option("--rephrasings", rephrasings_path)->required();
  semantic->add_option("--rephrasing-id", rephrasing_id);
  semantic->add_option("--contexts", contexts_path);

  auto* sample = app.add_subcommand("sample", "Stratified sample over I_M bins");
  sample->add_option("--records", records_path)->required();
  sample->add_option("--per-bin", per_bin);

  auto* predict = app.add_subcommand("predict", "Predict sampled clauses");
  predict->add_option("--corpus", corpus_path)->required();
  predict->add_option("--sample", sample_path)->required();
  predict->add_option("--records", records_path)->required();

  auto* judge = app.add_subcommand("judge", "Judge predictions and merge human results");
  judge->add_option("--corpus", corpus_path)->required();
  judge->add_option("--trials", trials_path)->required();
  judge->add_option("--human", human_path);
  judge->add_flag("--rejudge", rejudge);

  auto* consistency = app.add_subcommand("consistency", "Compare I_M of two rephrasings");
  consistency->add_option("--r1", r1_path)->required();
  consistency->add_option("--r2", r2_path)->required();
  consistency->add_option("--split", split);

  auto* compare = app.add_subcommand("compare", "Compare I_M of two models");
  compare->add_option("--a", a_path)->required();
  compare->add_option("--b", b_path)->required();
  compare->add_option("--predictable", predictable_path);
  compare->add_option("--split", split);

  auto* report = app.add_subcommand("report", "Write tables, plots and manifest");
  report->add_option("--corpus", corpus_path)->required();
  report->add_option("--records", records_path)->required();
  report->add_option("--r2", r2_path);
  report->add_option("--compare", b_path);
  report->add_option("--predictable", predictable_path);
  report->add_option("--max-pos", max_pos);
  report->add_flag("--no-plots", no_plots);

  auto* synth = app.add_subcommand("synth", "Sample a synthetic corpus from a world file");
  synth->add_option("--world", world_path)->required();
  synth->add_option("--narratives", n_narratives);
  synth->add_option("--length", length);
  synth->add_flag("--run", run_pipeline, "Score it with the exact world backend");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const Settings s = settings(g);
    const unsigned threads = thread_count(g, s);

    if (ingest->parsed()) {
      const auto corpus = load_with_contexts(corpus_path, contexts_path);
      std::size_t with_context = 0;
      for (const auto& n : corpus.narratives) with_context += n.initial_context ? 1 : 0;
      std::cout << "narratives: " << corpus.narratives.size() << "\n"
                << "clauses: " << corpus.clause_count() << "\n"
                << "with initial context: " << with_context << "\n"
                << "sha256: " << corpus.checksum << "\n";
    } else if (score->parsed()) {
      const auto corpus = load_with_contexts(corpus_path, contexts_path);
      const auto backend = make_scorer(g, s, corpus);
      const Variant v = variant_of(g);
      auto per = parallel_map(corpus.narratives.size(), threads, [&](std::size_t i) {
        return total_info(corpus.narratives[i], *backend, v);
      });
      std::vector<std::pair<std::string, ClauseBits>> rows;
      for (std::size_t i = 0; i < per.size(); ++i) {
        for (const auto& b : per[i]) rows.emplace_back(corpus.narratives[i].id, b);
      }
      const auto path = out_path(g, "total_info.csv");
      write_file_atomic(path, bits_csv(rows, "I_bits", to_string(v), backend->id(), ""));
      std::cout << path.string() << "\n";
    } else if (rephrase->parsed()) {
      const auto corpus = load_corpus(corpus_path);
      const auto generator = make_role(s, "generator");
      RephraseOptions opt;
      opt.rephrasing_id = rephrasing_id;
      opt.chunk_limit = chunk_limit;
      std::map<std::string, RephrasingBundle> sources;
      if (!from_path.empty()) sources = bundles_by_id(from_path, "r1", corpus);
      auto bundles = parallel_map(corpus.narratives.size(), threads, [&](std::size_t i) {
        const auto& n = corpus.narratives[i];
        if (!from_path.empty()) {
          return second_rephrasing(bundle_for(sources, n.id), *generator, opt);
        }
        return generate_rephrasing(n, *generator, opt);
      });
      const auto path = out_path(g, "rephrasings_" + rephrasing_id + ".csv");
      write_rephrasings(path, bundles);
      std::cout << path.string() << "\n";
    } else if (wording->parsed()) {
      const auto corpus = load_corpus(corpus_path);
      const auto backend = make_scorer(g, s, corpus);
      const auto bundles = bundles_by_id(rephrasings_path, rephrasing_id, corpus);
      const Variant v = variant_of(g);
      auto per = parallel_map(corpus.narratives.size(), threads, [&](std::size_t i) {
        const auto& n = corpus.narratives[i];
        const auto& b = bundle_for(bundles, n.id);
        return v == Variant::partial_rephrasing ? partial_wording_info_all(n, b, *backend)
                                                : wording_info(n, b, *backend);
      });
      std::vector<std::pair<std::string, ClauseBits>> rows;
      for (std::size_t i = 0; i < per.size(); ++i) {
        for (const auto& b : per[i]) rows.emplace_back(corpus.narratives[i].id, b);
      }
      const auto path = out_path(g, "wording_info.csv");
      write_file_atomic(path,
                        bits_csv(rows, "IW_bits", to_string(v), backend->id(), rephrasing_id));
      std::cout << path.string() << "\n";
    } else if (semantic->parsed()) {
      const auto corpus = load_with_contexts(corpus_path, contexts_path);
      const auto backend = make_scorer(g, s, corpus);
      const auto bundles = bundles_by_id(rephrasings_path, rephrasing_id, corpus);
      const Variant v = variant_of(g);
      auto per = parallel_map(corpus.narratives.size(), threads, [&](std::size_t i) {
        const auto& n = corpus.narratives[i];
        const auto& b = bundle_for(bundles, n.id);
        const auto total = total_info(n, *backend, v);
        const auto w = v == Variant::partial_rephrasing ? partial_wording_info_all(n, b, *backend)
                                                        : wording_info(n, b, *backend);
        return semantic_info(n.id, total, w, v, backend->id(), rephrasing_id);
      });
      std::vector<ClauseInfoRecord> records;
      for (auto& p : per) records.insert(records.end(), p.begin(), p.end());
      const auto path = out_path(g, "semantic_information.csv");
      write_records(path, records);
      const auto summary = corpus_summary(corpus, records);
      std::cout << path.string() << "\n"
                << "mean I: " << format_double(summary.mean_I) << " bits/clause\n"
                << "mean I_M: " << format_double(summary.mean_IM) << " bits/clause\n"
                << "bits per char: " << format_double(summary.bits_per_char) << "\n";
    } else if (sample->parsed()) {
      const auto records = read_records(records_path);
      BinSpec spec;
      spec.per_bin_target = per_bin;
      const auto result = stratified_sample(records, spec, seed_of(g, s));
      const auto path = out_path(g, "sample.csv");
      write_file_atomic(path, sample_csv(result));
      for (std::size_t b = 0; b < spec.bin_count(); ++b) {
        std::cout << "[" << format_double(spec.boundaries[b]) << ", "
                  << format_double(spec.boundaries[b + 1]) << "): population "
                  << result.bin_population[b] << ", selected " << result.bin_selected[b]
                  << "\n";
      }
      std::cout << "sampled: " << result.sampled_before_removal << "\n"
                << "first clauses removed: " << result.first_clauses_removed << "\n"
                << path.string() << "\n";
    } else if (predict->parsed()) {
      const auto corpus = load_corpus(corpus_path);
      const auto refs = read_sample(sample_path);
      std::map<std::pair<std::string, int>, double> im;
      for (const auto& r : read_records(records_path)) {
        im[{r.narrative_id, r.clause_index}] = r.IM_bits;
      }
      const auto generator = make_role(s, "generator");
      auto trials = parallel_map(refs.size(), threads, [&](std::size_t i) {
        const auto& ref = refs[i];
        const Narrative* n = corpus.find(ref.narrative_id);
        if (n == nullptr) fail(ErrorKind::SchemaError, "unknown narrative '" + ref.narrative_id + "'");
        auto it = im.find({ref.narrative_id, ref.clause_index});
        if (it == im.end()) {
          fail(ErrorKind::SchemaError, "no I_M for '" + ref.narrative_id + "' clause " +
                                           std::to_string(ref.clause_index));
        }
        return predict_clause(*n, ref.clause_index, it->second, *generator);
      });
      const auto path = out_path(g, "gpt_predictions.csv");
      write_trials(path, trials);
      std::cout << path.string() << "\n";
    } else if (judge->parsed()) {
      const auto corpus = load_corpus(corpus_path);
      auto trials = read_trials(trials_path);
      const bool pending = rejudge || std::any_of(trials.begin(), trials.end(), [](const auto& t) {
                             return !t.judged_same_meaning.has_value();
                           });
      if (pending) {
        const auto judge_backend = make_role(s, "judge");
        trials = parallel_map(trials.size(), threads, [&](std::size_t i) {
          PredictionTrial t = trials[i];
          if (rejudge || !t.judged_same_meaning) {
            const Narrative* n = corpus.find(t.narrative_id);
            if (n == nullptr) fail(ErrorKind::SchemaError, "unknown narrative '" + t.narrative_id + "'");
            judge_trial(t, *n, *judge_backend);
          }
          return t;
        });
      }
      if (!human_path.empty()) {
        const auto human = ingest_human_results(human_path);
        std::cout << "human results matched: " << merge_human_results(trials, human) << "\n";
      }
      const auto path = out_path(g, "gpt_predictions.csv");
      write_trials(path, trials);
      const auto rep = predictability_report(trials);
      csv::Table t;
      t.header = {"bin_lo", "bin_hi", "human_predicted", "machine_only"};
      for (const auto& b : rep.histogram) {
        t.rows.push_back({format_double(b.lo), format_double(b.hi),
                          std::to_string(b.human_predicted), std::to_string(b.machine_only)});
      }
      write_file_atomic(out_path(g, "predictability.csv"), csv::format(t));
      std::cout << "trials: " << rep.trials << "\n"
                << "judged same meaning: " << rep.judged_positive << "\n"
                << "rejected on verification: " << rep.judge_false_positives << "\n"
                << "machine predicted: " << rep.machine_predicted << "\n"
                << "also human predicted: " << rep.human_predicted << "\n"
                << path.string() << "\n";
    } else if (consistency->parsed()) {
      const auto stats = consistency_stats(read_records(r1_path), read_records(r2_path),
                                           split > 0 ? split : 12.0);
      write_file_atomic(out_path(g, "consistency.csv"), csv::format(consistency_table(stats)));
      print_stats("I_M < split", stats.low);
      print_stats("I_M >= split", stats.high);
    } else if (compare->parsed()) {
      const std::vector<ClauseRef> predictable =
          predictable_path.empty() ? std::vector<ClauseRef>{} : predictable_refs(predictable_path);
      const auto stats = model_comparison_stats(read_records(a_path), read_records(b_path),
                                                split > 0 ? split : 14.0, predictable);
      write_file_atomic(out_path(g, "model_comparison.csv"),
                        csv::format(comparison_table(stats)));
      print_stats("predictable", stats.predictable);
      print_stats("I_M < split", stats.low);
      print_stats("I_M > split", stats.high);
    } else if (report->parsed()) {
      ReportInputs in;
      in.corpus = load_corpus(corpus_path);
      in.records = read_records(records_path);
      if (!r2_path.empty()) in.second_rephrasing = read_records(r2_path);
      if (!b_path.empty()) in.comparison = read_records(b_path);
      if (!predictable_path.empty()) in.predictable = predictable_refs(predictable_path);
      in.max_position = max_pos;
      in.plots = !no_plots;
      in.manifest.corpus_checksum = in.corpus.checksum;
      std::set<std::string> backends, rephrasings;
      for (const auto* set : {&in.records, in.second_rephrasing ? &*in.second_rephrasing : nullptr,
                              in.comparison ? &*in.comparison : nullptr}) {
        if (set == nullptr) continue;
        for (const auto& r : *set) {
          if (!r.backend_id.empty()) backends.insert(r.backend_id);
          if (!r.rephrasing_id.empty()) rephrasings.insert(r.rephrasing_id);
        }
      }
      in.manifest.backend_ids.assign(backends.begin(), backends.end());
      in.manifest.rephrasing_ids.assign(rephrasings.begin(), rephrasings.end());
      in.manifest.seeds["sample"] = seed_of(g, s);
      for (const auto& p : emit_outputs(in, g.out_dir)) std::cout << p.string() << "\n";
    } else if (synth->parsed()) {
      const auto world = MeaningWorld::load(world_path);
      const auto corpus = sample_corpus(world, n_narratives, length, seed_of(g, s));
      write_corpus(out_path(g, "corpus.csv"), corpus.narratives);
      write_file_atomic(out_path(g, "ground_truth.csv"), ground_truth_csv(corpus.truth));
      write_rephrasings(out_path(g, "rephrasings_r1.csv"), corpus.rephrasings);
      std::cout << out_path(g, "corpus.csv").string() << "\n"
                << out_path(g, "ground_truth.csv").string() << "\n"
                << out_path(g, "rephrasings_r1.csv").string() << "\n";
      if (run_pipeline) {
        const WorldBackend backend(world);
        std::vector<ClauseInfoRecord> records;
        for (std::size_t i = 0; i < corpus.narratives.size(); ++i) {
          const auto& n = corpus.narratives[i];
          const auto rs = semantic_info(n.id, total_info(n, backend),
                                        wording_info(n, corpus.rephrasings[i], backend),
                                        Variant::plain, backend.id(), "r1");
          records.insert(records.end(), rs.begin(), rs.end());
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < records.size(); ++i) {
          worst = std::max(worst, std::abs(records[i].IM_bits - corpus.truth[i].IM_bits));
        }
        write_records(out_path(g, "semantic_information.csv"), records);
        std::cout << out_path(g, "semantic_information.csv").string() << "\n"
                  << "max |I_M - ground truth|: " << format_double(worst) << " bits\n";
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_backend_failure(e.kind()) ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
