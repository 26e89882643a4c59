#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "argprobe/aggregate.hpp"
#include "argprobe/annotation_server.hpp"
#include "argprobe/annotation_store.hpp"
#include "argprobe/annotations.hpp"
#include "argprobe/assignment.hpp"
#include "argprobe/error.hpp"
#include "argprobe/evaluate.hpp"
#include "argprobe/genset.hpp"
#include "argprobe/lexicon.hpp"
#include "argprobe/manifest.hpp"
#include "argprobe/metrics.hpp"
#include "argprobe/ngram.hpp"
#include "argprobe/report.hpp"
#include "argprobe/score_table.hpp"

namespace fs = std::filesystem;
using namespace argprobe;
using nlohmann::json;

namespace {

std::string slurp_stream(const std::function<void(std::ostream&)>& write) {
  std::ostringstream out;
  write(out);
  return out.str();
}

Dataset load_dataset(const fs::path& path) {
  if (fs::exists(manifest_path(path))) load_verified_manifest(path);
  return read_dataset_file(path);
}

/// Loads a stage output and checks that it was produced from `dataset_hash`.
Manifest require_same_dataset(const fs::path& path, const std::string& dataset_hash) {
  auto m = load_verified_manifest(path);
  if (m.dataset_hash != dataset_hash) {
    throw Error(path.string() + " was produced from a different dataset (" + m.dataset_hash.substr(0, 12) +
                " vs " + dataset_hash.substr(0, 12) + ")");
  }
  return m;
}

std::string join(const std::vector<std::string>& labels) {
  std::string out;
  for (const auto& l : labels) out += (out.empty() ? "" : ";") + l;
  return out;
}

ConstraintRanking make_ranking(const std::string& name, const std::string& markedness, const std::string& plausibility) {
  if (name != "nad-first" && name != "nda-first") throw Error("unknown ranking '" + name + "' (nda-first | nad-first)");
  auto r = name == "nad-first" ? ConstraintRanking::nad_first() : ConstraintRanking::nda_first();
  if (markedness.empty() && plausibility.empty()) return r;
  return ConstraintRanking::parse(markedness.empty() ? join(r.markedness_order) : markedness,
                                  plausibility.empty() ? join(r.plausibility_order) : plausibility);
}

/// NAME=PATH, or PATH with the file stem as name.
std::pair<std::string, fs::path> named_path(const std::string& arg) {
  auto eq = arg.find('=');
  if (eq == std::string::npos) return {fs::path(arg).stem().string(), arg};
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

std::set<std::string> read_id_list(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::set<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] != '#') ids.insert(line);
  }
  return ids;
}

volatile std::sig_atomic_t g_stop = 0;
AnnotationServer* g_server = nullptr;

void on_signal(int) {
  g_stop = 1;
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"argprobe: German verb argument structure probe"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Realize acceptable and violating sentences from templates");
  fs::path gen_lexicon, gen_templates, gen_out, gen_sets;
  gen->add_option("--lexicon", gen_lexicon, "Lexicon JSONL")->required()->envname("ARGPROBE_LEXICON");
  gen->add_option("--templates", gen_templates, "Template JSONL")->required()->envname("ARGPROBE_TEMPLATES");
  gen->add_option("-o,--out", gen_out, "Dataset JSONL")->required()->envname("ARGPROBE_DATASET");
  gen->add_option("--sets", gen_sets, "Set index JSONL (default: <out>.sets.jsonl)");

  // train
  auto* train = app.add_subcommand("train", "Train a unigram or bigram model on a corpus (one sentence per line)");
  fs::path train_corpus, train_out;
  TrainOptions train_opts;
  bool train_serial = false;
  train->add_option("--corpus", train_corpus, "Corpus text")->required()->envname("ARGPROBE_CORPUS");
  train->add_option("--order", train_opts.order, "1 or 2")->check(CLI::IsMember({1, 2}));
  train->add_option("--vocab-size", train_opts.vocab_size, "Most frequent tokens kept")->check(CLI::PositiveNumber);
  train->add_flag("--serial", train_serial, "Single-threaded counting");
  train->add_option("-o,--out", train_out, "Model file")->required();

  // score
  auto* score = app.add_subcommand("score", "Score every dataset sentence with an n-gram model");
  fs::path score_dataset_path, score_model, score_out;
  std::string score_name;
  bool score_no_punct = false;
  score->add_option("--dataset", score_dataset_path)->required()->envname("ARGPROBE_DATASET");
  score->add_option("--model", score_model)->required();
  score->add_option("--name", score_name, "Scorer name (default: model file stem)");
  score->add_flag("--exclude-punctuation", score_no_punct, "Leave punctuation tokens out of the sum");
  score->add_option("-o,--out", score_out)->required();

  // export-requests
  auto* exp = app.add_subcommand("export-requests", "Write id<TAB>text requests for an external scorer");
  fs::path exp_dataset, exp_out;
  exp->add_option("--dataset", exp_dataset)->required()->envname("ARGPROBE_DATASET");
  exp->add_option("-o,--out", exp_out)->required();

  // import-scores
  auto* imp = app.add_subcommand("import-scores", "Validate an external id<TAB>score file against the dataset");
  fs::path imp_dataset, imp_in, imp_out;
  std::string imp_name;
  imp->add_option("--dataset", imp_dataset)->required()->envname("ARGPROBE_DATASET");
  imp->add_option("--in", imp_in, "External score file")->required();
  imp->add_option("--name", imp_name, "Scorer name")->required();
  imp->add_option("-o,--out", imp_out)->required();

  // import-annotations
  auto* ann = app.add_subcommand("import-annotations", "QC-filter and normalize human ratings into a score file");
  fs::path ann_dataset, ann_in, ann_out;
  std::string ann_name = "human";
  bool ann_no_qc = false;
  ann->add_option("--dataset", ann_dataset)->required()->envname("ARGPROBE_DATASET");
  ann->add_option("--in", ann_in, "Annotation TSV")->required()->envname("ARGPROBE_ANNOTATIONS");
  ann->add_option("--name", ann_name);
  ann->add_flag("--no-qc", ann_no_qc, "Keep every annotator");
  ann->add_option("-o,--out", ann_out)->required();

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Per-set AUC over minimal variation sets");
  fs::path ev_dataset, ev_scores, ev_out, ev_roc;
  std::string ev_restriction = "every";
  bool ev_serial = false;
  ev->add_option("--dataset", ev_dataset)->required()->envname("ARGPROBE_DATASET");
  ev->add_option("--scores", ev_scores)->required();
  ev->add_option("--restriction", ev_restriction, "all | nom | acc | dat | every");
  ev->add_option("--roc", ev_roc, "Also write ROC points (CSV) for the first restriction");
  ev->add_flag("--serial", ev_serial);
  ev->add_option("-o,--out", ev_out)->required();

  // report
  auto* rep = app.add_subcommand("report", "Render AUC tables from per-set AUC files");
  std::vector<std::string> rep_inputs;
  std::string rep_ranking = "nda-first", rep_markedness, rep_plausibility, rep_format = "markdown";
  fs::path rep_out, rep_dataset;
  rep->add_option("inputs", rep_inputs, "NAME=PATH per scorer")->required();
  rep->add_option("--dataset", rep_dataset, "Check inputs against this dataset")->envname("ARGPROBE_DATASET");
  rep->add_option("--ranking", rep_ranking, "nda-first | nad-first");
  rep->add_option("--markedness", rep_markedness, "Case orders, ';'-separated");
  rep->add_option("--plausibility", rep_plausibility, "Role labels, ';'-separated");
  rep->add_option("--format", rep_format)->check(CLI::IsMember({"markdown", "csv"}));
  rep->add_option("-o,--out", rep_out);

  // correlate
  auto* cor = app.add_subcommand("correlate", "Pearson correlation between human and model results");
  std::string cor_human, cor_mode = "sets", cor_format = "markdown";
  std::vector<std::string> cor_models;
  fs::path cor_out;
  cor->add_option("--human", cor_human, "NAME=PATH or PATH")->required();
  cor->add_option("models", cor_models, "NAME=PATH per model")->required();
  cor->add_option("--mode", cor_mode, "sets (per-set AUC files) | sentences (score files)")
      ->check(CLI::IsMember({"sets", "sentences"}));
  cor->add_option("--format", cor_format)->check(CLI::IsMember({"markdown", "csv"}));
  cor->add_option("-o,--out", cor_out);

  // serve
  auto* srv = app.add_subcommand("serve", "Run the annotation service");
  fs::path srv_dataset, srv_fillers, srv_log, srv_eligible;
  std::string srv_host = "127.0.0.1";
  int srv_port = 8080;
  AssignmentConfig srv_cfg;
  srv->add_option("--dataset", srv_dataset)->required()->envname("ARGPROBE_DATASET");
  srv->add_option("--fillers", srv_fillers)->required()->envname("ARGPROBE_FILLERS");
  srv->add_option("--log", srv_log, "Append-only rating log")->required()->envname("ARGPROBE_LOG");
  srv->add_option("--eligible", srv_eligible, "File listing eligible annotator ids");
  srv->add_option("--host", srv_host);
  srv->add_option("--port", srv_port);
  srv->add_option("--test-items", srv_cfg.test_items);
  srv->add_option("--max-per-template", srv_cfg.max_per_template);
  srv->add_option("--acceptable-items", srv_cfg.acceptable_items);
  srv->add_option("--filler-every", srv_cfg.filler_every);
  srv->add_option("--warmup-items", srv_cfg.warmup_items);
  srv->add_option("--target", srv_cfg.target_annotations, "Annotations per sentence");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      auto lexicon = load_lexicon_file(gen_lexicon);
      auto templates = load_templates_file(gen_templates);
      for (const auto& t : templates)
        for (const auto& w : validate_template(t, lexicon)) std::cerr << "warning: " << w << '\n';
      auto dataset = build_dataset(templates, lexicon);
      auto content = slurp_stream([&](std::ostream& o) { write_dataset(o, dataset); });
      auto hash = sha256_hex(content);

      Manifest m;
      m.stage = "generate";
      m.dataset_hash = hash;
      m.inputs = {{"lexicon", sha256_file(gen_lexicon)}, {"templates", sha256_file(gen_templates)}};
      m.summary = {{"templates", dataset.template_count()},
                   {"total", dataset.size()},
                   {"acceptable", dataset.acceptable_count()},
                   {"unacceptable", dataset.size() - dataset.acceptable_count()}};
      write_with_manifest(gen_out, content, m);

      if (gen_sets.empty()) gen_sets = fs::path(gen_out.string() + ".sets.jsonl");
      Manifest ms = m;
      ms.stage = "generate-sets";
      ms.inputs = {{"dataset", hash}};
      write_with_manifest(gen_sets, slurp_stream([&](std::ostream& o) { write_set_index(o, dataset); }), ms);

      std::cout << dataset.size() << " total / " << dataset.acceptable_count() << " acceptable / "
                << dataset.size() - dataset.acceptable_count() << " unacceptable (" << dataset.template_count()
                << (dataset.template_count() == 1 ? " template)\n" : " templates)\n");
    } else if (*train) {
      train_opts.parallel = !train_serial;
      auto model = train_ngram_file(train_corpus, train_opts);
      auto content = slurp_stream([&](std::ostream& o) { save_model(o, model); });
      Manifest m;
      m.stage = "train";
      m.inputs = {{"corpus", sha256_file(train_corpus)}};
      m.config = {{"order", train_opts.order}, {"vocab_size", train_opts.vocab_size}};
      m.summary = {{"total_tokens", model.total_tokens()}, {"vocabulary", model.vocab().size()}};
      write_with_manifest(train_out, content, m);
      std::cout << "trained order-" << train_opts.order << " model: " << model.total_tokens() << " tokens, "
                << model.vocab().size() << " vocabulary entries\n";
    } else if (*score) {
      auto dataset = load_dataset(score_dataset_path);
      auto model = load_model_file(score_model);
      if (score_name.empty()) score_name = score_model.stem().string();
      ScoreOptions so;
      so.include_punctuation = !score_no_punct;
      auto table = score_dataset(model, dataset, score_name, so);
      Manifest m;
      m.stage = "score";
      m.dataset_hash = sha256_file(score_dataset_path);
      m.inputs = {{"model", sha256_file(score_model)}};
      m.config = {{"scorer", score_name}, {"include_punctuation", so.include_punctuation}};
      m.summary = {{"scores", table.size()}};
      write_with_manifest(score_out, slurp_stream([&](std::ostream& o) { write_scores(o, table, dataset); }), m);
      std::cout << "scored " << table.size() << " sentences with " << score_name << '\n';
    } else if (*exp) {
      auto dataset = load_dataset(exp_dataset);
      Manifest m;
      m.stage = "export-requests";
      m.dataset_hash = sha256_file(exp_dataset);
      m.summary = {{"requests", dataset.size()}};
      write_with_manifest(exp_out, slurp_stream([&](std::ostream& o) { export_requests(o, dataset); }), m);
      std::cout << "wrote " << dataset.size() << " requests\n";
    } else if (*imp) {
      auto dataset = load_dataset(imp_dataset);
      auto table = import_scores_file(imp_in, imp_name, &dataset);
      auto missing = missing_ids(table, dataset);
      if (!missing.empty()) {
        std::ostringstream msg;
        msg << missing.size() << " dataset sentences have no score:";
        for (std::size_t i = 0; i < missing.size() && i < 20; ++i) msg << ' ' << missing[i];
        if (missing.size() > 20) msg << " ...";
        throw LookupError(msg.str());
      }
      Manifest m;
      m.stage = "import-scores";
      m.dataset_hash = sha256_file(imp_dataset);
      m.inputs = {{"scores", sha256_file(imp_in)}};
      m.config = {{"scorer", imp_name}};
      m.summary = {{"scores", table.size()}};
      write_with_manifest(imp_out, slurp_stream([&](std::ostream& o) { write_scores(o, table, dataset); }), m);
      std::cout << "imported " << table.size() << " scores for " << imp_name << '\n';
    } else if (*ann) {
      auto dataset = load_dataset(ann_dataset);
      auto records = read_annotations_file(ann_in);
      QcResult qc;
      std::set<std::string>* retained = nullptr;
      if (!ann_no_qc) {
        qc = qc_filter(records);
        retained = &qc.retained;
        for (const auto& w : qc.warnings) std::cerr << "warning: " << w << '\n';
      }
      auto norm = normalize_annotations(records, retained);
      for (const auto& w : norm.warnings) std::cerr << "warning: " << w << '\n';
      ScoreTable table(ann_name);
      for (const auto& [id, z] : norm.sentence_scores) {
        if (!dataset.find(id)) throw LookupError("annotated sentence '" + id + "' is not in the dataset");
        table.insert(id, z);
      }
      Manifest m;
      m.stage = "import-annotations";
      m.dataset_hash = sha256_file(ann_dataset);
      m.inputs = {{"annotations", sha256_file(ann_in)}};
      m.config = {{"scorer", ann_name}, {"qc", !ann_no_qc}};
      m.summary = {{"ratings", records.size()},
                   {"annotators_retained", ann_no_qc ? norm.per_annotator.size() : qc.retained.size()},
                   {"annotators_removed", qc.removed.size()},
                   {"sentences", table.size()}};
      write_with_manifest(ann_out, slurp_stream([&](std::ostream& o) { write_scores(o, table, dataset); }), m);
      std::cout << "normalized " << table.size() << " sentences from " << norm.per_annotator.size()
                << " annotators";
      if (!ann_no_qc) std::cout << " (" << qc.removed.size() << " removed by filler QC)";
      std::cout << '\n';
      auto missing = missing_ids(table, dataset);
      if (!missing.empty()) std::cerr << "note: " << missing.size() << " dataset sentences have no rating\n";
    } else if (*ev) {
      auto dataset = load_dataset(ev_dataset);
      const auto dataset_hash = sha256_file(ev_dataset);
      auto sm = require_same_dataset(ev_scores, dataset_hash);
      auto table = import_scores_file(ev_scores, sm.config.value("scorer", ev_scores.stem().string()), &dataset);
      std::vector<Restriction> restrictions;
      if (ev_restriction == "every") {
        restrictions.assign(kAllRestrictions.begin(), kAllRestrictions.end());
      } else {
        restrictions.push_back(restriction_from_string(ev_restriction));
      }
      std::vector<SetAuc> all;
      for (auto r : restrictions) {
        auto aucs = ev_serial ? evaluate_sets_serial(dataset, table, r) : evaluate_sets(dataset, table, r);
        all.insert(all.end(), aucs.begin(), aucs.end());
      }
      Manifest m;
      m.stage = "evaluate";
      m.dataset_hash = dataset_hash;
      m.inputs = {{"scores", sha256_file(ev_scores)}};
      m.config = {{"scorer", table.scorer_name()}, {"restriction", ev_restriction}};
      m.summary = {{"sets", all.size()}};
      write_with_manifest(ev_out, slurp_stream([&](std::ostream& o) { write_set_aucs(o, all); }), m);
      if (!ev_roc.empty()) {
        write_file_atomic(ev_roc, slurp_stream([&](std::ostream& o) {
                            write_roc_points(o, dataset, table, restrictions.front());
                          }));
      }
      std::cout << "evaluated " << all.size() << " sets for " << table.scorer_name() << '\n';
    } else if (*rep) {
      auto ranking = make_ranking(rep_ranking, rep_markedness, rep_plausibility);
      ranking.validate();
      std::optional<std::string> dataset_hash;
      if (!rep_dataset.empty()) dataset_hash = sha256_file(rep_dataset);
      std::vector<std::pair<std::string, std::vector<SetAuc>>> inputs;
      for (const auto& arg : rep_inputs) {
        auto [name, path] = named_path(arg);
        auto m = load_verified_manifest(path);
        if (!dataset_hash) dataset_hash = m.dataset_hash;
        if (m.dataset_hash != *dataset_hash) {
          throw Error(path.string() + " was produced from a different dataset than the other inputs");
        }
        inputs.emplace_back(name, read_set_aucs_file(path));
      }
      const bool md = rep_format == "markdown";
      std::ostringstream out;
      std::vector<std::pair<std::string, AggregateTable>> by_restriction, by_order;
      for (const auto& [name, aucs] : inputs) {
        std::vector<SetAuc> full;
        for (const auto& a : aucs)
          if (a.restriction == Restriction::All) full.push_back(a);
        if (!full.empty()) {
          auto table = aggregate(full, ranking, GroupBy::CaseOrderByRole);
          if (md) {
            out << "## " << name << " (1-6)\n\n" << render_markdown(table) << '\n';
            if (table.row_labels.size() == 6 && table.col_labels.size() == 6) {
              out << render_constraint_report(constraint_check(table)) << '\n';
            }
          } else {
            out << "# " << name << '\n' << render_csv(table);
          }
          by_order.emplace_back(name, aggregate(full, ranking, GroupBy::CaseOrder));
        }
        by_restriction.emplace_back(name, aggregate(aucs, ranking, GroupBy::Restriction));
      }
      auto summary = side_by_side("Minimal variation set", by_restriction, "");
      auto orders = side_by_side("Case order", by_order, "Average");
      if (md) {
        out << "## AUC by minimal variation set\n\n" << render_markdown(summary) << '\n';
        if (!by_order.empty()) out << "## AUC by case order\n\n" << render_markdown(orders);
      } else {
        out << "# restriction\n" << render_csv(summary);
        if (!by_order.empty()) out << "# case_order\n" << render_csv(orders);
      }
      if (rep_out.empty()) {
        std::cout << out.str();
      } else {
        Manifest m;
        m.stage = "report";
        m.dataset_hash = *dataset_hash;
        for (const auto& arg : rep_inputs) {
          auto [name, path] = named_path(arg);
          m.inputs[name] = sha256_file(path);
        }
        m.config = {{"ranking", ranking.markedness_order}, {"plausibility", ranking.plausibility_order},
                    {"format", rep_format}};
        write_with_manifest(rep_out, out.str(), m);
      }
    } else if (*cor) {
      auto [human_name, human_path] = named_path(cor_human);
      auto hm = load_verified_manifest(human_path);
      std::vector<std::pair<std::string, double>> rows;
      if (cor_mode == "sets") {
        std::map<std::string, double> human;
        for (const auto& a : read_set_aucs_file(human_path))
          if (a.restriction == Restriction::All) human[a.acceptable_id] = a.auc;
        for (const auto& arg : cor_models) {
          auto [name, path] = named_path(arg);
          require_same_dataset(path, hm.dataset_hash);
          std::vector<double> x, y;
          for (const auto& a : read_set_aucs_file(path)) {
            if (a.restriction != Restriction::All) continue;
            auto it = human.find(a.acceptable_id);
            if (it == human.end()) continue;
            x.push_back(it->second);
            y.push_back(a.auc);
          }
          rows.emplace_back(name, pearson(x, y));
        }
      } else {
        auto human = import_scores_file(human_path, human_name);
        for (const auto& arg : cor_models) {
          auto [name, path] = named_path(arg);
          require_same_dataset(path, hm.dataset_hash);
          auto model = import_scores_file(path, name);
          std::vector<std::pair<std::string, double>> ordered(human.entries().begin(), human.entries().end());
          std::sort(ordered.begin(), ordered.end());
          std::vector<double> x, y;
          for (const auto& [id, h] : ordered) {
            if (auto s = model.find(id)) {
              x.push_back(h);
              y.push_back(*s);
            }
          }
          rows.emplace_back(name, pearson(x, y));
        }
      }
      SummaryTable t;
      t.row_header = "Pearson correlation";
      t.cols = {cor_mode == "sets" ? "(1-6) minimal variation sets" : "sentence scores"};
      for (const auto& [name, r] : rows) {
        t.rows.push_back(human_name + " - " + name);
        t.values.push_back({r});
      }
      auto text = cor_format == "markdown" ? render_markdown(t) : render_csv(t);
      if (cor_out.empty()) {
        std::cout << text;
      } else {
        Manifest m;
        m.stage = "correlate";
        m.dataset_hash = hm.dataset_hash;
        m.config = {{"mode", cor_mode}};
        write_with_manifest(cor_out, text, m);
      }
    } else if (*srv) {
      auto dataset = load_dataset(srv_dataset);
      StoreConfig cfg;
      cfg.assignment = srv_cfg;
      cfg.log_path = srv_log;
      if (!srv_eligible.empty()) cfg.eligible = read_id_list(srv_eligible);
      AnnotationStore store(dataset, load_fillers_file(srv_fillers), cfg);
      AnnotationServer server(store);
      if (!server.bind(srv_host, srv_port)) throw Error("cannot bind " + srv_host + ":" + std::to_string(srv_port));
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "serving " << dataset.size() << " sentences on http://" << srv_host << ':' << srv_port
                << " (" << store.session_count() << " sessions restored)" << std::endl;
      server.run();
      g_server = nullptr;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
