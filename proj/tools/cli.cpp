#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fvqa/fvqa.hpp"

namespace fvqa::cli {
namespace {

using OrderedJson = nlohmann::ordered_json;

// A titled grid of cells. Every summary is built as a list of these so the
// JSON, table and CSV forms always carry the same numbers.
struct Table {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<OrderedJson>> rows;
  int precision = 2;  // decimals for floating-point cells in text forms
};

std::string cell_text(const OrderedJson& v, int precision) {
  if (v.is_null()) return "-";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(precision) << v.get<double>();
    return os.str();
  }
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  return v.dump();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

void render(const std::vector<Table>& tables, const std::string& format, std::ostream& os) {
  if (format == "json") {
    OrderedJson doc = OrderedJson::object();
    for (const auto& t : tables) {
      OrderedJson rows = OrderedJson::array();
      for (const auto& r : t.rows) {
        OrderedJson obj = OrderedJson::object();
        for (std::size_t i = 0; i < t.columns.size(); ++i) obj[t.columns[i]] = r[i];
        rows.push_back(std::move(obj));
      }
      doc[t.title] = std::move(rows);
    }
    os << doc.dump(2) << '\n';
    return;
  }
  if (format == "csv") {
    for (std::size_t k = 0; k < tables.size(); ++k) {
      const auto& t = tables[k];
      if (k) os << '\n';
      os << "table";
      for (const auto& c : t.columns) os << ',' << csv_field(c);
      os << '\n';
      for (const auto& r : t.rows) {
        os << csv_field(t.title);
        for (const auto& v : r) {
          os << ',' << csv_field(v.is_number_float() ? v.dump() : cell_text(v, t.precision));
        }
        os << '\n';
      }
    }
    return;
  }
  for (std::size_t k = 0; k < tables.size(); ++k) {
    const auto& t = tables[k];
    if (k) os << '\n';
    std::vector<std::size_t> width(t.columns.size());
    std::vector<std::vector<std::string>> text(t.rows.size());
    for (std::size_t i = 0; i < t.columns.size(); ++i) width[i] = t.columns[i].size();
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      for (std::size_t i = 0; i < t.columns.size(); ++i) {
        text[r].push_back(cell_text(t.rows[r][i], t.precision));
        width[i] = std::max(width[i], text[r][i].size());
      }
    }
    os << t.title << '\n';
    auto line = [&](const std::vector<std::string>& cells) {
      std::string s;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        std::string c = cells[i];
        if (i + 1 < cells.size()) c.resize(width[i] + 2, ' ');
        s += c;
      }
      os << s << '\n';
    };
    line(t.columns);
    for (const auto& row : text) line(row);
  }
}


// Writes to the named file, or to the fallback stream when path is empty or
// "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (!path.empty() && path != "-") file_ = open_output(path);
    stream_ = file_ ? &*file_ : &fallback;
  }
  std::ostream& get() { return *stream_; }

 private:
  std::optional<std::ofstream> file_;
  std::ostream* stream_;
};

// --- option groups ------------------------------------------------------------

struct SchemaOptions {
  std::string schema;
  std::string lexicon;
  std::optional<std::size_t> max_context;
};

void add_schema_options(CLI::App* sub, SchemaOptions& o) {
  sub->add_option("--schema", o.schema, "Verb-frame schema (JSON array)")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--lexicon", o.lexicon, "Element to wh-word lexicon (JSON); built-in default")
      ->check(CLI::ExistingFile);
  sub->add_option("--max-context", o.max_context,
                  "Largest context subset per template (default: unlimited)");
}

struct Schema {
  FrameSet frames;
  TemplateMap templates;
};

Schema load_schema(const SchemaOptions& o) {
  Schema s;
  s.frames = load_frameset(o.schema);
  const WhLexicon lexicon = o.lexicon.empty() ? WhLexicon::defaults() : WhLexicon::load(o.lexicon);
  s.templates = generate_all(s.frames, lexicon, o.max_context);
  return s;
}

struct ModelOptions {
  std::string features;
  std::size_t synthetic_dim = 64;
  std::uint64_t seed = 0;
  std::size_t epochs = 50;
  std::size_t batch = 500;
  std::string mode = "sum";
  bool single_task = false;
  double lr = 1e-3;
  std::size_t word_dim = 32;
  std::size_t hidden_dim = 64;
};

void add_feature_options(CLI::App* sub, ModelOptions& o) {
  auto* f = sub->add_option("--features", o.features,
                            "Image features (JSON-lines, {\"dim\": N} header)")
                ->check(CLI::ExistingFile);
  auto* s = sub->add_option("--synthetic-features", o.synthetic_dim,
                            "Use seeded pseudo-random features of this dimension")
                ->capture_default_str()
                ->check(CLI::PositiveNumber);
  f->excludes(s);
  sub->add_option("--seed", o.seed, "Seed for initialization, shuffling and synthetic features")
      ->capture_default_str();
}

void add_train_options(CLI::App* sub, ModelOptions& o, bool single_task_flag) {
  add_feature_options(sub, o);
  sub->add_option("--epochs", o.epochs)->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--batch", o.batch)->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--mode", o.mode, "Loss: sum or average of the two cross-entropies")
      ->capture_default_str()
      ->check(CLI::IsMember({"sum", "average"}));
  sub->add_option("--lr", o.lr, "rmsprop learning rate")->capture_default_str();
  sub->add_option("--word-dim", o.word_dim)->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--hidden-dim", o.hidden_dim)->capture_default_str()->check(CLI::PositiveNumber);
  if (single_task_flag) {
    sub->add_flag("--single-task", o.single_task, "Drop the frame-element head");
  }
}

mtl::TrainConfig train_config(const ModelOptions& o, bool single_task) {
  mtl::TrainConfig c;
  c.batch_size = o.batch;
  c.epochs = o.epochs;
  c.seed = o.seed;
  c.word_dim = o.word_dim;
  c.hidden_dim = o.hidden_dim;
  c.loss_mode = o.mode == "average" ? mtl::LossMode::kAverage : mtl::LossMode::kSum;
  c.single_task = single_task;
  c.optimizer.learning_rate = o.lr;
  return c;
}

mtl::ImageFeatures image_features(const ModelOptions& o) {
  if (!o.features.empty()) return mtl::ImageFeatures::load(o.features);
  return mtl::ImageFeatures::synthetic(o.synthetic_dim, o.seed);
}

struct WupsCliOptions {
  std::string taxonomy;
  std::string synonyms;
  std::vector<double> thresholds = {0.9};
  std::string mode = "binary";
};

void add_wups_options(CLI::App* sub, WupsCliOptions& o) {
  sub->add_option("--taxonomy", o.taxonomy, "Is-a edge list (TSV child, parent)")
      ->check(CLI::ExistingFile);
  sub->add_option("--synonyms", o.synonyms, "Surface to node map (TSV)")
      ->check(CLI::ExistingFile);
  sub->add_option("--wups-threshold", o.thresholds, "WUPS thresholds (repeatable)")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  sub->add_option("--wups-mode", o.mode, "binary: score >= t counts 1; downweight: WUP < t x0.1")
      ->capture_default_str()
      ->check(CLI::IsMember({"binary", "downweight"}));
}

std::optional<Taxonomy> load_taxonomy(const WupsCliOptions& o) {
  if (o.taxonomy.empty()) return std::nullopt;
  return Taxonomy::load(o.taxonomy, o.synonyms);
}

WupsOptions wups_options(const WupsCliOptions& o, double threshold) {
  return {threshold, o.mode == "downweight" ? WupsMode::kDownweight : WupsMode::kBinary};
}

std::string wups_column(double t) {
  std::ostringstream os;
  os << "wups@" << t;
  return os.str();
}

// Accuracy and WUPS columns for one system. WUPS cells stay null when no
// taxonomy was given.
std::vector<std::string> score_columns(const WupsCliOptions& o) {
  std::vector<std::string> cols = {"system", "samples", "accuracy"};
  for (double t : o.thresholds) cols.push_back(wups_column(t));
  return cols;
}

std::vector<OrderedJson> score_row(const std::string& name, std::span<const Prediction> preds,
                                   std::span<const QASample> gold, const WupsCliOptions& o,
                                   const std::optional<Taxonomy>& taxonomy) {
  std::vector<OrderedJson> row = {name, gold.size(), accuracy(preds, gold)};
  for (double t : o.thresholds) {
    row.push_back(taxonomy ? OrderedJson(wups(preds, gold, *taxonomy, wups_options(o, t)))
                           : OrderedJson(nullptr));
  }
  return row;
}

Table significance_table(const std::string& a_name, std::span<const Prediction> a,
                         const std::string& b_name, std::span<const Prediction> b,
                         std::span<const QASample> gold) {
  const auto table = contingency(a, b, gold);
  Table t{"significance",
          {"comparison", "a_correct", "a_wrong", "b_correct", "b_wrong", "chi_square",
           "critical_0.01", "significant"},
          {},
          4};
  std::optional<double> stat;
  try {
    stat = chi_square_2x2(table);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateTable) throw;
  }
  t.rows.push_back({a_name + " vs " + b_name, table.counts[0][0], table.counts[0][1],
                    table.counts[1][0], table.counts[1][1],
                    stat ? OrderedJson(*stat) : OrderedJson(nullptr), kChiSquareCritical1Dof01,
                    stat ? OrderedJson(*stat > kChiSquareCritical1Dof01) : OrderedJson(nullptr)});
  return t;
}

Table breakdown_table(BreakdownKey key, const std::string& key_name,
                      const std::vector<std::pair<std::string, GroupAccuracy>>& systems,
                      std::span<const QASample> gold) {
  std::map<std::string, std::size_t> sizes;
  for (const auto& s : gold) ++sizes[group_of(s, key)];
  Table t{"by_" + key_name, {key_name, "samples"}, {}};
  for (const auto& [name, acc] : systems) t.columns.push_back(name);
  if (systems.size() == 2) t.columns.push_back("delta");
  for (const auto& [group, n] : sizes) {
    std::vector<OrderedJson> row = {group, n};
    for (const auto& [name, acc] : systems) row.push_back(acc.at(group));
    if (systems.size() == 2) {
      row.push_back(systems[1].second.at(group) - systems[0].second.at(group));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table histogram_table(const std::string& key_name, const GroupAccuracy& a,
                      const GroupAccuracy& b) {
  Table t{"delta_histogram_" + key_name, {"interval", "groups"}, {}};
  for (const auto& bin : difference_histogram(a, b, default_histogram_edges())) {
    t.rows.push_back({bin.label, bin.count});
  }
  return t;
}

std::vector<QASample> eval_split(const Dataset& d, const std::string& split) {
  auto part = d.split(parse_split(split));
  if (part.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "split '" + split + "' has no samples");
  }
  return part;
}

// Consistency of predictions against the train index; predictions without
// an element are paired with their question's template target.
std::pair<double, std::string> consistency_of(std::span<const Prediction> preds,
                                              std::span<const QASample> gold,
                                              const ConsistencyIndex& idx) {
  const bool has_elements =
      std::all_of(preds.begin(), preds.end(), [](const Prediction& p) { return p.element; });
  if (has_elements) return {consistency_rate(preds, idx), "model"};
  return {consistency_rate(with_template_elements(preds, gold), idx), "template"};
}

// --- subcommands -------------------------------------------------------------

int cmd_templates(const SchemaOptions& so, const std::string& out_path, const std::string& format,
                  std::ostream& out, std::ostream& err) {
  const auto schema = load_schema(so);
  Sink sink(out_path, out);
  write_templates_jsonl(sink.get(), schema.templates);
  Table t{"templates", {"verb", "slots", "templates"}, {}};
  for (const auto& [verb, list] : schema.templates) {
    t.rows.push_back({verb, schema.frames.at(verb).slots.size(), list.size()});
  }
  t.rows.push_back({"total", nullptr, total_templates(schema.templates)});
  render({t}, format, err);
  return kExitOk;
}

struct RealizeOptions {
  std::string annotations;
  std::string splits;
  std::string out;
  bool no_dedup = false;
};

int cmd_realize(const SchemaOptions& so, const RealizeOptions& ro, const std::string& format,
                std::ostream& out, std::ostream& err) {
  const auto schema = load_schema(so);
  const auto splits = load_splits(ro.splits);
  Sink sink(ro.out, out);
  RealizeCounts counts;
  std::size_t images = 0;
  std::map<Split, std::size_t> per_split;
  std::set<std::string> seen;
  // One record per image, realized and written as it is read.
  for_each_jsonl(ro.annotations, [&](const Json& j, std::size_t) {
    const auto anns = annotations_from_json(j);
    if (anns.empty()) return;
    const auto& image = anns.front().image_id;
    if (!seen.insert(image).second) {
      throw Error(ErrorCode::kParse, "image '" + image + "' appears in more than one record");
    }
    auto it = splits.find(image);
    if (it == splits.end()) {
      throw Error(ErrorCode::kUnknownImage, "image '" + image + "' has no split");
    }
    const auto samples =
        realize_image(anns, schema.templates, schema.frames, it->second, !ro.no_dedup, &counts);
    write_samples_jsonl(sink.get(), samples);
    per_split[it->second] += samples.size();
    ++images;
  });
  Table t{"realize", {"images", "templates", "realized", "written", "train", "dev", "test"}, {}};
  t.rows.push_back({images, total_templates(schema.templates), counts.raw, counts.kept,
                    per_split[Split::kTrain], per_split[Split::kDev], per_split[Split::kTest]});
  render({t}, format, err);
  return kExitOk;
}

int cmd_stats(const std::string& dataset, const std::string& split, std::size_t top,
              const std::string& format, std::ostream& out) {
  const auto d = load_dataset(dataset);
  const auto r = compute_stats(d.samples, parse_split(split));
  if (format == "json") {
    out << to_json(r, top).dump(2) << '\n';
  } else if (format == "csv") {
    out << to_csv(r);
  } else {
    out << to_table(r, top);
  }
  return kExitOk;
}

Table history_table(const std::vector<mtl::EpochStats>& history) {
  Table t{"history", {"epoch", "loss", "answer_accuracy", "element_accuracy"}, {}, 4};
  for (std::size_t i = 0; i < history.size(); ++i) {
    t.rows.push_back({i + 1, history[i].loss, history[i].answer_accuracy,
                      history[i].element_accuracy});
  }
  return t;
}

int cmd_train(const std::string& dataset, const ModelOptions& mo, const std::string& model_path,
              const std::string& format, std::ostream& out) {
  const auto d = load_dataset(dataset);
  const auto features = image_features(mo);
  std::vector<mtl::EpochStats> history;
  const auto model = mtl::train_model(d, features, train_config(mo, mo.single_task), &history);
  mtl::save_checkpoint(model_path, model);
  const auto dims = model.params.dims();
  Table summary{"model",
                {"single_task", "vocab", "word_dim", "hidden_dim", "image_dim", "answers",
                 "elements", "parameters"},
                {}};
  summary.rows.push_back({model.single_task, dims.vocab, dims.word_dim, dims.hidden_dim,
                          dims.image_dim, dims.answers, dims.elements,
                          model.params.parameter_count()});
  render({summary, history_table(history)}, format, out);
  return kExitOk;
}

int cmd_predict(const std::string& dataset, const std::string& model_path,
                const ModelOptions& mo, const std::string& split, const std::string& out_path,
                std::ostream& out) {
  const auto d = load_dataset(dataset);
  const auto model = mtl::load_checkpoint(model_path, d);
  auto fo = mo;
  fo.synthetic_dim = model.params.dims().image_dim;
  const auto features = image_features(fo);
  const auto preds = mtl::predict(model, eval_split(d, split), features);
  Sink sink(out_path, out);
  write_predictions_jsonl(sink.get(), preds);
  return kExitOk;
}

struct EvaluateOptions {
  std::string dataset;
  std::string predictions;
  std::string against;
  std::string split = "test";
  std::vector<std::string> breakdowns;
};

int cmd_evaluate(const EvaluateOptions& eo, const WupsCliOptions& wo, const std::string& format,
                 std::ostream& out, std::ostream& err) {
  const auto d = load_dataset(eo.dataset);
  const auto gold = eval_split(d, eo.split);
  const auto taxonomy = load_taxonomy(wo);
  if (!taxonomy) err << "fvqa: no --taxonomy given, WUPS left empty\n";
  const auto preds = load_predictions(eo.predictions);
  std::vector<std::pair<std::string, std::vector<Prediction>>> systems = {
      {std::filesystem::path(eo.predictions).stem().string(), preds}};
  if (!eo.against.empty()) {
    systems.insert(systems.begin(), {std::filesystem::path(eo.against).stem().string(),
                                     load_predictions(eo.against)});
  }

  std::vector<Table> tables;
  Table results{"results", score_columns(wo), {}};
  for (const auto& [name, p] : systems) {
    results.rows.push_back(score_row(name, p, gold, wo, taxonomy));
  }
  tables.push_back(std::move(results));
  if (systems.size() == 2) {
    tables.push_back(
        significance_table(systems[0].first, systems[0].second, systems[1].first,
                           systems[1].second, gold));
  }
  for (const auto& key_name : eo.breakdowns) {
    const auto key = parse_breakdown_key(key_name);
    std::vector<std::pair<std::string, GroupAccuracy>> accs;
    for (const auto& [name, p] : systems) accs.emplace_back(name, breakdown(p, gold, key));
    tables.push_back(breakdown_table(key, key_name, accs, gold));
    if (accs.size() == 2) {
      tables.push_back(histogram_table(key_name, accs[0].second, accs[1].second));
    }
  }
  render(tables, format, out);
  return kExitOk;
}

int cmd_consistency(const std::string& dataset, const std::string& predictions,
                    const std::string& split, const std::string& export_path, std::size_t top,
                    const std::string& format, std::ostream& out) {
  const auto d = load_dataset(dataset);
  const auto train = d.split(Split::kTrain);
  const auto idx = build_index(train);
  if (!export_path.empty()) {
    auto os = open_output(export_path);
    os << to_json(idx).dump(2) << '\n';
  }
  const auto gold = eval_split(d, split);
  const auto preds = load_predictions(predictions);
  const auto [rate, source] = consistency_of(preds, gold, idx);

  Table t{"consistency", {"predictions", "element_source", "index_pairs", "rate"}, {}};
  t.rows.push_back({preds.size(), source, idx.pairs().size(), rate});

  std::vector<std::pair<std::string, std::size_t>> spread;
  for (const auto& [answer, elements] : idx.per_answer()) {
    spread.emplace_back(answer, elements.size());
  }
  std::stable_sort(spread.begin(), spread.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (spread.size() > top) spread.resize(top);
  Table s{"distinct_elements", {"answer", "elements"}, {}};
  for (const auto& [answer, n] : spread) s.rows.push_back({answer, n});
  render({t, s}, format, out);
  return kExitOk;
}

struct ReportOptions {
  RealizeOptions realize;
  std::string split = "test";
  std::string out_dir;
};

int cmd_report(const SchemaOptions& so, const ReportOptions& ro, const ModelOptions& mo,
               const WupsCliOptions& wo, const std::string& format, std::ostream& out,
               std::ostream& err) {
  const auto schema = load_schema(so);
  const auto annotations = load_annotations(ro.realize.annotations);
  const auto splits = load_splits(ro.realize.splits);
  RealizeCounts counts;
  const auto d = build_dataset(annotations, schema.templates, schema.frames, splits,
                               {!ro.realize.no_dedup}, &counts);
  const auto train = d.split(Split::kTrain);
  const auto gold = eval_split(d, ro.split);
  const auto taxonomy = load_taxonomy(wo);
  if (!taxonomy) err << "fvqa: no --taxonomy given, WUPS left empty\n";
  const auto features = image_features(mo);

  err << "training single-task model\n";
  const auto single = mtl::train_model(d, features, train_config(mo, true));
  err << "training multi-task model\n";
  const auto multi = mtl::train_model(d, features, train_config(mo, false));

  const auto prior_answer = mtl::prior_baseline(train);
  const auto prior = mtl::predict_constant(gold, prior_answer);
  const auto per_verb = mtl::predict_per_verb(gold, mtl::per_verb_prior(train), prior_answer);
  const auto single_preds = mtl::predict(single, gold, features);
  const auto multi_preds = mtl::predict(multi, gold, features);

  if (!ro.out_dir.empty()) {
    std::filesystem::create_directories(ro.out_dir);
    const std::filesystem::path dir(ro.out_dir);
    {
      auto os = open_output((dir / "dataset.jsonl").string());
      write_samples_jsonl(os, d.samples);
    }
    auto os_single = open_output((dir / "single_task.jsonl").string());
    write_predictions_jsonl(os_single, single_preds);
    auto os_multi = open_output((dir / "multi_task.jsonl").string());
    write_predictions_jsonl(os_multi, multi_preds);
    mtl::save_checkpoint((dir / "single_task.model").string(), single);
    mtl::save_checkpoint((dir / "multi_task.model").string(), multi);
  }

  std::vector<Table> tables;
  Table data{"dataset", {"templates", "realized", "samples", "train", "dev", "test", "answers",
                         "elements"}, {}};
  data.rows.push_back({total_templates(schema.templates), counts.raw, d.samples.size(),
                       train.size(), d.split(Split::kDev).size(), d.split(Split::kTest).size(),
                       d.answer_vocab.size(), d.element_vocab.size()});
  tables.push_back(std::move(data));

  Table results{"results", score_columns(wo), {}};
  results.rows.push_back(score_row("prior (\"" + prior_answer + "\")", prior, gold, wo, taxonomy));
  results.rows.push_back(score_row("per verb prior", per_verb, gold, wo, taxonomy));
  results.rows.push_back(score_row("single-task", single_preds, gold, wo, taxonomy));
  results.rows.push_back(score_row("multi-task", multi_preds, gold, wo, taxonomy));
  tables.push_back(std::move(results));
  tables.push_back(
      significance_table("single-task", single_preds, "multi-task", multi_preds, gold));

  const auto idx = build_index(train);
  Table cons{"consistency", {"system", "element_source", "rate"}, {}};
  for (const auto& [name, preds] :
       {std::pair<std::string, const std::vector<Prediction>*>{"single-task", &single_preds},
        {"multi-task", &multi_preds}}) {
    const auto [rate, source] = consistency_of(*preds, gold, idx);
    cons.rows.push_back({name, source, rate});
  }
  tables.push_back(std::move(cons));

  for (const auto& [key, key_name] :
       {std::pair{BreakdownKey::kWh, std::string("wh")}, {BreakdownKey::kVerb, "verb"},
        {BreakdownKey::kElement, "element"}}) {
    const std::vector<std::pair<std::string, GroupAccuracy>> accs = {
        {"single-task", breakdown(single_preds, gold, key)},
        {"multi-task", breakdown(multi_preds, gold, key)}};
    tables.push_back(breakdown_table(key, key_name, accs, gold));
    if (key == BreakdownKey::kVerb) {
      tables.push_back(histogram_table(key_name, accs[0].second, accs[1].second));
    }
  }
  render(tables, format, out);
  return kExitOk;
}

int cmd_taxonomy_convert(const std::string& wordnet, const std::string& edges,
                         const std::string& synonyms, const std::string& format,
                         std::ostream& out) {
  auto in = open_input(wordnet);
  auto e = open_output(edges);
  auto s = open_output(synonyms);
  const auto counts = convert_wordnet_data(in, e, s);
  Table t{"taxonomy_convert", {"synsets", "edges", "synonyms"}, {}};
  t.rows.push_back({counts.synsets, counts.edges, counts.synonyms});
  render({t}, format, out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frame-semantic VQA dataset synthesis and evaluation"};
  app.name("fvqa");
  app.require_subcommand(1);

  std::string format = "table";
  auto add_format = [&format](CLI::App* sub) {
    sub->add_option("--format", format, "Summary format")
        ->capture_default_str()
        ->check(CLI::IsMember({"json", "table", "csv"}));
  };

  SchemaOptions schema;
  ModelOptions model;
  WupsCliOptions wups_opts;
  std::string out_path, dataset, predictions, model_path, split, export_path;
  std::size_t top = 10;

  auto* templates = app.add_subcommand("templates", "Generate question templates (JSON-lines)");
  add_schema_options(templates, schema);
  templates->add_option("--out", out_path, "Output file (default: standard output)");
  add_format(templates);

  RealizeOptions realize_opts;
  auto* realize = app.add_subcommand("realize", "Realize annotations into QA samples");
  add_schema_options(realize, schema);
  realize->add_option("--annotations", realize_opts.annotations, "Annotations (JSON-lines)")
      ->required()
      ->check(CLI::ExistingFile);
  realize->add_option("--splits", realize_opts.splits, "Image splits (JSON-lines)")
      ->required()
      ->check(CLI::ExistingFile);
  realize->add_option("--out", realize_opts.out, "Output file (default: standard output)");
  realize->add_flag("--no-dedup", realize_opts.no_dedup, "Keep duplicate (image, Q, A) triples");
  add_format(realize);

  auto* stats = app.add_subcommand("stats", "Dataset distributions");
  stats->add_option("--dataset", dataset)->required()->check(CLI::ExistingFile);
  stats->add_option("--split", split, "train, dev or test")->default_val("train");
  stats->add_option("--top", top, "Rows in the frequency tables")->capture_default_str();
  add_format(stats);

  auto* train = app.add_subcommand("train", "Train the classifier and write a checkpoint");
  train->add_option("--dataset", dataset)->required()->check(CLI::ExistingFile);
  train->add_option("--out", model_path, "Checkpoint file")->required();
  add_train_options(train, model, true);
  add_format(train);

  auto* predict = app.add_subcommand("predict", "Predict answers for a split");
  predict->add_option("--dataset", dataset)->required()->check(CLI::ExistingFile);
  predict->add_option("--model", model_path, "Checkpoint file")
      ->required()
      ->check(CLI::ExistingFile);
  predict->add_option("--features", model.features)->check(CLI::ExistingFile);
  predict->add_option("--seed", model.seed, "Seed the synthetic features were trained with")
      ->capture_default_str();
  predict->add_option("--split", split)->default_val("test");
  predict->add_option("--out", out_path, "Output file (default: standard output)");

  EvaluateOptions eval_opts;
  auto* evaluate = app.add_subcommand("evaluate", "Accuracy, WUPS, significance, breakdowns");
  evaluate->add_option("--dataset", eval_opts.dataset)->required()->check(CLI::ExistingFile);
  evaluate->add_option("--predictions", eval_opts.predictions)
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--against", eval_opts.against,
                       "Second predictions file: adds chi-square and delta histograms")
      ->check(CLI::ExistingFile);
  evaluate->add_option("--split", eval_opts.split)->capture_default_str();
  evaluate->add_option("--breakdown", eval_opts.breakdowns, "wh, verb or element (repeatable)")
      ->check(CLI::IsMember({"wh", "verb", "element", "role"}));
  add_wups_options(evaluate, wups_opts);
  add_format(evaluate);

  auto* consistency = app.add_subcommand("consistency", "Answer/frame-element consistency");
  consistency->add_option("--dataset", dataset, "Dataset whose train split builds the index")
      ->required()
      ->check(CLI::ExistingFile);
  consistency->add_option("--predictions", predictions)->required()->check(CLI::ExistingFile);
  consistency->add_option("--split", split)->default_val("test");
  consistency->add_option("--export-index", export_path, "Write the index as JSON");
  consistency->add_option("--top", top, "Answers listed by element spread")->capture_default_str();
  add_format(consistency);

  ReportOptions report_opts;
  auto* report = app.add_subcommand("report", "Realize, train both models, evaluate, compare");
  add_schema_options(report, schema);
  report->add_option("--annotations", report_opts.realize.annotations)
      ->required()
      ->check(CLI::ExistingFile);
  report->add_option("--splits", report_opts.realize.splits)
      ->required()
      ->check(CLI::ExistingFile);
  report->add_flag("--no-dedup", report_opts.realize.no_dedup);
  report->add_option("--split", report_opts.split, "Evaluation split")->capture_default_str();
  report->add_option("--out-dir", report_opts.out_dir,
                     "Also write the dataset, predictions and checkpoints here");
  add_train_options(report, model, false);
  add_wups_options(report, wups_opts);
  add_format(report);

  std::string wordnet, edges_out, synonyms_out;
  auto* convert = app.add_subcommand("taxonomy-convert", "WordNet data file to TSV edge list");
  convert->add_option("--wordnet", wordnet, "data.noun-style file")
      ->required()
      ->check(CLI::ExistingFile);
  convert->add_option("--edges", edges_out)->required();
  convert->add_option("--synonyms", synonyms_out)->required();
  add_format(convert);

  if (!args.empty() && !args[0].starts_with('-')) {
    try {
      app.get_subcommand(args[0]);
    } catch (const CLI::OptionNotFound&) {
      err << "fvqa: unknown subcommand '" << args[0] << "'\n" << app.help();
      return kExitUsage;
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.back()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "fvqa: " << e.what() << '\n';
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.back()->help());
    return kExitUsage;
  }

  try {
    if (*templates) return cmd_templates(schema, out_path, format, out, err);
    if (*realize) return cmd_realize(schema, realize_opts, format, out, err);
    if (*stats) return cmd_stats(dataset, split, top, format, out);
    if (*train) return cmd_train(dataset, model, model_path, format, out);
    if (*predict) return cmd_predict(dataset, model_path, model, split, out_path, out);
    if (*evaluate) return cmd_evaluate(eval_opts, wups_opts, format, out, err);
    if (*consistency) {
      return cmd_consistency(dataset, predictions, split, export_path, top, format, out);
    }
    if (*report) return cmd_report(schema, report_opts, model, wups_opts, format, out, err);
    if (*convert) return cmd_taxonomy_convert(wordnet, edges_out, synonyms_out, format, out);
  } catch (const Error& e) {
    err << "fvqa: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "fvqa: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace fvqa::cli
