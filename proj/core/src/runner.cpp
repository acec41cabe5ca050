#include "auctag/runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "auctag/error.hpp"
#include "auctag/hash.hpp"
#include "auctag/metrics.hpp"
#include "auctag/model.hpp"
#include "auctag/random.hpp"

namespace auctag {
namespace {

// Index into a prepared pool plus its label, so sampling can stay generic.
struct PoolItem {
  std::size_t index = 0;
  int label = 0;
};

std::vector<PoolItem> pool_items(const std::vector<Example>& pool) {
  std::vector<PoolItem> items(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) items[i] = {i, pool[i].label};
  return items;
}

std::vector<Example> gather(const std::vector<Example>& pool,
                            const std::vector<PoolItem>& items) {
  std::vector<Example> out;
  out.reserve(items.size());
  for (const auto& it : items) out.push_back(pool[it.index]);
  return out;
}

std::vector<LabeledWindow> gather(const std::vector<LabeledWindow>& pool,
                                  const std::vector<PoolItem>& items) {
  std::vector<LabeledWindow> out;
  out.reserve(items.size());
  for (const auto& it : items) out.push_back(pool[it.index]);
  return out;
}

MethodSpec method_from_json(const nlohmann::json& j) {
  MethodSpec m;
  m.loss = loss_config_from_json(j);
  m.name = j.value("name", std::string(to_string(m.loss.regime)));
  return m;
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::filesystem::path& p) {
  if (p.is_absolute() || base.empty()) return p;
  return (base / p).lexically_normal();
}

std::string trial_identity(const TrialResult& t) {
  return "method=" + t.method + " kind=" + std::string(to_string(t.condition.kind)) +
         " condition=" + format_number(t.condition.value) +
         " partition=" + std::to_string(t.partition);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error(ErrorKind::kIo, "write failed for '" + path.string() + "'");
}

nlohmann::ordered_json stats_json(const MetricStats& s) {
  return {{"mean", s.mean}, {"sd", s.sd}, {"ci95", s.ci95}};
}

}  // namespace

std::vector<MethodSpec> default_methods() {
  std::vector<MethodSpec> out;
  for (Regime r : {Regime::kCE, Regime::kDAM, Regime::kCOMAUC}) {
    MethodSpec m;
    m.name = std::string(to_string(r));
    m.loss.regime = r;
    out.push_back(m);
  }
  return out;
}

void ExperimentConfig::validate() const {
  if (!data.corpus && !data.synth) {
    throw Error(ErrorKind::kInvalidArgument, "config needs data.corpus or data.synth");
  }
  if (data.corpus && data.synth) {
    throw Error(ErrorKind::kInvalidArgument,
                "config must set only one of data.corpus and data.synth");
  }
  if (methods.empty()) throw Error(ErrorKind::kInvalidArgument, "no methods configured");
  for (std::size_t i = 0; i < methods.size(); ++i) {
    methods[i].loss.validate();
    for (std::size_t j = 0; j < i; ++j) {
      if (methods[i].name == methods[j].name) {
        throw Error(ErrorKind::kInvalidArgument,
                    "duplicate method name '" + methods[i].name + "'");
      }
    }
  }
  scenario.validate();
  train.validate();
  features.validate();
  if (hidden_dim < 1) throw Error(ErrorKind::kInvalidArgument, "hidden_dim must be >= 1");
  if (threads < 1) throw Error(ErrorKind::kInvalidArgument, "threads must be >= 1");
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j,
                                             const std::filesystem::path& base_dir) {
  try {
    ExperimentConfig c;
    if (j.contains("data")) {
      const auto& d = j.at("data");
      if (d.contains("corpus")) {
        c.data.corpus = resolve(base_dir, d.at("corpus").get<std::string>());
      }
      if (d.contains("labels")) {
        c.data.labels = resolve(base_dir, d.at("labels").get<std::string>());
      }
      if (d.contains("synth")) c.data.synth = synth_spec_from_json(d.at("synth"));
    }
    if (j.contains("split")) c.split = split_spec_from_json(j.at("split"));
    if (j.contains("scenario")) c.scenario = scenario_spec_from_json(j.at("scenario"));
    if (j.contains("methods")) {
      c.methods.clear();
      for (const auto& m : j.at("methods")) c.methods.push_back(method_from_json(m));
    }
    if (j.contains("train")) c.train = train_config_from_json(j.at("train"));
    c.hidden_dim = j.value("hidden_dim", c.hidden_dim);
    if (j.contains("features")) c.features = feature_config_from_json(j.at("features"));
    c.master_seed = j.value("master_seed", c.master_seed);
    if (j.contains("output_dir")) {
      c.output_dir = resolve(base_dir, j.at("output_dir").get<std::string>());
    } else {
      c.output_dir = resolve(base_dir, c.output_dir);
    }
    c.threads = j.value("threads", c.threads);
    c.record_wall_time = j.value("record_wall_time", c.record_wall_time);
    c.export_conditions = j.value("export_conditions", c.export_conditions);
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("config: ") + e.what());
  }
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open config '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("config: ") + e.what());
  }
  return experiment_config_from_json(j, path.parent_path());
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json data = nlohmann::json::object();
  if (c.data.corpus) data["corpus"] = c.data.corpus->string();
  if (c.data.labels) data["labels"] = c.data.labels->string();
  if (c.data.synth) data["synth"] = to_json(*c.data.synth);
  nlohmann::json methods = nlohmann::json::array();
  for (const auto& m : c.methods) {
    auto mj = to_json(m.loss);
    mj["name"] = m.name;
    methods.push_back(mj);
  }
  return {{"data", data},
          {"split", to_json(c.split)},
          {"scenario", to_json(c.scenario)},
          {"methods", methods},
          {"train", to_json(c.train)},
          {"hidden_dim", c.hidden_dim},
          {"features", to_json(c.features)},
          {"master_seed", c.master_seed},
          {"output_dir", c.output_dir.string()},
          {"threads", c.threads},
          {"record_wall_time", c.record_wall_time},
          {"export_conditions", c.export_conditions}};
}

Corpus load_source(const ExperimentConfig& config) {
  if (config.data.synth) return synth_corpus(*config.data.synth);
  const LabelSet labels =
      config.data.labels ? load_label_set(*config.data.labels) : default_label_set();
  return load_corpus(*config.data.corpus, labels);
}

PreparedData prepare_data(const ExperimentConfig& config) {
  return prepare_data(config, load_source(config));
}

PreparedData prepare_data(const ExperimentConfig& config, const Corpus& corpus) {
  auto [train_corpus, test_corpus] = split_sessions(corpus, config.split);
  PreparedData d;
  d.kind = config.scenario.kind;
  d.train_sessions = train_corpus.sessions.size();
  d.test_sessions = test_corpus.sessions.size();
  d.train_windows = build_context_windows(train_corpus, true);
  d.test_windows = build_context_windows(test_corpus, true);
  if (d.kind == ScenarioKind::kLowResource) {
    d.label_set = corpus.label_set;
  } else {
    d.label_set = binary_label_set(config.scenario.target_class);
    d.train_windows = binarize(d.train_windows, corpus.label_set,
                               config.scenario.target_class);
    d.test_windows = binarize(d.test_windows, corpus.label_set,
                              config.scenario.target_class);
  }
  if (d.train_windows.empty() || d.test_windows.empty()) {
    throw Error(ErrorKind::kValidation, "split left no labeled sentences on one side");
  }
  d.train_pool = featurize_all(d.train_windows, config.features);
  d.test_pool = featurize_all(d.test_windows, config.features);
  return d;
}

std::string format_number(double value) {
  char buf[64];
  if (std::trunc(value) == value && std::fabs(value) < 1e15) {
    auto res = std::to_chars(buf, buf + sizeof buf, static_cast<long long>(value));
    return std::string(buf, res.ptr);
  }
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::vector<Condition> conditions_of(const ScenarioSpec& spec) {
  std::vector<Condition> out;
  if (spec.kind == ScenarioKind::kLowResource) {
    for (std::size_t i = 0; i < spec.sizes.size(); ++i) {
      out.push_back({spec.kind, i, static_cast<double>(spec.sizes[i])});
    }
  } else {
    for (std::size_t i = 0; i < spec.ratios.size(); ++i) {
      out.push_back({spec.kind, i, spec.ratios[i]});
    }
  }
  return out;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t condition_index,
                         std::size_t partition) {
  return mix_seed(mix_seed(master_seed, condition_index + 1), partition + 1);
}

double t_quantile_975(std::size_t df) {
  if (df == 0) throw Error(ErrorKind::kInvalidArgument, "t quantile needs df >= 1");
  boost::math::students_t dist(static_cast<double>(df));
  return boost::math::quantile(dist, 0.975);
}

MetricStats summarize(const std::vector<double>& values) {
  MetricStats s;
  if (values.empty()) return s;
  const auto n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / n;
  if (values.size() < 2) return s;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.sd = std::sqrt(ss / (n - 1.0));
  s.ci95 = t_quantile_975(values.size() - 1) * s.sd / std::sqrt(n);
  return s;
}

std::size_t validation_count(std::size_t n) {
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(0.2 * static_cast<double>(n) + 0.5)));
}

TrialResult run_trial(const ExperimentConfig& config, const PreparedData& data,
                      std::size_t method_index, const Condition& condition,
                      std::size_t partition, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const MethodSpec& method = config.methods.at(method_index);
  const bool binary = condition.kind != ScenarioKind::kLowResource;

  const auto train_items = pool_items(data.train_pool);
  const auto test_items = pool_items(data.test_pool);
  std::vector<PoolItem> sample, test;
  if (!binary) {
    sample = sample_low_resource<PoolItem>(
        train_items, static_cast<std::size_t>(condition.value), mix_seed(seed, 11));
    test = test_items;
  } else {
    ScenarioSpec spec = config.scenario;
    spec.kind = condition.kind;
    auto cond = build_condition<PoolItem>(train_items, test_items, spec,
                                          condition.value, mix_seed(seed, 12));
    sample = std::move(cond.train);
    test = std::move(cond.test);
  }
  if (sample.size() < 2) {
    throw Error(ErrorKind::kInvalidArgument,
                "training sample too small to carve a validation set");
  }

  if (config.export_conditions && method_index == 0) {
    const std::string name = std::string(to_string(condition.kind)) + "_" +
                             format_number(condition.value) + "_p" +
                             std::to_string(partition);
    auto counts = [](const std::vector<PoolItem>& items) {
      std::size_t pos = 0;
      for (const auto& it : items) pos += it.label == 1;
      return nlohmann::json{{"n", items.size()}, {"positives", pos}};
    };
    nlohmann::json manifest = {{"kind", std::string(to_string(condition.kind))},
                               {binary ? "ratio" : "size", condition.value},
                               {"seed", seed},
                               {"partition", partition},
                               {"train_counts", counts(sample)},
                               {"test_counts", counts(test)}};
    const auto dir = config.output_dir / "conditions";
    export_condition(gather(data.train_windows, sample), data.label_set, dir,
                     name + "_train", manifest);
    export_condition(gather(data.test_windows, test), data.label_set, dir,
                     name + "_test", manifest);
  }

  // Validation is the last 20% of the (already shuffled) sample.
  const std::size_t n_val = validation_count(sample.size());
  const std::vector<PoolItem> fit_items(sample.begin(),
                                        sample.end() - static_cast<std::ptrdiff_t>(n_val));
  const std::vector<PoolItem> val_items(sample.end() - static_cast<std::ptrdiff_t>(n_val),
                                        sample.end());
  const auto fit_set = gather(data.train_pool, fit_items);
  const auto val_set = gather(data.train_pool, val_items);
  const auto test_set = gather(data.test_pool, test);

  Model model = init_model(data.label_set, config.hidden_dim, config.features,
                           mix_seed(seed, 13));
  TrainConfig tc = config.train;
  tc.seed = mix_seed(seed, 14);
  TrainResult trained = train(std::move(model), fit_set, val_set, method.loss, tc);

  const ScoreMode mode =
      method.loss.regime == Regime::kCE ? ScoreMode::kSoftmax : ScoreMode::kOva;
  const EvalReport report = evaluate(trained.model, test_set, mode);

  TrialResult r;
  r.method = method.name;
  r.method_index = method_index;
  r.condition = condition;
  r.partition = partition;
  r.seed = seed;
  r.kappa = report.kappa;
  r.epochs = static_cast<int>(trained.history.epochs.size());
  if (binary) {
    r.f1 = report.f1_per_class[1];
    std::vector<double> scores(test_set.size());
    std::vector<int> labels(test_set.size());
    for (std::size_t i = 0; i < test_set.size(); ++i) {
      scores[i] = predict_proba(trained.model, test_set[i].features, mode)[1];
      labels[i] = test_set[i].label;
    }
    r.auc = roc_auc(scores, labels);
  } else {
    r.f1 = report.f1_macro;
  }
  if (config.record_wall_time) {
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                      .count();
  }
  return r;
}

TrialResult run_trial(const ExperimentConfig& config, std::size_t method_index,
                      const Condition& condition, std::uint64_t seed) {
  ExperimentConfig c = config;
  c.scenario.kind = condition.kind;
  return run_trial(c, prepare_data(c), method_index, condition, 0, seed);
}

std::size_t planned_trial_count(const ExperimentConfig& config) {
  return conditions_of(config.scenario).size() * config.methods.size() *
         config.scenario.partitions_per_condition;
}

SweepResult sweep(const ExperimentConfig& config, const PreparedData& data) {
  config.validate();
  struct Job {
    std::size_t method;
    Condition condition;
    std::size_t partition;
  };
  std::vector<Job> jobs;
  for (std::size_t m = 0; m < config.methods.size(); ++m) {
    for (const auto& c : conditions_of(config.scenario)) {
      for (std::size_t p = 0; p < config.scenario.partitions_per_condition; ++p) {
        jobs.push_back({m, c, p});
      }
    }
  }

  std::vector<TrialResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::string error_message;
  ErrorKind error_kind = ErrorKind::kInvalidArgument;
  std::size_t error_job = jobs.size();

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size() || failed.load()) return;
      const Job& job = jobs[i];
      const std::uint64_t seed =
          trial_seed(config.master_seed, job.condition.index, job.partition);
      try {
        results[i] = run_trial(config, data, job.method, job.condition,
                               job.partition, seed);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (i < error_job) {
          error_job = i;
          const auto* err = dynamic_cast<const Error*>(&e);
          error_kind = err ? err->kind() : ErrorKind::kInvalidArgument;
          TrialResult id;
          id.method = config.methods[job.method].name;
          id.condition = job.condition;
          id.partition = job.partition;
          error_message = "trial " + trial_identity(id) + " failed: " + e.what();
        }
        failed.store(true);
      }
    }
  };
  const std::size_t n_threads = std::min(config.threads, std::max<std::size_t>(1, jobs.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failed.load()) throw Error(error_kind, error_message);

  SweepResult out;
  out.trials = std::move(results);
  out.aggregates = aggregate(out.trials);
  out.metadata = {
      {"kind", std::string(to_string(config.scenario.kind))},
      {"error_bars", "95% Student-t interval over seeds: t(0.975, n-1) * sd / sqrt(n)"},
      {"f1", config.scenario.kind == ScenarioKind::kLowResource
                 ? "macro-F1 over all classes"
                 : "F1 of the target class"},
      {"conditions", config.scenario.kind == ScenarioKind::kLowResource
                         ? nlohmann::json(config.scenario.sizes)
                         : nlohmann::json(config.scenario.ratios)},
      {"partitions_per_condition", config.scenario.partitions_per_condition},
      {"master_seed", config.master_seed},
      {"feature_hash", std::string(kFeatureHashName)},
      {"feature_hash_seed", config.features.hash_seed},
      {"train_pool", data.train_pool.size()},
      {"test_pool", data.test_pool.size()},
      {"train_sessions", data.train_sessions},
      {"test_sessions", data.test_sessions},
  };
  if (config.scenario.kind != ScenarioKind::kLowResource) {
    out.metadata["target_class"] = config.scenario.target_class;
    out.metadata["train_n"] = config.scenario.train_n;
    out.metadata["test_n"] = config.scenario.test_n;
  }
  return out;
}

SweepResult sweep_low_resource(const ExperimentConfig& config) {
  if (config.scenario.kind != ScenarioKind::kLowResource) {
    throw Error(ErrorKind::kInvalidArgument, "sweep-lowres needs kind low_resource");
  }
  return sweep(config, prepare_data(config));
}

SweepResult sweep_imbalance(const ExperimentConfig& config) {
  if (config.scenario.kind == ScenarioKind::kLowResource) {
    throw Error(ErrorKind::kInvalidArgument, "sweep-imbalance needs an imbalance kind");
  }
  return sweep(config, prepare_data(config));
}

std::vector<Aggregate> aggregate(const std::vector<TrialResult>& trials) {
  std::vector<const TrialResult*> sorted;
  for (const auto& t : trials) sorted.push_back(&t);
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
    return std::tie(a->method_index, a->condition.index, a->partition) <
           std::tie(b->method_index, b->condition.index, b->partition);
  });
  std::vector<Aggregate> out;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    std::vector<double> f1s, kappas, aucs;
    bool all_auc = true;
    while (j < sorted.size() && sorted[j]->method_index == sorted[i]->method_index &&
           sorted[j]->condition.index == sorted[i]->condition.index) {
      f1s.push_back(sorted[j]->f1);
      kappas.push_back(sorted[j]->kappa);
      if (sorted[j]->auc) aucs.push_back(*sorted[j]->auc);
      else all_auc = false;
      ++j;
    }
    Aggregate a;
    a.method = sorted[i]->method;
    a.method_index = sorted[i]->method_index;
    a.condition = sorted[i]->condition;
    a.n = j - i;
    a.f1 = summarize(f1s);
    a.kappa = summarize(kappas);
    if (all_auc && !aucs.empty()) a.auc = summarize(aucs);
    out.push_back(a);
    i = j;
  }
  return out;
}

nlohmann::ordered_json to_json(const SweepResult& sweep) {
  nlohmann::ordered_json trials = nlohmann::ordered_json::array();
  for (const auto& t : sweep.trials) {
    trials.push_back({{"method", t.method},
                      {"method_index", t.method_index},
                      {"kind", std::string(to_string(t.condition.kind))},
                      {"condition_index", t.condition.index},
                      {"condition", t.condition.value},
                      {"partition", t.partition},
                      {"seed", t.seed},
                      {"f1", t.f1},
                      {"kappa", t.kappa},
                      {"auc", t.auc ? nlohmann::ordered_json(*t.auc)
                                    : nlohmann::ordered_json(nullptr)},
                      {"epochs", t.epochs},
                      {"wall_time", t.wall_time}});
  }
  nlohmann::ordered_json out;
  out["metadata"] = sweep.metadata;
  out["trials"] = trials;
  return out;
}

SweepResult sweep_from_json(const nlohmann::json& j) {
  try {
    SweepResult s;
    s.metadata = j.value("metadata", nlohmann::json::object());
    for (const auto& t : j.at("trials")) {
      TrialResult r;
      r.method = t.at("method").get<std::string>();
      r.method_index = t.at("method_index").get<std::size_t>();
      r.condition.kind = parse_scenario_kind(t.at("kind").get<std::string>());
      r.condition.index = t.at("condition_index").get<std::size_t>();
      r.condition.value = t.at("condition").get<double>();
      r.partition = t.at("partition").get<std::size_t>();
      r.seed = t.at("seed").get<std::uint64_t>();
      r.f1 = t.at("f1").get<double>();
      r.kappa = t.at("kappa").get<double>();
      if (!t.at("auc").is_null()) r.auc = t.at("auc").get<double>();
      r.epochs = t.at("epochs").get<int>();
      r.wall_time = t.at("wall_time").get<double>();
      s.trials.push_back(std::move(r));
    }
    s.aggregates = aggregate(s.trials);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("sweep: ") + e.what());
  }
}

std::string trials_csv(const SweepResult& sweep) {
  std::vector<const TrialResult*> sorted;
  for (const auto& t : sweep.trials) sorted.push_back(&t);
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
    return std::tie(a->method_index, a->condition.index, a->partition) <
           std::tie(b->method_index, b->condition.index, b->partition);
  });
  std::ostringstream out;
  out << "method,kind,condition,seed,f1,kappa,auc,epochs,wall_time\n";
  for (const auto* t : sorted) {
    out << t->method << ',' << to_string(t->condition.kind) << ','
        << format_number(t->condition.value) << ',' << t->seed << ','
        << format_number(t->f1) << ',' << format_number(t->kappa) << ','
        << (t->auc ? format_number(*t->auc) : std::string()) << ',' << t->epochs
        << ',' << format_number(t->wall_time) << '\n';
  }
  return out.str();
}

nlohmann::ordered_json summary_json(const SweepResult& sweep) {
  nlohmann::ordered_json groups = nlohmann::ordered_json::array();
  for (const auto& a : sweep.aggregates) {
    groups.push_back({{"method", a.method},
                      {"kind", std::string(to_string(a.condition.kind))},
                      {"condition", a.condition.value},
                      {"n", a.n},
                      {"f1", stats_json(a.f1)},
                      {"kappa", stats_json(a.kappa)},
                      {"auc", a.auc ? stats_json(*a.auc) : nlohmann::ordered_json(nullptr)}});
  }
  nlohmann::ordered_json out;
  out["metadata"] = sweep.metadata;
  out["groups"] = groups;
  return out;
}

nlohmann::ordered_json plotdata_json(const SweepResult& sweep) {
  nlohmann::ordered_json out;
  auto series = [&](const char* metric, auto pick) {
    nlohmann::ordered_json by_method;
    bool any = false;
    for (const auto& a : sweep.aggregates) {
      const std::optional<MetricStats> s = pick(a);
      if (!s) continue;
      any = true;
      by_method[a.method].push_back(
          {{"x", a.condition.value}, {"y", s->mean}, {"err", s->ci95}});
    }
    if (any) out[metric] = by_method;
  };
  series("f1", [](const Aggregate& a) { return std::optional<MetricStats>(a.f1); });
  series("kappa", [](const Aggregate& a) { return std::optional<MetricStats>(a.kappa); });
  series("auc", [](const Aggregate& a) { return a.auc; });
  return out;
}

void report(const SweepResult& sweep, const std::filesystem::path& out_dir) {
  if (sweep.trials.empty()) throw Error(ErrorKind::kInvalidArgument, "empty sweep");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw Error(ErrorKind::kIo, "cannot create '" + out_dir.string() + "': " + ec.message());
  }
  write_file(out_dir / "trials.csv", trials_csv(sweep));
  write_file(out_dir / "summary.json", summary_json(sweep).dump(2) + "\n");
  write_file(out_dir / "plotdata.json", plotdata_json(sweep).dump(2) + "\n");
}

}  // namespace auctag
