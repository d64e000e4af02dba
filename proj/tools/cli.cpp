#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>

#include "fuzzymatch/cache.hpp"
#include "fuzzymatch/ensemble.hpp"
#include "fuzzymatch/errors.hpp"
#include "fuzzymatch/eval.hpp"
#include "fuzzymatch/io.hpp"
#include "fuzzymatch/llm.hpp"
#include "fuzzymatch/metrics.hpp"
#include "fuzzymatch/pipeline.hpp"

namespace fuzzymatch::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char *kEnvPrefix = "FUZZYMATCH_";

const char *kExitFooter =
    "Exit status: 0 on success, 2 when some pairs failed to score (their rows "
    "carry an error), 1 on configuration or fatal errors.\n"
    "Every option can also be given in the --config JSON file (same name, "
    "'-' or '_') or as an environment variable FUZZYMATCH_<OPTION> "
    "(upper case, '-' -> '_'). Precedence: flags > config file > environment > "
    "defaults.";

const char *kLlmFooter =
    "The API key is never accepted as a flag. It is read from the environment "
    "variable named by --api-key-env (default OPENAI_API_KEY) and is never "
    "printed.";

struct LlmOptions {
  bool mock = false;
  std::string replay;
  std::string prompt = "plain";
  std::string prompt_file;
  std::string endpoint = "https://api.openai.com";
  int timeout_seconds = 60;
  llm::LlmConfig config;
  std::string cache;
};

void add_llm_options(CLI::App *cmd, LlmOptions &o) {
  auto *g = cmd;
  g->add_flag("--mock", o.mock,
              "Use the deterministic offline mock provider (no network)");
  g->add_option("--replay", o.replay,
                "Replay replies from a JSON-lines fixture of "
                "{prompt_sha256, reply} records");
  g->add_option("--prompt", o.prompt, "Prompt template: plain or enriched")
      ->check(CLI::IsMember({"plain", "enriched"}))
      ->capture_default_str();
  g->add_option("--prompt-file", o.prompt_file,
                "Custom prompt template file containing {entity_a} and "
                "{entity_b} exactly once");
  g->add_option("--model-id", o.config.model_id, "Chat model identifier")
      ->capture_default_str();
  g->add_option("--temperature", o.config.temperature, "Sampling temperature")
      ->capture_default_str();
  g->add_option("--max-tokens", o.config.max_output_tokens,
                "Reply token cap")
      ->capture_default_str();
  g->add_option("--concurrency", o.config.max_concurrency,
                "Maximum provider calls in flight")
      ->capture_default_str();
  g->add_option("--retries", o.config.max_retries,
                "Retries per pair after a failed provider call")
      ->capture_default_str();
  g->add_option("--backoff-ms", o.config.initial_backoff_ms,
                "Initial retry backoff in milliseconds (doubles per retry)")
      ->capture_default_str();
  g->add_option("--api-key-env", o.config.api_key_env,
                "Name of the environment variable holding the API key")
      ->capture_default_str();
  g->add_option("--endpoint", o.endpoint, "Chat-completion API base URL")
      ->capture_default_str();
  g->add_option("--timeout", o.timeout_seconds, "HTTP timeout in seconds")
      ->capture_default_str();
  g->add_option("--cache", o.cache, "JSON-lines score cache file");
}

// Normalized option name for config-file and environment lookups.
std::string canonical_key(std::string key) {
  for (auto &c : key) {
    if (c == '_')
      c = '-';
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return key;
}

std::string env_name(const std::string &option) {
  std::string out = kEnvPrefix;
  for (char c : option)
    out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string json_scalar(const nlohmann::json &v, const std::string &key) {
  if (v.is_string())
    return v.get<std::string>();
  if (v.is_boolean())
    return v.get<bool>() ? "true" : "false";
  if (v.is_number())
    return v.dump();
  throw ConfigError("config field '" + key + "': expected a scalar value");
}

// Flattens one level of nesting so {"llm": {"temperature": 1}} works too.
struct ConfigField {
  std::string key; // as written in the file
  std::string value;
};

std::map<std::string, ConfigField> load_config_file(const std::string &path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(io::read_file(path));
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError("config file " + path + ": " + e.what());
  } catch (const IoError &e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
  if (!doc.is_object())
    throw ConfigError("config file " + path + ": top level must be an object");
  std::map<std::string, ConfigField> out;
  for (const auto &[k, v] : doc.items()) {
    if (v.is_object()) {
      for (const auto &[k2, v2] : v.items())
        out[canonical_key(k2)] = {k + "." + k2, json_scalar(v2, k + "." + k2)};
    } else {
      out[canonical_key(k)] = {k, json_scalar(v, k)};
    }
  }
  return out;
}

std::string long_name(const CLI::Option *opt) {
  const auto &names = opt->get_lnames();
  return names.empty() ? std::string() : names.front();
}

// Fills options not given on the command line from the config file, then from
// the environment.
void merge_sources(CLI::App &app, CLI::App &cmd, const std::string &config_path,
                   CliContext &ctx) {
  std::map<std::string, ConfigField> file;
  if (!config_path.empty()) {
    file = load_config_file(config_path);
    std::set<std::string> known;
    for (auto *sub : app.get_subcommands({}))
      for (const auto *opt : sub->get_options())
        known.insert(long_name(opt));
    for (const auto &[k, v] : file)
      if (!known.count(k))
        throw ConfigError("config file " + config_path + ": unknown field '" +
                          v.key + "'");
  }
  for (auto *opt : cmd.get_options()) {
    const std::string name = long_name(opt);
    if (name.empty() || name == "help" || name == "config" || opt->count() > 0)
      continue;
    std::optional<std::string> value;
    std::string source;
    if (auto it = file.find(name); it != file.end()) {
      value = it->second.value;
      source = "config field '" + it->second.key + "'";
    } else if (ctx.getenv) {
      value = ctx.getenv(env_name(name));
      source = "environment variable " + env_name(name);
    }
    if (!value)
      continue;
    try {
      opt->add_result(*value);
      opt->run_callback();
    } catch (const CLI::Error &e) {
      throw ConfigError(source + ": invalid value '" + *value + "' (" +
                        e.what() + ")");
    }
  }
}

void require_field(const std::string &value, const std::string &name) {
  if (value.empty())
    throw ConfigError("--" + name + " is required");
}

void require_output_dir(const std::string &path, const std::string &name) {
  const fs::path p(path);
  const fs::path parent = p.has_parent_path() ? p.parent_path() : fs::path(".");
  if (!fs::is_directory(parent))
    throw ConfigError("--" + name + ": directory does not exist: " +
                      parent.string());
}

llm::PromptTemplate make_template(const LlmOptions &o) {
  if (!o.prompt_file.empty()) {
    std::string text = io::read_file(o.prompt_file);
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r'))
      text.pop_back();
    try {
      return llm::PromptTemplate::custom(std::move(text));
    } catch (const TemplateError &e) {
      throw ConfigError(std::string("--prompt-file: ") + e.what());
    }
  }
  return o.prompt == "enriched" ? llm::PromptTemplate::enriched()
                                : llm::PromptTemplate::plain();
}

// Owns whichever provider the options select.
struct ProviderHandle {
  std::unique_ptr<llm::ChatProvider> owned;
  llm::ChatProvider *ptr = nullptr;
};

ProviderHandle make_provider(const LlmOptions &o, CliContext &ctx) {
  ProviderHandle h;
  if (o.mock && !o.replay.empty())
    throw ConfigError("--mock and --replay are mutually exclusive");
  if (o.mock) {
    if (ctx.mock_provider) {
      h.ptr = ctx.mock_provider;
    } else {
      h.owned = std::make_unique<llm::MockProvider>(llm::MockProvider::hashing());
      h.ptr = h.owned.get();
    }
    return h;
  }
  if (!o.replay.empty()) {
    h.owned = std::make_unique<llm::ReplayProvider>(llm::ReplayProvider::load(o.replay));
    h.ptr = h.owned.get();
    return h;
  }
  const auto key = ctx.getenv ? ctx.getenv(o.config.api_key_env) : std::nullopt;
  if (!key || key->empty())
    throw ConfigError("environment variable " + o.config.api_key_env +
                      " is not set (needed for live LLM scoring; use --mock "
                      "or --replay for offline runs)");
  llm::OpenAiOptions opts{o.endpoint, *key, o.timeout_seconds};
  h.owned = ctx.live_factory ? ctx.live_factory(opts)
                             : std::make_unique<llm::OpenAiChatProvider>(opts);
  h.ptr = h.owned.get();
  return h;
}

std::unique_ptr<cache::ScoreCache> open_cache(const std::string &path) {
  if (path.empty())
    return nullptr;
  return std::make_unique<cache::ScoreCache>(path);
}

metrics::MetricKind metric_or_throw(const std::string &name,
                                    const std::string &flag) {
  if (auto k = metrics::parse_metric(name))
    return *k;
  std::string names;
  for (auto k : metrics::kAllMetrics)
    names += (names.empty() ? "" : ", ") + std::string(metrics::metric_name(k));
  throw ConfigError("--" + flag + ": unknown metric '" + name +
                    "' (expected one of: " + names + ")");
}

std::size_t count_failures(const std::vector<ScoreOutcome> &rows) {
  std::size_t n = 0;
  for (const auto &r : rows)
    n += r.ok() ? 0 : 1;
  return n;
}

// ---- score ---------------------------------------------------------------

struct ScoreArgs {
  std::string pairs, output, metric, model;
  bool use_llm = false;
  bool case_fold = false, collapse_ws = false;
  LlmOptions llm;
};

int cmd_score(const ScoreArgs &a, CliContext &ctx) {
  require_field(a.pairs, "pairs");
  require_field(a.output, "output");
  const int selected = (!a.metric.empty()) + (!a.model.empty()) + a.use_llm;
  if (selected != 1)
    throw ConfigError("choose exactly one scorer: --metric, --model or --llm");
  require_output_dir(a.output, "output");

  std::vector<ScoreOutcome> rows;
  if (!a.metric.empty()) {
    const auto kind = metric_or_throw(a.metric, "metric");
    const auto pairs = io::read_pairs(a.pairs);
    metrics::MetricScorer scorer(kind, {a.case_fold, a.collapse_ws});
    rows = io::to_outcomes(score_all(scorer, pairs));
    io::write_scores(a.output, rows);
    *ctx.out << "scored=" << rows.size() << " failed=0 cache_hits=0 leniency=0\n";
    return kExitOk;
  }
  if (!a.model.empty()) {
    auto model = ensemble::load_model(io::read_file(a.model));
    const auto pairs = io::read_pairs(a.pairs);
    ensemble::EnsembleScorer scorer(std::move(model));
    rows = io::to_outcomes(score_all(scorer, pairs));
    io::write_scores(a.output, rows);
    *ctx.out << "scored=" << rows.size() << " failed=0 cache_hits=0 leniency=0\n";
    return kExitOk;
  }

  a.llm.config.validate();
  const auto tmpl = make_template(a.llm);
  const auto pairs = io::read_pairs(a.pairs);
  auto provider = make_provider(a.llm, ctx);
  auto cache = open_cache(a.llm.cache);
  const auto batch =
      llm::score_batch(*provider.ptr, a.llm.config, tmpl, pairs, cache.get());
  io::write_scores(a.output, batch.outcomes);
  const auto &s = batch.summary;
  *ctx.out << "scored=" << s.successes << " failed=" << s.failures
           << " cache_hits=" << s.cache_hits << " leniency=" << s.leniency_count
           << " provider_calls=" << s.provider_calls << "\n";
  for (const auto &[idx, msg] : batch.error_manifest())
    *ctx.err << "pair " << batch.outcomes[idx].pair.id << ": " << msg << "\n";
  return s.failures ? kExitPartial : kExitOk;
}

// ---- eval ----------------------------------------------------------------

struct EvalArgs {
  std::string scores, report, pr_curve;
  std::size_t leniency = 0;
};

int cmd_eval(const EvalArgs &a, CliContext &ctx) {
  require_field(a.scores, "scores");
  require_field(a.report, "report");
  require_output_dir(a.report, "report");
  std::string curve_path = a.pr_curve;
  if (curve_path.empty()) {
    fs::path p(a.report);
    p.replace_extension(".pr.csv");
    curve_path = p.string();
  }
  require_output_dir(curve_path, "pr-curve");

  const auto rows = io::read_scores(a.scores);
  const auto scored = io::to_scored(rows);
  for (const auto &s : scored)
    if (!s.pair().label)
      throw InputError("scores file has unlabeled rows (first: id " +
                       std::to_string(s.pair().id) +
                       "); evaluation needs a label column");
  std::string scorer_id = scored.empty() ? "unknown" : scored.front().scorer_id();
  const auto report = eval::build_report(scored, scorer_id, a.leniency);
  io::write_report(a.report, report);
  io::write_file_atomic(curve_path, eval::pr_curve_to_csv(report.pr_curve));
  *ctx.out << "AP " << io::format_score(report.average_precision) << "\n"
           << "P@R=1 " << io::format_score(report.precision_at_full_recall)
           << "\n";
  return kExitOk;
}

// ---- rerank --------------------------------------------------------------

struct RerankArgs {
  std::string pairs, output, stage1 = "cosine_letter_freq", stage1_model;
  std::size_t top_k = 500;
  std::string below_k = "floor";
  LlmOptions llm;
};

int cmd_rerank(const RerankArgs &a, CliContext &ctx) {
  require_field(a.pairs, "pairs");
  require_field(a.output, "output");
  require_output_dir(a.output, "output");

  pipeline::PipelineConfig config;
  if (!a.stage1_model.empty())
    config.stage1 = std::make_shared<const ensemble::EnsembleModel>(
        ensemble::load_model(io::read_file(a.stage1_model)));
  else
    config.stage1 = metric_or_throw(a.stage1, "stage1");
  if (a.top_k < 1)
    throw ConfigError("--top-k: must be >= 1");
  config.top_k = a.top_k;
  config.below_k_policy = a.below_k == "keep" ? pipeline::BelowKPolicy::KeepStage1Score
                                              : pipeline::BelowKPolicy::FloorToZero;
  config.llm = a.llm.config;
  config.prompt = make_template(a.llm);
  config.validate();

  const auto pairs = io::read_pairs(a.pairs);
  auto provider = make_provider(a.llm, ctx);
  auto cache = open_cache(a.llm.cache);
  const auto result = pipeline::run_pipeline(pairs, config, *provider.ptr, cache.get());
  io::write_scores(a.output, result.outcomes);

  const auto failures = count_failures(result.outcomes);
  *ctx.out << "stage2_pairs=" << result.stage2_attempts
           << " stage2_calls=" << result.stage2.provider_calls
           << " cache_hits=" << result.stage2.cache_hits
           << " failed=" << failures
           << " leniency=" << result.stage2.leniency_count << "\n";
  for (const auto &r : result.outcomes)
    if (!r.ok())
      *ctx.err << "pair " << r.pair.id << ": " << r.error << "\n";
  return failures ? kExitPartial : kExitOk;
}

// ---- train / predict -----------------------------------------------------

struct TrainArgs {
  std::string pairs, model_out;
  ensemble::TrainConfig config;
};

int cmd_train(const TrainArgs &a, CliContext &ctx) {
  require_field(a.pairs, "pairs");
  require_field(a.model_out, "model-out");
  a.config.validate();
  require_output_dir(a.model_out, "model-out");
  const auto pairs = io::read_pairs(a.pairs);
  const auto model = ensemble::train(pairs, a.config);
  io::write_file_atomic(a.model_out, ensemble::save_model(model));
  *ctx.out << "trained " << model.trees.size() << " trees on " << pairs.size()
           << " pairs -> " << a.model_out << "\n";
  return kExitOk;
}

struct PredictArgs {
  std::string model, pairs, output;
};

int cmd_predict(const PredictArgs &a, CliContext &ctx) {
  require_field(a.model, "model");
  require_field(a.pairs, "pairs");
  require_field(a.output, "output");
  require_output_dir(a.output, "output");
  ensemble::EnsembleScorer scorer(ensemble::load_model(io::read_file(a.model)));
  const auto pairs = io::read_pairs(a.pairs);
  const auto rows = io::to_outcomes(score_all(scorer, pairs));
  io::write_scores(a.output, rows);
  *ctx.out << "scored=" << rows.size() << " scorer=" << scorer.scorer_id() << "\n";
  return kExitOk;
}

} // namespace

CliContext CliContext::process() {
  CliContext ctx;
  ctx.out = &std::cout;
  ctx.err = &std::cerr;
  ctx.getenv = [](const std::string &name) -> std::optional<std::string> {
    if (const char *v = std::getenv(name.c_str()))
      return std::string(v);
    return std::nullopt;
  };
  return ctx;
}

int run(const std::vector<std::string> &args, CliContext &ctx) {
  CLI::App app{"Fuzzy entity matching: score, rerank, train and evaluate "
               "candidate string pairs.",
               "fuzzymatch"};
  app.require_subcommand(1);
  app.footer(kExitFooter);

  std::string config_path;
  auto add_config = [&](CLI::App *cmd) {
    cmd->add_option("--config", config_path, "JSON config file");
  };

  ScoreArgs score;
  auto *score_cmd = app.add_subcommand(
      "score", "Score every pair with a metric, an ensemble model or an LLM");
  score_cmd->add_option("-i,--pairs", score.pairs, "Input pairs CSV (left,right[,label])");
  score_cmd->add_option("-o,--output", score.output, "Output scores CSV");
  score_cmd->add_option("--metric", score.metric,
                        "Metric: levenshtein_sim, jaro, jaro_winkler, "
                        "jaccard_char, jaccard_bigram, cosine_letter_freq, "
                        "lcs_overlap");
  score_cmd->add_option("--model", score.model, "Ensemble model JSON");
  score_cmd->add_flag("--llm", score.use_llm, "Score with the LLM zero-shot prompt");
  score_cmd->add_flag("--case-fold", score.case_fold,
                      "Case-fold both strings before metric scoring");
  score_cmd->add_flag("--collapse-whitespace", score.collapse_ws,
                      "Collapse whitespace runs before metric scoring");
  add_llm_options(score_cmd, score.llm);
  add_config(score_cmd);
  score_cmd->footer(std::string(kLlmFooter) + "\n" + kExitFooter);

  EvalArgs ev;
  auto *eval_cmd = app.add_subcommand(
      "eval", "Average precision, PR curve and precision at full recall");
  eval_cmd->add_option("-s,--scores", ev.scores, "Labeled scores CSV");
  eval_cmd->add_option("-r,--report", ev.report, "Output report JSON");
  eval_cmd->add_option("--pr-curve", ev.pr_curve,
                       "Output PR-curve CSV (default: <report>.pr.csv)");
  eval_cmd->add_option("--leniency-count", ev.leniency,
                       "Leniency count to record in the report")
      ->capture_default_str();
  add_config(eval_cmd);
  eval_cmd->footer(kExitFooter);

  RerankArgs rr;
  auto *rerank_cmd = app.add_subcommand(
      "rerank", "Rank with a fast scorer, re-score the top-k with the LLM");
  rerank_cmd->add_option("-i,--pairs", rr.pairs, "Input pairs CSV");
  rerank_cmd->add_option("-o,--output", rr.output, "Output scores CSV");
  rerank_cmd->add_option("--stage1", rr.stage1, "Stage-1 metric")
      ->capture_default_str();
  rerank_cmd->add_option("--stage1-model", rr.stage1_model,
                         "Stage-1 ensemble model JSON (overrides --stage1)");
  rerank_cmd->add_option("--top-k", rr.top_k, "Pairs re-scored by the LLM")
      ->capture_default_str();
  rerank_cmd->add_option("--below-k", rr.below_k,
                         "Score for pairs below top-k: floor (0.0) or keep "
                         "(stage-1 score; mixes scales)")
      ->check(CLI::IsMember({"floor", "keep"}))
      ->capture_default_str();
  add_llm_options(rerank_cmd, rr.llm);
  add_config(rerank_cmd);
  rerank_cmd->footer(std::string(kLlmFooter) + "\n" + kExitFooter);

  TrainArgs tr;
  auto *train_cmd = app.add_subcommand(
      "train", "Train the distance-feature tree ensemble on labeled pairs");
  train_cmd->add_option("-i,--pairs", tr.pairs, "Labeled pairs CSV");
  train_cmd->add_option("-o,--model-out", tr.model_out, "Output model JSON");
  train_cmd->add_option("--trees", tr.config.n_trees, "Number of trees")
      ->capture_default_str();
  train_cmd->add_option("--max-depth", tr.config.max_depth, "Maximum tree depth")
      ->capture_default_str();
  train_cmd->add_option("--min-leaf", tr.config.min_leaf,
                        "Minimum samples per leaf")
      ->capture_default_str();
  train_cmd->add_option("--feature-subsample", tr.config.feature_subsample,
                        "Candidate features per split (1-8)")
      ->capture_default_str();
  train_cmd->add_option("--bootstrap", tr.config.bootstrap,
                        "Bootstrap-resample each tree (true/false)")
      ->capture_default_str();
  train_cmd->add_option("--positive-weight", tr.config.positive_weight,
                        "Weight of positive examples")
      ->capture_default_str();
  train_cmd->add_option("--seed", tr.config.seed, "Random seed")
      ->capture_default_str();
  add_config(train_cmd);
  train_cmd->footer(kExitFooter);

  PredictArgs pr;
  auto *predict_cmd = app.add_subcommand(
      "predict", "Score pairs with a trained ensemble model");
  predict_cmd->add_option("-m,--model", pr.model, "Model JSON");
  predict_cmd->add_option("-i,--pairs", pr.pairs, "Input pairs CSV");
  predict_cmd->add_option("-o,--output", pr.output, "Output scores CSV");
  add_config(predict_cmd);
  predict_cmd->footer(kExitFooter);

  std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rest.begin(), rest.end()); // CLI11 consumes from the back
  try {
    app.parse(rest);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, *ctx.out, *ctx.err);
    return code == 0 ? kExitOk : kExitFatal;
  }

  try {
    CLI::App *cmd = app.get_subcommands().front();
    merge_sources(app, *cmd, config_path, ctx);
    if (cmd == score_cmd)
      return cmd_score(score, ctx);
    if (cmd == eval_cmd)
      return cmd_eval(ev, ctx);
    if (cmd == rerank_cmd)
      return cmd_rerank(rr, ctx);
    if (cmd == train_cmd)
      return cmd_train(tr, ctx);
    return cmd_predict(pr, ctx);
  } catch (const Error &e) {
    *ctx.err << "error: " << e.what() << "\n";
  } catch (const std::exception &e) {
    *ctx.err << "fatal: " << e.what() << "\n";
  }
  return kExitFatal;
}

} // namespace fuzzymatch::cli
