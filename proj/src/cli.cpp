#include "balens/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "balens/dataset.hpp"
#include "balens/errors.hpp"
#include "balens/eval.hpp"
#include "balens/preprocess.hpp"
#include "balens/report.hpp"
#include "balens/synthetic.hpp"
#include "balens/text.hpp"

namespace balens {

namespace {

// ---- resolved-flag accessors ------------------------------------------------

const std::string& get_str(const CliInvocation& inv, const std::string& key) {
  const auto it = inv.flags.find(key);
  if (it == inv.flags.end()) throw ConfigInvalid("internal: flag '" + key + "' not resolved");
  return it->second;
}

const std::string& get_required(const CliInvocation& inv, const std::string& key,
                                const std::string& flag_name) {
  const std::string& value = get_str(inv, key);
  if (value.empty()) throw ConfigInvalid(flag_name + " is required");
  return value;
}

std::uint64_t get_u64(const CliInvocation& inv, const std::string& key) {
  const std::string& token = get_str(inv, key);
  std::uint64_t value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto res = std::from_chars(first, last, value);
  if (token.empty() || res.ec != std::errc() || res.ptr != last) {
    throw ConfigInvalid("'" + token + "' is not a valid non-negative integer for " + key);
  }
  return value;
}

std::size_t get_size(const CliInvocation& inv, const std::string& key) {
  return static_cast<std::size_t>(get_u64(inv, key));
}

int get_int(const CliInvocation& inv, const std::string& key) {
  const std::string& token = get_str(inv, key);
  int value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto res = std::from_chars(first, last, value);
  if (token.empty() || res.ec != std::errc() || res.ptr != last) {
    throw ConfigInvalid("'" + token + "' is not a valid integer for " + key);
  }
  return value;
}

double get_double(const CliInvocation& inv, const std::string& key) {
  const auto value = parse_double(get_str(inv, key));
  if (!value) {
    throw ConfigInvalid("'" + get_str(inv, key) + "' is not a valid number for " + key);
  }
  return *value;
}

bool get_bool(const CliInvocation& inv, const std::string& key) {
  const std::string& token = get_str(inv, key);
  if (token == "true") return true;
  if (token == "false") return false;
  throw ConfigInvalid("'" + token + "' is not a valid boolean for " + key);
}

std::vector<std::string> split_list(const std::string& joined) {
  std::vector<std::string> out;
  std::string current;
  for (char c : joined) {
    if (c == ',') {
      if (!current.empty()) out.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) out.push_back(current);
  return out;
}

// ---- precedence resolution --------------------------------------------------

// One command-line option feeding the resolved map.
struct FlagState {
  std::string key;
  const std::string* value = nullptr;
  const CLI::Option* option = nullptr;
};

std::string config_value_to_string(const nlohmann::json& value, const std::string& key) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  if (value.is_number_unsigned()) return std::to_string(value.get<std::uint64_t>());
  if (value.is_number_integer()) return std::to_string(value.get<std::int64_t>());
  if (value.is_number_float()) return format_double(value.get<double>());
  if (value.is_array()) {
    std::string joined;
    for (const auto& item : value) {
      if (!item.is_string()) {
        throw ConfigInvalid("config key '" + key + "' must be an array of strings");
      }
      if (!joined.empty()) joined += ',';
      joined += item.get<std::string>();
    }
    return joined;
  }
  throw ConfigInvalid("config key '" + key + "' has an unsupported value type");
}

// Applies config file, environment and explicit flags on top of defaults.
// The defaults map doubles as the set of keys the config file may supply.
std::map<std::string, std::string> resolve_flags(
    const std::map<std::string, std::string>& defaults, const std::string& config_path,
    const std::vector<FlagState>& flags, bool seed_accepts_env) {
  std::map<std::string, std::string> resolved = defaults;
  std::set<std::string> explicit_keys;

  if (!config_path.empty()) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw ConfigInvalid("cannot read config file " + config_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const nlohmann::json parsed = nlohmann::json::parse(buffer.str(), nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) {
      throw ConfigInvalid(config_path + " is not a JSON object");
    }
    for (const auto& [key, value] : parsed.items()) {
      if (defaults.find(key) == defaults.end()) {
        throw ConfigInvalid("config key '" + key + "' is not recognized here");
      }
      resolved[key] = config_value_to_string(value, key);
      explicit_keys.insert(key);
    }
  }

  for (const FlagState& fs : flags) {
    if (fs.option != nullptr && fs.option->count() > 0) {
      resolved[fs.key] = *fs.value;
      explicit_keys.insert(fs.key);
    }
  }

  // The environment seed only fills the gap; anything explicit wins.
  if (seed_accepts_env && explicit_keys.find("seed") == explicit_keys.end()) {
    if (const char* env = std::getenv("BALENS_SEED")) {
      std::uint64_t value = 0;
      const char* last = env + std::string_view(env).size();
      const auto res = std::from_chars(env, last, value);
      if (*env == '\0' || res.ec != std::errc() || res.ptr != last) {
        throw ConfigInvalid("BALENS_SEED='" + std::string(env) + "' is not a valid seed");
      }
      resolved["seed"] = env;
    }
  }
  return resolved;
}

// ---- shared output helpers --------------------------------------------------

std::string pad_left(const std::string& text, std::size_t width) {
  if (text.size() >= width) return text;
  return std::string(width - text.size(), ' ') + text;
}

std::string pad_right(const std::string& text, std::size_t width) {
  if (text.size() >= width) return text;
  return text + std::string(width - text.size(), ' ');
}

void print_metrics_table(std::ostream& out, const EvalReport& report) {
  // Fixed column set; precision and F1 are the macro averages.
  out << pad_right("Classifier", 14) << pad_left("Accuracy", 10)
      << pad_left("Balanced Accuracy", 19) << pad_left("Recall", 8) << pad_left("Precision", 11)
      << pad_left("F1-Score", 10) << "\n";
  for (const ClassifierReport& cr : report.classifiers) {
    const MetricsRecord& m = cr.mean;
    out << pad_right(display_label(cr.kind), 14) << pad_left(format_fixed(m.accuracy, 3), 10)
        << pad_left(format_fixed(m.balanced_accuracy, 3), 19)
        << pad_left(format_fixed(m.recall, 3), 8)
        << pad_left(format_fixed(m.precision_macro, 3), 11)
        << pad_left(format_fixed(m.f1_macro, 3), 10) << "\n";
  }
}

LoadOptions load_options_from(const CliInvocation& inv) {
  LoadOptions options;
  options.target_column = get_str(inv, "target");
  for (const std::string& name : split_list(get_str(inv, "categorical_columns"))) {
    options.categorical_columns.insert(name);
  }
  return options;
}

}  // namespace

// ---- subcommands ------------------------------------------------------------

int cmd_synth(const CliInvocation& inv, std::ostream& out) {
  SynthSpec spec;
  spec.n = get_size(inv, "n");
  spec.p_numeric = get_size(inv, "numeric");
  spec.p_categorical = get_size(inv, "categorical");
  spec.positive_rate = get_double(inv, "positive_rate");
  spec.class_separation = get_double(inv, "separation");
  spec.missing_rate = get_double(inv, "missing_rate");
  spec.seed = get_u64(inv, "seed");

  const Dataset ds = generate_synthetic(spec);
  const std::string& path = get_str(inv, "out");
  write_csv(ds, path, get_str(inv, "target"));

  std::size_t positives = 0;
  for (int label : ds.labels()) positives += static_cast<std::size_t>(label);
  out << "wrote " << path << ": " << ds.rows() << " rows, " << ds.cols() << " features, "
      << positives << " positive ("
      << format_fixed(100.0 * static_cast<double>(positives) / static_cast<double>(ds.rows()), 1)
      << "%)\n";
  return 0;
}

int cmd_preprocess(const CliInvocation& inv, std::ostream& out) {
  const std::string& input = get_required(inv, "input", "--input");
  const Dataset ds = load_csv(input, load_options_from(inv));
  const double threshold = get_double(inv, "threshold");
  const std::uint64_t seed = get_u64(inv, "seed");

  const ImputationPlan plan = fit_preprocessor(ds, threshold, seed);
  const Dataset imputed = apply_imputation(ds, plan);
  const EncodedMatrix encoded = one_hot_encode(imputed);

  namespace fs = std::filesystem;
  const fs::path out_dir(get_str(inv, "out"));
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  const std::string& target = get_str(inv, "target");
  std::vector<std::string> header;
  for (const EncodedColumn& col : encoded.columns) header.push_back(col.name);
  header.push_back(target);
  std::vector<std::vector<std::string>> records;
  records.reserve(encoded.rows);
  for (std::size_t r = 0; r < encoded.rows; ++r) {
    std::vector<std::string> record;
    record.reserve(encoded.cols + 1);
    for (std::size_t c = 0; c < encoded.cols; ++c) record.push_back(format_double(encoded.at(r, c)));
    record.push_back(encoded.labels[r] == 1 ? "1" : "0");
    records.push_back(std::move(record));
  }
  write_csv_file((out_dir / "encoded.csv").string(), header, records);

  nlohmann::ordered_json sidecar;
  sidecar["input"] = input;
  sidecar["target"] = target;
  sidecar["threshold"] = threshold;
  sidecar["seed"] = seed;
  nlohmann::ordered_json dropped = nlohmann::ordered_json::array();
  for (std::size_t index : plan.dropped) dropped.push_back(ds.schema()[index].name);
  sidecar["dropped"] = std::move(dropped);
  nlohmann::ordered_json fills = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < plan.retained.size(); ++i) {
    const FeatureSpec& spec = ds.schema()[plan.retained[i]];
    nlohmann::ordered_json fill;
    fill["feature"] = spec.name;
    if (spec.kind == FeatureKind::Numeric) {
      fill["kind"] = "numeric";
      fill["value"] = plan.fills[i].number;
    } else {
      fill["kind"] = "categorical";
      fill["value"] = plan.fills[i].token;
    }
    fills.push_back(std::move(fill));
  }
  sidecar["fills"] = std::move(fills);
  sidecar["fallback_features"] = plan.fallback_features;
  nlohmann::ordered_json columns = nlohmann::ordered_json::array();
  for (const EncodedColumn& col : encoded.columns) {
    nlohmann::ordered_json entry;
    entry["name"] = col.name;
    entry["source"] = col.origin.name;
    entry["category"] = col.category;
    columns.push_back(std::move(entry));
  }
  sidecar["columns"] = std::move(columns);
  std::ofstream sidecar_out(out_dir / "preprocess.json", std::ios::binary);
  if (!sidecar_out) throw IoError("cannot open " + (out_dir / "preprocess.json").string());
  sidecar_out << sidecar.dump(2) << "\n";
  sidecar_out.flush();
  if (!sidecar_out) throw IoError("write failed: " + (out_dir / "preprocess.json").string());

  out << "kept " << plan.retained.size() << " of " << ds.cols() << " features ("
      << plan.dropped.size() << " dropped); encoded " << encoded.rows << " x " << encoded.cols
      << " -> " << out_dir.string() << "\n";
  return 0;
}

int cmd_evaluate(const CliInvocation& inv, std::ostream& out) {
  const std::string& input = get_required(inv, "input", "--input");

  ExperimentConfig config;
  config.folds = get_size(inv, "folds");
  config.seed = get_u64(inv, "seed");
  config.paper_mode = get_bool(inv, "paper_mode");
  config.missingness_threshold = get_double(inv, "threshold");
  config.dataset_source = input;
  const std::vector<std::string> tokens = split_list(get_str(inv, "classifiers"));
  if (!tokens.empty()) {
    config.classifiers.clear();
    for (const std::string& token : tokens) config.classifiers.push_back(kind_from_cli_token(token));
  }
  const std::size_t estimators = get_size(inv, "estimators");
  if (estimators > 0) {
    for (EnsembleKind kind : config.classifiers) {
      Hyperparams hp = default_hyperparams(kind);
      hp.n_estimators = estimators;
      config.hyperparams[kind] = hp;
    }
  }

  const Dataset ds = load_csv(input, load_options_from(inv));
  const EvalReport report = run_experiment(config, ds, get_int(inv, "threads"));
  write_report(report, get_str(inv, "out"));
  print_metrics_table(out, report);
  return 0;
}

int cmd_report(const CliInvocation& inv, std::ostream& out) {
  const std::string& eval_dir = get_required(inv, "in", "--in");
  std::string out_dir = get_str(inv, "out");
  if (out_dir.empty()) out_dir = eval_dir;
  const EnsembleKind kind = kind_from_cli_token(get_str(inv, "classifier"));
  write_report_assets(eval_dir, out_dir, kind, get_size(inv, "top"));
  out << "wrote " << out_dir << "/roc.svg and " << out_dir << "/top_features.txt\n";
  return 0;
}

// ---- driver -----------------------------------------------------------------

namespace {

struct SubcommandSetup {
  CLI::App* app = nullptr;
  std::map<std::string, std::string> defaults;
  std::vector<FlagState> flags;
  std::string config_path;
  // Storage referenced by FlagState entries; node-based so addresses hold.
  std::map<std::string, std::string> storage;
  std::vector<std::string> classifier_tokens;
  bool paper_mode = false;
  std::string classifiers_joined;
  std::string paper_mode_value;
};

void add_flag_option(SubcommandSetup& setup, const std::string& flag_name,
                     const std::string& key, const std::string& description) {
  std::string& slot = setup.storage[key];
  CLI::Option* opt = setup.app->add_option(flag_name, slot, description);
  setup.flags.push_back({key, &slot, opt});
}

void add_config_option(SubcommandSetup& setup) {
  setup.app->add_option("--config", setup.config_path,
                        "JSON file supplying any of this subcommand's options");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Imbalanced-cohort ensemble benchmark: synthesize, preprocess, evaluate, report"};
  app.name("balens");
  app.require_subcommand(1);

  SubcommandSetup synth;
  synth.app = app.add_subcommand("synth", "Generate a synthetic cohort CSV");
  synth.defaults = {
      {"n", ""},          {"numeric", "20"},      {"categorical", "2"},
      {"positive_rate", "0.1"}, {"separation", "1"}, {"missing_rate", "0"},
      {"seed", "0"},      {"target", "dropout"},  {"out", "cohort.csv"},
  };
  add_flag_option(synth, "--n", "n", "Number of rows (required)");
  add_flag_option(synth, "--numeric", "numeric", "Numeric feature count");
  add_flag_option(synth, "--categorical", "categorical", "Categorical feature count");
  add_flag_option(synth, "--positive-rate", "positive_rate", "Positive class fraction");
  add_flag_option(synth, "--separation", "separation", "Class separation strength");
  add_flag_option(synth, "--missing-rate", "missing_rate", "Fraction of cells blanked");
  add_flag_option(synth, "--seed", "seed", "Generator seed");
  add_flag_option(synth, "--target", "target", "Target column name");
  add_flag_option(synth, "--out", "out", "Output CSV path");
  add_config_option(synth);

  SubcommandSetup preprocess;
  preprocess.app = app.add_subcommand("preprocess", "Filter, impute and one-hot encode a CSV");
  preprocess.defaults = {
      {"input", ""},     {"target", "dropout"}, {"categorical_columns", ""},
      {"threshold", "0.3"}, {"seed", "0"},      {"out", "preprocessed"},
  };
  add_flag_option(preprocess, "--input", "input", "Input CSV (required)");
  add_flag_option(preprocess, "--target", "target", "Target column name");
  add_flag_option(preprocess, "--categorical-columns", "categorical_columns",
                  "Comma-separated categorical column names");
  add_flag_option(preprocess, "--threshold", "threshold",
                  "Missingness fraction above which a feature is dropped");
  add_flag_option(preprocess, "--seed", "seed", "Seed for the balancing undersample");
  add_flag_option(preprocess, "--out", "out", "Output directory");
  add_config_option(preprocess);

  SubcommandSetup evaluate;
  evaluate.app = app.add_subcommand("evaluate", "Cross-validated benchmark of the ensembles");
  evaluate.defaults = {
      {"input", ""},      {"target", "dropout"}, {"categorical_columns", ""},
      {"out", "eval_out"}, {"folds", "6"},       {"seed", "0"},
      {"threads", "0"},   {"paper_mode", "false"}, {"threshold", "0.3"},
      {"classifiers", ""}, {"estimators", "0"},
  };
  add_flag_option(evaluate, "--input", "input", "Input CSV (required)");
  add_flag_option(evaluate, "--target", "target", "Target column name");
  add_flag_option(evaluate, "--categorical-columns", "categorical_columns",
                  "Comma-separated categorical column names");
  add_flag_option(evaluate, "--out", "out", "Output directory");
  add_flag_option(evaluate, "--folds", "folds", "Stratified fold count");
  add_flag_option(evaluate, "--seed", "seed", "Experiment seed");
  add_flag_option(evaluate, "--threads", "threads", "Worker threads (0 = available cores)");
  add_flag_option(evaluate, "--threshold", "threshold",
                  "Missingness fraction above which a feature is dropped");
  add_flag_option(evaluate, "--estimators", "estimators",
                  "Override every classifier's member count (0 = defaults)");
  evaluate.app->add_flag("--paper-mode", evaluate.paper_mode,
                         "Fit imputation once on the full dataset instead of per training fold");
  evaluate.app
      ->add_option("--classifier", evaluate.classifier_tokens,
                   "Classifier to run (easy, rusboost, bagging, brf); repeatable")
      ->delimiter(',');
  add_config_option(evaluate);

  SubcommandSetup report_cmd;
  report_cmd.app = app.add_subcommand("report", "Render ROC plot and feature ranking");
  report_cmd.defaults = {
      {"in", ""}, {"out", ""}, {"classifier", "brf"}, {"top", "20"},
  };
  add_flag_option(report_cmd, "--in", "in", "Evaluation output directory (required)");
  add_flag_option(report_cmd, "--out", "out", "Output directory (default: same as --in)");
  add_flag_option(report_cmd, "--classifier", "classifier",
                  "Classifier to render (easy, rusboost, bagging, brf)");
  add_flag_option(report_cmd, "--top", "top", "Feature count in top_features.txt");
  add_config_option(report_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    CliInvocation inv;
    if (app.got_subcommand(synth.app)) {
      inv.subcommand = Subcommand::synth;
      inv.flags = resolve_flags(synth.defaults, synth.config_path, synth.flags, true);
      inv.exit_code = cmd_synth(inv, out);
    } else if (app.got_subcommand(preprocess.app)) {
      inv.subcommand = Subcommand::preprocess;
      inv.flags = resolve_flags(preprocess.defaults, preprocess.config_path, preprocess.flags, true);
      inv.exit_code = cmd_preprocess(inv, out);
    } else if (app.got_subcommand(evaluate.app)) {
      inv.subcommand = Subcommand::evaluate;
      // The repeatable --classifier and the --paper-mode switch funnel into
      // the same string map as everything else.
      std::string joined;
      for (const std::string& token : evaluate.classifier_tokens) {
        if (!joined.empty()) joined += ',';
        joined += token;
      }
      evaluate.classifiers_joined = joined;
      evaluate.paper_mode_value = evaluate.paper_mode ? "true" : "false";
      evaluate.flags.push_back({"classifiers", &evaluate.classifiers_joined,
                                evaluate.app->get_option("--classifier")});
      evaluate.flags.push_back(
          {"paper_mode", &evaluate.paper_mode_value, evaluate.app->get_option("--paper-mode")});
      inv.flags = resolve_flags(evaluate.defaults, evaluate.config_path, evaluate.flags, true);
      inv.exit_code = cmd_evaluate(inv, out);
    } else {
      inv.subcommand = Subcommand::report;
      inv.flags = resolve_flags(report_cmd.defaults, report_cmd.config_path, report_cmd.flags,
                                false);
      inv.exit_code = cmd_report(inv, out);
    }
    return inv.exit_code;
  } catch (const ConfigInvalid& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const SpecInvalid& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> with_program;
  with_program.reserve(args.size() + 1);
  with_program.push_back("balens");
  with_program.insert(with_program.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(with_program.size());
  for (const std::string& arg : with_program) argv.push_back(arg.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace balens
