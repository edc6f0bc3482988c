#include "csaug/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "csaug/augment.hpp"
#include "csaug/chunker.hpp"
#include "csaug/corpus.hpp"
#include "csaug/families.hpp"
#include "csaug/toymodel/joint_model.hpp"
#include "csaug/toymodel/model_io.hpp"
#include "csaug/toymodel/synthetic.hpp"
#include "csaug/toymodel/transfer.hpp"

namespace csaug::cli {

namespace {

// Raised for bad argument combinations that CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const CLI::Validator kPositive(
    [](std::string& value) -> std::string {
      long long n = 0;
      if (!CLI::detail::lexical_cast(value, n) || n < 1) return "must be a positive integer, got '" + value + "'";
      return {};
    },
    "POSITIVE");

// Config keys outside any [section] belong to the subcommand being run.
class SubcommandConfig : public CLI::ConfigTOML {
 public:
  explicit SubcommandConfig(std::string subcommand) : subcommand_(std::move(subcommand)) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    auto items = CLI::ConfigTOML::from_config(input);
    if (subcommand_.empty()) return items;
    for (auto& item : items) {
      if (item.parents.empty()) item.parents.push_back(subcommand_);
    }
    return items;
  }

 private:
  std::string subcommand_;
};

// Wraps failures while building the translation provider.
struct ProviderSetupError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::set<std::string> split_list(const std::vector<std::string>& items) {
  std::set<std::string> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.insert(part);
    }
  }
  return out;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

struct InputArgs {
  std::string path;
  std::string format = "multiatis-tsv";
  bool repair = false;
  std::string language = "en";

  Dataset load() const {
    ReadOptions options;
    options.format = parse_format(format);
    options.repair = repair;
    options.language = language;
    return read_dataset(path, options);
  }
};

void add_input(CLI::App* cmd, InputArgs& in, bool positional) {
  if (positional) {
    cmd->add_option("file", in.path, "Dataset file")->required();
  } else {
    cmd->add_option("-i,--input", in.path, "Input dataset file")->required();
  }
  cmd->add_option("--format", in.format, "Dataset format: multiatis-tsv or conll")->capture_default_str();
  cmd->add_flag("--repair", in.repair, "Rewrite illegal I-x labels to B-x instead of failing");
}

// ---------------------------------------------------------------------------

struct AugmentArgs {
  InputArgs input;
  std::string output;
  std::string output_format;
  std::string level = "chunk";
  std::size_t k = 5;
  std::string provider;
  std::vector<std::string> allow;
  std::vector<std::string> exclude;
  std::string family;
  std::uint64_t seed = 0;
  bool include_original = true;
  std::size_t workers = 1;
  std::string audit;
  std::string cache_dir;
  bool dry_run = false;
};

int cmd_augment(const AugmentArgs& a, CLI::App& cmd, std::ostream& out, std::ostream& err) {
  err << "effective config:\n";
  for (const auto* opt : cmd.get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") continue;
    std::string value;
    if (opt->get_lnames().front() == "include-original") {
      value = a.include_original ? "true" : "false";
    } else if (opt->get_expected_max() == 0) {
      value = opt->count() > 0 ? "true" : "false";
    } else {
      value = join(opt->results(), ",");
      if (value.empty()) value = opt->get_default_str();
    }
    err << "  " << opt->get_lnames().front() << " = " << value << '\n';
  }

  AugmentationConfig cfg;
  cfg.level = parse_level(a.level);
  cfg.k = a.k;
  cfg.allowed_languages = split_list(a.allow);
  cfg.excluded_languages = split_list(a.exclude);
  if (!a.family.empty()) cfg.family = a.family;
  cfg.include_original = a.include_original;
  cfg.seed = a.seed;

  const Dataset ds = a.input.load();

  std::shared_ptr<const TranslationProvider> provider;
  if (!a.provider.empty()) {
    try {
      std::optional<std::filesystem::path> cache;
      if (!a.cache_dir.empty()) cache = a.cache_dir;
      provider = make_provider(a.provider, cache);
    } catch (const Error& e) {
      throw ProviderSetupError(e.what());
    }
  }

  if (a.dry_run) {
    const auto languages = resolve_languages(cfg, provider.get(), ds.language);
    const auto plans = plan_dataset(ds, cfg, languages);
    std::size_t calls = 0;
    for (const auto& [id, plan] : plans) {
      for (const auto& unit : plan.units) {
        const auto& chunk = plan.chunks[unit.chunk_index];
        out << id << '\t' << unit.start << ".." << unit.end << '\t' << chunk.slot_type.value_or("O") << '\t'
            << unit.language << '\n';
        if (unit.language != ds.language) ++calls;
      }
    }
    err << "dry run: " << plans.size() << " code-switched copies, " << calls << " translation calls over "
        << languages.size() << " languages (" << join(languages, ",") << ")\n";
    return kOk;
  }
  if (a.output.empty()) throw UsageError("--output is required unless --dry-run is given");
  if (a.provider.empty()) throw UsageError("--provider is required unless --dry-run is given");

  AugmentOptions options;
  options.workers = a.workers;
  const auto result = augment_dataset(ds, cfg, *provider, options);

  const auto out_format = a.output_format.empty() ? parse_format(a.input.format) : parse_format(a.output_format);
  write_dataset(result.dataset, a.output, out_format);
  if (!a.audit.empty()) {
    std::ofstream audit(a.audit, std::ios::binary | std::ios::trunc);
    for (const auto& r : result.records) audit << audit_line(r, cfg.level) << '\n';
    if (!audit) throw Error(ErrorCode::IoFailure, "cannot write audit log '" + a.audit + "'");
  }
  err << "wrote " << result.dataset.size() << " utterances to " << a.output << " (n=" << ds.size()
      << ", k=" << cfg.k << ", originals " << (cfg.include_original ? "included" : "excluded") << ")\n";
  return kOk;
}

int cmd_stats(const InputArgs& in, std::ostream& out, std::ostream& err) {
  const auto ds = in.load();
  const auto s = compute_stats(ds);
  out << "utterances\ttokens\tintents\tslot_types\tslot_tags\n"
      << s.utterance_count << '\t' << s.token_count << '\t' << s.intent_count << '\t' << s.slot_type_count << '\t'
      << s.slot_tag_count << '\n';
  err << in.path << ": " << s.utterance_count << " utterances, " << s.token_count << " tokens, " << s.intent_count
      << " intents, " << s.slot_type_count << " slot types (" << s.slot_tag_count << " B-/I- tags)\n";
  return kOk;
}

int cmd_validate(const InputArgs& in, std::ostream& out, std::ostream& err) {
  const auto ds = in.load();
  out << "ok\t" << ds.size() << '\n';
  err << in.path << ": valid, " << ds.size() << " utterances\n";
  return kOk;
}

int cmd_chunks(const InputArgs& in, std::ostream& out, std::ostream&) {
  const auto ds = in.load();
  for (const auto& u : ds.utterances) {
    out << "# " << u.id << '\n';
    for (const auto& c : slot_chunks(u)) {
      out << c.start << ".." << c.end << '\t' << c.slot_type.value_or("O") << '\t' << c.text() << '\n';
    }
  }
  return kOk;
}

int cmd_families(std::ostream& out, std::ostream& err) {
  for (const auto& f : family_registry()) out << f.name << '\t' << f.display_name << '\t' << join(f.members, ",") << '\n';
  err << family_registry().size() << " language families\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct ToyTrainArgs {
  InputArgs input;
  std::string dev;
  std::string model;
  toy::JointTrainingConfig training;
  std::size_t dim = 4096;
  std::size_t ngram = 3;
};

int cmd_toy_train(const ToyTrainArgs& a, std::ostream& out, std::ostream& err) {
  const auto ds = a.input.load();
  std::optional<Dataset> dev;
  if (!a.dev.empty()) {
    InputArgs dev_in = a.input;
    dev_in.path = a.dev;
    dev = dev_in.load();
  }
  auto model = toy::make_model<double>(ds, toy::FeatureExtractor(a.dim, a.ngram));
  const auto history = toy::train(model, ds, a.training, dev ? &*dev : nullptr);
  toy::save_model(model, a.model);

  out << "epoch\ttrain_loss" << (history.dev_loss.empty() ? "" : "\tdev_loss") << '\n';
  out << std::setprecision(10);
  for (std::size_t e = 0; e < history.train_loss.size(); ++e) {
    out << e << '\t' << history.train_loss[e];
    if (!history.dev_loss.empty()) out << '\t' << history.dev_loss[e];
    out << '\n';
  }
  const auto report = toy::evaluate(model, ds);
  err << "trained on " << ds.size() << " utterances; best epoch " << history.best_epoch
      << (history.stopped_early ? " (early stop)" : "") << "; training intent accuracy " << report.intent_accuracy
      << ", slot F1 " << report.slot_f1() << "; model saved to " << a.model << '\n';
  return kOk;
}

int cmd_toy_eval(const InputArgs& in, const std::string& model_path, bool tables, std::ostream& out,
                 std::ostream& err) {
  const auto model = toy::load_model(std::filesystem::path(model_path));
  const auto ds = in.load();
  const auto report = toy::evaluate(model, ds);
  out << std::setprecision(6) << std::fixed;
  out << "intent_accuracy\tslot_f1\ttoken_f1\n"
      << report.intent_accuracy << '\t' << report.slot_f1() << '\t' << report.token_f1() << '\n';
  if (tables) {
    out << "\nintent\tcorrect\ttotal\taccuracy\n";
    for (const auto& [intent, t] : report.per_intent) {
      out << intent << '\t' << t.correct << '\t' << t.total << '\t' << t.accuracy() << '\n';
    }
    out << "\nslot_type\tprecision\trecall\tf1\n";
    for (const auto& [type, c] : report.per_slot_type) {
      out << type << '\t' << c.precision() << '\t' << c.recall() << '\t' << c.f1() << '\n';
    }
  }
  err << in.path << ": intent accuracy " << report.intent_accuracy << ", slot span F1 " << report.slot_f1() << '\n';
  return kOk;
}

int cmd_toy_generate(const toy::SyntheticCorpusSpec& spec, const std::string& dir, std::ostream& out,
                     std::ostream& err) {
  const auto corpus = toy::generate_synthetic(spec);
  corpus.write(dir);
  for (const auto& [family, members] : corpus.families) out << family << '\t' << join(members, ",") << '\n';
  err << "wrote " << corpus.languages.size() << " languages x 3 splits of " << spec.utterances_per_split
      << " utterances and " << corpus.lexicons.size() << " lexicons to " << dir << " (source language "
      << corpus.source_language() << ")\n";
  return kOk;
}

int cmd_toy_experiment(const toy::TransferExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto summary = toy::run_transfer_experiment(cfg);
  out << std::setprecision(6) << std::fixed;
  out << "seed\ttarget\tbaseline_intent\tcs_intent\tbaseline_slot_f1\tcs_slot_f1\n";
  for (const auto& r : summary.runs) {
    out << r.seed << '\t' << r.target << '\t' << r.baseline_intent_accuracy << '\t' << r.switched_intent_accuracy
        << '\t' << r.baseline_slot_f1 << '\t' << r.switched_slot_f1 << '\n';
  }
  out << "mean\t*\t" << summary.mean_baseline_intent << '\t' << summary.mean_switched_intent << '\t'
      << summary.mean_baseline_slot_f1 << '\t' << summary.mean_switched_slot_f1 << '\n';
  err << "intent accuracy margin (code-switched - baseline): " << summary.intent_margin() << '\n';
  return kOk;
}

int exit_code_for(const Error& e) {
  if (const auto* agg = dynamic_cast<const AugmentationError*>(&e)) {
    return agg->any_provider_failure() ? kProviderError : kDataError;
  }
  if (is_provider_error(e.code())) return kProviderError;
  if (e.code() == ErrorCode::ConfigurationError || e.code() == ErrorCode::UnknownFamily ||
      e.code() == ErrorCode::UnknownFormat) {
    return kUsageError;
  }
  return kDataError;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multilingual code-switching augmentation for intent/slot corpora", "csaug"};
  app.require_subcommand(1);
  app.fallthrough();
  app.allow_config_extras(CLI::config_extras_mode::error);

  AugmentArgs aug;
  auto* augment = app.add_subcommand("augment", "Write k code-switched copies of every utterance");
  add_input(augment, aug.input, false);
  augment->add_option("--source-lang", aug.input.language, "Language of the input dataset")->capture_default_str();
  augment->add_option("-o,--output", aug.output, "Output dataset file");
  augment->add_option("--output-format", aug.output_format, "Output format (defaults to --format)");
  augment->add_option("--level", aug.level, "Switching level: chunk, word or sentence")
      ->check(CLI::IsMember({"chunk", "word", "sentence"}))
      ->capture_default_str();
  augment->add_option("--k", aug.k, "Code-switched copies per utterance")
      ->check(kPositive)
      ->capture_default_str();
  augment->add_option("--provider", aug.provider, "lex:<directory> or http:<base-url>");
  augment->add_option("--allow", aug.allow, "Comma-separated sampling pool (default: all provider languages)");
  augment->add_option("--exclude", aug.exclude, "Comma-separated languages never switched into");
  augment->add_option("--family", aug.family, "Sample only from this language family");
  augment->add_option("--seed", aug.seed, "Random seed")->capture_default_str();
  augment->add_flag("--include-original,!--no-original", aug.include_original,
                    "Keep the source utterances ahead of the copies");
  augment->add_option("--workers", aug.workers, "Parallel workers")->check(kPositive)->capture_default_str();
  augment->add_option("--audit", aug.audit, "Write a JSON-lines audit record per copy");
  augment->add_option("--cache-dir", aug.cache_dir, "Persistent translation cache directory");
  augment->add_flag("--dry-run", aug.dry_run, "Print the sampled language plan without translating");

  InputArgs stats_in;
  auto* stats = app.add_subcommand("stats", "Print utterance, token, intent and slot counts");
  add_input(stats, stats_in, true);

  InputArgs validate_in;
  auto* validate = app.add_subcommand("validate", "Check a dataset file");
  add_input(validate, validate_in, true);

  InputArgs chunks_in;
  auto* chunks = app.add_subcommand("chunks", "Print the slot-chunk decomposition of every utterance");
  add_input(chunks, chunks_in, true);

  auto* families = app.add_subcommand("families", "List the built-in language families");

  ToyTrainArgs tt;
  auto* toy_train = app.add_subcommand("toy-train", "Train the linear joint intent/slot model");
  add_input(toy_train, tt.input, false);
  toy_train->add_option("--dev", tt.dev, "Dev set for early stopping");
  toy_train->add_option("-m,--model", tt.model, "Where to save the model")->required();
  toy_train->add_option("--alpha", tt.training.alpha, "Intent loss weight")->capture_default_str();
  toy_train->add_option("--beta", tt.training.beta, "Slot loss weight")->capture_default_str();
  toy_train->add_option("--lr", tt.training.learning_rate, "Learning rate")->capture_default_str();
  toy_train->add_option("--epochs", tt.training.epochs, "Epochs")->capture_default_str();
  toy_train->add_option("--batch-size", tt.training.batch_size, "Mini-batch size")->capture_default_str();
  toy_train->add_option("--patience", tt.training.patience, "Early-stopping patience")->capture_default_str();
  toy_train->add_option("--seed", tt.training.seed, "Shuffle seed")->capture_default_str();
  toy_train->add_option("--dim", tt.dim, "Hash dimension")->check(kPositive)->capture_default_str();
  toy_train->add_option("--ngram", tt.ngram, "Character n-gram size")->check(kPositive)->capture_default_str();

  InputArgs te_in;
  std::string te_model;
  bool te_tables = false;
  auto* toy_eval = app.add_subcommand("toy-eval", "Score a trained toy model on a dataset");
  add_input(toy_eval, te_in, false);
  toy_eval->add_option("-m,--model", te_model, "Trained model file")->required();
  toy_eval->add_flag("--tables", te_tables, "Also print per-intent and per-slot-type tables");

  toy::SyntheticCorpusSpec gen_spec;
  std::string gen_dir;
  auto* toy_generate = app.add_subcommand("toy-generate", "Write a synthetic parallel corpus with lexicons");
  toy_generate->add_option("--out-dir", gen_dir, "Output directory")->required();
  toy_generate->add_option("--seed", gen_spec.seed, "Generator seed")->capture_default_str();
  toy_generate->add_option("--utterances", gen_spec.utterances_per_split, "Utterances per language and split")
      ->check(kPositive)
      ->capture_default_str();
  toy_generate->add_option("--families", gen_spec.families, "Language families")->capture_default_str();
  toy_generate->add_option("--languages-per-family", gen_spec.languages_per_family, "Languages per family")
      ->capture_default_str();

  toy::TransferExperimentConfig exp;
  exp.corpus.utterances_per_split = 200;
  auto* toy_experiment =
      app.add_subcommand("toy-experiment", "Compare source-only and code-switched training on synthetic data");
  toy_experiment->add_option("--seeds", exp.seeds, "Seeds (space or comma separated)")->delimiter(',');
  toy_experiment->add_option("--utterances", exp.corpus.utterances_per_split, "Utterances per split")
      ->capture_default_str();
  toy_experiment->add_option("--k", exp.k, "Code-switched copies per utterance")
      ->check(kPositive)
      ->capture_default_str();

  std::string selected;
  for (int i = 1; i < argc; ++i) {
    if (argv[i][0] != '-' && app.get_subcommand_no_throw(argv[i]) != nullptr) {
      selected = argv[i];
      break;
    }
  }
  app.set_config("--config", "", "TOML-style key = value file for the subcommand; flags override it");
  app.config_formatter(std::make_shared<SubcommandConfig>(selected));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (augment->parsed()) return cmd_augment(aug, *augment, out, err);
    if (stats->parsed()) return cmd_stats(stats_in, out, err);
    if (validate->parsed()) return cmd_validate(validate_in, out, err);
    if (chunks->parsed()) return cmd_chunks(chunks_in, out, err);
    if (families->parsed()) return cmd_families(out, err);
    if (toy_train->parsed()) return cmd_toy_train(tt, out, err);
    if (toy_eval->parsed()) return cmd_toy_eval(te_in, te_model, te_tables, out, err);
    if (toy_generate->parsed()) return cmd_toy_generate(gen_spec, gen_dir, out, err);
    if (toy_experiment->parsed()) return cmd_toy_experiment(exp, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ProviderSetupError& e) {
    err << "provider error: " << e.what() << '\n';
    return kProviderError;
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}

}  // namespace csaug::cli
