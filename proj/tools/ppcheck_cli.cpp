// ppcheck: privacy-policy compliance checker for simulated app packages.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ppcheck/corpus_gen.hpp"
#include "ppcheck/lexicon_default.hpp"
#include "ppcheck/mapping_default.hpp"
#include "ppcheck/pipeline.hpp"

namespace {

struct CommonOpts {
  std::string mapping_path;
  std::string models_dir;
  std::string lexicon_path;
  bool oracle = false;
  std::string report_out;
  std::size_t ma = ppcheck::kDefaultMaxActions;
  int tr6_timeout = ppcheck::kDefaultTr6TimeoutSeconds;
  std::uint64_t seed = 7;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--mapping", o.mapping_path,
                  "PSI mapping file (default: built-in store)");
  cmd->add_option("--models", o.models_dir, "trained model directory");
  cmd->add_option("--lexicon", o.lexicon_path,
                  "CR keyword lexicon file (default: built-in)");
  cmd->add_flag("--oracle", o.oracle,
                "use rule-based oracle classifiers instead of models");
  cmd->add_option("--report-out", o.report_out,
                  "write the report here instead of stdout");
  cmd->add_option("--ma", o.ma, "maximum exploration actions");
  cmd->add_option("--tr6-timeout", o.tr6_timeout, "TR6 timeout in seconds");
  cmd->add_option("--seed", o.seed, "random seed");
}

ppcheck::MappingStore resolve_mapping(const CommonOpts& o) {
  return o.mapping_path.empty() ? ppcheck::default_mapping_store()
                                : ppcheck::load_mapping(o.mapping_path);
}

ppcheck::KeywordLexicon resolve_lexicon(const CommonOpts& o) {
  return o.lexicon_path.empty() ? ppcheck::default_lexicon()
                                : ppcheck::load_lexicon(o.lexicon_path);
}

ppcheck::PipelineModels resolve_models(const CommonOpts& o) {
  ppcheck::KeywordLexicon lex = resolve_lexicon(o);
  if (o.oracle || o.models_dir.empty()) {
    return ppcheck::oracle_models(std::move(lex));
  }
  return ppcheck::learned_models(o.models_dir, std::move(lex));
}

void emit(const nlohmann::json& doc, const std::string& report_out) {
  if (report_out.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::ofstream out(report_out);
    if (!out) {
      throw ppcheck::Error(ppcheck::ErrorCode::MissingFile, report_out);
    }
    out << doc.dump(2) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"privacy-policy compliance checker for simulated app packages"};
  app.require_subcommand(1);

  CommonOpts ao;
  std::string pkg_dir;
  auto* analyze = app.add_subcommand("analyze", "analyze one app package");
  analyze->add_option("pkg-dir", pkg_dir, "package directory")->required();
  add_common(analyze, ao);

  CommonOpts bo;
  std::string corpus_dir;
  unsigned jobs = 1;
  auto* batch = app.add_subcommand("batch", "analyze a corpus of packages");
  batch->add_option("corpus-dir", corpus_dir, "directory of package dirs")
      ->required();
  add_common(batch, bo);
  batch->add_option("--jobs", jobs, "parallel workers");

  std::string train_task = "all";
  std::string train_corpus;
  std::string train_out;
  std::uint64_t train_seed = 7;
  std::string train_lexicon;
  auto* train = app.add_subcommand("train", "train text models");
  train->add_option("--task", train_task,
                    "task name, or 'all' (corpus is then a directory)");
  train->add_option("--corpus", train_corpus, "corpus file or directory")
      ->required();
  train->add_option("--seed", train_seed, "random seed");
  train->add_option("--out", train_out, "output model file or directory")
      ->required();
  train->add_option("--lexicon", train_lexicon, "CR keyword lexicon file");

  std::string spec_path;
  std::string gen_out;
  std::uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("gen-corpus",
                                 "generate a labeled synthetic package corpus");
  gen->add_option("--spec", spec_path, "per-verdict count spec (JSON)")
      ->required();
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("--out", gen_out, "output directory")->required();

  std::string mapping_path;
  auto* validate =
      app.add_subcommand("validate-mapping", "validate a PSI mapping file");
  validate->add_option("mapping", mapping_path, "mapping file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      ppcheck::PipelineConfig cfg{ao.ma, ao.tr6_timeout, ao.seed};
      ppcheck::AppPackage pkg = ppcheck::parse_package(pkg_dir);
      ppcheck::ComplianceReport report = ppcheck::run_pipeline(
          pkg, resolve_mapping(ao), resolve_models(ao), cfg);
      emit(ppcheck::report_to_json(report), ao.report_out);
    } else if (*batch) {
      ppcheck::PipelineConfig cfg{bo.ma, bo.tr6_timeout, bo.seed};
      ppcheck::BatchReport report = ppcheck::run_batch(
          corpus_dir, resolve_mapping(bo), resolve_models(bo), cfg, jobs);
      emit(ppcheck::batch_report_to_json(report), bo.report_out);
    } else if (*train) {
      ppcheck::KeywordLexicon lex =
          train_lexicon.empty() ? ppcheck::default_lexicon()
                                : ppcheck::load_lexicon(train_lexicon);
      if (train_task == "all") {
        nlohmann::json log = ppcheck::train_all_models(train_corpus, lex,
                                                       train_seed, train_out);
        std::cout << log.dump(2) << "\n";
      } else {
        double threshold = 0.5;
        ppcheck::ClassifierKind kind;
        if (train_task == "detector") {
          kind = ppcheck::ClassifierKind::mlp;
          threshold = ppcheck::kDetectorThreshold;
        } else {
          auto it = lex.model_substitution.find(train_task);
          if (it == lex.model_substitution.end()) {
            throw ppcheck::Error(ppcheck::ErrorCode::BadConfig,
                                 "unknown task '" + train_task + "'");
          }
          kind = ppcheck::classifier_kind_from_name(it->second);
        }
        ppcheck::LabeledCorpus corpus = ppcheck::load_corpus(train_corpus);
        ppcheck::TaskTrainResult result = ppcheck::train_with_holdout(
            train_task, corpus, kind, threshold, train_seed);
        ppcheck::save_model(result.model, train_out);
        std::cout << ppcheck::train_log_entry(result, kind).dump(2) << "\n";
      }
    } else if (*gen) {
      ppcheck::GenSpec spec = ppcheck::load_gen_spec(spec_path);
      auto labels = ppcheck::generate_corpus(spec, gen_seed, gen_out);
      std::cout << "generated " << labels.size() << " packages in " << gen_out
                << "\n";
    } else if (*validate) {
      ppcheck::MappingStore store = ppcheck::load_mapping(mapping_path);
      std::cout << "ok: " << store.permissions().size() << " permissions, "
                << store.libraries().size() << " libraries, "
                << store.aliases().size() << " aliases\n";
    }
  } catch (const ppcheck::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
