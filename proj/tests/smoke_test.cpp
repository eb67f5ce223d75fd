#include <catch2/catch_amalgamated.hpp>

#include "ppcheck/corpus_gen.hpp"
#include "ppcheck/lexicon_default.hpp"
#include "ppcheck/mapping_default.hpp"
#include "ppcheck/pipeline.hpp"

TEST_CASE("headers compile and a clean app is Clean") {
  ppcheck::Rng rng(1);
  ppcheck::KeywordLexicon lex = ppcheck::default_lexicon();
  ppcheck::AppPackage pkg =
      ppcheck::generate_package(ppcheck::Verdict::Clean, "app_0000", lex, rng);
  auto models = ppcheck::oracle_models(lex);
  auto report = ppcheck::run_pipeline(pkg, ppcheck::default_mapping_store(),
                                      models);
  CHECK(report.verdict == ppcheck::Verdict::Clean);
}
