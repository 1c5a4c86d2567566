#include <doctest.h>

#include "privmia/desk.hpp"
#include "privmia/mst.hpp"
#include "privmia/privbayes.hpp"
#include "privmia/shadow.hpp"
#include "privmia/util.hpp"
#include "test_support.hpp"

using namespace privmia;
using namespace testsupport;

TEST_SUITE("serialize") {

TEST_CASE("schema round-trips with categories and kinds") {
  const Schema schema = desk_schema();
  const Schema back = Schema::from_json_string(schema.to_json_string());
  CHECK(back.hash() == schema.hash());
  CHECK(back.n_features() == schema.n_features());
  for (int f = 0; f < schema.n_features(); ++f) {
    CHECK(back.feature(f).name == schema.feature(f).name);
    CHECK(back.feature(f).kind == schema.feature(f).kind);
    CHECK(back.feature(f).categories == schema.feature(f).categories);
  }
}

TEST_CASE("mst models reload without loss") {
  DeskConfig dk;
  dk.n_records = 600;
  const Dataset data = generate_desk_dataset(dk).without_households();
  RandomSource rng(1, 1);
  const MstModel model = fit_mst(data, PrivacyBudget{7.0, 0.5, 0.5}, rng);
  const MstModel back =
      mst_model_from_json(mst_model_to_json(model), data.schema());
  CHECK(back.edges == model.edges);
  CHECK(back.selection_log == model.selection_log);
  CHECK(back.epsilon.epsilon_total == model.epsilon.epsilon_total);
  CHECK(back.root_table.cells == model.root_table.cells);
  REQUIRE(back.noisy_tables.size() == model.noisy_tables.size());
  for (std::size_t i = 0; i < model.noisy_tables.size(); ++i)
    CHECK(back.noisy_tables[i].cells == model.noisy_tables[i].cells);

  const Schema other = make_schema({2, 2});
  CHECK_THROWS_AS(mst_model_from_json(mst_model_to_json(model), other),
                  ValidationError);
}

TEST_CASE("privbayes models reload without loss") {
  DeskConfig dk;
  dk.n_records = 600;
  dk.seed = 2;
  const Dataset data = generate_desk_dataset(dk).without_households();
  RandomSource rng(2, 2);
  const BayesNet model = fit_privbayes(data, PrivacyBudget{50.0, 0.5, 0.5}, rng);
  const BayesNet back =
      privbayes_model_from_json(privbayes_model_to_json(model), data.schema());
  CHECK(back.order == model.order);
  CHECK(back.parents == model.parents);
  CHECK(back.k == model.k);
  REQUIRE(back.noisy_conditionals.size() == model.noisy_conditionals.size());
  for (std::size_t i = 0; i < model.noisy_conditionals.size(); ++i)
    CHECK(back.noisy_conditionals[i].cells == model.noisy_conditionals[i].cells);
}

TEST_CASE("weights reload without loss") {
  std::map<FeatureTuple, int> tally;
  tally[FeatureTuple::pair(0, 1)] = 48;
  tally[FeatureTuple::pair(3, 9)] = 17;
  tally[FeatureTuple::conditional(4, {1, 7})] = 29;
  const FocalPointWeights weights = FocalPointWeights::from_tally(tally, 50);
  ShadowConfig cfg;
  cfg.generator_kind = GeneratorKind::kPrivBayes;
  cfg.budget = PrivacyBudget{10.0, 0.5, 0.5};
  cfg.runs = 50;
  const FocalPointWeights back =
      weights_from_json(weights_to_json(weights, cfg));
  CHECK(back.runs == weights.runs);
  CHECK(back.entries == weights.entries);
}

TEST_CASE("tuple labels parse back to the same tuple") {
  for (const FeatureTuple& t :
       {FeatureTuple::pair(2, 5), FeatureTuple::marginal({4}),
        FeatureTuple::conditional(3, {}), FeatureTuple::conditional(6, {0, 2})})
    CHECK(FeatureTuple::from_label(t.label()) == t);
}

}  // TEST_SUITE
