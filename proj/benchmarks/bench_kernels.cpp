#include <benchmark/benchmark.h>

#include "fairq/experiment.hpp"
#include "fairq/game.hpp"
#include "fairq/lattice.hpp"
#include "fairq/metrics.hpp"
#include "fairq/two_player.hpp"

namespace {

void BM_SelectAction(benchmark::State& st) {
  fairq::Rng rng(1);
  const fairq::QTable table = fairq::init_qtable(rng);
  fairq::SimState s{fairq::Level::M, fairq::Level::M};
  for (auto _ : st) {
    const fairq::Selection sel = fairq::select_action(table, s, 0.01, rng);
    s.proposer = sel.action;
    benchmark::DoNotOptimize(sel);
  }
}
BENCHMARK(BM_SelectAction);

void BM_QUpdate(benchmark::State& st) {
  fairq::Rng rng(2);
  fairq::QTable table = fairq::init_qtable(rng);
  const fairq::LearningParams learn;
  const fairq::SimState s{fairq::Level::M, fairq::Level::M};
  for (auto _ : st) {
    fairq::q_update(table, s, fairq::Level::M, 0.5, s, learn);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_QUpdate);

void BM_TwoPlayerStep(benchmark::State& st) {
  fairq::RunConfig cfg;
  cfg.scheme = static_cast<fairq::RoleScheme>(st.range(0));
  cfg.seed = 3;
  fairq::TwoPlayerGame game(cfg);
  for (auto _ : st) benchmark::DoNotOptimize(game.step());
  st.SetItemsProcessed(st.iterations());
}
BENCHMARK(BM_TwoPlayerStep)->Arg(0)->Arg(1)->Arg(2);

void BM_LatticeStep(benchmark::State& st) {
  fairq::LatticeConfig cfg;
  cfg.n = static_cast<int>(st.range(0));
  cfg.seed = 4;
  fairq::LatticeGame game(cfg);
  for (auto _ : st) benchmark::DoNotOptimize(game.step().data());
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_LatticeStep)->Arg(50)->Arg(500);

void BM_RoundCountsAdd(benchmark::State& st) {
  fairq::RunConfig cfg;
  cfg.seed = 5;
  fairq::TwoPlayerGame game(cfg);
  std::vector<fairq::RoundRecord> recs;
  for (int i = 0; i < 1024; ++i) recs.push_back(game.step());
  fairq::RoundCounts counts;
  for (auto _ : st) {
    for (const auto& r : recs) counts.add(r);
    benchmark::ClobberMemory();
  }
  st.SetItemsProcessed(st.iterations() * 1024);
}
BENCHMARK(BM_RoundCountsAdd);

void BM_Ensemble(benchmark::State& st) {
  fairq::RunConfig cfg;
  cfg.steps = 101'000;
  cfg.transient = 100'000;
  cfg.window = 1'000;
  for (auto _ : st) {
    auto r = fairq::run_ensemble(cfg, 8, 7, 0, fairq::ObservationPlan{}, static_cast<unsigned>(st.range(0)));
    benchmark::DoNotOptimize(r.merged.window.rounds());
  }
  st.SetItemsProcessed(st.iterations() * 8 * 101'000);
}
BENCHMARK(BM_Ensemble)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
