#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "srwec/error.hpp"
#include "srwec/sweep/sweep.hpp"

using namespace srwec;
using namespace srwec::sweep;

namespace {

// Deterministic stand-in for an expensive case: a few draws from the case seed.
Metrics noisy(const CaseContext& ctx) {
  std::mt19937_64 rng(ctx.seed);
  std::normal_distribution<double> n;
  double s = 0.0;
  for (double p : ctx.params) s += p;
  return {{"score", s + n(rng)}, {"seed_lo", static_cast<double>(ctx.seed % 1000)}};
}

EpisodeConfig short_episode() {
  EpisodeConfig c = EpisodeConfig::sweep_default();
  c.sim.duration = 100.0;
  c.sim.warmup = 20.0;
  c.seeds = 1;
  return c;
}

TuneOptions small_grid() {
  TuneOptions o;
  o.coarse_c = 5;
  o.coarse_k = 3;
  o.refine = 3;
  return o;
}

}  // namespace

TEST(Grid, SingleCase) {
  GridSpec g{{{"a", {2.0}}}, 7};
  const auto t = sweep::sweep(g, noisy);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0].index, 0u);
  EXPECT_EQ(t.rows[0].params, std::vector<double>{2.0});
  EXPECT_TRUE(t.rows[0].error.empty());
}

TEST(Grid, LexicographicOrderLastAxisFastest) {
  GridSpec g{{{"a", {1.0, 2.0, 3.0}}, {"b", {10.0, 20.0, 30.0, 40.0}}}, 1};
  EXPECT_EQ(g.case_count(), 12u);
  const auto t = sweep::sweep(g, noisy);
  ASSERT_EQ(t.rows.size(), 12u);
  for (std::size_t i = 0; i < 12; ++i) {
    EXPECT_EQ(t.rows[i].index, i);
    EXPECT_EQ(t.rows[i].params[0], 1.0 + static_cast<double>(i / 4));
    EXPECT_EQ(t.rows[i].params[1], 10.0 * static_cast<double>(i % 4 + 1));
    EXPECT_EQ(g.coords(i), (std::vector<std::size_t>{i / 4, i % 4}));
  }
  EXPECT_EQ(t.to_csv().header(), (std::vector<std::string>{"case_id", "a", "b", "score", "seed_lo", "error"}));
}

TEST(Grid, EmptyAxisIsRejected) {
  EXPECT_THROW(sweep::sweep(GridSpec{{{"a", {}}}, 1}, noisy), ValidationError);
}

TEST(Grid, FailingCaseIsRecordedAndTheRestRun) {
  GridSpec g{{{"a", {0.0, 1.0, 2.0, 3.0}}}, 1};
  const auto t = sweep::sweep(g, [](const CaseContext& ctx) -> Metrics {
    if (ctx.index == 2) throw NumericError("case diverged");
    return {{"score", ctx.params[0]}};
  });
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(t.rows[2].error, "numeric_error");
  EXPECT_TRUE(std::isnan(t.metric(2, "score")));
  EXPECT_EQ(t.metric(3, "score"), 3.0);
  const auto csv = t.to_csv();
  EXPECT_EQ(csv.row(2).back(), "numeric_error");
  EXPECT_EQ(csv.row(2)[2], "");
}

TEST(Grid, SeedsAreDistinctAndStable) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(case_seed(42, i));
  EXPECT_EQ(seen.size(), 10000u);
  EXPECT_EQ(case_seed(42, 17), case_seed(42, 17));
  EXPECT_NE(case_seed(42, 17), case_seed(43, 17));
}

TEST(Grid, ParallelMatchesSerial) {
  GridSpec g{{{"a", {1.0, 2.0, 3.0, 4.0, 5.0}}, {"b", {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7}}}, 99};
  const auto serial = sweep::sweep(g, noisy, 1), parallel = sweep::sweep(g, noisy, 8);
  EXPECT_EQ(serial.to_csv().str(), parallel.to_csv().str());
}

TEST(Grid, SimulationSweepIsReproducibleAcrossWorkerCounts) {
  LimitSweepConfig cfg;
  cfg.episode = short_episode();
  const std::vector<sea::SeaState> seas{{1.8, 8.7, 1.0}};
  cfg.episode.workers = 1;
  const auto a = limit_sweep(seas, {0.0, 250.0, 500.0}, {3000.0}, cfg);
  cfg.episode.workers = 4;
  const auto b = limit_sweep(seas, {0.0, 250.0, 500.0}, {3000.0}, cfg);
  EXPECT_EQ(a.to_csv().str(), b.to_csv().str());
}

TEST(Tune, ZeroSeaPicksTheFirstCandidate) {
  const auto cfg = short_episode();
  dynamics::TiltSeries flat{cfg.sim.wave_dt, std::vector<double>(2001, 0.0)};
  for (auto fam : {Family::Passive, Family::Reactive}) {
    const auto r = tune_pto(fam, {flat}, cfg, small_grid());
    EXPECT_EQ(r.avg_power, 0.0);
    EXPECT_EQ(r.c, small_grid().c_lo);
    EXPECT_EQ(r.k, 0.0);
  }
}

TEST(Tune, ReactiveNeverLosesToPassiveAndRefinementNeverLoses) {
  const auto cfg = short_episode();
  const auto tilts = seed_tilts({1.8, 8.7, 1.0}, cfg);
  const auto p = tune_pto(Family::Passive, tilts, cfg, small_grid());
  const auto r = tune_pto(Family::Reactive, tilts, cfg, small_grid());
  EXPECT_GT(p.avg_power, 0.0);
  EXPECT_GE(r.avg_power, p.avg_power);
  EXPECT_GE(p.avg_power, p.best_coarse);
  EXPECT_GE(r.avg_power, r.best_coarse);
  EXPECT_EQ(mean_power(tilts, p.mode(), cfg), p.avg_power);
  EXPECT_GT(r.evaluations, p.evaluations);
}

TEST(Limits, ZeroRatingGivesZeroPower) {
  LimitSweepConfig cfg;
  cfg.episode = short_episode();
  const auto t = limit_sweep({{1.8, 8.7, 1.0}}, {0.0, 300.0}, {0.0, 3000.0}, cfg);
  ASSERT_EQ(t.rows.size(), 4u);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const bool zero = t.rows[i].params[1] == 0.0 || t.rows[i].params[2] == 0.0;
    if (zero) {
      EXPECT_EQ(t.metric(i, "avg_power_w"), 0.0);
    } else {
      EXPECT_GT(t.metric(i, "avg_power_w"), 0.0);
    }
  }
  EXPECT_EQ(t.axis_names, (std::vector<std::string>{"tp_s", "f_max_n", "p_max_w"}));
}

TEST(Limits, KneeOnASyntheticCurve) {
  // Gains per 100 N: 100 %, 50 %, 10 %, 1 %, so the knee is the last point before the 1 % step.
  SweepTable t;
  t.axis_names = {"tp_s", "f_max_n", "p_max_w"};
  t.metric_names = {"avg_power_w"};
  const double p[] = {10.0, 20.0, 30.0, 33.0, 33.33};
  for (std::size_t i = 0; i < 5; ++i) {
    t.rows.push_back({i, {8.7, 100.0 * (i + 1), 3000.0}, {p[i]}, ""});
  }
  const auto knees = knee_report(t, "f_max_n", LimitSweepConfig{});
  ASSERT_EQ(knees.size(), 1u);
  ASSERT_TRUE(knees[0].value.has_value());
  EXPECT_EQ(*knees[0].value, 400.0);
  EXPECT_EQ(knees[0].other, 3000.0);
  EXPECT_THROW(knee_report(t, "hs_m", LimitSweepConfig{}), ValidationError);
  EXPECT_EQ(knee_table(knees).header()[0], "tp_s");
}

TEST(Strategies, ReferenceTableReads) {
  const auto rows = read_table2(SRWEC_FIXTURE_DIR "/table2_reference.csv");
  const auto it = std::find_if(rows.begin(), rows.end(), [](const Table2Row& r) { return std::abs(r.tp - 8.70) < 1e-9; });
  ASSERT_NE(it, rows.end());
  EXPECT_DOUBLE_EQ(it->passive, 222.69);
  EXPECT_DOUBLE_EQ(it->reactive, 232.8);
  EXPECT_DOUBLE_EQ(it->discrete, 286.73);
}

TEST(Strategies, ComparisonTableMatchesOnPeriod) {
  StrategyRow r;
  r.tp = 8.72;
  r.passive = 100.0;
  r.reactive = 120.0;
  r.discrete = 140.0;
  const auto t = comparison_table({r}, {{8.70, 200.0, 240.0, 280.0}});
  ASSERT_EQ(t.rows(), 1u);
  EXPECT_EQ(t.row(0).back(), "0.5");
  const auto miss = comparison_table({r}, {{9.0, 1.0, 1.0, 1.0}});
  EXPECT_EQ(miss.row(0).back(), "");
}

TEST(Geometry, FeasibleSetAndMonotoneBackIron) {
  GeometryRanges g = GeometryRanges::design_space();
  g.magnet_t = {0.004};
  g.backiron_t = {0.005, 0.015, 0.025};
  g.le = {0.300};
  g.poles = {8};
  g.winding_t = {0.005, 0.030};
  g.workers = 4;
  const auto res = geometry_sweep(g);
  const auto& t = res.table;
  ASSERT_EQ(t.rows.size(), 6u);
  const auto feas = t.metric_index("feasible");
  std::size_t count = 0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const bool f = t.rows[i].metrics[feas] == 1.0;
    count += f;
    EXPECT_EQ(f, t.metric(i, "re_mm") <= 105.0 + 1e-9) << i;
    if (!f) {
      EXPECT_TRUE(std::isnan(t.metric(i, "force_n")));
    }
  }
  EXPECT_EQ(count, res.feasible);
  EXPECT_GT(res.feasible, 0u);

  // Rows in order back iron 5/15/25 mm with winding 5 mm at positions 0, 2, 4.
  double prev = 0.0;
  for (std::size_t i : {0u, 2u, 4u}) {
    ASSERT_EQ(t.rows[i].params[4], 5.0);
    EXPECT_GE(t.metric(i, "force_n"), prev - 1e-9);
    prev = t.metric(i, "force_n");
  }
  // The full-scale design is in the grid (back iron 25, winding 5) and is feasible.
  EXPECT_EQ(t.rows[4].params, (std::vector<double>{4.0, 25.0, 300.0, 8.0, 5.0}));
  EXPECT_EQ(t.metric(4, "feasible"), 1.0);
  EXPECT_GT(t.metric(4, "force_n"), 750.0);
}
