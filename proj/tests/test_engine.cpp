#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "soak.hpp"

using namespace parasol;
using fixtures::replay;

namespace {

std::vector<entry> sorted(std::vector<entry> es) {
  sort_for_output(es);
  return es;
}

flat_table table_of(std::vector<entry> es, timestamp created = 0) {
  return flat_table::from_entries(std::move(es), created);
}

}  // namespace

TEST(IntersectStep, FirstTransaction) {
  step_stats st;
  const auto t = intersect_step(flat_table{}, {1, 2}, 0, 1, &st);
  EXPECT_EQ(t.entries(), (std::vector<entry>{{{1, 2}, 1, 0}}));
  EXPECT_EQ(st.intersections, 1u);
}

TEST(IntersectStep, ClosedItemsetCountsOnCubeStream) {
  flat_miner m;
  const std::size_t expected[] = {1, 3, 7, 15};
  const auto s = fixtures::s2_4();
  for (std::size_t i = 0; i < s.size(); ++i) {
    m.process(s[i]);
    EXPECT_EQ(m.size(), expected[i]) << "after t" << i + 1;
  }
  for (const auto& e : m.index().entries()) {
    EXPECT_EQ(e.err, 0u);
    EXPECT_EQ(e.count, 5 - e.alpha.size());  // each missing item is one transaction
  }
}

TEST(IntersectStep, WorkedReplayWithFifthTransaction) {
  const auto t4 = table_of({{{5}, 4, 0}, {{1, 5}, 3, 0}, {{2, 5}, 3, 0}});
  const auto t5 = intersect_step(t4, fixtures::t5, 3, 5);
  EXPECT_EQ(t5.entries(), sorted({{{5}, 5, 0}, {{1, 5}, 4, 0}, {{2, 5}, 3, 0}, {{1, 3, 5}, 4, 3}}));
}

TEST(IntersectStep, StoredTransactionIsNotReinserted) {
  const auto t = table_of({{{1, 2}, 2, 0}, {{2}, 3, 0}});
  step_stats st;
  const auto u = intersect_step(t, {1, 2}, 0, 3, &st);
  EXPECT_EQ(u.entries(), sorted({{{1, 2}, 3, 0}, {{2}, 4, 0}}));
  EXPECT_EQ(st.created, 0u);
  EXPECT_EQ(st.intersections, 2u);
}

TEST(IntersectStep, DuplicateTransactionsCountNormally) {
  flat_miner m;
  for (int j = 0; j < 4; ++j) m.process(itemset{3, 4});
  EXPECT_EQ(m.index().entries(), (std::vector<entry>{{{3, 4}, 4, 0}}));
}

TEST(IntersectStep, CollisionKeepsMaximumCount) {
  // {1,2} and {1,3} both meet t = {1} at {1}; the higher count must win.
  const auto t = table_of({{{1, 2}, 5, 1}, {{1, 3}, 2, 0}});
  const auto u = intersect_step(t, {1}, 1, 9);
  ASSERT_NE(u.find({1}), nullptr);
  EXPECT_EQ(u.find({1})->count, 6u);
  EXPECT_EQ(u.find({1})->err, 1u);
}

TEST(RcDelete, ExampleThree) {
  flat_miner m({.k = 3});
  const auto s = fixtures::s2_4();
  replay(m, {s[0], s[1], s[2]});
  EXPECT_EQ(m.delta(), 2u);
  EXPECT_EQ(m.index().entries(), sorted({{{4, 5}, 3, 0}, {{2, 4, 5}, 2, 0}, {{1, 4, 5}, 2, 0}}));

  // The fourth transaction enters as <t4, delta + 1, delta>.
  const auto pre = intersect_step(m.index(), s[3], m.delta(), 4);
  ASSERT_NE(pre.find(s[3]), nullptr);
  EXPECT_EQ(pre.find(s[3])->count, 3u);
  EXPECT_EQ(pre.find(s[3])->err, 2u);
}

TEST(RcDelete, SmallTableUnchanged) {
  const auto t = table_of({{{1}, 3, 0}, {{1, 2}, 1, 0}});
  const auto [u, d] = rc_delete(t, 2, 4);
  EXPECT_EQ(u.entries(), t.entries());
  EXPECT_EQ(d, 4u);
}

TEST(RcDelete, DeletesMinimumOfFifthStep) {
  const auto pre = table_of({{{5}, 5, 0}, {{1, 5}, 4, 0}, {{2, 5}, 3, 0}, {{1, 3, 5}, 4, 3}});
  const auto [u, d] = rc_delete(pre, 3, 3);
  EXPECT_EQ(u.entries(), sorted({{{5}, 5, 0}, {{1, 5}, 4, 0}, {{1, 3, 5}, 4, 3}}));
  EXPECT_EQ(u.find({2, 5}), nullptr);
  EXPECT_EQ(d, 3u);
}

TEST(RcDelete, SupersetGoesFirstAtEqualCount) {
  const auto t = table_of({{{1}, 2, 0}, {{1, 2}, 2, 0}, {{3}, 5, 0}});
  const auto [u, d] = rc_delete(t, 2, 0);
  EXPECT_EQ(u.find({1, 2}), nullptr);
  EXPECT_NE(u.find({1}), nullptr);
  EXPECT_EQ(d, 2u);
}

TEST(RcDelete, OlderGoesFirstAtEqualCountAndSize) {
  flat_table t = table_of({{{1}, 2, 0}}, 1);
  t = intersect_step(t, {2}, 0, 2);  // {2}:1 created at step 2, {1} unchanged
  t = intersect_step(t, {2}, 0, 3);  // {2}:2
  const auto [u, d] = rc_delete(t, 1, 0);
  EXPECT_EQ(u.entries(), (std::vector<entry>{{{2}, 2, 0}}));
  EXPECT_EQ(d, 2u);
}

TEST(ParasolDelete, CubeStreamAtStepFour) {
  const auto c4 = fixtures::table_after(fixtures::s2_4());
  ASSERT_EQ(c4.size(), 15u);
  const auto [u, d] = parasol_delete(c4, 15, 0.25, 4, 0);
  EXPECT_EQ(u.size(), 11u);
  EXPECT_EQ(d, 1u);
  for (const auto& e : u.entries()) EXPECT_GE(e.count, 2u);
}

TEST(ParasolDelete, ZeroEpsilonIsPlainCapacityDeletion) {
  const auto c4 = fixtures::table_after(fixtures::s2_4());
  const auto [u, d] = parasol_delete(c4, 15, 0.0, 4, 0);
  EXPECT_EQ(u.entries(), c4.entries());
  EXPECT_EQ(d, 0u);
  const auto [v, dv] = parasol_delete(c4, 6, 0.0, 4, 0);
  const auto [w, dw] = rc_delete(c4, 6, 0);
  EXPECT_EQ(v.entries(), w.entries());
  EXPECT_EQ(dv, dw);
}

TEST(ParasolDelete, ParameterConstrainedBound) {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 20; ++round) {
    const auto s = generate_uniform(rng, 50, 8, 6);
    flat_miner m({.k = 1'000'000, .epsilon = 0.1});
    for (std::size_t i = 0; i < s.size(); ++i) {
      m.process(s[i]);
      ASSERT_LE(m.delta(), scaled_floor(0.1, i + 1)) << "i=" << i + 1;
    }
  }
}

TEST(Miner, ExampleFourReplay) {
  flat_miner m({.k = 3});
  replay(m, fixtures::s2_4());
  EXPECT_EQ(m.delta(), 3u);
  EXPECT_EQ(m.index().entries(), sorted({{{5}, 4, 0}, {{1, 5}, 3, 0}, {{2, 5}, 3, 0}}));
  const auto st = m.process(fixtures::t5);
  EXPECT_EQ(st.deleted, 1u);
  EXPECT_EQ(m.delta(), 3u);
  EXPECT_EQ(m.index().entries(), sorted({{{5}, 5, 0}, {{1, 5}, 4, 0}, {{1, 3, 5}, 4, 3}}));
}

TEST(Miner, SingleTransaction) {
  flat_miner m;
  m.process(transaction{{4, 2}, 1});
  EXPECT_EQ(m.size(), 1u);
  EXPECT_EQ(m.delta(), 0u);
  EXPECT_EQ(m.metrics(), (std::vector<metric_sample>{{1, 1, 0}}));
}

TEST(Miner, RejectsTimestampGap) {
  flat_miner m;
  m.process(transaction{{1}, 1});
  try {
    m.process(transaction{{1}, 3});
    FAIL() << "expected timestamp_gap";
  } catch (const timestamp_gap& e) {
    EXPECT_EQ(e.expected(), 2u);
    EXPECT_EQ(e.got(), 3u);
  }
  EXPECT_EQ(m.now(), 1u);
}

TEST(Miner, RejectsBadConfiguration) {
  EXPECT_THROW(flat_miner({.k = 0}), std::invalid_argument);
  EXPECT_THROW(flat_miner({.epsilon = 1.0}), std::invalid_argument);
  EXPECT_THROW(flat_miner({.epsilon = -0.1}), std::invalid_argument);
  flat_miner m;
  EXPECT_THROW(m.process(itemset{}), std::invalid_argument);
}

TEST(Miner, MetricsStride) {
  flat_miner m({.metrics_stride = 3});
  std::mt19937_64 rng(5);
  replay(m, generate_uniform(rng, 10, 5, 3));
  ASSERT_EQ(m.metrics().size(), 3u);
  EXPECT_EQ(m.metrics()[2].i, 9u);
}

TEST(Miner, ExactModeMatchesClosedItemsets) {
  std::mt19937_64 rng(314);
  for (int round = 0; round < 100; ++round) {
    const auto s = soak::random_stream(rng, 14, 8, 6);
    flat_miner m;
    replay(m, s);
    std::map<itemset, count_type> got;
    for (const auto& e : m.index().entries()) {
      EXPECT_EQ(e.err, 0u);
      got.emplace(e.alpha, e.count);
    }
    EXPECT_EQ(got, oracle::enumerate_closed(s));
  }
}

TEST(Query, RepresentativeEntryAtSigmaPointSix) {
  flat_miner m({.k = 3});
  replay(m, fixtures::s2_4_t5());
  const auto q = m.query(0.6);
  EXPECT_FALSE(q.weak_guarantee);
  EXPECT_NE(std::find(q.entries.begin(), q.entries.end(), entry{{1, 3, 5}, 4, 3}), q.entries.end());
  EXPECT_TRUE(oracle::verify_delta_covered_set(q.entries, fixtures::s2_4_t5(), 0.6, m.delta()));
}

TEST(Query, SigmaOneIsEmpty) {
  flat_miner m;
  replay(m, fixtures::s2_4_t5());
  EXPECT_TRUE(m.query(1.0).entries.empty());
}

TEST(Query, WeakGuaranteeFlag) {
  flat_miner m({.k = 3});
  replay(m, fixtures::s2_4_t5());
  EXPECT_TRUE(m.query(0.5).weak_guarantee);   // delta 3 > 2.5
  EXPECT_FALSE(m.query(0.6).weak_guarantee);  // delta 3 <= 3
  EXPECT_THROW(m.query(1.5), std::invalid_argument);
}

TEST(Query, SnapshotIsIndependentOfLaterSteps) {
  flat_miner m;
  replay(m, fixtures::s2_4());
  const snapshot snap = m.take_snapshot();
  m.process(fixtures::t5);
  EXPECT_EQ(snap.i, 4u);
  EXPECT_EQ(snap.entries.size(), 15u);
  EXPECT_NE(snap.entries, m.take_snapshot().entries);
}

// Literal candidate merge in a caller-chosen order, keeping the first
// candidate among equal counts. Counts never depend on the order; errors can,
// when two sources of equal count carry different errors.
namespace {

using merge_map = std::map<itemset, std::pair<count_type, count_type>>;

std::vector<entry> with_fresh(std::vector<entry> table, const itemset& t, count_type delta) {
  if (std::none_of(table.begin(), table.end(), [&](const entry& e) { return e.alpha == t; }))
    table.push_back({t, delta, delta});
  return table;
}

merge_map literal_step(std::vector<entry> table, const itemset& t, count_type delta,
                       std::mt19937_64& rng) {
  merge_map out;
  for (const auto& e : table) out[e.alpha] = {e.count, e.err};
  table = with_fresh(std::move(table), t, delta);
  std::shuffle(table.begin(), table.end(), rng);
  merge_map cand;
  for (const auto& e : table) {
    std::vector<item> b;
    std::set_intersection(e.alpha.begin(), e.alpha.end(), t.begin(), t.end(), std::back_inserter(b));
    if (b.empty()) continue;
    const itemset beta(b);
    auto it = cand.find(beta);
    if (it == cand.end() || e.count + 1 > it->second.first) cand[beta] = {e.count + 1, e.err};
  }
  for (const auto& [beta, ce] : cand) out[beta] = ce;
  return out;
}

// Errors of every source that reaches the maximum count for each candidate.
std::map<itemset, std::set<count_type>> tied_errors(const std::vector<entry>& before,
                                                    const itemset& t, count_type delta) {
  std::map<itemset, std::pair<count_type, std::set<count_type>>> best;
  for (const auto& e : with_fresh(before, t, delta)) {
    std::vector<item> b;
    std::set_intersection(e.alpha.begin(), e.alpha.end(), t.begin(), t.end(), std::back_inserter(b));
    if (b.empty()) continue;
    auto& [c, errs] = best[itemset(b)];
    if (e.count + 1 > c) {
      c = e.count + 1;
      errs.clear();
    }
    if (e.count + 1 == c) errs.insert(e.err);
  }
  std::map<itemset, std::set<count_type>> out;
  for (auto& [a, ce] : best) out[a] = std::move(ce.second);
  return out;
}

}  // namespace

TEST(IntersectStep, OrderIndependence) {
  std::mt19937_64 rng(2718);
  std::size_t err_ties = 0;
  for (int round = 0; round < 300; ++round) {
    const auto s = soak::random_stream(rng, 10, 7, 6);
    for (std::size_t k : {2u, 3u, 6u}) {
      flat_miner m({.k = k});
      for (const auto& t : s) {
        const auto before = m.index().entries();
        const count_type d = m.delta();
        const auto pre = intersect_step(m.index(), t, d, m.now() + 1);
        const auto allowed = tied_errors(before, t, d);
        merge_map engine;
        for (const auto& e : pre.entries()) engine[e.alpha] = {e.count, e.err};
        for (const auto& [a, errs] : allowed) EXPECT_TRUE(errs.contains(engine[a].second)) << a;
        for (int perm = 0; perm < 4; ++perm) {
          const auto lit = literal_step(before, t, d, rng);
          ASSERT_EQ(lit.size(), engine.size());
          for (const auto& [a, ce] : lit) {
            ASSERT_TRUE(engine.contains(a));
            EXPECT_EQ(ce.first, engine[a].first) << a;
            if (ce.second != engine[a].second) ++err_ties;
          }
        }
        m.process(t);
      }
    }
  }
  // The literal merge does reach different errors under reordering, which is
  // why the engine pins a tie rule.
  EXPECT_GT(err_ties, 0u);
}

TEST(Invariants, RandomStreamsBothBackends) {
  std::mt19937_64 rng(77);
  soak::report r;
  for (int round = 0; round < 60; ++round) {
    const auto s = soak::random_stream(rng, 12, 7, 7);
    for (std::size_t k : soak::k_grid())
      for (double eps : soak::epsilon_grid()) soak::check_stream(s, {k, eps, {}}, r);
  }
  for (const auto& f : r.failures) ADD_FAILURE() << f;
  EXPECT_GT(r.coverage_checks, 0u);
}
