#include <doctest.h>

#include <stdexcept>

#include "bellsim/postselect.hpp"

using namespace bellsim;

namespace {

InstructionSet make_set(const char* a0, const char* a1, const char* b0, const char* b1) {
  InstructionSet set;
  set.a0 = LocalInstruction::parse(a0);
  set.a1 = LocalInstruction::parse(a1);
  set.b0 = LocalInstruction::parse(b0);
  set.b1 = LocalInstruction::parse(b1);
  return set;
}

} // namespace

TEST_CASE("franson routing keeps each photon on its own side") {
  const auto [e1, e2] = route_franson(PathChoice::S, PathChoice::S, +1, -1);
  CHECK(e1 == DetectionEvent{Side::left, +1, 0});
  CHECK(e2 == DetectionEvent{Side::right, -1, 0});

  const auto [sl1, sl2] = route_franson(PathChoice::S, PathChoice::L, +1, +1);
  CHECK(sl1.time_slot == 0); // photon 1 arrives one slot early
  CHECK(sl2.time_slot == 1);
  CHECK(sl1.side == Side::left);
  CHECK(sl2.side == Side::right);

  const auto [ls1, ls2] = route_franson(PathChoice::L, PathChoice::S, -1, -1);
  CHECK(ls1.time_slot == 1); // photon 1 arrives one slot late
  CHECK(ls2.time_slot == 0);
}

TEST_CASE("genuine routing sends the long path to the opposite side") {
  const auto [ss1, ss2] = route_genuine(PathChoice::S, PathChoice::S, +1, +1);
  CHECK(ss1.side == Side::left);
  CHECK(ss2.side == Side::right);
  CHECK(ss1.time_slot == 0);
  CHECK(ss2.time_slot == 0);

  const auto [sl1, sl2] = route_genuine(PathChoice::S, PathChoice::L, +1, -1);
  CHECK(sl1.side == Side::left); // both photons end on the left
  CHECK(sl2.side == Side::left);
  CHECK(sl1.time_slot == 0);
  CHECK(sl2.time_slot == 1);

  const auto [ls1, ls2] = route_genuine(PathChoice::L, PathChoice::S, +1, -1);
  CHECK(ls1.side == Side::right); // both on the right
  CHECK(ls2.side == Side::right);

  const auto [ll1, ll2] = route_genuine(PathChoice::L, PathChoice::L, -1, +1);
  CHECK(ll1.side == Side::right);
  CHECK(ll2.side == Side::left);
  CHECK(ll1.time_slot == 1);
  CHECK(ll2.time_slot == 1);
}

TEST_CASE("keep predicate: franson keeps coincident slots") {
  CHECK(keep_event(DetectionEvent{Side::left, +1, 0}, DetectionEvent{Side::right, -1, 0},
                   Scheme::franson));
  CHECK(keep_event(DetectionEvent{Side::left, -1, 1}, DetectionEvent{Side::right, -1, 1},
                   Scheme::franson));
  CHECK_FALSE(keep_event(DetectionEvent{Side::left, +1, 0}, DetectionEvent{Side::right, +1, 1},
                         Scheme::franson));
  CHECK_FALSE(keep_event(DetectionEvent{Side::left, +1, 1}, DetectionEvent{Side::right, +1, 0},
                         Scheme::franson));
}

TEST_CASE("keep predicate: genuine keeps different sides") {
  CHECK(keep_event(DetectionEvent{Side::left, +1, 0}, DetectionEvent{Side::right, +1, 0},
                   Scheme::genuine));
  CHECK(keep_event(DetectionEvent{Side::right, +1, 1}, DetectionEvent{Side::left, -1, 1},
                   Scheme::genuine));
  CHECK_FALSE(keep_event(DetectionEvent{Side::left, +1, 0}, DetectionEvent{Side::left, -1, 1},
                         Scheme::genuine));
  CHECK_FALSE(keep_event(DetectionEvent{Side::right, +1, 1}, DetectionEvent{Side::right, -1, 0},
                         Scheme::genuine));
}

TEST_CASE("keep predicate rejects events from a mismatched router") {
  // genuine-routed rejected pair (both left) fed to the franson rule
  CHECK_THROWS_AS(keep_event(DetectionEvent{Side::left, +1, 0},
                             DetectionEvent{Side::left, +1, 1}, Scheme::franson),
                  std::invalid_argument);
  // photon 1 on the left must be in the early slot under the genuine scheme
  CHECK_THROWS_AS(keep_event(DetectionEvent{Side::left, +1, 1},
                             DetectionEvent{Side::right, +1, 1}, Scheme::genuine),
                  std::invalid_argument);
  CHECK_THROWS_AS(keep_event(DetectionEvent{Side::left, +1, 0},
                             DetectionEvent{Side::right, +1, 1}, Scheme::genuine),
                  std::invalid_argument);
}

TEST_CASE("both schemes keep exactly the equal-path trials") {
  for (PathChoice p1 : {PathChoice::S, PathChoice::L}) {
    for (PathChoice p2 : {PathChoice::S, PathChoice::L}) {
      for (Scheme scheme : {Scheme::franson, Scheme::genuine}) {
        const auto [e1, e2] = route(scheme, p1, p2, +1, -1);
        CHECK(keep_event(e1, e2, scheme) == (p1 == p2));
      }
    }
  }
}

TEST_CASE("genuine scheme: kept iff sides differ iff slots equal") {
  for (PathChoice p1 : {PathChoice::S, PathChoice::L}) {
    for (PathChoice p2 : {PathChoice::S, PathChoice::L}) {
      const auto [e1, e2] = route_genuine(p1, p2, -1, +1);
      const bool kept = keep_event(e1, e2, Scheme::genuine);
      CHECK(kept == (e1.side != e2.side));
      CHECK(kept == (e1.time_slot == e2.time_slot));
    }
  }
}

TEST_CASE("make_trial records a recomputable keep flag") {
  const TrialOutcome trial =
      make_trial(Scheme::genuine, SettingPair(1, 0), PathChoice::L, -1, PathChoice::L, +1);
  CHECK(trial.kept);
  CHECK(trial.kept == keep_event(trial.event1, trial.event2, trial.scheme));
  CHECK(trial.event1.side == Side::right);
  CHECK(trial.event2.side == Side::left);
  CHECK(trial.event1.detector_sign == -1);

  const TrialOutcome rejected =
      make_trial(Scheme::franson, SettingPair(0, 0), PathChoice::S, +1, PathChoice::L, +1);
  CHECK_FALSE(rejected.kept);
}

TEST_CASE("setting-independence: forgery mixture under franson postselection") {
  const auto report = setting_independence_check(forgery_model(0.85), Scheme::franson,
                                                 ConstraintClass::path_setting_dependent);
  for (double keep : report.keep_prob) {
    CHECK(keep == doctest::Approx(0.5).epsilon(1e-12));
  }
  CHECK(report.max_difference < 1e-12);
  CHECK(report.class_constraint_satisfied);
  // every support strategy has a setting-dependent keep status
  CHECK(report.setting_dependent_sets.size() == 64);

  // witnesses from the first two plus-family rows: rejected exactly when
  // Bob's setting is B1, regardless of Alice's setting
  for (const ForgeryRow& row : forgery_rows_plus().subspan(0, 2)) {
    for (const InstructionSet& set : expand_row(row)) {
      bool found = false;
      for (const auto& witness : report.setting_dependent_sets) {
        if (witness.set == set) {
          found = true;
          CHECK(witness.kept_by_pair[pair_index(0, 0)]);
          CHECK_FALSE(witness.kept_by_pair[pair_index(0, 1)]);
          CHECK(witness.kept_by_pair[pair_index(1, 0)]);
          CHECK_FALSE(witness.kept_by_pair[pair_index(1, 1)]);
        }
      }
      CHECK(found);
    }
  }
}

TEST_CASE("setting-independence: path-fixed models under the genuine scheme") {
  // uniform mixture over all 64 path-fixed strategies
  LhvModel model;
  int members = 0;
  for (int i = 0; i < 256; ++i) {
    if (is_path_fixed(InstructionSet::from_index(i))) {
      model.weights[i] = 1.0 / 64.0;
      ++members;
    }
  }
  REQUIRE(members == 64);

  const auto report =
      setting_independence_check(model, Scheme::genuine, ConstraintClass::path_fixed);
  CHECK(report.max_difference == 0.0);
  CHECK(report.setting_dependent_sets.empty());
  CHECK(report.class_constraint_satisfied);

  // a path-setting-dependent support strategy breaks the class claim
  const auto bad = setting_independence_check(forgery_model(1.0), Scheme::genuine,
                                              ConstraintClass::path_fixed);
  CHECK_FALSE(bad.class_constraint_satisfied);
}

TEST_CASE("setting-independence: all-short point mass is kept everywhere") {
  const LhvModel model = LhvModel::point_mass(make_set("S+", "S+", "S+", "S+"));
  for (Scheme scheme : {Scheme::franson, Scheme::genuine}) {
    const auto report =
        setting_independence_check(model, scheme, ConstraintClass::path_fixed);
    for (double keep : report.keep_prob) {
      CHECK(keep == doctest::Approx(1.0));
    }
    CHECK(report.max_difference == 0.0);
    CHECK(report.setting_dependent_sets.empty());
    CHECK(report.class_constraint_satisfied);
  }
}
