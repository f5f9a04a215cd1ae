#include "bellsim/lhv.hpp"

#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace bellsim {

char path_letter(PathChoice path) { return path == PathChoice::S ? 'S' : 'L'; }

LocalInstruction::LocalInstruction(PathChoice p, int s) : path(p), sign(s) {
  if (sign != -1 && sign != 1) {
    throw std::invalid_argument("instruction sign must be -1 or +1");
  }
}

int LocalInstruction::code() const {
  return (path == PathChoice::L ? 2 : 0) + (sign > 0 ? 1 : 0);
}

LocalInstruction LocalInstruction::from_code(int code) {
  if (code < 0 || code > 3) {
    throw std::invalid_argument("instruction code must be in 0..3");
  }
  return LocalInstruction(code >= 2 ? PathChoice::L : PathChoice::S, (code & 1) ? +1 : -1);
}

std::string LocalInstruction::to_string() const {
  return std::string{path_letter(path), sign > 0 ? '+' : '-'};
}

LocalInstruction LocalInstruction::parse(const std::string& text) {
  if (text.size() != 2 || (text[0] != 'S' && text[0] != 'L') ||
      (text[1] != '+' && text[1] != '-')) {
    throw std::invalid_argument("bad instruction cell '" + text + "' (want S+/S-/L+/L-)");
  }
  return LocalInstruction(text[0] == 'S' ? PathChoice::S : PathChoice::L,
                          text[1] == '+' ? +1 : -1);
}

int InstructionSet::index() const {
  return ((a0.code() * 4 + a1.code()) * 4 + b0.code()) * 4 + b1.code();
}

InstructionSet InstructionSet::from_index(int index) {
  if (index < 0 || index > 255) {
    throw std::invalid_argument("instruction set index must be in 0..255");
  }
  InstructionSet set;
  set.b1 = LocalInstruction::from_code(index % 4);
  set.b0 = LocalInstruction::from_code((index / 4) % 4);
  set.a1 = LocalInstruction::from_code((index / 16) % 4);
  set.a0 = LocalInstruction::from_code(index / 64);
  return set;
}

InstructionSet InstructionSet::sign_flipped() const {
  InstructionSet flipped = *this;
  flipped.a0.sign = -flipped.a0.sign;
  flipped.a1.sign = -flipped.a1.sign;
  flipped.b0.sign = -flipped.b0.sign;
  flipped.b1.sign = -flipped.b1.sign;
  return flipped;
}

std::string InstructionSet::to_string() const {
  return a0.to_string() + " " + a1.to_string() + " " + b0.to_string() + " " + b1.to_string();
}

bool is_path_fixed(const InstructionSet& set) {
  return set.a0.path == set.a1.path && set.b0.path == set.b1.path;
}

std::pair<LocalInstruction, LocalInstruction> evaluate_set(const InstructionSet& set,
                                                           const SettingPair& pair) {
  return {set.alice(pair.alice), set.bob(pair.bob)};
}

std::vector<InstructionSet> LhvModel::support() const {
  std::vector<InstructionSet> sets;
  for (int i = 0; i < 256; ++i) {
    if (weights[i] > 0.0) {
      sets.push_back(InstructionSet::from_index(i));
    }
  }
  return sets;
}

void LhvModel::validate() const {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("model weights must be finite and non-negative");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("model weights must sum to 1, got " + std::to_string(total));
  }
}

LhvModel LhvModel::point_mass(const InstructionSet& set) {
  LhvModel model;
  model.weights[set.index()] = 1.0;
  return model;
}

namespace {

// Transcribed rows. One cell per row carries '*' in place of its sign; the
// row expands into the '+' and '-' variants of that cell plus both variants
// with every sign reversed. Contribution columns are in pair order
// A0B0 A0B1 A1B0 A1B1 and apply to all four expanded strategies.
constexpr ForgeryRow kPlusRows[8] = {
    {"S+ S+ S+ L*", "+1 rej +1 rej"},
    {"L+ L+ L+ S*", "+1 rej +1 rej"},
    {"S+ S- L* S+", "rej +1 rej -1"},
    {"L+ L- S* L+", "rej +1 rej -1"},
    {"S+ L* S+ S+", "+1 +1 rej rej"},
    {"L+ S* L+ L+", "+1 +1 rej rej"},
    {"L* S+ S+ S-", "rej rej +1 -1"},
    {"S* L+ L+ L-", "rej rej +1 -1"},
};

constexpr ForgeryRow kMinusRows[8] = {
    {"S+ S+ S- L*", "-1 rej -1 rej"},
    {"L+ L+ L- S*", "-1 rej -1 rej"},
    {"S+ S- L* S-", "rej -1 rej +1"},
    {"L+ L- S* L-", "rej -1 rej +1"},
    {"S- L* S+ S+", "-1 -1 rej rej"},
    {"L- S* L+ L+", "-1 -1 rej rej"},
    {"L* S- S+ S-", "rej rej -1 +1"},
    {"S* L- L+ L-", "rej rej -1 +1"},
};

std::array<std::string, 4> split_cells(const char* text) {
  std::istringstream in(text);
  std::array<std::string, 4> cells;
  for (auto& cell : cells) {
    if (!(in >> cell)) {
      throw std::logic_error(std::string("row '") + text + "' does not have 4 cells");
    }
  }
  std::string extra;
  if (in >> extra) {
    throw std::logic_error(std::string("row '") + text + "' has more than 4 cells");
  }
  return cells;
}

InstructionSet set_from_cells(const std::array<std::string, 4>& cells) {
  InstructionSet set;
  set.a0 = LocalInstruction::parse(cells[0]);
  set.a1 = LocalInstruction::parse(cells[1]);
  set.b0 = LocalInstruction::parse(cells[2]);
  set.b1 = LocalInstruction::parse(cells[3]);
  return set;
}

} // namespace

std::span<const ForgeryRow> forgery_rows_plus() { return kPlusRows; }
std::span<const ForgeryRow> forgery_rows_minus() { return kMinusRows; }

std::array<InstructionSet, 4> expand_row(const ForgeryRow& row) {
  auto cells = split_cells(row.cells);
  int starred = -1;
  for (int i = 0; i < 4; ++i) {
    if (cells[i].size() == 2 && cells[i][1] == '*') {
      if (starred >= 0) {
        throw std::logic_error(std::string("row '") + row.cells + "' has two starred cells");
      }
      starred = i;
    }
  }
  if (starred < 0) {
    throw std::logic_error(std::string("row '") + row.cells + "' has no starred cell");
  }

  auto plus_cells = cells;
  plus_cells[starred][1] = '+';
  auto minus_cells = cells;
  minus_cells[starred][1] = '-';

  const InstructionSet plus_variant = set_from_cells(plus_cells);
  const InstructionSet minus_variant = set_from_cells(minus_cells);
  return {plus_variant, minus_variant, plus_variant.sign_flipped(),
          minus_variant.sign_flipped()};
}

std::array<Contribution, 4> parse_contributions(const char* text) {
  auto cells = split_cells(text);
  std::array<Contribution, 4> contributions;
  for (int i = 0; i < 4; ++i) {
    if (cells[i] == "rej") {
      contributions[i] = std::nullopt;
    } else if (cells[i] == "+1") {
      contributions[i] = +1;
    } else if (cells[i] == "-1") {
      contributions[i] = -1;
    } else {
      throw std::logic_error("bad contribution cell '" + cells[i] + "'");
    }
  }
  return contributions;
}

ForgeryFamilies forgery_families() {
  ForgeryFamilies families;
  for (const ForgeryRow& row : kPlusRows) {
    for (const InstructionSet& set : expand_row(row)) {
      families.plus.push_back(set);
    }
  }
  for (const ForgeryRow& row : kMinusRows) {
    for (const InstructionSet& set : expand_row(row)) {
      families.minus.push_back(set);
    }
  }
  return families;
}

LhvModel forgery_model(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("mixture parameter p must be in [0, 1]");
  }
  const ForgeryFamilies families = forgery_families();
  LhvModel model;
  for (const InstructionSet& set : families.plus) {
    model.weights[set.index()] += p / 32.0;
  }
  for (const InstructionSet& set : families.minus) {
    model.weights[set.index()] += (1.0 - p) / 32.0;
  }
  return model;
}

std::array<Contribution, 4> coincidence_contributions(const InstructionSet& set) {
  std::array<Contribution, 4> contributions;
  for (int idx = 0; idx < 4; ++idx) {
    const auto [photon1, photon2] = evaluate_set(set, pair_from_index(idx));
    if (photon1.path == photon2.path) {
      contributions[idx] = photon1.sign * photon2.sign;
    } else {
      contributions[idx] = std::nullopt;
    }
  }
  return contributions;
}

PostselectedBeta coincidence_beta_exact(const LhvModel& model) {
  model.validate();
  std::array<double, 4> kept_weight{};
  std::array<double, 4> signed_weight{};
  for (int i = 0; i < 256; ++i) {
    const double w = model.weights[i];
    if (w == 0.0) {
      continue;
    }
    const auto contributions = coincidence_contributions(InstructionSet::from_index(i));
    for (int idx = 0; idx < 4; ++idx) {
      if (contributions[idx]) {
        kept_weight[idx] += w;
        signed_weight[idx] += w * *contributions[idx];
      }
    }
  }

  PostselectedBeta result;
  std::array<double, 4> correlators{};
  for (int idx = 0; idx < 4; ++idx) {
    if (kept_weight[idx] <= 0.0) {
      throw std::domain_error(std::string("correlator undefined: zero keep probability on ") +
                              pair_label(idx));
    }
    correlators[idx] = signed_weight[idx] / kept_weight[idx];
    result.keep_prob[idx] = kept_weight[idx];
  }
  result.chsh = ChshValue::from_correlators(correlators);
  return result;
}

double solve_p_for_beta(double target_beta) {
  if (!(target_beta >= -4.0 && target_beta <= 4.0)) {
    throw std::invalid_argument("target beta must be in [-4, 4]");
  }
  const double p = (target_beta + 4.0) / 8.0;
  // beta(p) is affine with endpoints -4 and +4; double-check by evaluation.
  const double achieved = coincidence_beta_exact(forgery_model(p)).chsh.beta;
  if (std::abs(achieved - target_beta) > 1e-9) {
    throw std::logic_error("mixture inversion drifted: wanted " + std::to_string(target_beta) +
                           ", got " + std::to_string(achieved));
  }
  return p;
}

} // namespace bellsim
