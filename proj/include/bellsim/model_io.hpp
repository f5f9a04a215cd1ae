#pragma once

#include <iosfwd>
#include <string>

#include "bellsim/lhv.hpp"

namespace bellsim {

/// Strategy-mixture text format: one entry per line,
///
///   <a0> <a1> <b0> <b1> <weight>
///
/// with cells in {S+, S-, L+, L-} and a non-negative decimal weight. Blank
/// lines and lines starting with '#' are ignored. A strategy may appear at
/// most once; weights must sum to 1 within 1e-12. Parse errors carry the line
/// number.
LhvModel parse_model(std::istream& in);
LhvModel load_model(const std::string& path);

/// Writes nonzero entries in index order, weights at full round-trip
/// precision (17 significant digits).
void write_model(std::ostream& out, const LhvModel& model);
void save_model(const std::string& path, const LhvModel& model);

} // namespace bellsim
