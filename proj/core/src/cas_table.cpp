#include "cdcoach/cas_table.hpp"

#include <limits>
#include <stdexcept>
#include <utility>

namespace cdcoach {

namespace {

std::size_t indexOf(MultiplicityKind kind) { return static_cast<std::size_t>(kind); }

std::pair<double, double> bounds(MultiplicityKind kind) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  switch (kind) {
    case MultiplicityKind::kOne:
      return {1, 1};
    case MultiplicityKind::kZeroOrOne:
      return {0, 1};
    case MultiplicityKind::kOneOrMore:
      return {1, kInf};
    case MultiplicityKind::kMany:
      return {0, kInf};
    case MultiplicityKind::kAbsent:
      break;
  }
  return {-1, -1};
}

constexpr std::array kAllKinds = {MultiplicityKind::kOne, MultiplicityKind::kZeroOrOne,
                                  MultiplicityKind::kOneOrMore, MultiplicityKind::kMany,
                                  MultiplicityKind::kAbsent};

}  // namespace

CaSTable CaSTable::defaults() {
  CaSTable table;
  for (const auto a : kAllKinds) {
    for (const auto b : kAllKinds) {
      double v = 0.0;
      if (a == b) {
        v = 1.0;
      } else if (a != MultiplicityKind::kAbsent && b != MultiplicityKind::kAbsent) {
        const auto [loA, hiA] = bounds(a);
        const auto [loB, hiB] = bounds(b);
        v = 0.5 * (loA == loB) + 0.5 * (hiA == hiB);
      }
      table.values_[indexOf(a)][indexOf(b)] = v;
    }
  }
  return table;
}

double CaSTable::at(MultiplicityKind a, MultiplicityKind b) const {
  return values_[indexOf(a)][indexOf(b)];
}

void CaSTable::set(MultiplicityKind a, MultiplicityKind b, double value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument("multiplicity similarity must lie in [0,1]");
  }
  if (a == b && value != 1.0) {
    throw std::invalid_argument("diagonal multiplicity similarity must be 1.0");
  }
  values_[indexOf(a)][indexOf(b)] = value;
  values_[indexOf(b)][indexOf(a)] = value;
}

double multiplicitySimilarity(const Multiplicity& a, const Multiplicity& b, const CaSTable& table) {
  const auto ka = a.kind();
  const auto kb = b.kind();
  if (!ka || !kb) return 0.0;
  return table.at(*ka, *kb);
}

}  // namespace cdcoach
