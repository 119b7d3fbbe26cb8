#pragma once

#include <array>

#include "cdcoach/model.hpp"

namespace cdcoach {

// Preset similarity of two multiplicity tokens (ABSENT included). Symmetric,
// diagonal fixed at 1.0, every entry in [0, 1].
class CaSTable {
 public:
  /// Bound-sharing default: the four tokens are read as intervals
  /// 1=[1,1], 0..1=[0,1], 1..*=[1,inf], *=[0,inf] and each shared endpoint
  /// is worth 0.5. ABSENT matches only ABSENT.
  static CaSTable defaults();

  double at(MultiplicityKind a, MultiplicityKind b) const;

  /// Sets both (a,b) and (b,a). Throws std::invalid_argument for a value
  /// outside [0,1] or a diagonal value other than 1.0.
  void set(MultiplicityKind a, MultiplicityKind b, double value);

  friend bool operator==(const CaSTable&, const CaSTable&) = default;

 private:
  static constexpr std::size_t kKinds = 5;
  std::array<std::array<double, kKinds>, kKinds> values_{};
};

/// Table lookup. Out-of-enum tokens (only possible on unvalidated diagrams)
/// score 0.
double multiplicitySimilarity(const Multiplicity& a, const Multiplicity& b, const CaSTable& table);

}  // namespace cdcoach
