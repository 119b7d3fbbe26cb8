#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cdcoach {

// Lowercased, trimmed, internal whitespace runs collapsed to a single space.
struct NormalizedName {
  std::string text;  // UTF-8

  friend bool operator==(const NormalizedName&, const NormalizedName&) = default;
  friend auto operator<=>(const NormalizedName&, const NormalizedName&) = default;
};

NormalizedName normalizeName(std::string_view name);

/// Decodes UTF-8 into code points. Invalid sequences decode to U+FFFD.
std::u32string decodeUtf8(std::string_view text);

/// Adjacent code-point pairs, each packed as (first << 32 | second), sorted.
/// Size is max(len - 1, 0).
std::vector<std::uint64_t> bigramBag(const NormalizedName& name);

enum class SimilarityDenominator {
  kBigramCount,   // 2|A∩B| / (|A| + |B|)
  kStringLength,  // 2|A∩B| / (len(a) + len(b))
};

/// Bigram (Dice) similarity of two element names in [0, 1].
///
/// Both names are normalized first. Names equal after normalization score
/// 1.0, which also covers empty and single-character names. Otherwise a name
/// with no bigrams scores 0.0 and the rest use the multiset intersection of
/// the two bigram bags over the chosen denominator.
double nameSim(std::string_view a, std::string_view b,
               SimilarityDenominator denominator = SimilarityDenominator::kBigramCount);

}  // namespace cdcoach
