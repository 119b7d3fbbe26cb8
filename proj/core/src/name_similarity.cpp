#include "cdcoach/name_similarity.hpp"

#include <algorithm>

namespace cdcoach {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

bool isSpace(char32_t c) {
  switch (c) {
    case U' ':
    case U'\t':
    case U'\n':
    case U'\v':
    case U'\f':
    case U'\r':
    case 0x85:
    case 0xA0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

// Simple one-to-one case folding for the scripts class names realistically
// use: ASCII, Latin-1, Greek, Cyrillic and fullwidth Latin.
char32_t toLower(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 0x20;
  if (c < 0x80) return c;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 0x20;
  if (c >= 0x410 && c <= 0x42F) return c + 0x20;
  if (c >= 0x400 && c <= 0x40F) return c + 0x50;
  if (c >= 0xFF21 && c <= 0xFF3A) return c + 0x20;
  return c;
}

void appendUtf8(std::string& out, char32_t c) {
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

std::size_t commonCount(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia == *ib) {
      ++common;
      ++ia;
      ++ib;
    } else if (*ia < *ib) {
      ++ia;
    } else {
      ++ib;
    }
  }
  return common;
}

}  // namespace

std::u32string decodeUtf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    if (lead < 0x80) {
      len = 1;
      cp = lead;
    } else if ((lead & 0xE0) == 0xC0) {
      len = 2;
      cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
      len = 3;
      cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
      len = 4;
      cp = lead & 0x07;
    } else {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    if (i + len > text.size()) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    bool ok = true;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cont = static_cast<unsigned char>(text[i + k]);
      if ((cont & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cont & 0x3F);
    }
    // Reject overlong forms, surrogates and out-of-range values.
    static constexpr char32_t kMinForLength[] = {0, 0, 0x80, 0x800, 0x10000};
    if (!ok || cp < kMinForLength[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

NormalizedName normalizeName(std::string_view name) {
  NormalizedName out;
  out.text.reserve(name.size());
  bool pendingSpace = false;
  for (const char32_t raw : decodeUtf8(name)) {
    if (isSpace(raw)) {
      pendingSpace = !out.text.empty();
      continue;
    }
    if (pendingSpace) {
      out.text.push_back(' ');
      pendingSpace = false;
    }
    appendUtf8(out.text, toLower(raw));
  }
  return out;
}

std::vector<std::uint64_t> bigramBag(const NormalizedName& name) {
  const std::u32string cps = decodeUtf8(name.text);
  std::vector<std::uint64_t> bag;
  if (cps.size() < 2) return bag;
  bag.reserve(cps.size() - 1);
  for (std::size_t i = 0; i + 1 < cps.size(); ++i) {
    bag.push_back((static_cast<std::uint64_t>(cps[i]) << 32) | cps[i + 1]);
  }
  std::sort(bag.begin(), bag.end());
  return bag;
}

double nameSim(std::string_view a, std::string_view b, SimilarityDenominator denominator) {
  const NormalizedName na = normalizeName(a);
  const NormalizedName nb = normalizeName(b);
  if (na == nb) return 1.0;

  const auto bagA = bigramBag(na);
  const auto bagB = bigramBag(nb);
  if (bagA.empty() || bagB.empty()) return 0.0;

  const auto common = static_cast<double>(commonCount(bagA, bagB));
  if (denominator == SimilarityDenominator::kStringLength) {
    // Code-point lengths are bag sizes + 1.
    return 2.0 * common / static_cast<double>(bagA.size() + bagB.size() + 2);
  }
  return 2.0 * common / static_cast<double>(bagA.size() + bagB.size());
}

}  // namespace cdcoach
