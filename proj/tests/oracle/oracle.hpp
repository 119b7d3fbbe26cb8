#pragma once

// Reference implementations used only by tests. They work on plain ASCII
// names, use exact rational arithmetic and share no code with the library.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cdcoach/model.hpp"

namespace oracle {

class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double toDouble() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::string normalize(const std::string& name);
Rational nameSim(const std::string& a, const std::string& b);

struct Pairing {
  std::string studentId;
  std::string answerId;
  Rational score;
};

struct ClassResult {
  std::string studentId;
  std::optional<std::string> answerId;
  Rational cs;
};

struct RelResult {
  std::string studentId;
  std::optional<std::string> answerId;
  Rational rs;
};

struct Report {
  Rational cds;
  Rational csAll;
  Rational rsAll;
  std::vector<ClassResult> perClass;  // sorted by student id
  std::vector<RelResult> perRelationship;  // sorted by student id
  std::size_t nmc = 0;
  std::size_t nmr = 0;
};

/// Defaults: name threshold 1/2, bound-sharing multiplicity similarity.
Report similarity(const cdcoach::ClassDiagram& student, const cdcoach::ClassDiagram& answer);

/// (answerId, studentId) pairs of the layout correspondence, threshold 2/5.
std::vector<std::pair<std::string, std::string>> correspondences(
    const cdcoach::ClassDiagram& student, const cdcoach::ClassDiagram& answer);

double mean(const std::vector<double>& xs);
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

struct TTest {
  double t;
  double df;
  double p;
};

/// Welch or pooled t-test; p from Simpson integration of the t density.
TTest tTest(const std::vector<double>& a, const std::vector<double>& b, bool welch);

}  // namespace oracle
