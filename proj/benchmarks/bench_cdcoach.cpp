#include <benchmark/benchmark.h>

#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "cdcoach/cdx.hpp"
#include "cdcoach/layout.hpp"
#include "cdcoach/name_similarity.hpp"
#include "cdcoach/similarity.hpp"
#include "cdcoach/stats.hpp"

namespace {

cdcoach::ClassDiagram loadDiagram(const char* relative) {
  std::ifstream in(std::string(CDCOACH_SOURCE_DIR) + "/" + relative);
  std::ostringstream text;
  text << in.rdbuf();
  return cdcoach::parseDiagram(text.str());
}

// Answer key with every class renamed slightly and shifted, so matching has work to do.
cdcoach::ClassDiagram perturbed(cdcoach::ClassDiagram d) {
  for (auto& c : d.classes) {
    c.name += "s";
    c.x += 37;
    c.y -= 11;
  }
  return d;
}

// Synthetic diagram with n classes, 4 attributes each, and a chain of relationships.
cdcoach::ClassDiagram synthetic(int n, std::uint64_t seed) {
  static const char* words[] = {"order", "customer", "product", "inventory", "cart", "invoice",
                                "payment", "shipment", "address", "category"};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, 9);
  cdcoach::ClassDiagram d;
  for (int i = 0; i < n; ++i) {
    cdcoach::ClassNode c;
    c.id = "c" + std::to_string(i);
    c.name = std::string(words[pick(rng)]) + " " + words[pick(rng)];
    c.width = 120;
    c.height = 80;
    for (int k = 0; k < 4; ++k) c.attributes.push_back({c.id + "." + std::to_string(k), words[pick(rng)]});
    d.classes.push_back(std::move(c));
  }
  for (int i = 1; i < n; ++i) {
    cdcoach::Relationship r;
    r.id = "r" + std::to_string(i);
    r.endA = "c" + std::to_string(i - 1);
    r.endB = "c" + std::to_string(i);
    r.multA = cdcoach::Multiplicity::fromToken("1");
    r.multB = cdcoach::Multiplicity::fromToken("*");
    d.relationships.push_back(std::move(r));
  }
  return d;
}

void BM_NameSim(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(cdcoach::nameSim("order acceptance date", "order accepted date"));
  }
}
BENCHMARK(BM_NameSim);

void BM_SimilarityWakaba(benchmark::State& state) {
  const auto answer = loadDiagram("data/wakaba/answer.json");
  const auto student = perturbed(answer);
  for (auto _ : state) benchmark::DoNotOptimize(cdcoach::classDiagramSimilarity(student, answer));
}
BENCHMARK(BM_SimilarityWakaba);

void BM_SimilaritySynthetic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto answer = synthetic(n, 1);
  const auto student = synthetic(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(cdcoach::classDiagramSimilarity(student, answer));
  state.SetComplexityN(n);
}
BENCHMARK(BM_SimilaritySynthetic)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void BM_TransformLayoutWakaba(benchmark::State& state) {
  const auto answer = loadDiagram("data/wakaba/answer.json");
  const auto student = perturbed(answer);
  for (auto _ : state) benchmark::DoNotOptimize(cdcoach::transformLayout(student, answer, {}));
}
BENCHMARK(BM_TransformLayoutWakaba);

void BM_TTest(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  std::vector<double> a(static_cast<std::size_t>(state.range(0)));
  std::vector<double> b(a.size());
  for (double& v : a) v = normal(rng);
  for (double& v : b) v = normal(rng) + 0.3;
  for (auto _ : state) benchmark::DoNotOptimize(cdcoach::tTestTwoTailed(a, b));
}
BENCHMARK(BM_TTest)->Arg(10)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
