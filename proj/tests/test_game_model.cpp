#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <stdexcept>

#include "ipdlearn/game_model.hpp"

using namespace ipdlearn;

namespace {

// Every set partition of {1,2,3,4} as blocks, generated from restricted
// growth strings.
std::vector<std::vector<std::vector<int>>> AllPartitions() {
  std::vector<std::vector<std::vector<int>>> out;
  std::array<int, 4> g{};
  std::function<void(int, int)> rec = [&](int pos, int max_used) {
    if (pos == 4) {
      std::vector<std::vector<int>> blocks(static_cast<std::size_t>(max_used + 1));
      for (int i = 0; i < 4; ++i) blocks[static_cast<std::size_t>(g[i])].push_back(i + 1);
      out.push_back(blocks);
      return;
    }
    for (int b = 0; b <= max_used + 1; ++b) {
      g[pos] = b;
      rec(pos + 1, std::max(max_used, b));
    }
  };
  g[0] = 0;
  rec(1, 0);
  return out;
}

}  // namespace

TEST_CASE("payoff matrix ordering is enforced") {
  CHECK_NOTHROW(PayoffMatrix(5, 3, 1, 0));
  CHECK_NOTHROW(PayoffMatrix(5, 4, 2, 0));
  CHECK_THROWS_AS(PayoffMatrix(3, 5, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(PayoffMatrix(5, 1, 3, 0), std::invalid_argument);
  CHECK_THROWS_AS(PayoffMatrix(5, 3, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(PayoffMatrix(5, 5, 1, 0), std::invalid_argument);

  const PayoffMatrix pm = PayoffMatrix::Parse("5,3,1,0");
  CHECK(pm == PayoffMatrix::Standard());
  CHECK(pm.focal() == Vec4(3, 0, 5, 1));
  CHECK(pm.opponent() == Vec4(3, 5, 0, 1));
  CHECK(pm.ToString() == "5,3,1,0");
  CHECK(PayoffMatrix::Parse(" 5.5,3,1,-1").T() == 5.5);
  CHECK_THROWS_AS(PayoffMatrix::Parse("5,3,1"), std::invalid_argument);
  CHECK_THROWS_AS(PayoffMatrix::Parse("5,3,x,0"), std::invalid_argument);
  CHECK_THROWS_AS(PayoffMatrix::Parse("1,3,5,0"), std::invalid_argument);
}

TEST_CASE("class codes from partitions") {
  CHECK(InformationClass::FromPartition({{1}, {2}, {3}, {4}}).code() == "1234");
  CHECK(InformationClass::FromPartition({{1, 3}, {2, 4}}).code() == "1212");
  CHECK(InformationClass::FromPartition({{1, 2, 3, 4}}).code() == "1111");
  CHECK(InformationClass::FromPartition({{2, 4}, {3}, {1}}).code() == "1232");
  CHECK(InformationClass::FromPartition({{4}, {3, 1}, {2}}).code() == "1214");
  CHECK(InformationClass::FromPartition({{3}, {1, 2, 4}}).code() == "1131");

  CHECK_THROWS_AS(InformationClass::FromPartition({{1, 2}, {2, 3, 4}}), std::invalid_argument);
  CHECK_THROWS_AS(InformationClass::FromPartition({{1, 2}, {3}}), std::invalid_argument);
  CHECK_THROWS_AS(InformationClass::FromPartition({{1, 2}, {}, {3, 4}}), std::invalid_argument);
  CHECK_THROWS_AS(InformationClass::FromPartition({{0, 1}, {2, 3, 4}}), std::invalid_argument);
  CHECK_THROWS_AS(InformationClass::FromPartition({{1, 2, 3, 5}}), std::invalid_argument);
}

TEST_CASE("only canonical codes are accepted") {
  for (const char* bad : {"2134", "1213", "1123", "123", "12345", "1205", "abcd", "1223"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(InformationClass{bad}, std::invalid_argument);
  }
  const InformationClass c("1214");
  CHECK(c.num_blocks() == 3);
  CHECK(c.block_of(kCC) == c.block_of(kDC));
  CHECK(c.block_of(kCD) != c.block_of(kDD));
}

TEST_CASE("enumeration matches all set partitions") {
  const auto classes = EnumerateInformationClasses();
  REQUIRE(classes.size() == 15);
  CHECK(std::is_sorted(classes.begin(), classes.end()));

  std::set<std::string> from_partitions;
  for (const auto& p : AllPartitions()) from_partitions.insert(InformationClass::FromPartition(p).code());
  std::set<std::string> enumerated;
  for (const auto& c : classes) enumerated.insert(c.code());
  CHECK(from_partitions == enumerated);

  for (const char* code : {"1214", "1232", "1133", "1111", "1131", "1212", "1234"}) {
    CHECK(enumerated.count(code) == 1);
  }
  // Canonicalizing a class's own blocks is the identity.
  for (const auto& c : classes) {
    std::vector<std::vector<int>> blocks;
    for (const auto& b : c.blocks()) {
      blocks.emplace_back();
      for (std::size_t i : b) blocks.back().push_back(static_cast<int>(i) + 1);
    }
    CHECK(InformationClass::FromPartition(blocks) == c);
  }
}

TEST_CASE("opponent-referencing classes") {
  std::vector<std::string> blind;
  for (const auto& c : EnumerateInformationClasses()) {
    if (!ReferencesOpponent(c)) blind.push_back(c.code());
  }
  CHECK(blind == std::vector<std::string>{"1111", "1133"});
  CHECK(OpponentReferencingClasses().size() == 13);
}

TEST_CASE("refinement order") {
  const InformationClass c1234("1234"), c1212("1212"), c1111("1111"), c1214("1214"),
      c1232("1232"), c1131("1131");
  CHECK(Refines(c1234, c1212));
  CHECK(Refines(c1212, c1111));
  CHECK_FALSE(Refines(c1212, c1234));
  CHECK(Refines(c1232, c1131));
  CHECK_FALSE(Refines(c1131, c1232));
  CHECK_FALSE(Refines(c1214, c1232));
  CHECK_FALSE(Refines(c1232, c1214));
  CHECK(Refines(c1214, c1212));

  const auto all = EnumerateInformationClasses();
  for (const auto& a : all) {
    CHECK(Refines(a, a));
    CHECK(Refines(c1234, a));
    CHECK(Refines(a, c1111));
    for (const auto& b : all) {
      if (Refines(a, b) && Refines(b, a)) CHECK(a == b);
      for (const auto& c : all) {
        if (Refines(a, b) && Refines(b, c)) CHECK(Refines(a, c));
      }
    }
  }
}

TEST_CASE("refinement is strategy-set inclusion") {
  // b's strategies are all expressible in a exactly when a refines b. A
  // strategy on b with distinct block values is a witness for the converse.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto all = EnumerateInformationClasses();
  for (const auto& a : all) {
    for (const auto& b : all) {
      std::vector<double> probs;
      for (std::size_t k = 0; k < b.num_blocks(); ++k) probs.push_back(0.1 + 0.2 * static_cast<double>(k) + 0.01 * u(rng));
      const MemoryOneStrategy m = ClassStrategy(b, probs).Embed();
      bool representable = true;
      for (const auto& block : a.blocks()) {
        for (std::size_t i : block) representable = representable && m[i] == m[block.front()];
      }
      CAPTURE(a.code());
      CAPTURE(b.code());
      CHECK(representable == Refines(a, b));
    }
  }
}

TEST_CASE("embedding") {
  const ClassStrategy reactive(InformationClass("1212"), {0.9, 0.1});
  CHECK(reactive.Embed() == MemoryOneStrategy{{0.9, 0.1, 0.9, 0.1}});
  const ClassStrategy full(InformationClass("1234"), {0.1, 0.2, 0.3, 0.4});
  CHECK(full.Embed() == MemoryOneStrategy{{0.1, 0.2, 0.3, 0.4}});
  const ClassStrategy c1214(InformationClass("1214"), {0.7, 0.2, 0.5});
  CHECK(c1214.Embed() == MemoryOneStrategy{{0.7, 0.2, 0.7, 0.5}});

  CHECK_THROWS_AS(ClassStrategy(InformationClass("1212"), {0.5}), std::invalid_argument);
  CHECK_THROWS_AS(ClassStrategy(InformationClass("1212"), {0.5, 1.5}), std::invalid_argument);
  CHECK_THROWS_AS(ClassStrategy(InformationClass("1111"), {-0.1}), std::invalid_argument);

  // Distinct block values embed to distinct strategies, constant on blocks.
  for (const auto& c : EnumerateInformationClasses()) {
    std::vector<double> a(c.num_blocks()), b(c.num_blocks());
    for (std::size_t k = 0; k < a.size(); ++k) {
      a[k] = 0.1 * static_cast<double>(k + 1);
      b[k] = a[k];
    }
    b.back() += 0.05;
    const MemoryOneStrategy ea = ClassStrategy(c, a).Embed(), eb = ClassStrategy(c, b).Embed();
    CHECK_FALSE(ea == eb);
    for (std::size_t i = 0; i < 4; ++i) CHECK(ea[i] == a[c.block_of(i)]);
  }
}

TEST_CASE("clipping") {
  const MemoryOneStrategy s{{0.0, 1.0, 0.5, 1e-9}};
  CHECK_FALSE(s.IsInterior());
  const MemoryOneStrategy c = s.Clipped(1e-4);
  CHECK(c == MemoryOneStrategy{{1e-4, 1.0 - 1e-4, 0.5, 1e-4}});
  CHECK(c.IsInterior());
  const ClassStrategy k = ClassStrategy(InformationClass("1212"), {0.0, 1.0}).Clipped(0.01);
  CHECK(k.probs == std::vector<double>{0.01, 0.99});
}
