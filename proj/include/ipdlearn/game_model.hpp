#ifndef IPDLEARN_GAME_MODEL_HPP
#define IPDLEARN_GAME_MODEL_HPP

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace ipdlearn {

// Outcome order used everywhere: CC, CD, DC, DD. The left letter is the
// focal player's own action.
enum Outcome : std::size_t { kCC = 0, kCD = 1, kDC = 2, kDD = 3 };

using Vec4 = Eigen::Vector4d;

class PayoffMatrix {
 public:
  // Throws std::invalid_argument unless T > R > P > S.
  PayoffMatrix(double T, double R, double P, double S);

  double T() const { return T_; }
  double R() const { return R_; }
  double P() const { return P_; }
  double S() const { return S_; }

  // (R, S, T, P) over (CC, CD, DC, DD)
  Vec4 focal() const { return {R_, S_, T_, P_}; }
  // (R, T, S, P): the opponent sees CD as its DC
  Vec4 opponent() const { return {R_, T_, S_, P_}; }

  static PayoffMatrix Standard() { return {5.0, 3.0, 1.0, 0.0}; }
  // Parses "T,R,P,S".
  static PayoffMatrix Parse(std::string_view text);
  std::string ToString() const;

  bool operator==(const PayoffMatrix&) const = default;

 private:
  double T_, R_, P_, S_;
};

// Cooperation probabilities after CC, CD, DC, DD (self perspective).
struct MemoryOneStrategy {
  std::array<double, 4> x{};

  double operator[](std::size_t i) const { return x[i]; }
  double& operator[](std::size_t i) { return x[i]; }

  MemoryOneStrategy Clipped(double eps) const;
  bool IsInterior() const;
  bool operator==(const MemoryOneStrategy&) const = default;
};

// A partition of the four outcomes into blocks the player cannot tell apart.
// The code labels each outcome by the smallest outcome index (1-based) of its
// block, e.g. the reactive class {1,3},{2,4} is "1212" and {1,3},{2},{4} is
// "1214".
class InformationClass {
 public:
  // Accepts a canonical 4-digit code; throws std::invalid_argument otherwise.
  explicit InformationClass(std::string_view code);

  // Canonicalizes an arbitrary partition given as blocks of 1-based indices.
  // Throws std::invalid_argument on overlapping, missing, or empty blocks.
  static InformationClass FromPartition(const std::vector<std::vector<int>>& blocks);

  const std::string& code() const { return code_; }
  std::size_t num_blocks() const { return blocks_.size(); }
  // Blocks as 0-based outcome indices, ordered by their smallest member.
  const std::vector<std::vector<std::size_t>>& blocks() const { return blocks_; }
  // Block index (0-based) containing outcome i (0-based).
  std::size_t block_of(std::size_t outcome) const { return block_of_[outcome]; }

  bool operator==(const InformationClass& o) const { return code_ == o.code_; }
  bool operator<(const InformationClass& o) const { return code_ < o.code_; }

 private:
  std::string code_;
  std::vector<std::vector<std::size_t>> blocks_;
  std::array<std::size_t, 4> block_of_{};
};

// All 15 classes, sorted lexicographically by code.
std::vector<InformationClass> EnumerateInformationClasses();

// The 13 classes that condition on the opponent's action, sorted by code.
std::vector<InformationClass> OpponentReferencingClasses();

// True iff a's partition refines b's, i.e. a is at least as complex as b.
bool Refines(const InformationClass& a, const InformationClass& b);

// True iff, for some own action, the class tells the opponent's C from D.
bool ReferencesOpponent(const InformationClass& c);

struct ClassStrategy {
  InformationClass info_class;
  std::vector<double> probs;  // one per block

  // Throws std::invalid_argument if probs does not match the block count or
  // leaves [0,1].
  ClassStrategy(InformationClass c, std::vector<double> p);

  MemoryOneStrategy Embed() const;
  ClassStrategy Clipped(double eps) const;
  bool operator==(const ClassStrategy&) const = default;
};

}  // namespace ipdlearn

#endif  // IPDLEARN_GAME_MODEL_HPP
