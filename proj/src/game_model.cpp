#include "ipdlearn/game_model.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

#include "ipdlearn/format.hpp"

namespace ipdlearn {

PayoffMatrix::PayoffMatrix(double T, double R, double P, double S) : T_(T), R_(R), P_(P), S_(S) {
  if (!(T > R && R > P && P > S)) {
    throw std::invalid_argument("payoff matrix must satisfy T>R>P>S, got " + ToString());
  }
}

PayoffMatrix PayoffMatrix::Parse(std::string_view text) {
  std::vector<double> vals;
  std::string s(text);
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      vals.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw std::invalid_argument("cannot parse payoff component '" + tok + "'");
    }
  }
  if (vals.size() != 4) {
    throw std::invalid_argument("payoff must be four comma-separated numbers T,R,P,S");
  }
  return {vals[0], vals[1], vals[2], vals[3]};
}

std::string PayoffMatrix::ToString() const {
  return FormatReal(T_) + ',' + FormatReal(R_) + ',' + FormatReal(P_) + ',' + FormatReal(S_);
}

MemoryOneStrategy MemoryOneStrategy::Clipped(double eps) const {
  MemoryOneStrategy c = *this;
  for (double& v : c.x) v = std::clamp(v, eps, 1.0 - eps);
  return c;
}

bool MemoryOneStrategy::IsInterior() const {
  return std::all_of(x.begin(), x.end(), [](double v) { return v > 0.0 && v < 1.0; });
}

namespace {

std::array<int, 4> CodeDigits(std::string_view code) {
  if (code.size() != 4) {
    throw std::invalid_argument("class code must have 4 digits: '" + std::string(code) + "'");
  }
  std::array<int, 4> d{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (code[i] < '1' || code[i] > '4') {
      throw std::invalid_argument("class code digits must be 1-4: '" + std::string(code) + "'");
    }
    d[i] = code[i] - '0';
  }
  return d;
}

// Canonical iff every digit is either its own position or the digit of an
// earlier position that labels itself.
bool IsCanonical(const std::array<int, 4>& d) {
  for (int i = 0; i < 4; ++i) {
    int label = d[i];
    if (label == i + 1) continue;
    if (label > i + 1) return false;
    if (d[label - 1] != label) return false;
  }
  return true;
}

}  // namespace

InformationClass::InformationClass(std::string_view code) : code_(code) {
  auto d = CodeDigits(code);
  if (!IsCanonical(d)) {
    throw std::invalid_argument("class code is not canonical: '" + code_ + "'");
  }
  for (std::size_t i = 0; i < 4; ++i) {
    std::size_t label = static_cast<std::size_t>(d[i] - 1);
    if (label == i) {
      block_of_[i] = blocks_.size();
      blocks_.push_back({i});
    } else {
      block_of_[i] = block_of_[label];
      blocks_[block_of_[i]].push_back(i);
    }
  }
}

InformationClass InformationClass::FromPartition(const std::vector<std::vector<int>>& blocks) {
  std::array<int, 4> owner{0, 0, 0, 0};
  for (const auto& b : blocks) {
    if (b.empty()) throw std::invalid_argument("partition has an empty block");
    int label = *std::min_element(b.begin(), b.end());
    for (int i : b) {
      if (i < 1 || i > 4) throw std::invalid_argument("partition index out of range 1..4");
      if (owner[i - 1] != 0) throw std::invalid_argument("partition blocks overlap");
      owner[i - 1] = label;
    }
  }
  std::string code;
  for (int o : owner) {
    if (o == 0) throw std::invalid_argument("partition does not cover {1,2,3,4}");
    code.push_back(static_cast<char>('0' + o));
  }
  return InformationClass(code);
}

std::vector<InformationClass> EnumerateInformationClasses() {
  std::vector<InformationClass> out;
  std::string code = "1000";
  for (char c2 : {'1', '2'}) {
    for (char c3 : {'1', '2', '3'}) {
      for (char c4 : {'1', '2', '3', '4'}) {
        code[1] = c2;
        code[2] = c3;
        code[3] = c4;
        if (IsCanonical(CodeDigits(code))) out.emplace_back(code);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<InformationClass> OpponentReferencingClasses() {
  auto all = EnumerateInformationClasses();
  std::erase_if(all, [](const InformationClass& c) { return !ReferencesOpponent(c); });
  return all;
}

bool Refines(const InformationClass& a, const InformationClass& b) {
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      if (a.block_of(i) == a.block_of(j) && b.block_of(i) != b.block_of(j)) return false;
    }
  }
  return true;
}

bool ReferencesOpponent(const InformationClass& c) {
  return c.block_of(kCC) != c.block_of(kCD) || c.block_of(kDC) != c.block_of(kDD);
}

ClassStrategy::ClassStrategy(InformationClass c, std::vector<double> p)
    : info_class(std::move(c)), probs(std::move(p)) {
  if (probs.size() != info_class.num_blocks()) {
    throw std::invalid_argument("class " + info_class.code() + " needs " +
                                std::to_string(info_class.num_blocks()) + " probabilities, got " +
                                std::to_string(probs.size()));
  }
  for (double v : probs) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("strategy probability outside [0,1]");
  }
}

MemoryOneStrategy ClassStrategy::Embed() const {
  MemoryOneStrategy m;
  for (std::size_t i = 0; i < 4; ++i) m[i] = probs[info_class.block_of(i)];
  return m;
}

ClassStrategy ClassStrategy::Clipped(double eps) const {
  ClassStrategy c = *this;
  for (double& v : c.probs) v = std::clamp(v, eps, 1.0 - eps);
  return c;
}

}  // namespace ipdlearn
