#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace polytoep {

/// Exponent vector in Z^n.  Variables are numbered from 0 in the C++ and
/// Python APIs; rendered output (reports, formulas) numbers them from 1.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries) : e_(std::move(entries)) {}
  MultiIndex(std::initializer_list<int> entries) : e_(entries) {}

  static MultiIndex zeros(int n) { return MultiIndex(std::vector<int>(n, 0)); }
  static MultiIndex filled(int n, int value) {
    return MultiIndex(std::vector<int>(n, value));
  }
  static MultiIndex unit(int n, int i) {
    MultiIndex k = zeros(n);
    k.e_[i] = 1;
    return k;
  }

  int size() const { return static_cast<int>(e_.size()); }
  int operator[](int i) const { return e_[i]; }
  int& operator[](int i) { return e_[i]; }
  const std::vector<int>& entries() const { return e_; }

  int total_degree() const {
    int s = 0;
    for (int v : e_) s += v;
    return s;
  }
  int max_entry() const {
    return e_.empty() ? 0 : *std::max_element(e_.begin(), e_.end());
  }
  int min_entry() const {
    return e_.empty() ? 0 : *std::min_element(e_.begin(), e_.end());
  }
  bool is_zero() const {
    return std::all_of(e_.begin(), e_.end(), [](int v) { return v == 0; });
  }
  bool is_nonnegative() const {
    return std::all_of(e_.begin(), e_.end(), [](int v) { return v >= 0; });
  }

  /// Componentwise order: k <= l iff k_i <= l_i for every i.
  bool le(const MultiIndex& other) const {
    for (int i = 0; i < size(); ++i)
      if (e_[i] > other.e_[i]) return false;
    return true;
  }

  MultiIndex operator+(const MultiIndex& o) const {
    MultiIndex r = *this;
    for (int i = 0; i < size(); ++i) r.e_[i] += o.e_[i];
    return r;
  }
  MultiIndex operator-(const MultiIndex& o) const {
    MultiIndex r = *this;
    for (int i = 0; i < size(); ++i) r.e_[i] -= o.e_[i];
    return r;
  }
  MultiIndex operator-() const {
    MultiIndex r = *this;
    for (int& v : r.e_) v = -v;
    return r;
  }
  MultiIndex operator-(int s) const {
    MultiIndex r = *this;
    for (int& v : r.e_) v -= s;
    return r;
  }

  friend MultiIndex cwise_max(const MultiIndex& a, const MultiIndex& b) {
    MultiIndex r = a;
    for (int i = 0; i < a.size(); ++i) r.e_[i] = std::max(a.e_[i], b.e_[i]);
    return r;
  }
  friend MultiIndex cwise_min(const MultiIndex& a, const MultiIndex& b) {
    MultiIndex r = a;
    for (int i = 0; i < a.size(); ++i) r.e_[i] = std::min(a.e_[i], b.e_[i]);
    return r;
  }

  // Lexicographic; used only as a map key order.
  friend bool operator<(const MultiIndex& a, const MultiIndex& b) { return a.e_ < b.e_; }
  friend bool operator==(const MultiIndex& a, const MultiIndex& b) = default;

  std::string to_string() const {
    std::string s = "(";
    for (int i = 0; i < size(); ++i) {
      if (i) s += ",";
      s += std::to_string(e_[i]);
    }
    return s + ")";
  }
  friend std::ostream& operator<<(std::ostream& os, const MultiIndex& k) {
    return os << k.to_string();
  }

 private:
  std::vector<int> e_;
};

/// Subset of the variables {0, ..., n-1}; n <= 31.
class VarSet {
 public:
  VarSet() = default;
  explicit VarSet(std::uint32_t bits) : bits_(bits) {}
  VarSet(std::initializer_list<int> vars) {
    for (int v : vars) bits_ |= (1u << v);
  }
  static VarSet all(int n) { return VarSet(n >= 32 ? ~0u : ((1u << n) - 1u)); }

  bool contains(int i) const { return (bits_ >> i) & 1u; }
  VarSet with(int i) const { return VarSet(bits_ | (1u << i)); }
  VarSet operator|(VarSet o) const { return VarSet(bits_ | o.bits_); }
  VarSet operator&(VarSet o) const { return VarSet(bits_ & o.bits_); }
  int count() const { return std::popcount(bits_); }
  bool empty() const { return bits_ == 0; }
  std::uint32_t bits() const { return bits_; }

  std::vector<int> members() const {
    std::vector<int> out;
    for (int i = 0; i < 32; ++i)
      if (contains(i)) out.push_back(i);
    return out;
  }
  /// Rendered with 1-based variable numbers, e.g. "{1,3}".
  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (int i : members()) {
      if (!first) s += ",";
      s += std::to_string(i + 1);
      first = false;
    }
    return s + "}";
  }

  friend bool operator==(VarSet a, VarSet b) = default;
  friend auto operator<=>(VarSet a, VarSet b) = default;

 private:
  std::uint32_t bits_ = 0;
};

}  // namespace polytoep
