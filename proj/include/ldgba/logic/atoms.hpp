#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ldgba::logic {

/// An element of 2^AP, stored as a bitmask over the owning AtomSet's ordering.
struct Symbol {
  std::uint32_t bits = 0;

  constexpr bool has(std::size_t atom) const { return (bits >> atom) & 1u; }
  constexpr bool empty() const { return bits == 0; }
  friend constexpr bool operator==(Symbol, Symbol) = default;
  friend constexpr auto operator<=>(Symbol, Symbol) = default;
};

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(s.front())) return false;
  return std::all_of(s.begin() + 1, s.end(), [&](char c) { return alpha(c) || digit(c); });
}

/// Reserved words of the formula grammar; they can never name an atom.
inline bool is_reserved(std::string_view s) {
  return s == "true" || s == "X" || s == "U" || s == "F" || s == "G";
}

/// Ordered set of atomic proposition names. The lexicographic order fixes
/// the bit assigned to each atom in every Symbol built over this set.
class AtomSet {
 public:
  static constexpr std::size_t max_atoms = 16;

  AtomSet() = default;
  AtomSet(std::initializer_list<std::string> names) : AtomSet(std::vector<std::string>(names)) {}
  explicit AtomSet(std::vector<std::string> names) : names_(std::move(names)) {
    std::sort(names_.begin(), names_.end());
    names_.erase(std::unique(names_.begin(), names_.end()), names_.end());
    for (const auto& n : names_) {
      if (!is_identifier(n) || is_reserved(n)) throw std::invalid_argument("invalid atom name '" + n + "'");
    }
    if (names_.size() > max_atoms) throw std::invalid_argument("too many atoms (max 16)");
  }

  /// Parses a comma separated list such as "a,b,c".
  static AtomSet from_csv(std::string_view csv) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : csv) {
      if (c == ',') {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
      } else if (c != ' ') {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) out.push_back(cur);
    return AtomSet(std::move(out));
  }

  std::size_t size() const { return names_.size(); }
  std::size_t symbol_count() const { return std::size_t{1} << names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }

  bool contains(std::string_view n) const { return std::binary_search(names_.begin(), names_.end(), n); }

  std::size_t index_of(std::string_view n) const {
    auto it = std::lower_bound(names_.begin(), names_.end(), n);
    if (it == names_.end() || *it != n) throw std::out_of_range("unknown atom '" + std::string(n) + "'");
    return static_cast<std::size_t>(it - names_.begin());
  }

  Symbol symbol(std::initializer_list<std::string_view> atoms) const {
    Symbol s;
    for (auto a : atoms) s.bits |= 1u << index_of(a);
    return s;
  }
  Symbol symbol_of(const std::vector<std::string>& atoms) const {
    Symbol s;
    for (const auto& a : atoms) s.bits |= 1u << index_of(a);
    return s;
  }

  std::vector<std::string> atoms_of(Symbol s) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (s.has(i)) out.push_back(names_[i]);
    return out;
  }

  /// "{a,c}" style rendering; the empty symbol prints as "{}".
  std::string format(Symbol s) const {
    std::string out = "{";
    bool first = true;
    for (const auto& n : atoms_of(s)) {
      if (!first) out += ",";
      out += n;
      first = false;
    }
    return out + "}";
  }

  bool is_subset_of(const AtomSet& other) const {
    return std::all_of(names_.begin(), names_.end(), [&](const auto& n) { return other.contains(n); });
  }

  friend bool operator==(const AtomSet&, const AtomSet&) = default;

 private:
  std::vector<std::string> names_;
};

/// Maps symbols over one atom set onto another by atom name. Atoms missing
/// from the target are dropped.
class SymbolProjection {
 public:
  SymbolProjection() = default;
  SymbolProjection(const AtomSet& from, const AtomSet& to) : target_bit_(from.size(), -1) {
    for (std::size_t i = 0; i < from.size(); ++i)
      if (to.contains(from.name(i))) target_bit_[i] = static_cast<int>(to.index_of(from.name(i)));
  }

  Symbol operator()(Symbol s) const {
    Symbol out;
    for (std::size_t i = 0; i < target_bit_.size(); ++i)
      if (s.has(i) && target_bit_[i] >= 0) out.bits |= 1u << target_bit_[i];
    return out;
  }

 private:
  std::vector<int> target_bit_;
};

}  // namespace ldgba::logic
