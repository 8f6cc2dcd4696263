/*******************************************************************************
 *
 * Variable identities. A variable has a name, a kind, and a temporality:
 * the next-state version of `v` is the same name with Temporality::Next
 * (written `v'` in concrete syntax).
 *
 ******************************************************************************/

#pragma once

#include <compare>
#include <functional>
#include <string>

namespace predkit {

enum class Kind { Boolean, Integer, Enumerated };

enum class Temporality { Current, Next };

struct VarId {
  std::string name;
  Kind kind = Kind::Integer;
  Temporality temporality = Temporality::Current;

  friend auto operator<=>(const VarId& a, const VarId& b) {
    if (auto c = a.name <=> b.name; c != 0) return c;
    if (auto c = a.temporality <=> b.temporality; c != 0) return c;
    return a.kind <=> b.kind;
  }
  friend bool operator==(const VarId&, const VarId&) = default;

  bool is_next() const { return temporality == Temporality::Next; }

  // The next-state twin of a current-state variable (and vice versa).
  VarId primed() const { return {name, kind, Temporality::Next}; }
  VarId unprimed() const { return {name, kind, Temporality::Current}; }

  std::string to_string() const {
    return is_next() ? name + "'" : name;
  }
};

}  // namespace predkit

template <>
struct std::hash<predkit::VarId> {
  std::size_t operator()(const predkit::VarId& v) const noexcept {
    std::size_t h = std::hash<std::string>{}(v.name);
    h ^= (static_cast<std::size_t>(v.kind) + 1) * 0x9e3779b97f4a7c15ull;
    h ^= (static_cast<std::size_t>(v.temporality) + 7) * 0xc2b2ae3d27d4eb4full;
    return h;
  }
};
