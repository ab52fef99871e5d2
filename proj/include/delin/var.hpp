#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace delin {

using NameId = std::uint16_t;

// Process-wide interned name table. Thread safe.
NameId intern(std::string_view name);
const std::string& nameOf(NameId id);

inline constexpr int kMaxArity = 6;
using MultiIndex = std::array<std::uint8_t, kMaxArity>;

unsigned order(const MultiIndex& a);
MultiIndex unitIndex(int i);
MultiIndex addIndex(const MultiIndex& a, const MultiIndex& b);
bool dividesIndex(const MultiIndex& a, const MultiIndex& b);  // a <= b entrywise
MultiIndex subIndex(const MultiIndex& b, const MultiIndex& a);  // requires a <= b
MultiIndex lcmIndex(const MultiIndex& a, const MultiIndex& b);

// A variable is either a plain symbol (independent variable, parameter,
// auxiliary) or a derivative Deriv(name, alpha) of an unknown. Order-0
// derivatives stand for the unknown itself. Packed into 64 bits:
//   bit 63 kind, bits 62..48 name id, bits 47..0 six 8-bit index entries.
class Var {
 public:
  Var() = default;
  static Var symbol(NameId id) { return Var((std::uint64_t(id) & 0x7fff) << 48); }
  static Var symbol(std::string_view name) { return symbol(intern(name)); }
  static Var deriv(NameId id, const MultiIndex& idx);
  static Var deriv(std::string_view name, const MultiIndex& idx) { return deriv(intern(name), idx); }

  bool isSymbol() const { return (bits_ >> 63) == 0; }
  bool isDeriv() const { return (bits_ >> 63) == 1; }
  NameId name() const { return NameId((bits_ >> 48) & 0x7fff); }
  MultiIndex index() const;
  unsigned order() const { return isDeriv() ? delin::order(index()) : 0; }
  std::uint64_t bits() const { return bits_; }

  Var withIndex(const MultiIndex& idx) const { return deriv(name(), idx); }

  auto operator<=>(const Var&) const = default;

 private:
  explicit Var(std::uint64_t b) : bits_(b) {}
  std::uint64_t bits_ = 0;
};

}  // namespace delin

template <>
struct std::hash<delin::Var> {
  std::size_t operator()(const delin::Var& v) const noexcept {
    std::uint64_t x = v.bits();
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    return std::size_t(x);
  }
};
