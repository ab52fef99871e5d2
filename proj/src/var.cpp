#include "delin/var.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>

namespace delin {

namespace {

struct NameTable {
  std::shared_mutex mu;
  std::deque<std::string> names;
  std::unordered_map<std::string, NameId> ids;
};

NameTable& table() {
  static NameTable t;
  return t;
}

}  // namespace

NameId intern(std::string_view name) {
  auto& t = table();
  std::string key(name);
  {
    std::shared_lock lock(t.mu);
    auto it = t.ids.find(key);
    if (it != t.ids.end()) return it->second;
  }
  std::unique_lock lock(t.mu);
  auto it = t.ids.find(key);
  if (it != t.ids.end()) return it->second;
  if (t.names.size() >= 0x7fff) throw std::length_error("name table full");
  NameId id = NameId(t.names.size());
  t.names.push_back(key);
  t.ids.emplace(std::move(key), id);
  return id;
}

const std::string& nameOf(NameId id) {
  auto& t = table();
  std::shared_lock lock(t.mu);
  return t.names.at(id);
}

unsigned order(const MultiIndex& a) {
  unsigned s = 0;
  for (auto e : a) s += e;
  return s;
}

MultiIndex unitIndex(int i) {
  MultiIndex m{};
  m[i] = 1;
  return m;
}

MultiIndex addIndex(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex r{};
  for (int i = 0; i < kMaxArity; ++i) {
    unsigned s = unsigned(a[i]) + b[i];
    if (s > 255) throw std::overflow_error("derivative order overflow");
    r[i] = std::uint8_t(s);
  }
  return r;
}

bool dividesIndex(const MultiIndex& a, const MultiIndex& b) {
  for (int i = 0; i < kMaxArity; ++i)
    if (a[i] > b[i]) return false;
  return true;
}

MultiIndex subIndex(const MultiIndex& b, const MultiIndex& a) {
  MultiIndex r{};
  for (int i = 0; i < kMaxArity; ++i) r[i] = std::uint8_t(b[i] - a[i]);
  return r;
}

MultiIndex lcmIndex(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex r{};
  for (int i = 0; i < kMaxArity; ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

Var Var::deriv(NameId id, const MultiIndex& idx) {
  std::uint64_t b = (1ULL << 63) | ((std::uint64_t(id) & 0x7fff) << 48);
  for (int i = 0; i < kMaxArity; ++i) b |= std::uint64_t(idx[i]) << (40 - 8 * i);
  return Var(b);
}

MultiIndex Var::index() const {
  MultiIndex m{};
  if (!isDeriv()) return m;
  for (int i = 0; i < kMaxArity; ++i) m[i] = std::uint8_t((bits_ >> (40 - 8 * i)) & 0xff);
  return m;
}

}  // namespace delin
