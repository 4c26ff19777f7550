#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace crpq {

using VertexId = std::uint32_t;
using SymbolId = std::uint32_t;
using VarId = std::uint32_t;

constexpr VertexId kNoVertex = UINT32_MAX;

/// Edge label. Inverse symbols (used on transposed graphs) are the same
/// symbol id with the high bit set, so user labels can never collide with
/// their inverses.
struct Label {
  std::uint32_t raw = 0;

  static constexpr std::uint32_t kInvBit = 0x8000'0000u;

  static Label make(SymbolId sym, bool inverted = false) {
    return Label{inverted ? (sym | kInvBit) : sym};
  }
  SymbolId sym() const { return raw & ~kInvBit; }
  bool inverted() const { return (raw & kInvBit) != 0; }
  Label inverse() const { return Label{raw ^ kInvBit}; }

  bool operator==(const Label&) const = default;
  bool operator<(const Label& o) const { return raw < o.raw; }
};

/// Interns label names to dense symbol ids.
class SymbolTable {
 public:
  SymbolId intern(const std::string& name) {
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    SymbolId id = static_cast<SymbolId>(names_.size());
    names_.push_back(name);
    ids_.emplace(name, id);
    return id;
  }
  const std::string* lookup(const std::string& name) const {
    auto it = ids_.find(name);
    return it == ids_.end() ? nullptr : &names_[it->second];
  }
  bool contains(const std::string& name) const { return ids_.count(name) != 0; }
  SymbolId id_of(const std::string& name) const {
    auto it = ids_.find(name);
    if (it == ids_.end()) throw std::out_of_range("unknown symbol: " + name);
    return it->second;
  }
  const std::string& name(SymbolId id) const { return names_.at(id); }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, SymbolId> ids_;
};

/// Per-evaluation symbol scope: resolves query label names against a base
/// graph alphabet and allocates fresh internal symbols. Fresh names start
/// with '$', which the regex grammar cannot produce, so they are disjoint
/// from user labels by construction.
class SymbolScope {
 public:
  explicit SymbolScope(SymbolTable base) : table_(std::move(base)) {}

  SymbolId resolve(const std::string& name) { return table_.intern(name); }

  // Allocates a fresh symbol and returns its generated name.
  std::string fresh() {
    std::string name = "$f" + std::to_string(fresh_counter_++);
    table_.intern(name);
    return name;
  }

  const SymbolTable& table() const { return table_; }

 private:
  SymbolTable table_;
  std::uint64_t fresh_counter_ = 0;
};

/// Work counters used by instrumentation and tests.
struct Counters {
  std::uint64_t product_edges = 0;
  std::uint64_t worklist_pushes = 0;
  std::uint64_t base_restrictions = 0;
  std::uint64_t compositions = 0;
  std::uint64_t propagations = 0;
};

}  // namespace crpq
