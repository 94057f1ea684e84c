#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "gentrans/value.hpp"

namespace gentrans {

/// Dense index of an interned node.
using Handle = std::uint32_t;

/// Interning table for maximally shared values.
///
/// A store is a value: interning returns a new store and never changes the
/// one it was called on. Snapshots share an append-only arena, so threading a
/// store linearly through a traversal costs O(1) per node; interning into an
/// older snapshot forks the arena.
///
/// Keys are (kind, tag, builtin payload, field names, child handles). Declared
/// types play no part, so equal shapes from different types share a handle.
class HcStore {
public:
    struct Result;

    HcStore();

    /// Bottom-up interning of an arbitrary value.
    Result hc(const Value& value) const;

    /// Interns one node whose children are already interned; `children`
    /// holds their handles, parallel to `shallow.items()`.
    Result intern_node(const Value& shallow, std::span<const Handle> children) const;

    std::size_t size() const { return size_; }
    std::size_t constructor_count() const;
    Value node(Handle h) const;
    std::vector<Handle> children(Handle h) const;
    bool contains(Handle h) const { return h < size_; }

    /// Same arena and same snapshot length.
    friend bool operator==(const HcStore& a, const HcStore& b) { return a.arena_ == b.arena_ && a.size_ == b.size_; }

private:
    struct Arena;
    HcStore(std::shared_ptr<Arena> arena, std::size_t size) : arena_(std::move(arena)), size_(size) {}

    std::shared_ptr<Arena> arena_;
    std::size_t size_ = 0;
};

struct HcStore::Result {
    HcStore store;
    Handle handle = 0;
    Value value;
};

} // namespace gentrans
