#include "gentrans/hashcons.hpp"

#include <mutex>
#include <unordered_map>

namespace gentrans {

namespace {

struct Key {
    Value::Kind kind;
    std::string text; // tag or string payload
    std::string number;
    bool flag = false;
    std::vector<std::string> names;
    std::vector<Handle> children;

    friend bool operator==(const Key&, const Key&) = default;
};

struct KeyHash {
    std::size_t operator()(const Key& k) const {
        std::size_t h = std::hash<int>{}(static_cast<int>(k.kind));
        auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
        mix(std::hash<std::string>{}(k.text));
        mix(std::hash<std::string>{}(k.number));
        mix(k.flag);
        for (const auto& n : k.names) mix(std::hash<std::string>{}(n));
        for (Handle c : k.children) mix(c);
        return h;
    }
};

Key key_of(const Value& v, std::span<const Handle> children) {
    Key k;
    k.kind = v.kind();
    switch (v.kind()) {
    case Value::Kind::Con:
    case Value::Kind::Rec: k.text = v.tag(); break;
    case Value::Kind::Str: k.text = v.as_str(); break;
    case Value::Kind::Int: k.number = v.as_int().str(); break;
    case Value::Kind::Bool: k.flag = v.as_bool(); break;
    default: break;
    }
    auto names = v.field_names();
    k.names.assign(names.begin(), names.end());
    k.children.assign(children.begin(), children.end());
    return k;
}

} // namespace

struct HcStore::Arena {
    struct Entry {
        Value value;
        std::vector<Handle> children;
    };
    std::mutex mutex;
    std::vector<Entry> nodes;
    std::unordered_map<Key, Handle, KeyHash> index;
    std::vector<std::size_t> constructors_upto; // prefix counts, parallel to nodes
};

HcStore::HcStore() : arena_(std::make_shared<Arena>()), size_(0) {}

std::size_t HcStore::constructor_count() const {
    std::lock_guard lock(arena_->mutex);
    return size_ == 0 ? 0 : arena_->constructors_upto[size_ - 1];
}

Value HcStore::node(Handle h) const {
    if (h >= size_) throw Error(ErrorCode::TypeMismatch, "handle " + std::to_string(h) + " not in this store");
    std::lock_guard lock(arena_->mutex);
    return arena_->nodes[h].value;
}

std::vector<Handle> HcStore::children(Handle h) const {
    if (h >= size_) throw Error(ErrorCode::TypeMismatch, "handle " + std::to_string(h) + " not in this store");
    std::lock_guard lock(arena_->mutex);
    return arena_->nodes[h].children;
}

HcStore::Result HcStore::intern_node(const Value& shallow, std::span<const Handle> children) const {
    if (children.size() != shallow.items().size()) {
        throw Error(ErrorCode::TypeMismatch, "intern_node: child handle count does not match the node");
    }
    Key key = key_of(shallow, children);
    std::shared_ptr<Arena> arena = arena_;
    std::unique_lock lock(arena->mutex);
    for (Handle c : children) {
        if (c >= size_) throw Error(ErrorCode::TypeMismatch, "intern_node: child handle not in this store");
    }
    if (auto it = arena->index.find(key); it != arena->index.end() && it->second < size_) {
        return Result{*this, it->second, arena->nodes[it->second].value};
    }
    if (size_ != arena->nodes.size()) {
        // Older snapshot: fork the first size_ entries.
        auto fork = std::make_shared<Arena>();
        fork->nodes.assign(arena->nodes.begin(), arena->nodes.begin() + static_cast<std::ptrdiff_t>(size_));
        fork->constructors_upto.assign(arena->constructors_upto.begin(),
                                       arena->constructors_upto.begin() + static_cast<std::ptrdiff_t>(size_));
        for (const auto& [k, h] : arena->index) {
            if (h < size_) fork->index.emplace(k, h);
        }
        lock.unlock();
        arena = std::move(fork);
        lock = std::unique_lock(arena->mutex);
    }
    // Rebuild the node over the interned children so sharing is physical.
    Value node = shallow;
    if (!children.empty()) {
        std::vector<Value> items;
        items.reserve(children.size());
        for (Handle c : children) items.push_back(arena->nodes[c].value);
        switch (shallow.kind()) {
        case Value::Kind::Con: node = Value::con(shallow.tag(), std::move(items)); break;
        case Value::Kind::Rec: {
            std::vector<std::pair<std::string, Value>> fields;
            for (std::size_t i = 0; i < items.size(); ++i) fields.emplace_back(shallow.field_names()[i], items[i]);
            node = Value::rec(shallow.tag(), std::move(fields));
            break;
        }
        case Value::Kind::Tuple: node = Value::tuple(std::move(items)); break;
        case Value::Kind::Seq: node = Value::seq(std::move(items)); break;
        default: break;
        }
    }
    Handle h = static_cast<Handle>(arena->nodes.size());
    std::size_t prev = arena->constructors_upto.empty() ? 0 : arena->constructors_upto.back();
    arena->constructors_upto.push_back(prev + (node.is_constructor() ? 1 : 0));
    arena->nodes.push_back(Arena::Entry{node, std::vector<Handle>(children.begin(), children.end())});
    arena->index.emplace(std::move(key), h);
    return Result{HcStore(arena, arena->nodes.size()), h, std::move(node)};
}

HcStore::Result HcStore::hc(const Value& value) const {
    HcStore store = *this;
    std::vector<Handle> children;
    children.reserve(value.items().size());
    for (const auto& item : value.items()) {
        Result r = store.hc(item);
        store = std::move(r.store);
        children.push_back(r.handle);
    }
    return store.intern_node(value, children);
}

} // namespace gentrans
