#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace fbmsde::detail {

/// Process-wide cache of immutable per-(n, h) sampler setups. `build` returns
/// a shared_ptr to the new value. Values are
/// built outside the lock on a miss and published once; concurrent builders
/// of the same key keep whichever entry lands first.
template <typename Value>
class SetupCache {
public:
    template <typename Build>
    std::shared_ptr<const Value> get(std::size_t n, double h, Build&& build) {
        const Key key{n, std::bit_cast<std::uint64_t>(h)};
        {
            std::lock_guard lock(mutex_);
            if (auto it = entries_.find(key); it != entries_.end()) return it->second;
        }
        std::shared_ptr<const Value> value = build();
        std::lock_guard lock(mutex_);
        auto [it, inserted] = entries_.emplace(key, std::move(value));
        return it->second;
    }

private:
    using Key = std::pair<std::size_t, std::uint64_t>;
    std::mutex mutex_;
    std::map<Key, std::shared_ptr<const Value>> entries_;
};

}  // namespace fbmsde::detail
