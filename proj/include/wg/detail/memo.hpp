#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>

namespace wg::detail {

// Concurrent-read / exclusive-insert memo table. Values are immutable once
// published, so callers hold shared_ptr<const V> without further locking.
template <class Key, class Value>
class Memo {
 public:
  template <class Make>
  std::shared_ptr<const Value> get_or_make(const Key& key, Make&& make) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = table_.find(key); it != table_.end()) return it->second;
    }
    auto made = std::make_shared<const Value>(make());
    std::unique_lock lock(mutex_);
    auto [it, inserted] = table_.emplace(key, std::move(made));
    return it->second;
  }

  void clear() {
    std::unique_lock lock(mutex_);
    table_.clear();
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return table_.size();
  }

 private:
  mutable std::shared_mutex mutex_;
  std::map<Key, std::shared_ptr<const Value>> table_;
};

}  // namespace wg::detail
