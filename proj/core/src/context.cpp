#include "eposets/context.hpp"

#include "eposets/walks.hpp"

namespace eposets {

PosetContext::PosetContext(GradedPoset poset, Measure measure)
    : poset_(std::move(poset)), measure_(std::move(measure)) {
  if (poset_.ups.empty()) poset_.build_ups();
  poset_.validate();
  reg_ = regularity_profile(poset_);
  ups_.resize(static_cast<size_t>(poset_.d));
  downs_.resize(static_cast<size_t>(poset_.d) + 1);
}

const LinearMap& PosetContext::up(int i) const {
  if (i < 0 || i >= poset_.d) throw LevelBoundsError("up: level out of range");
  std::lock_guard<std::mutex> lock(mutex_);
  auto& slot = ups_[static_cast<size_t>(i)];
  if (!slot) slot = std::make_unique<LinearMap>(up_operator(poset_, measure_, i));
  return *slot;
}

const LinearMap& PosetContext::down(int i_plus_1) const {
  if (i_plus_1 < 1 || i_plus_1 > poset_.d) throw LevelBoundsError("down: level out of range");
  std::lock_guard<std::mutex> lock(mutex_);
  auto& slot = downs_[static_cast<size_t>(i_plus_1)];
  if (!slot) slot = std::make_unique<LinearMap>(down_operator(poset_, measure_, i_plus_1));
  return *slot;
}

std::shared_ptr<const HDWalk> PosetContext::cached_walk(const std::string& key) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = walks_.find(key);
  return it == walks_.end() ? nullptr : it->second;
}

std::shared_ptr<const HDWalk> PosetContext::store_walk(const std::string& key,
                                                       std::shared_ptr<const HDWalk> walk) const {
  std::lock_guard<std::mutex> lock(mutex_);
  walks_[key] = walk;
  return walk;
}

}  // namespace eposets
