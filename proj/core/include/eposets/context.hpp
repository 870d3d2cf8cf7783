#pragma once

// A built poset instance: the poset, its measure and regularity profile, with
// memoized averaging operators and a walk cache. All cached values are
// deterministic functions of the immutable instance, so concurrent lookups
// may race only on identical results (last write wins).

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "eposets/operators.hpp"
#include "eposets/poset.hpp"

namespace eposets {

struct HDWalk;

class PosetContext {
 public:
  PosetContext(GradedPoset poset, Measure measure);

  const GradedPoset& poset() const { return poset_; }
  const Measure& measure() const { return measure_; }
  const RegularityProfile& regularity() const { return reg_; }
  int d() const { return poset_.d; }

  const Eigen::VectorXd& pi(int level) const { return measure_.pi[static_cast<size_t>(level)]; }

  /// Memoized U_i and D_{i+1}.
  const LinearMap& up(int i) const;
  const LinearMap& down(int i_plus_1) const;

  /// Walk cache; keys carry the construction route so that, e.g., the
  /// restriction-built and inversion-built swap walks stay distinct.
  std::shared_ptr<const HDWalk> cached_walk(const std::string& key) const;
  std::shared_ptr<const HDWalk> store_walk(const std::string& key,
                                           std::shared_ptr<const HDWalk> walk) const;

 private:
  GradedPoset poset_;
  Measure measure_;
  RegularityProfile reg_;
  mutable std::vector<std::unique_ptr<LinearMap>> ups_;
  mutable std::vector<std::unique_ptr<LinearMap>> downs_;
  mutable std::map<std::string, std::shared_ptr<const HDWalk>> walks_;
  mutable std::mutex mutex_;
};

}  // namespace eposets
