#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "asgmig/ids.hpp"

namespace asgmig {

/// Undo log for one directive. Mutators push a closure restoring the state
/// they are about to overwrite; undo() replays them newest first.
class Journal {
 public:
  void record(std::function<void()> restore) {
    undo_.push_back(std::move(restore));
  }

  void note_created(NodeRef ref) { created_.push_back(ref); }

  /// Nodes created while the journal was attached, in creation order.
  const std::vector<NodeRef>& created() const noexcept { return created_; }

  std::size_t size() const noexcept { return undo_.size(); }

  void undo() {
    while (!undo_.empty()) {
      auto restore = std::move(undo_.back());
      undo_.pop_back();
      restore();
    }
    created_.clear();
  }

 private:
  std::vector<std::function<void()>> undo_;
  std::vector<NodeRef> created_;
};

}  // namespace asgmig
