#include "l2sw/voq.hpp"

#include "l2sw/error.hpp"

namespace l2sw {

Voq::Voq(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw InputError("VOQ depth must be at least 1");
}

VoqTickResult Voq::tick(std::optional<VoqEntry> push, bool pop) {
  VoqTickResult result;
  if (pop) {
    if (!entries_.empty()) {
      result.popped = entries_.front();
      entries_.pop_front();
    } else if (push) {
      result.popped = push;
      result.push_accepted = true;
      return result;
    }
  }
  if (push && entries_.size() < capacity_) {
    entries_.push_back(*push);
    result.push_accepted = true;
  }
  return result;
}

}  // namespace l2sw
