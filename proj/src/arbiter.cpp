#include "l2sw/arbiter.hpp"

#include <algorithm>

#include "l2sw/error.hpp"

namespace l2sw {

RoundRobin::RoundRobin(std::size_t clients) : RoundRobin(clients, clients - 1) {}

RoundRobin::RoundRobin(std::size_t clients, std::size_t last_granted)
    : clients_(clients), last_(last_granted) {
  if (clients == 0) throw InputError("round-robin arbiter needs at least one client");
  if (last_granted >= clients) throw InputError("round-robin pointer out of range");
}

std::optional<std::size_t> RoundRobin::grant(std::span<const bool> requests) {
  if (requests.size() != clients_) throw InvariantViolation("request vector size mismatch");
  for (std::size_t step = 1; step <= clients_; ++step) {
    const std::size_t candidate = (last_ + step) % clients_;
    if (requests[candidate]) {
      last_ = candidate;
      return candidate;
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> AllocQueue::grant(std::span<const bool> new_requests,
                                             bool free_list_nonempty) {
  if (new_requests.size() != ports_) throw InvariantViolation("request vector size mismatch");
  for (std::size_t p = 0; p < ports_; ++p) {
    if (new_requests[p]) pending_.push_back(p);
  }
  if (pending_.empty() || !free_list_nonempty) return std::nullopt;
  const std::size_t head = pending_.front();
  pending_.pop_front();
  return head;
}

void AllocQueue::cancel(std::size_t port) {
  pending_.erase(std::remove(pending_.begin(), pending_.end(), port), pending_.end());
}

}  // namespace l2sw
