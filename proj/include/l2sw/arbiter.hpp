#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>

namespace l2sw {

/// Single-resource round-robin grant. Scans from last_granted + 1 around the
/// ring; with no requests the pointer stays put.
class RoundRobin {
 public:
  /// The pointer starts on the last client so client 0 wins the first grant.
  explicit RoundRobin(std::size_t clients);
  RoundRobin(std::size_t clients, std::size_t last_granted);

  std::optional<std::size_t> grant(std::span<const bool> requests);

  std::size_t clients() const { return clients_; }
  std::size_t last_granted() const { return last_; }

 private:
  std::size_t clients_;
  std::size_t last_;
};

/// In-order allocation queue. New requesters join the tail (ascending port
/// order within one cycle); only the head is ever granted.
class AllocQueue {
 public:
  explicit AllocQueue(std::size_t ports) : ports_(ports) {}

  /// Appends this cycle's new requests, then grants the head if the free
  /// list can pop. The caller performs the pop.
  std::optional<std::size_t> grant(std::span<const bool> new_requests, bool free_list_nonempty);

  /// Drops every queued request of `port`.
  void cancel(std::size_t port);

  const std::deque<std::size_t>& pending() const { return pending_; }

 private:
  std::size_t ports_;
  std::deque<std::size_t> pending_;
};

}  // namespace l2sw
