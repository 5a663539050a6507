#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "graft/hetgraph.hpp"

namespace graft {

/// One categorical event: a timestamp and the entities it touched, by type.
struct Event {
  std::int64_t ts = 0;  // epoch milliseconds
  std::map<EntityType, EntityId> attrs;
};

/// JSON-lines events, one `{"ts": <int>, "attrs": {"<type>": "<id>", ...}}` per
/// line. Blank lines are ignored. FormatError carries the 1-based line number.
std::vector<Event> parse_events(std::istream& in, const std::string& source = {});
std::vector<Event> read_events(const std::filesystem::path& path);

/// Co-occurrence counts: every pair of entities in one event gains weight 1.
/// Partial accumulators over disjoint shards can be merged in any order.
class EventAccumulator {
 public:
  void add(const Event& event);
  void merge(const EventAccumulator& other);

  /// Events with fewer than two attributes, which contribute nothing.
  std::size_t skipped() const noexcept { return skipped_; }
  std::size_t events() const noexcept { return events_; }
  HeteroGraph build() const;

 private:
  void add_entity(const EntityId& id, const EntityType& type);

  std::map<EntityId, EntityType> entities_;
  std::map<std::pair<EntityId, EntityId>, double> weights_;
  std::size_t skipped_ = 0;
  std::size_t events_ = 0;
};

HeteroGraph accumulate(const std::vector<Event>& events, std::size_t* skipped = nullptr);

/// Cumulative snapshots: graph k (1-based) holds every event with
/// ts < first_ts + k * window. An empty stream yields one empty graph.
std::vector<HeteroGraph> snapshot_series(const std::vector<Event>& events, std::int64_t window);

}  // namespace graft
