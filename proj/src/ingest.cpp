#include "graft/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <string>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "graft/error.hpp"

namespace graft {

namespace {

Event parse_event(const std::string& line, std::size_t lineno, const std::string& source) {
  auto fail = [&](const std::string& what) { return FormatError(what, lineno, source); };
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw fail(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw fail("event must be a JSON object");
  const auto ts = j.find("ts");
  if (ts == j.end() || !ts->is_number_integer()) throw fail("missing integer \"ts\"");
  const auto attrs = j.find("attrs");
  if (attrs == j.end() || !attrs->is_object()) throw fail("missing object \"attrs\"");

  Event ev;
  ev.ts = ts->get<std::int64_t>();
  for (const auto& [type, id] : attrs->items()) {
    if (!id.is_string()) throw fail("attribute '" + type + "' must be a string");
    try {
      ev.attrs.emplace(EntityType(type), EntityId(id.get<std::string>()));
    } catch (const Error& e) {
      throw fail(e.what());
    }
  }
  return ev;
}

}  // namespace

std::vector<Event> parse_events(std::istream& in, const std::string& source) {
  std::vector<Event> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_event(line, lineno, source));
  }
  return out;
}

std::vector<Event> read_events(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return parse_events(in, path.string());
}

void EventAccumulator::add_entity(const EntityId& id, const EntityType& type) {
  auto [it, inserted] = entities_.emplace(id, type);
  if (!inserted && it->second != type) {
    throw TypeConflictError("entity '" + id.str() + "' has conflicting types '" + it->second.str() +
                            "' and '" + type.str() + "'");
  }
}

void EventAccumulator::add(const Event& event) {
  ++events_;
  if (event.attrs.size() < 2) {
    ++skipped_;
    return;
  }
  std::vector<EntityId> ids;
  for (const auto& [type, id] : event.attrs) {
    add_entity(id, type);
    ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  for (std::size_t a = 0; a < ids.size(); ++a)
    for (std::size_t b = a + 1; b < ids.size(); ++b) weights_[{ids[a], ids[b]}] += 1.0;
}

void EventAccumulator::merge(const EventAccumulator& other) {
  for (const auto& [id, type] : other.entities_) add_entity(id, type);
  for (const auto& [key, w] : other.weights_) weights_[key] += w;
  skipped_ += other.skipped_;
  events_ += other.events_;
}

HeteroGraph EventAccumulator::build() const {
  GraphBuilder builder;
  for (const auto& [id, type] : entities_) builder.add_entity(id, type);
  for (const auto& [key, w] : weights_) builder.add_edge(key.first, key.second, w);
  return builder.build();
}

HeteroGraph accumulate(const std::vector<Event>& events, std::size_t* skipped) {
  EventAccumulator acc;
  for (std::size_t i = 0; i < events.size(); ++i) {
    try {
      acc.add(events[i]);
    } catch (const Error& e) {
      throw FormatError(e.what(), i + 1);
    }
  }
  if (acc.skipped() > 0) spdlog::warn("ingest: skipped {} events with fewer than two attributes", acc.skipped());
  if (skipped) *skipped = acc.skipped();
  return acc.build();
}

std::vector<HeteroGraph> snapshot_series(const std::vector<Event>& events, std::int64_t window) {
  if (window <= 0) throw Error("snapshot window must be positive");
  if (events.empty()) return {GraphBuilder().build()};

  std::vector<const Event*> order;
  order.reserve(events.size());
  for (const Event& e : events) order.push_back(&e);
  std::stable_sort(order.begin(), order.end(), [](const Event* a, const Event* b) { return a->ts < b->ts; });

  const std::int64_t start = order.front()->ts;
  const std::int64_t count = (order.back()->ts - start) / window + 1;
  std::vector<HeteroGraph> out;
  out.reserve(static_cast<std::size_t>(count));
  EventAccumulator acc;
  std::size_t next = 0;
  for (std::int64_t k = 1; k <= count; ++k) {
    const std::int64_t end = start + k * window;
    while (next < order.size() && order[next]->ts < end) acc.add(*order[next++]);
    out.push_back(acc.build());
  }
  return out;
}

}  // namespace graft
