#pragma once
// Channel files: a JSON document with "kind" twc | madb | memory. Doubles are
// serialized with shortest round-trip precision, so gen -> save -> load is
// bit-exact.

#include <string>
#include <variant>

#include <json.hpp>

#include "twc/madb.hpp"
#include "twc/memory.hpp"
#include "twc/prob.hpp"

namespace twc {

using ChannelFile = std::variant<TwoWayChannel, MadbChannel, MemoryChannelSpec>;

nlohmann::json channel_to_json(const TwoWayChannel& ch);
nlohmann::json channel_to_json(const MadbChannel& ch);
nlohmann::json channel_to_json(const MemoryChannelSpec& spec);

ChannelFile channel_from_json(const nlohmann::json& j);

ChannelFile load_channel_file(const std::string& path);
void save_channel_file(const std::string& path, const nlohmann::json& j);

}  // namespace twc
