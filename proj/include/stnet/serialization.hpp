// stnet - space-terrestrial uplink network simulator
// Copyright 2026 the stnet authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "json.hpp"

#include "stnet/channel.hpp"
#include "stnet/estimation.hpp"

namespace stnet {

// JSON caching format for per-slot statistics, versioned with the config
// schema. Complex matrices are stored as nested [re, im] arrays. Sampling
// caches are rebuilt on load rather than stored.
nlohmann::json to_json(const ChannelStatistics& stats);
ChannelStatistics channel_statistics_from_json(const nlohmann::json& j);

nlohmann::json to_json(const EstimateStatistics& est);
EstimateStatistics estimate_statistics_from_json(const nlohmann::json& j);

} // namespace stnet
