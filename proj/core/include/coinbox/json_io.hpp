/*
 * Copyright 2026 The coinbox Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <string>

#include <json.hpp>

#include "coinbox/engine.hpp"
#include "coinbox/wcf.hpp"

namespace coinbox {

using Json = nlohmann::ordered_json;

/// {elements: [...], covers: [[a, b], ...]}
Json poset_to_json(const Poset& p);
Poset poset_from_json(const Json& j);

/// Probabilities as exact fraction strings; classical kernels only.
Json system_to_json(const SystemGraph& s);
SystemGraph system_from_json(const Json& j);

/// System plus party roles, coin slots and parameters.
Json protocol_to_json(const WcfProtocol& p);
WcfProtocol protocol_from_json(const Json& j);

/// {"fraction": "1/4", "decimal": 0.25}
Json rational_to_json(const Rational& r);

Json distribution_to_json(const Distribution& d);

/// Write-then-rename so readers never observe a half-written file.
void write_text_atomic(const std::string& path, const std::string& text);

std::string read_text(const std::string& path);

}  // namespace coinbox
