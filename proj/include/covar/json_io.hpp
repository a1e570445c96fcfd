#pragma once

#include <string_view>

#include <json.hpp>

#include "covar/bounds.hpp"
#include "covar/invariant.hpp"
#include "covar/operational.hpp"
#include "covar/sampler.hpp"
#include "covar/state.hpp"

namespace covar {

using Json = nlohmann::ordered_json;

/// {"x": "3/2", "tau": "0"}; values may also be JSON integers.
[[nodiscard]] State state_from_json(const Json& j);
[[nodiscard]] State parse_state(std::string_view text);
[[nodiscard]] Json to_json(const State& s);

[[nodiscard]] Json to_json(const SignedExt& v);
[[nodiscard]] Json to_json(const BoundSequence& b);
[[nodiscard]] Json entries_json(const BoundSequence& b);
[[nodiscard]] Json to_json(const InvariantReport& r);
[[nodiscard]] Json to_json(const RewardResult& r);
[[nodiscard]] Json to_json(const RunOutcome& r);
[[nodiscard]] Json to_json(const Estimate& e);

} // namespace covar
