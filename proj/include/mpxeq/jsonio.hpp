#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>
#include <string_view>

#include "mpxeq/economy.hpp"

namespace mpxeq {

using json = nlohmann::ordered_json;

// Parses the economy interchange document. Unknown keys are rejected.
MultiplexEconomy parse_economy(std::string_view text);
MultiplexEconomy load_economy(const std::string& path);

std::string serialize_economy(const MultiplexEconomy& economy);

// FNV-1a over the canonical serialization, hex-encoded.
std::string economy_hash(const MultiplexEconomy& economy);

// Deterministic dump: ordered keys, doubles with 17 significant digits.
std::string dump_json(const json& value, int indent = 2);

// Flat "path,value" CSV rendering of a report document.
std::string dump_csv_flat(const json& value);

std::string format_double(double v);

json to_json(const Eigen::VectorXd& v);
json to_json(const Eigen::MatrixXd& m);

} // namespace mpxeq
