#pragma once

#include <json.hpp>
#include <string>

#include "renyilab/channels.hpp"
#include "renyilab/measures.hpp"
#include "renyilab/states.hpp"

namespace renyi {

using Json = nlohmann::ordered_json;

// Matrix schema: {"dims": [...], "labels": [...], "matrix": [[[re, im], ...], ...]}
// row-major; bare matrices (channels, POVMs) drop dims/labels.
Json complex_matrix_to_json(const Mat& m);
Mat complex_matrix_from_json(const Json& j);

Json state_to_json(const DensityOperator& rho);
DensityOperator state_from_json(const Json& j);

Json ensemble_to_json(const std::vector<double>& probs,
                      const std::vector<DensityOperator>& states);
std::pair<std::vector<double>, std::vector<DensityOperator>> ensemble_from_json(
    const Json& j);

Json channel_to_json(const QuantumChannel& n);
QuantumChannel channel_from_json(const Json& j);

Json povm_to_json(const Povm& p);
Povm povm_from_json(const Json& j);

Json measure_result_to_json(const MeasureResult& r);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
Json read_json_file(const std::string& path);

} // namespace renyi
