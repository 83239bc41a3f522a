#ifndef QSEL_MODEL_IO_HPP
#define QSEL_MODEL_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "qsel/cost_model.hpp"

namespace qsel {

// Document format: one JSON object with keys `name`, `implementations`,
// `layers`, `penalties`, `metadata`. Times are milliseconds. Unknown keys
// are skipped with a note on `warn` (when given).
CostModel cost_model_from_json(const nlohmann::json& doc, std::ostream* warn = nullptr);
nlohmann::json cost_model_to_json(const CostModel& model);

CostModel load_cost_model(std::istream& in, std::ostream* warn = nullptr);
CostModel load_cost_model_file(const std::filesystem::path& path, std::ostream* warn = nullptr);

void save_cost_model(const CostModel& model, std::ostream& out);
void save_cost_model_file(const CostModel& model, const std::filesystem::path& path);

}  // namespace qsel

#endif  // QSEL_MODEL_IO_HPP
