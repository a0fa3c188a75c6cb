#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "aoicontract/experiments.hpp"

namespace aoicontract {

/// 12 significant digits, '.' decimal separator.
std::string format_number(double v);

void write_choice_matrix_csv(std::ostream& os, const std::vector<std::vector<double>>& matrix);
void write_sweep_a_csv(std::ostream& os, const SweepResult& sweep);
void write_sweep_alpha_csv(std::ostream& os, const SweepResult& sweep);
/// Wall time is left out so the file is reproducible; see comparison_timing_json.
void write_compare_csv(std::ostream& os, std::span<const ComparisonRow> rows);

nlohmann::ordered_json to_json(const SolveResult& result, const TimingParams& timing);
nlohmann::ordered_json to_json(const SweepResult& sweep);
nlohmann::ordered_json comparison_timing_json(std::span<const ComparisonRow> rows);

/// Reads the "menu.items" array written by to_json(SolveResult).
ContractMenu menu_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const ContractMenu& menu);
nlohmann::ordered_json to_json(const Lemma1Report& rep);

}  // namespace aoicontract
