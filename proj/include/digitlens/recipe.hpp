#pragma once

#include "digitlens/operations.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace digitlens {

/// One named experiment: an operation, its parameters and pass/fail thresholds.
struct ExperimentRecipe {
  std::string name;
  std::string operation;
  json params;
  json criteria;  // [{"name", "metric": json-pointer, "min"?, "max"?, "equals"?}]
  std::optional<std::uint64_t> seed;
};

struct CriterionResult {
  std::string name;
  std::string metric;
  std::optional<double> value;
  std::optional<double> min, max;
  json equals;
  bool pass = false;
  std::string note;
};

struct RunReport {
  std::string name;
  std::string operation;
  bool pass = false;
  std::vector<CriterionResult> criteria;
  std::vector<std::string> artifacts;
  double wall_seconds = 0.0;
  std::int64_t nodes = 0;
  std::uint64_t seed = 0;
  std::string error;  // set when the operation failed
};

// Relative file references in params ("system", "a", "b", "manifold") resolve against base_dir.
ExperimentRecipe recipe_from_json(const json& j, const std::filesystem::path& base_dir = {});
// A file may hold one recipe, an array of them, or {"recipes": [...]}.
std::vector<ExperimentRecipe> load_recipes(const std::filesystem::path& file);

// Never throws for module errors: they land in RunReport::error.
RunReport run_recipe(const ExperimentRecipe& recipe, const RunContext& ctx, const std::filesystem::path& out_dir);
// Names must be unique; `jobs` recipes run at once.
std::vector<RunReport> run_recipes(const std::vector<ExperimentRecipe>& recipes, const RunContext& ctx,
                                   const std::filesystem::path& out_dir, int jobs = 1);

// Criteria judged from a recorded result alone.
std::vector<CriterionResult> evaluate_criteria(const json& criteria, const json& result);

json to_json(const RunReport& r);

// Styles: "scaling" (log 1/delta vs log value plus a fit overlay), "sweep"
// (one file per transform index). Returns the written paths.
std::vector<std::filesystem::path> emit_plotdata(const std::filesystem::path& csv, const std::string& style,
                                                 const std::filesystem::path& out_prefix);

}  // namespace digitlens
