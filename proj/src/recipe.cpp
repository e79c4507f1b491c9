#include "digitlens/recipe.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <set>
#include <thread>

namespace digitlens {

namespace fs = std::filesystem;

ExperimentRecipe recipe_from_json(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw Error("recipe must be a JSON object");
  ExperimentRecipe r;
  try {
    r.name = j.at("name").get<std::string>();
    r.operation = j.at("operation").get<std::string>();
    r.params = j.value("params", json::object());
    r.criteria = j.value("criteria", json::array());
    if (j.contains("seed")) r.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw Error("malformed recipe: " + std::string(e.what()));
  }
  if (r.name.empty()) throw Error("recipe name must not be empty");
  for (const char* key : {"system", "a", "b", "manifold"}) {
    if (r.params.contains(key) && r.params[key].is_string()) {
      const fs::path p = fs::path(r.params[key].get<std::string>());
      const fs::path full = p.is_absolute() ? p : base_dir / p;
      if (!fs::exists(full)) throw Error("recipe '" + r.name + "' references missing file " + full.string());
      r.params[key] = load_json(full.string());
    }
  }
  for (const auto& c : r.criteria) {
    if (!c.contains("metric") || !(c.contains("min") || c.contains("max") || c.contains("equals"))) {
      throw Error("recipe '" + r.name + "': each criterion needs a metric and a threshold");
    }
  }
  return r;
}

std::vector<ExperimentRecipe> load_recipes(const fs::path& file) {
  const json j = load_json(file.string());
  const fs::path base = file.parent_path();
  std::vector<ExperimentRecipe> out;
  const json& list = j.is_object() && j.contains("recipes") ? j.at("recipes") : j;
  if (list.is_array()) {
    for (const auto& e : list) out.push_back(recipe_from_json(e, base));
  } else {
    out.push_back(recipe_from_json(list, base));
  }
  return out;
}

std::vector<CriterionResult> evaluate_criteria(const json& criteria, const json& result) {
  std::vector<CriterionResult> out;
  for (const auto& c : criteria) {
    CriterionResult cr;
    cr.metric = c.at("metric").get<std::string>();
    cr.name = c.value("name", cr.metric);
    if (c.contains("min")) cr.min = c.at("min").get<double>();
    if (c.contains("max")) cr.max = c.at("max").get<double>();
    if (c.contains("equals")) cr.equals = c.at("equals");
    json v;
    try {
      v = result.at(json::json_pointer(cr.metric));
    } catch (const json::exception&) {
      cr.note = "metric not present in result";
      out.push_back(std::move(cr));
      continue;
    }
    if (!cr.equals.is_null()) {
      cr.pass = v == cr.equals;
      if (!cr.pass) cr.note = "expected " + cr.equals.dump() + ", got " + v.dump();
    } else {
      cr.pass = true;
    }
    if (v.is_number() || v.is_boolean()) {
      cr.value = v.is_boolean() ? (v.get<bool>() ? 1.0 : 0.0) : v.get<double>();
      if (cr.min && !(*cr.value >= *cr.min)) cr.pass = false;
      if (cr.max && !(*cr.value <= *cr.max)) cr.pass = false;
    } else if (cr.min || cr.max) {
      cr.pass = false;
      cr.note = "metric is not numeric";
    }
    out.push_back(std::move(cr));
  }
  return out;
}

namespace {

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << text;
}

}  // namespace

RunReport run_recipe(const ExperimentRecipe& recipe, const RunContext& ctx, const fs::path& out_dir) {
  RunReport rep;
  rep.name = recipe.name;
  rep.operation = recipe.operation;
  RunContext c = ctx;
  if (recipe.seed) c.seed = *recipe.seed;
  rep.seed = c.seed;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const OperationResult res = run_operation(recipe.operation, recipe.params, c);
    rep.nodes = res.nodes;
    fs::create_directories(out_dir);
    const fs::path jpath = out_dir / (recipe.name + ".json");
    write_file(jpath, res.result.dump(2) + "\n");
    rep.artifacts.push_back(jpath.string());
    if (!res.csv.empty()) {
      const fs::path cpath = out_dir / (recipe.name + ".csv");
      write_file(cpath, res.csv);
      rep.artifacts.push_back(cpath.string());
    }
    rep.criteria = evaluate_criteria(recipe.criteria, res.result);
    rep.pass = std::all_of(rep.criteria.begin(), rep.criteria.end(), [](const auto& x) { return x.pass; });
  } catch (const std::exception& e) {
    rep.error = e.what();
    rep.pass = false;
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  try {
    fs::create_directories(out_dir);
    const fs::path rpath = out_dir / (recipe.name + ".report.json");
    write_file(rpath, to_json(rep).dump(2) + "\n");
  } catch (const std::exception& e) {
    if (rep.error.empty()) rep.error = e.what();
    rep.pass = false;
  }
  return rep;
}

std::vector<RunReport> run_recipes(const std::vector<ExperimentRecipe>& recipes, const RunContext& ctx,
                                   const fs::path& out_dir, int jobs) {
  std::set<std::string> names;
  for (const auto& r : recipes) {
    if (!names.insert(r.name).second) throw Error("duplicate recipe name '" + r.name + "'");
  }
  std::vector<RunReport> out(recipes.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < recipes.size(); ++i) out[i] = run_recipe(recipes[i], ctx, out_dir);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < recipes.size(); i = next++) out[i] = run_recipe(recipes[i], ctx, out_dir);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

json to_json(const RunReport& r) {
  json crit = json::array();
  for (const auto& c : r.criteria) {
    json e = {{"name", c.name}, {"metric", c.metric}, {"pass", c.pass}};
    e["value"] = c.value ? json(*c.value) : json(nullptr);
    if (c.min) e["min"] = *c.min;
    if (c.max) e["max"] = *c.max;
    if (!c.equals.is_null()) e["equals"] = c.equals;
    if (!c.note.empty()) e["note"] = c.note;
    crit.push_back(std::move(e));
  }
  json j = {{"name", r.name},         {"operation", r.operation}, {"pass", r.pass},
            {"criteria", crit},       {"artifacts", r.artifacts}, {"wall_seconds", r.wall_seconds},
            {"nodes", r.nodes},       {"seed", r.seed}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

}  // namespace digitlens
