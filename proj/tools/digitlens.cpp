// digitlens: command-line front end for the missing-digit toolkit.

#include "digitlens/recipe.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace digitlens;
namespace fs = std::filesystem;

namespace {

// "0.2,0.4" or a JSON array "[0.2, 0.4]".
std::vector<double> parse_vector(const std::string& s) {
  std::vector<double> v;
  if (!s.empty() && s.front() == '[') {
    try {
      v = json::parse(s).get<std::vector<double>>();
    } catch (const std::exception&) {
      throw Error("cannot parse '" + s + "' as a JSON array of numbers");
    }
    if (v.empty()) throw Error("empty vector '" + s + "'");
    return v;
  }
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      v.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw Error("cannot parse '" + s + "' as a comma-separated vector");
    }
  }
  if (v.empty()) throw Error("empty vector '" + s + "'");
  return v;
}

// "2..6" or "2,3,4".
std::vector<int> parse_ladder(const std::string& s) {
  std::vector<int> ks;
  if (const auto dots = s.find(".."); dots != std::string::npos) {
    const int a = std::stoi(s.substr(0, dots)), b = std::stoi(s.substr(dots + 2));
    for (int k = a; k <= b; ++k) ks.push_back(k);
  } else {
    for (double d : parse_vector(s)) ks.push_back(static_cast<int>(d));
  }
  if (ks.empty()) throw Error("empty ladder '" + s + "'");
  return ks;
}

struct Globals {
  double tol = 1e-4;
  int depth = -1;
  int jobs = 1;
  std::uint64_t seed = 20240611;
  std::string out;
  std::string config;
  std::string format;
  bool serial = false;
};

// Flags recorded as JSON parameters; the config file supplies anything left unset.
struct Command {
  std::string name;
  CLI::App* app = nullptr;
  json params = json::object();
  std::string default_format = "json";
};

void write_outputs(const Globals& g, const std::string& name, const OperationResult& r) {
  const std::string fmt = g.format.empty() ? (r.csv.empty() ? "json" : "csv") : g.format;
  if (fmt == "csv" && !r.csv.empty()) {
    std::cout << r.csv;
  } else {
    std::cout << r.result.dump(2) << '\n';
  }
  if (!g.out.empty()) {
    fs::create_directories(g.out);
    std::ofstream(fs::path(g.out) / (name + ".json")) << r.result.dump(2) << '\n';
    if (!r.csv.empty()) std::ofstream(fs::path(g.out) / (name + ".csv")) << r.csv;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"digitlens: missing-digit sets, Fourier l1 bounds, counting near manifolds, fractal arithmetic"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--tol", g.tol, "Tolerance for sup f and Fourier truncation");
  app.add_option("--depth", g.depth, "Default tree depth");
  app.add_option("--jobs", g.jobs, "Recipes run in parallel");
  app.add_option("--seed", g.seed, "Seed for sampled checks");
  app.add_option("--out", g.out, "Directory for JSON/CSV artifacts");
  app.add_option("--config", g.config, "JSON file with default parameters");
  app.add_option("--format", g.format, "Output on stdout: json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--serial", g.serial, "Use the serial reference kernels");

  // Raw flag storage; only flags actually given are copied into the parameters.
  std::string system, manifold, sys_a, sys_b, method, xi, theta, ladder, grid, pin, target, kind, ls;
  double delta = 0, c = 0, threshold = 0;
  int k = 0, lmax = 0, p = 0, m1 = 0, m2 = 0, depth_offset = 0;

  std::vector<Command> cmds;
  auto add = [&](const std::string& name, const std::string& help) -> Command& {
    cmds.push_back({name, app.add_subcommand(name, help)});
    return cmds.back();
  };
  add("dim", "Hausdorff dimension log #D / log p").app->add_option("--system", system)->required();
  {
    auto* a = add("l1bound", "Certified lower bound for the Fourier l1 dimension").app;
    a->add_option("--system", system)->required();
    a->add_option("--method", method)->check(CLI::IsMember({"algorithm", "crude", "rectangle"}));
  }
  {
    auto* a = add("fourier", "Fourier transform of the missing-digit measure").app;
    a->add_option("--system", system)->required();
    a->add_option("--xi", xi, "Frequency, comma-separated")->required();
  }
  {
    auto& cmd = add("partialsum", "Partial sums of |lambda^| over {0..p^k-1}^n");
    cmd.default_format = "csv";
    cmd.app->add_option("--system", system)->required();
    cmd.app->add_option("--k", k);
    cmd.app->add_option("--ladder", ladder, "k1..k2");
    cmd.app->add_option("--theta", theta);
    cmd.app->add_option("--kind", kind)->check(CLI::IsMember({"l1", "l2"}));
  }
  {
    auto& cmd = add("count", "Cells meeting the delta-neighbourhood of a manifold");
    cmd.default_format = "csv";
    cmd.app->add_option("--system", system)->required();
    cmd.app->add_option("--manifold", manifold)->required();
    cmd.app->add_option("--delta", delta)->required();
  }
  {
    auto* a = add("scaling", "Neighbourhood-measure scaling over delta = p^-k").app;
    a->add_option("--system", system)->required();
    a->add_option("--manifold", manifold)->required();
    a->add_option("--ladder", ladder, "k1..k2")->required();
    a->add_option("--depth-offset", depth_offset);
  }
  {
    auto* a = add("sweep", "Ratios lambda(T(M)^delta)/delta^(n-dim M) over a transform grid").app;
    a->add_option("--system", system)->required();
    a->add_option("--manifold", manifold)->required();
    a->add_option("--grid", grid)->required();
    a->add_option("--ladder", ladder, "k1..k2")->required();
    a->add_option("--depth-offset", depth_offset);
    a->add_option("--threshold", threshold);
  }
  {
    auto* a = add("lsearch", "Smallest free prefix l with lower counts at every ladder scale").app;
    a->add_option("--system", system)->required();
    a->add_option("--manifold", manifold)->required();
    a->add_option("--ladder", ladder, "k1..k2")->required();
    a->add_option("--lmax", lmax);
    a->add_option("--c", c);
  }
  {
    auto* a = add("sharpness", "First-row counts under a superellipse with order-k contact").app;
    a->add_option("--p", p)->required();
    a->add_option("--m1", m1, "D1 = {0..m1}")->required();
    a->add_option("--m2", m2, "D2 = {0..m2}");
    a->add_option("--k", k)->required();
    a->add_option("--l", ls, "Comma-separated levels");
    a->add_option("--c", c);
  }
  {
    auto* a = add("distset", "Pinned distance set coverage").app;
    a->add_option("--system", system)->required();
    a->add_option("--pin", pin)->required();
    a->add_option("--target", target)->required();
    a->add_option("--delta", delta)->required();
  }
  for (const char* name : {"sumset", "prodset", "sqsumset"}) {
    auto* a = add(name, std::string(name) == "sumset"    ? "Sum set K_A + K_B coverage"
                        : std::string(name) == "prodset" ? "Product set K_A * K_B coverage"
                                                         : "Sum of squares x^2 + y^2 coverage")
                  .app;
    a->add_option("--a", sys_a)->required();
    a->add_option("--b", sys_b);
    a->add_option("--target", target)->required();
    a->add_option("--delta", delta)->required();
  }
  std::vector<std::string> recipe_files;
  auto* run = app.add_subcommand("run", "Run recipe files and judge their criteria");
  run->add_option("recipes", recipe_files, "Recipe JSON files")->required()->check(CLI::ExistingFile);
  std::string plot_csv, plot_style = "scaling", plot_prefix;
  auto* plot = app.add_subcommand("emit-plotdata", "Two-column plot files from a CSV artifact");
  plot->add_option("--csv", plot_csv)->required()->check(CLI::ExistingFile);
  plot->add_option("--style", plot_style)->check(CLI::IsMember({"scaling", "sweep"}));
  plot->add_option("--prefix", plot_prefix, "Output path prefix")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    RunContext ctx;
    ctx.tol = g.tol;
    ctx.depth = g.depth;
    ctx.seed = g.seed;
    ctx.parallel = !g.serial;

    if (run->parsed()) {
      std::vector<ExperimentRecipe> recipes;
      for (const auto& f : recipe_files) {
        auto more = load_recipes(f);
        recipes.insert(recipes.end(), more.begin(), more.end());
      }
      const fs::path out = g.out.empty() ? fs::path("digitlens-out") : fs::path(g.out);
      const auto reports = run_recipes(recipes, ctx, out, g.jobs);
      bool all = true;
      json summary = json::array();
      for (const auto& r : reports) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name;
        if (!r.error.empty()) std::cout << "  error: " << r.error;
        for (const auto& c : r.criteria) {
          if (!c.pass) std::cout << "  [" << c.name << (c.value ? " = " + format_double(*c.value) : "") << "]";
        }
        std::cout << '\n';
        all = all && r.pass;
        summary.push_back(to_json(r));
      }
      std::ofstream(out / "summary.json") << summary.dump(2) << '\n';
      return all ? 0 : 1;
    }
    if (plot->parsed()) {
      for (const auto& f : emit_plotdata(plot_csv, plot_style, plot_prefix)) std::cout << f.string() << '\n';
      return 0;
    }

    for (auto& cmd : cmds) {
      if (!cmd.app->parsed()) continue;
      json params = g.config.empty() ? json::object() : load_json(g.config);
      auto given = [&](const char* opt) {
        const CLI::Option* o = cmd.app->get_option_no_throw(opt);
        return o != nullptr && o->count() > 0;
      };
      auto set = [&](const char* opt, const char* key, json value) {
        if (given(opt)) params[key] = std::move(value);
      };
      auto set_system = [&](const char* opt, const char* key, const std::string& text) {
        if (given(opt)) params[key] = load_json(text);
      };
      set_system("--system", "system", system);
      set_system("--manifold", "manifold", manifold);
      set_system("--a", "a", sys_a);
      set_system("--b", "b", sys_b);
      if (given("--grid")) params["grid"] = load_json(grid);
      set("--method", "method", method);
      if (given("--xi")) params["xi"] = parse_vector(xi);
      if (given("--theta")) params["theta"] = parse_vector(theta);
      if (given("--pin")) params["pin"] = parse_vector(pin);
      if (given("--target")) params["target"] = parse_vector(target);
      if (given("--ladder")) params["ladder"] = parse_ladder(ladder);
      if (given("--l")) params["ls"] = parse_ladder(ls);
      set("--kind", "kind", kind);
      set("--k", "k", k);
      set("--delta", "delta", delta);
      set("--depth-offset", "depth_offset", depth_offset);
      set("--threshold", "threshold", threshold);
      set("--lmax", "lmax", lmax);
      set("--c", "c", c);
      set("--p", "p", p);
      set("--m1", "m1", m1);
      set("--m2", "m2", m2);
      if (app.count("--tol") > 0) params["tol"] = g.tol;
      if (g.format.empty()) g.format = cmd.default_format;
      write_outputs(g, cmd.name, run_operation(cmd.name, params, ctx));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
