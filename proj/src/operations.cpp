#include "digitlens/operations.hpp"

#include "digitlens/fourier.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

namespace digitlens {

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

namespace {

const json& need(const json& p, const char* key) {
  if (!p.contains(key)) throw Error(std::string("missing parameter '") + key + "'");
  return p.at(key);
}

template <class T>
T param(const json& p, const char* key) {
  try {
    return need(p, key).get<T>();
  } catch (const json::exception& e) {
    throw Error(std::string("bad parameter '") + key + "': " + e.what());
  }
}

template <class T>
T param_or(const json& p, const char* key, T fallback) {
  return p.contains(key) ? param<T>(p, key) : fallback;
}

DigitSystem single_system(const json& p, const char* key = "system") {
  const AnySystem s = system_from_json(need(p, key));
  if (const auto* d = std::get_if<DigitSystem>(&s)) return *d;
  if (const auto* ps = std::get_if<ProductSystem>(&s); ps && ps->equal_bases()) return ps->flatten();
  throw Error(std::string("'") + key + "' must be a single-base digit system here");
}

// Two entries [k1, k2] mean the inclusive range; any other length is the list itself.
std::vector<int> ladder(const json& p, const char* key = "ladder") {
  const auto v = param<std::vector<int>>(p, key);
  if (v.size() != 2) return v;
  std::vector<int> ks;
  for (int k = v[0]; k <= v[1]; ++k) ks.push_back(k);
  if (ks.empty()) throw Error("empty ladder");
  return ks;
}

int depth_param(const json& p, const RunContext& ctx) {
  if (p.contains("depth")) return param<int>(p, "depth");
  if (ctx.depth >= 0) return ctx.depth;
  throw Error("missing parameter 'depth'");
}

std::vector<double> theta_param(const json& p, int n) {
  auto t = param_or<std::vector<double>>(p, "theta", std::vector<double>(static_cast<std::size_t>(n), 0.0));
  if (t.size() != static_cast<std::size_t>(n)) throw Error("theta must have one entry per dimension");
  return t;
}

std::string join(const std::vector<double>& v, char sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? std::string(1, sep) : "") + format_double(v[i]);
  return s;
}

CountOptions count_options(const RunContext& ctx) {
  CountOptions o;
  o.parallel = ctx.parallel;
  return o;
}

std::string count_csv(const std::vector<CountResult>& rows) {
  std::ostringstream os;
  os << "delta,depth,inside,straddle,mlow,mhigh\n";
  for (const auto& r : rows) {
    os << format_double(r.delta) << ',' << r.depth << ',' << r.inside << ',' << r.straddle << ','
       << format_double(to_double(r.measure_lower)) << ',' << format_double(to_double(r.measure_upper)) << '\n';
  }
  return os.str();
}

std::string cover_csv(const CoverageReport& r) {
  std::ostringstream os;
  os << "bin_lo,bin_hi,status\n";
  for (const auto& b : r.bins) os << format_double(b.lo) << ',' << format_double(b.hi) << ',' << to_string(b.status) << '\n';
  return os.str();
}

OperationResult op_dim(const json& p) {
  const AnySystem s = system_from_json(need(p, "system"));
  json r;
  if (const auto* e = std::get_if<ExponentFormSystem>(&s)) {
    const Rational d = hausdorff_dim_exact(*e);
    r = {{"dim", to_double(d)}, {"exact", to_string(d)}};
  } else if (const auto* d = std::get_if<DigitSystem>(&s)) {
    r = {{"dim", hausdorff_dim(*d)}};
  } else {
    r = {{"dim", hausdorff_dim(std::get<ProductSystem>(s))}};
  }
  return {r, "", 0};
}

OperationResult op_l1bound(const json& p, const RunContext& ctx) {
  const auto method = parse_bound_method(param_or<std::string>(p, "method", "algorithm"));
  const AnySystem s = system_from_json(need(p, "system"));
  BoundReport rep;
  if (const auto* e = std::get_if<ExponentFormSystem>(&s)) {
    if (method != BoundMethod::rectangle) throw Error("exponent-form systems only support the rectangle bound");
    rep = l1_lower_bound_rectangle(*e);
  } else {
    const DigitSystem d = single_system(p);
    switch (method) {
      case BoundMethod::algorithm: {
        SupOptions o;
        o.parallel = ctx.parallel;
        o.factorize = param_or<bool>(p, "factorize", true);
        rep = l1_lower_bound_algorithm(d, param_or<double>(p, "tol", ctx.tol), o);
        break;
      }
      case BoundMethod::crude: rep = l1_lower_bound_crude(d); break;
      case BoundMethod::rectangle: rep = l1_lower_bound_rectangle(d); break;
    }
  }
  return {to_json(rep), "", 0};
}

OperationResult op_fourier(const json& p, const RunContext& ctx) {
  const DigitSystem d = single_system(p);
  const auto xi = param<std::vector<double>>(p, "xi");
  if (xi.size() != static_cast<std::size_t>(d.dim())) throw Error("xi must have one entry per dimension");
  const auto v = fourier_transform(d, xi, param_or<double>(p, "tol", ctx.tol));
  return {{{"re", v.value.real()}, {"im", v.value.imag()}, {"abs", std::abs(v.value)},
           {"error_bound", v.error_bound}, {"terms", v.terms}},
          "",
          0};
}

OperationResult op_partialsum(const json& p, const RunContext& ctx) {
  const DigitSystem d = single_system(p);
  const std::string kind = param_or<std::string>(p, "kind", "l1");
  if (kind != "l1" && kind != "l2") throw Error("partial-sum kind must be l1 or l2");
  std::vector<int> ks;
  if (p.contains("ladder")) {
    ks = ladder(p);
  } else {
    ks = {p.contains("k") ? param<int>(p, "k") : std::max(ctx.depth, 0)};
  }
  const auto theta = theta_param(p, d.dim());
  const double term_tol = param_or<double>(p, "term_tol", 1e-10);
  std::ostringstream os;
  os << "k,theta,value,errbar\n";
  json rows = json::array();
  std::vector<ScalingPoint> pts;
  for (int k : ks) {
    const PartialSum s = kind == "l1" ? partial_sum_l1(d, k, theta, term_tol) : partial_sum_l2(d, k, term_tol);
    os << k << ',' << join(s.theta, ' ') << ',' << format_double(s.value) << ',' << format_double(s.errbar) << '\n';
    rows.push_back({{"k", k}, {"theta", s.theta}, {"value", s.value}, {"errbar", s.errbar}, {"terms", s.terms}});
    pts.push_back({std::pow(static_cast<double>(d.base()), -k), s.value});
  }
  json r = {{"kind", kind}, {"rows", rows}};
  if (pts.size() >= 3) {
    // Sum over |xi| < R grows like R^(n - s); s estimates the Fourier dimension.
    const auto fit = fit_exponent(pts);
    r["fit"] = to_json(fit);
    r["dim_estimate"] = d.dim() - fit.exponent;
    r["dim_H"] = hausdorff_dim(d);
  }
  return {r, os.str(), 0};
}

OperationResult op_count(const json& p, const RunContext& ctx) {
  const CellTree tree = tree_of(system_from_json(need(p, "system")));
  const ManifoldSpec m = manifold_from_json(need(p, "manifold"));
  const auto r = count_cells_near(tree, m, param<double>(p, "delta"), depth_param(p, ctx), count_options(ctx));
  return {to_json(r), count_csv({r}), r.nodes};
}

OperationResult op_scaling(const json& p, const RunContext& ctx) {
  const CellTree tree = tree_of(system_from_json(need(p, "system")));
  const ManifoldSpec m = manifold_from_json(need(p, "manifold"));
  const auto rep =
      neighborhood_measure_scaling(tree, m, ladder(p), param_or<int>(p, "depth_offset", 0), count_options(ctx));
  std::int64_t nodes = 0;
  for (const auto& r : rep.rows) nodes += r.nodes;
  return {to_json(rep), count_csv(rep.rows), nodes};
}

std::vector<SimilarityTransform> sweep_grid(const json& p, int n) {
  const json& g = need(p, "grid");
  std::vector<SimilarityTransform> grid;
  if (g.is_array()) {
    for (const auto& t : g) grid.push_back(transform_from_json(t));
  } else {
    // {"scales": [...], "v": [...]} or {"scales": [...], "centers": [[...], ...]}
    const auto scales = param<std::vector<double>>(g, "scales");
    std::vector<std::vector<double>> centers;
    if (g.contains("centers")) {
      centers = param<std::vector<std::vector<double>>>(g, "centers");
    } else {
      centers.push_back(param_or<std::vector<double>>(g, "v", std::vector<double>(static_cast<std::size_t>(n), 0.0)));
    }
    for (const auto& v : centers) {
      for (double t : scales) {
        SimilarityTransform s = SimilarityTransform::identity(n);
        s.t = t;
        s.v = v;
        s.validate();
        grid.push_back(s);
      }
    }
  }
  if (grid.empty()) throw Error("empty transform grid");
  return grid;
}

OperationResult op_sweep(const json& p, const RunContext& ctx) {
  const CellTree tree = tree_of(system_from_json(need(p, "system")));
  const ManifoldSpec m = manifold_from_json(need(p, "manifold"));
  SweepOptions o;
  o.depth_offset = param_or<int>(p, "depth_offset", 0);
  o.threshold = param_or<double>(p, "threshold", 1e-3);
  o.count = count_options(ctx);
  const auto rows = transform_sweep(tree, m, sweep_grid(p, tree.dim()), ladder(p), o);
  std::ostringstream os;
  os << "index,t,v,delta,ratio\n";
  json out = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].deltas.size(); ++j) {
      os << i << ',' << format_double(rows[i].transform.t) << ',' << join(rows[i].transform.v, ' ') << ','
         << format_double(rows[i].deltas[j]) << ',' << format_double(rows[i].ratios[j]) << '\n';
    }
    out.push_back(to_json(rows[i]));
  }
  return {{{"rows", out}}, os.str(), 0};
}

OperationResult op_lsearch(const json& p, const RunContext& ctx) {
  const DigitSystem d = single_system(p);
  const ManifoldSpec m = manifold_from_json(need(p, "manifold"));
  const auto r = l_search(d, m, ladder(p), param_or<double>(p, "c", 0.1), param_or<int>(p, "lmax", 4),
                          count_options(ctx));
  return {to_json(r), "", 0};
}

OperationResult op_sharpness(const json& p, const RunContext& ctx) {
  const int base = param<int>(p, "p");
  const int m1 = param<int>(p, "m1");
  const int m2 = param_or<int>(p, "m2", m1);
  const int k = param<int>(p, "k");
  const double c = param_or<double>(p, "c", 1.0);
  const auto ls = p.contains("l") && p.at("l").is_number() ? std::vector<int>{param<int>(p, "l")}
                                                             : param_or<std::vector<int>>(p, "ls", {1, 2, 3});
  std::ostringstream os;
  os << "l,delta,count,prediction\n";
  json rows = json::array();
  std::vector<ScalingPoint> pts;
  std::int64_t nodes = 0;
  bool all_pass = true;
  for (int l : ls) {
    const auto r = sharpness_first_row(base, m1, m2, k, l, c, count_options(ctx));
    os << l << ',' << format_double(r.delta) << ',' << r.count << ',' << format_double(r.prediction) << '\n';
    rows.push_back(to_json(r));
    if (r.count > 0 && l > 0) pts.push_back({r.delta, static_cast<double>(r.count)});
    nodes += r.nodes;
    all_pass = all_pass && r.pass;
  }
  const double s = std::log(m1 + 1.0) / std::log(static_cast<double>(base));
  const double target = (k - 1) * s / k;
  json r = {{"rows", rows}, {"target_slope", target}, {"all_pass", all_pass}};
  if (pts.size() >= 3) {
    const auto fit = fit_exponent(pts);
    r["fit"] = to_json(fit);
    r["slope"] = fit.exponent;
    r["slope_shortfall"] = std::max(0.0, target - fit.exponent);
  }
  return {r, os.str(), nodes};
}

std::pair<double, double> target_param(const json& p) {
  const auto t = param<std::vector<double>>(p, "target");
  if (t.size() != 2) throw Error("target must be [a, b]");
  return {t[0], t[1]};
}

CoverOptions cover_options(const RunContext& ctx) {
  CoverOptions o;
  o.parallel = ctx.parallel;
  return o;
}

OperationResult op_distset(const json& p, const RunContext& ctx) {
  const CellTree tree = tree_of(system_from_json(need(p, "system")));
  const auto pin = param<std::vector<double>>(p, "pin");
  if (pin.size() != 2) throw Error("pin must be a point in the plane");
  const auto [a, b] = target_param(p);
  const auto r = pinned_distance_cover(tree, {pin[0], pin[1]}, a, b, param<double>(p, "delta"), depth_param(p, ctx),
                                       cover_options(ctx));
  return {to_json(r), cover_csv(r), r.nodes};
}

OperationResult op_binary(const json& p, const RunContext& ctx, CoverMap map) {
  const DigitSystem A = single_system(p, "a");
  const DigitSystem B = p.contains("b") ? single_system(p, "b") : A;
  const auto [a, b] = target_param(p);
  const auto r = binary_map_cover(A, B, map, a, b, param<double>(p, "delta"), depth_param(p, ctx), cover_options(ctx));
  return {to_json(r), cover_csv(r), r.nodes};
}

// S_k(theta) <= (sup f)^k on sampled offsets.
OperationResult op_master(const json& p, const RunContext& ctx) {
  const DigitSystem d = single_system(p);
  const int samples = param_or<int>(p, "samples", 100);
  const int k_max = param_or<int>(p, "kmax", 4);
  const std::uint64_t seed = param_or<std::uint64_t>(p, "seed", ctx.seed);
  SupOptions so;
  so.parallel = ctx.parallel;
  so.tol = param_or<double>(p, "tol", ctx.tol);
  const auto sup = sup_f(d, so);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::ostringstream os;
  os << "k,theta,value,errbar,bound\n";
  std::int64_t checks = 0, violations = 0;
  double worst = -1.0;
  for (int s = 0; s < samples; ++s) {
    std::vector<double> theta(static_cast<std::size_t>(d.dim()));
    for (auto& t : theta) t = u(rng);
    for (int k = 0; k <= k_max; ++k) {
      if (std::pow(static_cast<double>(d.base()), d.dim() * k) > kPartialSumCap) break;
      const auto ps = partial_sum_l1(d, k, theta);
      const double bound = std::pow(sup.hi, k);
      ++checks;
      // The enumerated sum may exceed the bound only through its own truncation error.
      if (ps.value - ps.errbar > bound * (1.0 + 1e-12)) ++violations;
      worst = std::max(worst, (ps.value - ps.errbar) / bound);
      os << k << ',' << join(theta, ' ') << ',' << format_double(ps.value) << ',' << format_double(ps.errbar) << ','
         << format_double(bound) << '\n';
    }
  }
  return {{{"sup_f", to_json(sup)}, {"checks", checks}, {"violations", violations}, {"worst_ratio", worst},
           {"seed", seed}},
          os.str(),
          sup.cells_explored};
}

}  // namespace

OperationResult run_operation(const std::string& op, const json& params, const RunContext& ctx) {
  if (!params.is_object()) throw Error("operation parameters must be a JSON object");
  if (op == "dim") return op_dim(params);
  if (op == "l1bound") return op_l1bound(params, ctx);
  if (op == "fourier") return op_fourier(params, ctx);
  if (op == "partialsum") return op_partialsum(params, ctx);
  if (op == "count") return op_count(params, ctx);
  if (op == "scaling") return op_scaling(params, ctx);
  if (op == "sweep") return op_sweep(params, ctx);
  if (op == "lsearch") return op_lsearch(params, ctx);
  if (op == "sharpness") return op_sharpness(params, ctx);
  if (op == "distset") return op_distset(params, ctx);
  if (op == "sumset") return op_binary(params, ctx, CoverMap::sum);
  if (op == "prodset") return op_binary(params, ctx, CoverMap::product);
  if (op == "sqsumset") return op_binary(params, ctx, CoverMap::sum_of_squares);
  if (op == "master") return op_master(params, ctx);
  throw Error("unknown operation '" + op + "'");
}

}  // namespace digitlens
