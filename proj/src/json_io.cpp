#include "digitlens/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace digitlens {

json load_json(const std::string& text_or_path) {
  const auto first = text_or_path.find_first_not_of(" \t\r\n");
  try {
    if (first != std::string::npos && (text_or_path[first] == '{' || text_or_path[first] == '[')) {
      return json::parse(text_or_path);
    }
    std::ifstream in(text_or_path);
    if (!in) throw Error("cannot open '" + text_or_path + "'");
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error("malformed JSON in '" + text_or_path.substr(0, 80) + "': " + e.what());
  }
}

namespace {

template <class T>
T get(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(std::string("bad field '") + key + "': " + e.what());
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? get<T>(j, key) : fallback;
}

std::optional<double> opt_double(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get<double>(j, key);
}

}  // namespace

DigitSystem digit_system_from_json(const json& j) {
  const int p = get<int>(j, "p");
  const int n = get_or<int>(j, "n", 1);
  const auto digits = get<std::vector<std::vector<int>>>(j, "digits");
  return DigitSystem(p, n, digits, get_or<int>(j, "l", 0));
}

ProductSystem product_system_from_json(const json& j) {
  const auto& f = j.at("factors");
  if (!f.is_array()) throw Error("'factors' must be an array");
  std::vector<DigitSystem> factors;
  for (const auto& e : f) factors.push_back(digit_system_from_json(e));
  return ProductSystem(std::move(factors));
}

ExponentFormSystem exponent_system_from_json(const json& j) {
  ExponentFormSystem s;
  s.root = get<int>(j, "root");
  s.exponent = get<long>(j, "exponent");
  s.digit_exponent = get<long>(j, "digit_exponent");
  s.dim = get_or<int>(j, "n", 1);
  if (s.root < 2 || s.exponent < 1 || s.digit_exponent < 0 || s.digit_exponent > s.exponent || s.dim < 1) {
    throw Error("exponent-form system needs root >= 2, exponent >= 1, 0 <= digit_exponent <= exponent, n >= 1");
  }
  return s;
}

AnySystem system_from_json(const json& j) {
  if (!j.is_object()) throw Error("system must be a JSON object");
  if (j.contains("factors")) return product_system_from_json(j);
  if (j.contains("root")) return exponent_system_from_json(j);
  return digit_system_from_json(j);
}

CellTree tree_of(const AnySystem& s) {
  if (const auto* d = std::get_if<DigitSystem>(&s)) return CellTree(*d);
  if (const auto* p = std::get_if<ProductSystem>(&s)) return CellTree(*p);
  throw Error("exponent-form systems have no enumerable cell tree");
}

int ambient_dim(const AnySystem& s) {
  return std::visit([](const auto& v) {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, ExponentFormSystem>) {
      return v.dim;
    } else {
      return v.dim();
    }
  }, s);
}

json to_json(const DigitSystem& s) {
  return {{"p", s.base()}, {"n", s.dim()}, {"digits", s.digits()}, {"l", s.free_prefix()}};
}

json to_json(const ProductSystem& s) {
  json f = json::array();
  for (const auto& d : s.factors()) f.push_back(to_json(d));
  return {{"factors", f}};
}

json to_json(const ExponentFormSystem& s) {
  return {{"root", s.root}, {"exponent", s.exponent}, {"digit_exponent", s.digit_exponent}, {"n", s.dim}};
}

SimilarityTransform transform_from_json(const json& j) {
  SimilarityTransform t;
  t.t = get_or<double>(j, "t", 1.0);
  t.v = get<std::vector<double>>(j, "v");
  const int n = static_cast<int>(t.v.size());
  if (j.contains("g")) {
    t.g = get<std::vector<std::vector<double>>>(j, "g");
  } else if (j.contains("angle")) {
    if (n != 2) throw Error("transform 'angle' is only meaningful in two dimensions");
    t.g = SimilarityTransform::rotation2d(get<double>(j, "angle")).g;
  } else {
    t.g = SimilarityTransform::identity(n).g;
  }
  t.validate();
  return t;
}

json to_json(const SimilarityTransform& t) { return {{"t", t.t}, {"v", t.v}, {"g", t.g}}; }

ManifoldSpec manifold_from_json(const json& j) {
  const auto kind = get<std::string>(j, "kind");
  const auto sigma = opt_double(j, "sigma");
  ManifoldSpec m = [&] {
    if (kind == "circle" || kind == "sphere") {
      return ManifoldSpec::circle(get<std::vector<double>>(j, "center"), get<double>(j, "radius"), sigma);
    }
    if (kind == "superellipse") return ManifoldSpec::superellipse(get<double>(j, "k"), sigma);
    if (kind == "hyperbola") return ManifoldSpec::hyperbola(get<double>(j, "r"), sigma);
    if (kind == "veronese") {
      return ManifoldSpec::veronese(get<int>(j, "n"), get_or<double>(j, "t0", 0.0), get_or<double>(j, "t1", 1.0),
                                    sigma);
    }
    if (kind == "segment") {
      return ManifoldSpec::segment(get<std::vector<double>>(j, "a"), get<std::vector<double>>(j, "b"));
    }
    if (kind == "implicit") {
      std::vector<Monomial> terms;
      for (const auto& t : j.at("terms")) terms.push_back({get<double>(t, "coef"), get<std::vector<int>>(t, "powers")});
      if (!sigma) throw Error("implicit manifolds need an explicit 'sigma'");
      return ManifoldSpec::implicit(get<int>(j, "n"), std::move(terms), get<int>(j, "dim"), *sigma,
                                    get_or<double>(j, "reach", 1.0));
    }
    throw Error("unsupported manifold kind '" + kind + "'");
  }();
  if (j.contains("dim") && get<int>(j, "dim") != m.dim()) {
    throw Error("manifold 'dim' does not match the intrinsic dimension of kind '" + kind + "'");
  }
  if (j.contains("transform")) m = apply_transform(m, transform_from_json(j.at("transform")));
  return m;
}

json to_json(const ManifoldSpec& m) {
  json j = std::visit([](const auto& s) -> json {
    using S = std::decay_t<decltype(s)>;
    if constexpr (std::is_same_v<S, Sphere>) return {{"center", s.center}, {"radius", s.radius}};
    if constexpr (std::is_same_v<S, Superellipse>) return {{"k", s.k}};
    if constexpr (std::is_same_v<S, Hyperbola>) return {{"r", s.r}};
    if constexpr (std::is_same_v<S, Veronese>) return {{"n", s.n}, {"t0", s.t0}, {"t1", s.t1}};
    if constexpr (std::is_same_v<S, Segment>) return {{"a", s.a}, {"b", s.b}};
    if constexpr (std::is_same_v<S, ImplicitPolynomial>) {
      json terms = json::array();
      for (const auto& t : s.terms) terms.push_back({{"coef", t.coef}, {"powers", t.powers}});
      return {{"terms", terms}, {"reach", s.reach}};
    }
  }, m.shape());
  j["kind"] = m.kind();
  j["sigma"] = m.sigma();
  j["dim"] = m.dim();
  j["ambient_dim"] = m.ambient_dim();
  if (m.transform()) j["transform"] = to_json(*m.transform());
  return j;
}

json to_json(const SupEnclosure& e) {
  return {{"lo", e.lo}, {"hi", e.hi}, {"argmax", e.argmax}, {"cells_explored", e.cells_explored},
          {"converged", e.converged}, {"factorized", e.factorized}, {"lipschitz", e.lipschitz}};
}

json to_json(const BoundReport& r) {
  return {{"method", to_string(r.method)},
          {"lower_bound", r.lower_bound},
          {"raw_bound", r.raw_bound},
          {"vacuous", r.vacuous},
          {"sup_f_enclosure", {r.sup_f_lo, r.sup_f_hi}},
          {"grid_cells_explored", r.grid_cells_explored},
          {"tolerance", r.tolerance},
          {"converged", r.converged}};
}

json to_json(const CountResult& r) {
  return {{"delta", r.delta},
          {"depth", r.depth},
          {"inside", r.inside},
          {"straddle", r.straddle},
          {"measure_lower", to_string(r.measure_lower)},
          {"measure_upper", to_string(r.measure_upper)},
          {"mlow", to_double(r.measure_lower)},
          {"mhigh", to_double(r.measure_upper)},
          {"nodes", r.nodes}};
}

json to_json(const ScalingFit& f) {
  json pts = json::array();
  for (const auto& p : f.points) pts.push_back({p.delta, p.value});
  return {{"points", pts}, {"exponent", f.exponent}, {"intercept", f.intercept}, {"r2", f.r2},
          {"residuals", f.residuals}};
}

json to_json(const ScalingReport& r) {
  json rows = json::array();
  for (const auto& c : r.rows) rows.push_back(to_json(c));
  json j = {{"rows", rows},
            {"ratios", r.ratios},
            {"decay_exponent", r.decay_exponent},
            {"target", r.target},
            {"ratio_spread", r.ratio_spread},
            {"degenerate", r.degenerate},
            {"note", r.note}};
  j["fit"] = r.fit ? to_json(*r.fit) : json(nullptr);
  return j;
}

json to_json(const SharpnessResult& r) {
  return {{"p", r.p},         {"k", r.k},         {"l", r.l},
          {"depth", r.depth}, {"delta", r.delta}, {"count", r.count},
          {"prediction", r.prediction}, {"c", r.c}, {"pass", r.pass},
          {"nodes", r.nodes}};
}

json to_json(const LSearchResult& r) {
  json levels = json::array();
  for (const auto& l : r.levels) {
    levels.push_back({{"l", l.l}, {"deltas", l.deltas}, {"counts", l.counts}, {"required", l.required},
                      {"pass", l.pass}});
  }
  return {{"applicable", r.applicable}, {"l", r.l ? json(*r.l) : json(nullptr)}, {"exponent", r.exponent},
          {"levels", levels}, {"note", r.note}};
}

json to_json(const SweepRow& r) {
  return {{"transform", to_json(r.transform)}, {"deltas", r.deltas}, {"ratios", r.ratios}, {"ratio", r.ratio},
          {"trend", r.trend}, {"bounded_away", r.bounded_away}};
}

json to_json(const HitRun& r) {
  return {{"first_bin", r.first}, {"last_bin", r.last}, {"lo", r.lo}, {"hi", r.hi}, {"length", r.length()},
          {"bins", r.bins()}};
}

json to_json(const CoverageReport& r) {
  json bins = json::array();
  for (const auto& b : r.bins) {
    json e = {{"lo", b.lo}, {"hi", b.hi}, {"status", to_string(b.status)}};
    if (b.witness) {
      e["witness"] = {to_string((*b.witness)[0]), to_string((*b.witness)[1])};
      e["value"] = b.witness_value;
    }
    bins.push_back(std::move(e));
  }
  json runs = json::array();
  std::size_t longest = 0;
  for (const auto& run : interval_detect(r)) {
    runs.push_back(to_json(run));
    longest = std::max(longest, run.bins());
  }
  return {{"map", r.map},
          {"target_interval", {r.a, r.b}},
          {"resolution", r.delta},
          {"depth", r.depth},
          {"bins", bins},
          {"hit_fraction", r.hit_fraction},
          {"runs", runs},
          {"longest_run_bins", longest},
          {"nodes", r.nodes}};
}

}  // namespace digitlens
