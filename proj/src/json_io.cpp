#include "nuca/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "nuca/version.hpp"

namespace nuca {

namespace {

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const char* what) {
  if (!j.is_object()) throw SpecError(std::string(what) + " must be a JSON object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (item.key() == a) {
        ok = true;
        break;
      }
    if (!ok) throw SpecError("unknown key \"" + item.key() + "\" in " + what);
  }
}

const Json& require(const Json& j, const char* key, const char* what) {
  auto it = j.find(key);
  if (it == j.end()) throw SpecError(std::string(what) + " is missing key \"" + key + "\"");
  return *it;
}

std::int64_t get_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw SpecError(std::string(what) + " must be an integer");
  return j.get<std::int64_t>();
}

std::uint32_t get_small(const Json& j, const char* what, std::int64_t lo, std::int64_t hi) {
  std::int64_t v = get_int(j, what);
  if (v < lo || v > hi) throw SpecError(std::string(what) + " is out of range");
  return static_cast<std::uint32_t>(v);
}

Point point_from_json(const Json& j, std::uint32_t d, const char* what) {
  if (!j.is_array() || j.size() != d)
    throw SpecError(std::string(what) + " must be a length-" + std::to_string(d) + " integer list");
  Point g;
  for (const auto& c : j) {
    std::int64_t v = get_int(c, what);
    if (v < INT32_MIN || v > INT32_MAX) throw SpecError(std::string(what) + " coordinate overflow");
    g.push_back(static_cast<std::int32_t>(v));
  }
  return g;
}

Json point_to_json(const Point& g) {
  Json a = Json::array();
  for (auto c : g) a.push_back(c);
  return a;
}

Mat mat_from_json(const Json& j, std::uint32_t k, std::uint32_t p, const char* what) {
  if (!j.is_array() || j.size() != k)
    throw SpecError(std::string(what) + " must be a " + std::to_string(k) + "-row matrix");
  Mat m(k, k, p);
  for (std::uint32_t r = 0; r < k; ++r) {
    const Json& row = j[r];
    if (!row.is_array() || row.size() != k)
      throw SpecError(std::string(what) + " rows must have " + std::to_string(k) + " entries");
    for (std::uint32_t c = 0; c < k; ++c) m.set(r, c, residue(get_int(row[c], what), p));
  }
  return m;
}

Json mat_to_json(const Mat& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m.at(r, c));
    rows.push_back(row);
  }
  return rows;
}

LocalRule rule_from_json(const Json& j, const SiteList& memory, std::uint32_t d, std::uint32_t k,
                         std::uint32_t p) {
  std::string kind = require(j, "kind", "rule").get<std::string>();
  if (kind == "linear") {
    check_keys(j, {"kind", "coeffs"}, "linear rule");
    std::map<Point, Mat, PointLess> coeffs;
    const Json& co = require(j, "coeffs", "linear rule");
    if (!co.is_object()) throw SpecError("\"coeffs\" must map offset strings to matrices");
    for (const auto& item : co.items()) {
      Point off = point_from_string(item.key(), d);
      if (!site_contains(memory, off))
        throw SpecError("coefficient offset " + item.key() + " is outside the declared memory");
      coeffs.emplace(off, mat_from_json(item.value(), k, p, "coefficient matrix"));
    }
    return LocalRule{linear_rule_for(memory, coeffs, k, p)};
  }
  if (kind == "table") {
    check_keys(j, {"kind", "outputs"}, "table rule");
    const Json& out = require(j, "outputs", "table rule");
    if (!out.is_array()) throw SpecError("\"outputs\" must be a list of k-vectors");
    TableRule t;
    for (const auto& entry : out) {
      if (!entry.is_array() || entry.size() != k)
        throw SpecError("table outputs must be length-" + std::to_string(k) + " integer lists");
      std::vector<std::uint32_t> v;
      for (const auto& c : entry) v.push_back(residue(get_int(c, "table output"), p));
      t.outputs.push_back(std::move(v));
    }
    return LocalRule{std::move(t)};
  }
  throw SpecError("rule kind must be \"linear\" or \"table\"");
}

Json rule_to_json(const NucaSpec& spec, const LocalRule& rule) {
  Json j;
  if (rule.is_linear()) {
    j["kind"] = "linear";
    Json co = Json::object();
    const auto& coeffs = rule.linear().coeffs;
    for (std::size_t i = 0; i < spec.memory.size(); ++i)
      if (!coeffs[i].is_zero()) co[point_to_string(spec.memory[i])] = mat_to_json(coeffs[i]);
    j["coeffs"] = co;
  } else {
    j["kind"] = "table";
    Json out = Json::array();
    for (const auto& v : rule.table().outputs) out.push_back(v);
    j["outputs"] = out;
  }
  return j;
}

SparseInfo sparse_from_json(const Json& j, const SiteList& memory, std::uint32_t d,
                            std::uint32_t k, std::uint32_t p) {
  check_keys(j, {"clusters", "placement", "degree"}, "sparse descriptor");
  SparseInfo info;
  const Json& cls = require(j, "clusters", "sparse descriptor");
  if (!cls.is_array()) throw SpecError("\"clusters\" must be a list");
  for (const Json& cj : cls) {
    check_keys(cj, {"cells", "anchors", "infinite", "count"}, "cluster");
    ClusterType ct;
    const Json& cells = require(cj, "cells", "cluster");
    if (!cells.is_array() || cells.empty()) throw SpecError("cluster \"cells\" must be nonempty");
    for (const Json& cell : cells) {
      check_keys(cell, {"cell", "rule"}, "cluster cell");
      Point off = point_from_json(require(cell, "cell", "cluster cell"), d, "cluster offset");
      if (!ct.cells.emplace(off, rule_from_json(require(cell, "rule", "cluster cell"), memory, d, k, p)).second)
        throw SpecError("duplicate cluster offset " + point_to_string(off));
    }
    if (auto it = cj.find("anchors"); it != cj.end()) {
      if (!it->is_array()) throw SpecError("\"anchors\" must be a list");
      for (const Json& a : *it) ct.anchors.push_back(point_from_json(a, d, "anchor"));
    }
    if (auto it = cj.find("infinite"); it != cj.end()) {
      if (!it->is_boolean()) throw SpecError("\"infinite\" must be a boolean");
      ct.infinite = it->get<bool>();
    }
    if (auto it = cj.find("count"); it != cj.end())
      ct.count = static_cast<std::uint64_t>(get_int(*it, "\"count\""));
    info.clusters.push_back(std::move(ct));
  }
  const Json& pl = require(j, "placement", "sparse descriptor");
  if (pl.is_string() && pl.get<std::string>() == "promise") {
    info.placement = Placement::promise;
  } else if (pl.is_object()) {
    check_keys(pl, {"kind", "degree"}, "placement descriptor");
    std::string kind = require(pl, "kind", "placement descriptor").get<std::string>();
    if (kind == "polynomial") {
      info.placement = Placement::polynomial;
      info.degree = get_small(require(pl, "degree", "polynomial placement"), "\"degree\"", 2, 16);
    } else if (kind == "exponential") {
      info.placement = Placement::exponential;
    } else {
      throw SpecError("placement kind must be \"polynomial\" or \"exponential\"");
    }
  } else {
    throw SpecError("\"placement\" must be \"promise\" or a generator descriptor");
  }
  return info;
}

Json sparse_to_json(const NucaSpec& spec, const SparseInfo& info) {
  Json j;
  Json cls = Json::array();
  for (const ClusterType& ct : info.clusters) {
    Json cj;
    Json cells = Json::array();
    for (const auto& [off, rule] : ct.cells) {
      Json cell;
      cell["cell"] = point_to_json(off);
      cell["rule"] = rule_to_json(spec, rule);
      cells.push_back(cell);
    }
    cj["cells"] = cells;
    std::vector<Point> anchors = ct.anchors;
    std::sort(anchors.begin(), anchors.end(), PointLess{});
    Json aj = Json::array();
    for (const Point& a : anchors) aj.push_back(point_to_json(a));
    cj["anchors"] = aj;
    cj["infinite"] = ct.infinite;
    cj["count"] = ct.count;
    cls.push_back(cj);
  }
  j["clusters"] = cls;
  if (info.placement == Placement::promise) {
    j["placement"] = "promise";
  } else {
    Json pl;
    pl["kind"] = info.placement == Placement::polynomial ? "polynomial" : "exponential";
    if (info.placement == Placement::polynomial) pl["degree"] = info.degree;
    j["placement"] = pl;
  }
  return j;
}

}  // namespace

Point point_from_string(const std::string& s, std::uint32_t d) {
  if (s.size() < 2 || s.front() != '(' || s.back() != ')')
    throw SpecError("offset string \"" + s + "\" must look like \"(i)\" or \"(i,j)\"");
  Point g;
  std::stringstream in(s.substr(1, s.size() - 2));
  std::string tok;
  while (std::getline(in, tok, ',')) {
    std::size_t used = 0;
    long v;
    try {
      v = std::stol(tok, &used);
    } catch (const std::exception&) {
      throw SpecError("offset string \"" + s + "\" has a non-integer coordinate");
    }
    if (used != tok.size() || v < INT32_MIN || v > INT32_MAX)
      throw SpecError("offset string \"" + s + "\" has a bad coordinate");
    g.push_back(static_cast<std::int32_t>(v));
  }
  if (g.size() != d)
    throw SpecError("offset string \"" + s + "\" must have " + std::to_string(d) + " coordinates");
  return g;
}

NucaSpec spec_from_json(const Json& j) {
  check_keys(j, {"p", "k", "d", "memory", "base", "perturbations", "sparse"}, "spec");
  NucaSpec spec;
  spec.p = get_small(require(j, "p", "spec"), "\"p\"", 2, (1u << 30));
  spec.k = get_small(require(j, "k", "spec"), "\"k\"", 1, 64);
  spec.d = get_small(require(j, "d", "spec"), "\"d\"", 1, 4);
  const Json& mem = require(j, "memory", "spec");
  if (!mem.is_array() || mem.empty()) throw SpecError("\"memory\" must be a nonempty list");
  std::vector<Point> pts;
  for (const Json& m : mem) pts.push_back(point_from_json(m, spec.d, "memory offset"));
  spec.memory = sorted_unique(std::move(pts));

  LocalRule base = rule_from_json(require(j, "base", "spec"), spec.memory, spec.d, spec.k, spec.p);
  if (!base.is_linear()) throw SpecError("the base rule must be linear");
  spec.base = base.linear();

  if (auto it = j.find("perturbations"); it != j.end()) {
    if (!it->is_array()) throw SpecError("\"perturbations\" must be a list");
    for (const Json& pj : *it) {
      check_keys(pj, {"cell", "rule"}, "perturbation");
      Point cell = point_from_json(require(pj, "cell", "perturbation"), spec.d, "perturbed cell");
      if (!spec.perturbations
               .emplace(cell, rule_from_json(require(pj, "rule", "perturbation"), spec.memory,
                                             spec.d, spec.k, spec.p))
               .second)
        throw SpecError("perturbed cell " + point_to_string(cell) + " listed twice");
    }
  }
  if (auto it = j.find("sparse"); it != j.end() && !it->is_null())
    spec.sparse = sparse_from_json(*it, spec.memory, spec.d, spec.k, spec.p);
  return spec;
}

Json spec_to_json(const NucaSpec& raw) {
  NucaSpec spec = validate_spec(raw);
  Json j;
  j["p"] = spec.p;
  j["k"] = spec.k;
  j["d"] = spec.d;
  Json mem = Json::array();
  for (const Point& m : spec.memory) mem.push_back(point_to_json(m));
  j["memory"] = mem;
  j["base"] = rule_to_json(spec, LocalRule{spec.base});
  Json perts = Json::array();
  for (const auto& [cell, rule] : spec.perturbations) {
    Json pj;
    pj["cell"] = point_to_json(cell);
    pj["rule"] = rule_to_json(spec, rule);
    perts.push_back(pj);
  }
  j["perturbations"] = perts;
  j["sparse"] = spec.sparse ? sparse_to_json(spec, *spec.sparse) : Json(nullptr);
  return j;
}

Json config_to_json(const PatternConfig& x) {
  Json j;
  Json sup = Json::array();
  for (const auto& [cell, value] : x.support()) {
    Json e;
    e["cell"] = point_to_json(cell);
    e["value"] = value;
    sup.push_back(e);
  }
  j["support"] = sup;
  return j;
}

PatternConfig config_from_json(const Json& j, const NucaSpec& spec) {
  check_keys(j, {"support"}, "configuration");
  PatternConfig x(spec.p, spec.k, spec.d);
  const Json& sup = require(j, "support", "configuration");
  if (!sup.is_array()) throw SpecError("\"support\" must be a list");
  std::set<Point, PointLess> seen;
  for (const Json& e : sup) {
    check_keys(e, {"cell", "value"}, "support entry");
    Point cell = point_from_json(require(e, "cell", "support entry"), spec.d, "support cell");
    if (!seen.insert(cell).second)
      throw SpecError("support cell " + point_to_string(cell) + " listed twice");
    const Json& vj = require(e, "value", "support entry");
    if (!vj.is_array() || vj.size() != spec.k)
      throw SpecError("\"value\" must be a length-" + std::to_string(spec.k) + " integer list");
    std::vector<std::uint32_t> v;
    for (const auto& c : vj) v.push_back(residue(get_int(c, "support value"), spec.p));
    x.set(cell, std::move(v));
  }
  return x;
}

Json report_to_json(const DecisionReport& rep) {
  Json j;
  j["property"] = property_name(rep.property);
  j["verdict"] = rep.verdict;
  Json cert(nullptr);
  switch (rep.property) {
    case Property::nilpotent:
      if (rep.exponent) cert = Json{{"exponent", *rep.exponent}};
      break;
    case Property::periodic:
      if (rep.period) cert = Json{{"period", *rep.period}};
      break;
    case Property::eventually_periodic:
    case Property::cayley_hamilton:
      if (rep.preperiod && rep.period)
        cert = Json{{"preperiod", *rep.preperiod}, {"period", *rep.period}};
      break;
    case Property::injective:
    case Property::post_surjective:
      if (rep.verdict && rep.kernel_dimension)
        cert = Json{{"kernel_dimension", *rep.kernel_dimension}};
      else if (rep.verdict)
        cert = Json{{"kernel_dimension", 0}};
      if (!rep.verdict && rep.kernel_witness)
        cert = Json{{"kernel_witness", config_to_json(*rep.kernel_witness)}};
      break;
  }
  j["certificate"] = cert;
  Json diag = Json::object();
  for (const auto& [key, val] : rep.diagnostics) diag[key] = val;
  j["diagnostics"] = diag;
  j["tool_version"] = kToolVersion;
  return j;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

namespace {

Json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open \"" + path + "\"");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw SpecError("cannot parse \"" + path + "\": " + e.what());
  }
}

}  // namespace

NucaSpec load_spec_file(const std::string& path) {
  return validate_spec(spec_from_json(parse_file(path)));
}

PatternConfig load_config_file(const std::string& path, const NucaSpec& spec) {
  return config_from_json(parse_file(path), spec);
}

}  // namespace nuca
