#include "cutfn/json_io.hpp"

#include <fstream>
#include <sstream>

#include "cutfn/error.hpp"

namespace cutfn {

const char* property_name(Property p) {
  switch (p) {
    case Property::Subadditive: return "subadditive";
    case Property::Symmetric: return "symmetric";
    case Property::Minimal: return "minimal";
    case Property::TwoSlopeFacet: return "two-slope-facet";
    case Property::Valid: return "valid";
    case Property::Structure: return "structure";
    case Property::RecursiveDecomposition: return "recursive-decomposition";
    case Property::NonPiecewiseLinear: return "non-piecewise-linear";
    case Property::FacetEvidence: return "facet-evidence";
  }
  return "?";
}

const char* witness_kind_name(WitnessKind k) {
  switch (k) {
    case WitnessKind::SubadditivityPair: return "subadditivity-pair";
    case WitnessKind::SymmetryPoint: return "symmetry-point";
    case WitnessKind::SlopeCount: return "slope-count";
    case WitnessKind::ValueBound: return "value-bound";
    case WitnessKind::StructureItem: return "structure-item";
    case WitnessKind::DecompositionPoint: return "decomposition-point";
    case WitnessKind::SegmentWitness: return "segment-witness";
    case WitnessKind::ChainLink: return "chain-link";
  }
  return "?";
}

namespace {

void require_object(const ojson& j, const char* what,
                    std::initializer_list<const char*> fields) {
  if (!j.is_object())
    throw Error(std::string(what) + ": expected a JSON object");
  for (const char* f : fields)
    if (!j.contains(f))
      throw Error(std::string(what) + ": missing field \"" + f + "\"");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool known = false;
    for (const char* f : fields)
      if (key == f) known = true;
    if (!known)
      throw Error(std::string(what) + ": unknown field \"" + key + "\"");
  }
}

Rational rational_at(const ojson& j, const std::string& where) {
  if (!j.is_string())
    throw Error(where + ": expected a rational as a string");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const Error& e) {
    throw Error(where + ": " + e.what());
  }
}

std::vector<Rational> rational_array(const ojson& j, const std::string& name) {
  if (!j.is_array())
    throw Error(name + ": expected an array");
  std::vector<Rational> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(rational_at(j[i], name + "[" + std::to_string(i) + "]"));
  return out;
}

ojson rationals_to_json(const std::vector<Rational>& xs) {
  ojson a = ojson::array();
  for (const Rational& x : xs) a.push_back(x.str());
  return a;
}

}  // namespace

ojson function_to_json(const PwlFunction& f) {
  ojson j;
  j["breakpoints"] = rationals_to_json(f.breakpoints());
  j["values"] = rationals_to_json(f.values());
  return j;
}

PwlFunction function_from_json(const ojson& j) {
  require_object(j, "function", {"breakpoints", "values"});
  return PwlFunction(rational_array(j["breakpoints"], "breakpoints"),
                     rational_array(j["values"], "values"));
}

ojson schedule_to_json(const EpsilonSchedule& s) {
  ojson j;
  j["alpha"] = s.alpha().str();
  if (s.kind() == EpsilonSchedule::Kind::Geometric) {
    j["kind"] = "geometric";
    j["base"] = s.base().str();
    j["ratio"] = s.ratio().str();
  } else {
    j["kind"] = "explicit";
    j["epsilons"] = rationals_to_json(s.epsilons());
  }
  return j;
}

EpsilonSchedule schedule_from_json(const ojson& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw Error("schedule: expected an object with a \"kind\" string");
  std::string kind = j["kind"].get<std::string>();
  if (kind == "geometric") {
    require_object(j, "schedule", {"alpha", "kind", "base", "ratio"});
    return EpsilonSchedule::geometric(rational_at(j["alpha"], "alpha"),
                                      rational_at(j["base"], "base"),
                                      rational_at(j["ratio"], "ratio"));
  }
  if (kind == "explicit") {
    require_object(j, "schedule", {"alpha", "kind", "epsilons"});
    return EpsilonSchedule::explicit_list(
        rational_at(j["alpha"], "alpha"),
        rational_array(j["epsilons"], "epsilons"));
  }
  throw Error("schedule: unknown kind \"" + kind + "\"");
}

ojson report_to_json(const VerificationReport& r) {
  ojson j;
  j["property"] = property_name(r.property);
  j["holds"] = r.holds;
  ojson summary = ojson::object();
  for (const auto& [key, value] : r.summary) summary[key] = value.str();
  j["summary"] = std::move(summary);
  ojson ws = ojson::array();
  for (const Witness& w : r.witnesses) {
    ojson wj;
    wj["kind"] = witness_kind_name(w.kind);
    wj["label"] = w.label;
    wj["data"] = rationals_to_json(w.data);
    wj["lhs"] = w.lhs.str();
    wj["rhs"] = w.rhs.str();
    ws.push_back(std::move(wj));
  }
  j["witnesses"] = std::move(ws);
  return j;
}

ojson evaluation_to_json(const LimitEvaluation& e) {
  ojson j;
  j["point"] = e.point.str();
  if (e.mode == LimitEvaluation::Mode::Exact) {
    j["mode"] = "exact";
    j["value"] = e.value.str();
    j["segment_index"] = e.segment_index;
  } else {
    j["mode"] = "enclosure";
    j["lower"] = e.lower.str();
    j["upper"] = e.upper.str();
  }
  j["depth"] = e.depth;
  return j;
}

std::string dump_json(const ojson& j) { return j.dump(2) + "\n"; }

std::string read_text(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in)
    throw Error("cannot open " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out)
    throw Error("cannot open " + file.string() + " for writing");
  out << text;
  if (!out)
    throw Error("failed writing " + file.string());
}

namespace {

ojson parse_file(const std::filesystem::path& file) {
  try {
    return ojson::parse(read_text(file));
  } catch (const nlohmann::json::exception& e) {
    throw Error("failed to parse " + file.string() + ": " + e.what());
  }
}

}  // namespace

PwlFunction load_function(const std::filesystem::path& file) {
  try {
    return function_from_json(parse_file(file));
  } catch (const Error& e) {
    throw Error(file.string() + ": " + e.what());
  }
}

EpsilonSchedule load_schedule(const std::filesystem::path& file) {
  try {
    return schedule_from_json(parse_file(file));
  } catch (const Error& e) {
    throw Error(file.string() + ": " + e.what());
  }
}

}  // namespace cutfn
