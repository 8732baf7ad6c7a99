#pragma once

#include <map>
#include <string>
#include <vector>

#include "cutfn/rational.hpp"

namespace cutfn {

enum class Property {
  Subadditive,
  Symmetric,
  Minimal,
  TwoSlopeFacet,
  Valid,
  Structure,
  RecursiveDecomposition,
  NonPiecewiseLinear,
  FacetEvidence,
};

enum class WitnessKind {
  SubadditivityPair,
  SymmetryPoint,
  SlopeCount,
  ValueBound,
  StructureItem,
  DecompositionPoint,
  SegmentWitness,
  ChainLink,
};

// One checkable fact: the points in `data` plus the two sides of the violated
// or tight relation. Re-evaluating the relation at `data` reproduces lhs and
// rhs exactly.
struct Witness {
  WitnessKind kind = WitnessKind::SubadditivityPair;
  std::string label;
  std::vector<Rational> data;
  Rational lhs, rhs;
};

// Outcome of one property check. If holds is false, witnesses is nonempty and
// each witness reproduces a concrete violation; when holds, witnesses may
// carry tight or informational relations instead.
struct VerificationReport {
  Property property = Property::Subadditive;
  bool holds = false;
  std::map<std::string, Rational> summary;
  std::vector<Witness> witnesses;
};

const char* property_name(Property p);
const char* witness_kind_name(WitnessKind k);

}  // namespace cutfn
