#pragma once
// Structural consistency checks for scenarios. Violations are data: the
// checker never throws on a bad scenario.

#include <string>
#include <string_view>
#include <vector>

#include "sopra/model.hpp"

namespace sopra {

enum class ViolationClass {
  Cycle,               // activity graph or context hierarchy not acyclic
  Disjointness,        // one id with two kinds, or a reference of the wrong kind
  Typing,              // Abstract with PartOf child, Sequential with IsA child
  AtomicWithChildren,  // Atomic activity used as a parent
  DanglingReference,   // reference to an undeclared id or value
  ViewRange,           // a view/strength component outside [0,1]
  Multiplicity,        // duplicate declaration or duplicate connection key
  ContextHierarchy,    // parent of a different kind, or a parent on an activity
  ParameterRange,      // globals or agent parameters outside their ranges
  Structure,           // missing activities/roots, childless composite, bad root
};

std::string_view to_string(ViolationClass c);

struct Violation {
  ViolationClass cls;
  std::string message;
  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationClass c) const;
  // "<class>: <message>" per violation.
  std::vector<std::string> lines() const;
  bool operator==(const ValidationReport&) const = default;
};

// Works on unresolved documents, so dangling references and duplicate ids are
// reported instead of thrown.
ValidationReport validate_document(const ScenarioData& data);
ValidationReport validate_scenario(const Scenario& s);

}  // namespace sopra
