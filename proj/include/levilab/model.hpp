#ifndef LEVILAB_MODEL_HPP
#define LEVILAB_MODEL_HPP

#include <map>

#include "levilab/classify.hpp"

namespace levilab {

/// Position-annotated parse failure (strict mode: unknown keys are errors).
struct ModelError : std::runtime_error {
  int line;
  int column;
  ModelError(int ln, int col, const std::string& what)
      : std::runtime_error("line " + std::to_string(ln) + ", column " + std::to_string(col) +
                           ": " + what),
        line(ln),
        column(col) {}
};

/// Named object table parsed from a declarative model file. Records:
///   element / pl / pair          - lattice elements
///   sequence / witness           - indexed families
///   functional                   - members of the dual of c
///   operator                     - operator descriptions
///   opset                        - finite sets or the coordinate evaluations
///   family                       - sequence families for collective checks
///   catalog                      - test catalogs (default per space)
struct ModelTable {
  std::map<std::string, Element> elements;
  std::map<std::string, ElementSequence> sequences;  // witnesses included
  std::map<std::string, DualFunctionalC> functionals;
  std::map<std::string, OpPtr> operators;
  std::map<std::string, OperatorSet> opsets;
  std::map<std::string, SequenceFamily> families;
  std::map<std::string, TestCatalog> catalogs;

  const Element& element(const std::string& name) const;
  const ElementSequence& sequence(const std::string& name) const;
  const OpPtr& op(const std::string& name) const;
  const OperatorSet& opset(const std::string& name) const;
  const SequenceFamily& family(const std::string& name) const;
  const TestCatalog& catalog(const std::string& name) const;
};

ModelTable parse_model(const std::string& text);

/// Canonical rendering: parse(serialize(table)) reproduces the table and
/// serialize(parse(text)) is idempotent on canonical files.
std::string serialize_model(const ModelTable& table);

}  // namespace levilab

#endif  // LEVILAB_MODEL_HPP
