#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "levilab/model.hpp"
#include "levilab/report.hpp"

namespace py = pybind11;
using namespace levilab;

namespace {

py::dict verdict_dict(const Verdict& v) {
  py::dict out;
  out["verdict"] = verdict_state_str(v.state);
  out["certificate"] = v.certificate ? py::object(py::str(certificate_str(*v.certificate)))
                                     : py::object(py::none());
  out["argument"] = v.argument;
  return out;
}

py::dict properties_dict(const PropertyVerdicts& v) {
  py::dict out;
  out["sigma_levi"] = verdict_dict(v.sigma_levi);
  out["quasi_c"] = verdict_dict(v.quasi_c);
  out["quasi"] = verdict_dict(v.quasi);
  out["scope"] = v.scope_note;
  py::list entries;
  for (const auto& e : v.quasi_c_evidence) {
    py::dict d;
    d["entry"] = e.entry;
    d["quasi_c"] = verdict_state_str(e.verdict.state);
    entries.append(d);
  }
  out["entries"] = entries;
  return out;
}

TestCatalog resolve_catalog(const ModelTable& table, const std::string& name, Space domain,
                            Index horizon) {
  if (!name.empty()) return table.catalog(name);
  return catalog_default(domain, horizon);
}

}  // namespace

PYBIND11_MODULE(_levilab, m) {
  m.doc() = "Exact certificates for collective order convergence and sigma-Levi operator classes";

  py::class_<ModelTable>(m, "Model")
      .def("serialize", [](const ModelTable& t) { return serialize_model(t); })
      .def("element_value",
           [](const ModelTable& t, const std::string& name, Index n) {
             const Element& e = t.element(name);
             if (const auto* s = std::get_if<SeqElement>(&e)) return rat_str(s->value_at(n));
             throw std::invalid_argument("element_value needs a sequence element");
           })
      .def("sequence_value",
           [](const ModelTable& t, const std::string& name, Index n, Index coordinate) {
             const Element e = t.sequence(name).eval_at(n);
             if (const auto* s = std::get_if<SeqElement>(&e))
               return rat_str(s->value_at(coordinate));
             if (const auto* r = std::get_if<Rat>(&e)) return rat_str(*r);
             throw std::invalid_argument("sequence_value needs a sequence-space family");
           });

  m.def("parse_model", [](const std::string& text) { return parse_model(text); },
        py::arg("text"));

  m.def(
      "check_convergence",
      [](const ModelTable& t, const std::string& seq, const std::string& limit,
         const std::string& witness, Index horizon) {
        return verdict_dict(check_order_convergence(t.sequence(seq), t.element(limit),
                                                    t.sequence(witness), horizon));
      },
      py::arg("model"), py::arg("sequence"), py::arg("limit"), py::arg("witness"),
      py::arg("horizon") = kDefaultHorizon);

  m.def(
      "check_cauchy",
      [](const ModelTable& t, const std::string& seq, const std::string& witness, Index horizon) {
        return verdict_dict(check_order_cauchy(t.sequence(seq), t.sequence(witness), horizon));
      },
      py::arg("model"), py::arg("sequence"), py::arg("witness"),
      py::arg("horizon") = kDefaultHorizon);

  m.def(
      "check_collective",
      [](const ModelTable& t, const std::string& family, const std::string& witness,
         Index horizon) {
        return verdict_dict(check_collective(t.family(family), t.sequence(witness), horizon));
      },
      py::arg("model"), py::arg("family"), py::arg("witness"),
      py::arg("horizon") = kDefaultHorizon);

  m.def(
      "check_decreasing_null",
      [](const ModelTable& t, const std::string& witness, Index horizon) {
        return verdict_dict(check_decreasing_null(t.sequence(witness), horizon));
      },
      py::arg("model"), py::arg("witness"), py::arg("horizon") = kDefaultHorizon);

  m.def(
      "classify",
      [](const ModelTable& t, const std::string& op, const std::string& catalog, Index horizon) {
        const OpPtr o = t.op(op);
        return properties_dict(
            classify_levi(*o, resolve_catalog(t, catalog, o->domain, horizon), horizon));
      },
      py::arg("model"), py::arg("op"), py::arg("catalog") = std::string(),
      py::arg("horizon") = kDefaultHorizon);

  m.def(
      "classify_set",
      [](const ModelTable& t, const std::string& set, const std::string& catalog, Index horizon) {
        const OperatorSet& s = t.opset(set);
        return properties_dict(
            classify_collective(s, resolve_catalog(t, catalog, s.domain, horizon), horizon));
      },
      py::arg("model"), py::arg("set"), py::arg("catalog") = std::string(),
      py::arg("horizon") = kDefaultHorizon);

  m.def(
      "paper_scenarios",
      [](Index horizon) {
        const ScenarioReport report = run_paper_scenarios(horizon);
        py::list scenarios;
        for (const auto& s : report.scenarios) {
          py::dict d;
          d["name"] = s.name;
          d["pass"] = s.pass;
          d["micros"] = s.micros;
          py::list claims;
          for (const auto& c : s.claims) {
            py::dict cd;
            cd["claim"] = c.claim;
            cd["pass"] = c.pass;
            cd["computed"] = c.computed;
            cd["certificate"] = c.certificate;
            cd["micros"] = c.micros;
            claims.append(cd);
          }
          d["claims"] = claims;
          scenarios.append(d);
        }
        py::dict out;
        out["all_pass"] = report.all_pass;
        out["scenarios"] = scenarios;
        return out;
      },
      py::arg("horizon") = kDefaultHorizon);

  py::register_exception<ModelError>(m, "ModelError");
  py::register_exception<WitnessInvalid>(m, "WitnessInvalid");
}
